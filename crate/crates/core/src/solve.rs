//! Desk-scale numerical helpers: Dykstra projection onto `{A x = b} ∩ K` and a
//! plain ADMM solver for `min ⟨c, x⟩ s.t. A x = b, x ∈ K`.

use thiserror::Error;

use crate::cone::{self, ConeError};
use crate::linalg::{self, LinalgError, PseudoInverse};
use crate::problem::{ProblemData, ProblemError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("no convergence after {} iterations (primal {:.3e}, dual {:.3e}, gap {:.3e})",
        .0.residuals.iterations, .0.residuals.primal, .0.residuals.dual, .0.residuals.gap)]
    NoConvergence(Box<ConicSolution>),
    #[error("starting point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub primal_tol: f64,
    pub dual_tol: f64,
    pub gap_tol: f64,
    /// ADMM penalty.
    pub rho: f64,
    /// Residuals are evaluated every `check_every` iterations.
    pub check_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            primal_tol: 1e-9,
            dual_tol: 1e-9,
            gap_tol: 1e-9,
            rho: 1.0,
            check_every: 10,
        }
    }
}

/// Result of [`project_feasible`]. The point always lies in `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub x: Vec<f64>,
    /// `‖A x - b‖`.
    pub lin_residual: f64,
    pub cone_margin: f64,
    /// Last change between successive cone iterates.
    pub change: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean projection onto `{A x = b} ∩ K` by Dykstra's algorithm.
///
/// Stops once the cone iterate moves less than `primal_tol · max(1, ‖x0‖)`
/// and has linear residual below the same threshold. Hitting the iteration
/// cap is not an error; inspect `converged`.
pub fn project_feasible(
    data: &ProblemData,
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<Projection, SolveError> {
    let pinv = PseudoInverse::new(&data.a)?;
    project_feasible_with(data, &pinv, x0, opts)
}

/// As [`project_feasible`] with a precomputed pseudoinverse of `A`.
pub fn project_feasible_with(
    data: &ProblemData,
    pinv: &PseudoInverse,
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<Projection, SolveError> {
    if x0.len() != data.dim() {
        return Err(SolveError::DimensionMismatch {
            expected: data.dim(),
            found: x0.len(),
        });
    }
    data.spec.check_point(x0)?;
    let thr = opts.primal_tol * linalg::norm(x0).max(1.0);
    let affine = |v: &[f64]| -> Result<Vec<f64>, SolveError> {
        let r = data.residual(v)?;
        Ok(linalg::sub(v, &pinv.apply_unchecked(&r)?))
    };
    let dim = data.dim();
    let mut x = x0.to_vec();
    let mut p = vec![0.0; dim];
    let mut q = vec![0.0; dim];
    let mut change = f64::INFINITY;
    let mut lin = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let y = affine(&linalg::add(&x, &p))?;
        for i in 0..dim {
            p[i] += x[i] - y[i];
        }
        let yq = linalg::add(&y, &q);
        let next = cone::proj_cone(&data.spec, &yq)?;
        q = linalg::sub(&yq, &next);
        change = linalg::norm(&linalg::sub(&next, &x));
        x = next;
        lin = linalg::norm(&data.residual(&x)?);
        if change <= thr && lin <= thr {
            break;
        }
    }
    Ok(Projection {
        cone_margin: cone::interior_margin(&data.spec, &x)?,
        converged: change <= thr && lin <= thr,
        x,
        lin_residual: lin,
        change,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `‖A x - b‖`.
    pub primal: f64,
    /// `dist(s, K*)`.
    pub dual: f64,
    /// `|⟨c, x⟩ - ⟨b, y⟩|`.
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `c - Aᵀ y`.
    pub s: Vec<f64>,
    pub residuals: Residuals,
}

/// ADMM on `min ⟨c,x⟩ + 1{Ax=b}(x) + 1{K}(z)` subject to `x = z`.
///
/// The dual is recovered from the scaled multiplier: `s ≈ -ρ u`, then
/// `y = (Aᵀ)^†(c - s)` and `s = c - Aᵀ y`. Convergence requires all three
/// residuals below their tolerances, scaled by `1 + ‖b‖`, `1 + ‖c‖` and
/// `1 + |⟨c,x⟩| + |⟨b,y⟩|`.
pub fn solve_conic(data: &ProblemData, opts: &SolveOptions) -> Result<ConicSolution, SolveError> {
    let pinv = PseudoInverse::new(&data.a)?;
    let dim = data.dim();
    let rho = opts.rho;
    let affine = |v: &[f64]| -> Result<Vec<f64>, SolveError> {
        let r = data.residual(v)?;
        Ok(linalg::sub(v, &pinv.apply_unchecked(&r)?))
    };
    let nb = 1.0 + linalg::norm(&data.b);
    let nc = 1.0 + linalg::norm(&data.c);
    let mut z = vec![0.0; dim];
    let mut u = vec![0.0; dim];
    let mut last = None;
    for it in 1..=opts.max_iters {
        let v: Vec<f64> = (0..dim).map(|i| z[i] - u[i] - data.c[i] / rho).collect();
        let x = affine(&v)?;
        let xu = linalg::add(&x, &u);
        z = cone::proj_cone(&data.spec, &xu)?;
        for i in 0..dim {
            u[i] = xu[i] - z[i];
        }
        if it % opts.check_every.max(1) != 0 && it != opts.max_iters {
            continue;
        }
        let s_est = linalg::scale(-rho, &u);
        let y = pinv.apply_adjoint(&linalg::sub(&data.c, &s_est))?;
        let s = data.slack(&y)?;
        let primal = linalg::norm(&data.residual(&z)?);
        let dual = linalg::norm(&linalg::sub(&s, &cone::proj_cone(&data.spec, &s)?));
        let (p, d) = (linalg::dot(&data.c, &z), linalg::dot(&data.b, &y));
        let gap = (p - d).abs();
        let sol = ConicSolution {
            x: z.clone(),
            y,
            s,
            residuals: Residuals {
                primal,
                dual,
                gap,
                iterations: it,
            },
        };
        if primal <= opts.primal_tol * nb
            && dual <= opts.dual_tol * nc
            && gap <= opts.gap_tol * (1.0 + p.abs() + d.abs())
        {
            return Ok(sol);
        }
        last = Some(sol);
    }
    match last {
        Some(sol) => Err(SolveError::NoConvergence(Box::new(sol))),
        None => Err(SolveError::NoConvergence(Box::new(ConicSolution {
            x: z,
            y: vec![0.0; data.m()],
            s: data.c.clone(),
            residuals: Residuals {
                primal: f64::INFINITY,
                dual: f64::INFINITY,
                gap: f64::INFINITY,
                iterations: 0,
            },
        }))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{svec, svec_index, ConeSpec};
    use crate::linalg::DenseMatrix;

    fn toy_lp() -> ProblemData {
        ProblemData::new(
            ConeSpec::nonneg(2).unwrap(),
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1.0],
            vec![1.0, 0.0],
        )
        .unwrap()
    }

    fn z2(n: usize) -> ProblemData {
        let spec = ConeSpec::psd(n).unwrap();
        let mut a = DenseMatrix::zeros(n, spec.dim());
        for i in 0..n {
            a[(i, svec_index(n, i, i))] = 1.0;
        }
        let mut c = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] = -1.0;
            }
        }
        let c = svec(&c).unwrap();
        ProblemData::new(spec, a, vec![1.0; n], c).unwrap()
    }

    #[test]
    fn projection_fixed_point() {
        let data = toy_lp();
        let p = project_feasible(&data, &[0.25, 0.75], &SolveOptions::default()).unwrap();
        assert!(p.converged);
        assert!(linalg::norm(&linalg::sub(&p.x, &[0.25, 0.75])) < 1e-9);
    }

    #[test]
    fn projection_toy_lp() {
        let data = toy_lp();
        let p = project_feasible(&data, &[1.0, 1.0], &SolveOptions::default()).unwrap();
        assert!(p.converged && p.lin_residual <= 1e-8 && p.cone_margin >= -1e-8);
        assert!((p.x[0] - 0.5).abs() < 1e-8 && (p.x[1] - 0.5).abs() < 1e-8);
        // corner case: nearest feasible point is a vertex
        let p = project_feasible(&data, &[-1.0, 3.0], &SolveOptions::default()).unwrap();
        assert!(p.x[0].abs() < 1e-8 && (p.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn projection_z2() {
        let n = 4;
        let data = z2(n);
        let mut x0 = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                x0[(i, j)] = 1.0 + 0.1 * (((i * 7 + j * 7 + i * j) % 5) as f64 - 2.0);
            }
        }
        let p = project_feasible(&data, &svec(&x0).unwrap(), &SolveOptions::default()).unwrap();
        assert!(p.converged);
        for i in 0..n {
            assert!((p.x[svec_index(n, i, i)] - 1.0).abs() < 1e-8);
        }
        assert!(p.cone_margin >= -1e-8);
    }

    #[test]
    fn solve_toy_lp() {
        let sol = solve_conic(&toy_lp(), &SolveOptions::default()).unwrap();
        assert!(sol.x[0].abs() < 1e-6 && (sol.x[1] - 1.0).abs() < 1e-6);
        assert!(sol.y[0].abs() < 1e-6);
        assert!((sol.s[0] - 1.0).abs() < 1e-6 && sol.s[1].abs() < 1e-6);
    }

    #[test]
    fn solve_z2() {
        let n = 4;
        let data = z2(n);
        let sol = solve_conic(&data, &SolveOptions::default()).unwrap();
        assert!((linalg::dot(&data.c, &sol.x) + 16.0).abs() < 1e-5);
        let x = crate::cone::smat(n, &sol.x).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((x[(i, j)] - 1.0).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let data = z2(3);
        let a = solve_conic(&data, &SolveOptions::default()).unwrap();
        let b = solve_conic(&data, &SolveOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iteration_cap_reports_residuals() {
        let opts = SolveOptions {
            max_iters: 3,
            ..SolveOptions::default()
        };
        match solve_conic(&z2(4), &opts) {
            Err(SolveError::NoConvergence(sol)) => assert_eq!(sol.residuals.iterations, 3),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
