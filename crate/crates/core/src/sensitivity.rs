//! Data perturbations `(ΔA, Δb, Δc)`, the feasible shift `x̂` of a solution
//! into the perturbed feasible set, and the resulting solution-sensitivity
//! bounds.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::certify::{violation_f, Certifier, CertifyError};
use crate::cone::{self, ConeError};
use crate::linalg::{self, DenseMatrix, LinalgError, PseudoInverse};
use crate::problem::{ProblemData, ProblemError, SolutionPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("perturbation too large: sigma_max(dA) = {sigma_da:e} exceeds {limit:e}")]
    PerturbationTooLarge { sigma_da: f64, limit: f64 },
    #[error("solution norm {norm:e} exceeds the bound B = {bound:e}")]
    NormBoundViolated { norm: f64, bound: f64 },
    #[error("shifted witness is not interior (margin {margin:e})")]
    WitnessMargin { margin: f64 },
    #[error("x_hat is outside K (margin {margin:e})")]
    NotInCone { margin: f64 },
    #[error("x_hat violates the perturbed constraints (residual {residual:e})")]
    Infeasible { residual: f64 },
    #[error("perturbation shape does not match the problem")]
    ShapeMismatch,
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Strictly feasible primal and dual points with their margins.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterWitness {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    /// Lower bound on the interior margins of `x0` and `c - Aᵀ y0`.
    pub rho: f64,
    pub xi: f64,
    /// Bound `B` on solution norms.
    pub norm_bound: f64,
}

impl SlaterWitness {
    /// Smallest of the two interior margins.
    pub fn margin(&self, data: &ProblemData) -> Result<f64, SensitivityError> {
        let px = cone::interior_margin(&data.spec, &self.x0)?;
        let pd = cone::interior_margin(&data.spec, &data.slack(&self.y0)?)?;
        Ok(px.min(pd))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub da: DenseMatrix,
    pub db: Vec<f64>,
    pub dc: Vec<f64>,
    /// `‖ΔA‖_op + ‖Δb‖ + ‖Δc‖`.
    pub norm: f64,
}

impl Perturbation {
    pub fn new(da: DenseMatrix, db: Vec<f64>, dc: Vec<f64>) -> Result<Self, SensitivityError> {
        if da.rows() != db.len() || da.cols() != dc.len() {
            return Err(SensitivityError::ShapeMismatch);
        }
        let norm = linalg::sigma_max(&da)? + linalg::norm(&db) + linalg::norm(&dc);
        Ok(Self { da, db, dc, norm })
    }

    pub fn zero(data: &ProblemData) -> Self {
        Self {
            da: DenseMatrix::zeros(data.m(), data.dim()),
            db: vec![0.0; data.m()],
            dc: vec![0.0; data.dim()],
            norm: 0.0,
        }
    }

    /// Gaussian direction normalized to `‖Δ‖ = 1`.
    pub fn random_unit<R: Rng + ?Sized>(
        data: &ProblemData,
        rng: &mut R,
    ) -> Result<Self, SensitivityError> {
        let (m, d) = (data.m(), data.dim());
        let mut draw =
            |k: usize| -> Vec<f64> { (0..k).map(|_| rng.sample(StandardNormal)).collect() };
        let da = DenseMatrix::from_row_major(m, d, draw(m * d))?;
        let db = draw(m);
        let dc = draw(d);
        let p = Self::new(da, db, dc)?;
        Ok(p.scaled(1.0 / p.norm))
    }

    /// `α Δ`. The norm scales exactly.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            da: self.da.scaled(alpha),
            db: linalg::scale(alpha, &self.db),
            dc: linalg::scale(alpha, &self.dc),
            norm: alpha.abs() * self.norm,
        }
    }

    /// `(A + ΔA, b + Δb, c + Δc)`.
    pub fn apply(&self, data: &ProblemData) -> Result<ProblemData, SensitivityError> {
        if self.da.rows() != data.m() || self.da.cols() != data.dim() {
            return Err(SensitivityError::ShapeMismatch);
        }
        Ok(ProblemData::new(
            data.spec.clone(),
            data.a.add(&self.da)?,
            linalg::add(&data.b, &self.db),
            linalg::add(&data.c, &self.dc),
        )?)
    }
}

/// The point `x̂ = (1-α)(x⋆ + d) + α x₀′`, feasible for the perturbed problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleShift {
    pub xhat: Vec<f64>,
    pub alpha: f64,
    /// `‖x̂ - x⋆‖`.
    pub delta_x_norm: f64,
    /// `d = (A′)^†(Δb - ΔA x⋆)`.
    pub d_norm: f64,
    pub x0_prime: Vec<f64>,
    /// Interior radius actually used, `min(ρ, margin(x₀′))`.
    pub rho_eff: f64,
    /// `c′` with `‖Δx‖ ≤ c′ (‖Δb‖ + ‖ΔA‖_op)`.
    pub c_prime: f64,
    /// `σ_max((A′)^†)`.
    pub pinv_norm: f64,
    /// `2/σ_{min>0}(A)`.
    pub pinv_guard: f64,
    /// `‖A′ x̂ - b′‖`.
    pub residual: f64,
    pub margin: f64,
}

/// Builds `x̂`. Requires `σ_max(ΔA) ≤ σ_{min>0}(A)/2`.
pub fn feasible_shift_xhat(
    data: &ProblemData,
    pert: &Perturbation,
    x_star: &[f64],
    witness: &SlaterWitness,
) -> Result<FeasibleShift, SensitivityError> {
    let sigma = linalg::sigma_min_positive(&data.a)?;
    let sigma_da = linalg::sigma_max(&pert.da)?;
    if sigma_da > sigma / 2.0 {
        return Err(SensitivityError::PerturbationTooLarge {
            sigma_da,
            limit: sigma / 2.0,
        });
    }
    let perturbed = pert.apply(data)?;
    let pinv = PseudoInverse::new(&perturbed.a)?;
    let shift_of = |x: &[f64]| -> Result<Vec<f64>, SensitivityError> {
        let rhs = linalg::sub(&pert.db, &pert.da.matvec(x)?);
        Ok(pinv.apply_unchecked(&rhs)?)
    };
    let d = shift_of(x_star)?;
    let d_norm = linalg::norm(&d);
    let x0_prime = linalg::add(&witness.x0, &shift_of(&witness.x0)?);
    let rho_eff = witness
        .rho
        .min(cone::interior_margin(&data.spec, &x0_prime)?);
    if rho_eff <= 0.0 {
        return Err(SensitivityError::WitnessMargin { margin: rho_eff });
    }
    let alpha = d_norm / (rho_eff + d_norm);
    let xhat: Vec<f64> = if d_norm == 0.0 {
        x_star.to_vec()
    } else {
        x_star
            .iter()
            .zip(&d)
            .zip(&x0_prime)
            .map(|((xs, di), x0)| (1.0 - alpha) * (xs + di) + alpha * x0)
            .collect()
    };
    let scale = 1.0 + linalg::norm(&perturbed.b);
    let residual = linalg::norm(&perturbed.residual(&xhat)?);
    if residual > 1e-8 * scale {
        return Err(SensitivityError::Infeasible { residual });
    }
    let margin = cone::interior_margin(&data.spec, &xhat)?;
    if margin < -1e-9 * linalg::norm(&xhat).max(1.0) {
        return Err(SensitivityError::NotInCone { margin });
    }
    let pinv_guard = 2.0 / sigma;
    let drift = linalg::norm(&linalg::sub(&x0_prime, x_star));
    Ok(FeasibleShift {
        delta_x_norm: linalg::norm(&linalg::sub(&xhat, x_star)),
        xhat,
        alpha,
        d_norm,
        x0_prime,
        rho_eff,
        c_prime: pinv_guard * linalg::norm(x_star).max(1.0) * (1.0 + drift / rho_eff),
        pinv_norm: pinv.norm(),
        pinv_guard,
        residual,
        margin,
    })
}

/// Bounds on the original-problem errors of a perturbed solution `x⋆′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataSideBounds {
    /// `‖Δb‖ + ‖ΔA‖_op B ≥ ‖A x⋆′ - b‖`.
    pub lin_bound: f64,
    /// `≥ ε_opt(x⋆′)`.
    pub opt_bound: f64,
    pub norm_bound: f64,
}

/// With `x⋆′` the opt bound is `⟨Δc, x̂ - x⋆′⟩ + ⟨c, x̂ - x⋆⟩`; without it
/// `⟨Δc, x̂ - x⋆′⟩` is replaced by `‖Δc‖(‖x̂‖ + B)`.
pub fn data_side_bounds(
    data: &ProblemData,
    pert: &Perturbation,
    x_star: &[f64],
    shift: &FeasibleShift,
    x_star_prime: Option<&[f64]>,
    norm_bound: f64,
) -> Result<DataSideBounds, SensitivityError> {
    let sigma_da = linalg::sigma_max(&pert.da)?;
    let lin_bound = linalg::norm(&pert.db) + sigma_da * norm_bound;
    let dx = linalg::sub(&shift.xhat, x_star);
    let change = match x_star_prime {
        Some(xp) => {
            let n = linalg::norm(xp);
            if n > norm_bound * (1.0 + 1e-12) {
                return Err(SensitivityError::NormBoundViolated {
                    norm: n,
                    bound: norm_bound,
                });
            }
            linalg::dot(&pert.dc, &linalg::sub(&shift.xhat, xp))
        }
        None => linalg::norm(&pert.dc) * (linalg::norm(&shift.xhat) + norm_bound),
    };
    Ok(DataSideBounds {
        lin_bound,
        opt_bound: change + linalg::dot(&data.c, &dx),
        norm_bound,
    })
}

/// Solution-sensitivity summary for one perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub delta_norm: f64,
    pub bounds: DataSideBounds,
    pub shift: FeasibleShift,
    /// `p′`, equal to the error-bound exponent.
    pub exponent: u32,
    /// `D^{p′}` where `D` bounds `‖x⋆′ - x⋆‖`; `None` if non-constructive.
    pub ssb_rhs: Option<f64>,
    pub dist_bound: Option<f64>,
    pub measured_dist: Option<f64>,
    pub measured_eps_opt: Option<f64>,
    pub measured_lin: Option<f64>,
    pub notes: Vec<String>,
}

/// Combines [`feasible_shift_xhat`], [`data_side_bounds`] and the error bound of
/// the unperturbed problem.
///
/// `x⋆′` is a point in `K`, so the error bound gives
/// `‖x⋆′ - x⋆‖ ≤ κ Σ_j f_j(ε̄, B) + γ lin_bound` with
/// `ε̄ = opt_bound + ‖y⋆‖ lin_bound ≥ ⟨s⋆, x⋆′⟩`.
pub fn sensitivity_report(
    cert: &Certifier<'_>,
    data: &ProblemData,
    pair: &SolutionPair,
    pert: &Perturbation,
    witness: &SlaterWitness,
    x_star_prime: Option<&[f64]>,
    norm_bound: Option<f64>,
) -> Result<SensitivityReport, SensitivityError> {
    let (x_star, y_star) = (&pair.x[..], &pair.y[..]);
    let mut notes = Vec::new();
    let b = norm_bound.unwrap_or_else(|| {
        notes.push("B defaulted to 2|x_star|".to_string());
        2.0 * linalg::norm(x_star)
    });
    let shift = feasible_shift_xhat(data, pert, x_star, witness)?;
    let bounds = data_side_bounds(data, pert, x_star, &shift, x_star_prime, b)?;
    let exponent = cert.exponent();
    let gk = cert.gamma_kappa();
    let (ssb_rhs, dist_bound) = match (gk.gamma, gk.kappa) {
        (Some(g), Some(k)) => {
            let eps_bar = (bounds.opt_bound + linalg::norm(y_star) * bounds.lin_bound).max(0.0);
            let face = cert.face();
            let mut f = 0.0;
            for (slack, bf) in face.slack().iter().zip(face.blocks()) {
                f += violation_f(slack, bf, eps_bar, Some(b))?;
            }
            let d = k * f + g * bounds.lin_bound;
            (Some(d.powi(exponent as i32)), Some(d))
        }
        _ => {
            notes.push(
                "non-constructive certificate; only measured quantities reported".to_string(),
            );
            (None, None)
        }
    };
    let (measured_dist, measured_eps_opt, measured_lin) = match x_star_prime {
        Some(xp) => (
            Some(linalg::norm(&linalg::sub(xp, x_star))),
            Some(linalg::dot(&data.c, xp) - linalg::dot(&data.c, x_star)),
            Some(linalg::norm(&data.residual(xp)?)),
        ),
        None => (None, None, None),
    };
    Ok(SensitivityReport {
        delta_norm: pert.norm,
        bounds,
        shift,
        exponent,
        ssb_rhs,
        dist_bound,
        measured_dist,
        measured_eps_opt,
        measured_lin,
        notes,
    })
}
