//! Error metrics, the violation-of-complementarity function `f`, the
//! constants `γ`, `κ`, and the resulting distance bounds.
//!
//! Every bound here is for `dist(x, X⋆)` where `X⋆` is the primal solution set
//! and `(x⋆, y⋆, s⋆)` a strictly complementary pair. Numeric bounds are only
//! produced when `X⋆` is a singleton, detected via `σ_min(A|V) > tol`.

use thiserror::Error;

use crate::cone::{self, BlockKind, ConeError};
use crate::facial::{
    build_face, check_dsc, check_sc_algebraic, BlockFace, DscVerdict, FaceDescriptor, FaceError,
    ScVerdict, SlackBlock, SlackClass, FACE_TOL,
};
use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::problem::{ProblemData, ProblemError, SolutionPair};

/// Relative tolerance on `|⟨c,x⋆⟩ - ⟨b,y⋆⟩|`.
pub const DUALITY_TOL: f64 = 1e-8;

/// `σ_min(A|V)` at or below this means the solution set is not certified unique.
pub const SINGLETON_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("solution pair fails strong duality: gap {gap:e} at scale {scale:e}")]
    StrongDuality { gap: f64, scale: f64 },
    #[error("block {block} needs a norm term for f")]
    MissingNorm { block: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Support/rank threshold used to build the face.
    pub face_tol: f64,
    /// Threshold for the relint and algebraic strict complementarity checks.
    pub sc_tol: f64,
    pub singleton_tol: f64,
    /// Optional bound `B ≥ ‖x‖` that replaces the point's own norm inside `f`.
    pub norm_bound: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            face_tol: FACE_TOL,
            sc_tol: 1e-8,
            singleton_tol: SINGLETON_TOL,
            norm_bound: None,
        }
    }
}

/// Optimality, feasibility and complementarity errors of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMetrics {
    /// `⟨c, x⟩ - p⋆`.
    pub eps_opt: f64,
    /// `A x - b`.
    pub lin_infeas: Vec<f64>,
    pub lin_infeas_norm: f64,
    /// `x₋ = x - P_K(x)`.
    pub conic_infeas: Vec<f64>,
    pub conic_infeas_norm: f64,
    /// `x₊ = P_K(x)`.
    pub conic_part: Vec<f64>,
    /// `ε(x₊) = ⟨s⋆, x₊⟩`.
    pub comp_error: f64,
}

/// Fails when the pair is not (numerically) a zero-gap pair.
pub fn check_strong_duality(data: &ProblemData, pair: &SolutionPair) -> Result<f64, CertifyError> {
    let (gap, scale) = pair.duality_gap(data);
    if gap > DUALITY_TOL * scale {
        return Err(CertifyError::StrongDuality { gap, scale });
    }
    Ok(linalg::dot(&data.c, &pair.x))
}

pub fn error_metrics(
    data: &ProblemData,
    pair: &SolutionPair,
    x: &[f64],
) -> Result<ErrorMetrics, CertifyError> {
    let p_star = check_strong_duality(data, pair)?;
    metrics_with(data, pair, p_star, x)
}

fn metrics_with(
    data: &ProblemData,
    pair: &SolutionPair,
    p_star: f64,
    x: &[f64],
) -> Result<ErrorMetrics, CertifyError> {
    if x.len() != data.dim() {
        return Err(CertifyError::DimensionMismatch {
            expected: data.dim(),
            found: x.len(),
        });
    }
    data.spec.check_point(x)?;
    let lin = data.residual(x)?;
    let (xp, xm) = cone::moreau_split(&data.spec, x)?;
    Ok(ErrorMetrics {
        eps_opt: linalg::dot(&data.c, x) - p_star,
        lin_infeas_norm: linalg::norm(&lin),
        lin_infeas: lin,
        conic_infeas_norm: linalg::norm(&xm),
        comp_error: linalg::dot(&pair.s, &xp),
        conic_infeas: xm,
        conic_part: xp,
    })
}

/// `ε(x₊) = ε_opt(x) + ⟨y⋆, b - A x⟩ - ⟨s⋆, x₋⟩`, returned as its three addends.
pub fn decompose_eps(metrics: &ErrorMetrics, pair: &SolutionPair) -> (f64, f64, f64) {
    (
        metrics.eps_opt,
        -linalg::dot(&pair.y, &metrics.lin_infeas),
        -linalg::dot(&pair.s, &metrics.conic_infeas),
    )
}

/// Bound on `‖P_{V⊥}(x)‖` for `x ∈ K` on one block, given `eps = ⟨s⋆, x⟩` and
/// `norm_x` (`‖x‖₂` for SOC, `‖X‖_op` for PSD).
pub fn violation_f(
    slack: &SlackBlock,
    face: &BlockFace,
    eps: f64,
    norm_x: Option<f64>,
) -> Result<f64, CertifyError> {
    let eps = eps.max(0.0);
    match slack.class {
        SlackClass::Zero => Ok(0.0),
        SlackClass::Interior => Ok(slack.c_star.unwrap_or(0.0) * eps),
        SlackClass::Boundary => match face {
            BlockFace::Orthant { .. } => Ok(eps / slack.s_min_pos.expect("boundary LP slack")),
            BlockFace::Ray { .. } => {
                let nx = norm_x.ok_or(CertifyError::MissingNorm { block: 0 })?;
                Ok((2.0 * std::f64::consts::SQRT_2 * nx * eps / slack.s_norm).sqrt())
            }
            BlockFace::Psd { .. } => {
                let nx = norm_x.ok_or(CertifyError::MissingNorm { block: 0 })?;
                let t = slack.t_min.expect("boundary PSD slack");
                Ok(eps / t + (2.0 * eps * nx / t).sqrt())
            }
            BlockFace::Whole | BlockFace::Origin => Ok(0.0),
        },
    }
}

/// Block norm used by `f`: `‖x‖₂` for SOC, `‖X‖_op` for PSD, none for LP.
pub fn block_norm(kind: BlockKind, blk: &[f64]) -> Result<Option<f64>, CertifyError> {
    match kind {
        BlockKind::NonNeg(_) => Ok(None),
        BlockKind::SecondOrder(_) => Ok(Some(linalg::norm(blk))),
        BlockKind::Psd(n) => {
            let eig = linalg::sym_eig(&cone::smat(n, blk)?)?;
            Ok(Some(eig.min().abs().max(eig.max().abs())))
        }
    }
}

/// `f` summed over blocks. Each block uses its own `ε_j = ⟨s⋆_j, x_j⟩` and
/// its own norm term, or `norm_bound` when given.
pub fn total_f(
    face: &FaceDescriptor,
    s_star: &[f64],
    x_plus: &[f64],
    norm_bound: Option<f64>,
) -> Result<(f64, Vec<f64>), CertifyError> {
    let spec = face.spec();
    let mut parts = Vec::with_capacity(spec.blocks().len());
    for (k, ((kind, r), (slack, bf))) in spec
        .iter_blocks()
        .zip(face.slack().iter().zip(face.blocks()))
        .enumerate()
    {
        let eps = linalg::dot(&s_star[r.clone()], &x_plus[r.clone()]);
        let nx = match norm_bound {
            Some(b) if !matches!(kind, BlockKind::NonNeg(_)) => Some(b),
            _ => block_norm(kind, &x_plus[r])?,
        };
        let f = violation_f(slack, bf, eps, nx).map_err(|e| match e {
            CertifyError::MissingNorm { .. } => CertifyError::MissingNorm { block: k },
            other => other,
        })?;
        parts.push(f);
    }
    Ok((parts.iter().sum(), parts))
}

/// `γ = 1/σ_min(A|V)` and `κ = 1 + γ σ_max(A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaKappa {
    pub sigma_max: f64,
    /// `+∞` when `V = {0}`.
    pub sigma_min_v: f64,
    pub singleton: bool,
    pub gamma: Option<f64>,
    pub kappa: Option<f64>,
}

pub fn gamma_kappa(
    data: &ProblemData,
    face: &FaceDescriptor,
    tol: f64,
) -> Result<GammaKappa, CertifyError> {
    let sigma_max = linalg::sigma_max(&data.a)?;
    let basis = face.v_basis();
    let rs = linalg::sigma_min_restricted(&data.a, &basis)?;
    if rs.trivial_subspace {
        return Ok(GammaKappa {
            sigma_max,
            sigma_min_v: f64::INFINITY,
            singleton: true,
            gamma: Some(0.0),
            kappa: Some(1.0),
        });
    }
    let singleton = rs.value > tol;
    let gamma = singleton.then(|| 1.0 / rs.value);
    Ok(GammaKappa {
        sigma_max,
        sigma_min_v: rs.value,
        singleton,
        gamma,
        kappa: gamma.map(|g| 1.0 + g * sigma_max),
    })
}

/// Full certificate for one candidate point.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub metrics: ErrorMetrics,
    /// Total `f(ε(x₊), ‖x₊‖)`.
    pub f_value: f64,
    pub f_blocks: Vec<f64>,
    pub gamma: Option<f64>,
    pub kappa: Option<f64>,
    pub sigma_max: f64,
    pub sigma_min_v: f64,
    pub singleton: bool,
    /// `κ‖P_{V⊥}(x₊)‖ + γ‖Ax-b‖ + κ‖P_{V⊥}(x₋)‖`.
    pub upper_bound: Option<f64>,
    /// Same with `‖P_{V⊥}(x₊)‖` replaced by `f`.
    pub erb_bound: Option<f64>,
    /// `‖P_{V⊥}(x)‖`.
    pub lower_bound: f64,
    /// `κ‖P_{F°}(x)‖ + γ‖Ax-b‖`.
    pub conic_bound: Option<f64>,
    /// `1` if `f` is linear in `ε`, `2` if a square root appears.
    pub exponent: u32,
    pub norm_bound: Option<f64>,
    /// Coefficient of `ε_opt` for feasible points, where one is defined.
    pub c1_estimate: Option<f64>,
    /// `‖x - x⋆‖`, the exact distance when the solution set is a singleton.
    pub distance: Option<f64>,
    pub dsc: DscVerdict,
    pub sc: ScVerdict,
    pub notes: Vec<String>,
}

/// Precomputes the face, `γ`, `κ` and the complementarity verdicts of a pair
/// so that many points can be certified cheaply.
#[derive(Debug, Clone)]
pub struct Certifier<'a> {
    data: &'a ProblemData,
    pair: &'a SolutionPair,
    opts: CertifyOptions,
    face: FaceDescriptor,
    gk: GammaKappa,
    dsc: DscVerdict,
    sc: ScVerdict,
    p_star: f64,
    exponent: u32,
}

impl<'a> Certifier<'a> {
    pub fn new(
        data: &'a ProblemData,
        pair: &'a SolutionPair,
        opts: CertifyOptions,
    ) -> Result<Self, CertifyError> {
        let p_star = check_strong_duality(data, pair)?;
        let face = build_face(&data.spec, &pair.s, opts.face_tol)?;
        let gk = gamma_kappa(data, &face, opts.singleton_tol)?;
        let dsc = check_dsc(&face, &pair.x, opts.sc_tol)?;
        let sc = check_sc_algebraic(&data.spec, &pair.x, &pair.s, opts.sc_tol)?;
        let exponent = if face.blocks().iter().zip(face.slack()).any(|(b, s)| {
            s.class == SlackClass::Boundary
                && matches!(b, BlockFace::Ray { .. } | BlockFace::Psd { .. })
        }) {
            2
        } else {
            1
        };
        Ok(Self {
            data,
            pair,
            opts,
            face,
            gk,
            dsc,
            sc,
            p_star,
            exponent,
        })
    }

    pub fn face(&self) -> &FaceDescriptor {
        &self.face
    }

    pub fn gamma_kappa(&self) -> &GammaKappa {
        &self.gk
    }

    pub fn dsc(&self) -> &DscVerdict {
        &self.dsc
    }

    pub fn sc(&self) -> &ScVerdict {
        &self.sc
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn metrics(&self, x: &[f64]) -> Result<ErrorMetrics, CertifyError> {
        metrics_with(self.data, self.pair, self.p_star, x)
    }

    /// `f` on the conic part of `x`.
    pub fn f_value(&self, x_plus: &[f64]) -> Result<(f64, Vec<f64>), CertifyError> {
        total_f(&self.face, &self.pair.s, x_plus, self.opts.norm_bound)
    }

    fn perp_norm(&self, v: &[f64]) -> Result<f64, CertifyError> {
        Ok(linalg::norm(&self.face.proj_v_perp(v)?))
    }

    /// Projector form of the main bound. `None` outside the singleton regime.
    pub fn upper_bound(&self, x: &[f64]) -> Result<Option<f64>, CertifyError> {
        let m = self.metrics(x)?;
        self.upper_from(&m)
    }

    fn upper_from(&self, m: &ErrorMetrics) -> Result<Option<f64>, CertifyError> {
        let (Some(g), Some(k)) = (self.gk.gamma, self.gk.kappa) else {
            return Ok(None);
        };
        Ok(Some(
            k * self.perp_norm(&m.conic_part)?
                + g * m.lin_infeas_norm
                + k * self.perp_norm(&m.conic_infeas)?,
        ))
    }

    /// `κ f + γ‖Ax-b‖ + κ‖P_{V⊥}(x₋)‖`.
    pub fn erb_bound(&self, x: &[f64]) -> Result<Option<f64>, CertifyError> {
        let m = self.metrics(x)?;
        let (f, _) = self.f_value(&m.conic_part)?;
        self.erb_from(&m, f)
    }

    fn erb_from(&self, m: &ErrorMetrics, f: f64) -> Result<Option<f64>, CertifyError> {
        let (Some(g), Some(k)) = (self.gk.gamma, self.gk.kappa) else {
            return Ok(None);
        };
        Ok(Some(
            k * f + g * m.lin_infeas_norm + k * self.perp_norm(&m.conic_infeas)?,
        ))
    }

    /// `‖P_{V⊥}(x)‖ ≤ dist(x, X⋆)`, valid for any `x` since `X⋆ ⊂ V`.
    pub fn lower_bound(&self, x: &[f64]) -> Result<f64, CertifyError> {
        self.perp_norm(x)
    }

    /// `κ‖P_{F°}(x)‖ + γ‖Ax-b‖`.
    pub fn conic_bound(&self, x: &[f64]) -> Result<Option<f64>, CertifyError> {
        let (Some(g), Some(k)) = (self.gk.gamma, self.gk.kappa) else {
            return Ok(None);
        };
        let polar = linalg::norm(&self.face.proj_polar_face(x)?);
        Ok(Some(k * polar + g * linalg::norm(&self.data.residual(x)?)))
    }

    fn c1_estimate(&self) -> Option<f64> {
        let k = self.gk.kappa?;
        let mut total = 0.0;
        for (slack, bf) in self.face.slack().iter().zip(self.face.blocks()) {
            let term = match (slack.class, bf) {
                (SlackClass::Zero, _) => 0.0,
                (SlackClass::Interior, _) if self.exponent == 1 => k * slack.c_star?,
                (SlackClass::Boundary, BlockFace::Orthant { .. }) if self.exponent == 1 => {
                    k / slack.s_min_pos?
                }
                (SlackClass::Boundary, BlockFace::Ray { .. }) => {
                    2.0 * std::f64::consts::SQRT_2 * k * k * self.opts.norm_bound? / slack.s_norm
                }
                (SlackClass::Boundary, BlockFace::Psd { .. }) => {
                    k * k * 8.0 * self.opts.norm_bound? / slack.t_min?
                }
                _ => return None,
            };
            total += term;
        }
        Some(total)
    }

    pub fn certify(&self, x: &[f64]) -> Result<Certificate, CertifyError> {
        let m = self.metrics(x)?;
        let (f_value, f_blocks) = self.f_value(&m.conic_part)?;
        let mut notes = Vec::new();
        if m.lin_infeas_norm > 1e-8 * (1.0 + linalg::norm(&self.data.b))
            || m.conic_infeas_norm > 1e-8
        {
            notes.push("point is infeasible; lower bound uses the point itself".to_string());
        }
        if !self.gk.singleton {
            notes.push("solution set not certified unique; numeric bounds omitted".to_string());
        }
        if !self.dsc.pass {
            notes.push("dual strict complementarity check failed".to_string());
        }
        Ok(Certificate {
            upper_bound: self.upper_from(&m)?,
            erb_bound: self.erb_from(&m, f_value)?,
            lower_bound: self.lower_bound(x)?,
            conic_bound: self.conic_bound(x)?,
            f_value,
            f_blocks,
            gamma: self.gk.gamma,
            kappa: self.gk.kappa,
            sigma_max: self.gk.sigma_max,
            sigma_min_v: self.gk.sigma_min_v,
            singleton: self.gk.singleton,
            exponent: self.exponent,
            norm_bound: self.opts.norm_bound,
            c1_estimate: self.c1_estimate(),
            distance: self
                .gk
                .singleton
                .then(|| linalg::norm(&linalg::sub(x, &self.pair.x))),
            dsc: self.dsc.clone(),
            sc: self.sc.clone(),
            notes,
            metrics: m,
        })
    }
}

/// One-shot certification.
pub fn certify(
    data: &ProblemData,
    pair: &SolutionPair,
    x: &[f64],
    opts: CertifyOptions,
) -> Result<Certificate, CertifyError> {
    Certifier::new(data, pair, opts)?.certify(x)
}

/// Both sides of the two PSD complementarity inequalities for `X, S ⪰ 0`.
///
/// `V` holds the eigenvectors of the `r` smallest eigenvalues of `S` and
/// `T` is the next one. With `ε = tr(XS)`:
/// `‖P_{V⊥}(X)‖_F ≤ ε/T + √(2ε‖X‖_op/T)` and
/// `‖P_{V⊥}(X)‖_* ≤ ε/T + 2√(rε‖X‖_op/T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdComplementarity {
    pub eps: f64,
    pub t: f64,
    pub frobenius_lhs: f64,
    pub frobenius_rhs: f64,
    pub nuclear_lhs: f64,
    pub nuclear_rhs: f64,
}

pub fn psd_complementarity(
    x: &DenseMatrix,
    s: &DenseMatrix,
    r: usize,
) -> Result<PsdComplementarity, CertifyError> {
    let n = x.rows();
    if s.rows() != n || r >= n {
        return Err(CertifyError::DimensionMismatch {
            expected: n,
            found: s.rows().max(r),
        });
    }
    let es = linalg::sym_eig(s)?;
    let mut v = DenseMatrix::zeros(n, r);
    for j in 0..r {
        for i in 0..n {
            v[(i, j)] = es.eigenvectors[(i, j)];
        }
    }
    let t = es.eigenvalues[r];
    let eps = x.matmul(s)?;
    let eps = (0..n).map(|i| eps[(i, i)]).sum::<f64>().max(0.0);
    let vt = v.transpose();
    let inner = v.matmul(&vt.matmul(x)?.matmul(&v)?)?.matmul(&vt)?;
    let perp = x.sub(&inner)?;
    let ex = linalg::sym_eig(x)?;
    let x_op = ex.min().abs().max(ex.max().abs());
    let nuclear: f64 = linalg::sym_eig(&perp)?
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok(PsdComplementarity {
        eps,
        t,
        frobenius_lhs: perp.frobenius_norm(),
        frobenius_rhs: eps / t + (2.0 * eps * x_op / t).sqrt(),
        nuclear_lhs: nuclear,
        nuclear_rhs: eps / t + 2.0 * (r as f64 * eps * x_op / t).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{svec, ConeSpec};

    fn toy_lp() -> (ProblemData, SolutionPair) {
        let data = ProblemData::new(
            ConeSpec::nonneg(2).unwrap(),
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1.0],
            vec![1.0, 0.0],
        )
        .unwrap();
        let pair = SolutionPair::from_dual(&data, vec![0.0, 1.0], vec![0.0]).unwrap();
        (data, pair)
    }

    fn z2(n: usize) -> (ProblemData, SolutionPair) {
        let spec = ConeSpec::psd(n).unwrap();
        let d = spec.dim();
        let mut a = DenseMatrix::zeros(n, d);
        for i in 0..n {
            a[(i, cone::svec_index(n, i, i))] = 1.0;
        }
        let mut ones = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                ones[(i, j)] = 1.0;
            }
        }
        let c = svec(&ones.scaled(-1.0)).unwrap();
        let data = ProblemData::new(spec, a, vec![1.0; n], c).unwrap();
        let pair =
            SolutionPair::from_dual(&data, svec(&ones).unwrap(), vec![-(n as f64); n]).unwrap();
        (data, pair)
    }

    #[test]
    fn toy_lp_metrics_and_bounds() {
        let (data, pair) = toy_lp();
        let cert = Certifier::new(&data, &pair, CertifyOptions::default()).unwrap();
        let gk = cert.gamma_kappa();
        assert!((gk.gamma.unwrap() - 1.0).abs() < 1e-12);
        assert!((gk.kappa.unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(cert.dsc().pass && cert.sc().pass);
        assert_eq!(cert.exponent(), 1);
        for t in [0.1, 0.3, 1.0] {
            let c = cert.certify(&[t, 1.0 - t]).unwrap();
            assert!((c.metrics.eps_opt - t).abs() < 1e-14);
            assert!((c.metrics.comp_error - t).abs() < 1e-14);
            assert!(c.metrics.lin_infeas_norm < 1e-15 && c.metrics.conic_infeas_norm == 0.0);
            let ub = c.upper_bound.unwrap();
            assert!((ub - (1.0 + 2f64.sqrt()) * t).abs() < 1e-12);
            assert!((c.lower_bound - t).abs() < 1e-14);
            assert!((c.distance.unwrap() - 2f64.sqrt() * t).abs() < 1e-12);
            assert!((c.erb_bound.unwrap() - ub).abs() < 1e-12);
        }
        let c = cert.certify(&[0.3, 0.7]).unwrap();
        assert!((c.upper_bound.unwrap() - 0.724264).abs() < 1e-6);
        assert!((c.distance.unwrap() - 0.424264).abs() < 1e-6);
    }

    #[test]
    fn metrics_vanish_at_solution() {
        let (data, pair) = z2(4);
        let c = certify(&data, &pair, &pair.x, CertifyOptions::default()).unwrap();
        assert!(c.metrics.eps_opt.abs() < 1e-10);
        assert!(c.metrics.comp_error.abs() < 1e-10);
        assert!(c.upper_bound.unwrap() < 1e-10 && c.lower_bound < 1e-10);
        assert!(c.conic_bound.unwrap() < 1e-10);
    }

    #[test]
    fn z2_example() {
        let (data, pair) = z2(4);
        let cert = Certifier::new(&data, &pair, CertifyOptions::default()).unwrap();
        let gk = cert.gamma_kappa();
        assert!((gk.gamma.unwrap() - 2.0).abs() < 1e-10);
        assert!((gk.kappa.unwrap() - 3.0).abs() < 1e-10);
        let id = svec(&DenseMatrix::identity(4)).unwrap();
        let c = cert.certify(&id).unwrap();
        assert!((c.metrics.eps_opt - 12.0).abs() < 1e-10);
        assert!((c.metrics.comp_error - 12.0).abs() < 1e-10);
        assert!((c.upper_bound.unwrap() - 27f64.sqrt()).abs() < 1e-9);
        assert!((c.distance.unwrap() - 12f64.sqrt()).abs() < 1e-12);
        assert!((c.lower_bound - 3f64.sqrt()).abs() < 1e-10);
        assert_eq!(c.exponent, 2);
    }

    #[test]
    fn eps_decomposition() {
        let (data, pair) = toy_lp();
        let cert = Certifier::new(&data, &pair, CertifyOptions::default()).unwrap();
        for x in [[0.4, 0.6], [-0.3, 2.0], [1.5, -0.2]] {
            let m = cert.metrics(&x).unwrap();
            let (a, b, c) = decompose_eps(&m, &pair);
            assert!((a + b + c - m.comp_error).abs() < 1e-12);
        }
        let m = cert.metrics(&[0.4, 0.6]).unwrap();
        let (_, b, c) = decompose_eps(&m, &pair);
        assert!(b.abs() < 1e-15 && c == 0.0);
    }

    #[test]
    fn violation_f_examples() {
        // PSD: S = diag(0, 2), X = I
        let spec = ConeSpec::psd(2).unwrap();
        let s = svec(&DenseMatrix::diag(&[0.0, 2.0])).unwrap();
        let face = build_face(&spec, &s, FACE_TOL).unwrap();
        let x = svec(&DenseMatrix::identity(2)).unwrap();
        let (f, _) = total_f(&face, &s, &x, None).unwrap();
        assert!((f - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(linalg::norm(&face.proj_v_perp(&x).unwrap()) <= f);

        // SOC: s = (1,1), x = (1,1)
        let spec = ConeSpec::second_order(1).unwrap();
        let face = build_face(&spec, &[1.0, 1.0], FACE_TOL).unwrap();
        let (f, _) = total_f(&face, &[1.0, 1.0], &[1.0, 1.0], None).unwrap();
        assert!((f - (4.0 * 2f64.sqrt()).sqrt()).abs() < 1e-12);

        let z = violation_f(&face.slack()[0], &face.blocks()[0], 0.0, Some(3.0)).unwrap();
        assert_eq!(z, 0.0);
        assert!(matches!(
            violation_f(&face.slack()[0], &face.blocks()[0], 1.0, None),
            Err(CertifyError::MissingNorm { .. })
        ));
    }

    #[test]
    fn interior_slack_bound_uses_f_only() {
        let spec = ConeSpec::nonneg(2).unwrap();
        let data = ProblemData::new(
            spec,
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![0.0],
            vec![2.0, 3.0],
        )
        .unwrap();
        let pair = SolutionPair::from_dual(&data, vec![0.0, 0.0], vec![0.0]).unwrap();
        let cert = Certifier::new(&data, &pair, CertifyOptions::default()).unwrap();
        let gk = cert.gamma_kappa();
        assert!(gk.singleton && gk.gamma == Some(0.0) && gk.kappa == Some(1.0));
        assert!(gk.sigma_min_v.is_infinite());
    }

    #[test]
    fn rejects_duality_gap() {
        let (data, mut pair) = toy_lp();
        pair.x = vec![1.0, 0.0];
        assert!(matches!(
            Certifier::new(&data, &pair, CertifyOptions::default()),
            Err(CertifyError::StrongDuality { .. })
        ));
    }

    #[test]
    fn non_singleton_has_no_numeric_bounds() {
        // min 0 s.t. x1 - x2 = 0, x >= 0: X⋆ is a ray
        let data = ProblemData::new(
            ConeSpec::nonneg(2).unwrap(),
            DenseMatrix::from_rows(&[vec![1.0, -1.0]]).unwrap(),
            vec![0.0],
            vec![0.0, 0.0],
        )
        .unwrap();
        let pair = SolutionPair::from_dual(&data, vec![1.0, 1.0], vec![0.0]).unwrap();
        let c = certify(&data, &pair, &[2.0, 2.0], CertifyOptions::default()).unwrap();
        assert!(!c.singleton);
        assert!(c.upper_bound.is_none() && c.conic_bound.is_none() && c.distance.is_none());
    }

    #[test]
    fn psd_complementarity_example() {
        let x = DenseMatrix::identity(2);
        let s = DenseMatrix::diag(&[0.0, 2.0]);
        let p = psd_complementarity(&x, &s, 1).unwrap();
        assert!((p.frobenius_lhs - 1.0).abs() < 1e-12);
        assert!((p.frobenius_rhs - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(p.nuclear_lhs <= p.nuclear_rhs);
    }
}
