//! Complementary faces of a dual slack.
//!
//! Given a dual slack `s⋆ ∈ K*`, the complementary face is
//! `F = {x ∈ K : ⟨x, s⋆⟩ = 0}` and `V = span F`. Both act blockwise on product
//! cones. Each block falls into one of five shapes:
//!
//! | block slack              | `F`                    | `V`                 |
//! |--------------------------|------------------------|---------------------|
//! | `s⋆ = 0`                 | whole block cone       | whole block         |
//! | `s⋆` interior            | `{0}`                  | `{0}`               |
//! | LP, partial support      | `{x ≥ 0, x_I = 0}`     | `{x_I = 0}`         |
//! | SOC boundary             | ray `λ š, λ ≥ 0`       | `span š`            |
//! | PSD boundary, rank `n-r` | `{V R Vᵀ : R ⪰ 0}`     | `{V R Vᵀ}`          |
//!
//! where `I` is the support of `s⋆`, `š = (-s_v, s_t)/‖s⋆‖`, and the columns of
//! `V` span the nullspace of `S⋆`.

use thiserror::Error;

use crate::cone::{self, BlockKind, ConeError, ConeSpec};
use crate::linalg::{self, DenseMatrix, LinalgError};

/// Default relative threshold for support and rank decisions.
pub const FACE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FaceError {
    #[error("dual slack is outside K* in block {block} (margin {margin:e})")]
    NotDualFeasible { block: usize, margin: f64 },
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Position of a block slack relative to `K*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlackClass {
    /// `s⋆ = 0` on the block.
    Zero,
    /// `s⋆ ∈ int K*` on the block.
    Interior,
    /// `s⋆ ∈ ∂K* \ {0}`.
    Boundary,
}

/// Per-block classification plus the scalars the violation function needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackBlock {
    pub class: SlackClass,
    /// `‖s⋆‖` on the block.
    pub s_norm: f64,
    /// `sup_{x∈K} 1/⟨s⋆, x/‖x‖⟩`, interior slacks only.
    pub c_star: Option<f64>,
    /// Smallest positive slack entry (LP boundary).
    pub s_min_pos: Option<f64>,
    /// Smallest nonzero eigenvalue of `S⋆` (PSD boundary).
    pub t_min: Option<f64>,
}

/// Shape of the complementary face on one block.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockFace {
    Whole,
    Origin,
    /// `zeroed[i]` marks `i ∈ I_{s⋆}`.
    Orthant {
        zeroed: Vec<bool>,
    },
    /// Unit generator `š` of the face ray.
    Ray {
        direction: Vec<f64>,
    },
    /// Orthonormal `n x r` basis of `null(S⋆)`.
    Psd {
        n: usize,
        basis: DenseMatrix,
    },
}

/// Complementary face `F_{s⋆}` and space `V_{s⋆}` of a product cone.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceDescriptor {
    spec: ConeSpec,
    blocks: Vec<BlockFace>,
    slack: Vec<SlackBlock>,
}

/// Builds the face of `s⋆`. Entries and eigenvalues count as nonzero above
/// `tol · max(1, ‖s⋆‖)`.
pub fn build_face(spec: &ConeSpec, s_star: &[f64], tol: f64) -> Result<FaceDescriptor, FaceError> {
    spec.check_point(s_star)?;
    let thr = tol * linalg::norm(s_star).max(1.0);
    let mut blocks = Vec::with_capacity(spec.blocks().len());
    let mut slack = Vec::with_capacity(spec.blocks().len());
    for (k, (kind, r)) in spec.iter_blocks().enumerate() {
        let s = &s_star[r];
        let s_norm = linalg::norm(s);
        let (face, info) = match kind {
            BlockKind::NonNeg(n) => {
                let min = s.iter().copied().fold(f64::INFINITY, f64::min);
                if min < -thr {
                    return Err(FaceError::NotDualFeasible {
                        block: k,
                        margin: min,
                    });
                }
                let zeroed: Vec<bool> = s.iter().map(|&v| v > thr).collect();
                let count = zeroed.iter().filter(|&&z| z).count();
                if count == 0 {
                    (BlockFace::Whole, SlackBlock::new(SlackClass::Zero, s_norm))
                } else if count == n {
                    let mut info = SlackBlock::new(SlackClass::Interior, s_norm);
                    info.c_star = Some(1.0 / min);
                    info.s_min_pos = Some(min);
                    (BlockFace::Origin, info)
                } else {
                    let smin = s
                        .iter()
                        .zip(&zeroed)
                        .filter(|(_, &z)| z)
                        .map(|(&v, _)| v)
                        .fold(f64::INFINITY, f64::min);
                    let mut info = SlackBlock::new(SlackClass::Boundary, s_norm);
                    info.s_min_pos = Some(smin);
                    (BlockFace::Orthant { zeroed }, info)
                }
            }
            BlockKind::SecondOrder(n) => {
                let gap = s[n] - linalg::norm(&s[..n]);
                let margin = gap * std::f64::consts::FRAC_1_SQRT_2;
                if margin < -thr {
                    return Err(FaceError::NotDualFeasible { block: k, margin });
                }
                if s_norm <= thr {
                    (BlockFace::Whole, SlackBlock::new(SlackClass::Zero, s_norm))
                } else if margin > thr {
                    let mut info = SlackBlock::new(SlackClass::Interior, s_norm);
                    info.c_star = Some(std::f64::consts::SQRT_2 / gap);
                    (BlockFace::Origin, info)
                } else {
                    let mut direction: Vec<f64> = s[..n].iter().map(|v| -v / s_norm).collect();
                    direction.push(s[n] / s_norm);
                    (
                        BlockFace::Ray { direction },
                        SlackBlock::new(SlackClass::Boundary, s_norm),
                    )
                }
            }
            BlockKind::Psd(n) => {
                let eig = linalg::sym_eig(&cone::smat(n, s)?)?;
                if eig.min() < -thr {
                    return Err(FaceError::NotDualFeasible {
                        block: k,
                        margin: eig.min(),
                    });
                }
                let r = eig.eigenvalues.iter().filter(|&&l| l <= thr).count();
                if r == n {
                    (BlockFace::Whole, SlackBlock::new(SlackClass::Zero, s_norm))
                } else if r == 0 {
                    let mut info = SlackBlock::new(SlackClass::Interior, s_norm);
                    info.c_star = Some(1.0 / eig.min());
                    info.t_min = Some(eig.min());
                    (BlockFace::Origin, info)
                } else {
                    let mut basis = DenseMatrix::zeros(n, r);
                    for j in 0..r {
                        for i in 0..n {
                            basis[(i, j)] = eig.eigenvectors[(i, j)];
                        }
                    }
                    let mut info = SlackBlock::new(SlackClass::Boundary, s_norm);
                    info.t_min = Some(eig.eigenvalues[r]);
                    (BlockFace::Psd { n, basis }, info)
                }
            }
        };
        blocks.push(face);
        slack.push(info);
    }
    Ok(FaceDescriptor {
        spec: spec.clone(),
        blocks,
        slack,
    })
}

impl SlackBlock {
    fn new(class: SlackClass, s_norm: f64) -> Self {
        Self {
            class,
            s_norm,
            c_star: None,
            s_min_pos: None,
            t_min: None,
        }
    }
}

// V R Vᵀ
fn expand(basis: &DenseMatrix, r: &DenseMatrix) -> DenseMatrix {
    let vr = basis.matmul(r).expect("shapes agree");
    vr.matmul(&basis.transpose()).expect("shapes agree")
}

// Vᵀ X V
fn compress(basis: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
    let vt = basis.transpose();
    vt.matmul(x)
        .and_then(|m| m.matmul(basis))
        .expect("shapes agree")
}

fn psd_part(m: &DenseMatrix) -> Result<DenseMatrix, FaceError> {
    let eig = linalg::sym_eig(m)?;
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}

impl FaceDescriptor {
    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[BlockFace] {
        &self.blocks
    }

    pub fn slack(&self) -> &[SlackBlock] {
        &self.slack
    }

    fn check(&self, x: &[f64]) -> Result<(), FaceError> {
        if x.len() != self.spec.dim() {
            return Err(FaceError::DimensionMismatch {
                expected: self.spec.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Orthogonal projection onto `V_{s⋆}`.
    pub fn proj_v(&self, x: &[f64]) -> Result<Vec<f64>, FaceError> {
        self.check(x)?;
        let mut out = x.to_vec();
        for (face, (_, r)) in self.blocks.iter().zip(self.spec.iter_blocks()) {
            let blk = &mut out[r];
            match face {
                BlockFace::Whole => {}
                BlockFace::Origin => blk.fill(0.0),
                BlockFace::Orthant { zeroed } => {
                    for (v, &z) in blk.iter_mut().zip(zeroed) {
                        if z {
                            *v = 0.0;
                        }
                    }
                }
                BlockFace::Ray { direction } => {
                    let c = linalg::dot(blk, direction);
                    for (v, d) in blk.iter_mut().zip(direction) {
                        *v = c * d;
                    }
                }
                BlockFace::Psd { n, basis } => {
                    let xm = cone::smat(*n, blk)?;
                    let p = expand(basis, &compress(basis, &xm));
                    blk.copy_from_slice(&cone::svec_unchecked(&p));
                }
            }
        }
        Ok(out)
    }

    /// Orthogonal projection onto `V_{s⋆}^⊥`.
    pub fn proj_v_perp(&self, x: &[f64]) -> Result<Vec<f64>, FaceError> {
        Ok(linalg::sub(x, &self.proj_v(x)?))
    }

    /// Projection onto the face `F_{s⋆}`.
    pub fn proj_face(&self, x: &[f64]) -> Result<Vec<f64>, FaceError> {
        self.check(x)?;
        let mut out = x.to_vec();
        for (face, (kind, r)) in self.blocks.iter().zip(self.spec.iter_blocks()) {
            let blk = &mut out[r];
            match face {
                BlockFace::Whole => cone::project_block(kind, blk)?,
                BlockFace::Origin => blk.fill(0.0),
                BlockFace::Orthant { zeroed } => {
                    for (v, &z) in blk.iter_mut().zip(zeroed) {
                        *v = if z { 0.0 } else { v.max(0.0) };
                    }
                }
                BlockFace::Ray { direction } => {
                    let c = linalg::dot(blk, direction).max(0.0);
                    for (v, d) in blk.iter_mut().zip(direction) {
                        *v = c * d;
                    }
                }
                BlockFace::Psd { n, basis } => {
                    let xm = cone::smat(*n, blk)?;
                    let p = expand(basis, &psd_part(&compress(basis, &xm))?);
                    blk.copy_from_slice(&cone::svec_unchecked(&p));
                }
            }
        }
        Ok(out)
    }

    /// `‖x - P_F(x)‖`.
    pub fn dist_to_face(&self, x: &[f64]) -> Result<f64, FaceError> {
        Ok(linalg::norm(&linalg::sub(x, &self.proj_face(x)?)))
    }

    /// Projection onto the polar face `F°`, i.e. `x - P_F(x)`.
    pub fn proj_polar_face(&self, x: &[f64]) -> Result<Vec<f64>, FaceError> {
        Ok(linalg::sub(x, &self.proj_face(x)?))
    }

    /// Dimension of `V_{s⋆}`.
    pub fn dim_v(&self) -> usize {
        self.blocks
            .iter()
            .zip(self.spec.blocks())
            .map(|(face, kind)| match face {
                BlockFace::Whole => kind.dim(),
                BlockFace::Origin => 0,
                BlockFace::Orthant { zeroed } => zeroed.iter().filter(|&&z| !z).count(),
                BlockFace::Ray { .. } => 1,
                BlockFace::Psd { basis, .. } => basis.cols() * (basis.cols() + 1) / 2,
            })
            .sum()
    }

    /// Orthonormal basis of `V_{s⋆}` as the columns of a `dim(E) x dim(V)` matrix.
    ///
    /// PSD blocks use `svec` of `v_i v_iᵀ` and `(v_i v_jᵀ + v_j v_iᵀ)/√2`.
    pub fn v_basis(&self) -> DenseMatrix {
        let dim = self.spec.dim();
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(self.dim_v());
        let unit = |i: usize| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        };
        for (face, (_, r)) in self.blocks.iter().zip(self.spec.iter_blocks()) {
            match face {
                BlockFace::Whole => cols.extend(r.map(unit)),
                BlockFace::Origin => {}
                BlockFace::Orthant { zeroed } => {
                    cols.extend(r.zip(zeroed).filter(|(_, &z)| !z).map(|(i, _)| unit(i)))
                }
                BlockFace::Ray { direction } => {
                    let mut e = vec![0.0; dim];
                    e[r].copy_from_slice(direction);
                    cols.push(e);
                }
                BlockFace::Psd { n, basis } => {
                    let rank = basis.cols();
                    for i in 0..rank {
                        for j in i..rank {
                            let mut m = DenseMatrix::zeros(*n, *n);
                            let w = if i == j {
                                1.0
                            } else {
                                std::f64::consts::FRAC_1_SQRT_2
                            };
                            for p in 0..*n {
                                for q in 0..*n {
                                    m[(p, q)] = w
                                        * (basis[(p, i)] * basis[(q, j)]
                                            + if i == j {
                                                0.0
                                            } else {
                                                basis[(p, j)] * basis[(q, i)]
                                            });
                                }
                            }
                            let mut e = vec![0.0; dim];
                            e[r.clone()].copy_from_slice(&cone::svec_unchecked(&m));
                            cols.push(e);
                        }
                    }
                }
            }
        }
        DenseMatrix::from_columns(dim, &cols).expect("columns have the ambient length")
    }

    /// Per-block distance between `P_{F°}(x)` and `P_{V⊥}(x₊)`, with its bound.
    pub fn polar_gap(&self, x: &[f64]) -> Result<Vec<PolarGap>, FaceError> {
        let (xp, xm) = cone::moreau_split(&self.spec, x)?;
        let polar = self.proj_polar_face(x)?;
        let vperp = self.proj_v_perp(&xp)?;
        let mut gaps = Vec::with_capacity(self.blocks.len());
        for (face, (_, r)) in self.blocks.iter().zip(self.spec.iter_blocks()) {
            let lhs = linalg::norm(&linalg::sub(&polar[r.clone()], &vperp[r.clone()]));
            let minus = linalg::norm(&xm[r.clone()]);
            let rhs = match face {
                BlockFace::Whole | BlockFace::Origin => minus,
                BlockFace::Orthant { zeroed } => {
                    let on_support: f64 = xp[r]
                        .iter()
                        .zip(zeroed)
                        .filter(|(_, &z)| z)
                        .map(|(v, _)| v * v)
                        .sum();
                    on_support.sqrt() + minus
                }
                BlockFace::Ray { direction } => linalg::dot(&xp[r], direction).abs() + minus,
                BlockFace::Psd { .. } => 2.0 * minus,
            };
            gaps.push(PolarGap { lhs, rhs });
        }
        Ok(gaps)
    }
}

/// `lhs = ‖P_{F°}(x) - P_{V⊥}(x₊)‖` on a block and its closed-form bound `rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGap {
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of a per-block check.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCheck {
    pub pass: bool,
    pub detail: String,
}

/// Dual strict complementarity verdict: `x⋆ ∈ relint F_{s⋆}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DscVerdict {
    pub pass: bool,
    pub blocks: Vec<BlockCheck>,
}

/// Checks `x⋆ ∈ relint F_{s⋆}` blockwise with threshold `tol · max(1, ‖x⋆‖)`.
pub fn check_dsc(face: &FaceDescriptor, x_star: &[f64], tol: f64) -> Result<DscVerdict, FaceError> {
    face.check(x_star)?;
    let thr = tol * linalg::norm(x_star).max(1.0);
    let mut blocks = Vec::new();
    for (k, (f, (kind, r))) in face.blocks.iter().zip(face.spec.iter_blocks()).enumerate() {
        let x = &x_star[r];
        let margin = cone::block_margin(kind, x)?;
        let check = if margin < -thr {
            BlockCheck {
                pass: false,
                detail: format!("block {k}: x_star outside K (margin {margin:.3e})"),
            }
        } else {
            match f {
                BlockFace::Whole => BlockCheck {
                    pass: margin > thr,
                    detail: format!("block {k}: zero slack, interior margin {margin:.3e}"),
                },
                BlockFace::Origin => {
                    let nx = linalg::norm(x);
                    BlockCheck {
                        pass: nx <= thr,
                        detail: format!("block {k}: interior slack, |x| = {nx:.3e}"),
                    }
                }
                BlockFace::Orthant { zeroed } => {
                    let off = x
                        .iter()
                        .zip(zeroed)
                        .filter(|(_, &z)| z)
                        .map(|(v, _)| v.abs())
                        .fold(0.0, f64::max);
                    let on = x
                        .iter()
                        .zip(zeroed)
                        .filter(|(_, &z)| !z)
                        .map(|(v, _)| *v)
                        .fold(f64::INFINITY, f64::min);
                    BlockCheck {
                        pass: off <= thr && on > thr,
                        detail: format!(
                            "block {k}: max |x| on slack support {off:.3e}, min x off support {on:.3e}"
                        ),
                    }
                }
                BlockFace::Ray { direction } => {
                    let lam = linalg::dot(x, direction);
                    let resid = linalg::norm(
                        &x.iter()
                            .zip(direction)
                            .map(|(v, d)| v - lam * d)
                            .collect::<Vec<_>>(),
                    );
                    BlockCheck {
                        pass: lam > thr && resid <= thr,
                        detail: format!(
                            "block {k}: ray coefficient {lam:.3e}, off-ray {resid:.3e}"
                        ),
                    }
                }
                BlockFace::Psd { n, basis } => {
                    let xm = cone::smat(*n, x)?;
                    let inner = linalg::sym_eig(&compress(basis, &xm))?.min();
                    let p = expand(basis, &compress(basis, &xm));
                    let off = xm.sub(&p)?.frobenius_norm();
                    BlockCheck {
                        pass: inner > thr && off <= thr,
                        detail: format!(
                            "block {k}: lambda_min(V'XV) = {inner:.3e}, |P_Vperp(X)| = {off:.3e}"
                        ),
                    }
                }
            }
        };
        blocks.push(check);
    }
    Ok(DscVerdict {
        pass: blocks.iter().all(|b| b.pass),
        blocks,
    })
}

/// Algebraic strict complementarity of one block.
#[derive(Debug, Clone, PartialEq)]
pub enum ScBlock {
    /// `nnz` (LP) or `rank` (SDP) counts.
    Defined {
        count_x: usize,
        count_s: usize,
        n: usize,
        complementarity: f64,
        pass: bool,
    },
    /// Second-order blocks have no algebraic definition.
    NotDefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScVerdict {
    /// All defined blocks pass.
    pub pass: bool,
    /// Every block was LP or PSD.
    pub complete: bool,
    pub blocks: Vec<ScBlock>,
    /// `⟨x⋆, s⋆⟩`.
    pub residual: f64,
}

/// `nnz(x⋆) + nnz(s⋆) = n` for LP blocks, `rank X⋆ + rank S⋆ = n` for PSD blocks.
///
/// An entry or eigenvalue counts when it exceeds `tol · max(1, largest)`.
/// Each defined block also requires `|⟨x⋆, s⋆⟩| ≤ tol · max(1, ‖x⋆‖‖s⋆‖)`.
pub fn check_sc_algebraic(
    spec: &ConeSpec,
    x_star: &[f64],
    s_star: &[f64],
    tol: f64,
) -> Result<ScVerdict, FaceError> {
    spec.check_point(x_star)?;
    spec.check_point(s_star)?;
    let count = |vals: &[f64]| {
        let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let thr = tol * top.max(1.0);
        vals.iter().filter(|&&v| v > thr).count()
    };
    let mut blocks = Vec::new();
    for (kind, r) in spec.iter_blocks() {
        let x = &x_star[r.clone()];
        let s = &s_star[r];
        let comp = linalg::dot(x, s);
        let comp_ok = comp.abs() <= tol * (linalg::norm(x) * linalg::norm(s)).max(1.0);
        let blk = match kind {
            BlockKind::NonNeg(n) => {
                let (cx, cs) = (count(x), count(s));
                ScBlock::Defined {
                    count_x: cx,
                    count_s: cs,
                    n,
                    complementarity: comp,
                    pass: cx + cs == n && comp_ok,
                }
            }
            BlockKind::Psd(n) => {
                let ex = linalg::sym_eig(&cone::smat(n, x)?)?;
                let es = linalg::sym_eig(&cone::smat(n, s)?)?;
                let (cx, cs) = (count(&ex.eigenvalues), count(&es.eigenvalues));
                ScBlock::Defined {
                    count_x: cx,
                    count_s: cs,
                    n,
                    complementarity: comp,
                    pass: cx + cs == n && comp_ok,
                }
            }
            BlockKind::SecondOrder(_) => ScBlock::NotDefined,
        };
        blocks.push(blk);
    }
    Ok(ScVerdict {
        pass: blocks
            .iter()
            .all(|b| !matches!(b, ScBlock::Defined { pass: false, .. })),
        complete: blocks.iter().all(|b| matches!(b, ScBlock::Defined { .. })),
        residual: linalg::dot(x_star, s_star),
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::svec;

    fn z2_slack(n: usize) -> Vec<f64> {
        let mut s = DenseMatrix::identity(n).scaled(n as f64);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] -= 1.0;
            }
        }
        svec(&s).unwrap()
    }

    fn ones_outer(n: usize) -> Vec<f64> {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = 1.0;
            }
        }
        svec(&m).unwrap()
    }

    #[test]
    fn lp_face() {
        let spec = ConeSpec::nonneg(2).unwrap();
        let face = build_face(&spec, &[1.0, 0.0], FACE_TOL).unwrap();
        assert_eq!(
            face.blocks()[0],
            BlockFace::Orthant {
                zeroed: vec![true, false]
            }
        );
        assert_eq!(face.slack()[0].s_min_pos, Some(1.0));
        assert_eq!(face.slack()[0].class, SlackClass::Boundary);

        let (p, d) = (
            face.proj_face(&[5.0, -2.0]).unwrap(),
            face.dist_to_face(&[5.0, -2.0]).unwrap(),
        );
        assert_eq!(p, vec![0.0, 0.0]);
        assert!((d - 29f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn soc_face_ray() {
        let spec = ConeSpec::second_order(1).unwrap();
        let face = build_face(&spec, &[1.0, 1.0], FACE_TOL).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match &face.blocks()[0] {
            BlockFace::Ray { direction } => {
                assert!((direction[0] + r).abs() < 1e-15 && (direction[1] - r).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
        let perp = face.proj_v_perp(&[1.0, 1.0]).unwrap();
        assert!((perp[0] - 1.0).abs() < 1e-15 && (perp[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn soc_apex_and_interior() {
        let spec = ConeSpec::second_order(2).unwrap();
        let face = build_face(&spec, &[0.0, 0.0, 0.0], FACE_TOL).unwrap();
        assert_eq!(face.blocks()[0], BlockFace::Whole);
        assert_eq!(face.slack()[0].class, SlackClass::Zero);
        let face = build_face(&spec, &[0.3, 0.4, 2.0], FACE_TOL).unwrap();
        assert_eq!(face.blocks()[0], BlockFace::Origin);
        let c = face.slack()[0].c_star.unwrap();
        assert!((c - 2f64.sqrt() / 1.5).abs() < 1e-14);
    }

    #[test]
    fn z2_face() {
        let spec = ConeSpec::psd(4).unwrap();
        let face = build_face(&spec, &z2_slack(4), FACE_TOL).unwrap();
        let BlockFace::Psd { basis, .. } = &face.blocks()[0] else {
            panic!("expected PSD face");
        };
        assert_eq!(basis.cols(), 1);
        for i in 0..4 {
            assert!((basis[(i, 0)].abs() - 0.5).abs() < 1e-12);
        }
        assert!((face.slack()[0].t_min.unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(face.dim_v(), 1);

        let id = svec(&DenseMatrix::identity(4)).unwrap();
        let perp = face.proj_v_perp(&id).unwrap();
        assert!((linalg::norm(&perp) - 3f64.sqrt()).abs() < 1e-12);

        let dsc = check_dsc(&face, &ones_outer(4), 1e-8).unwrap();
        assert!(dsc.pass, "{dsc:?}");
        let sc = check_sc_algebraic(&spec, &ones_outer(4), &z2_slack(4), 1e-8).unwrap();
        assert!(sc.pass && sc.complete);
        assert_eq!(
            sc.blocks[0],
            ScBlock::Defined {
                count_x: 1,
                count_s: 3,
                n: 4,
                complementarity: sc.residual,
                pass: true
            }
        );
    }

    #[test]
    fn psd_face_projection_example() {
        // V = e1 on 2x2, X = diag(-1, 3)
        let spec = ConeSpec::psd(2).unwrap();
        let face = build_face(
            &spec,
            &svec(&DenseMatrix::diag(&[0.0, 1.0])).unwrap(),
            FACE_TOL,
        )
        .unwrap();
        let x = svec(&DenseMatrix::diag(&[-1.0, 3.0])).unwrap();
        let p = face.proj_face(&x).unwrap();
        assert!(linalg::norm(&p) < 1e-14);
        assert!((face.dist_to_face(&x).unwrap() - 10f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn polar_face_fixed_points() {
        let spec = ConeSpec::nonneg(3).unwrap();
        let face = build_face(&spec, &[1.0, 0.0, 0.0], FACE_TOL).unwrap();
        // x ∈ F
        assert_eq!(
            face.proj_polar_face(&[0.0, 2.0, 3.0]).unwrap(),
            vec![0.0; 3]
        );
        // x ∈ F° = {x : x_2, x_3 ≤ 0}
        let xp = vec![4.0, -1.0, -2.0];
        assert_eq!(face.proj_polar_face(&xp).unwrap(), xp);
    }

    #[test]
    fn dsc_examples() {
        let spec = ConeSpec::nonneg(2).unwrap();
        let face = build_face(&spec, &[1.0, 0.0], FACE_TOL).unwrap();
        assert!(check_dsc(&face, &[0.0, 1.0], 1e-8).unwrap().pass);
        assert!(!check_dsc(&face, &[0.0, 0.0], 1e-8).unwrap().pass);
        assert!(!check_dsc(&face, &[0.5, 1.0], 1e-8).unwrap().pass);
    }

    #[test]
    fn sc_examples() {
        let spec = ConeSpec::nonneg(2).unwrap();
        let v = check_sc_algebraic(&spec, &[0.0, 1.0], &[1.0, 0.0], 1e-8).unwrap();
        assert!(v.pass);
        let v = check_sc_algebraic(&spec, &[0.0, 0.0], &[0.0, 0.0], 1e-8).unwrap();
        assert!(!v.pass);
        let spec = ConeSpec::second_order(1).unwrap();
        let v = check_sc_algebraic(&spec, &[-1.0, 1.0], &[1.0, 1.0], 1e-8).unwrap();
        assert_eq!(v.blocks, vec![ScBlock::NotDefined]);
        assert!(!v.complete);
    }

    #[test]
    fn rejects_infeasible_slack() {
        let spec = ConeSpec::nonneg(2).unwrap();
        assert!(matches!(
            build_face(&spec, &[1.0, -1.0], FACE_TOL),
            Err(FaceError::NotDualFeasible { block: 0, .. })
        ));
    }

    #[test]
    fn v_basis_is_orthonormal() {
        let spec: ConeSpec = "nn:3+soc:2+psd:4".parse().unwrap();
        let mut s = vec![2.0, 0.0, 1.0];
        s.extend([0.6, 0.8, 1.0]);
        let mut sm = DenseMatrix::zeros(4, 4);
        sm[(3, 3)] = 2.0;
        sm[(2, 2)] = 1.0;
        s.extend(svec(&sm).unwrap());
        let face = build_face(&spec, &s, FACE_TOL).unwrap();
        let b = face.v_basis();
        assert_eq!(b.cols(), face.dim_v());
        assert_eq!(face.dim_v(), 1 + 1 + 3);
        let g = b.gram().sub(&DenseMatrix::identity(b.cols())).unwrap();
        assert!(g.max_abs() < 1e-14);
        // every basis vector is fixed by P_V
        for j in 0..b.cols() {
            let col = b.column(j);
            let p = face.proj_v(&col).unwrap();
            assert!(linalg::norm(&linalg::sub(&p, &col)) < 1e-14);
        }
    }
}
