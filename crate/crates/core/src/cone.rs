//! Cone descriptors, the flat coordinate layout of the ambient space, and
//! projections onto the cone and its polar.
//!
//! A [`ConeSpec`] is an ordered product of blocks. Points of the ambient
//! space are flat `f64` slices laid out block after block:
//!
//! * `NonNeg(n)`: `n` coordinates.
//! * `SecondOrder(n)`: `n + 1` coordinates `(v, t)` with the scalar `t` last,
//!   the cone being `‖v‖ ≤ t`.
//! * `Psd(n)`: `n(n+1)/2` coordinates holding `svec(X)`, the lower triangle
//!   in column-major order with off-diagonal entries scaled by `√2`. With this
//!   scaling the flat dot product equals the trace inner product.
//!
//! All three cones are self-dual, so `K* = K` and `K° = -K` blockwise.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::{self, DenseMatrix, LinalgError};

/// Default membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("point has {found} coordinates but the cone has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },
    #[error("invalid cone specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One factor of a product cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// The nonnegative orthant `R^n_+`.
    NonNeg(usize),
    /// The second-order cone `{(v, t) ∈ R^n × R : ‖v‖ ≤ t}`.
    SecondOrder(usize),
    /// The positive semidefinite cone of `n x n` symmetric matrices.
    Psd(usize),
}

impl BlockKind {
    /// Number of flat coordinates of the block.
    pub fn dim(&self) -> usize {
        match *self {
            BlockKind::NonNeg(n) => n,
            BlockKind::SecondOrder(n) => n + 1,
            BlockKind::Psd(n) => n * (n + 1) / 2,
        }
    }

    /// The block parameter `n`.
    pub fn order(&self) -> usize {
        match *self {
            BlockKind::NonNeg(n) | BlockKind::SecondOrder(n) | BlockKind::Psd(n) => n,
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::NonNeg(n) => write!(f, "nn:{n}"),
            BlockKind::SecondOrder(n) => write!(f, "soc:{n}"),
            BlockKind::Psd(n) => write!(f, "psd:{n}"),
        }
    }
}

/// Ordered product of cone blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    blocks: Vec<BlockKind>,
    offsets: Vec<usize>,
    dim: usize,
}

impl ConeSpec {
    pub fn new(blocks: Vec<BlockKind>) -> Result<Self, ConeError> {
        if blocks.is_empty() {
            return Err(ConeError::InvalidSpec("no blocks".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            if b.order() == 0 {
                return Err(ConeError::InvalidSpec(format!("block {b} has zero size")));
            }
            offsets.push(dim);
            dim += b.dim();
        }
        Ok(Self {
            blocks,
            offsets,
            dim,
        })
    }

    pub fn nonneg(n: usize) -> Result<Self, ConeError> {
        Self::new(vec![BlockKind::NonNeg(n)])
    }

    pub fn second_order(n: usize) -> Result<Self, ConeError> {
        Self::new(vec![BlockKind::SecondOrder(n)])
    }

    pub fn psd(n: usize) -> Result<Self, ConeError> {
        Self::new(vec![BlockKind::Psd(n)])
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn block_range(&self, k: usize) -> Range<usize> {
        let start = self.offsets[k];
        start..start + self.blocks[k].dim()
    }

    /// `(kind, coordinate range)` for every block, in order.
    pub fn iter_blocks(&self) -> impl Iterator<Item = (BlockKind, Range<usize>)> + '_ {
        (0..self.blocks.len()).map(move |k| (self.blocks[k], self.block_range(k)))
    }

    pub fn check_point(&self, x: &[f64]) -> Result<(), ConeError> {
        if x.len() != self.dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(ConeError::NonFinite { index });
        }
        Ok(())
    }

    /// The point `e` with `interior_margin(e) = 1`: ones, `(0, √2)` and `svec(I)`.
    pub fn identity_element(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim];
        for (kind, r) in self.iter_blocks() {
            let blk = &mut e[r];
            match kind {
                BlockKind::NonNeg(_) => blk.fill(1.0),
                BlockKind::SecondOrder(n) => blk[n] = std::f64::consts::SQRT_2,
                BlockKind::Psd(n) => {
                    for j in 0..n {
                        blk[svec_index(n, j, j)] = 1.0;
                    }
                }
            }
        }
        e
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for ConeSpec {
    type Err = ConeError;

    /// Parses strings like `nn:20`, `soc:9` or `nn:5+soc:4+psd:4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut blocks = Vec::new();
        for part in s.trim().split('+') {
            let (name, size) = part.trim().split_once(':').ok_or_else(|| {
                ConeError::InvalidSpec(format!("expected kind:size, got {part:?}"))
            })?;
            let n: usize = size
                .trim()
                .parse()
                .map_err(|_| ConeError::InvalidSpec(format!("bad block size {size:?}")))?;
            blocks.push(match name.trim() {
                "nn" | "lp" => BlockKind::NonNeg(n),
                "soc" => BlockKind::SecondOrder(n),
                "psd" | "sdp" => BlockKind::Psd(n),
                other => {
                    return Err(ConeError::InvalidSpec(format!(
                        "unknown block kind {other:?}"
                    )))
                }
            });
        }
        Self::new(blocks)
    }
}

/// Position of entry `(i, j)` (either triangle) inside `svec` of an `n x n` matrix.
#[inline]
pub fn svec_index(n: usize, i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    // columns 0..c of the lower triangle hold n + (n-1) + ... + (n-c+1) entries
    c * n - c * (c.saturating_sub(1)) / 2 + (r - c)
}

/// Scaled vectorization of a symmetric matrix.
pub fn svec(x: &DenseMatrix) -> Result<Vec<f64>, ConeError> {
    let n = x.rows();
    if x.cols() != n {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: x.cols(),
        }
        .into());
    }
    let asym = x.asymmetry();
    if asym > linalg::SYMMETRY_TOL * x.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(LinalgError::NotSymmetric { asymmetry: asym }.into());
    }
    Ok(svec_unchecked(x))
}

pub(crate) fn svec_unchecked(x: &DenseMatrix) -> Vec<f64> {
    let n = x.rows();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        v.push(x[(j, j)]);
        for i in (j + 1)..n {
            v.push(std::f64::consts::SQRT_2 * 0.5 * (x[(i, j)] + x[(j, i)]));
        }
    }
    v
}

/// Inverse of [`svec`].
pub fn smat(n: usize, v: &[f64]) -> Result<DenseMatrix, ConeError> {
    if v.len() != n * (n + 1) / 2 {
        return Err(ConeError::DimensionMismatch {
            expected: n * (n + 1) / 2,
            found: v.len(),
        });
    }
    let mut x = DenseMatrix::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        x[(j, j)] = v[k];
        k += 1;
        for i in (j + 1)..n {
            let off = v[k] * std::f64::consts::FRAC_1_SQRT_2;
            x[(i, j)] = off;
            x[(j, i)] = off;
            k += 1;
        }
    }
    Ok(x)
}

pub(crate) fn project_soc(blk: &mut [f64]) {
    let n = blk.len() - 1;
    let t = blk[n];
    let nv = linalg::norm(&blk[..n]);
    if nv <= t {
        return;
    }
    if nv <= -t {
        blk.fill(0.0);
        return;
    }
    let a = (nv + t) / (2.0 * nv);
    for v in &mut blk[..n] {
        *v *= a;
    }
    blk[n] = a * nv;
}

pub(crate) fn project_psd(n: usize, blk: &mut [f64]) -> Result<(), ConeError> {
    let x = smat(n, blk)?;
    let eig = linalg::sym_eig(&x)?;
    if eig.min() >= 0.0 {
        return Ok(());
    }
    let xp = eig.reconstruct_with(|l| l.max(0.0));
    blk.copy_from_slice(&svec_unchecked(&xp));
    Ok(())
}

pub(crate) fn project_block(kind: BlockKind, blk: &mut [f64]) -> Result<(), ConeError> {
    match kind {
        BlockKind::NonNeg(_) => {
            blk.iter_mut().for_each(|v| *v = v.max(0.0));
            Ok(())
        }
        BlockKind::SecondOrder(_) => {
            project_soc(blk);
            Ok(())
        }
        BlockKind::Psd(n) => project_psd(n, blk),
    }
}

/// Euclidean projection `P_K(x)`.
pub fn proj_cone(spec: &ConeSpec, x: &[f64]) -> Result<Vec<f64>, ConeError> {
    spec.check_point(x)?;
    let mut out = x.to_vec();
    for (kind, r) in spec.iter_blocks() {
        project_block(kind, &mut out[r])?;
    }
    Ok(out)
}

/// Moreau decomposition `x = x₊ + x₋` with `x₊ = P_K(x)`, `x₋ = P_{K°}(x)`.
pub fn moreau_split(spec: &ConeSpec, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>), ConeError> {
    let plus = proj_cone(spec, x)?;
    let minus = linalg::sub(x, &plus);
    Ok((plus, minus))
}

pub(crate) fn block_margin(kind: BlockKind, blk: &[f64]) -> Result<f64, ConeError> {
    Ok(match kind {
        BlockKind::NonNeg(_) => blk.iter().copied().fold(f64::INFINITY, f64::min),
        BlockKind::SecondOrder(n) => {
            (blk[n] - linalg::norm(&blk[..n])) * std::f64::consts::FRAC_1_SQRT_2
        }
        BlockKind::Psd(n) => linalg::sym_eig(&smat(n, blk)?)?.min(),
    })
}

/// Signed distance-like margin: positive iff `x ∈ int(K)`.
///
/// Minimum over blocks of `min_i x_i`, `(t - ‖v‖)/√2` and `λ_min(X)`. For
/// points of the cone this is the Euclidean distance to the boundary.
pub fn interior_margin(spec: &ConeSpec, x: &[f64]) -> Result<f64, ConeError> {
    spec.check_point(x)?;
    let mut m = f64::INFINITY;
    for (kind, r) in spec.iter_blocks() {
        m = m.min(block_margin(kind, &x[r])?);
    }
    Ok(m)
}

/// `interior_margin(x) ≥ -tol`.
pub fn is_member(spec: &ConeSpec, x: &[f64], tol: f64) -> Result<bool, ConeError> {
    Ok(interior_margin(spec, x)? >= -tol)
}
