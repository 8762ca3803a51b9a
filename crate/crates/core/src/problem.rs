//! Problem data `min ⟨c, x⟩ s.t. A x = b, x ∈ K` and primal–dual solution pairs.

use thiserror::Error;

use crate::cone::{ConeError, ConeSpec};
use crate::linalg::{self, DenseMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("A is {rows}x{cols} but expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Conic program data. `A` is stored densely as `m x dim(E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub spec: ConeSpec,
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ProblemData {
    pub fn new(
        spec: ConeSpec,
        a: DenseMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        if a.cols() != spec.dim() || a.rows() != b.len() {
            return Err(ProblemError::ShapeMismatch {
                rows: a.rows(),
                cols: a.cols(),
                expected_rows: b.len(),
                expected_cols: spec.dim(),
            });
        }
        if c.len() != spec.dim() {
            return Err(ProblemError::LengthMismatch {
                what: "c",
                expected: spec.dim(),
                found: c.len(),
            });
        }
        if !a.is_finite() {
            return Err(ProblemError::NonFinite("A"));
        }
        if !b.iter().chain(&c).all(|v| v.is_finite()) {
            return Err(ProblemError::NonFinite("b/c"));
        }
        Ok(Self { spec, a, b, c })
    }

    /// Number of linear constraints.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// `c - Aᵀ y`.
    pub fn slack(&self, y: &[f64]) -> Result<Vec<f64>, ProblemError> {
        Ok(linalg::sub(&self.c, &self.a.matvec_t(y)?))
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        Ok(linalg::sub(&self.a.matvec(x)?, &self.b))
    }
}

/// Primal–dual pair `(x⋆, y⋆, s⋆)` with `s⋆ = c - Aᵀ y⋆`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
}

impl SolutionPair {
    /// Builds the pair, deriving `s⋆` from the dual vector.
    pub fn from_dual(data: &ProblemData, x: Vec<f64>, y: Vec<f64>) -> Result<Self, ProblemError> {
        if x.len() != data.dim() {
            return Err(ProblemError::LengthMismatch {
                what: "x_star",
                expected: data.dim(),
                found: x.len(),
            });
        }
        if y.len() != data.m() {
            return Err(ProblemError::LengthMismatch {
                what: "y_star",
                expected: data.m(),
                found: y.len(),
            });
        }
        let s = data.slack(&y)?;
        Ok(Self { x, y, s })
    }

    /// `|⟨c, x⋆⟩ - ⟨b, y⋆⟩|` and the scale `1 + |⟨c, x⋆⟩| + |⟨b, y⋆⟩|`.
    pub fn duality_gap(&self, data: &ProblemData) -> (f64, f64) {
        let p = linalg::dot(&data.c, &self.x);
        let d = linalg::dot(&data.b, &self.y);
        ((p - d).abs(), 1.0 + p.abs() + d.abs())
    }
}
