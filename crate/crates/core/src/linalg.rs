//! Dense linear algebra used by every other module.
//!
//! Everything here is deliberately small: a row-major [`DenseMatrix`], a
//! cyclic Jacobi eigensolver for symmetric matrices, and the singular-value
//! and pseudoinverse helpers built on top of it. Problem sizes are desk scale
//! (a few hundred rows at most), so no blocking or sparsity is attempted.

use std::fmt;

use thiserror::Error;

/// Relative threshold used for rank decisions (`τ·λ_max`).
pub const RANK_TOL: f64 = 1e-8;

/// Relative eigenvalue cutoff used when inverting a Gram matrix.
pub const PINV_TOL: f64 = 1e-10;

/// Relative symmetry tolerance accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

const JACOBI_OFF_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("non-finite entry encountered")]
    NonFinite,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("basis columns are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("right-hand side is not in the range of the map (relative residual {residual:e})")]
    NotInRange { residual: f64 },
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(LinalgError::DimensionMismatch {
                    expected: ncols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols: ncols,
            data,
        })
    }

    /// Builds a `len x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != len {
                return Err(LinalgError::DimensionMismatch {
                    expected: len,
                    found: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `selfᵀ * y`.
    pub fn matvec_t(&self, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if y.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (i, yi) in y.iter().enumerate() {
            if *yi != 0.0 {
                axpy(*yi, self.row(i), &mut out);
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                axpy(a, orow, dst);
            }
        }
        Ok(out)
    }

    /// `selfᵀ self` (cols x cols).
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for (gij, rj) in g.data[i * n + i..(i + 1) * n].iter_mut().zip(&row[i..]) {
                    *gij += ri * rj;
                }
            }
        }
        mirror_upper(&mut g);
        g
    }

    /// `self selfᵀ` (rows x rows).
    pub fn outer_gram(&self) -> Self {
        let n = self.rows;
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                g.data[i * n + j] = dot(self.row(i), self.row(j));
            }
        }
        mirror_upper(&mut g);
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.add(&other.scaled(-1.0))
    }
}

fn mirror_upper(g: &mut DenseMatrix) {
    let n = g.rows;
    for i in 0..n {
        for j in 0..i {
            g.data[i * n + j] = g.data[j * n + i];
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`.
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(alpha: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|v| alpha * v).collect()
}

/// Symmetric eigendecomposition `X = Q diag(λ) Qᵀ` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds `Q diag(f(λ)) Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let mut out = DenseMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let qi = w * q[(i, k)];
                if qi == 0.0 {
                    continue;
                }
                for j in i..n {
                    out[(i, j)] += qi * q[(j, k)];
                }
            }
        }
        mirror_upper(&mut out);
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps until every off-diagonal entry is below `1e-12·‖X‖_F`, or fails
/// after [`MAX_JACOBI_SWEEPS`] sweeps.
pub fn sym_eig(x: &DenseMatrix) -> Result<EigenDecomposition, LinalgError> {
    if x.rows != x.cols {
        return Err(LinalgError::NotSquare {
            rows: x.rows,
            cols: x.cols,
        });
    }
    if !x.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = x.rows;
    let fro = x.frobenius_norm();
    let asym = x.asymmetry();
    if asym > SYMMETRY_TOL * fro.max(f64::MIN_POSITIVE) {
        return Err(LinalgError::NotSymmetric { asymmetry: asym });
    }

    let mut a = x.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let target = JACOBI_OFF_TOL * fro;

    let mut converged = n <= 1;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if max_off_diagonal(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    if !converged && max_off_diagonal(&a) > target {
        return Err(LinalgError::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&k| a[(k, k)]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn max_off_diagonal(a: &DenseMatrix) -> f64 {
    let n = a.rows;
    let mut m = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

// A ← Jᵀ A J, V ← V J with J the (p, q) plane rotation.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Eigenvalues of the smaller of `AᵀA` and `AAᵀ`; both share the nonzero spectrum.
fn small_gram_eig(map: &DenseMatrix) -> Result<EigenDecomposition, LinalgError> {
    if !map.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if map.rows <= map.cols {
        sym_eig(&map.outer_gram())
    } else {
        sym_eig(&map.gram())
    }
}

/// Largest singular value `max_{‖x‖=1} ‖A x‖`.
pub fn sigma_max(map: &DenseMatrix) -> Result<f64, LinalgError> {
    if map.rows == 0 || map.cols == 0 {
        return Ok(0.0);
    }
    Ok(small_gram_eig(map)?.max().max(0.0).sqrt())
}

/// Smallest singular value over the orthogonal complement of the nullspace.
///
/// Returns 0 for the zero map.
pub fn sigma_min_positive(map: &DenseMatrix) -> Result<f64, LinalgError> {
    if map.rows == 0 || map.cols == 0 {
        return Ok(0.0);
    }
    let eig = small_gram_eig(map)?;
    let cutoff = RANK_TOL * eig.max();
    Ok(eig
        .eigenvalues
        .iter()
        .copied()
        .find(|&l| l > cutoff)
        .map_or(0.0, f64::sqrt))
}

/// Smallest singular value of a map restricted to a subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedSigma {
    /// `σ_min(A_V)`; `+∞` when the subspace is `{0}`.
    pub value: f64,
    /// The subspace was `{0}`.
    pub trivial_subspace: bool,
}

/// `σ_min(A_V)` where `basis` holds an orthonormal basis of `V` as columns.
pub fn sigma_min_restricted(
    map: &DenseMatrix,
    basis: &DenseMatrix,
) -> Result<RestrictedSigma, LinalgError> {
    if basis.rows != map.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: map.cols,
            found: basis.rows,
        });
    }
    if basis.cols == 0 {
        return Ok(RestrictedSigma {
            value: f64::INFINITY,
            trivial_subspace: true,
        });
    }
    let residual = basis
        .gram()
        .sub(&DenseMatrix::identity(basis.cols))?
        .frobenius_norm();
    if residual > 1e-10 * (basis.cols as f64).sqrt().max(1.0) {
        return Err(LinalgError::NotOrthonormal { residual });
    }
    if basis.cols > map.rows {
        // rank(A Q) <= rows < cols; the Gram eigenvalue would only be roundoff
        return Ok(RestrictedSigma {
            value: 0.0,
            trivial_subspace: false,
        });
    }
    let restricted = map.matmul(basis)?;
    let eig = sym_eig(&restricted.gram())?;
    Ok(RestrictedSigma {
        value: eig.min().max(0.0).sqrt(),
        trivial_subspace: false,
    })
}

/// Cached minimum-norm solver `y ↦ argmin { ‖x‖ : A x = y }`.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    map: DenseMatrix,
    // eigendecomposition of A Aᵀ
    eig: EigenDecomposition,
    cutoff: f64,
}

impl PseudoInverse {
    pub fn new(map: &DenseMatrix) -> Result<Self, LinalgError> {
        if !map.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let eig = sym_eig(&map.outer_gram())?;
        let cutoff = PINV_TOL * eig.max().max(0.0);
        Ok(Self {
            map: map.clone(),
            eig,
            cutoff,
        })
    }

    pub fn map(&self) -> &DenseMatrix {
        &self.map
    }

    /// Largest singular value of `A^†`, i.e. `1/σ_{min>0}(A)`.
    pub fn norm(&self) -> f64 {
        self.eig
            .eigenvalues
            .iter()
            .copied()
            .find(|&l| l > self.cutoff)
            .map_or(0.0, |l| 1.0 / l.sqrt())
    }

    // (A Aᵀ)^† z
    fn gram_solve(&self, z: &[f64]) -> Vec<f64> {
        let m = self.map.rows;
        let q = &self.eig.eigenvectors;
        let mut out = vec![0.0; m];
        for (k, &lam) in self.eig.eigenvalues.iter().enumerate() {
            if lam <= self.cutoff || lam <= 0.0 {
                continue;
            }
            let coeff = (0..m).map(|i| q[(i, k)] * z[i]).sum::<f64>() / lam;
            for (i, oi) in out.iter_mut().enumerate() {
                *oi += coeff * q[(i, k)];
            }
        }
        out
    }

    /// Least-squares minimum-norm solution, no range check.
    pub fn apply_unchecked(&self, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let m = self.map.rows;
        if y.len() != m {
            return Err(LinalgError::DimensionMismatch {
                expected: m,
                found: y.len(),
            });
        }
        self.map.matvec_t(&self.gram_solve(y))
    }

    /// `(Aᵀ)^† v`, the least-squares solution of `Aᵀ y = v`.
    pub fn apply_adjoint(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        Ok(self.gram_solve(&self.map.matvec(v)?))
    }

    /// Minimum-norm solution of `A x = y`; fails if `y` is not in range.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let x = self.apply_unchecked(y)?;
        let r = sub(&self.map.matvec(&x)?, y);
        let residual = norm(&r) / norm(y).max(f64::MIN_POSITIVE);
        if norm(&r) > 0.0 && residual > 1e-8 {
            return Err(LinalgError::NotInRange { residual });
        }
        Ok(x)
    }
}

/// Minimum-norm solution of `map · x = y`.
pub fn pseudoinverse_apply(map: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
    PseudoInverse::new(map)?.apply(y)
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Columns whose residual falls below `1e-10 · (largest input norm)` are dropped.
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let nw = norm(&w);
        if nw < 1e-10 * scale {
            continue;
        }
        w.iter_mut().for_each(|x| *x /= nw);
        basis.push(w);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn eig_identity() {
        let e = sym_eig(&DenseMatrix::identity(5)).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| close(l, 1.0, 1e-14)));
    }

    #[test]
    fn eig_two_by_two() {
        let x = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eig(&x).unwrap();
        // characteristic polynomial (2-λ)² - 1 = 0
        assert!(close(e.eigenvalues[0], 1.0, 1e-14));
        assert!(close(e.eigenvalues[1], 3.0, 1e-14));
        let r = e.reconstruct().sub(&x).unwrap().frobenius_norm();
        assert!(r < 1e-13);
    }

    #[test]
    fn eig_diagonal_sorted() {
        let e = sym_eig(&DenseMatrix::diag(&[3.0, -1.0, 2.0, 0.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 0.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&x), Err(LinalgError::NotSymmetric { .. })));
        let x = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(sym_eig(&x), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn eig_rejects_nan() {
        let x = DenseMatrix::diag(&[1.0, f64::NAN]);
        assert_eq!(sym_eig(&x).unwrap_err(), LinalgError::NonFinite);
    }

    #[test]
    fn eig_zero_matrix() {
        let e = sym_eig(&DenseMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn sigma_max_examples() {
        assert!(close(
            sigma_max(&DenseMatrix::identity(4)).unwrap(),
            1.0,
            1e-14
        ));
        let row = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        assert!(close(sigma_max(&row).unwrap(), 2f64.sqrt(), 1e-14));
    }

    #[test]
    fn sigma_min_restricted_examples() {
        let id = DenseMatrix::identity(3);
        let s = sigma_min_restricted(&id, &DenseMatrix::identity(3)).unwrap();
        assert!(close(s.value, 1.0, 1e-14));
        assert!(!s.trivial_subspace);

        // [1 1] restricted to {x : x1 = 0}
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let basis = DenseMatrix::from_columns(2, &[vec![0.0, 1.0]]).unwrap();
        assert!(close(
            sigma_min_restricted(&a, &basis).unwrap().value,
            1.0,
            1e-14
        ));

        let empty = DenseMatrix::zeros(2, 0);
        let s = sigma_min_restricted(&a, &empty).unwrap();
        assert!(s.trivial_subspace && s.value.is_infinite());
    }

    #[test]
    fn sigma_min_restricted_rejects_non_orthonormal() {
        let a = DenseMatrix::identity(2);
        let basis = DenseMatrix::from_columns(2, &[vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            sigma_min_restricted(&a, &basis),
            Err(LinalgError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn pseudoinverse_examples() {
        let id = DenseMatrix::identity(3);
        let y = vec![1.0, -2.0, 0.5];
        let x = pseudoinverse_apply(&id, &y).unwrap();
        assert!(norm(&sub(&x, &y)) < 1e-14);

        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let x = pseudoinverse_apply(&a, &[2.0]).unwrap();
        assert!(close(x[0], 1.0, 1e-14) && close(x[1], 1.0, 1e-14));

        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let x = pseudoinverse_apply(&a, &[1.0, 0.0]).unwrap();
        assert!(close(x[0], 1.0, 1e-14) && x[1].abs() < 1e-14);
        assert!(matches!(
            pseudoinverse_apply(&a, &[1.0, 1.0]),
            Err(LinalgError::NotInRange { .. })
        ));
    }

    #[test]
    fn orthonormalize_examples() {
        let e1 = vec![1.0, 0.0];
        assert_eq!(orthonormalize(&[e1.clone(), e1.clone()]), vec![e1.clone()]);

        let q = orthonormalize(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(q.len(), 2);
        assert!(dot(&q[0], &q[1]).abs() < 1e-15);
        assert!(close(norm(&q[0]), 1.0, 1e-15) && close(norm(&q[1]), 1.0, 1e-15));

        let q = orthonormalize(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(q, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }
}
