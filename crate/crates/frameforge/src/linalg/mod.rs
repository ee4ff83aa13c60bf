//! Small dense linear algebra over `f64`, plus the exact rational kernel.
//!
//! Sized for families of at most a few dozen vectors in dimension N of a few
//! tens: dense storage, full symmetric eigendecompositions (cyclic Jacobi),
//! no sparsity, no blocking. Floating-point rank and eigenvalue decisions go
//! through a [`Tolerance`]; when entries are rational, [`exact`] is the
//! arbiter.

pub mod exact;
mod jacobi;

pub use jacobi::sym_eigen;

use crate::error::{Error, Result};

/// Thresholds for floating-point rank and eigenvalue decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Absolute slack for eigenvalue comparisons.
    pub eig_abs: f64,
}

impl Tolerance {
    pub fn new(rank_rel: f64, eig_abs: f64) -> Result<Self> {
        if !(rank_rel > 0.0 && rank_rel < 1e-3 && eig_abs > 0.0 && eig_abs < 1e-3) {
            return Err(Error::InvalidShape(
                "tolerances must lie strictly between 0 and 1e-3".into(),
            ));
        }
        Ok(Tolerance { rank_rel, eig_abs })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-9,
            eig_abs: 1e-9,
        }
    }
}

/// Which arithmetic decides rank and membership questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Float,
    Exact,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Float => "float",
            ScalarMode::Exact => "exact-rational",
        }
    }
}

/// Decision context threaded through every pipeline: tolerances plus the
/// scalar mode. Exact mode requires rational entries on the frame involved.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub tol: Tolerance,
    pub mode: ScalarMode,
}

impl Ctx {
    pub fn float(tol: Tolerance) -> Self {
        Ctx {
            tol,
            mode: ScalarMode::Float,
        }
    }

    pub fn exact(tol: Tolerance) -> Self {
        Ctx {
            tol,
            mode: ScalarMode::Exact,
        }
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::float(Tolerance::default())
    }
}

/// Dense row-major `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Mat::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::InvalidShape("ragged matrix rows".into()));
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Largest entry in absolute value.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest asymmetry `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(r, j, self.get(i, j));
            }
        }
        out
    }

    /// Principal submatrix on the given index set (rows and columns).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut out = Mat::zeros(idx.len(), idx.len());
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                out.set(r, c, self.get(i, j));
            }
        }
        out
    }

    /// Singular values in descending order, by one-sided Jacobi
    /// orthogonalization. Forming `A^T A` would square the condition
    /// number and lift exactly dependent inputs to spurious values near
    /// `sqrt(eps) * sigma_max`, which is above the default rank threshold;
    /// the one-sided sweep keeps them at machine-noise level instead.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        // Work on the orientation with fewer columns.
        let work = if self.cols <= self.rows {
            self.clone()
        } else {
            self.transpose()
        };
        let cols = jacobi::one_sided_jacobi(&work);
        let mut svs: Vec<f64> = cols
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        svs.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        svs
    }

    /// Number of singular values above `rank_rel * sigma_max * max(rows, cols)`.
    pub fn rank(&self, tol: Tolerance) -> usize {
        self.rank_with_scale(tol, 0.0)
    }

    /// Rank with an absolute scale floor: singular values are compared
    /// against `rank_rel * max(rows, cols) * max(sigma_max, scale)`. Used
    /// for derived vectors (projections of unit vectors) whose entries are
    /// pure rounding noise when they are mathematically zero; a purely
    /// relative threshold would count that noise as full rank.
    pub fn rank_with_scale(&self, tol: Tolerance, scale: f64) -> usize {
        let svs = self.singular_values();
        let Some(&smax) = svs.first() else { return 0 };
        if smax <= 0.0 {
            return 0;
        }
        let cut = tol.rank_rel * smax.max(scale) * self.rows.max(self.cols) as f64;
        svs.iter().filter(|&&s| s > cut).count()
    }

    /// Largest eigenvalue of the symmetrization. Errors if the asymmetry
    /// exceeds `eig_abs`. The empty matrix has top eigenvalue 0.
    pub fn top_eigenvalue_sym(&self, tol: Tolerance) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::InvalidShape(
                "top_eigenvalue_sym needs a square matrix".into(),
            ));
        }
        if self.rows == 0 {
            return Ok(0.0);
        }
        let asym = self.asymmetry();
        if asym > tol.eig_abs {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let (vals, _) = sym_eigen(self);
        Ok(*vals.last().expect("nonempty spectrum"))
    }

    /// Largest singular value. For symmetric input this is the largest
    /// eigenvalue magnitude.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Checks symmetry and idempotency within `10 * eig_abs` entrywise.
    pub fn is_projector(&self, tol: Tolerance) -> bool {
        self.rows == self.cols
            && self.asymmetry() <= 10.0 * tol.eig_abs
            && self.matmul(self).sub(self).max_abs() <= 10.0 * tol.eig_abs
    }

    /// Minimum-norm least-squares solution of `self * x = b` through the
    /// pseudoinverse of `A^T A`, with the same spectral cutoff as `rank`.
    pub fn solve_least_squares(&self, b: &[f64], tol: Tolerance) -> Vec<f64> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        if self.cols == 0 {
            return Vec::new();
        }
        let at = self.transpose();
        let ata = at.matmul(self);
        let mut atb = vec![0.0; self.cols];
        for i in 0..self.cols {
            atb[i] = (0..self.rows).map(|k| self.get(k, i) * b[k]).sum();
        }
        let (vals, vecs) = sym_eigen(&ata);
        let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
        let smax = lmax.sqrt();
        let cut = tol.rank_rel * smax * self.rows.max(self.cols) as f64;
        // Normal-equation eigenvalues of dependent directions sit at the
        // eps * lambda_max noise floor; keep the pseudoinverse cutoff above
        // it or noise directions get amplified by 1/lambda.
        let cut2 = (cut * cut).max(64.0 * f64::EPSILON * lmax);
        let mut x = vec![0.0; self.cols];
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= cut2 || lam <= 0.0 {
                continue;
            }
            let mut proj = 0.0;
            for i in 0..self.cols {
                proj += vecs.get(i, k) * atb[i];
            }
            let coeff = proj / lam;
            for i in 0..self.cols {
                x[i] += coeff * vecs.get(i, k);
            }
        }
        x
    }
}

/// Orthogonal projector onto the row span of `span_of`, as an `n x n`
/// symmetric idempotent, where `n = span_of.cols()`. Built by one-sided
/// Jacobi with the same singular-value cutoff as `rank`, so the projector's
/// rank matches `span_of.rank(tol)` by construction. Empty input gives the
/// zero matrix.
pub fn orthoprojector(span_of: &Mat, tol: Tolerance) -> Mat {
    let n = span_of.cols();
    if span_of.rows() == 0 || n == 0 {
        return Mat::zeros(n, n);
    }
    // Columns of the transpose are the spanning vectors.
    let cols = jacobi::one_sided_jacobi(&span_of.transpose());
    let smax = cols
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    if smax <= 0.0 {
        return Mat::zeros(n, n);
    }
    let cut = tol.rank_rel * smax * span_of.rows().max(n) as f64;
    let mut p = Mat::zeros(n, n);
    for col in &cols {
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= cut {
            continue;
        }
        for i in 0..n {
            let ui = col[i] / norm;
            if ui == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = p.get(i, j) + ui * col[j] / norm;
                p.set(i, j, v);
            }
        }
    }
    p
}

/// Exact orthogonal projector onto the row span of a rational matrix:
/// `B^T (B B^T)^{-1} B` over a row basis `B`. Stays rational throughout.
pub fn orthoprojector_exact(span_of: &exact::QMat) -> exact::QMat {
    let n = span_of.cols();
    let basis_idx = span_of.row_basis_indices();
    if basis_idx.is_empty() {
        return exact::QMat::zeros(n, n);
    }
    let b = span_of.select_rows(&basis_idx);
    let bt = b.transpose();
    let gram = b.matmul(&bt);
    let inv = gram
        .inverse()
        .expect("Gram of an independent row basis is invertible");
    bt.matmul(&inv).matmul(&b)
}
