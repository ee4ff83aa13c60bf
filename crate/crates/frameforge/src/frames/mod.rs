//! Finite frames: construction, validation, generators, and the Gram-matrix
//! spanning machinery.
//!
//! The central criterion: for a Parseval frame with Gram matrix `G` and an
//! index subset `B`, the subfamily indexed by `B` spans if and only if 1 is
//! not an eigenvalue of the compression `D_{B^c} G D_{B^c}`. Every spanning
//! verdict here is computed both by that eigenvalue route and by a plain
//! rank computation, and the two must agree.

pub mod csv;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::exact::{q_from_f64, Q, QMat};
use crate::linalg::{sym_eigen, Ctx, Mat, ScalarMode, Tolerance};

/// An ordered family of `M` vectors in `R^N`, with an optional exact
/// rational twin of the entries.
///
/// Spanning is a property checked by [`validate_frame`], not enforced at
/// construction: the matroid machinery deliberately works on degenerate
/// families too.
#[derive(Clone, Debug)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<Q>>>,
    labels: Option<Vec<String>>,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || vectors.is_empty() {
            return Err(Error::InvalidShape(
                "a frame needs at least one vector in dimension >= 1".into(),
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidShape(format!(
                    "vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidShape(format!("vector {i} has a non-finite entry")));
            }
        }
        Ok(Frame {
            dim,
            vectors,
            exact: None,
            labels: None,
        })
    }

    /// Builds from exact rational vectors; the float view is derived.
    pub fn from_rational(dim: usize, vectors: Vec<Vec<Q>>) -> Result<Self> {
        let float: Vec<Vec<f64>> = vectors
            .iter()
            .map(|v| v.iter().map(crate::linalg::exact::q_to_f64).collect())
            .collect();
        let mut f = Frame::new(dim, float)?;
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidShape("rational vector length mismatch".into()));
        }
        f.exact = Some(vectors);
        Ok(f)
    }

    /// Attaches the lossless rational lift of the float entries (every
    /// finite `f64` is exactly `p / 2^k`). Makes exact-mode decisions
    /// available on generator output.
    pub fn with_dyadic_exact(mut self) -> Self {
        if self.exact.is_none() {
            self.exact = Some(
                self.vectors
                    .iter()
                    .map(|v| v.iter().map(|&x| q_from_f64(x)).collect())
                    .collect(),
            );
        }
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::InvalidShape("label count mismatch".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_vectors(&self) -> Option<&[Vec<Q>]> {
        self.exact.as_deref()
    }

    /// The `M x N` matrix whose rows are the frame vectors.
    pub fn as_mat(&self) -> Mat {
        Mat::from_rows(self.vectors.clone()).expect("validated shape")
    }

    pub fn as_qmat(&self) -> Result<QMat> {
        let rows = self.exact.as_ref().ok_or(Error::ExactUnavailable)?;
        QMat::from_rows(rows.clone())
    }

    pub fn subset_mat(&self, idx: &[usize]) -> Mat {
        Mat::from_rows(idx.iter().map(|&i| self.vectors[i].clone()).collect())
            .expect("validated shape")
    }

    pub fn subset_qmat(&self, idx: &[usize]) -> Result<QMat> {
        let rows = self.exact.as_ref().ok_or(Error::ExactUnavailable)?;
        QMat::from_rows(idx.iter().map(|&i| rows[i].clone()).collect())
    }

    /// Rank of the subfamily, decided by the context's arithmetic.
    pub fn subset_rank(&self, idx: &[usize], ctx: Ctx) -> Result<usize> {
        match ctx.mode {
            ScalarMode::Float => {
                if idx.is_empty() {
                    return Ok(0);
                }
                Ok(self.subset_mat(idx).rank(ctx.tol))
            }
            ScalarMode::Exact => {
                if idx.is_empty() {
                    return Ok(0);
                }
                Ok(self.subset_qmat(idx)?.rank())
            }
        }
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum())
            .collect()
    }

    pub fn max_norm_sq(&self) -> f64 {
        self.norms_sq().into_iter().fold(0.0, f64::max)
    }

    /// Frame operator `S = sum_i f_i f_i^T`, an `N x N` PSD matrix.
    pub fn frame_operator(&self) -> Mat {
        let mut s = Mat::zeros(self.dim, self.dim);
        for v in &self.vectors {
            for i in 0..self.dim {
                if v[i] == 0.0 {
                    continue;
                }
                for j in 0..self.dim {
                    let x = s.get(i, j) + v[i] * v[j];
                    s.set(i, j, x);
                }
            }
        }
        s
    }
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// The `M x M` matrix of pairwise inner products, with an exact twin when
/// the frame has one.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub mat: Mat,
    pub exact: Option<QMat>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    /// Entrywise deviation of `G^2` from `G`.
    pub fn projection_deviation(&self) -> f64 {
        self.mat.matmul(&self.mat).sub(&self.mat).max_abs()
    }

    /// Whether the exact twin satisfies `G^2 = G` exactly.
    pub fn is_projection_exact(&self) -> Option<bool> {
        self.exact
            .as_ref()
            .map(|g| g.matmul(g).sub(g).is_zero())
    }
}

/// Frame bounds via the frame operator spectrum. Fails with `NotAFrame`
/// when the family does not span (smallest eigenvalue at or below the
/// eigenvalue tolerance).
pub fn validate_frame(f: &Frame, tol: Tolerance) -> Result<FrameBounds> {
    let (vals, _) = sym_eigen(&f.frame_operator());
    let lower = *vals.first().expect("dim >= 1");
    let upper = *vals.last().expect("dim >= 1");
    if lower <= tol.eig_abs {
        return Err(Error::NotAFrame { lambda_min: lower });
    }
    Ok(FrameBounds { lower, upper })
}

/// Parseval test, computed through both equivalent characterizations:
/// frame operator equal to the identity, and Gram matrix idempotent. For a
/// spanning family the two agree; a non-spanning family can have an
/// idempotent Gram while missing directions, so the frame-operator route is
/// the binding one and both must pass.
pub fn is_parseval(f: &Frame, tol: Tolerance) -> bool {
    let op_dev = f.frame_operator().sub(&Mat::identity(f.dim)).max_abs();
    let route_operator = op_dev <= 10.0 * tol.eig_abs;
    let route_gram = gram(f).projection_deviation() <= 10.0 * tol.eig_abs;
    route_operator && route_gram
}

fn parseval_deviation(f: &Frame, _tol: Tolerance) -> f64 {
    f.frame_operator().sub(&Mat::identity(f.dim)).max_abs()
}

fn require_parseval(f: &Frame, tol: Tolerance) -> Result<()> {
    if !is_parseval(f, tol) {
        return Err(Error::NotParseval {
            deviation: parseval_deviation(f, tol),
        });
    }
    Ok(())
}

/// Pairwise inner products, exact where the frame carries rational entries.
pub fn gram(f: &Frame) -> GramMatrix {
    let m = f.len();
    let mut g = Mat::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let dot: f64 = f.vectors[i]
                .iter()
                .zip(f.vectors[j].iter())
                .map(|(a, b)| a * b)
                .sum();
            g.set(i, j, dot);
            g.set(j, i, dot);
        }
    }
    let exact = f.exact.as_ref().map(|rows| {
        let mut gq = QMat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut dot = Q::zero();
                for (a, b) in rows[i].iter().zip(rows[j].iter()) {
                    dot += a * b;
                }
                gq.set(i, j, dot.clone());
                gq.set(j, i, dot);
            }
        }
        gq
    });
    GramMatrix { mat: g, exact }
}

/// Splits the Gram of a Parseval frame under an orthogonal projector `P`:
/// returns `(G, R, Q)` with `R` the Gram of `{P f_i}` and `Q` the Gram of
/// `{(I-P) f_i}`. Verifies `G = R + Q` and that all three are idempotent.
pub fn gram_split(f: &Frame, projector: &Mat, tol: Tolerance) -> Result<(Mat, Mat, Mat)> {
    require_parseval(f, tol)?;
    if projector.rows() != f.dim || projector.cols() != f.dim {
        return Err(Error::InvalidShape(format!(
            "projector must be {0} x {0}",
            f.dim
        )));
    }
    if !projector.is_projector(tol) {
        let dev = projector
            .matmul(projector)
            .sub(projector)
            .max_abs()
            .max(projector.asymmetry());
        return Err(Error::NotProjector { deviation: dev });
    }
    let a = f.as_mat();
    let g = a.matmul(&a.transpose());
    let r = a.matmul(projector).matmul(&a.transpose());
    let q = g.sub(&r);
    // Recompute Q independently from (I - P) to catch cancellation issues.
    let ip = Mat::identity(f.dim).sub(projector);
    let q_direct = a.matmul(&ip).matmul(&a.transpose());
    let split_dev = g.sub(&r.add(&q_direct)).max_abs();
    if split_dev > 1e-10 {
        return Err(Error::InternalContractViolation(format!(
            "Gram split G = R + Q violated by {split_dev:.3e}"
        )));
    }
    for (name, m) in [("G", &g), ("R", &r), ("Q", &q_direct)] {
        let dev = m.matmul(m).sub(m).max_abs();
        if dev > 10.0 * tol.eig_abs {
            return Err(Error::InternalContractViolation(format!(
                "{name} is not idempotent: deviation {dev:.3e}"
            )));
        }
    }
    let _ = q;
    Ok((g, r, q_direct))
}

/// Evidence accompanying a spanning verdict.
#[derive(Clone, Debug)]
pub struct SpanEvidence {
    /// Rank of the selected subfamily.
    pub subset_rank: usize,
    /// Ambient dimension the rank is compared against.
    pub ambient_dim: usize,
    /// Top eigenvalue of the compressed Gram on the complement, when the
    /// eigenvalue route ran (Parseval input).
    pub compressed_top_eig: Option<f64>,
    /// Whether the input passed the Parseval test, enabling the eigenvalue
    /// route.
    pub parseval: bool,
}

fn checked_subset(f: &Frame, b: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidShape("duplicate index in subset".into()));
    }
    if let Some(&last) = sorted.last() {
        if last >= f.len() {
            return Err(Error::InvalidShape(format!(
                "index {last} out of range for {} vectors",
                f.len()
            )));
        }
    }
    Ok(sorted)
}

fn complement(len: usize, sorted_b: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; len];
    for &i in sorted_b {
        mask[i] = true;
    }
    (0..len).filter(|&i| !mask[i]).collect()
}

/// Does the subfamily indexed by `b` span the ambient space?
///
/// Computed both ways: (i) rank of the subfamily equals the ambient
/// dimension; (ii) the top eigenvalue of the compressed Gram on the
/// complement stays below 1. Route (ii) is proved for Parseval frames only;
/// on non-Parseval input it is skipped and the evidence says so. The two
/// routes must agree or the call fails with `CriterionMismatch`.
///
/// Values within `eig_abs` of 1 are conservatively treated as eigenvalue 1,
/// i.e. not spanning: marginal input never gets certified.
pub fn spans_subset(f: &Frame, b: &[usize], ctx: Ctx) -> Result<(bool, SpanEvidence)> {
    let b = checked_subset(f, b)?;
    let bc = complement(f.len(), &b);
    let rank = f.subset_rank(&b, ctx)?;
    let rank_verdict = rank == f.dim;

    let parseval = is_parseval(f, ctx.tol);
    if !parseval {
        return Ok((
            rank_verdict,
            SpanEvidence {
                subset_rank: rank,
                ambient_dim: f.dim,
                compressed_top_eig: None,
                parseval: false,
            },
        ));
    }

    let g = gram(f);
    let compressed = g.mat.principal_submatrix(&bc);
    let top = compressed.top_eigenvalue_sym(ctx.tol)?;
    let eig_verdict = match ctx.mode {
        ScalarMode::Float => top <= 1.0 - ctx.tol.eig_abs,
        ScalarMode::Exact => {
            // Exact route only when the Gram is exactly a projection;
            // otherwise the eigenvalue criterion is unproven and the rank
            // route alone decides.
            let gq = g.exact.as_ref().ok_or(Error::ExactUnavailable)?;
            if !gq.matmul(gq).sub(gq).is_zero() {
                return Ok((
                    rank_verdict,
                    SpanEvidence {
                        subset_rank: rank,
                        ambient_dim: f.dim,
                        compressed_top_eig: Some(top),
                        parseval: true,
                    },
                ));
            }
            // 1 is an eigenvalue of the compression iff (C - I) is singular
            // on the complement block.
            let k = bc.len();
            let mut c = QMat::zeros(k, k);
            for (r, &i) in bc.iter().enumerate() {
                for (s, &j) in bc.iter().enumerate() {
                    c.set(r, s, gq.get(i, j).clone());
                }
            }
            for i in 0..k {
                let v = c.get(i, i) - Q::one();
                c.set(i, i, v);
            }
            c.rank() == k
        }
    };

    if rank_verdict != eig_verdict {
        return Err(Error::CriterionMismatch {
            context: "spans_subset".into(),
            rank_verdict,
            eig_verdict,
        });
    }
    Ok((
        rank_verdict,
        SpanEvidence {
            subset_rank: rank,
            ambient_dim: f.dim,
            compressed_top_eig: Some(top),
            parseval: true,
        },
    ))
}

/// Complementarity of spanning and independence under a projector: the
/// projections `{P e_j : j in b}` span the range of `P` exactly when
/// `{(I-P) e_j : j in b^c}` is linearly independent. Returns both booleans
/// and errors if they disagree.
pub fn complementarity_check(
    basis_dim: usize,
    projector: &Mat,
    b: &[usize],
    tol: Tolerance,
) -> Result<(bool, bool)> {
    if projector.rows() != basis_dim || projector.cols() != basis_dim {
        return Err(Error::InvalidShape(format!(
            "projector must be {basis_dim} x {basis_dim}"
        )));
    }
    if !projector.is_projector(tol) {
        let dev = projector
            .matmul(projector)
            .sub(projector)
            .max_abs()
            .max(projector.asymmetry());
        return Err(Error::NotProjector { deviation: dev });
    }
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&i| i >= basis_dim) {
        return Err(Error::InvalidShape("bad index subset".into()));
    }
    let bc = complement(basis_dim, &sorted);

    // {P e_j} for j in b are rows of P (P is symmetric). These projections
    // of unit vectors live on the unit scale, so rank decisions carry that
    // scale as a floor: a projection that is mathematically zero shows up
    // as rounding noise and must not count toward the rank.
    let p_rows = projector.select_rows(&sorted);
    let spans = p_rows.rank_with_scale(tol, 1.0) == projector.rank_with_scale(tol, 1.0);

    let ip = Mat::identity(basis_dim).sub(projector);
    let ip_rows = ip.select_rows(&bc);
    let independent = ip_rows.rank_with_scale(tol, 1.0) == bc.len();

    if spans != independent {
        return Err(Error::CriterionMismatch {
            context: "complementarity_check".into(),
            rank_verdict: spans,
            eig_verdict: independent,
        });
    }
    Ok((spans, independent))
}

/// Real harmonic frame: `m` vectors in `R^n` from scaled cosine/sine rows
/// of the `m`-point trigonometric system. Equal norms `n/m`, Parseval.
///
/// Column selection keeps norms equal: the constant column and (for even
/// `m`) the alternating column contribute `1/m` each, a cosine/sine pair
/// contributes `2/m`.
pub fn harmonic_frame(n: usize, m: usize) -> Result<Frame> {
    if n == 0 || m < n {
        return Err(Error::InvalidShape(format!(
            "harmonic frame needs m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    // Column plan.
    let mut use_constant = false;
    let mut use_alternating = false;
    let pairs: usize;
    if n % 2 == 1 {
        use_constant = true;
        pairs = (n - 1) / 2;
    } else if m % 2 == 1 {
        pairs = n / 2;
    } else {
        use_constant = true;
        use_alternating = true;
        pairs = (n - 2) / 2;
    }
    let max_pairs = if m % 2 == 0 { m / 2 - 1 } else { (m - 1) / 2 };
    debug_assert!(pairs <= max_pairs, "column plan exceeds available pairs");

    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    let pair_scale = (2.0 / m as f64).sqrt();
    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let mut v = Vec::with_capacity(n);
        if use_constant {
            v.push(inv_sqrt_m);
        }
        if use_alternating {
            v.push(if j % 2 == 0 { inv_sqrt_m } else { -inv_sqrt_m });
        }
        for k in 1..=pairs {
            // Reduce k*j mod m before the trig call for accuracy.
            let angle = 2.0 * std::f64::consts::PI * ((k * j) % m) as f64 / m as f64;
            v.push(pair_scale * angle.cos());
            v.push(pair_scale * angle.sin());
        }
        debug_assert_eq!(v.len(), n);
        vectors.push(v);
    }
    Frame::new(n, vectors)
}

/// Seeded random Parseval frame: orthonormalize `n` columns of an `m x n`
/// Gaussian matrix; the rows form the frame. Deterministic per seed.
pub fn random_parseval(n: usize, m: usize, seed: u64) -> Result<Frame> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    if n == 0 || m < n {
        return Err(Error::InvalidShape(format!(
            "random Parseval frame needs m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    let mut attempt_seed = seed;
    for _ in 0..8 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(attempt_seed);
        // Columns of the m x n matrix.
        let mut cols: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect::<Vec<f64>>()
            })
            .collect();
        // Modified Gram-Schmidt with one re-orthogonalization pass.
        let mut ok = true;
        for j in 0..n {
            for _pass in 0..2 {
                for k in 0..j {
                    let dot: f64 = (0..m).map(|i| cols[j][i] * cols[k][i]).sum();
                    for i in 0..m {
                        cols[j][i] -= dot * cols[k][i];
                    }
                }
            }
            let norm: f64 = (0..m).map(|i| cols[j][i] * cols[j][i]).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for i in 0..m {
                cols[j][i] /= norm;
            }
        }
        if ok {
            let vectors: Vec<Vec<f64>> = (0..m)
                .map(|i| (0..n).map(|j| cols[j][i]).collect())
                .collect();
            return Frame::new(n, vectors);
        }
        attempt_seed = attempt_seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    }
    Err(Error::InternalContractViolation(
        "random matrix repeatedly rank-deficient".into(),
    ))
}

/// `r` copies of the standard basis of `R^n`, each scaled by `1/sqrt(r)`.
/// Parseval with `||f_i||^2 = 1/r` exactly.
pub fn scaled_union_of_bases(n: usize, r: usize) -> Frame {
    assert!(n >= 1 && r >= 1, "need n >= 1 and r >= 1");
    let s = 1.0 / (r as f64).sqrt();
    let mut vectors = Vec::with_capacity(n * r);
    for _copy in 0..r {
        for j in 0..n {
            let mut v = vec![0.0; n];
            v[j] = s;
            vectors.push(v);
        }
    }
    Frame::new(n, vectors).expect("valid shape")
}
