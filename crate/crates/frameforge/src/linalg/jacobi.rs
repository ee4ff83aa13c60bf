//! Cyclic Jacobi eigendecomposition for small dense symmetric matrices.
//!
//! Full diagonalization rather than an iterative top-eigenpair method:
//! compressed Gram matrices routinely carry multiple eigenvalues at or near
//! 1, and power-type iterations stall there.

use super::Mat;

/// Hard cap on sweeps; well-conditioned inputs converge in well under ten.
const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of the symmetrization of `a`.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the columns of the second return value. Input asymmetry is averaged away;
/// callers that care about asymmetry check it first.
pub fn sym_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "sym_eigen needs a square matrix");
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }

    // Work on the symmetrized copy.
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = 1e-14 * frob.max(1.0);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Stable rotation: t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v[row * n + old_col]);
        }
    }
    (values, vectors)
}

/// One-sided Jacobi orthogonalization of the columns of `a`, in place on a
/// column-major copy. Returns the columns after convergence; their norms
/// are the singular values to near machine precision even for exactly
/// dependent inputs (no normal-matrix squaring of the condition number).
pub fn one_sided_jacobi(a: &Mat) -> Vec<Vec<f64>> {
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| a.get(i, j)).collect())
        .collect();
    if m == 0 || n < 2 {
        return cols;
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in (i + 1)..n {
                let aa: f64 = cols[i].iter().map(|x| x * x).sum();
                let bb: f64 = cols[j].iter().map(|x| x * x).sum();
                let ab: f64 = cols[i].iter().zip(cols[j].iter()).map(|(x, y)| x * y).sum();
                if aa == 0.0 || bb == 0.0 {
                    continue;
                }
                if ab.abs() <= 1e-15 * (aa * bb).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (bb - aa) / (2.0 * ab);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (zeta * zeta + 1.0).sqrt())
                } else {
                    -1.0 / (-zeta + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let x = cols[i][k];
                    let y = cols[j][k];
                    cols[i][k] = c * x - s * y;
                    cols[j][k] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols
}
