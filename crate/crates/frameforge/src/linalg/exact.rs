//! Exact rational kernel: fraction-free rank, linear solves, inverses.
//!
//! This is the arbiter behind every floating-point rank decision. Entries
//! are arbitrary-precision rationals; rank goes through Bareiss
//! fraction-free elimination on the denominator-cleared integer matrix, so
//! no intermediate rounding of any kind occurs.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact scalar used throughout the rational kernel.
pub type Q = BigRational;

/// Lossless conversion: every finite `f64` is a rational with a power-of-two
/// denominator.
pub fn q_from_f64(x: f64) -> Q {
    BigRational::from_float(x).expect("finite float")
}

pub fn q_to_f64(q: &Q) -> f64 {
    let num = q.numer();
    let den = q.denom();
    // Scale down first when the parts overflow f64 range.
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    if nf.is_finite() && df.is_finite() && df != 0.0 {
        nf / df
    } else {
        // Fall back to string round-trip only in pathological magnitude cases.
        format!("{}", q).parse::<f64>().unwrap_or(f64::NAN)
    }
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    use num::ToPrimitive;
    b.to_f64().unwrap_or(f64::INFINITY)
}

/// Parses `p/q`, integer, or decimal literals (optional exponent) into an
/// exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty numeric literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal with optional exponent: sign? digits (. digits)? ([eE] sign? digits)?
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{}{}", int_part, frac_part);
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(Error::Parse(format!("bad numeric literal `{s}`")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad numeric literal `{s}`")))?;
    let shift = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::new(n, num::pow::pow(ten, shift as usize))
    } else {
        BigRational::from_integer(n * num::pow::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

/// Renders a rational as `p/q` (or a bare integer) in lowest terms.
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense matrix over exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::InvalidShape("ragged rational matrix".into()));
            }
        }
        Ok(QMat {
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

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = &*a - b;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn to_f64(&self) -> super::Mat {
        let mut m = super::Mat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, q_to_f64(self.get(i, j)));
            }
        }
        m
    }

    /// Exact rank by Bareiss fraction-free elimination.
    ///
    /// Denominators are cleared row by row first (row scaling never changes
    /// rank); elimination then stays in integers, every division being exact
    /// by the Sylvester identity.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                lcm = num::integer::lcm(lcm, self.get(i, j).denom().clone());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|j| {
                    let q = self.get(i, j);
                    q.numer() * (&lcm / q.denom())
                })
                .collect();
            a.push(row);
        }

        let mut rank = 0usize;
        let mut prev = BigInt::one();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot_row) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot_row);
            for i in (rank + 1)..self.rows {
                for j in (col + 1)..self.cols {
                    let num = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                    a[i][j] = num / &prev;
                }
                a[i][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// One exact solution of `self * x = b` (free variables set to zero), or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let n = self.rows;
        let m = self.cols;
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row: Vec<Q> = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();

        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].clone();
            for j in c..=m {
                a[r][j] = &a[r][j] / &inv;
            }
            for i in 0..n {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..=m {
                        a[i][j] = &a[i][j] - &f * &a[r][j];
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        // Inconsistent if a zero row has a nonzero rhs.
        for i in r..n {
            if !a[i][m].is_zero() {
                return None;
            }
        }
        let mut x = vec![Q::zero(); m];
        for (row, &c) in pivot_cols.iter().enumerate() {
            x[c] = a[row][m].clone();
        }
        Some(x)
    }

    /// Exact inverse via Gauss-Jordan, or `None` if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    let tmp_a = a.get(p, j).clone();
                    a.set(p, j, a.get(c, j).clone());
                    a.set(c, j, tmp_a);
                    let tmp_i = inv.get(p, j).clone();
                    inv.set(p, j, inv.get(c, j).clone());
                    inv.set(c, j, tmp_i);
                }
            }
            let d = a.get(c, c).clone();
            for j in 0..n {
                a.set(c, j, a.get(c, j) / &d);
                inv.set(c, j, inv.get(c, j) / &d);
            }
            for i in 0..n {
                if i != c && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    for j in 0..n {
                        let na = a.get(i, j) - &f * a.get(c, j);
                        a.set(i, j, na);
                        let ni = inv.get(i, j) - &f * inv.get(c, j);
                        inv.set(i, j, ni);
                    }
                }
            }
        }
        Some(inv)
    }

    /// Indices of a row basis, greedily ascending: the lexicographically
    /// first maximal independent subset of the rows.
    pub fn row_basis_indices(&self) -> Vec<usize> {
        let mut picked: Vec<usize> = Vec::new();
        let mut current = 0usize;
        for i in 0..self.rows {
            let mut trial = picked.clone();
            trial.push(i);
            let sub = self.select_rows(&trial);
            if sub.rank() > current {
                picked = trial;
                current += 1;
            }
        }
        picked
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMat {
        let mut out = QMat::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(r, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Largest absolute value of any entry, as f64 (diagnostics only).
    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|q| q_to_f64(&q.abs()))
            .fold(0.0, f64::max)
    }
}
