//! Dense linear algebra over two arithmetic backends.
//!
//! Everything downstream (subspaces, chains, certificates) reduces to rank,
//! null space and elimination questions on small dense matrices. Two scalar
//! types implement [`Scalar`]:
//!
//! * [`BigRational`] — exact arbitrary-precision rationals. Rank is computed
//!   by fraction-free (Bareiss) elimination on the matrix with denominators
//!   cleared row by row, so certificates are exact and never overflow.
//! * `f64` — floats with an explicit tolerance policy. A pivot counts only if
//!   its magnitude exceeds `tau = max(rows, cols) * EPS_SCALE * max_abs_entry`.
//!
//! Matrices are immutable values; all operations return fresh matrices and
//! are safe to use concurrently.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scale factor of the float zero threshold, fixed at `2^-40` so that float
/// results are reproducible across machines for identical inputs.
pub const EPS_SCALE: f64 = 1.0 / (1u64 << 40) as f64;

/// Arithmetic backend tag carried by matrices and subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::Float => write!(f, "float"),
        }
    }
}

/// Matrix entry type: exact rationals or tolerance-checked floats.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn from_int(v: i64) -> Self;
    /// Exact conversion from a float (floats are dyadic rationals).
    fn from_f64(v: f64) -> Self;
    /// Approximate magnitude, used for float pivoting and the tau formula.
    fn magnitude(&self) -> f64;
    /// Signed approximate value.
    fn approx(&self) -> f64;
    /// Parse the same textual form produced by [`Scalar::json_string`].
    fn parse_text(s: &str) -> Option<Self>;
    /// Zero threshold for a matrix with the given shape and largest entry.
    /// Rational backend: always 0 (exact).
    fn tol(max_abs: f64, rows: usize, cols: usize) -> f64;
    /// True if the entry counts as zero under the given threshold.
    fn below(&self, tol: f64) -> bool;
    /// Pivot preference; smaller is better. Floats prefer large magnitude,
    /// rationals prefer low bit complexity to limit coefficient growth.
    fn pivot_score(&self) -> f64;
    /// Generic random entry: standard normal for floats, a uniform integer
    /// in [-999, 999] for rationals (generic almost surely, cheap exactly).
    fn sample_generic(rng: &mut crate::rng::Rng) -> Self;
    /// Scalar rendered for JSON output: `"p/q"` strings for rationals,
    /// floats formatted to 12 significant digits.
    fn json_string(&self) -> String;

    fn rank(m: &Mat<Self>) -> usize;
    fn null_space(m: &Mat<Self>) -> Mat<Self>;
    /// Canonical basis of the column span: reduced-echelon rows of the
    /// transpose for rationals, an orthonormal basis for floats.
    fn col_span_basis(m: &Mat<Self>) -> Mat<Self>;
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn parse_text(s: &str) -> Option<Self> {
        let mut parts = s.splitn(2, '/');
        let numer: BigInt = parts.next()?.trim().parse().ok()?;
        let denom: BigInt = match parts.next() {
            Some(d) => d.trim().parse().ok()?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return None;
        }
        Some(BigRational::new(numer, denom))
    }
    fn tol(_max_abs: f64, _rows: usize, _cols: usize) -> f64 {
        0.0
    }
    fn below(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn pivot_score(&self) -> f64 {
        (self.numer().bits() + self.denom().bits()) as f64
    }
    fn sample_generic(rng: &mut crate::rng::Rng) -> Self {
        Self::from_int(rng.next_int(-999, 999))
    }
    fn json_string(&self) -> String {
        self.to_string()
    }

    fn rank(m: &Mat<Self>) -> usize {
        bareiss_rank(clear_denominators(m))
    }

    fn null_space(m: &Mat<Self>) -> Mat<Self> {
        let mut red = m.clone();
        let pivots = rref(&mut red, 0.0);
        free_variable_basis(&red, &pivots)
    }

    fn col_span_basis(m: &Mat<Self>) -> Mat<Self> {
        let mut t = m.transpose();
        let pivots = rref(&mut t, 0.0);
        let r = pivots.len();
        Mat::from_fn(m.rows, r, |i, j| t.get(j, i).clone())
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn approx(&self) -> f64 {
        *self
    }
    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn tol(max_abs: f64, rows: usize, cols: usize) -> f64 {
        rows.max(cols) as f64 * EPS_SCALE * max_abs
    }
    fn below(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn pivot_score(&self) -> f64 {
        -self.abs()
    }
    fn sample_generic(rng: &mut crate::rng::Rng) -> Self {
        rng.next_normal()
    }
    fn json_string(&self) -> String {
        format!("{:.11e}", self)
    }

    fn rank(m: &Mat<Self>) -> usize {
        let tol = f64::tol(m.max_abs(), m.rows, m.cols);
        let mut red = m.clone();
        rref(&mut red, tol).len()
    }

    fn null_space(m: &Mat<Self>) -> Mat<Self> {
        let tol = f64::tol(m.max_abs(), m.rows, m.cols);
        let mut red = m.clone();
        let pivots = rref(&mut red, tol);
        let basis = free_variable_basis(&red, &pivots);
        orthonormalize(&basis, 0)
    }

    fn col_span_basis(m: &Mat<Self>) -> Mat<Self> {
        let tol = f64::tol(m.max_abs(), m.rows, m.cols);
        let rank = {
            let mut red = m.clone();
            rref(&mut red, tol).len()
        };
        orthonormalize(m, rank)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from integer rows; every row must have the same length.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| S::from_int(rows[i][j]))
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| S::from_f64(rows[i][j]))
    }

    pub fn random_generic(rows: usize, cols: usize, rng: &mut crate::rng::Rng) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(S::sample_generic(rng));
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    /// Concatenate by columns; all parts must share the row count.
    pub fn hstack(parts: &[&Mat<S>]) -> Mat<S> {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(parts.iter().all(|m| m.rows == rows), "hstack row mismatch");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for m in parts {
            for i in 0..rows {
                for j in 0..m.cols {
                    out.set(i, off + j, m.get(i, j).clone());
                }
            }
            off += m.cols;
        }
        out
    }

    /// Concatenate by rows; all parts must share the column count.
    pub fn vstack(parts: &[&Mat<S>]) -> Mat<S> {
        let cols = parts.first().map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.cols == cols), "vstack col mismatch");
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for m in parts {
            for i in 0..m.rows {
                for j in 0..cols {
                    out.set(off + i, j, m.get(i, j).clone());
                }
            }
            off += m.rows;
        }
        out
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn col_slice(&self, lo: usize, hi: usize) -> Mat<S> {
        assert!(lo <= hi && hi <= self.cols);
        Mat::from_fn(self.rows, hi - lo, |i, j| self.get(i, lo + j).clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn rank(&self) -> usize {
        S::rank(self)
    }

    /// Columns form a basis of `{ x : self * x = 0 }`. Column count equals
    /// `cols - rank`. Rational basis is the canonical reduced-echelon
    /// free-variable basis; float basis is orthonormal.
    pub fn null_space(&self) -> Mat<S> {
        S::null_space(self)
    }

    pub fn col_span_basis(&self) -> Mat<S> {
        S::col_span_basis(self)
    }

    /// Largest absolute entry of `self * other`, for residual checks.
    pub fn product_residual(&self, other: &Mat<S>) -> f64 {
        self.mul(other).max_abs()
    }
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [{}]", self.rows, self.cols, S::BACKEND)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// In-place reduced row echelon form. Returns pivot column indices.
fn rref<S: Scalar>(m: &mut Mat<S>, tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r >= m.rows {
            break;
        }
        let pivot_row = (r..m.rows)
            .filter(|&i| !m.get(i, c).below(tol))
            .min_by(|&a, &b| {
                m.get(a, c)
                    .pivot_score()
                    .partial_cmp(&m.get(b, c).pivot_score())
                    .unwrap()
            });
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..m.cols {
                let a = m.get(r, j).clone();
                let b = m.get(p, j).clone();
                m.set(r, j, b);
                m.set(p, j, a);
            }
        }
        let inv = S::one() / m.get(r, c).clone();
        for j in c..m.cols {
            let v = m.get(r, j).clone() * inv.clone();
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || m.get(i, c).below(tol) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let v = m.get(i, j).clone() - factor.clone() * m.get(r, j).clone();
                m.set(i, j, v);
            }
            m.set(i, c, S::zero());
        }
        pivots.push(c);
        r += 1;
    }
    // Snap sub-threshold residue to exact zero so downstream tests are clean.
    if tol > 0.0 {
        for v in &mut m.data {
            if v.below(tol) {
                *v = S::zero();
            }
        }
    }
    pivots
}

/// Null-space basis read off a reduced echelon form: one column per free
/// variable, with the free coordinate set to 1.
fn free_variable_basis<S: Scalar>(red: &Mat<S>, pivots: &[usize]) -> Mat<S> {
    let free: Vec<usize> = (0..red.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Mat::zeros(red.cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        out.set(f, k, S::one());
        for (i, &p) in pivots.iter().enumerate() {
            out.set(p, k, S::zero() - red.get(i, f).clone());
        }
    }
    out
}

/// Row-wise denominator clearing; scaling rows does not change rank.
fn clear_denominators(m: &Mat<BigRational>) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let lcm = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination (Bareiss). Each 2x2 cross-multiply is
/// exactly divisible by the previous pivot, so intermediate growth stays
/// bounded by the Hadamard bound instead of exploding.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let pivot_row = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].magnitude().bits());
        let Some(p) = pivot_row else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() && m[r][c].is_one() {
                // Nothing to eliminate and no rescale needed with a unit pivot.
                continue;
            }
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Modified Gram-Schmidt with a second re-orthogonalization pass. Keeps the
/// first `want` independent columns when `want > 0`, otherwise keeps every
/// column whose residual stays above the drop threshold.
fn orthonormalize(m: &Mat<f64>, want: usize) -> Mat<f64> {
    let drop_tol = 1e3 * f64::tol(m.max_abs().max(1.0), m.rows(), m.cols());
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for j in 0..m.cols() {
        if want > 0 && kept.len() == want {
            break;
        }
        let mut v: Vec<f64> = (0..m.rows()).map(|i| *m.get(i, j)).collect();
        for _ in 0..2 {
            for q in &kept {
                let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > drop_tol {
            for x in &mut v {
                *x /= norm;
            }
            kept.push(v);
        }
    }
    Mat::from_fn(m.rows(), kept.len(), |i, j| kept[j][i])
}
