//! Subspace calculus on coordinate spaces.
//!
//! A [`Subspace`] is a linear subspace of an `ambient`-dimensional coordinate
//! space, stored as a canonical basis matrix (ambient rows, `dim` columns).
//! On the rational backend the canonical basis comes from the reduced row
//! echelon form of the transposed generators, so two equal spans produce
//! structurally identical objects; on the float backend the basis is
//! orthonormal and equality is decided by mutual containment at the rank
//! tolerance.
//!
//! Only the span matters: every operation is invariant under invertible
//! re-mixing of the generators. Intersections follow the double-complement
//! construction on the rational path and a stacked null-space computation on
//! the float path; both must (and do) agree on dimensions.

use crate::linalg::{Backend, Mat, Scalar};
use crate::rng::Rng;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("vector length {got} does not match ambient dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("requested dimension {dim} exceeds ambient dimension {ambient}")]
    DimTooLarge { dim: usize, ambient: usize },
    #[error("map has {map_cols} columns but subspace ambient dimension is {ambient}")]
    MapShape { map_cols: usize, ambient: usize },
    #[error("invalid subspace JSON: {0}")]
    Json(String),
}

/// A subspace of an `ambient`-dimensional coordinate space in canonical form.
#[derive(Clone, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Mat<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the given column vectors. The basis is canonicalized, so the
    /// dimension equals the rank of the stacked vectors.
    pub fn from_columns(ambient: usize, vectors: &[Vec<S>]) -> Result<Self, SubspaceError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(SubspaceError::VectorLength {
                    expected: ambient,
                    got: v.len(),
                });
            }
        }
        let raw = Mat::from_fn(ambient, vectors.len(), |i, j| vectors[j][i].clone());
        Ok(Self::from_basis(ambient, raw))
    }

    pub fn from_int_columns(ambient: usize, vectors: &[Vec<i64>]) -> Result<Self, SubspaceError> {
        let cols: Vec<Vec<S>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| S::from_int(x)).collect())
            .collect();
        Self::from_columns(ambient, &cols)
    }

    /// Span of the columns of an already-shaped matrix.
    pub fn from_basis(ambient: usize, m: Mat<S>) -> Self {
        assert_eq!(m.rows(), ambient, "basis row count must equal ambient");
        Subspace {
            ambient,
            basis: m.col_span_basis(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
        }
    }

    /// Subspace spanned by `dim` independent generic vectors drawn from the
    /// deterministic PRNG (standard normal entries on the float backend,
    /// bounded integers on the rational backend).
    pub fn random_generic(ambient: usize, dim: usize, seed: u64) -> Result<Self, SubspaceError> {
        if dim > ambient {
            return Err(SubspaceError::DimTooLarge { dim, ambient });
        }
        let mut rng = Rng::new(seed);
        Ok(Self::from_basis(
            ambient,
            Mat::random_generic(ambient, dim, &mut rng),
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat<S> {
        &self.basis
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    fn check_ambient(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.ambient != other.ambient {
            return Err(SubspaceError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Orthogonal complement; `dim` drops to `ambient - dim(self)`.
    pub fn complement(&self) -> Self {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.transpose().null_space().col_span_basis(),
        }
    }

    /// Span of the union of the two bases.
    pub fn union_span(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_ambient(other)?;
        Ok(Self::from_basis(
            self.ambient,
            Mat::hstack(&[&self.basis, &other.basis]),
        ))
    }

    /// Intersection. Rational path: complement of the union of complements.
    /// Float path: read off the null space of `[A | -B]`.
    pub fn intersect(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_ambient(other)?;
        match S::BACKEND {
            Backend::Rational => {
                let joined = self.complement().union_span(&other.complement())?;
                Ok(joined.complement())
            }
            Backend::Float => {
                let neg_b = Mat::from_fn(other.ambient, other.dim(), |i, j| {
                    S::zero() - other.basis.get(i, j).clone()
                });
                let stacked = Mat::hstack(&[&self.basis, &neg_b]);
                let null = stacked.null_space();
                let x = Mat::from_fn(self.dim(), null.cols(), |i, j| null.get(i, j).clone());
                Ok(Self::from_basis(self.ambient, self.basis.mul(&x)))
            }
        }
    }

    /// Set-minus: the part of `self` orthogonal to `self ∩ other`, so that
    /// `self` decomposes orthogonally as `(self ∩ other) ⊕ result`.
    pub fn subtract(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_ambient(other)?;
        let inter = self.intersect(other)?;
        if inter.dim() == 0 {
            return Ok(self.clone());
        }
        // Coefficients c with (P^T A) c = 0 give the vectors of A ⟂ P.
        let gram = inter.basis.transpose().mul(&self.basis);
        let coeffs = gram.null_space();
        Ok(Self::from_basis(self.ambient, self.basis.mul(&coeffs)))
    }

    /// True iff `other` lies inside `self`.
    pub fn contains(&self, other: &Self) -> Result<bool, SubspaceError> {
        self.check_ambient(other)?;
        let stacked = Mat::hstack(&[&self.basis, &other.basis]);
        Ok(stacked.rank() == self.dim())
    }

    pub fn span_eq(&self, other: &Self) -> Result<bool, SubspaceError> {
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    /// Image under a linear map: span of `m * basis`, living in `rows(m)`.
    pub fn map_through(&self, m: &Mat<S>) -> Result<Self, SubspaceError> {
        if m.cols() != self.ambient {
            return Err(SubspaceError::MapShape {
                map_cols: m.cols(),
                ambient: self.ambient,
            });
        }
        Ok(Self::from_basis(m.rows(), m.mul(&self.basis)))
    }

    /// Unit-normalized direction of a one-dimensional subspace, with the
    /// first nonzero coordinate made positive. Used for golden-value checks
    /// against four-decimal reference directions.
    pub fn unit_direction(&self) -> Option<Vec<f64>> {
        if self.dim() != 1 {
            return None;
        }
        let mut v: Vec<f64> = (0..self.ambient)
            .map(|i| self.basis.get(i, 0).approx())
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-12 * norm)
            .map(|x| x.signum())
            .unwrap_or(1.0);
        for x in &mut v {
            *x *= sign / norm;
        }
        Some(v)
    }

    /// Index of the first non-negligible coordinate of each basis column,
    /// sorted. For canonical rational bases these are the pivot rows, i.e.
    /// the coordinate indices the subspace "occupies".
    pub fn leading_coordinates(&self) -> Vec<usize> {
        let tol = S::tol(self.basis.max_abs().max(1.0), self.ambient, self.dim()) * 1e3;
        let mut out: Vec<usize> = (0..self.dim())
            .filter_map(|j| (0..self.ambient).find(|&i| !self.basis.get(i, j).below(tol)))
            .collect();
        out.sort_unstable();
        out
    }

    /// JSON encoding: `{"ambient": m, "basis": [[row entries]], "backend": ...}`
    /// with rationals as `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.ambient)
            .map(|i| {
                Value::Array(
                    (0..self.dim())
                        .map(|j| Value::String(self.basis.get(i, j).json_string()))
                        .collect(),
                )
            })
            .collect();
        json!({
            "ambient": self.ambient,
            "basis": rows,
            "backend": S::BACKEND.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SubspaceError> {
        let err = |m: &str| SubspaceError::Json(m.to_string());
        let ambient = v
            .get("ambient")
            .and_then(Value::as_u64)
            .ok_or_else(|| err("missing ambient"))? as usize;
        let backend = v
            .get("backend")
            .and_then(Value::as_str)
            .ok_or_else(|| err("missing backend"))?;
        if backend != S::BACKEND.to_string() {
            return Err(err("backend mismatch"));
        }
        let rows = v
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing basis"))?;
        if rows.len() != ambient {
            return Err(err("basis row count"));
        }
        let cols = rows
            .first()
            .and_then(Value::as_array)
            .map_or(0, |r| r.len());
        let mut m = Mat::zeros(ambient, cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| err("basis row"))?;
            if row.len() != cols {
                return Err(err("ragged basis"));
            }
            for (j, cell) in row.iter().enumerate() {
                let s = match cell {
                    Value::String(s) => S::parse_text(s),
                    Value::Number(n) => n.as_f64().map(S::from_f64),
                    _ => None,
                }
                .ok_or_else(|| err("bad entry"))?;
                m.set(i, j, s);
            }
        }
        Ok(Self::from_basis(ambient, m))
    }
}

impl<S: Scalar> std::fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of R^{}): {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

pub type RSubspace = Subspace<BigRational>;
pub type FSubspace = Subspace<f64>;
