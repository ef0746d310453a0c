use std::cmp::Ordering;
use std::fmt;

use super::matrix::{dot, Matrix};
use crate::error::{check_dim, Error, Result};
use crate::scalar::{Field, Rational};

/// A subspace of `T^n`, stored as the nonzero rows of its reduced row echelon
/// basis. Two subspaces are equal iff their stored bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<T = Rational> {
    ambient_dim: usize,
    basis: Matrix<T>,
}

impl<T: Field> Subspace<T> {
    /// Row span of `vectors` (rows), canonicalised.
    pub fn span(ambient_dim: usize, vectors: &Matrix<T>) -> Result<Self> {
        check_dim(ambient_dim, vectors.ncols())?;
        let red = vectors.rref();
        let rows = (0..red.rank).map(|i| red.matrix.row(i).to_vec()).collect();
        Ok(Self {
            ambient_dim,
            basis: Matrix::from_rows(ambient_dim, rows)?,
        })
    }

    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        Self::span(ambient_dim, &Matrix::from_rows(ambient_dim, vectors)?)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= ambient_dim) {
            return Err(Error::InvalidInput(format!(
                "coordinate {bad} out of range for dimension {ambient_dim}"
            )));
        }
        let rows = idx
            .iter()
            .map(|&i| unit_vector(ambient_dim, i))
            .collect();
        Ok(Self {
            ambient_dim,
            basis: Matrix::from_rows(ambient_dim, rows)?,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Pivot columns of the canonical basis.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .rows_iter()
            .map(|r| r.iter().position(|v| !v.is_zero()).expect("basis rows are nonzero"))
            .collect()
    }

    /// Standard basis vectors at the non-pivot columns; they span a complement.
    pub fn coordinate_complement(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.ambient_dim).filter(|c| !piv.contains(c)).collect()
    }

    /// Rows span the linear functionals vanishing on `self`.
    pub fn annihilator(&self) -> Matrix<T> {
        if self.is_zero() {
            return Matrix::identity(self.ambient_dim);
        }
        self.basis.kernel()
    }

    pub fn contains_vector(&self, v: &[T]) -> Result<bool> {
        check_dim(self.ambient_dim, v.len())?;
        Ok(self
            .annihilator()
            .rows_iter()
            .all(|f| dot(f, v).is_zero()))
    }

    /// `true` iff `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        let ann = self.annihilator();
        Ok(other
            .basis
            .rows_iter()
            .all(|v| ann.rows_iter().all(|f| dot(f, v).is_zero())))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Self::span(self.ambient_dim, &self.basis.vstack(&other.basis)?)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let constraints = self.annihilator().vstack(&other.annihilator())?;
        if constraints.nrows() == 0 {
            return Ok(Self::full(self.ambient_dim));
        }
        Self::span(self.ambient_dim, &constraints.kernel())
    }

    /// Canonical span of `g · v` for the basis vectors `v`.
    pub fn image_under(&self, g: &Matrix<T>) -> Result<Self> {
        check_dim(self.ambient_dim, g.nrows())?;
        check_dim(self.ambient_dim, g.ncols())?;
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
        self.image_under_unchecked(g)
    }

    pub(crate) fn image_under_unchecked(&self, g: &Matrix<T>) -> Result<Self> {
        Self::span(self.ambient_dim, &self.basis.mul(&g.transpose())?)
    }

    /// `g · self ⊆ self`; for invertible `g` this is `g · self = self`.
    pub fn is_invariant_under(&self, g: &Matrix<T>) -> Result<bool> {
        check_dim(self.ambient_dim, g.ncols())?;
        if self.is_zero() || self.is_full() {
            return Ok(true);
        }
        let ann = self.annihilator();
        for v in self.basis.rows_iter() {
            let gv = g.mul_vec(v)?;
            if !ann.rows_iter().all(|f| dot(f, &gv).is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn unit_vector<T: Field>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

pub fn subspace_sum<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<Subspace<T>> {
    a.sum(b)
}

pub fn subspace_intersect<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<Subspace<T>> {
    a.intersect(b)
}

/// `true` iff `b ⊆ a`.
pub fn subspace_contains<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<bool> {
    a.contains(b)
}

pub fn image_under<T: Field>(g: &Matrix<T>, s: &Subspace<T>) -> Result<Subspace<T>> {
    s.image_under(g)
}

impl<T: Field + Ord> PartialOrd for Subspace<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: ambient dimension, then dimension, then basis entries.
impl<T: Field + Ord> Ord for Subspace<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_dim
            .cmp(&other.ambient_dim)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| {
                let a = self.basis.rows_iter().flatten();
                let b = other.basis.rows_iter().flatten();
                a.cmp(b)
            })
    }
}

impl<T: fmt::Debug> fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, {:?})", self.ambient_dim, self.basis)
    }
}
