use super::matrix::Matrix;
use crate::error::{check_dim, Result};
use crate::scalar::{Field, Rational};

/// Complete solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineSolution<T = Rational> {
    Empty,
    /// `particular + span(rows of homogeneous)`.
    Affine {
        particular: Vec<T>,
        homogeneous: Matrix<T>,
    },
}

impl<T: Field> AffineSolution<T> {
    pub fn is_empty(&self) -> bool {
        matches!(self, AffineSolution::Empty)
    }

    /// Dimension of the solution set; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        match self {
            AffineSolution::Empty => None,
            AffineSolution::Affine { homogeneous, .. } => Some(homogeneous.nrows()),
        }
    }

    /// `particular + Σ params[i] · homogeneous[i]`.
    pub fn point(&self, params: &[T]) -> Option<Vec<T>> {
        let AffineSolution::Affine {
            particular,
            homogeneous,
        } = self
        else {
            return None;
        };
        assert_eq!(params.len(), homogeneous.nrows());
        let mut x = particular.clone();
        for (t, h) in params.iter().zip(homogeneous.rows_iter()) {
            for (xi, hi) in x.iter_mut().zip(h) {
                *xi = xi.clone() + t.clone() * hi.clone();
            }
        }
        Some(x)
    }
}

/// Solves `a · x = b` exactly.
pub fn solve_affine<T: Field>(a: &Matrix<T>, b: &[T]) -> Result<AffineSolution<T>> {
    check_dim(a.nrows(), b.len())?;
    let n = a.ncols();
    let rhs = Matrix::from_rows(1, b.iter().map(|v| vec![v.clone()]).collect())?;
    let red = a.hstack(&rhs)?.rref();
    if red.pivots.contains(&n) {
        return Ok(AffineSolution::Empty);
    }
    let mut particular = vec![T::zero(); n];
    for (i, &p) in red.pivots.iter().enumerate() {
        particular[p] = red.matrix[(i, n)].clone();
    }
    Ok(AffineSolution::Affine {
        particular,
        homogeneous: a.kernel(),
    })
}
