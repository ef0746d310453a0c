use crate::error::{check_dim, Error, Result};
use crate::exactlin::{dot, Matrix, Subspace};
use crate::scalar::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Symplectic,
    Orthogonal,
}

impl FormKind {
    pub fn name(self) -> &'static str {
        match self {
            FormKind::Symplectic => "symplectic",
            FormKind::Orthogonal => "orthogonal",
        }
    }
}

/// Nondegenerate alternating or symmetric form `(x, y) = xᵀ G y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinForm {
    gram: Matrix,
    gram_inv: Matrix,
    kind: FormKind,
}

impl BilinForm {
    pub fn new(gram: Matrix, kind: FormKind) -> Result<Self> {
        let n = gram.nrows();
        check_dim(n, gram.ncols())?;
        let t = gram.transpose();
        match kind {
            FormKind::Symplectic => {
                if n % 2 == 1 {
                    return Err(Error::InvalidForm("odd dimension for a symplectic form".into()));
                }
                if t != gram.scale(&int(-1)) {
                    return Err(Error::InvalidForm("Gram matrix is not alternating".into()));
                }
            }
            FormKind::Orthogonal => {
                if t != gram {
                    return Err(Error::InvalidForm("Gram matrix is not symmetric".into()));
                }
            }
        }
        let gram_inv = gram
            .inverse()
            .map_err(|_| Error::InvalidForm("Gram matrix is singular".into()))?;
        Ok(Self {
            gram,
            gram_inv,
            kind,
        })
    }

    /// `(e_i, e_{n+1-i}) = 1` for `i ≤ n/2`, `-1` otherwise.
    pub fn standard_symplectic(n: usize) -> Result<Self> {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            g[(i, n - 1 - i)] = if 2 * i < n { int(1) } else { int(-1) };
        }
        Self::new(g, FormKind::Symplectic)
    }

    /// Split form `(e_i, e_{n+1-i}) = 1` for all `i`.
    pub fn split_orthogonal(n: usize) -> Result<Self> {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            g[(i, n - 1 - i)] = int(1);
        }
        Self::new(g, FormKind::Orthogonal)
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        Ok(dot(x, &self.gram.mul_vec(y)?))
    }

    /// `g*` with `(g x, y) = (x, g* y)`: `G⁻¹ gᵀ G`.
    pub fn adjoint(&self, g: &Matrix) -> Result<Matrix> {
        check_dim(self.ambient_dim(), g.nrows())?;
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
        self.gram_inv.mul(&g.transpose())?.mul(&self.gram)
    }

    pub fn perp(&self, u: &Subspace) -> Result<Subspace> {
        let n = self.ambient_dim();
        check_dim(n, u.ambient_dim())?;
        if u.is_zero() {
            return Ok(Subspace::full(n));
        }
        Subspace::span(n, &u.basis().mul(&self.gram)?.kernel())
    }

    pub fn is_totally_isotropic(&self, u: &Subspace) -> Result<bool> {
        check_dim(self.ambient_dim(), u.ambient_dim())?;
        let b = u.basis();
        Ok(b.mul(&self.gram)?.mul(&b.transpose())?.is_zero())
    }

    pub fn is_isometry(&self, g: &Matrix) -> Result<bool> {
        Ok(g.transpose().mul(&self.gram)?.mul(g)? == self.gram)
    }
}

pub fn perp(u: &Subspace, b: &BilinForm) -> Result<Subspace> {
    b.perp(u)
}

pub fn is_totally_isotropic(u: &Subspace, b: &BilinForm) -> Result<bool> {
    b.is_totally_isotropic(u)
}

pub fn form_adjoint(g: &Matrix, b: &BilinForm) -> Result<Matrix> {
    b.adjoint(g)
}
