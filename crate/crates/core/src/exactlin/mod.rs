//! Exact linear algebra over a field: dense matrices, canonical subspaces and
//! affine solving.

mod affine;
mod matrix;
mod subspace;

pub use affine::{solve_affine, AffineSolution};
pub use matrix::{dot, rref, Matrix, Rref};
pub use subspace::{
    image_under, subspace_contains, subspace_intersect, subspace_sum, unit_vector, Subspace,
};
