//! Semi-decision procedures for `K = GL(U)`, `Sp(V)` and `SO(V)`, driven by a
//! finite pool of stable subspaces. Negative answers carry exact proofs.

mod classical;
mod complement;
mod form;
mod glu;
mod pool;
pub mod poly;
mod verdict;

pub use classical::{
    adjoint_extended, classical_family, isotropic_flag, isotropy_polynomials, relcr_classical,
    verify_classical_refutation,
};
pub use complement::{bareiss_inconsistent, stable_complements, AffineVectors, ComplementFamily};
pub use form::{form_adjoint, is_totally_isotropic, perp, BilinForm, FormKind};
pub use glu::{relcr_glu, GluSplit};
pub use pool::{
    build_pool, default_seeds, rational_eigenvectors, spin, Provenance, SubspacePool,
    DEFAULT_POOL_CAP,
};
pub use verdict::{
    Obstruction, OppositePair, Refutation, TriValue, TriVerdict, DEFAULT_ELIM_CAP, MAX_ELIM_DIM,
};
pub(crate) use verdict::{aggregate, bilinear_poly, search_family, vector_polys, Outcome, Search};
