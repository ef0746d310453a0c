//! `G2 ≤ GL_7` as the stabiliser of an alternating trilinear form on the
//! trace-zero split octonions.

mod checker;
mod model;

pub use checker::{
    delta, doubly_singular_polynomials, g2_minimal_flag, is_doubly_singular, relcr_g2,
    verify_g2_refutation,
};
pub use model::{build_g2_data, load_g2_fixture, G2Data, Octonion, BASIS_NAMES, FIXTURE, TORUS_LATTICE};
