//! Exact decision and certification of relative complete reducibility for
//! finitely generated subgroups `H ≤ GL(V)`, `V = Q^n`, with respect to
//! reductive subgroups `K`: diagonal subtori, `GL(U)`, `Sp(V)`, `SO(V)` and
//! `G2 ≤ GL_7`.

pub mod certificate;
pub mod error;
pub mod exactlin;
pub mod flags;
pub mod g2model;
pub mod json;
pub mod scalar;
pub mod structcr;
pub mod toruscr;

pub use error::{Error, Result};
pub use scalar::{Field, Rational};

pub type RatMatrix = exactlin::Matrix<Rational>;
pub type RatSubspace = exactlin::Subspace<Rational>;
pub type RatFlag = flags::Flag<Rational>;
pub type RatGroup = flags::GroupH<Rational>;
