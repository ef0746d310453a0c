//! Complete decision procedure for diagonal subtori `K` of `GL(V)`.

mod checkers;
mod fm;
mod product;
mod refine;
mod torus;
mod types;

pub use checkers::{
    minimal_cover_failures, relcr_torus_bruteforce, relcr_torus_bruteforce_with,
    relcr_torus_crosscheck, relcr_torus_crosscheck_with, relcr_torus_definition,
    relcr_torus_definition_with, relcr_torus_levi, relcr_torus_levi_with, relcr_torus_minimal,
    relcr_torus_minimal_with, CrosscheckReport, Method, StabilityOracle, TorusVerdict,
    TorusWitness,
};
pub use fm::{fm_solve, Inequality};
pub use product::{preserves_blocks, relcr_torus_product, ProductReport};
pub use refine::{common_borel_order, common_refinement, join_partition, Refinement};
pub use torus::{flag_from_weights, weight_blocks, weight_classes, TorusK, WeightClasses};
pub use types::{
    enumerate_flag_types, feasible, minimal_flags, opposite_type, CocharacterWitness, FlagPoset,
    FlagType, DEFAULT_CLASS_BOUND,
};
