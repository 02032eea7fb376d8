//! Brute-force ground truth and randomized generators.
//!
//! * [`grid`]: exhaustive sphere and double-sphere sets over finite grids of
//!   diagonal matrices, computed in exact integer arithmetic and compared with
//!   the closed-form predicate.
//! * [`random`]: seeded generators for unitaries, projections and positive
//!   contractions.
//! * [`isometry`]: unitary (optionally transposed) conjugations and the check that
//!   they preserve projections and distances.
//! * [`direct_sum`]: block-diagonal algebras `M_{n₁} ⊕ … ⊕ M_{n_k}`, the desk-scale
//!   atomic von Neumann algebras.

pub mod direct_sum;
pub mod grid;
pub mod isometry;
pub mod random;

pub use direct_sum::BlockStructure;
pub use grid::{
    double_sphere_bruteforce, enumerate_grid, sphere_set_bruteforce, verify_bispherical_identity, GridMismatch,
    GridPoint, GridReport, GridSpec,
};
pub use isometry::{verify_projection_preservation, IsometryMismatch, IsometryModel, IsometryReport};
pub use random::{random_positive_contraction, random_unitary};
