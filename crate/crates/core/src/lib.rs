//! Metric spheres in the positive unit sphere of a matrix algebra.
//!
//! For positive contractions of norm one, the sphere around a set `E` is the set
//! of elements at distance exactly 1 from every member of `E`. This crate
//! computes those relations for small dense matrices and for exact diagonal
//! operators on ℓ₂:
//!
//! * distance-one witnesses ([`sphere::distance_one_witness`]),
//! * the closed-form double-sphere test ([`sphere::double_sphere_membership`]),
//! * the projection test through the double sphere, and an explicit second
//!   member of the double sphere of any non-projection
//!   ([`sphere::refutation_witness`]),
//! * brute-force oracles and randomized generators ([`oracle`]).
//!
//! ```
//! use spheregeom::{distance_one_witness, PositiveContraction, WitnessCase};
//!
//! let a = PositiveContraction::diag(&[1.0, 0.0]).unwrap();
//! let b = PositiveContraction::diag(&[0.0, 1.0]).unwrap();
//! let w = distance_one_witness(&a, &b).unwrap().unwrap();
//! assert_eq!(w.case(), WitnessCase::ELeqAEPerpB);
//! ```

pub mod cli;
pub mod diagonal;
pub mod error;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod sphere;
pub mod tol;

pub use diagonal::{DiagonalOperator, IndexProjection, SupValue, Tail};
pub use error::{Error, Result};
pub use lattice::{range_projection, support_projection, Projection, Subspace};
pub use linalg::{
    functional_calculus, is_projection, operator_norm, spectral_decompose, HermitianMatrix, PiecewiseLinearFn,
    PositiveContraction, SpectralDecomposition,
};
pub use sphere::{
    distance_one_witness, double_sphere_membership, is_projection_via_double_sphere, refutation_witness,
    DoubleSphereVerdict, Refutation, SphereWitness, WitnessCase,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/spheres.md")]
    mod spheres {}
    #[doc = include_str!("../../../book/src/diagonal.md")]
    mod diagonal {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
