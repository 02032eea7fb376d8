//! Numerical tolerances shared by every floating-point decision in the crate.
//!
//! A single constant governs each kind of decision, so that e.g. "this eigenvalue
//! equals 1" means the same thing for the support projection, the fixed-point space
//! and the witness search.

/// Hermiticity of input matrices.
pub const HERM: f64 = 1e-12;
/// Orthonormality of eigenvector and subspace bases.
pub const ORTH: f64 = 1e-12;
/// Spectral accuracy: positivity, contraction bound and norm-one checks.
pub const SPEC: f64 = 1e-9;
/// Reconstruction error of a spectral decomposition.
pub const RECON: f64 = 1e-9;
/// Two eigenvalues closer than this are one spectral value. Also the band used
/// for "eigenvalue equals 0" and "eigenvalue equals 1".
pub const CLUSTER: f64 = 1e-7;
/// Idempotency and orthogonality defects (scaled by the dimension where noted).
pub const PROJ: f64 = 1e-7;
/// "Distance exactly one".
pub const DIST: f64 = 1e-7;
/// Principal-angle threshold: subspaces meet when cos(theta) >= 1 - WIT.
pub const WIT: f64 = 1e-6;

/// `dim * PROJ`, the idempotency/orthogonality allowance at a given dimension.
pub fn proj_scaled(dim: usize) -> f64 {
    dim as f64 * PROJ
}
