//! Projections, their order and orthogonality, and the support/range
//! projections of a positive contraction.
//!
//! In finite dimensions the support projection `s(a)` is the projection onto the
//! fixed-point space `Fix(a)` (the eigenvalue-1 eigenspace) and the range
//! projection `r(a)` is the projection onto the span of eigenvectors with nonzero
//! eigenvalue; `1 − r(a)` projects onto `ker(a)`. Both are read off the spectral
//! decomposition rather than computed as limits of `aⁿ` or `a^{1/n}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_dims, left_singular, spectral_decompose, spectral_norm, CMatrix, CVector, HermitianMatrix, PositiveContraction};
use crate::tol;

/// An orthogonal projection: `p = p* = p²`.
///
/// The zero projection is allowed (rank 0); it is the bottom of the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    base: HermitianMatrix,
    rank: usize,
}

impl Projection {
    /// Validates idempotency to `dim · PROJ`.
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let defect = spectral_norm(&(&(&base * &base) - base.as_matrix()));
        if defect > tol::proj_scaled(base.dim()) {
            return Err(Error::NotProjection { defect });
        }
        let rank = spectral_decompose(&base)
            .eigenvalues()
            .iter()
            .filter(|&&l| (l - 1.0).abs() <= tol::PROJ)
            .count();
        Ok(Self { base, rank })
    }

    /// Projection onto the span of the orthonormal columns of `basis`.
    pub(crate) fn from_orthonormal(dim: usize, basis: &CMatrix) -> Self {
        debug_assert_eq!(basis.nrows(), dim);
        let base = HermitianMatrix::from_spectral(basis, &vec![1.0; basis.ncols()]);
        Self {
            base,
            rank: basis.ncols(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            base: HermitianMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            base: HermitianMatrix::identity(dim),
            rank: dim,
        }
    }

    /// Coordinate projection onto the listed (0-based) basis vectors.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Self {
        let mut d = vec![0.0; dim];
        for &i in indices {
            d[i] = 1.0;
        }
        let rank = d.iter().filter(|&&x| x == 1.0).count();
        Self {
            base: HermitianMatrix::diag(&d),
            rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Minimal projections are exactly the rank-one ones.
    pub fn is_minimal(&self) -> bool {
        self.rank == 1
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn as_matrix(&self) -> &CMatrix {
        self.base.as_matrix()
    }

    /// `1 − p`.
    pub fn complement(&self) -> Self {
        Self {
            base: &HermitianMatrix::identity(self.dim()) - &self.base,
            rank: self.dim() - self.rank,
        }
    }

    /// The range of `p` as a subspace.
    pub fn range(&self) -> Subspace {
        let basis = spectral_decompose(&self.base).select(|l| l >= 0.5);
        Subspace {
            dim_ambient: self.dim(),
            basis,
        }
    }

    pub fn to_contraction(&self) -> PositiveContraction {
        PositiveContraction::new(self.base.clone()).expect("projections are positive contractions")
    }
}

/// A subspace of `ℂⁿ` given by an orthonormal basis (possibly empty).
#[derive(Clone, Debug)]
pub struct Subspace {
    dim_ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    /// Validates that the basis columns are orthonormal to [`tol::ORTH`].
    pub fn new(dim_ambient: usize, basis: CMatrix) -> Result<Self> {
        check_dims(dim_ambient, basis.nrows())?;
        let gram = basis.adjoint() * &basis;
        let k = basis.ncols();
        let defect = (&gram - CMatrix::identity(k, k)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > tol::ORTH {
            return Err(Error::Precondition(format!(
                "subspace basis is not orthonormal (Gram defect {defect:e})"
            )));
        }
        Ok(Self { dim_ambient, basis })
    }

    pub fn zero(dim_ambient: usize) -> Self {
        Self {
            dim_ambient,
            basis: DMatrix::zeros(dim_ambient, 0),
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projection(&self) -> Projection {
        Projection::from_orthonormal(self.dim_ambient, &self.basis)
    }

    /// Cosines of the principal angles between `self` and `other`, descending.
    pub fn principal_cosines(&self, other: &Self) -> Vec<f64> {
        if self.is_zero() || other.is_zero() {
            return Vec::new();
        }
        let m = self.basis.adjoint() * &other.basis;
        let mut s = left_singular(&m).0;
        s.truncate(self.dim().min(other.dim()));
        s
    }

    /// A unit vector of `self` lying in `other`, if the smallest principal angle
    /// satisfies `cos θ ≥ 1 − WIT`.
    ///
    /// The vector returned is the principal vector on the `self` side.
    pub fn meet_vector(&self, other: &Self) -> Option<CVector> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let m = self.basis.adjoint() * &other.basis;
        let (cos, u) = left_singular(&m);
        if cos[0] < 1.0 - tol::WIT {
            return None;
        }
        let v = &self.basis * u.column(0);
        let n = v.norm();
        Some(v / Complex64::new(n, 0.0))
    }

    /// `self ⊆ other`, decided basis-free as `‖(1 − q) p‖ ≤ dim · PROJ`.
    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        proj_leq(&self.projection(), &other.projection())
    }
}

/// Projection onto the eigenvalue-1 eigenspace (`Fix(a)`).
///
/// Eigenvalues within [`tol::CLUSTER`] of 1 count as 1.
pub fn support_projection(a: &PositiveContraction) -> Projection {
    fix_space(a).projection()
}

/// Projection onto the span of eigenvectors with eigenvalue above [`tol::CLUSTER`].
pub fn range_projection(a: &PositiveContraction) -> Projection {
    let basis = a.spectrum().select(|l| l > tol::CLUSTER);
    Projection::from_orthonormal(a.dim(), &basis)
}

pub fn fix_space(a: &PositiveContraction) -> Subspace {
    Subspace {
        dim_ambient: a.dim(),
        basis: a.spectrum().select(|l| l >= 1.0 - tol::CLUSTER),
    }
}

pub fn kernel(a: &PositiveContraction) -> Subspace {
    Subspace {
        dim_ambient: a.dim(),
        basis: a.spectrum().select(|l| l <= tol::CLUSTER),
    }
}

/// `p ≤ q`, i.e. `range(p) ⊆ range(q)`, decided as `‖q p − p‖ ≤ dim · PROJ`.
pub fn proj_leq(p: &Projection, q: &Projection) -> Result<bool> {
    check_dims(p.dim(), q.dim())?;
    let defect = spectral_norm(&(&(q.as_hermitian() * p.as_hermitian()) - p.as_matrix()));
    Ok(defect <= tol::proj_scaled(p.dim()))
}

/// `a ⊥ b` for self-adjoint `a, b`: `‖a b‖ ≤ dim · PROJ`.
pub fn orthogonal(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<bool> {
    check_dims(a.dim(), b.dim())?;
    Ok(spectral_norm(&(a * b)) <= tol::proj_scaled(a.dim()))
}

/// The minimal projection `ξξ*` for a unit vector `ξ`.
pub fn rank_one(xi: &CVector) -> Result<Projection> {
    let norm = xi.norm();
    if xi.is_empty() || (norm - 1.0).abs() > tol::ORTH.max(1e-12 * xi.len() as f64) {
        return Err(Error::BadVector { norm });
    }
    let m = xi * xi.adjoint();
    Ok(Projection {
        base: HermitianMatrix::new(m)?,
        rank: 1,
    })
}

/// Checks `x = p + (1−p) x (1−p)` for a norm-one `x` with `p x p = p`.
///
/// The identity always holds for valid input, so this is a test-suite check.
/// Inputs violating the hypotheses are rejected.
pub fn peirce_corner_check(x: &HermitianMatrix, p: &Projection) -> Result<bool> {
    check_dims(x.dim(), p.dim())?;
    let n = x.dim();
    let norm = crate::linalg::operator_norm(x);
    if (norm - 1.0).abs() > tol::SPEC {
        return Err(Error::NotNormOne { norm });
    }
    let pm = p.as_matrix();
    let pxp = pm * x.as_matrix() * pm;
    let compress = spectral_norm(&(pxp - pm));
    if compress > tol::proj_scaled(n) {
        return Err(Error::Precondition(format!("p x p != p (defect {compress:e})")));
    }
    Ok(corner_defect(x, p) <= tol::proj_scaled(n))
}

/// `‖x − p − (1−p) x (1−p)‖`.
pub fn corner_defect(x: &HermitianMatrix, p: &Projection) -> f64 {
    let q = p.complement();
    let qm = q.as_matrix();
    let corner = qm * x.as_matrix() * qm;
    spectral_norm(&(x.as_matrix() - p.as_matrix() - corner))
}
