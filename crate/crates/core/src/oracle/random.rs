//! Seeded random generators.
//!
//! Every generator takes an explicit RNG or seed; the same seed always yields the
//! same matrix. Batch callers derive one ChaCha stream per item so results do not
//! depend on thread scheduling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lattice::Projection;
use crate::linalg::{CMatrix, CVector, HermitianMatrix, PositiveContraction};

/// The crate's RNG: ChaCha8, seeded from a `u64`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / Complex64::new(d.norm(), 0.0);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v = DVector::from_fn(dim, |_, _| gaussian_complex(rng));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `u diag(eigenvalues) u*`.
pub fn with_spectrum(u: &CMatrix, eigenvalues: &[f64]) -> PositiveContraction {
    let h = HermitianMatrix::diag(eigenvalues).conjugate_by(u);
    PositiveContraction::new(h).expect("spectrum in [0, 1]")
}

/// Eigenvalues uniform in `[0, 1]` (one of them forced to 1 when requested) in a
/// Haar-random eigenbasis.
pub fn random_positive_contraction_with<R: Rng + ?Sized>(
    dim: usize,
    force_norm_one: bool,
    rng: &mut R,
) -> PositiveContraction {
    let mut eig: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    if force_norm_one {
        let k = rng.random_range(0..dim);
        eig[k] = 1.0;
    }
    let u = random_unitary(dim, rng);
    with_spectrum(&u, &eig)
}

pub fn random_positive_contraction(dim: usize, force_norm_one: bool, seed: u64) -> PositiveContraction {
    random_positive_contraction_with(dim, force_norm_one, &mut rng(seed))
}

/// A projection of the given rank in a Haar-random basis.
pub fn random_projection<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Projection {
    let u = random_unitary(dim, rng);
    let basis = u.columns(0, rank).into_owned();
    Projection::from_orthonormal(dim, &basis)
}

/// Orthonormal basis of the orthogonal complement of the columns of `basis`
/// (which must be orthonormal), completed from a random unitary.
pub fn complement_basis<R: Rng + ?Sized>(basis: &CMatrix, rng: &mut R) -> CMatrix {
    let n = basis.nrows();
    let k = basis.ncols();
    let u = random_unitary(n, rng);
    let mut cols: Vec<CVector> = (0..k).map(|j| basis.column(j).into_owned()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = u.column(j).into_owned();
        // two passes of Gram–Schmidt
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            let v = v / Complex64::new(norm, 0.0);
            cols.push(v.clone());
            out.push(v);
        }
    }
    if out.is_empty() {
        return CMatrix::zeros(n, 0);
    }
    CMatrix::from_columns(&out)
}
