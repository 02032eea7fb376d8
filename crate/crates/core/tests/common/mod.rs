//! Construct-then-verify generators shared by the integration suites.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use spheregeom::diagonal::{DiagonalOperator, Tail};
use spheregeom::lattice::Projection;
use spheregeom::linalg::{CMatrix, CVector, HermitianMatrix, PositiveContraction};
use spheregeom::oracle::random::{complement_basis, random_unit_vector, random_unitary, rng_stream, with_spectrum};

pub fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    rng_stream(seed, i as u64)
}

/// Embeds `y` (k×k) as `w y w*` for a k-column isometry `w`.
pub fn embed(w: &CMatrix, y: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::new(w * y * w.adjoint()).unwrap()
}

/// `k` eigenvalues uniform in `[0, 1]`, in a random basis of `ℂᵏ`, as a raw matrix.
pub fn random_psd_block<R: Rng>(k: usize, force_one: bool, rng: &mut R) -> CMatrix {
    if k == 0 {
        return CMatrix::zeros(0, 0);
    }
    let mut eig: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
    if force_one {
        eig[rng.random_range(0..k)] = 1.0;
    }
    with_spectrum(&random_unitary(k, rng), &eig).as_matrix().clone()
}

/// Hermitian `k×k` with eigenvalues uniform in `[−1, 1]`.
pub fn random_hermitian_contraction<R: Rng>(k: usize, rng: &mut R) -> CMatrix {
    if k == 0 {
        return CMatrix::zeros(0, 0);
    }
    let eig: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let u = random_unitary(k, rng);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(k, eig.iter().map(|&x| Complex64::new(x, 0.0))));
    &u * d * u.adjoint()
}

pub fn column(v: &CVector) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

/// A pair at distance exactly one: a random unit `ξ` is fixed by `a` and killed by
/// `b` (or the reverse when `swap`). Fix and kernel spaces get random extra
/// multiplicity, so the witness is generally not an eigenvector the solver picks.
pub fn planted_pair<R: Rng>(dim: usize, swap: bool, rng: &mut R) -> (PositiveContraction, PositiveContraction) {
    let u = random_unitary(dim, rng);
    let mut ea: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let mut eb: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    // column 0 is the planted direction
    ea[0] = 1.0;
    eb[0] = 0.0;
    if dim > 1 {
        // degenerate Fix(a) and ker(b), overlapping only along column 0
        if rng.random_bool(0.5) {
            ea[1] = 1.0;
        }
        if rng.random_bool(0.5) {
            eb[dim - 1] = 0.0;
        }
        // b must reach norm one somewhere else
        let j = rng.random_range(1..dim);
        eb[j] = 1.0;
    }
    let (a, b) = (with_spectrum(&u, &ea), with_spectrum(&u, &eb));
    if swap {
        (b, a)
    } else {
        (a, b)
    }
}

/// A norm-one `x` at distance one from `a`, built from a unit `ξ` either fixed by `a`
/// (then `ξ ∈ ker x`) or killed by `a` (then `ξ ∈ Fix x`).
pub fn distance_one_partner<R: Rng>(a: &PositiveContraction, rng: &mut R) -> PositiveContraction {
    let spec = a.spectrum();
    let pick = |lo: f64, hi: f64| -> Vec<usize> {
        (0..a.dim()).filter(|&i| (lo..=hi).contains(&spec.eigenvalues()[i])).collect()
    };
    let fixed = pick(1.0 - 1e-7, 2.0);
    let killed = pick(-1.0, 1e-7);
    let use_kernel = !killed.is_empty() && rng.random_bool(0.5);
    let cols = if use_kernel { &killed } else { &fixed };
    assert!(!cols.is_empty(), "norm-one a has a fixed vector");
    // random unit vector of the chosen eigenspace
    let basis = spec.eigenvectors().select_columns(cols.iter());
    let coeff = random_unit_vector(cols.len(), rng);
    let xi = &basis * coeff;
    let xi_col = column(&xi);
    let w = complement_basis(&xi_col, rng);
    let n = a.dim();
    let rest_needs_one = !use_kernel;
    let y = random_psd_block(n - 1, rest_needs_one, rng);
    let mut x = if n > 1 { embed(&w, &y) } else { HermitianMatrix::zeros(1) };
    if use_kernel {
        x = &x + &HermitianMatrix::new(&xi_col * xi_col.adjoint()).unwrap();
    }
    PositiveContraction::norm_one(x).unwrap()
}

/// A random projection of rank in `1..=max_rank`, together with an isometry onto
/// its complement.
pub fn projection_and_complement<R: Rng>(dim: usize, max_rank: usize, rng: &mut R) -> (Projection, CMatrix, CMatrix) {
    let rank = rng.random_range(1..=max_rank.min(dim));
    let u = random_unitary(dim, rng);
    let v = u.columns(0, rank).into_owned();
    let w = u.columns(rank, dim - rank).into_owned();
    let p = Projection::new(HermitianMatrix::new(&v * v.adjoint()).unwrap()).unwrap();
    (p, v, w)
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

pub const VALUES: [(i64, i64); 7] = [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4)];

/// Deterministic pool: short rational prefixes with all three tails, including
/// a harmonic tail whose first entry is exactly 1.
pub fn pool(size: usize) -> Vec<DiagonalOperator> {
    (0..size)
        .map(|i| {
            let mut r = rng_stream(2024, i as u64);
            let len = r.random_range(0..=5);
            let prefix: Vec<BigRational> = (0..len)
                .map(|_| {
                    let (p, d) = VALUES[r.random_range(0..VALUES.len())];
                    q(p, d)
                })
                .collect();
            let tail = match r.random_range(0..6) {
                0 | 1 => Tail::Zero,
                2 => Tail::Harmonic(q(1, 1)),
                3 => Tail::Harmonic(q(2 * (len as i64 + 1), 1)),
                4 => Tail::Harmonic(q(1, 3)),
                _ => Tail::MIncreasing,
            };
            DiagonalOperator::new(prefix, tail).unwrap()
        })
        .collect()
}

