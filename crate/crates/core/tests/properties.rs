mod common;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use common::*;
use spheregeom::lattice::{
    fix_space, kernel, orthogonal, proj_leq, range_projection, support_projection, Projection,
};
use spheregeom::linalg::{
    functional_calculus, is_projection, operator_norm, spectral_decompose, spectral_norm, HermitianMatrix,
    PiecewiseLinearFn, PositiveContraction,
};
use spheregeom::oracle::random::{random_positive_contraction_with, random_unitary, with_spectrum};
use spheregeom::sphere::{
    compact_probe, distance_one_witness, double_sphere_membership, refutation_witness,
};
use spheregeom::tol;

fn contraction(dim: usize, norm_one: bool, seed: u64) -> PositiveContraction {
    random_positive_contraction_with(dim, norm_one, &mut stream(seed, 0))
}

fn unit_map() -> impl Strategy<Value = PiecewiseLinearFn> {
    (1usize..5)
        .prop_flat_map(|k| (prop::collection::vec(0.0f64..1.0, k), prop::collection::vec(0.0f64..=1.0, k + 2)))
        .prop_map(|(mut inner, values)| {
            inner.sort_by(f64::total_cmp);
            inner.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            inner.retain(|&t| t > 1e-3 && t < 1.0 - 1e-3);
            let mut bp = vec![0.0];
            bp.extend(inner);
            bp.push(1.0);
            let values = values[..bp.len()].to_vec();
            PiecewiseLinearFn::new(bp, values).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_never_exceeds_one(dim in 1usize..=8, s1: u64, s2: u64) {
        let a = contraction(dim, false, s1);
        let b = contraction(dim, false, s2);
        let d = a.distance(&b).unwrap();
        prop_assert!((0.0..=1.0 + tol::SPEC).contains(&d));
    }

    #[test]
    fn calculus_respects_composition(dim in 1usize..=6, seed: u64, f in unit_map(), g in unit_map()) {
        let a = contraction(dim, false, seed);
        let ga = PositiveContraction::new(functional_calculus(&a, &g)).unwrap();
        let nested = functional_calculus(&ga, &f);
        let composed = functional_calculus(&a, &f.compose(&g).unwrap());
        let err = operator_norm(&(&nested - &composed));
        prop_assert!(err <= tol::RECON, "error {err:e}");
    }

    #[test]
    fn support_below_range(dim in 1usize..=8, seed: u64) {
        let a = contraction(dim, true, seed);
        let s = support_projection(&a);
        let r = range_projection(&a);
        prop_assert!(proj_leq(&s, &r).unwrap());
        // a − s(a) ≥ 0
        let rest = a.as_hermitian() - s.as_hermitian();
        prop_assert!(spectral_decompose(&rest).min() >= -tol::SPEC);
        // a norm-one positive matrix has a nonzero support
        prop_assert!(!s.is_zero());
    }

    #[test]
    fn fix_and_kernel_inclusions(dim in 2usize..=6, seed: u64) {
        // share an eigenbasis half the time so that inclusions actually occur
        let mut r = stream(seed, 0);
        let u = random_unitary(dim, &mut r);
        let spectrum = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            (0..dim).map(|_| [0.0, 1.0, 0.5][r.random_range(0..3)]).collect()
        };
        let (ea, eb) = (spectrum(&mut r), spectrum(&mut r));
        let a = with_spectrum(&u, &ea);
        let b = if r.random_bool(0.5) { with_spectrum(&u, &eb) } else { with_spectrum(&random_unitary(dim, &mut r), &eb) };
        let fix_incl = fix_space(&a).is_subspace_of(&fix_space(&b)).unwrap();
        prop_assert_eq!(fix_incl, proj_leq(&support_projection(&a), &support_projection(&b)).unwrap());
        let ker_incl = kernel(&a).is_subspace_of(&kernel(&b)).unwrap();
        let co = |x: &PositiveContraction| range_projection(x).complement();
        prop_assert_eq!(ker_incl, proj_leq(&co(&a), &co(&b)).unwrap());
        // the shared-basis case has an exact answer from the spectra
        if b.as_hermitian().max_abs_diff(with_spectrum(&u, &eb).as_hermitian()) == 0.0 {
            let expect = (0..dim).all(|i| ea[i] != 1.0 || eb[i] == 1.0);
            prop_assert_eq!(fix_incl, expect);
        }
    }

    #[test]
    fn double_sphere_is_reflexive(dim in 1usize..=6, seed: u64) {
        let a = contraction(dim, true, seed);
        prop_assert!(double_sphere_membership(&a, &a).unwrap().member);
    }

    #[test]
    fn refutation_leaves_a_second_member(dim in 2usize..=6, seed: u64) {
        let a = contraction(dim, true, seed);
        prop_assume!(!is_projection(a.as_hermitian()));
        let w = refutation_witness(&a).unwrap().unwrap();
        prop_assert!(double_sphere_membership(&w.c, &a).unwrap().member);
        prop_assert!(a.distance(&w.c).unwrap() > tol::DIST);
    }

    #[test]
    fn witnesses_are_sound(dim in 2usize..=6, seed: u64, swap: bool) {
        let (a, b) = planted_pair(dim, swap, &mut stream(seed, 0));
        let w = distance_one_witness(&a, &b).unwrap().expect("planted pair has a witness");
        prop_assert!(w.certifies(&a, &b).unwrap());
        assert_abs_diff_eq!(w.certified_distance(&a, &b), 1.0, epsilon = tol::DIST);
    }
}

/// Round trip of the eigensolver on general Hermitian matrices, including
/// repeated eigenvalues.
#[test]
fn spectral_round_trip_1000() {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let mut r = stream(7, i);
        let n = r.random_range(1..=8);
        let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)));
        let mut h = HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).unwrap();
        if i % 4 == 0 {
            let eig: Vec<f64> = (0..n).map(|k| (k / 2) as f64 * 0.25).collect();
            h = with_spectrum(&random_unitary(n, &mut r), &eig).as_hermitian().clone();
        }
        let d = spectral_decompose(&h);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let v = d.eigenvectors();
        let orth = spectral_norm(&(v.adjoint() * v - DMatrix::identity(n, n)));
        assert!(orth <= 1e-12, "orthonormality {orth:e}");
        worst = worst.max(operator_norm(&(&d.reconstruct() - &h)));
    }
    assert!(worst <= tol::RECON, "worst reconstruction error {worst:e}");
}

/// `is_projection` against the idempotency defect, away from the band
/// `(PROJ, dim · PROJ]` where the two thresholds legitimately differ.
#[test]
fn idempotency_cross_check() {
    for i in 0..1000 {
        let mut r = stream(8, i);
        let n = r.random_range(1..=8);
        let mut eig: Vec<f64> = (0..n).map(|_| if r.random_bool(0.5) { 1.0 } else { 0.0 }).collect();
        match i % 3 {
            0 => {}
            1 => {
                let k = r.random_range(0..n);
                let delta = [1e-10, 1e-8, 1e-5, 1e-3, 0.3][r.random_range(0..5)];
                eig[k] = if eig[k] == 1.0 { 1.0 - delta } else { delta };
            }
            _ => eig.iter_mut().for_each(|x| *x = r.random::<f64>()),
        }
        let a = with_spectrum(&random_unitary(n, &mut r), &eig);
        let m = a.as_matrix();
        let defect = spectral_norm(&(m * m - m));
        assert_eq!(
            is_projection(a.as_hermitian()),
            defect <= tol::proj_scaled(n),
            "spectrum {eig:?}, defect {defect:e}"
        );
    }
}

/// A compact probe `x` built on `e` has `Fix(x) = range(e)` and `ker(x) = 0`, so
/// for a projection `p`, `‖x − p‖ = 1` iff `p` kills `range(e)`, i.e. `e ⊥ p`.
/// Checked against the computed distance.
#[test]
fn monotone_probe_property() {
    for i in 0..300 {
        let mut r = stream(9, i);
        let n = r.random_range(2..=6);
        let u = random_unitary(n, &mut r);
        let cols: Vec<Projection> = (0..n)
            .map(|j| Projection::new(HermitianMatrix::new(column(&u.column(j).into_owned()) * u.column(j).adjoint()).unwrap()).unwrap())
            .collect();
        let e = cols[0].clone();
        let x = compact_probe(&e, &cols[1..]).unwrap();
        // projections: random, or built from the probe basis to hit the boundary
        let p = match i % 3 {
            0 => {
                let (p, _, _) = projection_and_complement(n, n, &mut r);
                p
            }
            1 => {
                let picks: Vec<usize> = (1..n).filter(|_| r.random_bool(0.5)).collect();
                let basis = u.select_columns(picks.iter());
                if picks.is_empty() { Projection::zero(n) } else { Projection::new(HermitianMatrix::new(&basis * basis.adjoint()).unwrap()).unwrap() }
            }
            _ => {
                let picks: Vec<usize> = (0..n).filter(|&j| j == 0 || r.random_bool(0.5)).collect();
                let basis = u.select_columns(picks.iter());
                Projection::new(HermitianMatrix::new(&basis * basis.adjoint()).unwrap()).unwrap()
            }
        };
        let d = operator_norm(&(x.as_hermitian() - p.as_hermitian()));
        let e_perp_p = orthogonal(e.as_hermitian(), p.as_hermitian()).unwrap();
        assert_eq!((d - 1.0).abs() <= tol::DIST, e_perp_p, "probe distance {d}, case {}", i % 3);
    }
}

#[test]
fn isometries_of_probes_commute_with_spheres() {
    // unitary conjugation maps the probe of e to the probe of u e u*
    let mut r = stream(10, 0);
    let n = 4;
    let u = random_unitary(n, &mut r);
    let cols: Vec<Projection> = (0..n).map(|j| Projection::coordinate(n, &[j])).collect();
    let x = compact_probe(&cols[0], &cols[1..]).unwrap();
    let conj: Vec<Projection> = cols
        .iter()
        .map(|p| Projection::new(p.as_hermitian().conjugate_by(&u)).unwrap())
        .collect();
    let y = compact_probe(&conj[0], &conj[1..]).unwrap();
    assert!(y.as_hermitian().max_abs_diff(&x.as_hermitian().conjugate_by(&u)) < 1e-12);
}
