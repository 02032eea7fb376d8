//! Distance-one witnesses, sphere and double-sphere membership, and the
//! constructive elements used to separate a non-projection from its double sphere.
//!
//! For norm-one positive contractions `a, b`:
//!
//! * `‖a − b‖ = 1` exactly when some unit vector `ξ` is fixed by one of them and
//!   killed by the other. [`distance_one_witness`] finds such a `ξ` and returns the
//!   minimal projection `ξξ*` tagged with which side fixes it.
//! * The double sphere `Sph⁺(Sph⁺(a))` is the set of `b` with `s(a) ≤ s(b)` and
//!   `r(b) ≤ r(a)` (equivalently `Fix(a) ⊆ Fix(b)` and `ker(a) ⊆ ker(b)`).
//!   [`double_sphere_membership`] evaluates that closed form; the definitional set is
//!   only ever enumerated by the brute-force oracle in [`crate::oracle`].
//! * The double sphere of `a` is `{a}` iff `a` is a projection. When it is not,
//!   [`refutation_witness`] builds a second member `c = f(a)` explicitly.

use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{self, fix_space, kernel, orthogonal, proj_leq, range_projection, rank_one, support_projection, Projection};
use crate::linalg::{
    check_dims, functional_calculus, is_projection, operator_norm, spectral_decompose, CVector, HermitianMatrix,
    PiecewiseLinearFn, PositiveContraction,
};
use crate::tol;

/// Which of the two operands fixes the witness vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessCase {
    /// `e ≤ a` and `e ⊥ b`.
    ELeqAEPerpB,
    /// `e ≤ b` and `e ⊥ a`.
    ELeqBEPerpA,
}

impl WitnessCase {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessCase::ELeqAEPerpB => "ELeqA_EPerpB",
            WitnessCase::ELeqBEPerpA => "ELeqB_EPerpA",
        }
    }
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A minimal projection `e = ξξ*` certifying `‖a − b‖ = 1`.
#[derive(Clone, Debug)]
pub struct SphereWitness {
    e: Projection,
    vector: CVector,
    case: WitnessCase,
}

impl SphereWitness {
    fn from_vector(mut vector: CVector, case: WitnessCase) -> Self {
        normalize_phase(&mut vector);
        let e = rank_one(&vector).expect("witness vectors are unit vectors");
        Self { e, vector, case }
    }

    pub fn projection(&self) -> &Projection {
        &self.e
    }

    /// The unit vector `ξ` with `e = ξξ*`, phase-normalized so its largest
    /// component is real and positive.
    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn case(&self) -> WitnessCase {
        self.case
    }

    /// Checks the witness against its defining relations: rank one, `e ≤ s(x)`
    /// and `e ⊥ y`, where `(x, y)` is `(a, b)` or `(b, a)` depending on the case.
    pub fn certifies(&self, a: &PositiveContraction, b: &PositiveContraction) -> Result<bool> {
        let (fixer, killer) = match self.case {
            WitnessCase::ELeqAEPerpB => (a, b),
            WitnessCase::ELeqBEPerpA => (b, a),
        };
        Ok(self.e.is_minimal()
            && proj_leq(&self.e, &support_projection(fixer))?
            && orthogonal(self.e.as_hermitian(), killer.as_hermitian())?)
    }

    /// The lower bound `⟨(a − b)ξ, ξ⟩` (or its negative in the second case),
    /// which equals 1 for an exact witness.
    pub fn certified_distance(&self, a: &PositiveContraction, b: &PositiveContraction) -> f64 {
        let d = a.as_matrix() - b.as_matrix();
        let q = (self.vector.adjoint() * d * &self.vector)[(0, 0)].re;
        match self.case {
            WitnessCase::ELeqAEPerpB => q,
            WitnessCase::ELeqBEPerpA => -q,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case.as_str(),
            "vector_re": json::numbers(self.vector.iter().map(|z| z.re)),
            "vector_im": json::numbers(self.vector.iter().map(|z| z.im)),
        })
    }
}

fn normalize_phase(v: &mut CVector) {
    let pivot = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, z)| if z.norm() > best.1 + 1e-12 { (i, z.norm()) } else { best });
    let z = v[pivot.0];
    if z.norm() > 0.0 {
        let phase = z.conj() / Complex64::new(z.norm(), 0.0);
        v.iter_mut().for_each(|x| *x *= phase);
        v[pivot.0] = Complex64::new(v[pivot.0].re, 0.0);
    }
}

fn require_pair(a: &PositiveContraction, b: &PositiveContraction) -> Result<()> {
    check_dims(a.dim(), b.dim())?;
    a.require_norm_one()?;
    b.require_norm_one()
}

/// Returns a witness iff `|‖a − b‖ − 1| ≤ DIST`.
///
/// Search order: a unit vector of `Fix(a) ∩ ker(b)` (case `ELeqA_EPerpB`), then of
/// `Fix(b) ∩ ker(a)`. Intersections are found with principal angles, so degenerate
/// eigenspaces with arbitrary eigenbases are handled. If the distance is within
/// `DIST` of 1 but neither intersection clears the principal-angle threshold (an
/// input sitting inside the tolerance band), the extremal eigenvector of `a − b`
/// is returned instead.
pub fn distance_one_witness(a: &PositiveContraction, b: &PositiveContraction) -> Result<Option<SphereWitness>> {
    require_pair(a, b)?;
    let diff = a.as_hermitian() - b.as_hermitian();
    let spec = spectral_decompose(&diff);
    let distance = spec.min().abs().max(spec.max().abs());
    if (distance - 1.0).abs() > tol::DIST {
        return Ok(None);
    }
    if let Some(v) = fix_space(a).meet_vector(&kernel(b)) {
        return Ok(Some(SphereWitness::from_vector(v, WitnessCase::ELeqAEPerpB)));
    }
    if let Some(v) = fix_space(b).meet_vector(&kernel(a)) {
        return Ok(Some(SphereWitness::from_vector(v, WitnessCase::ELeqBEPerpA)));
    }
    let n = diff.dim();
    let witness = if spec.max() >= -spec.min() {
        SphereWitness::from_vector(spec.eigenvector(n - 1), WitnessCase::ELeqAEPerpB)
    } else {
        SphereWitness::from_vector(spec.eigenvector(0), WitnessCase::ELeqBEPerpA)
    };
    Ok(Some(witness))
}

/// `x ∈ Sph⁺(E)`: `‖x − b‖ = 1` (within `DIST`) for every `b ∈ E`.
///
/// An empty `E` gives `true` vacuously.
pub fn in_sphere_around(x: &PositiveContraction, set: &[PositiveContraction]) -> Result<bool> {
    x.require_norm_one()?;
    for b in set {
        let d = x.distance(b)?;
        if (d - 1.0).abs() > tol::DIST {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed-form double-sphere verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleSphereVerdict {
    pub member: bool,
    /// `s(a) ≤ s(b)`.
    pub support_ok: bool,
    /// `1 − r(a) ≤ 1 − r(b)`, i.e. `r(b) ≤ r(a)`.
    pub cosupport_ok: bool,
}

impl DoubleSphereVerdict {
    pub fn new(support_ok: bool, cosupport_ok: bool) -> Self {
        Self {
            member: support_ok && cosupport_ok,
            support_ok,
            cosupport_ok,
        }
    }

    /// Verdict from precomputed support and range projections.
    pub fn from_projections(
        support_a: &Projection,
        range_a: &Projection,
        support_b: &Projection,
        range_b: &Projection,
    ) -> Result<Self> {
        Ok(Self::new(proj_leq(support_a, support_b)?, proj_leq(range_b, range_a)?))
    }

    pub fn to_json(&self, witness: Option<&SphereWitness>) -> Value {
        json!({
            "member": self.member,
            "support_ok": self.support_ok,
            "cosupport_ok": self.cosupport_ok,
            "witness": witness.map_or(Value::Null, SphereWitness::to_json),
        })
    }
}

/// Is `b ∈ Sph⁺(Sph⁺(a))`? Evaluated as `s(a) ≤ s(b)` and `r(b) ≤ r(a)`.
pub fn double_sphere_membership(b: &PositiveContraction, a: &PositiveContraction) -> Result<DoubleSphereVerdict> {
    require_pair(a, b)?;
    DoubleSphereVerdict::from_projections(
        &support_projection(a),
        &range_projection(a),
        &support_projection(b),
        &range_projection(b),
    )
}

/// Decides whether the double sphere of `a` is `{a}` without enumerating it.
///
/// The predicate set collapses to a point exactly when `s(a) = r(a) = a`, checked
/// to [`tol::PROJ`]. Agrees with [`crate::linalg::is_projection`].
pub fn is_projection_via_double_sphere(a: &PositiveContraction) -> Result<bool> {
    a.require_norm_one()?;
    let s = support_projection(a);
    let r = range_projection(a);
    Ok(operator_norm(&(s.as_hermitian() - a.as_hermitian())) <= tol::PROJ
        && operator_norm(&(r.as_hermitian() - a.as_hermitian())) <= tol::PROJ)
}

/// The three-branch cut-off at `t0 ∈ (0, 1)`: zero on `[0, t0]`, the line of slope
/// `(1 + t0)/(1 − t0)` from `(t0, 0)` to `((1 + t0)/2, (1 + t0)/2)`, and `t` above.
pub fn cutoff_function(t0: f64) -> Result<PiecewiseLinearFn> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::InvalidFunction(format!("cut-off point {t0} must lie in (0, 1)")));
    }
    let mid = (1.0 + t0) / 2.0;
    PiecewiseLinearFn::new(vec![0.0, t0, mid, 1.0], vec![0.0, 0.0, mid, 1.0])
}

/// `d(t) = (t − m0)/(1 − m0)` on `[m0, 1]`, extended by 0 below `m0`.
pub fn affine_rescale_function(m0: f64) -> Result<PiecewiseLinearFn> {
    if !(m0 > 0.0 && m0 < 1.0) {
        return Err(Error::InvalidFunction(format!("minimum {m0} must lie in (0, 1)")));
    }
    PiecewiseLinearFn::new(vec![0.0, m0, 1.0], vec![0.0, 0.0, 1.0])
}

/// A second member `c` of the double sphere of a non-projection `a`.
#[derive(Clone, Debug)]
pub struct Refutation {
    pub c: PositiveContraction,
    /// The spectral value used as cut-off; `‖a − c‖ = t0`.
    pub t0: f64,
}

/// For a non-projection `a`, returns `c = f(a)` with `f` the cut-off at the most
/// central spectral value `t0 ∈ σ(a) ∩ (0, 1)`.
///
/// Then `‖c‖ = 1`, `‖a − c‖ = t0 < 1`, and `c` lies in the double sphere of `a`.
/// Projections yield `None`.
pub fn refutation_witness(a: &PositiveContraction) -> Result<Option<Refutation>> {
    a.require_norm_one()?;
    if is_projection(a.as_hermitian()) {
        return Ok(None);
    }
    let t0 = a
        .spectrum()
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > tol::PROJ && l < 1.0 - tol::PROJ)
        .max_by(|x, y| x.min(1.0 - x).total_cmp(&y.min(1.0 - y)))
        .expect("a non-projection has a spectral value inside (0, 1)");
    let f = cutoff_function(t0)?;
    let c = PositiveContraction::new(functional_calculus(a, &f))?;
    Ok(Some(Refutation { c, t0 }))
}

/// For invertible `b` with minimum spectral value `m0 ∈ (0, 1)`, returns
/// `d = (b − m0)/(1 − m0)`, which satisfies `‖b − d‖ = m0` and `‖1 − d‖ = 1`.
pub fn invertible_case_witness(b: &PositiveContraction) -> Result<Option<PositiveContraction>> {
    b.require_norm_one()?;
    let m0 = b.spectrum().min();
    if m0 <= tol::CLUSTER || m0 >= 1.0 - tol::CLUSTER {
        return Ok(None);
    }
    let f = affine_rescale_function(m0)?;
    Ok(Some(PositiveContraction::new(functional_calculus(b, &f))?))
}

/// `e + ½(1 − e)` for a minimal projection `e`.
pub fn atomic_probe(e: &Projection) -> Result<PositiveContraction> {
    if !e.is_minimal() {
        return Err(Error::NotRankOne { rank: e.rank() });
    }
    let probe = e.as_hermitian() + &e.complement().as_hermitian().scale(0.5);
    PositiveContraction::new(probe)
}

/// `e + Σₙ vₙ/(2n)` (n = 1, 2, …) for a minimal `e` and mutually orthogonal
/// minimal `vₙ` with `e + Σ vₙ = 1`.
///
/// The result has norm one, support projection `e` and range projection `1`.
pub fn compact_probe(e: &Projection, tail_basis: &[Projection]) -> Result<PositiveContraction> {
    if !e.is_minimal() {
        return Err(Error::NotRankOne { rank: e.rank() });
    }
    let n = e.dim();
    let mut all = vec![e];
    for v in tail_basis {
        check_dims(n, v.dim())?;
        if !v.is_minimal() {
            return Err(Error::InvalidBasis(format!("tail element has rank {}", v.rank())));
        }
        all.push(v);
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if !orthogonal(all[i].as_hermitian(), all[j].as_hermitian())? {
                return Err(Error::InvalidBasis(format!("elements {i} and {j} are not orthogonal")));
            }
        }
    }
    let mut total = e.as_hermitian().clone();
    let mut probe = e.as_hermitian().clone();
    for (k, v) in tail_basis.iter().enumerate() {
        total = &total + v.as_hermitian();
        probe = &probe + &v.as_hermitian().scale(1.0 / (2.0 * (k + 1) as f64));
    }
    if total.max_abs_diff(&HermitianMatrix::identity(n)) > tol::proj_scaled(n) {
        return Err(Error::InvalidBasis("e and the tail do not sum to the identity".into()));
    }
    PositiveContraction::new(probe)
}

/// Support and range projections of `a`, bundled for repeated verdicts.
#[derive(Clone, Debug)]
pub struct LatticeData {
    pub support: Projection,
    pub range: Projection,
}

impl LatticeData {
    pub fn of(a: &PositiveContraction) -> Self {
        Self {
            support: lattice::support_projection(a),
            range: lattice::range_projection(a),
        }
    }

    /// Verdict for `self` (as `b`) against `a`.
    pub fn member_of_double_sphere_of(&self, a: &LatticeData) -> Result<DoubleSphereVerdict> {
        DoubleSphereVerdict::from_projections(&a.support, &a.range, &self.support, &self.range)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> PositiveContraction {
        PositiveContraction::diag(v).unwrap()
    }

    fn half_ones() -> PositiveContraction {
        PositiveContraction::new(
            HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn witness_for_orthogonal_projections() {
        let a = diag(&[1.0, 0.0]);
        let b = diag(&[0.0, 1.0]);
        let w = distance_one_witness(&a, &b).unwrap().unwrap();
        assert_eq!(w.case(), WitnessCase::ELeqAEPerpB);
        assert!(w.projection().as_hermitian().max_abs_diff(a.as_hermitian()) < 1e-14);
        assert!(w.certifies(&a, &b).unwrap());
        assert!((w.certified_distance(&a, &b) - 1.0).abs() < 1e-14);

        let w = distance_one_witness(&b, &a).unwrap().unwrap();
        assert_eq!(w.case(), WitnessCase::ELeqAEPerpB);
    }

    #[test]
    fn second_case_when_only_b_fixes() {
        let a = diag(&[1.0, 0.0, 0.5]);
        let b = diag(&[1.0, 1.0, 0.0]);
        // Fix(a) = e1 is not in ker(b); Fix(b) ∩ ker(a) = e2
        let w = distance_one_witness(&a, &b).unwrap().unwrap();
        assert_eq!(w.case(), WitnessCase::ELeqBEPerpA);
        assert!(w.certifies(&a, &b).unwrap());
    }

    #[test]
    fn no_witness_below_distance_one() {
        let a = diag(&[1.0, 0.5]);
        assert!(distance_one_witness(&a, &a).unwrap().is_none());

        let a = diag(&[1.0, 0.0]);
        let b = half_ones();
        assert!(distance_one_witness(&a, &b).unwrap().is_none());
        let d = a.distance(&b).unwrap();
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn witness_rejects_non_norm_one() {
        let a = diag(&[0.5, 0.0]);
        let b = diag(&[0.0, 1.0]);
        assert!(matches!(distance_one_witness(&a, &b), Err(Error::NotNormOne { .. })));
        assert!(matches!(
            distance_one_witness(&diag(&[1.0]), &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sphere_membership_examples() {
        let e1 = diag(&[1.0, 0.0]);
        let e2 = diag(&[0.0, 1.0]);
        assert!(in_sphere_around(&e2, std::slice::from_ref(&e1)).unwrap());
        assert!(!in_sphere_around(&e1, std::slice::from_ref(&e1)).unwrap());
        assert!(in_sphere_around(&diag(&[1.0, 0.25]), &[e2.clone(), e2.clone()]).unwrap());
        assert!(in_sphere_around(&e1, &[]).unwrap());
    }

    #[test]
    fn double_sphere_examples() {
        let p = diag(&[1.0, 0.0, 1.0]);
        assert!(double_sphere_membership(&p, &p).unwrap().member);

        let a = diag(&[1.0, 0.5, 0.0]);
        assert!(double_sphere_membership(&diag(&[1.0, 0.75, 0.0]), &a).unwrap().member);
        let v = double_sphere_membership(&diag(&[1.0, 0.0, 1.0]), &a).unwrap();
        assert!(!v.member);
        assert!(v.support_ok);
        assert!(!v.cosupport_ok);
    }

    #[test]
    fn projection_via_double_sphere_examples() {
        assert!(is_projection_via_double_sphere(&diag(&[1.0, 0.0, 1.0])).unwrap());
        assert!(!is_projection_via_double_sphere(&diag(&[1.0, 0.5])).unwrap());
        assert!(is_projection_via_double_sphere(&half_ones()).unwrap());
    }

    #[test]
    fn refutation_examples() {
        let a = diag(&[1.0, 0.5, 0.0]);
        let r = refutation_witness(&a).unwrap().unwrap();
        assert_eq!(r.t0, 0.5);
        assert!(r.c.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.0, 0.0])) < 1e-14);
        assert!((a.distance(&r.c).unwrap() - 0.5).abs() < 1e-14);
        assert!(double_sphere_membership(&r.c, &a).unwrap().member);

        assert!(refutation_witness(&diag(&[1.0, 0.0])).unwrap().is_none());

        let a = diag(&[1.0, 0.75]);
        let r = refutation_witness(&a).unwrap().unwrap();
        assert!(r.c.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.0])) < 1e-14);
        assert!((a.distance(&r.c).unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn refutation_picks_most_central_value() {
        let a = diag(&[1.0, 0.9, 0.45, 0.1]);
        assert_eq!(refutation_witness(&a).unwrap().unwrap().t0, 0.45);
    }

    #[test]
    fn invertible_case_examples() {
        let b = diag(&[1.0, 0.5]);
        let d = invertible_case_witness(&b).unwrap().unwrap();
        assert!(d.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.0])) < 1e-14);
        assert!((b.distance(&d).unwrap() - 0.5).abs() < 1e-14);
        let one = PositiveContraction::new(HermitianMatrix::identity(2)).unwrap();
        assert!((one.distance(&d).unwrap() - 1.0).abs() < 1e-14);

        assert!(invertible_case_witness(&one).unwrap().is_none());
        assert!(invertible_case_witness(&diag(&[1.0, 0.0])).unwrap().is_none());
    }

    #[test]
    fn atomic_probe_examples() {
        let e = Projection::coordinate(3, &[1]);
        let x = atomic_probe(&e).unwrap();
        assert!(x.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[0.5, 1.0, 0.5])) < 1e-15);
        let p = Projection::coordinate(3, &[0]);
        assert!((x.distance(&p.to_contraction()).unwrap() - 1.0).abs() < 1e-15);

        let x = atomic_probe(&Projection::coordinate(2, &[0])).unwrap();
        assert!(x.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.5])) < 1e-15);

        assert!(matches!(
            atomic_probe(&Projection::coordinate(3, &[0, 1])),
            Err(Error::NotRankOne { rank: 2 })
        ));
    }

    #[test]
    fn compact_probe_examples() {
        let e = Projection::coordinate(3, &[0]);
        let tail = [Projection::coordinate(3, &[1]), Projection::coordinate(3, &[2])];
        let x = compact_probe(&e, &tail).unwrap();
        assert!(x.as_hermitian().max_abs_diff(&HermitianMatrix::diag(&[1.0, 0.5, 0.25])) < 1e-15);
        assert!(support_projection(&x).as_hermitian().max_abs_diff(e.as_hermitian()) < 1e-14);
        assert_eq!(range_projection(&x).rank(), 3);

        // incomplete
        assert!(matches!(compact_probe(&e, &tail[..1]), Err(Error::InvalidBasis(_))));
        // not orthogonal
        let bad = [Projection::coordinate(3, &[1]), Projection::coordinate(3, &[1])];
        assert!(matches!(compact_probe(&e, &bad), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn witness_json_shape() {
        let w = distance_one_witness(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap().unwrap();
        let v = w.to_json();
        assert_eq!(v["case"], "ELeqA_EPerpB");
        assert_eq!(v["vector_re"], serde_json::json!([1.0, 0.0]));
        assert_eq!(v["vector_im"], serde_json::json!([0.0, 0.0]));
    }

    #[test]
    fn phase_normalization_makes_pivot_real() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::from_vec(vec![Complex64::new(0.0, s), Complex64::new(0.0, -s * 0.5)]);
        let n = v.norm();
        v /= Complex64::new(n, 0.0);
        normalize_phase(&mut v);
        assert!(v[0].im == 0.0 && v[0].re > 0.0);
    }
}
