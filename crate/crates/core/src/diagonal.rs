//! Exact diagonal operators on ℓ₂.
//!
//! An operator is a finite rational prefix (indices `1..=N`) followed by one of
//! three closed-form tails:
//!
//! | tail          | entry at index `n > N` | compact |
//! |---------------|------------------------|---------|
//! | `Zero`        | `0`                    | yes     |
//! | `Harmonic(c)` | `c / (2n)`             | yes     |
//! | `MIncreasing` | `(n − 1) / n`          | no      |
//!
//! Every tail entry has the form `α + β/n`, which is monotone in `n`. Suprema over
//! a tail are therefore `max(|g(N+1)|, |α|)`, where only the first of the two is
//! attained. All arithmetic is over `BigRational`; nothing here has a tolerance.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sphere::DoubleSphereVerdict;

/// Closed-form tail of a diagonal operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    Zero,
    Harmonic(BigRational),
    MIncreasing,
}

impl Tail {
    /// `(α, β)` with tail entry `α + β/n`.
    fn affine(&self) -> (BigRational, BigRational) {
        match self {
            Tail::Zero => (BigRational::zero(), BigRational::zero()),
            Tail::Harmonic(c) => (BigRational::zero(), c / BigRational::from_integer(2.into())),
            Tail::MIncreasing => (BigRational::one(), -BigRational::one()),
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Tail::MIncreasing)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Tail::Zero => "zero",
            Tail::Harmonic(_) => "harmonic",
            Tail::MIncreasing => "m_increasing",
        }
    }
}

/// A supremum together with whether some index attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupValue {
    pub value: BigRational,
    pub attained: bool,
}

impl SupValue {
    fn attained(value: BigRational) -> Self {
        Self { value, attained: true }
    }

    fn merge(self, other: Self) -> Self {
        match self.value.cmp(&other.value) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => Self {
                value: self.value,
                attained: self.attained || other.attained,
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn to_json(&self) -> Value {
        json!({ "value": rational_string(&self.value), "attained": self.attained })
    }
}

/// A diagonal operator `Σ entry(n) pₙ` with entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalOperator {
    prefix: Vec<BigRational>,
    tail: Tail,
}

impl DiagonalOperator {
    pub fn new(prefix: Vec<BigRational>, tail: Tail) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        for (i, x) in prefix.iter().enumerate() {
            if *x < zero || *x > one {
                return Err(Error::InvalidDiagonal(format!(
                    "entry {} = {} lies outside [0, 1]",
                    i + 1,
                    rational_string(x)
                )));
            }
        }
        if let Tail::Harmonic(c) = &tail {
            if !c.is_positive() {
                return Err(Error::InvalidDiagonal("harmonic coefficient must be positive".into()));
            }
            let first = c / BigRational::from_integer(BigInt::from(2 * (prefix.len() + 1)));
            if first > one {
                return Err(Error::InvalidDiagonal(format!(
                    "harmonic tail starts at {} > 1",
                    rational_string(&first)
                )));
            }
        }
        Ok(Self { prefix, tail })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(prefix: &[(i64, i64)], tail: Tail) -> Result<Self> {
        let prefix = prefix
            .iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(Error::InvalidDiagonal("zero denominator".into()))
                } else {
                    Ok(BigRational::new(p.into(), q.into()))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(prefix, tail)
    }

    pub fn prefix(&self) -> &[BigRational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_compact(&self) -> bool {
        self.tail.is_compact()
    }

    /// Entry at the 1-based index `n`.
    pub fn entry(&self, n: usize) -> BigRational {
        assert!(n >= 1, "indices are 1-based");
        if n <= self.prefix.len() {
            return self.prefix[n - 1].clone();
        }
        let (alpha, beta) = self.tail.affine();
        alpha + beta / BigRational::from_integer(BigInt::from(n))
    }

    /// The first `m` entries.
    pub fn truncate(&self, m: usize) -> Vec<BigRational> {
        (1..=m).map(|n| self.entry(n)).collect()
    }

    /// Indices `n > N` (in the tail) where the entry equals `value`.
    fn tail_level_set(&self, value: &BigRational) -> LevelSet {
        let (alpha, beta) = self.tail.affine();
        let n0 = self.prefix.len();
        if beta.is_zero() {
            return if &alpha == value { LevelSet::AllTail } else { LevelSet::None };
        }
        // α + β/n = v  ⟺  n = β / (v − α)
        let gap = value - &alpha;
        if gap.is_zero() {
            return LevelSet::None;
        }
        let n = &beta / gap;
        if n.is_integer() && n.is_positive() {
            match n.to_integer().to_usize() {
                Some(n) if n > n0 => LevelSet::Single(n),
                _ => LevelSet::None,
            }
        } else {
            LevelSet::None
        }
    }

    pub fn to_json(&self) -> Value {
        let prefix: Vec<Value> = self.prefix.iter().map(|x| Value::String(rational_string(x))).collect();
        let tail = match &self.tail {
            Tail::Harmonic(c) => json!({ "kind": "harmonic", "c": rational_string(c) }),
            t => json!({ "kind": t.name() }),
        };
        json!({ "prefix": prefix, "tail": tail })
    }

    /// Parses `{"prefix": ["1", "1/2"], "tail": {"kind": "harmonic", "c": "1"}}`.
    ///
    /// A missing tail means `zero`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let prefix = match v.get("prefix") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(xs)) => xs.iter().map(parse_rational_value).collect::<Result<_>>()?,
            Some(other) => return Err(Error::Parse(format!("\"prefix\" must be an array, got {other}"))),
        };
        let tail = match v.get("tail") {
            None | Some(Value::Null) => Tail::Zero,
            Some(t) => {
                let kind = t
                    .get("kind")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("tail needs a string \"kind\"".into()))?;
                match kind {
                    "zero" => Tail::Zero,
                    "harmonic" => Tail::Harmonic(parse_rational_value(
                        t.get("c").ok_or_else(|| Error::Parse("harmonic tail needs \"c\"".into()))?,
                    )?),
                    "m_increasing" | "mincreasing" => Tail::MIncreasing,
                    other => return Err(Error::Parse(format!("unknown tail kind {other:?}"))),
                }
            }
        };
        Self::new(prefix, tail)
    }
}

impl fmt::Display for DiagonalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.prefix.iter().map(rational_string).collect();
        write!(f, "[{}] + ", entries.join(", "))?;
        match &self.tail {
            Tail::Zero => write!(f, "zero tail"),
            Tail::Harmonic(c) => write!(f, "{}/(2n) tail", rational_string(c)),
            Tail::MIncreasing => write!(f, "(n-1)/n tail"),
        }
    }
}

enum LevelSet {
    None,
    Single(usize),
    AllTail,
}

/// A diagonal projection, described by the index set it projects onto.
///
/// Constructors normalize: an empty finite set is `Empty`, a cofinite set with no
/// exclusions is `All`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexProjection {
    Empty,
    All,
    FiniteSet(BTreeSet<usize>),
    CofiniteSet(BTreeSet<usize>),
}

impl IndexProjection {
    pub fn finite(indices: impl IntoIterator<Item = usize>) -> Self {
        let s: BTreeSet<usize> = indices.into_iter().collect();
        if s.is_empty() {
            Self::Empty
        } else {
            Self::FiniteSet(s)
        }
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = usize>) -> Self {
        let s: BTreeSet<usize> = excluded.into_iter().collect();
        if s.is_empty() {
            Self::All
        } else {
            Self::CofiniteSet(s)
        }
    }

    /// `(is_finite, set)`: the set itself when finite, its exclusions when cofinite.
    fn canonical(&self) -> (bool, BTreeSet<usize>) {
        match self {
            Self::Empty => (true, BTreeSet::new()),
            Self::All => (false, BTreeSet::new()),
            Self::FiniteSet(s) => (true, s.clone()),
            Self::CofiniteSet(s) => (false, s.clone()),
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        let (finite, s) = self.canonical();
        s.contains(&n) == finite
    }

    /// `1 − p`.
    pub fn complement(&self) -> Self {
        match self.canonical() {
            (true, s) => Self::cofinite(s),
            (false, s) => Self::finite(s),
        }
    }

    /// `self ≤ other` as projections, i.e. set inclusion.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        match (self.canonical(), other.canonical()) {
            ((true, a), (true, b)) => a.is_subset(&b),
            ((true, a), (false, ex)) => a.is_disjoint(&ex),
            ((false, _), (true, _)) => false,
            ((false, ex_a), (false, ex_b)) => ex_b.is_subset(&ex_a),
        }
    }

    pub fn to_json(&self) -> Value {
        let list = |s: &BTreeSet<usize>| Value::Array(s.iter().map(|&i| json!(i)).collect());
        match self {
            Self::Empty => json!({ "kind": "empty" }),
            Self::All => json!({ "kind": "all" }),
            Self::FiniteSet(s) => json!({ "kind": "finite", "indices": list(s) }),
            Self::CofiniteSet(s) => json!({ "kind": "cofinite", "excluded": list(s) }),
        }
    }
}

/// `sup |a(n) − b(n)|` over `n ≥ start`.
fn sup_abs_diff_from(a: &DiagonalOperator, b: &DiagonalOperator, start: usize) -> SupValue {
    let m = a.prefix.len().max(b.prefix.len());
    let mut best = SupValue::attained(BigRational::zero());
    for n in start..=m {
        best = best.merge(SupValue::attained((a.entry(n) - b.entry(n)).abs()));
    }
    let (alpha_a, beta_a) = a.tail.affine();
    let (alpha_b, beta_b) = b.tail.affine();
    best.merge(affine_tail_sup(alpha_a - alpha_b, beta_a - beta_b, start.max(m + 1)))
}

/// `sup_{n ≥ start} |α + β/n|`.
fn affine_tail_sup(alpha: BigRational, beta: BigRational, start: usize) -> SupValue {
    let limit = alpha.abs();
    if beta.is_zero() {
        return SupValue::attained(limit);
    }
    let first = (&alpha + beta / BigRational::from_integer(BigInt::from(start))).abs();
    if first >= limit {
        SupValue::attained(first)
    } else {
        SupValue {
            value: limit,
            attained: false,
        }
    }
}

/// `‖a‖ = sup entry(n)`, flagged when only approached in the limit.
pub fn diag_norm(a: &DiagonalOperator) -> SupValue {
    let zero = DiagonalOperator {
        prefix: Vec::new(),
        tail: Tail::Zero,
    };
    sup_abs_diff_from(a, &zero, 1)
}

/// `‖a − b‖ = sup |a(n) − b(n)|`.
pub fn diag_distance(a: &DiagonalOperator, b: &DiagonalOperator) -> SupValue {
    sup_abs_diff_from(a, b, 1)
}

/// `sup_{n > m} |a(n) − b(n)|`: the error committed by truncating both operators
/// to their first `m` entries.
pub fn tail_bound(a: &DiagonalOperator, b: &DiagonalOperator, m: usize) -> BigRational {
    sup_abs_diff_from(a, b, m + 1).value
}

/// Support projection: the indices with entry exactly 1.
pub fn diag_support(a: &DiagonalOperator) -> IndexProjection {
    let one = BigRational::one();
    let mut idx: Vec<usize> = (1..=a.prefix.len()).filter(|&n| a.prefix[n - 1] == one).collect();
    match a.tail_level_set(&one) {
        LevelSet::None => {}
        LevelSet::Single(n) => idx.push(n),
        LevelSet::AllTail => unreachable!("no supported tail is constantly one"),
    }
    IndexProjection::finite(idx)
}

/// Range projection: the indices with nonzero entry.
pub fn diag_range(a: &DiagonalOperator) -> IndexProjection {
    let zero = BigRational::zero();
    let nonzero = (1..=a.prefix.len()).filter(|&n| a.prefix[n - 1] != zero);
    let zeros = (1..=a.prefix.len()).filter(|&n| a.prefix[n - 1] == zero);
    match a.tail_level_set(&zero) {
        LevelSet::AllTail => IndexProjection::finite(nonzero),
        LevelSet::None => IndexProjection::cofinite(zeros),
        LevelSet::Single(n) => IndexProjection::cofinite(zeros.chain(std::iter::once(n))),
    }
}

fn require_compact_norm_one(x: &DiagonalOperator) -> Result<()> {
    if !x.is_compact() {
        return Err(Error::NonCompact(x.tail.name()));
    }
    let norm = diag_norm(x);
    if !(norm.is_one() && norm.attained) {
        return Err(Error::NotNormOne {
            norm: norm.value.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Is `b` in the double sphere of `a` (both compact, norm one)?
///
/// `support_ok`: `s(a) ⊆ s(b)`; `cosupport_ok`: `1 − r(a) ⊆ 1 − r(b)`.
pub fn diag_double_sphere_membership(b: &DiagonalOperator, a: &DiagonalOperator) -> Result<DoubleSphereVerdict> {
    require_compact_norm_one(a)?;
    require_compact_norm_one(b)?;
    let support_ok = diag_support(a).is_subset_of(&diag_support(b));
    let cosupport_ok = diag_range(a).complement().is_subset_of(&diag_range(b).complement());
    Ok(DoubleSphereVerdict::new(support_ok, cosupport_ok))
}

/// `e + Σ pₙ/(2n)` with `e` the coordinate projection at `support_index`: entry 1
/// at `support_index` and `1/(2n)` at every other index `n`.
pub fn diag_compact_probe(support_index: usize) -> Result<DiagonalOperator> {
    if support_index == 0 {
        return Err(Error::InvalidDiagonal("indices are 1-based".into()));
    }
    let prefix = (1..=support_index)
        .map(|n| {
            if n == support_index {
                BigRational::one()
            } else {
                BigRational::new(1.into(), BigInt::from(2 * n))
            }
        })
        .collect();
    DiagonalOperator::new(prefix, Tail::Harmonic(BigRational::one()))
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn parse_rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        other => Err(Error::Parse(format!("expected a rational string, got {other}"))),
    }
}
