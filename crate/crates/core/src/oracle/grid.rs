//! Exhaustive sphere sets over grids of diagonal norm-one positive matrices.
//!
//! The grid with dimension `d` and denominator `k` is
//! `G = {diag(j₁/k, …, j_d/k) : 0 ≤ jᵢ ≤ k, max jᵢ = k}`, a finite stand-in for the
//! positive unit sphere. Points are stored as integer numerators over the common
//! denominator `k`, so `‖x − y‖ = 1` is the exact test `max |xᵢ − yᵢ| = k`.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{is_projection, PositiveContraction};
use crate::sphere::LatticeData;

pub const MAX_DIM: usize = 4;
pub const MAX_DENOM: u32 = 6;
/// Refuse to enumerate more points than this.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    denom: u32,
}

impl GridSpec {
    /// Zero sizes are invalid input; sizes above `MAX_DIM`/`MAX_DENOM` are refused.
    pub fn new(dim: usize, denom: u32) -> Result<Self> {
        if dim == 0 || denom == 0 {
            return Err(Error::Precondition(format!(
                "grid needs dim >= 1 and k >= 1 (got dim {dim}, k {denom})"
            )));
        }
        if dim > MAX_DIM || denom > MAX_DENOM {
            return Err(Error::SizeRefused(format!(
                "grid (dim {dim}, k {denom}) exceeds dim <= {MAX_DIM}, k <= {MAX_DENOM}"
            )));
        }
        Ok(Self { dim, denom })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Only diagonal grids exist.
    pub fn diagonal_only(&self) -> bool {
        true
    }

    /// `(k + 1)^d − k^d`.
    pub fn size(&self) -> u64 {
        let k = self.denom as u64;
        (k + 1).pow(self.dim as u32) - k.pow(self.dim as u32)
    }

    /// Finds the grid point equal to a diagonal matrix, to within `1e-12` per entry.
    pub fn locate(&self, a: &PositiveContraction) -> Result<GridPoint> {
        if a.dim() != self.dim {
            return Err(Error::NotOnGrid(format!("dimension {} vs grid dimension {}", a.dim(), self.dim)));
        }
        if !a.as_hermitian().is_diagonal() {
            return Err(Error::NotOnGrid("matrix is not diagonal".into()));
        }
        let k = self.denom as f64;
        let numerators = a
            .as_hermitian()
            .diagonal_real()
            .iter()
            .map(|&x| {
                let j = (x * k).round();
                if (x * k - j).abs() > 1e-12 * k || j < 0.0 || j > k {
                    Err(Error::NotOnGrid(format!("entry {x} is not a multiple of 1/{}", self.denom)))
                } else {
                    Ok(j as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.point(numerators)
    }

    /// Validates numerators as a point of this grid.
    pub fn point(&self, numerators: Vec<u32>) -> Result<GridPoint> {
        if numerators.len() != self.dim {
            return Err(Error::NotOnGrid(format!("{} entries for a grid of dimension {}", numerators.len(), self.dim)));
        }
        if numerators.iter().any(|&j| j > self.denom) {
            return Err(Error::NotOnGrid("entry above 1".into()));
        }
        if numerators.iter().max() != Some(&self.denom) {
            return Err(Error::NotOnGrid("no entry equals 1 (not norm one)".into()));
        }
        Ok(GridPoint {
            numerators,
            denom: self.denom,
        })
    }

    fn contains(&self, p: &GridPoint) -> bool {
        p.denom == self.denom && p.numerators.len() == self.dim && p.numerators.iter().max() == Some(&self.denom)
    }

    pub fn to_json(&self) -> Value {
        json!({ "dim": self.dim, "k": self.denom, "diagonal_only": true, "points": self.size() })
    }
}

/// `diag(j₁/k, …, j_d/k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    numerators: Vec<u32>,
    denom: u32,
}

impl GridPoint {
    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Exact `‖self − other‖ = 1`.
    pub fn at_distance_one(&self, other: &Self) -> bool {
        self.numerators
            .iter()
            .zip(&other.numerators)
            .any(|(&x, &y)| x.abs_diff(y) == self.denom)
    }

    /// Every entry is 0 or 1.
    pub fn is_projection(&self) -> bool {
        self.numerators.iter().all(|&j| j == 0 || j == self.denom)
    }

    pub fn to_contraction(&self) -> PositiveContraction {
        let k = self.denom as f64;
        let d: Vec<f64> = self.numerators.iter().map(|&j| j as f64 / k).collect();
        PositiveContraction::diag(&d).expect("grid points are positive contractions")
    }

    fn entry_string(&self, j: u32) -> String {
        let g = gcd(j, self.denom);
        let (p, q) = (j / g, self.denom / g);
        if q == 1 {
            p.to_string()
        } else {
            format!("{p}/{q}")
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.numerators.iter().map(|&j| Value::String(self.entry_string(j))).collect())
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.numerators.iter().map(|&j| self.entry_string(j)).collect();
        write!(f, "diag({})", parts.join(", "))
    }
}

/// All grid points in lexicographic order of their numerators.
pub fn enumerate_grid(g: &GridSpec) -> Result<Vec<GridPoint>> {
    if g.size() > MAX_POINTS {
        return Err(Error::SizeRefused(format!("grid has {} points", g.size())));
    }
    let k = g.denom;
    let mut out = Vec::with_capacity(g.size() as usize);
    let mut cur = vec![0u32; g.dim];
    loop {
        if cur.iter().max() == Some(&k) {
            out.push(GridPoint {
                numerators: cur.clone(),
                denom: k,
            });
        }
        // odometer increment, last coordinate fastest
        let mut i = g.dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

fn check_on_grid(a: &GridPoint, g: &GridSpec) -> Result<()> {
    if g.contains(a) {
        Ok(())
    } else {
        Err(Error::NotOnGrid(format!("{a} is not a point of the (dim {}, k {}) grid", g.dim, g.denom)))
    }
}

fn sphere_within(a: &GridPoint, points: &[GridPoint]) -> Vec<GridPoint> {
    points.iter().filter(|x| x.at_distance_one(a)).cloned().collect()
}

fn double_sphere_within(a: &GridPoint, points: &[GridPoint]) -> Vec<GridPoint> {
    let sphere = sphere_within(a, points);
    points
        .iter()
        .filter(|b| sphere.iter().all(|x| x.at_distance_one(b)))
        .cloned()
        .collect()
}

/// `{x ∈ G : ‖x − a‖ = 1}`.
pub fn sphere_set_bruteforce(a: &GridPoint, g: &GridSpec) -> Result<Vec<GridPoint>> {
    check_on_grid(a, g)?;
    Ok(sphere_within(a, &enumerate_grid(g)?))
}

/// `{b ∈ G : ‖b − x‖ = 1 for every x in the sphere set of a}`.
pub fn double_sphere_bruteforce(a: &GridPoint, g: &GridSpec) -> Result<Vec<GridPoint>> {
    check_on_grid(a, g)?;
    Ok(double_sphere_within(a, &enumerate_grid(g)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MismatchKind {
    /// Brute-force double sphere differs from the closed-form predicate set.
    Bispherical,
    /// The double sphere is a singleton but the point is not a projection, or
    /// vice versa.
    Singleton,
}

impl MismatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MismatchKind::Bispherical => "bispherical",
            MismatchKind::Singleton => "singleton",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridMismatch {
    pub kind: MismatchKind,
    pub point: GridPoint,
    /// Brute-force double sphere.
    pub oracle: Vec<GridPoint>,
    /// Closed-form predicate set restricted to the grid.
    pub predicate: Vec<GridPoint>,
    pub is_projection: bool,
}

impl GridMismatch {
    pub fn to_json(&self) -> Value {
        let list = |v: &[GridPoint]| Value::Array(v.iter().map(GridPoint::to_json).collect());
        json!({
            "kind": self.kind.as_str(),
            "point": self.point.to_json(),
            "oracle": list(&self.oracle),
            "predicate": list(&self.predicate),
            "is_projection": self.is_projection,
        })
    }
}

#[derive(Clone, Debug)]
pub struct GridReport {
    pub grid: GridSpec,
    pub checked: usize,
    pub mismatches: Vec<GridMismatch>,
    /// Number of points whose brute-force double sphere is a singleton.
    pub singletons: usize,
    pub elapsed_ms: u64,
}

impl GridReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// `elapsed_ms` is emitted only when `timing` is set; otherwise it is `null`
    /// so that repeated runs are byte-identical.
    pub fn to_json(&self, timing: bool) -> Value {
        json!({
            "grid": self.grid.to_json(),
            "checked": self.checked,
            "singletons": self.singletons,
            "mismatches": Value::Array(self.mismatches.iter().map(GridMismatch::to_json).collect()),
            "seed": Value::Null,
            "elapsed_ms": if timing { json!(self.elapsed_ms) } else { Value::Null },
        })
    }
}

/// For every grid point `a`, compares the brute-force double sphere with
/// `{b ∈ G : b passes the closed-form double-sphere test against a}`, and checks
/// that the double sphere is `{a}` exactly when `a` is a projection.
///
/// Runs in parallel over grid points; the report is sorted, so it does not depend
/// on scheduling.
pub fn verify_bispherical_identity(g: &GridSpec) -> Result<GridReport> {
    let start = Instant::now();
    let points = enumerate_grid(g)?;
    let lattice: Vec<LatticeData> = points
        .par_iter()
        .map(|p| LatticeData::of(&p.to_contraction()))
        .collect();

    let per_point: Vec<(bool, Vec<GridMismatch>)> = (0..points.len())
        .into_par_iter()
        .map(|i| -> Result<(bool, Vec<GridMismatch>)> {
            let a = &points[i];
            let oracle = double_sphere_within(a, &points);
            let mut predicate = Vec::new();
            for (j, b) in points.iter().enumerate() {
                if lattice[j].member_of_double_sphere_of(&lattice[i])?.member {
                    predicate.push(b.clone());
                }
            }
            let projection = is_projection(a.to_contraction().as_hermitian());
            let singleton = oracle.len() == 1 && &oracle[0] == a;
            let mut found = Vec::new();
            if oracle != predicate {
                found.push(GridMismatch {
                    kind: MismatchKind::Bispherical,
                    point: a.clone(),
                    oracle: oracle.clone(),
                    predicate: predicate.clone(),
                    is_projection: projection,
                });
            }
            if singleton != projection {
                found.push(GridMismatch {
                    kind: MismatchKind::Singleton,
                    point: a.clone(),
                    oracle,
                    predicate,
                    is_projection: projection,
                });
            }
            Ok((singleton, found))
        })
        .collect::<Result<_>>()?;

    let singletons = per_point.iter().filter(|(s, _)| *s).count();
    let mut mismatches: Vec<GridMismatch> = per_point.into_iter().flat_map(|(_, m)| m).collect();
    mismatches.sort();
    Ok(GridReport {
        grid: *g,
        checked: points.len(),
        mismatches,
        singletons,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
