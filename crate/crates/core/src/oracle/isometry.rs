//! Unitary conjugations, optionally followed by the transpose, as isometries of
//! the positive unit sphere; and the check that they preserve projections and
//! distances on a sample set.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::Projection;
use crate::linalg::{is_projection, spectral_norm, CMatrix, PositiveContraction};
use crate::oracle::random::{random_positive_contraction_with, random_projection, random_unitary, rng_stream};
use crate::tol;

/// `a ↦ u a u*`, then `ᵀ` when `transpose_twist` is set.
#[derive(Clone, Debug)]
pub struct IsometryModel {
    u: CMatrix,
    transpose_twist: bool,
}

impl IsometryModel {
    /// Requires `‖u u* − 1‖ ≤ dim · PROJ`.
    pub fn new(u: CMatrix, transpose_twist: bool) -> Result<Self> {
        let (rows, cols) = u.shape();
        if rows != cols || rows == 0 {
            return Err(Error::Shape { rows, cols });
        }
        let defect = spectral_norm(&(&u * u.adjoint() - CMatrix::identity(rows, rows)));
        if defect > tol::proj_scaled(rows) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { u, transpose_twist })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            u: CMatrix::identity(dim, dim),
            transpose_twist: false,
        }
    }

    /// Haar-random `u` from `seed`, drawn from the last stream of the seed so it is
    /// independent of [`sample_set`] with the same seed.
    pub fn random(dim: usize, transpose_twist: bool, seed: u64) -> Self {
        Self {
            u: random_unitary(dim, &mut rng_stream(seed, u64::MAX)),
            transpose_twist,
        }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    pub fn transpose_twist(&self) -> bool {
        self.transpose_twist
    }

    pub fn apply(&self, a: &PositiveContraction) -> Result<PositiveContraction> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        let mut h = a.as_hermitian().conjugate_by(&self.u);
        if self.transpose_twist {
            h = h.transpose();
        }
        PositiveContraction::new(h)
    }

    pub fn apply_projection(&self, p: &Projection) -> Result<Projection> {
        Projection::new(self.apply(&p.to_contraction())?.as_hermitian().clone())
    }
}

/// A mixed sample set in dimension `dim`: alternately a random projection of
/// nonzero rank and a random norm-one positive contraction. Item `i` is drawn
/// from its own stream of `seed`.
pub fn sample_set(dim: usize, count: usize, seed: u64) -> Vec<PositiveContraction> {
    (0..count)
        .map(|i| {
            let mut r = rng_stream(seed, i as u64);
            if i % 2 == 0 {
                let rank = r.random_range(1..=dim);
                random_projection(dim, rank, &mut r).to_contraction()
            } else {
                random_positive_contraction_with(dim, true, &mut r)
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IsometryMismatchKind {
    /// `a` is a projection and its image is not, or the other way round.
    Projection,
    /// The image left the positive unit sphere.
    Sphere,
    /// `|‖Δa − Δb‖ − ‖a − b‖| > DIST`.
    Distance,
}

impl IsometryMismatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IsometryMismatchKind::Projection => "projection",
            IsometryMismatchKind::Sphere => "sphere",
            IsometryMismatchKind::Distance => "distance",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryMismatch {
    pub kind: IsometryMismatchKind,
    /// Sample indices involved (one for projection/sphere, two for distance).
    pub indices: Vec<usize>,
    pub before: f64,
    pub after: f64,
}

impl IsometryMismatch {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "indices": self.indices,
            "before": json::number(self.before),
            "after": json::number(self.after),
        })
    }
}

#[derive(Clone, Debug)]
pub struct IsometryReport {
    pub dim: usize,
    pub transpose_twist: bool,
    pub samples: usize,
    pub projections: usize,
    pub pairs: usize,
    pub max_distance_error: f64,
    pub mismatches: Vec<IsometryMismatch>,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl IsometryReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self, timing: bool) -> Value {
        json!({
            "model": { "dim": self.dim, "transpose_twist": self.transpose_twist },
            "checked": { "samples": self.samples, "projections": self.projections, "pairs": self.pairs },
            "max_distance_error": json::number(self.max_distance_error),
            "mismatches": Value::Array(self.mismatches.iter().map(IsometryMismatch::to_json).collect()),
            "seed": self.seed,
            "elapsed_ms": if timing { json!(self.elapsed_ms) } else { Value::Null },
        })
    }
}

/// Applies `m` to every sample and checks that projections and only projections
/// map to projections, that images stay norm-one, and that all pairwise distances
/// are preserved to [`tol::DIST`].
pub fn verify_projection_preservation(m: &IsometryModel, samples: &[PositiveContraction]) -> Result<IsometryReport> {
    let start = std::time::Instant::now();
    let images = samples.iter().map(|a| m.apply(a)).collect::<Result<Vec<_>>>()?;
    let mut mismatches = Vec::new();
    let mut projections = 0;
    for (i, (a, b)) in samples.iter().zip(&images).enumerate() {
        let (pa, pb) = (is_projection(a.as_hermitian()), is_projection(b.as_hermitian()));
        projections += pa as usize;
        if pa != pb {
            mismatches.push(IsometryMismatch {
                kind: IsometryMismatchKind::Projection,
                indices: vec![i],
                before: pa as u8 as f64,
                after: pb as u8 as f64,
            });
        }
        if a.is_norm_one() != b.is_norm_one() {
            mismatches.push(IsometryMismatch {
                kind: IsometryMismatchKind::Sphere,
                indices: vec![i],
                before: a.norm(),
                after: b.norm(),
            });
        }
    }
    let mut max_err: f64 = 0.0;
    let mut pairs = 0;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let before = samples[i].distance(&samples[j])?;
            let after = images[i].distance(&images[j])?;
            let err = (before - after).abs();
            max_err = max_err.max(err);
            pairs += 1;
            if err > tol::DIST {
                mismatches.push(IsometryMismatch {
                    kind: IsometryMismatchKind::Distance,
                    indices: vec![i, j],
                    before,
                    after,
                });
            }
        }
    }
    Ok(IsometryReport {
        dim: m.dim(),
        transpose_twist: m.transpose_twist,
        samples: samples.len(),
        projections,
        pairs,
        max_distance_error: max_err,
        mismatches,
        seed: None,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
