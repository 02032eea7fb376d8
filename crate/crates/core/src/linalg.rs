//! Dense Hermitian matrices, spectral decomposition and functional calculus.
//!
//! Everything here is double precision. The eigensolver is nalgebra's Hermitian
//! solver; the wrappers below add the validation and the tolerance-aware
//! clustering the rest of the crate relies on.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest singular value of an arbitrary complex matrix.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    left_singular(m).0[0]
}

/// Singular values of `m` (descending) and the matching left singular vectors as
/// columns, computed from the Hermitian eigenproblem of `m m*`.
///
/// nalgebra's complex SVD can return a wrong factorization for some small inputs
/// (a 2×2 with reconstruction error ~1e-1 was observed), so every singular-value
/// computation in the crate goes through the Hermitian solver instead.
pub(crate) fn left_singular(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let g = m * m.adjoint();
    let eig = HermitianMatrix::symmetrized(g).m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
    (values, eig.eigenvectors.select_columns(order.iter()))
}

/// A square complex matrix equal to its own adjoint.
///
/// Construction checks Hermiticity to [`tol::HERM`] and then stores the exactly
/// symmetrized matrix `(m + m*) / 2`, so downstream code never sees drift.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols || rows == 0 {
            return Err(Error::Shape { rows, cols });
        }
        let mut deviation = 0.0f64;
        for i in 0..rows {
            for j in 0..=i {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if !deviation.is_finite() || deviation > tol::HERM {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Self {
            m: (m + adj) * Complex64::new(0.5, 0.0),
        }
    }

    /// Builds from real rows; the imaginary part is zero.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in re.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape { rows: n, cols: row.len() });
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)].re = x;
            }
        }
        if let Some(im) = im {
            if im.len() != n {
                return Err(Error::Shape { rows: im.len(), cols: n });
            }
            for (i, row) in im.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Shape { rows: n, cols: row.len() });
                }
                for (j, &x) in row.iter().enumerate() {
                    m[(i, j)].im = x;
                }
            }
        }
        Self::new(m)
    }

    /// Real diagonal matrix. Panics on an empty slice.
    pub fn diag(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "diagonal matrix needs at least one entry");
        let v = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)));
        Self {
            m: CMatrix::from_diagonal(&v),
        }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0);
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    /// `Σ wᵢ vᵢvᵢ*` over the columns `vᵢ` of `vectors`.
    pub(crate) fn from_spectral(vectors: &CMatrix, weights: &[f64]) -> Self {
        let n = vectors.nrows();
        let mut m = CMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let col = vectors.column(k);
            m += (&col * col.adjoint()) * Complex64::new(w, 0.0);
        }
        Self::symmetrized(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: &self.m * Complex64::new(s, 0.0),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(self - other)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(self + other)
    }

    /// `u · self · u*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u * &self.m * u.adjoint())
    }

    /// Entrywise transpose (equivalently, complex conjugate for Hermitian input).
    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True when every off-diagonal entry vanishes within [`tol::HERM`].
    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)].norm() <= tol::HERM))
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let re: Vec<Vec<Value>> = (0..n)
            .map(|i| (0..n).map(|j| json::number(self.m[(i, j)].re)).collect())
            .collect();
        let im: Vec<Vec<Value>> = (0..n)
            .map(|i| (0..n).map(|j| json::number(self.m[(i, j)].im)).collect())
            .collect();
        json!({ "dim": n, "re": re, "im": im })
    }

    /// Parses `{"dim": n, "re": [[..]], "im": [[..]]}`; a missing `im` means zero.
    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("matrix needs an integer \"dim\"".into()))? as usize;
        let re = json::real_rows(v.get("re").ok_or_else(|| Error::Parse("matrix needs \"re\"".into()))?)?;
        let im = match v.get("im") {
            None | Some(Value::Null) => None,
            Some(x) => Some(json::real_rows(x)?),
        };
        if re.len() != dim || im.as_ref().is_some_and(|im| im.len() != dim) {
            return Err(Error::Parse(format!("\"dim\" is {dim} but rows disagree")));
        }
        Self::from_parts(&re, im.as_deref())
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    same_dim(left, right)
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

/// The product of two Hermitian matrices is generally not Hermitian.
impl Mul for &HermitianMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: Self) -> CMatrix {
        &self.m * &rhs.m
    }
}

/// Eigen-decomposition with eigenvalues sorted ascending and grouped into clusters.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    clusters: Vec<Vec<usize>>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    /// Index groups of eigenvalues that agree within [`tol::CLUSTER`].
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        HermitianMatrix::from_spectral(&self.eigenvectors, &self.eigenvalues)
    }

    /// `Σ f(λᵢ) ξᵢξᵢ*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        HermitianMatrix::from_spectral(&self.eigenvectors, &w)
    }

    /// Columns whose eigenvalue satisfies `keep`, as a `dim × k` matrix.
    pub(crate) fn select(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let idx: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&i| keep(self.eigenvalues[i]))
            .collect();
        self.eigenvectors.select_columns(idx.iter())
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Hermiticity is guaranteed by the type, so this never fails.
pub fn spectral_decompose(a: &HermitianMatrix) -> SpectralDecomposition {
    let n = a.dim();
    let eig = a.m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(order.iter());

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in eigenvalues.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if l - eigenvalues[*c.last().unwrap()] <= tol::CLUSTER => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        clusters,
    }
}

/// Spectral norm of a Hermitian matrix: `max |λᵢ|`.
pub fn operator_norm(a: &HermitianMatrix) -> f64 {
    let s = spectral_decompose(a);
    s.min().abs().max(s.max().abs())
}

/// True iff every eigenvalue lies within [`tol::PROJ`] of 0 or 1.
pub fn is_projection(a: &HermitianMatrix) -> bool {
    spectral_decompose(a)
        .eigenvalues()
        .iter()
        .all(|&l| l.abs() <= tol::PROJ || (l - 1.0).abs() <= tol::PROJ)
}

/// A positive Hermitian matrix with spectrum in `[0, 1]` (to [`tol::SPEC`]).
///
/// The spectral decomposition is computed once at construction and kept.
#[derive(Clone, Debug)]
pub struct PositiveContraction {
    base: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl PositiveContraction {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let spectrum = spectral_decompose(&base);
        for &l in spectrum.eigenvalues() {
            if !(-tol::SPEC..=1.0 + tol::SPEC).contains(&l) {
                return Err(Error::NotPositiveContraction { eigenvalue: l });
            }
        }
        Ok(Self { base, spectrum })
    }

    /// Like [`PositiveContraction::new`] but also requires operator norm 1.
    pub fn norm_one(base: HermitianMatrix) -> Result<Self> {
        let a = Self::new(base)?;
        a.require_norm_one()?;
        Ok(a)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diag(values))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn as_matrix(&self) -> &CMatrix {
        self.base.as_matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn norm(&self) -> f64 {
        self.spectrum.min().abs().max(self.spectrum.max().abs())
    }

    pub fn is_norm_one(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::SPEC
    }

    pub fn require_norm_one(&self) -> Result<()> {
        if self.is_norm_one() {
            Ok(())
        } else {
            Err(Error::NotNormOne { norm: self.norm() })
        }
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(operator_norm(&self.base.checked_sub(&other.base)?))
    }
}

impl PartialEq for PositiveContraction {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

/// Continuous piecewise-linear function on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearFn {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearFn {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(Error::InvalidFunction(
                "need at least two breakpoints and one value per breakpoint".into(),
            ));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidFunction("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("values must be finite".into()));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn identity() -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![0.0, 1.0],
        }
    }

    /// `t ↦ 1 − t`.
    pub fn one_minus() -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![1.0, 0.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluates at `t`, clamped into `[0, 1]` (eigenvalues may overshoot by rounding).
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = self.breakpoints.partition_point(|&b| b <= t);
        if k >= self.breakpoints.len() {
            return *self.values.last().unwrap();
        }
        let (x0, x1) = (self.breakpoints[k - 1], self.breakpoints[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    /// True when the function maps `[0, 1]` into `[0, 1]`.
    pub fn is_unit_interval_map(&self) -> bool {
        self.values.iter().all(|&v| (0.0..=1.0).contains(&v))
    }

    /// `self ∘ inner`, re-expressed with its own breakpoints.
    ///
    /// `inner` must map `[0, 1]` into `[0, 1]`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.is_unit_interval_map() {
            return Err(Error::InvalidFunction("inner function must map [0,1] into [0,1]".into()));
        }
        let mut xs: Vec<f64> = inner.breakpoints.clone();
        for w in 0..inner.breakpoints.len() - 1 {
            let (x0, x1) = (inner.breakpoints[w], inner.breakpoints[w + 1]);
            let (y0, y1) = (inner.values[w], inner.values[w + 1]);
            if y0 == y1 {
                continue;
            }
            let (lo, hi) = (y0.min(y1), y0.max(y1));
            for &b in &self.breakpoints {
                if b > lo && b < hi {
                    xs.push(x0 + (b - y0) / (y1 - y0) * (x1 - x0));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        // dedup may have nudged the endpoints
        xs[0] = 0.0;
        *xs.last_mut().unwrap() = 1.0;
        let values = xs.iter().map(|&x| self.eval(inner.eval(x))).collect();
        Self::new(xs, values)
    }
}

/// `f(a) = Σ f(λᵢ) ξᵢξᵢ*`.
pub fn functional_calculus(a: &PositiveContraction, f: &PiecewiseLinearFn) -> HermitianMatrix {
    a.spectrum().apply(|l| f.eval(l))
}
