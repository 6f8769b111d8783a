//! Self-contained dense linear algebra for small symmetric problems:
//! vectors, symmetric matrices, SPD matrices with certified extreme
//! eigenvalues, weighted inner products, rank-one updates, a Jacobi
//! eigensolver and a Cholesky solver.
//!
//! Everything here is immutable after construction and safe to share
//! across threads. Sizes are small (n up to a few hundred); all storage
//! is dense row-major `Vec<f64>`.

mod cholesky;
mod jacobi;

pub use cholesky::CholeskyFactor;
pub use jacobi::{symmetric_eigen, EigenDecomposition};

use crate::error::{Error, Result};

use rand::Rng;
use std::ops::Index;

/// Dense real coordinate vector with finite entries and a dimension
/// fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::param("coords", "vector dimension must be >= 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "vector entries",
            });
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coords: vec![0.0; n.max(1)],
        }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        assert!(i < n, "basis index out of range");
        let mut coords = vec![0.0; n];
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| s * c).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `self + a * y`.
    pub fn axpy(&self, a: f64, y: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), y.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(s, t)| s + a * t)
                .collect(),
        }
    }

    pub(crate) fn dot_unchecked(&self, other: &Vector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Standard Euclidean inner product.
pub fn inner(x: &Vector, y: &Vector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.dot_unchecked(y))
}

/// Weighted inner product `<x, A y>` for SPD `A`.
pub fn weighted_inner(x: &Vector, y: &Vector, a: &SpdMatrix) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let ay = a.matvec(y)?;
    Ok(x.dot_unchecked(&ay))
}

/// Dense symmetric matrix with exactly mirrored storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>, // row-major, data[i*n + j] == data[j*n + i] exactly
}

impl SymMatrix {
    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = s;
        }
        Self { n, data }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self { n, data }
    }

    /// Builds from full rows, rejecting non-square, non-finite, or not
    /// exactly symmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::param("rows", "matrix dimension must be >= 1"));
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let mut data = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        context: "matrix entries",
                    });
                }
                data[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        upper: data[i * n + j],
                        lower: data[j * n + i],
                    });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Fills the lower triangle from `f(i, j)` (`i >= j`) and mirrors it,
    /// so the result is symmetric by construction.
    pub fn from_fn_lower(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub(crate) fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.dim(),
            });
        }
        let xs = x.as_slice();
        let out = self
            .data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(xs).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Vector { coords: out })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `self + scale * r r^*`, where `(r r^*) x = r <r, x>`.
    pub fn rank_one_update(&self, r: &Vector, scale: f64) -> Result<SymMatrix> {
        if r.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: r.dim(),
            });
        }
        let rs = r.as_slice();
        Ok(SymMatrix::from_fn_lower(self.n, |i, j| {
            self.get(i, j) + scale * rs[i] * rs[j]
        }))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| s * v).collect(),
        }
    }
}

/// Free-function form of [`SymMatrix::rank_one_update`].
pub fn rank_one_update(base: &SymMatrix, r: &Vector, scale: f64) -> Result<SymMatrix> {
    base.rank_one_update(r, scale)
}

/// Symmetric positive definite matrix.
///
/// Positive definiteness is certified at construction by a successful
/// Cholesky factorization (kept for solves); the extreme eigenvalues are
/// computed by the Jacobi eigensolver and cached, so they are certified
/// numerically rather than trusted from the caller.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    sym: SymMatrix,
    chol: CholeskyFactor,
    lambda_min: f64,
    lambda_max: f64,
}

impl SpdMatrix {
    pub fn new(sym: SymMatrix) -> Result<Self> {
        let chol = CholeskyFactor::new(&sym)?;
        let eig = symmetric_eigen(&sym)?;
        let lambda_min = eig.eigenvalues()[0];
        let lambda_max = eig.eigenvalues()[sym.dim() - 1];
        if lambda_min <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                index: 0,
                pivot: lambda_min,
            });
        }
        Ok(Self {
            sym,
            chol,
            lambda_min,
            lambda_max,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(SymMatrix::identity(n)).expect("identity is SPD")
    }

    /// Diagonal SPD matrix; all entries must be positive.
    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(SymMatrix::diagonal(d))
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.sym
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sym.get(i, j)
    }

    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        self.sym.matvec(x)
    }

    /// Solves `A y = b` through the cached Cholesky factor.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        self.chol.solve(b)
    }

    /// Certified extreme eigenvalues `(lambda_min, lambda_max)`.
    pub fn spectrum(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn condition_number(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

/// Solves `A y = b` for SPD `A` (spec-level free function).
pub fn solve_spd(a: &SpdMatrix, b: &Vector) -> Result<Vector> {
    a.solve(b)
}

/// Random unit vector (Gaussian direction, normalized).
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vector {
    loop {
        let v = random_gaussian_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-8 {
            return v.scale(1.0 / norm);
        }
    }
}

/// Standard normal vector via Box-Muller.
pub fn random_gaussian_vector(n: usize, rng: &mut impl Rng) -> Vector {
    let mut coords = Vec::with_capacity(n);
    while coords.len() < n {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        coords.push(r * phi.cos());
        if coords.len() < n {
            coords.push(r * phi.sin());
        }
    }
    Vector { coords }
}

/// Random orthonormal basis (modified Gram-Schmidt on Gaussian columns,
/// with one re-orthogonalization pass).
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = random_gaussian_vector(n, rng);
        for _ in 0..2 {
            for q in &basis {
                let proj = v.dot_unchecked(q);
                v = v.axpy(-proj, q);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v.scale(1.0 / norm));
        }
    }
    basis
}

/// Random SPD matrix with spectrum inside `[lambda_min, lambda_max]`;
/// both endpoints are pinned, interior eigenvalues are uniform.
pub fn random_spd(
    n: usize,
    lambda_min: f64,
    lambda_max: f64,
    rng: &mut impl Rng,
) -> Result<SpdMatrix> {
    if !(lambda_min > 0.0 && lambda_min <= lambda_max) {
        return Err(Error::param(
            "lambda_min",
            format!("need 0 < lambda_min <= lambda_max, got [{lambda_min}, {lambda_max}]"),
        ));
    }
    if n == 0 {
        return Err(Error::param("n", "dimension must be >= 1"));
    }
    let mut eigs = vec![0.0; n];
    eigs[0] = lambda_min;
    if n > 1 {
        eigs[n - 1] = lambda_max;
        for e in eigs.iter_mut().take(n - 1).skip(1) {
            *e = rng.gen_range(lambda_min..=lambda_max);
        }
    }
    let basis = random_orthogonal(n, rng);
    let sym = SymMatrix::from_fn_lower(n, |i, j| {
        eigs.iter()
            .zip(&basis)
            .map(|(&lam, u)| lam * u[i] * u[j])
            .sum()
    });
    SpdMatrix::new(sym)
}
