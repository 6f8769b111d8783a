//! Constructive SPD metrics that map a descent direction onto the
//! gradient, plus a brute-force oracle for the minimal achievable
//! condition number.
//!
//! Two constructions are provided. The SR1 metric is a rank-one
//! modification of the identity sending a unit direction `u` to a unit
//! gradient `v` at angle `theta`, with extreme eigenvalues
//! `cos(theta)/(1 + sin(theta))` and `cos(theta)/(1 - sin(theta))` — the
//! smallest condition number any symmetric positive definite matrix with
//! `Bu = v` can achieve. The reflection metric covers the inexact-gradient
//! model: for `||d - g|| < ||g||` it maps `d` to `g` with eigenvalues
//! `(1 + rho)^{-1}` and `(1 - rho)^{-1}`, `rho = ||d - g|| / ||g||`.

use crate::error::{Error, Result};
use crate::linalg::{inner, SpdMatrix, SymMatrix, Vector};
use crate::seed::rng_for;
use crate::tol::Tolerance;

use rand::Rng;

/// Witnesses below this cosine are rejected: the condition number blows
/// up and certified step sizes vanish.
pub const MIN_COS_THETA: f64 = 1e-8;

/// A validated pair of unit vectors at a positive-cosine angle.
#[derive(Debug, Clone)]
pub struct AngleWitness {
    u: Vector,
    v: Vector,
    cos_theta: f64,
    sin_theta: f64,
    alpha: f64,
}

impl AngleWitness {
    /// Validates `||u|| = ||v|| = 1` (to 1e-12) and
    /// `cos(theta) = <u, v> >= MIN_COS_THETA`.
    pub fn new(u: Vector, v: Vector) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                got: v.dim(),
            });
        }
        let unit_tol = Tolerance::new(1e-12, 0.0);
        if !unit_tol.close(u.norm(), 1.0) {
            return Err(Error::param("u", format!("not a unit vector: ||u|| = {}", u.norm())));
        }
        if !unit_tol.close(v.norm(), 1.0) {
            return Err(Error::param("v", format!("not a unit vector: ||v|| = {}", v.norm())));
        }
        let cos_theta = inner(&u, &v)?.clamp(-1.0, 1.0);
        if cos_theta < MIN_COS_THETA {
            return Err(Error::param(
                "cos_theta",
                format!("need cos(theta) >= {MIN_COS_THETA:e}, got {cos_theta}"),
            ));
        }
        // residual norm of v against u: more accurate than
        // sqrt(1 - cos^2) when the angle is small
        let sin_theta = v.axpy(-cos_theta, &u).norm().min(1.0);
        let alpha = (1.0 - sin_theta) / cos_theta;
        Ok(Self {
            u,
            v,
            cos_theta,
            sin_theta,
            alpha,
        })
    }

    pub fn u(&self) -> &Vector {
        &self.u
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }

    /// `(1 - sin(theta)) / cos(theta)`, the SR1 scaling parameter.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// An SPD matrix constructed to map a direction onto a gradient, with
/// its analytic extreme eigenvalues.
#[derive(Debug, Clone)]
pub struct MetricResult {
    pub matrix: SpdMatrix,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub kappa: f64,
}

/// SR1 metric for a validated angle witness: symmetric `B` with `Bu = v`,
/// smallest eigenvalue `cos/(1+sin)` (simple, along `u - alpha v`) and
/// largest `cos/(1-sin)` (multiplicity n-1).
pub fn sr1_metric(w: &AngleWitness) -> Result<MetricResult> {
    let (c, s) = (w.cos_theta, w.sin_theta);
    if s <= 1e-12 {
        // 0/0 in the rank-one term; the limit is the identity
        if w.u.sub(&w.v).norm() > 1e-6 {
            return Err(Error::param(
                "witness",
                "angle is zero but the vectors differ",
            ));
        }
        return Ok(MetricResult {
            matrix: SpdMatrix::identity(w.u.dim()),
            lambda_min: 1.0,
            lambda_max: 1.0,
            kappa: 1.0,
        });
    }
    let alpha = w.alpha;
    let r = w.u.axpy(-alpha, &w.v);
    let ru = inner(&r, &w.u)?; // equals sin(theta) up to rounding
    let base = SymMatrix::scaled_identity(w.u.dim(), 1.0 / alpha);
    let b = base.rank_one_update(&r, -1.0 / (alpha * ru))?;
    let lambda_min = c / (1.0 + s);
    let lambda_max = c / (1.0 - s);
    Ok(MetricResult {
        matrix: SpdMatrix::new(b)?,
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
    })
}

/// Reflection metric for the inexact-gradient model: SPD `A` with
/// `A d = g` and eigenvalues `(1 + rho)^{-1}` (multiplicity n-1) and
/// `(1 - rho)^{-1}` (simple), where `rho = ||d - g|| / ||g||`.
///
/// Requires `g != 0` and `rho < 1`. For `rho <= 1e-14` the identity is
/// returned; `rho >= 1 - 1e-10` is rejected.
pub fn reflection_metric(d: &Vector, g: &Vector) -> Result<MetricResult> {
    if d.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: d.dim(),
        });
    }
    let gnorm = g.norm();
    if gnorm == 0.0 {
        return Err(Error::param("g", "gradient must be nonzero"));
    }
    let diff = d.sub(g);
    let rho = diff.norm() / gnorm;
    if rho <= 1e-14 {
        return Ok(MetricResult {
            matrix: SpdMatrix::identity(g.dim()),
            lambda_min: 1.0,
            lambda_max: 1.0,
            kappa: 1.0,
        });
    }
    if rho >= 1.0 - 1e-10 {
        return Err(Error::param(
            "d",
            format!("relative error {rho} too close to 1; need ||d - g|| < ||g||"),
        ));
    }
    let n = g.dim();
    if n == 1 {
        // one-dimensional case: A is the scalar g/d
        let scalar = g[0] / d[0];
        return Ok(MetricResult {
            matrix: SpdMatrix::diagonal(&[scalar])?,
            lambda_min: scalar,
            lambda_max: scalar,
            kappa: 1.0,
        });
    }
    let v_hat = g.scale(1.0 / gnorm);
    let e_hat = diff.scale(1.0 / diff.norm());
    let w = v_hat.sub(&e_hat);
    let w_hat = if w.norm() > 1e-8 {
        w.scale(1.0 / w.norm())
    } else {
        // d - g is (positively) parallel to g: any unit vector
        // orthogonal to g gives a reflection fixing g
        orthogonal_unit(&v_hat)
    };
    // A = inverse of I + rho * (I - 2 w w*) in closed form
    let lambda_min = 1.0 / (1.0 + rho);
    let lambda_max = 1.0 / (1.0 - rho);
    let base = SymMatrix::scaled_identity(n, lambda_min);
    let a = base.rank_one_update(&w_hat, 2.0 * rho / ((1.0 + rho) * (1.0 - rho)))?;
    Ok(MetricResult {
        matrix: SpdMatrix::new(a)?,
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
    })
}

/// Deterministic unit vector orthogonal to a unit `v` (n >= 2).
fn orthogonal_unit(v: &Vector) -> Vector {
    let n = v.dim();
    // start from the basis vector with the smallest |v_k|
    let k = (0..n)
        .min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap();
    let e = Vector::unit(n, k);
    let proj = inner(&e, v).expect("dimensions match");
    let w = e.axpy(-proj, v);
    w.scale(1.0 / w.norm())
}

/// Result of [`min_condition_oracle`]: the best condition number found
/// by scanning the one-parameter family of symmetric matrices with
/// `Bu = v`, against the analytic minimum `(1+sin)/(1-sin)`.
#[derive(Debug, Clone, Copy)]
pub struct MinConditionScan {
    pub best_kappa_found: f64,
    pub analytic_min: f64,
}

/// Brute-force search for the minimal condition number among 2x2 SPD
/// matrices mapping `u = (1, 0)` to `v = (cos, sin)`.
///
/// Every symmetric `B` with `Bu = v` has first column `v`, leaving a
/// single free diagonal entry `t`; positive definiteness confines it to
/// `t > sin^2/cos`. The scan covers that ray with a log-spaced grid plus
/// seeded random samples (`trials` points in total) and reports the
/// smallest condition number seen.
pub fn min_condition_oracle(cos_theta: f64, trials: usize, seed: u64) -> Result<MinConditionScan> {
    if !(cos_theta > 0.0 && cos_theta <= 1.0) {
        return Err(Error::param(
            "cos_theta",
            format!("need cos_theta in (0, 1], got {cos_theta}"),
        ));
    }
    if trials < 1 {
        return Err(Error::param("trials", "need at least one scan point"));
    }
    let c = cos_theta;
    let s = ((1.0 - c) * (1.0 + c)).sqrt();
    let analytic_min = (1.0 + s) / (1.0 - s);

    let t_floor = s * s / c; // det(B) = c t - s^2 > 0
    // window wide enough to bracket the optimum t = alpha + 1/alpha - c
    let lo = 1e-6_f64;
    let hi = 1e6_f64;
    let kappa_of = |t: f64| -> f64 {
        let tr = c + t;
        let det = c * t - s * s;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let hi = 0.5 * (tr + disc);
        let lo = 0.5 * (tr - disc);
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    };

    let grid_points = trials / 2;
    let mut best = f64::INFINITY;
    for k in 0..grid_points {
        let frac = k as f64 / (grid_points.max(2) - 1) as f64;
        let t = t_floor + lo * (hi / lo).powf(frac);
        best = best.min(kappa_of(t));
    }
    let mut rng = rng_for(seed, 0, 0);
    for _ in grid_points..trials {
        let t = t_floor + lo * (hi / lo).powf(rng.gen_range(0.0..1.0));
        best = best.min(kappa_of(t));
    }
    Ok(MinConditionScan {
        best_kappa_found: best,
        analytic_min,
    })
}

/// Converts the ratio condition `<g, d> = sigma ||d||^2` together with
/// the scaling `||d|| = c ||g||` into the angle cosine `sigma * c`.
pub fn sigma_to_angle(sigma: f64, c: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", format!("need sigma > 0, got {sigma}")));
    }
    if !(c > 0.0) {
        return Err(Error::param("c", format!("need c > 0, got {c}")));
    }
    let product = sigma * c;
    if product > 1.0 + 1e-12 {
        return Err(Error::param(
            "sigma",
            format!("sigma * c = {product} exceeds 1: inconsistent angle data"),
        ));
    }
    Ok(product.min(1.0))
}
