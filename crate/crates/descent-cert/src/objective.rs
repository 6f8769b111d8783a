//! Smooth strongly convex test functions with certified constants.
//!
//! Every [`Objective`] carries a curvature lower bound `mu`, an upper
//! bound `lipschitz` (the gradient Lipschitz constant), its minimizer and
//! minimum value. For quadratics the constants come from the certified
//! spectrum of the Hessian and the minimizer from a Cholesky solve; for
//! the non-quadratic family the minimizer is computed numerically and the
//! objective records the extra slack this puts on function-value gaps.

use crate::error::{Error, Result};
use crate::linalg::{
    random_gaussian_vector, random_spd, symmetric_eigen, SpdMatrix, SymMatrix, Vector,
};

use rand::Rng;

/// Gradient-norm target when locating non-quadratic minimizers.
const MINIMIZER_GRAD_TOL: f64 = 1e-13;
/// Gap slack granted to objectives whose minimum is known only numerically.
const NUMERIC_MIN_SLACK: f64 = 1e-12;

/// Hessian and linear term of a quadratic `f(x) = 1/2 <x, Q x> - <b, x>`.
#[derive(Debug, Clone)]
pub struct QuadraticSpec {
    pub q: SpdMatrix,
    pub b: Vector,
}

#[derive(Debug, Clone)]
enum Kind {
    Quadratic { q: SpdMatrix, b: Vector },
    SoftplusQuadratic { mu: f64, terms: Vec<Vector> },
}

/// A smooth strongly convex function with certified constants
/// `0 < mu <= lipschitz`, a known minimizer, and its minimum value.
#[derive(Debug, Clone)]
pub struct Objective {
    dim: usize,
    mu: f64,
    lipschitz: f64,
    minimizer: Vector,
    min_value: f64,
    min_value_slack: f64,
    kind: Kind,
}

impl Objective {
    /// Quadratic objective from an SPD Hessian and linear term.
    pub fn quadratic(spec: QuadraticSpec) -> Result<Objective> {
        let QuadraticSpec { q, b } = spec;
        if b.dim() != q.dim() {
            return Err(Error::DimensionMismatch {
                expected: q.dim(),
                got: b.dim(),
            });
        }
        let (mu, lipschitz) = q.spectrum();
        let minimizer = q.solve(&b)?;
        let kind = Kind::Quadratic { q, b };
        let min_value = eval_value(&kind, &minimizer);
        let obj = Objective {
            dim: minimizer.dim(),
            mu,
            lipschitz,
            minimizer,
            min_value,
            min_value_slack: 0.0,
            kind,
        };
        let gnorm = obj.gradient(&obj.minimizer).norm();
        if gnorm > 1e-10 * lipschitz.max(1.0) {
            return Err(Error::NoConvergence {
                what: "quadratic minimizer solve",
                iterations: 1,
                residual: gnorm,
            });
        }
        Ok(obj)
    }

    /// Diagonal quadratic with spectrum endpoints pinned at `mu` and
    /// `lipschitz` and linearly spaced interior eigenvalues, plus the
    /// extreme-coordinate witness point `(1, 0, ..., 0, 1)` on which the
    /// fixed-step contraction bound is attained exactly.
    pub fn worst_case_quadratic(mu: f64, lipschitz: f64, n: usize) -> Result<(Objective, Vector)> {
        if !(mu > 0.0 && mu <= lipschitz) {
            return Err(Error::param(
                "mu",
                format!("need 0 < mu <= L, got mu={mu}, L={lipschitz}"),
            ));
        }
        if n < 2 {
            return Err(Error::param("n", "worst-case quadratic needs n >= 2"));
        }
        let eigs: Vec<f64> = (0..n)
            .map(|i| mu + (lipschitz - mu) * i as f64 / (n - 1) as f64)
            .collect();
        let q = SpdMatrix::diagonal(&eigs)?;
        let obj = Objective::quadratic(QuadraticSpec {
            q,
            b: Vector::zeros(n),
        })?;
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        w[n - 1] = 1.0;
        Ok((obj, Vector::new(w)?))
    }

    /// Dense random quadratic with spectrum pinned to `[mu, lipschitz]`
    /// and a random linear term.
    pub fn random_quadratic(
        mu: f64,
        lipschitz: f64,
        n: usize,
        rng: &mut impl Rng,
    ) -> Result<Objective> {
        let q = random_spd(n, mu, lipschitz, rng)?;
        let b = random_gaussian_vector(n, rng);
        Objective::quadratic(QuadraticSpec { q, b })
    }

    /// Strongly convex non-quadratic: `f(x) = mu/2 ||x||^2 + sum_i s(<a_i, x>)`
    /// with `s` the softplus function (curvature at most 1/4).
    ///
    /// Certified constants are `mu` and
    /// `mu + lambda_max(sum_i a_i a_i^T) / 4`; the minimizer is located by
    /// fixed-step gradient descent down to gradient norm `1e-13`, so gap
    /// certifications against this objective carry a small extra
    /// absolute slack.
    pub fn softplus_sum(mu: f64, dim: usize, terms: Vec<Vector>) -> Result<Objective> {
        if !(mu > 0.0) {
            return Err(Error::param("mu", format!("need mu > 0, got {mu}")));
        }
        if dim == 0 {
            return Err(Error::param("dim", "dimension must be >= 1"));
        }
        for t in &terms {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.dim(),
                });
            }
        }
        let gram = SymMatrix::from_fn_lower(dim, |i, j| {
            terms.iter().map(|a| a[i] * a[j]).sum()
        });
        let curvature_max = if terms.is_empty() {
            0.0
        } else {
            symmetric_eigen(&gram)?.lambda_max().max(0.0)
        };
        let lipschitz = mu + 0.25 * curvature_max;
        let kind = Kind::SoftplusQuadratic { mu, terms };

        // locate the minimizer by plain fixed-step descent
        let h = 2.0 / (lipschitz + mu);
        let mut x = Vector::zeros(dim);
        let mut iterations = 0usize;
        let max_iterations = 2_000_000;
        loop {
            let g = eval_gradient(&kind, &x);
            let gnorm = g.norm();
            if gnorm <= MINIMIZER_GRAD_TOL {
                break;
            }
            if iterations >= max_iterations {
                return Err(Error::NoConvergence {
                    what: "non-quadratic minimizer search",
                    iterations,
                    residual: gnorm,
                });
            }
            x = x.axpy(-h, &g);
            iterations += 1;
        }
        let min_value = eval_value(&kind, &x);
        Ok(Objective {
            dim,
            mu,
            lipschitz,
            minimizer: x,
            min_value,
            min_value_slack: NUMERIC_MIN_SLACK,
            kind,
        })
    }

    /// Softplus-sum objective with `num_terms` seeded random unit rows.
    pub fn softplus_random(mu: f64, dim: usize, num_terms: usize, seed: u64) -> Result<Objective> {
        let mut rng = crate::seed::rng_for(seed, crate::seed::STREAM_START, 0);
        let terms = (0..num_terms)
            .map(|_| crate::linalg::random_unit_vector(dim, &mut rng))
            .collect();
        Objective::softplus_sum(mu, dim, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Strong convexity constant.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Gradient Lipschitz constant.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Condition number `lipschitz / mu`.
    pub fn kappa(&self) -> f64 {
        self.lipschitz / self.mu
    }

    pub fn minimizer(&self) -> &Vector {
        &self.minimizer
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// Absolute uncertainty of `min_value` (zero for quadratics).
    pub fn min_value_slack(&self) -> f64 {
        self.min_value_slack
    }

    /// Hessian and linear term when the objective is quadratic.
    pub fn quadratic_form(&self) -> Option<(&SpdMatrix, &Vector)> {
        match &self.kind {
            Kind::Quadratic { q, b } => Some((q, b)),
            Kind::SoftplusQuadratic { .. } => None,
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        eval_value(&self.kind, x)
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.dim);
        eval_gradient(&self.kind, x)
    }

    /// Function-value gap `f(x) - f(x*)`.
    pub fn gap(&self, x: &Vector) -> f64 {
        self.value(x) - self.min_value
    }
}

fn eval_value(kind: &Kind, x: &Vector) -> f64 {
    match kind {
        Kind::Quadratic { q, b } => {
            let qx = q.matvec(x).expect("dimensions fixed at construction");
            0.5 * x.dot_unchecked(&qx) - b.dot_unchecked(x)
        }
        Kind::SoftplusQuadratic { mu, terms } => {
            let quad = 0.5 * mu * x.dot_unchecked(x);
            quad + terms
                .iter()
                .map(|a| softplus(a.dot_unchecked(x)))
                .sum::<f64>()
        }
    }
}

fn eval_gradient(kind: &Kind, x: &Vector) -> Vector {
    match kind {
        Kind::Quadratic { q, b } => q
            .matvec(x)
            .expect("dimensions fixed at construction")
            .sub(b),
        Kind::SoftplusQuadratic { mu, terms } => {
            let mut g = x.scale(*mu);
            for a in terms {
                g = g.axpy(sigmoid(a.dot_unchecked(x)), a);
            }
            g
        }
    }
}

/// `ln(1 + e^t)`, computed without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use crate::seed::rng_for;
    use crate::tol::Tolerance;

    #[test]
    fn unit_quadratic_basics() {
        let obj = Objective::quadratic(QuadraticSpec {
            q: SpdMatrix::identity(3),
            b: Vector::zeros(3),
        })
        .unwrap();
        assert_eq!(obj.mu(), 1.0);
        assert_eq!(obj.lipschitz(), 1.0);
        assert_eq!(obj.minimizer().as_slice(), &[0.0, 0.0, 0.0]);
        let x = Vector::from_slice(&[3.0, 4.0, 0.0]).unwrap();
        assert_eq!(obj.value(&x), 12.5);
        assert_eq!(obj.gap(&x), 12.5);
    }

    #[test]
    fn diagonal_quadratic_constants() {
        let obj = Objective::quadratic(QuadraticSpec {
            q: SpdMatrix::diagonal(&[1.0, 3.0]).unwrap(),
            b: Vector::zeros(2),
        })
        .unwrap();
        assert_eq!(obj.mu(), 1.0);
        assert_eq!(obj.lipschitz(), 3.0);
        assert_eq!(obj.kappa(), 3.0);
    }

    #[test]
    fn random_quadratic_minimizer_gradient_vanishes() {
        let mut rng = rng_for(42, 40, 0);
        for _ in 0..20 {
            let obj = Objective::random_quadratic(0.5, 6.0, 5, &mut rng).unwrap();
            let gnorm = obj.gradient(obj.minimizer()).norm();
            assert!(gnorm <= 1e-10 * obj.lipschitz().max(1.0), "gnorm {gnorm:e}");
        }
    }

    #[test]
    fn worst_case_structure() {
        let (obj, witness) = Objective::worst_case_quadratic(1.0, 10.0, 5).unwrap();
        assert_eq!(obj.mu(), 1.0);
        assert_eq!(obj.lipschitz(), 10.0);
        assert_eq!(witness.as_slice(), &[1.0, 0.0, 0.0, 0.0, 1.0]);

        let (obj2, w2) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        assert_eq!(w2.as_slice(), &[1.0, 1.0]);
        assert_eq!(obj2.kappa(), 3.0);
    }

    #[test]
    fn worst_case_witness_step_is_tight() {
        // one fixed step at h = 2/(L+mu) from the witness contracts the
        // gap by exactly ((kappa-1)/(kappa+1))^2
        let (obj, w) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let h = 2.0 / (3.0 + 1.0);
        let g = obj.gradient(&w);
        let x_plus = w.axpy(-h, &g);
        let ratio = obj.gap(&x_plus) / obj.gap(&w);
        assert!((ratio - 0.25).abs() <= 1e-12, "ratio {ratio}");
    }

    #[test]
    fn worst_case_rejects_bad_arguments() {
        assert!(Objective::worst_case_quadratic(0.0, 1.0, 2).is_err());
        assert!(Objective::worst_case_quadratic(2.0, 1.0, 2).is_err());
        assert!(Objective::worst_case_quadratic(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn softplus_degenerate_term_reduces_to_quadratic() {
        // a = 0 contributes a constant, so the minimizer stays at 0
        let obj = Objective::softplus_sum(2.0, 1, vec![Vector::zeros(1)]).unwrap();
        assert_eq!(obj.mu(), 2.0);
        assert_eq!(obj.lipschitz(), 2.0);
        assert!(obj.minimizer().norm() <= 1e-13);
        let x = Vector::from_slice(&[3.0]).unwrap();
        // gap is mu/2 x^2 exactly, the softplus constant cancels
        assert!((obj.gap(&x) - 9.0).abs() <= 1e-12);
    }

    #[test]
    fn softplus_sandwich_inequality_sampled() {
        let obj = Objective::softplus_random(1.0, 4, 6, 42).unwrap();
        let mut rng = rng_for(42, 41, 0);
        let tol = 1e-9;
        for _ in 0..100 {
            let x = obj
                .minimizer()
                .add(&random_gaussian_vector(4, &mut rng).scale(2.0));
            let d2 = x.sub(obj.minimizer()).dot_unchecked(&x.sub(obj.minimizer()));
            let gap = obj.gap(&x);
            assert!(gap >= 0.5 * obj.mu() * d2 * (1.0 - tol) - 1e-12);
            assert!(gap <= 0.5 * obj.lipschitz() * d2 * (1.0 + tol) + 1e-12);
        }
    }

    #[test]
    fn cocoercivity_bounds_sampled() {
        let tol = Tolerance::new(1e-12, 1e-9);
        let mut rng = rng_for(42, 42, 0);
        let quad = Objective::random_quadratic(0.5, 8.0, 5, &mut rng).unwrap();
        let soft = Objective::softplus_random(0.7, 5, 4, 43).unwrap();
        for obj in [&quad, &soft] {
            for _ in 0..100 {
                let x = random_gaussian_vector(5, &mut rng);
                let y = random_gaussian_vector(5, &mut rng);
                let dx = x.sub(&y);
                let d2 = dx.dot_unchecked(&dx);
                if d2 == 0.0 {
                    continue;
                }
                let dg = obj.gradient(&x).sub(&obj.gradient(&y));
                let cross = inner(&dg, &dx).unwrap();
                let scale = obj.lipschitz() * d2;
                assert!(cross >= obj.mu() * d2 - (tol.atol + tol.rtol * scale));
                assert!(cross <= obj.lipschitz() * d2 + (tol.atol + tol.rtol * scale));
            }
        }
    }

    #[test]
    fn metric_matching_hessian_converges_in_one_step() {
        // d = A^{-1} grad f(x) = x - x* when the Hessian equals A, so a
        // unit step lands on the minimizer for any start
        let mut rng = rng_for(42, 43, 0);
        let a = random_spd(4, 0.5, 5.0, &mut rng).unwrap();
        let b = random_gaussian_vector(4, &mut rng);
        let obj = Objective::quadratic(QuadraticSpec { q: a.clone(), b }).unwrap();
        let x = random_gaussian_vector(4, &mut rng);
        let d = a.solve(&obj.gradient(&x)).unwrap();
        let x_plus = x.axpy(-1.0, &d);
        assert!(x_plus.sub(obj.minimizer()).norm() <= 1e-10);
    }
}
