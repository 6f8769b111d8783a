//! Fixed-step update rules and their certified per-step contraction
//! factors on function-value gaps.
//!
//! Every method below reduces to a plain gradient step in a suitable
//! inner product, so each plan is summarized by a pair of effective
//! constants `(mu_eff, l_eff)`:
//!
//! * gradient:            `(mu, L)`
//! * variable metric `A`: `(mu / lambda_max(A), L / lambda_min(A))`
//! * angle + scaling:     `(mu c (1-sin)/cos, L c (1+sin)/cos)`
//! * relaxed bounds:      `(mu c1 (1-sin')/cos', L c2 (1+sin')/cos')`
//! * inexact gradient:    `(mu (1-eps), L (1+eps))`
//!
//! The certified step window is `[0, hbar]` with
//! `hbar = 2 / (l_eff + mu_eff)`, the factor at step `h` is
//! `(1 - h mu_eff)^2`, and at `h = hbar` it equals
//! `((kappa_eff - 1)/(kappa_eff + 1))^2` with `kappa_eff = l_eff/mu_eff`.
//! The plain gradient method additionally certifies
//! `(h l_eff - 1)^2` on the upper window `[hbar, 2/l_eff)`.
//!
//! All plans are built through the same constructor, so methods that
//! coincide mathematically (e.g. the angle method at `theta = 0, c = 1`
//! and the gradient method) produce bit-identical plans.

use crate::error::{Error, Result};
use crate::linalg::{inner, random_unit_vector, SpdMatrix, Vector};
use crate::metric::MIN_COS_THETA;
use crate::objective::Objective;

use rand_chacha::ChaCha8Rng;

/// Update rule plus the data needed to certify it.
#[derive(Debug, Clone)]
pub enum Method {
    /// `x+ = x - h grad f(x)`
    Gradient,
    /// `x+ = x - h A^{-1} grad f(x)`
    VariableMetric { metric: SpdMatrix },
    /// `x+ = x - h d` with `<g, d> = cos_theta ||g|| ||d||` and
    /// `||d|| = scale ||g||` known exactly.
    GradientRelated { cos_theta: f64, scale: f64 },
    /// Angle and scaling known only through bounds
    /// `theta <= theta'`, `scale in [scale_min, scale_max]`.
    GradientRelatedRelaxed {
        cos_theta_bound: f64,
        scale_min: f64,
        scale_max: f64,
    },
    /// `x+ = x - h d` with `||d - grad f(x)|| <= epsilon ||grad f(x)||`.
    InexactGradient { epsilon: f64 },
    /// `x+ = x - h* d` with the step minimizing `f` along `-d`;
    /// directions satisfy the angle condition at `cos_theta`.
    ExactLineSearch { cos_theta: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Gradient => "gradient",
            Method::VariableMetric { .. } => "variable-metric",
            Method::GradientRelated { .. } => "gradient-related",
            Method::GradientRelatedRelaxed { .. } => "gradient-related-relaxed",
            Method::InexactGradient { .. } => "inexact-gradient",
            Method::ExactLineSearch { .. } => "exact-line-search",
        }
    }
}

/// A method with a pinned step size and its certified contraction factor.
#[derive(Debug, Clone)]
pub struct StepPlan {
    method: Method,
    mu: f64,
    lipschitz: f64,
    mu_eff: f64,
    l_eff: f64,
    hbar: f64,
    h: f64,
    predicted_factor: Option<f64>,
}

impl StepPlan {
    fn from_effective(method: Method, mu: f64, lipschitz: f64, mu_eff: f64, l_eff: f64) -> Self {
        let hbar = 2.0 / (l_eff + mu_eff);
        let mut plan = StepPlan {
            method,
            mu,
            lipschitz,
            mu_eff,
            l_eff,
            hbar,
            h: hbar,
            predicted_factor: None,
        };
        plan.predicted_factor = plan.factor_at(hbar);
        plan
    }

    pub fn method(&self) -> &Method {
        &self.method
    }

    /// Strong convexity constant of the underlying objective.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Gradient Lipschitz constant of the underlying objective.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Largest certified step size `2 / (l_eff + mu_eff)`.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Effective condition number governing the factor at `hbar`.
    pub fn kappa_eff(&self) -> f64 {
        self.l_eff / self.mu_eff
    }

    /// Certified factor at the pinned step, `None` when the step lies
    /// outside the certified window.
    pub fn predicted_factor(&self) -> Option<f64> {
        self.predicted_factor
    }

    /// Certified contraction factor at step `h`, if `h` is inside the
    /// certified window of this method.
    pub fn factor_at(&self, h: f64) -> Option<f64> {
        if !(h >= 0.0) {
            return None;
        }
        match self.method {
            Method::Gradient => {
                if h >= 2.0 / self.l_eff {
                    return None;
                }
                let m = (1.0 - h * self.mu_eff).max(h * self.l_eff - 1.0);
                Some(m * m)
            }
            _ => {
                if h > self.hbar {
                    return None;
                }
                let m = 1.0 - h * self.mu_eff;
                Some(m * m)
            }
        }
    }

    /// Data-dependent factor for the inexact-gradient method at the
    /// observed relative error `rho = ||d - g|| / ||g||`.
    pub fn inexact_data_bound(&self, rho: f64) -> Option<f64> {
        match self.method {
            Method::InexactGradient { .. } => {
                let m = 1.0 - self.h * self.mu * (1.0 - rho);
                Some(m * m)
            }
            _ => None,
        }
    }

    /// Re-pins the step size; fails outside the certified window.
    pub fn with_step(mut self, h: f64) -> Result<Self> {
        match self.factor_at(h) {
            Some(f) => {
                self.h = h;
                self.predicted_factor = Some(f);
                Ok(self)
            }
            None => Err(Error::param(
                "h",
                format!(
                    "step {h} outside the certified window (hbar = {}, method {})",
                    self.hbar,
                    self.method.name()
                ),
            )),
        }
    }

    /// Pins an arbitrary nonnegative step size. Outside the certified
    /// window the plan carries no factor and every certificate against
    /// it is marked uncertified.
    pub fn with_step_uncertified(mut self, h: f64) -> Result<Self> {
        if !(h >= 0.0) || !h.is_finite() {
            return Err(Error::param("h", format!("step must be finite and >= 0, got {h}")));
        }
        self.predicted_factor = self.factor_at(h);
        self.h = h;
        Ok(self)
    }
}

/// Certified one-step factor of the gradient method:
/// `max(1 - h mu, h L - 1)^2` for `0 <= h < 2/L`.
pub fn gradient_rate(mu: f64, lipschitz: f64, h: f64) -> Result<f64> {
    check_constants(mu, lipschitz)?;
    if !(h >= 0.0) {
        return Err(Error::param("h", format!("need h >= 0, got {h}")));
    }
    if h >= 2.0 / lipschitz {
        return Err(Error::param(
            "h",
            format!("no certified contraction for h >= 2/L = {}", 2.0 / lipschitz),
        ));
    }
    let m = (1.0 - h * mu).max(h * lipschitz - 1.0);
    Ok(m * m)
}

fn check_constants(mu: f64, lipschitz: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= lipschitz && lipschitz.is_finite()) {
        return Err(Error::param(
            "mu",
            format!("need 0 < mu <= L, got mu={mu}, L={lipschitz}"),
        ));
    }
    Ok(())
}

/// Gradient plan pinned at the optimal step `2 / (L + mu)`.
pub fn gradient_plan(obj: &Objective) -> StepPlan {
    StepPlan::from_effective(
        Method::Gradient,
        obj.mu(),
        obj.lipschitz(),
        obj.mu(),
        obj.lipschitz(),
    )
}

/// Variable metric plan for SPD `metric`, pinned at its `hbar`.
pub fn variable_metric_plan(obj: &Objective, metric: &SpdMatrix) -> Result<StepPlan> {
    if metric.dim() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: metric.dim(),
        });
    }
    let (lo, hi) = metric.spectrum();
    Ok(StepPlan::from_effective(
        Method::VariableMetric {
            metric: metric.clone(),
        },
        obj.mu(),
        obj.lipschitz(),
        obj.mu() / hi,
        obj.lipschitz() / lo,
    ))
}

fn angle_effective(
    mu: f64,
    lipschitz: f64,
    cos_theta: f64,
    scale_min: f64,
    scale_max: f64,
) -> (f64, f64) {
    let sin_theta = ((1.0 - cos_theta) * (1.0 + cos_theta)).sqrt();
    let mu_eff = mu * scale_min * (1.0 - sin_theta) / cos_theta;
    let l_eff = lipschitz * scale_max * (1.0 + sin_theta) / cos_theta;
    (mu_eff, l_eff)
}

fn check_cos_theta(cos_theta: f64) -> Result<()> {
    if !(MIN_COS_THETA..=1.0).contains(&cos_theta) {
        return Err(Error::param(
            "cos_theta",
            format!("need cos_theta in [{MIN_COS_THETA:e}, 1], got {cos_theta}"),
        ));
    }
    Ok(())
}

/// Plan for directions with exactly known angle and scaling.
pub fn gradient_related_plan(obj: &Objective, cos_theta: f64, scale: f64) -> Result<StepPlan> {
    check_cos_theta(cos_theta)?;
    if !(scale > 0.0) {
        return Err(Error::param("c", format!("need c > 0, got {scale}")));
    }
    let (mu_eff, l_eff) = angle_effective(obj.mu(), obj.lipschitz(), cos_theta, scale, scale);
    Ok(StepPlan::from_effective(
        Method::GradientRelated { cos_theta, scale },
        obj.mu(),
        obj.lipschitz(),
        mu_eff,
        l_eff,
    ))
}

/// Plan when only the bounds `theta <= theta'`,
/// `c1 ||g|| <= ||d|| <= c2 ||g||` are known.
pub fn gradient_related_relaxed_plan(
    obj: &Objective,
    cos_theta_bound: f64,
    scale_min: f64,
    scale_max: f64,
) -> Result<StepPlan> {
    check_cos_theta(cos_theta_bound)?;
    if !(scale_min > 0.0) {
        return Err(Error::param("c1", format!("need c1 > 0, got {scale_min}")));
    }
    if scale_min > scale_max {
        return Err(Error::param(
            "c1",
            format!("c1 exceeds c2: {scale_min} > {scale_max}"),
        ));
    }
    let (mu_eff, l_eff) = angle_effective(
        obj.mu(),
        obj.lipschitz(),
        cos_theta_bound,
        scale_min,
        scale_max,
    );
    Ok(StepPlan::from_effective(
        Method::GradientRelatedRelaxed {
            cos_theta_bound,
            scale_min,
            scale_max,
        },
        obj.mu(),
        obj.lipschitz(),
        mu_eff,
        l_eff,
    ))
}

/// Plan for relative gradient error at most `epsilon`.
pub fn inexact_gradient_plan(obj: &Objective, epsilon: f64) -> Result<StepPlan> {
    if !(0.0..=1.0 - 1e-8).contains(&epsilon) {
        return Err(Error::param(
            "epsilon",
            format!("need epsilon in [0, 1), got {epsilon}"),
        ));
    }
    Ok(StepPlan::from_effective(
        Method::InexactGradient { epsilon },
        obj.mu(),
        obj.lipschitz(),
        obj.mu() * (1.0 - epsilon),
        obj.lipschitz() * (1.0 + epsilon),
    ))
}

/// Plan for exact line search along directions at angle `theta`.
/// The one-step factor never exceeds the fixed-step factor at `hbar`,
/// so the same bound certifies both.
pub fn exact_line_search_plan(obj: &Objective, cos_theta: f64) -> Result<StepPlan> {
    check_cos_theta(cos_theta)?;
    let (mu_eff, l_eff) = angle_effective(obj.mu(), obj.lipschitz(), cos_theta, 1.0, 1.0);
    Ok(StepPlan::from_effective(
        Method::ExactLineSearch { cos_theta },
        obj.mu(),
        obj.lipschitz(),
        mu_eff,
        l_eff,
    ))
}

/// Builds the default plan (pinned at `hbar`) for any method.
pub fn plan_for(obj: &Objective, method: &Method) -> Result<StepPlan> {
    match method {
        Method::Gradient => Ok(gradient_plan(obj)),
        Method::VariableMetric { metric } => variable_metric_plan(obj, metric),
        Method::GradientRelated { cos_theta, scale } => {
            gradient_related_plan(obj, *cos_theta, *scale)
        }
        Method::GradientRelatedRelaxed {
            cos_theta_bound,
            scale_min,
            scale_max,
        } => gradient_related_relaxed_plan(obj, *cos_theta_bound, *scale_min, *scale_max),
        Method::InexactGradient { epsilon } => inexact_gradient_plan(obj, *epsilon),
        Method::ExactLineSearch { cos_theta } => exact_line_search_plan(obj, *cos_theta),
    }
}

/// `x - h grad f(x)`.
pub fn gradient_step(obj: &Objective, x: &Vector, h: f64) -> Result<Vector> {
    if !(h >= 0.0) {
        return Err(Error::param("h", format!("need h >= 0, got {h}")));
    }
    Ok(x.axpy(-h, &obj.gradient(x)))
}

/// `x - h A^{-1} grad f(x)`.
pub fn variable_metric_step(
    obj: &Objective,
    x: &Vector,
    metric: &SpdMatrix,
    h: f64,
) -> Result<Vector> {
    if !(h >= 0.0) {
        return Err(Error::param("h", format!("need h >= 0, got {h}")));
    }
    let d = metric.solve(&obj.gradient(x))?;
    Ok(x.axpy(-h, &d))
}

/// Generic fixed step `x - h d` along a supplied direction.
pub fn direction_step(x: &Vector, d: &Vector, h: f64) -> Vector {
    x.axpy(-h, d)
}

/// How a search direction was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ExactGradient,
    MetricPreconditioned,
    AngleScaled,
    Perturbed,
}

#[derive(Debug, Clone)]
pub struct DirectionSpec {
    pub direction: Vector,
    pub provenance: Provenance,
}

/// Sampling recipes for synthetic search directions.
#[derive(Debug, Clone, Copy)]
pub enum DirectionKind {
    /// `<g, d> = cos_theta ||g|| ||d||` and `||d|| = scale ||g||`, with
    /// the in-plane rotation direction drawn from the rng.
    AngleScaled { cos_theta: f64, scale: f64 },
    /// `d = g + e` with `||e|| = relative_error * ||g||` in a random
    /// direction.
    Perturbed { relative_error: f64 },
}

/// Draws a direction with the requested relation to the gradient `g`.
pub fn sample_direction(
    g: &Vector,
    kind: DirectionKind,
    rng: &mut ChaCha8Rng,
) -> Result<DirectionSpec> {
    let gnorm = g.norm();
    if gnorm == 0.0 {
        return Err(Error::param("g", "cannot sample a direction for a zero gradient"));
    }
    match kind {
        DirectionKind::AngleScaled { cos_theta, scale } => {
            check_cos_theta(cos_theta)?;
            if !(scale > 0.0) {
                return Err(Error::param("c", format!("need c > 0, got {scale}")));
            }
            if cos_theta == 1.0 {
                // exact zero angle: keep the gradient direction bit-for-bit
                return Ok(DirectionSpec {
                    direction: g.scale(scale),
                    provenance: Provenance::AngleScaled,
                });
            }
            if g.dim() == 1 {
                return Err(Error::param(
                    "cos_theta",
                    "a nonzero angle needs dimension >= 2",
                ));
            }
            let g_hat = g.scale(1.0 / gnorm);
            let q_hat = random_orthogonal_unit(&g_hat, rng);
            let sin_theta = ((1.0 - cos_theta) * (1.0 + cos_theta)).sqrt();
            let d = g_hat
                .scale(cos_theta)
                .axpy(sin_theta, &q_hat)
                .scale(scale * gnorm);
            Ok(DirectionSpec {
                direction: d,
                provenance: Provenance::AngleScaled,
            })
        }
        DirectionKind::Perturbed { relative_error } => {
            if !(0.0..1.0).contains(&relative_error) {
                return Err(Error::param(
                    "epsilon",
                    format!("need relative error in [0, 1), got {relative_error}"),
                ));
            }
            if relative_error == 0.0 {
                return Ok(DirectionSpec {
                    direction: g.clone(),
                    provenance: Provenance::Perturbed,
                });
            }
            let e = random_unit_vector(g.dim(), rng).scale(relative_error * gnorm);
            Ok(DirectionSpec {
                direction: g.add(&e),
                provenance: Provenance::Perturbed,
            })
        }
    }
}

fn random_orthogonal_unit(unit: &Vector, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let raw = random_unit_vector(unit.dim(), rng);
        let w = raw.axpy(-inner(&raw, unit).expect("dims match"), unit);
        let norm = w.norm();
        if norm > 1e-6 {
            return w.scale(1.0 / norm);
        }
    }
}

/// Exact line search along `-d` on a quadratic objective. Returns the
/// new point and the minimizing step `h* = <g, d> / <d, Q d>`.
pub fn exact_line_search_step(obj: &Objective, x: &Vector, d: &Vector) -> Result<(Vector, f64)> {
    let (q, _) = obj.quadratic_form().ok_or_else(|| {
        Error::param("objective", "exact line search needs a quadratic objective")
    })?;
    if d.norm() == 0.0 {
        return Err(Error::param("d", "direction must be nonzero"));
    }
    let g = obj.gradient(x);
    let qd = q.matvec(d)?;
    let h_star = inner(&g, d)? / inner(d, &qd)?;
    Ok((x.axpy(-h_star, d), h_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gaussian_vector;
    use crate::objective::{Objective, QuadraticSpec};
    use crate::seed::rng_for;
    use rand::Rng;

    fn unit_ball_objective(n: usize) -> Objective {
        Objective::quadratic(QuadraticSpec {
            q: SpdMatrix::identity(n),
            b: Vector::zeros(n),
        })
        .unwrap()
    }

    #[test]
    fn gradient_rate_windows() {
        assert_eq!(gradient_rate(1.0, 3.0, 0.0).unwrap(), 1.0);
        // optimal step: ((kappa-1)/(kappa+1))^2 = 0.25 at kappa = 3
        assert_eq!(gradient_rate(1.0, 3.0, 0.5).unwrap(), 0.25);
        // upper branch
        let f = gradient_rate(1.0, 3.0, 0.6).unwrap();
        assert!((f - 0.64).abs() <= 1e-15);
        // window ends at 2/L
        assert!(gradient_rate(1.0, 3.0, 2.0 / 3.0).is_err());
        assert!(gradient_rate(1.0, 3.0, -0.1).is_err());
        assert!(gradient_rate(0.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn gradient_rate_branches_agree_at_hbar() {
        let (mu, l) = (1.0_f64, 3.0_f64);
        let h = 2.0 / (l + mu);
        let lower = (1.0 - h * mu) * (1.0 - h * mu);
        let upper = (h * l - 1.0) * (h * l - 1.0);
        assert!((lower - upper).abs() <= 1e-14);
    }

    #[test]
    fn upper_branch_is_tight_on_the_stiff_coordinate() {
        // from e_n the gradient step contracts by exactly (hL - 1)^2
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let x = Vector::unit(2, 1);
        let x_plus = gradient_step(&obj, &x, 0.6).unwrap();
        let ratio = obj.gap(&x_plus) / obj.gap(&x);
        assert!((ratio - 0.64).abs() <= 1e-12);
    }

    #[test]
    fn gradient_step_basics() {
        let obj = unit_ball_objective(3);
        let x = Vector::from_slice(&[1.0, -2.0, 0.5]).unwrap();
        // h = 1 lands on the minimizer since mu = L = 1
        let x_plus = gradient_step(&obj, &x, 1.0).unwrap();
        assert!(x_plus.norm() == 0.0);
        // h = 0 is a no-op
        assert_eq!(gradient_step(&obj, &x, 0.0).unwrap(), x);
    }

    #[test]
    fn witness_step_hand_arithmetic() {
        let (obj, w) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let x_plus = gradient_step(&obj, &w, 0.5).unwrap();
        assert_eq!(x_plus.as_slice(), &[0.5, -0.5]);
        let ratio = obj.gap(&x_plus) / obj.gap(&w);
        assert!((ratio - 0.25).abs() <= 1e-14);
    }

    #[test]
    fn variable_metric_plan_identity_reduces_to_gradient() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let grad = gradient_plan(&obj);
        let vm = variable_metric_plan(&obj, &SpdMatrix::identity(2)).unwrap();
        assert_eq!(grad.hbar(), vm.hbar());
        assert_eq!(grad.predicted_factor(), vm.predicted_factor());
        assert_eq!(grad.kappa_eff(), vm.kappa_eff());
    }

    #[test]
    fn variable_metric_plan_hand_values() {
        // f = 1/2 ||x||^2, A = diag(1, 2): kappa_eff = 2, factor (1/3)^2
        let obj = unit_ball_objective(2);
        let a = SpdMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let plan = variable_metric_plan(&obj, &a).unwrap();
        assert_eq!(plan.kappa_eff(), 2.0);
        assert!((plan.hbar() - 4.0 / 3.0).abs() <= 1e-15);
        assert!((plan.predicted_factor().unwrap() - 1.0 / 9.0).abs() <= 1e-15);
    }

    #[test]
    fn variable_metric_inverse_hessian_squares_condition() {
        // f(x) = 1/2 <x, A^{-1} x> preconditioned by A: the effective
        // condition number multiplies to kappa_f * kappa_A = 16
        let a = SpdMatrix::diagonal(&[1.0, 4.0]).unwrap();
        let q = SpdMatrix::diagonal(&[1.0, 0.25]).unwrap();
        let obj = Objective::quadratic(QuadraticSpec {
            q,
            b: Vector::zeros(2),
        })
        .unwrap();
        let plan = variable_metric_plan(&obj, &a).unwrap();
        assert!((plan.kappa_eff() - 16.0).abs() <= 1e-12);
    }

    #[test]
    fn variable_metric_step_matches_newton_case() {
        let mut rng = rng_for(42, 60, 0);
        let a = crate::linalg::random_spd(3, 0.5, 4.0, &mut rng).unwrap();
        let obj = Objective::quadratic(QuadraticSpec {
            q: a.clone(),
            b: random_gaussian_vector(3, &mut rng),
        })
        .unwrap();
        let x = random_gaussian_vector(3, &mut rng);
        let x_plus = variable_metric_step(&obj, &x, &a, 1.0).unwrap();
        assert!(x_plus.sub(obj.minimizer()).norm() <= 1e-10);
    }

    #[test]
    fn variable_metric_diagonal_witness_is_tight() {
        // A = diag(lambda .. Lambda) on f = 1/2 ||x||^2 from (1,0,..,0,1)
        let obj = unit_ball_objective(4);
        let a = SpdMatrix::diagonal(&[1.0, 1.5, 2.5, 3.0]).unwrap();
        let plan = variable_metric_plan(&obj, &a).unwrap();
        let x = Vector::new(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let x_plus = variable_metric_step(&obj, &x, &a, plan.hbar()).unwrap();
        let ratio = obj.gap(&x_plus) / obj.gap(&x);
        assert!((ratio - plan.predicted_factor().unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn gradient_related_plan_reduces_and_hand_case() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let grad = gradient_plan(&obj);
        let related = gradient_related_plan(&obj, 1.0, 1.0).unwrap();
        assert_eq!(grad.hbar(), related.hbar());
        assert_eq!(grad.predicted_factor(), related.predicted_factor());

        // mu = L = 1, theta = 30 deg, c = 1: kappa_eff = 3, hbar = sqrt(3)/2
        let ball = unit_ball_objective(2);
        let plan = gradient_related_plan(&ball, 3.0_f64.sqrt() / 2.0, 1.0).unwrap();
        assert!((plan.kappa_eff() - 3.0).abs() <= 1e-12);
        assert!((plan.hbar() - 3.0_f64.sqrt() / 2.0).abs() <= 1e-15);
        assert!((plan.predicted_factor().unwrap() - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn relaxed_plan_coincides_with_exact_when_bounds_collapse() {
        let mut rng = rng_for(42, 61, 0);
        for _ in 0..20 {
            let obj = Objective::random_quadratic(0.5, 5.0, 3, &mut rng).unwrap();
            let c: f64 = rng.gen_range(0.2..3.0);
            let cos: f64 = rng.gen_range(0.05..1.0);
            let exact = gradient_related_plan(&obj, cos, c).unwrap();
            let relaxed = gradient_related_relaxed_plan(&obj, cos, c, c).unwrap();
            assert_eq!(exact.hbar(), relaxed.hbar());
            assert_eq!(exact.predicted_factor(), relaxed.predicted_factor());
        }
    }

    #[test]
    fn relaxed_plan_hand_values_and_validation() {
        // mu=1, L=2, theta'=0, c1=1, c2=2: kappa' = 4, factor (3/5)^2
        let (obj, _) = Objective::worst_case_quadratic(1.0, 2.0, 2).unwrap();
        let plan = gradient_related_relaxed_plan(&obj, 1.0, 1.0, 2.0).unwrap();
        assert!((plan.kappa_eff() - 4.0).abs() <= 1e-12);
        assert!((plan.predicted_factor().unwrap() - 0.36).abs() <= 1e-12);

        assert!(gradient_related_relaxed_plan(&obj, 1.0, 2.0, 1.0).is_err());
        assert!(gradient_related_relaxed_plan(&obj, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn inexact_plan_values() {
        let ball = unit_ball_objective(2);
        let plan = inexact_gradient_plan(&ball, 0.5).unwrap();
        assert_eq!(plan.hbar(), 1.0);
        assert!((plan.kappa_eff() - 3.0).abs() <= 1e-15);
        assert_eq!(plan.predicted_factor().unwrap(), 0.25);

        // epsilon = 0 coincides with the gradient plan
        let plain = inexact_gradient_plan(&ball, 0.0).unwrap();
        let grad = gradient_plan(&ball);
        assert_eq!(plain.hbar(), grad.hbar());
        assert_eq!(plain.predicted_factor(), grad.predicted_factor());

        // mu=1, L=4, eps=0.2: hbar = 2/5.6, kappa_eff = 6
        let (obj, _) = Objective::worst_case_quadratic(1.0, 4.0, 2).unwrap();
        let plan = inexact_gradient_plan(&obj, 0.2).unwrap();
        assert!((plan.hbar() - 2.0 / 5.6).abs() <= 1e-15);
        assert!((plan.kappa_eff() - 6.0).abs() <= 1e-12);

        assert!(inexact_gradient_plan(&obj, 1.0).is_err());
        assert!(inexact_gradient_plan(&obj, -0.1).is_err());
    }

    #[test]
    fn step_window_enforcement() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let plan = gradient_plan(&obj);
        // the gradient window extends past hbar up to 2/L
        let upper = plan.clone().with_step(0.6).unwrap();
        assert!((upper.predicted_factor().unwrap() - 0.64).abs() <= 1e-15);
        assert!(plan.clone().with_step(2.0 / 3.0).is_err());

        let vm = variable_metric_plan(&obj, &SpdMatrix::identity(2)).unwrap();
        assert!(vm.clone().with_step(0.51).is_err());
        let forced = vm.with_step_uncertified(0.51).unwrap();
        assert_eq!(forced.predicted_factor(), None);
    }

    #[test]
    fn sampled_angle_direction_is_exact() {
        let mut rng = rng_for(42, 62, 0);
        let g = random_gaussian_vector(5, &mut rng);
        let d = sample_direction(
            &g,
            DirectionKind::AngleScaled {
                cos_theta: 3.0_f64.sqrt() / 2.0,
                scale: 2.0,
            },
            &mut rng,
        )
        .unwrap()
        .direction;
        let cos = inner(&g, &d).unwrap() / (g.norm() * d.norm());
        assert!((cos - 3.0_f64.sqrt() / 2.0).abs() <= 1e-12);
        assert!((d.norm() / g.norm() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn sampled_direction_edge_cases() {
        let mut rng = rng_for(42, 63, 0);
        let g = Vector::from_slice(&[2.0, -1.0]).unwrap();
        // zero angle, unit scale: exactly the gradient
        let d = sample_direction(
            &g,
            DirectionKind::AngleScaled {
                cos_theta: 1.0,
                scale: 1.0,
            },
            &mut rng,
        )
        .unwrap()
        .direction;
        assert_eq!(d, g);

        // zero perturbation: exactly the gradient
        let d = sample_direction(
            &g,
            DirectionKind::Perturbed {
                relative_error: 0.0,
            },
            &mut rng,
        )
        .unwrap()
        .direction;
        assert_eq!(d, g);

        // zero gradient rejected
        assert!(sample_direction(
            &Vector::zeros(2),
            DirectionKind::Perturbed {
                relative_error: 0.1
            },
            &mut rng
        )
        .is_err());

        // angle > 0 impossible in one dimension
        let g1 = Vector::from_slice(&[1.0]).unwrap();
        assert!(sample_direction(
            &g1,
            DirectionKind::AngleScaled {
                cos_theta: 0.5,
                scale: 1.0
            },
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn perturbed_direction_norm_is_exact() {
        let mut rng = rng_for(42, 64, 0);
        for _ in 0..50 {
            let g = random_gaussian_vector(4, &mut rng);
            let rho: f64 = rng.gen_range(0.0..0.9);
            let d = sample_direction(
                &g,
                DirectionKind::Perturbed {
                    relative_error: rho,
                },
                &mut rng,
            )
            .unwrap()
            .direction;
            let observed = d.sub(&g).norm() / g.norm();
            assert!((observed - rho).abs() <= 1e-12);
        }
    }

    #[test]
    fn exact_line_search_on_gradient_direction() {
        let obj = unit_ball_objective(3);
        let x = Vector::from_slice(&[1.0, 2.0, -1.0]).unwrap();
        let (x_plus, h) = exact_line_search_step(&obj, &x, &obj.gradient(&x)).unwrap();
        assert!((h - 1.0_f64).abs() <= 1e-15);
        assert!(x_plus.norm() <= 1e-15);
    }

    #[test]
    fn exact_line_search_tight_start_matches_fixed_step() {
        // on f = (x1^2 + 3 x2^2)/2 the minimizing step from (a, b) is
        // h* = (a^2 + 9 b^2) / (a^2 + 27 b^2); a = 3b makes h* = 1/2,
        // where the line search coincides with the fixed optimal step
        // and contracts the gap by exactly 0.25
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let x = Vector::from_slice(&[3.0, 1.0]).unwrap();
        let (x_plus, h) = exact_line_search_step(&obj, &x, &obj.gradient(&x)).unwrap();
        assert!((h - 0.5).abs() <= 1e-14);
        let ratio = obj.gap(&x_plus) / obj.gap(&x);
        assert!((ratio - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn exact_line_search_is_minimal_over_sampled_steps() {
        let mut rng = rng_for(42, 65, 0);
        let obj = Objective::random_quadratic(0.5, 4.0, 3, &mut rng).unwrap();
        let x = random_gaussian_vector(3, &mut rng);
        let g = obj.gradient(&x);
        let d = sample_direction(
            &g,
            DirectionKind::AngleScaled {
                cos_theta: 0.8,
                scale: 1.3,
            },
            &mut rng,
        )
        .unwrap()
        .direction;
        let (x_star, h_star) = exact_line_search_step(&obj, &x, &d).unwrap();
        let best = obj.value(&x_star);
        for _ in 0..50 {
            let h = h_star + rng.gen_range(-1.0..1.0);
            assert!(obj.value(&direction_step(&x, &d, h)) >= best - 1e-12);
        }
    }

    #[test]
    fn exact_line_search_rejects_nonquadratic_and_zero_direction() {
        let soft = Objective::softplus_random(1.0, 2, 2, 1).unwrap();
        let x = Vector::from_slice(&[1.0, 1.0]).unwrap();
        let g = soft.gradient(&x);
        assert!(exact_line_search_step(&soft, &x, &g).is_err());

        let obj = unit_ball_objective(2);
        assert!(exact_line_search_step(&obj, &x, &Vector::zeros(2)).is_err());
    }

    #[test]
    fn zero_direction_step_is_identity() {
        let x = Vector::from_slice(&[1.0, 2.0]).unwrap();
        assert_eq!(direction_step(&x, &Vector::zeros(2), 0.7), x);
    }
}
