//! Per-step certification of contraction bounds.
//!
//! A certified run executes a fixed-step method and checks, at every
//! iteration, that the observed function-value gap ratio
//! `(f(x+) - f*) / (f(x) - f*)` stays within the method's predicted
//! factor. Bounds are exact inequalities in real arithmetic, so the
//! slack granted is rounding-level only:
//! `ratio <= bound * (1 + 1e-9) + 1e-12`, plus a small extra allowance
//! when the objective's minimum is itself known only numerically.
//!
//! Gaps below the floor (`1e-28`, or `1e3 *` the objective's minimum
//! slack) produce `Converged` verdicts: so close to the minimizer the
//! ratio is numerically meaningless and is not computed.
//!
//! Randomized harnesses (multi-trial certification and step-size
//! sweeps) derive every draw from a master seed through the fixed
//! splitting rule in [`crate::seed`], so reports are bit-reproducible.

use crate::descent::{
    direction_step, exact_line_search_step, gradient_plan, inexact_gradient_plan, plan_for,
    sample_direction, variable_metric_plan, variable_metric_step, DirectionKind, Method, StepPlan,
};
use crate::error::{Error, Result};
use crate::linalg::{random_gaussian_vector, symmetric_eigen, SpdMatrix, Vector};
use crate::objective::{Objective, QuadraticSpec};
use crate::seed::{derive, rng_for, STREAM_DIRECTION, STREAM_START, STREAM_SWEEP, STREAM_TRIAL};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Relative slack on certified ratios.
pub const RATIO_RTOL: f64 = 1e-9;
/// Absolute slack on certified ratios.
pub const RATIO_ATOL: f64 = 1e-12;
/// Gaps below this are treated as converged for exactly-known minima.
pub const GAP_FLOOR: f64 = 1e-28;
/// Tightness witnesses must attain their bound to this accuracy.
pub const TIGHTNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Ratio within the certified bound.
    Pass,
    /// Ratio exceeded the certified bound (or an equality witness missed it).
    Fail,
    /// Gap below the floor; ratio not computed.
    Converged,
    /// Step outside the certified window; no bound applies.
    Uncertified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Converged => "converged",
            Verdict::Uncertified => "uncertified",
        }
    }
}

/// Outcome of one certified step.
#[derive(Debug, Clone)]
pub struct StepCertificate {
    pub iter: usize,
    /// Step size actually taken (the line-search step for that method).
    pub h: f64,
    pub gap_before: f64,
    pub gap_after: f64,
    /// `gap_after / gap_before`; absent on converged steps.
    pub observed_ratio: Option<f64>,
    /// Certified factor at `h`; absent outside the certified window.
    pub bound: Option<f64>,
    /// Sharper factor from the observed relative gradient error
    /// (inexact-gradient method only).
    pub data_dependent_bound: Option<f64>,
    /// Numerical allowance added on top of the bound.
    pub slack_used: f64,
    pub verdict: Verdict,
}

/// Identifying data for report summaries.
#[derive(Debug, Clone)]
pub struct ReportMeta {
    pub method: String,
    pub dim: usize,
    pub mu: f64,
    pub lipschitz: f64,
    pub kappa_eff: f64,
    pub hbar: f64,
    pub factor_at_hbar: f64,
    /// Pinned step for runs; `None` for sweeps where `h` varies.
    pub h: Option<f64>,
}

impl ReportMeta {
    fn from_plan(plan: &StepPlan, dim: usize, pinned: bool) -> Self {
        let kappa = plan.kappa_eff();
        let contraction = (kappa - 1.0) / (kappa + 1.0);
        ReportMeta {
            method: plan.method().name().to_string(),
            dim,
            mu: plan.mu(),
            lipschitz: plan.lipschitz(),
            kappa_eff: kappa,
            hbar: plan.hbar(),
            factor_at_hbar: contraction * contraction,
            h: pinned.then_some(plan.h()),
        }
    }
}

/// Aggregated result of a certification run, sweep, or witness suite.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config_digest: String,
    pub master_seed: u64,
    pub meta: ReportMeta,
    pub certificates: Vec<StepCertificate>,
    /// Largest `ratio / (bound + atol)` over certified steps.
    pub worst_ratio_over_bound: f64,
    /// `|observed - bound|` at a tightness witness, when applicable.
    pub tightness_gap: Option<f64>,
    pub passed: bool,
}

fn gap_floor(obj: &Objective) -> f64 {
    GAP_FLOOR.max(1e3 * obj.min_value_slack())
}

fn slack_for(obj: &Objective, bound: f64, gap_before: f64) -> f64 {
    let mut slack = bound * RATIO_RTOL + RATIO_ATOL;
    if obj.min_value_slack() > 0.0 {
        // both gaps carry the minimum-value uncertainty
        slack += 2.0 * obj.min_value_slack() * (1.0 + bound) / gap_before;
    }
    slack
}

fn judge(
    obj: &Objective,
    iter: usize,
    h: f64,
    gap_before: f64,
    gap_after: f64,
    bound: Option<f64>,
    data_dependent_bound: Option<f64>,
) -> StepCertificate {
    let ratio = gap_after / gap_before;
    let (slack_used, verdict) = match bound {
        None => (0.0, Verdict::Uncertified),
        Some(b) => {
            // the data-dependent factor is the sharper certificate when present
            let check = data_dependent_bound.unwrap_or(b);
            let slack = slack_for(obj, check, gap_before);
            let verdict = if ratio <= check + slack {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            (slack, verdict)
        }
    };
    StepCertificate {
        iter,
        h,
        gap_before,
        gap_after,
        observed_ratio: Some(ratio),
        bound,
        data_dependent_bound,
        slack_used,
        verdict,
    }
}

fn converged_certificate(iter: usize, h: f64, gap: f64, bound: Option<f64>) -> StepCertificate {
    StepCertificate {
        iter,
        h,
        gap_before: gap,
        gap_after: gap,
        observed_ratio: None,
        bound,
        data_dependent_bound: None,
        slack_used: 0.0,
        verdict: Verdict::Converged,
    }
}

/// Executes one step of the plan's method from `x` and certifies it.
/// Directions for sampled methods are drawn from `rng`.
fn certify_step(
    obj: &Objective,
    plan: &StepPlan,
    x: &Vector,
    iter: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vector, StepCertificate)> {
    let gap_before = obj.gap(x);
    if gap_before <= gap_floor(obj) {
        return Ok((
            x.clone(),
            converged_certificate(iter, plan.h(), gap_before, plan.predicted_factor()),
        ));
    }
    let h = plan.h();
    let mut step_h = h;
    let mut data_bound = None;
    let x_next = match plan.method() {
        Method::Gradient => direction_step(x, &obj.gradient(x), h),
        Method::VariableMetric { metric } => variable_metric_step(obj, x, metric, h)?,
        Method::GradientRelated { cos_theta, scale } => {
            let g = obj.gradient(x);
            let d = sample_direction(
                &g,
                DirectionKind::AngleScaled {
                    cos_theta: *cos_theta,
                    scale: *scale,
                },
                rng,
            )?;
            direction_step(x, &d.direction, h)
        }
        Method::GradientRelatedRelaxed {
            cos_theta_bound,
            scale_min,
            scale_max,
        } => {
            // any admissible direction within the relaxed box
            let cos_theta = rng.gen_range(*cos_theta_bound..=1.0);
            let scale = rng.gen_range(*scale_min..=*scale_max);
            let g = obj.gradient(x);
            let d = sample_direction(&g, DirectionKind::AngleScaled { cos_theta, scale }, rng)?;
            direction_step(x, &d.direction, h)
        }
        Method::InexactGradient { epsilon } => {
            let rho = rng.gen_range(0.0..=*epsilon);
            let g = obj.gradient(x);
            let d = sample_direction(&g, DirectionKind::Perturbed { relative_error: rho }, rng)?;
            let observed_rho = d.direction.sub(&g).norm() / g.norm();
            data_bound = plan.inexact_data_bound(observed_rho);
            direction_step(x, &d.direction, h)
        }
        Method::ExactLineSearch { cos_theta } => {
            let g = obj.gradient(x);
            let d = sample_direction(
                &g,
                DirectionKind::AngleScaled {
                    cos_theta: *cos_theta,
                    scale: 1.0,
                },
                rng,
            )?;
            let (x_plus, h_star) = exact_line_search_step(obj, x, &d.direction)?;
            step_h = h_star;
            x_plus
        }
    };
    let gap_after = obj.gap(&x_next);
    let cert = judge(
        obj,
        iter,
        step_h,
        gap_before,
        gap_after,
        plan.predicted_factor(),
        data_bound,
    );
    Ok((x_next, cert))
}

fn run_steps(
    obj: &Objective,
    plan: &StepPlan,
    x0: Vector,
    iters: usize,
    trial_seed: u64,
) -> Result<Vec<StepCertificate>> {
    let mut certificates = Vec::with_capacity(iters);
    let mut x = x0;
    for iter in 0..iters {
        let mut rng = rng_for(trial_seed, STREAM_DIRECTION, iter as u64);
        let (x_next, cert) = certify_step(obj, plan, &x, iter, &mut rng)?;
        certificates.push(cert);
        x = x_next;
    }
    Ok(certificates)
}

fn assemble(
    digest: String,
    meta: ReportMeta,
    master_seed: u64,
    certificates: Vec<StepCertificate>,
    tightness_gap: Option<f64>,
) -> RunReport {
    let mut worst = 0.0_f64;
    let mut passed = true;
    for cert in &certificates {
        match cert.verdict {
            Verdict::Fail | Verdict::Uncertified => passed = false,
            Verdict::Pass | Verdict::Converged => {}
        }
        if cert.verdict != Verdict::Converged {
            if let (Some(ratio), Some(bound)) = (cert.observed_ratio, cert.bound) {
                worst = worst.max(ratio / (bound + RATIO_ATOL));
            }
        }
    }
    if let Some(gap) = tightness_gap {
        passed = passed && gap <= TIGHTNESS_TOL;
    }
    RunReport {
        config_digest: digest,
        master_seed,
        meta,
        certificates,
        worst_ratio_over_bound: worst,
        tightness_gap,
        passed,
    }
}

/// Runs `iters` certified steps of the plan's method from `x0`.
pub fn certify_run(
    obj: &Objective,
    plan: &StepPlan,
    x0: &Vector,
    iters: usize,
    seed: u64,
) -> Result<RunReport> {
    if x0.dim() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: x0.dim(),
        });
    }
    if iters < 1 {
        return Err(Error::param("iters", "need at least one iteration"));
    }
    let certificates = run_steps(obj, plan, x0.clone(), iters, derive(seed, STREAM_TRIAL, 0))?;
    let meta = ReportMeta::from_plan(plan, obj.dim(), true);
    let digest = format!(
        "run method={} dim={} mu={:e} L={:e} h={:e} iters={iters} seed={seed}",
        meta.method,
        meta.dim,
        meta.mu,
        meta.lipschitz,
        plan.h(),
    );
    Ok(assemble(digest, meta, seed, certificates, None))
}

/// Runs `trials` certified runs from seeded random starts and merges
/// the certificates in deterministic (trial, iteration) order.
pub fn certify_trials(
    obj: &Objective,
    plan: &StepPlan,
    iters: usize,
    trials: usize,
    seed: u64,
) -> Result<RunReport> {
    if iters < 1 || trials < 1 {
        return Err(Error::param("trials", "need iters >= 1 and trials >= 1"));
    }
    let mut certificates = Vec::with_capacity(iters * trials);
    for trial in 0..trials {
        let trial_seed = derive(seed, STREAM_TRIAL, trial as u64);
        let mut start_rng = rng_for(trial_seed, STREAM_START, 0);
        let x0 = obj
            .minimizer()
            .add(&random_gaussian_vector(obj.dim(), &mut start_rng));
        certificates.extend(run_steps(obj, plan, x0, iters, trial_seed)?);
    }
    let meta = ReportMeta::from_plan(plan, obj.dim(), true);
    let digest = format!(
        "certify method={} dim={} mu={:e} L={:e} h={:e} iters={iters} trials={trials} seed={seed}",
        meta.method,
        meta.dim,
        meta.mu,
        meta.lipschitz,
        plan.h(),
    );
    Ok(assemble(digest, meta, seed, certificates, None))
}

/// Step sizes covering the certified window `[0, hbar]` (both endpoints
/// on the grid). The gradient method's grid additionally extends into
/// the upper certified branch toward `2/L`.
fn step_grid(plan: &StepPlan, grid_points: usize) -> Vec<f64> {
    let n = grid_points.max(2);
    let hbar = plan.hbar();
    let upper_end = match plan.method() {
        Method::Gradient => 0.9 * (2.0 / plan.lipschitz()),
        _ => hbar,
    };
    if upper_end <= hbar {
        return (0..n)
            .map(|i| hbar * i as f64 / (n - 1) as f64)
            .collect();
    }
    let lower = n.div_ceil(2).max(2);
    let upper = n - lower;
    let mut grid: Vec<f64> = (0..lower)
        .map(|i| hbar * i as f64 / (lower - 1) as f64)
        .collect();
    for k in 1..=upper {
        grid.push(hbar + (upper_end - hbar) * k as f64 / upper as f64);
    }
    grid
}

/// Certifies one step at every grid point from `trials` random starts
/// per point.
pub fn sweep_step_sizes(
    obj: &Objective,
    method: &Method,
    grid_points: usize,
    trials: usize,
    seed: u64,
) -> Result<RunReport> {
    if grid_points < 2 {
        return Err(Error::param("grid", "need at least two grid points"));
    }
    if trials < 1 {
        return Err(Error::param("trials", "need at least one trial"));
    }
    let base = plan_for(obj, method)?;
    let grid = step_grid(&base, grid_points);
    let mut certificates = Vec::with_capacity(grid.len() * trials);
    for (i, &h) in grid.iter().enumerate() {
        let plan_h = base.clone().with_step(h)?;
        for trial in 0..trials {
            let cell = derive(seed, STREAM_SWEEP, (i * trials + trial) as u64);
            let mut rng = rng_for(cell, STREAM_START, 0);
            let x0 = obj
                .minimizer()
                .add(&random_gaussian_vector(obj.dim(), &mut rng));
            let mut dir_rng = rng_for(cell, STREAM_DIRECTION, 0);
            let (_, cert) = certify_step(obj, &plan_h, &x0, trial, &mut dir_rng)?;
            certificates.push(cert);
        }
    }
    let meta = ReportMeta::from_plan(&base, obj.dim(), false);
    let digest = format!(
        "sweep method={} dim={} mu={:e} L={:e} grid={grid_points} trials={trials} seed={seed}",
        meta.method, meta.dim, meta.mu, meta.lipschitz,
    );
    Ok(assemble(digest, meta, seed, certificates, None))
}

/// The named instances on which the contraction bounds hold with
/// equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightnessCase {
    /// Gradient method at `h = 2/(L+mu)` on the diagonal worst case.
    GradientWitness,
    /// Preconditioned step at `hbar` on the isotropic quadratic.
    VariableMetricWitness,
    /// Adversarial relative-error direction on the isotropic quadratic.
    InexactSharp,
    /// Exact line search along a direction at a fixed positive angle.
    AngleExactLineSearch,
}

impl TightnessCase {
    pub const ALL: [TightnessCase; 4] = [
        TightnessCase::GradientWitness,
        TightnessCase::VariableMetricWitness,
        TightnessCase::InexactSharp,
        TightnessCase::AngleExactLineSearch,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TightnessCase::GradientWitness => "gradient-witness",
            TightnessCase::VariableMetricWitness => "variable-metric-witness",
            TightnessCase::InexactSharp => "inexact-sharp",
            TightnessCase::AngleExactLineSearch => "angle-exact-line-search",
        }
    }
}

fn isotropic_quadratic(n: usize) -> Objective {
    Objective::quadratic(QuadraticSpec {
        q: SpdMatrix::identity(n),
        b: Vector::zeros(n),
    })
    .expect("identity quadratic is valid")
}

/// Rotation of `x` by 90 degrees in the (0, 1) coordinate plane.
fn quarter_turn(x: &Vector) -> Vector {
    let mut coords: Vec<f64> = x.as_slice().to_vec();
    let (a, b) = (coords[0], coords[1]);
    coords[0] = -b;
    coords[1] = a;
    Vector::new(coords).expect("rotation preserves finiteness")
}

/// Builds the named witness, runs one step, and records how far the
/// observed ratio sits from the predicted bound. The suite passes when
/// the bound is attained to `1e-10`.
pub fn tightness_suite(which: TightnessCase) -> Result<RunReport> {
    let (obj, plan, x0, cert) = match which {
        TightnessCase::GradientWitness => {
            let (obj, witness) = Objective::worst_case_quadratic(1.0, 3.0, 2)?;
            let plan = gradient_plan(&obj);
            let gap_before = obj.gap(&witness);
            let x_plus = direction_step(&witness, &obj.gradient(&witness), plan.h());
            let cert = judge(
                &obj,
                0,
                plan.h(),
                gap_before,
                obj.gap(&x_plus),
                plan.predicted_factor(),
                None,
            );
            (obj, plan, witness, cert)
        }
        TightnessCase::VariableMetricWitness => {
            let obj = isotropic_quadratic(2);
            let metric = SpdMatrix::diagonal(&[1.0, 2.0])?;
            let plan = variable_metric_plan(&obj, &metric)?;
            let x0 = Vector::from_slice(&[1.0, 1.0])?;
            let x_plus = variable_metric_step(&obj, &x0, &metric, plan.h())?;
            let cert = judge(
                &obj,
                0,
                plan.h(),
                obj.gap(&x0),
                obj.gap(&x_plus),
                plan.predicted_factor(),
                None,
            );
            (obj, plan, x0, cert)
        }
        TightnessCase::InexactSharp => {
            // on f = ||x||^2 / 2 any direction d = g + e with
            // ||e|| = eps ||g|| lands on x+ = -h e; the in-plane quarter
            // turn makes the construction deterministic
            let obj = isotropic_quadratic(2);
            let epsilon = 0.5;
            let plan = inexact_gradient_plan(&obj, epsilon)?;
            let x0 = Vector::from_slice(&[1.0, 0.5])?;
            let g = obj.gradient(&x0);
            let e = quarter_turn(&g).scale(epsilon);
            let d = g.add(&e);
            let rho = d.sub(&g).norm() / g.norm();
            let x_plus = direction_step(&x0, &d, plan.h());
            let cert = judge(
                &obj,
                0,
                plan.h(),
                obj.gap(&x0),
                obj.gap(&x_plus),
                plan.predicted_factor(),
                plan.inexact_data_bound(rho),
            );
            (obj, plan, x0, cert)
        }
        TightnessCase::AngleExactLineSearch => {
            // in two dimensions the line-search step along any direction
            // at angle theta contracts the isotropic gap by exactly the
            // angle bound
            let obj = isotropic_quadratic(2);
            let cos_theta = 3.0_f64.sqrt() / 2.0;
            let plan = crate::descent::exact_line_search_plan(&obj, cos_theta)?;
            let x0 = Vector::from_slice(&[1.0, 1.0])?;
            let g = obj.gradient(&x0);
            let sin_theta = 0.5;
            let d = g.scale(cos_theta).axpy(sin_theta, &quarter_turn(&g));
            let (x_plus, h_star) = exact_line_search_step(&obj, &x0, &d)?;
            let cert = judge(
                &obj,
                0,
                h_star,
                obj.gap(&x0),
                obj.gap(&x_plus),
                plan.predicted_factor(),
                None,
            );
            (obj, plan, x0, cert)
        }
    };
    let bound = cert.bound.expect("witness plans are certified");
    let observed = cert.observed_ratio.expect("witness gaps are above the floor");
    let tightness_gap = (observed - bound).abs();
    let meta = ReportMeta::from_plan(&plan, obj.dim(), true);
    let digest = format!(
        "worst-case case={} dim={} mu={:e} L={:e} x0={:?}",
        which.name(),
        meta.dim,
        meta.mu,
        meta.lipschitz,
        x0.as_slice(),
    );
    Ok(assemble(digest, meta, 0, vec![cert], Some(tightness_gap)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumEnd {
    Min,
    Max,
}

/// One preconditioned step at `hbar` starting from an extreme
/// eigenvector of the metric, on an isotropic quadratic: the bound must
/// be attained with equality (to `1e-10`), not merely respected.
pub fn eigenvector_equality_check(
    obj: &Objective,
    metric: &SpdMatrix,
    which_end: SpectrumEnd,
) -> Result<StepCertificate> {
    let isotropic = obj.mu() == obj.lipschitz()
        && obj
            .quadratic_form()
            .is_some_and(|(_, b)| b.norm() == 0.0);
    if !isotropic {
        return Err(Error::param(
            "objective",
            "eigenvector equality check needs an isotropic quadratic",
        ));
    }
    let eig = symmetric_eigen(metric.sym())?;
    let x0 = match which_end {
        SpectrumEnd::Min => eig.eigenvectors().first().unwrap().clone(),
        SpectrumEnd::Max => eig.eigenvectors().last().unwrap().clone(),
    };
    let plan = variable_metric_plan(obj, metric)?;
    let x_plus = variable_metric_step(obj, &x0, metric, plan.h())?;
    let mut cert = judge(
        obj,
        0,
        plan.h(),
        obj.gap(&x0),
        obj.gap(&x_plus),
        plan.predicted_factor(),
        None,
    );
    // equality, not just the one-sided bound
    let bound = cert.bound.unwrap();
    let observed = cert.observed_ratio.unwrap();
    cert.verdict = if (observed - bound).abs() <= TIGHTNESS_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::{gradient_related_plan, gradient_related_relaxed_plan};
    use crate::linalg::random_spd;

    #[test]
    fn one_step_convergence_then_converged_verdicts() {
        let obj = isotropic_quadratic(3);
        let plan = gradient_plan(&obj); // hbar = 1
        let x0 = Vector::from_slice(&[1.0, -2.0, 0.5]).unwrap();
        let report = certify_run(&obj, &plan, &x0, 3, 42).unwrap();
        assert!(report.passed);
        assert_eq!(report.certificates[0].verdict, Verdict::Pass);
        assert_eq!(report.certificates[0].observed_ratio, Some(0.0));
        assert!(report.certificates[0].gap_after <= GAP_FLOOR);
        assert_eq!(report.certificates[1].verdict, Verdict::Converged);
        assert_eq!(report.certificates[2].verdict, Verdict::Converged);
    }

    #[test]
    fn witness_run_has_constant_ratio() {
        let (obj, witness) = Objective::worst_case_quadratic(1.0, 10.0, 2).unwrap();
        let plan = gradient_plan(&obj); // h = 2/11
        let report = certify_run(&obj, &plan, &witness, 20, 42).unwrap();
        assert!(report.passed);
        let want = (9.0_f64 / 11.0) * (9.0 / 11.0);
        for cert in &report.certificates {
            let ratio = cert.observed_ratio.unwrap();
            assert!((ratio - want).abs() <= 1e-12, "ratio {ratio}");
            assert_eq!(cert.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn geometric_decay_along_certified_run() {
        let (obj, witness) = Objective::worst_case_quadratic(1.0, 10.0, 4).unwrap();
        let plan = gradient_plan(&obj);
        let beta = plan.predicted_factor().unwrap();
        let report = certify_run(&obj, &plan, &witness, 25, 42).unwrap();
        let gap0 = report.certificates[0].gap_before;
        for (k, cert) in report.certificates.iter().enumerate() {
            if cert.verdict == Verdict::Converged {
                break;
            }
            let budget = gap0 * beta.powi(k as i32 + 1) * (1.0 + 1e-8 * (k + 1) as f64);
            assert!(cert.gap_after <= budget, "iter {k}: {} > {budget}", cert.gap_after);
        }
    }

    #[test]
    fn descent_is_monotone_under_certified_steps() {
        let mut rng = rng_for(42, 70, 0);
        let obj = Objective::random_quadratic(0.5, 7.0, 4, &mut rng).unwrap();
        let plan = gradient_plan(&obj);
        let x0 = obj.minimizer().add(&random_gaussian_vector(4, &mut rng));
        let report = certify_run(&obj, &plan, &x0, 30, 7).unwrap();
        for cert in &report.certificates {
            assert!(cert.gap_before >= cert.gap_after - RATIO_ATOL);
        }
    }

    #[test]
    fn trials_merge_in_deterministic_order() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 3).unwrap();
        let plan = gradient_plan(&obj);
        let a = certify_trials(&obj, &plan, 5, 7, 42).unwrap();
        let b = certify_trials(&obj, &plan, 5, 7, 42).unwrap();
        assert_eq!(a.certificates.len(), 35);
        assert!(a.passed);
        for (x, y) in a.certificates.iter().zip(&b.certificates) {
            assert_eq!(x.gap_before, y.gap_before);
            assert_eq!(x.observed_ratio, y.observed_ratio);
        }
        let c = certify_trials(&obj, &plan, 5, 7, 43).unwrap();
        assert!(a
            .certificates
            .iter()
            .zip(&c.certificates)
            .any(|(x, y)| x.gap_before != y.gap_before));
    }

    #[test]
    fn sweep_gradient_grid_covers_both_branches() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let report = sweep_step_sizes(&obj, &Method::Gradient, 25, 10, 42).unwrap();
        assert!(report.passed);
        // h = 0 cells: ratio = bound = 1 exactly
        for cert in report.certificates.iter().take(10) {
            assert_eq!(cert.h, 0.0);
            assert_eq!(cert.observed_ratio, Some(1.0));
            assert_eq!(cert.bound, Some(1.0));
        }
        // grid must include hbar and reach into the upper branch to 0.6
        let hs: Vec<f64> = report.certificates.iter().map(|c| c.h).collect();
        assert!(hs.contains(&0.5));
        assert!((hs.last().unwrap() - 0.6).abs() <= 1e-15);
        let upper = report
            .certificates
            .iter()
            .filter(|c| c.h > 0.5)
            .count();
        assert!(upper >= 10);
    }

    #[test]
    fn sweep_variable_metric_random_all_pass() {
        let mut rng = rng_for(42, 71, 0);
        let obj = Objective::random_quadratic(1.0, 5.0, 4, &mut rng).unwrap();
        let metric = random_spd(4, 0.5, 3.0, &mut rng).unwrap();
        let report = sweep_step_sizes(
            &obj,
            &Method::VariableMetric { metric },
            25,
            10,
            42,
        )
        .unwrap();
        assert!(report.passed);
        assert!(report
            .certificates
            .iter()
            .all(|c| c.verdict != Verdict::Fail));
    }

    #[test]
    fn sweep_angle_methods_pass() {
        let mut rng = rng_for(42, 72, 0);
        let obj = Objective::random_quadratic(0.8, 6.0, 3, &mut rng).unwrap();
        let exact = sweep_step_sizes(
            &obj,
            &Method::GradientRelated {
                cos_theta: 0.8,
                scale: 1.5,
            },
            15,
            10,
            42,
        )
        .unwrap();
        assert!(exact.passed);
        let relaxed = sweep_step_sizes(
            &obj,
            &Method::GradientRelatedRelaxed {
                cos_theta_bound: 0.7,
                scale_min: 0.9,
                scale_max: 2.0,
            },
            15,
            10,
            42,
        )
        .unwrap();
        assert!(relaxed.passed);
    }

    #[test]
    fn tightness_witnesses_attain_their_bounds() {
        for case in TightnessCase::ALL {
            let report = tightness_suite(case).unwrap();
            let gap = report.tightness_gap.unwrap();
            assert!(gap <= TIGHTNESS_TOL, "{}: gap {gap:e}", case.name());
            assert!(report.passed, "{}", case.name());
        }
    }

    #[test]
    fn gradient_witness_values() {
        let report = tightness_suite(TightnessCase::GradientWitness).unwrap();
        let cert = &report.certificates[0];
        assert_eq!(cert.bound, Some(0.25));
        assert!((cert.observed_ratio.unwrap() - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn variable_metric_witness_values() {
        let report = tightness_suite(TightnessCase::VariableMetricWitness).unwrap();
        let cert = &report.certificates[0];
        let want = 1.0 / 9.0;
        assert!((cert.bound.unwrap() - want).abs() <= 1e-15);
        assert!((cert.observed_ratio.unwrap() - want).abs() <= 1e-12);
    }

    #[test]
    fn inexact_sharp_values() {
        let report = tightness_suite(TightnessCase::InexactSharp).unwrap();
        let cert = &report.certificates[0];
        assert_eq!(cert.bound, Some(0.25));
        assert!((cert.observed_ratio.unwrap() - 0.25).abs() <= 1e-12);
        // the data-dependent factor coincides at rho = eps
        assert!((cert.data_dependent_bound.unwrap() - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn eigenvector_equality_hand_values() {
        let obj = isotropic_quadratic(2);
        let metric = SpdMatrix::diagonal(&[1.0, 2.0]).unwrap();
        for end in [SpectrumEnd::Min, SpectrumEnd::Max] {
            let cert = eigenvector_equality_check(&obj, &metric, end).unwrap();
            assert_eq!(cert.verdict, Verdict::Pass);
            let want = 1.0 / 9.0;
            assert!((cert.observed_ratio.unwrap() - want).abs() <= 1e-10);
        }
        // identity metric: one-step convergence, ratio = bound = 0
        let cert =
            eigenvector_equality_check(&obj, &SpdMatrix::identity(2), SpectrumEnd::Min).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(cert.observed_ratio, Some(0.0));
    }

    #[test]
    fn eigenvector_check_rejects_anisotropic_objectives() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let metric = SpdMatrix::identity(2);
        assert!(eigenvector_equality_check(&obj, &metric, SpectrumEnd::Min).is_err());
    }

    #[test]
    fn uncertified_steps_never_pass_and_fail_the_report() {
        let (obj, witness) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let plan = gradient_plan(&obj).with_step_uncertified(0.7).unwrap();
        let report = certify_run(&obj, &plan, &witness, 3, 42).unwrap();
        assert!(!report.passed);
        for cert in &report.certificates {
            assert_eq!(cert.verdict, Verdict::Uncertified);
            assert_eq!(cert.bound, None);
        }
    }

    #[test]
    fn reduction_chain_produces_identical_certificates() {
        let (obj, witness) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
        let grad = certify_run(&obj, &gradient_plan(&obj), &witness, 5, 42).unwrap();
        let related = certify_run(
            &obj,
            &gradient_related_plan(&obj, 1.0, 1.0).unwrap(),
            &witness,
            5,
            42,
        )
        .unwrap();
        let vm = certify_run(
            &obj,
            &variable_metric_plan(&obj, &SpdMatrix::identity(2)).unwrap(),
            &witness,
            5,
            42,
        )
        .unwrap();
        for ((a, b), c) in grad
            .certificates
            .iter()
            .zip(&related.certificates)
            .zip(&vm.certificates)
        {
            assert_eq!(a.observed_ratio, b.observed_ratio);
            assert_eq!(a.bound, b.bound);
            assert_eq!(a.observed_ratio, c.observed_ratio);
            assert_eq!(a.bound, c.bound);
        }
    }

    #[test]
    fn relaxed_box_covers_exact_plan() {
        let (obj, _) = Objective::worst_case_quadratic(1.0, 4.0, 3).unwrap();
        let exact = gradient_related_plan(&obj, 0.9, 1.2).unwrap();
        let relaxed = gradient_related_relaxed_plan(&obj, 0.9, 1.2, 1.2).unwrap();
        assert_eq!(exact.hbar(), relaxed.hbar());
        assert_eq!(exact.predicted_factor(), relaxed.predicted_factor());
    }

    #[test]
    fn softplus_runs_certify_with_numeric_minimum() {
        let obj = Objective::softplus_random(1.0, 3, 4, 9).unwrap();
        let plan = gradient_plan(&obj);
        let report = certify_trials(&obj, &plan, 10, 20, 42).unwrap();
        assert!(report.passed, "worst {}", report.worst_ratio_over_bound);
    }

    #[test]
    fn sandwich_holds_along_certified_runs() {
        let mut rng = rng_for(42, 73, 0);
        let obj = Objective::random_quadratic(0.5, 5.0, 4, &mut rng).unwrap();
        let plan = gradient_plan(&obj);
        let mut x = obj.minimizer().add(&random_gaussian_vector(4, &mut rng));
        for _ in 0..30 {
            let gap = obj.gap(&x);
            let d2 = {
                let dx = x.sub(obj.minimizer());
                dx.as_slice().iter().map(|v| v * v).sum::<f64>()
            };
            assert!(gap >= 0.5 * obj.mu() * d2 * (1.0 - 1e-9) - 1e-12);
            assert!(gap <= 0.5 * obj.lipschitz() * d2 * (1.0 + 1e-9) + 1e-12);
            x = direction_step(&x, &obj.gradient(&x), plan.h());
        }
    }
}
