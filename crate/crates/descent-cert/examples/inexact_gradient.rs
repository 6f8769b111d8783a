//! Fixed steps along inexact gradients `d` with
//! `||d - grad f(x)|| <= epsilon ||grad f(x)||`.
//!
//! Two certified factors apply at each step: the a-priori epsilon bound
//! `(1 - h mu (1 - eps))^2` and the sharper data-dependent factor using
//! the observed relative error. On the isotropic quadratic the epsilon
//! bound is attained exactly by an adversarial perturbation.
//!
//! ```bash
//! cargo run --example inexact_gradient
//! ```

use descent_cert::certify::{certify_trials, tightness_suite, TightnessCase};
use descent_cert::descent::inexact_gradient_plan;
use descent_cert::objective::Objective;
use descent_cert::seed::rng_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // the adversarial construction: ratio = bound = epsilon^2 = 0.25
    let sharp = tightness_suite(TightnessCase::InexactSharp)?;
    let cert = &sharp.certificates[0];
    println!(
        "adversarial perturbation (mu = L = 1, eps = 0.5, h = 1):\n  observed = {:.15}, bound = {:.15}, gap = {:.3e}",
        cert.observed_ratio.unwrap(),
        cert.bound.unwrap(),
        sharp.tightness_gap.unwrap()
    );

    // randomized errors on a conditioned quadratic
    let mut rng = rng_for(42, 0, 0);
    let objective = Objective::random_quadratic(1.0, 5.0, 4, &mut rng)?;
    let epsilon = 0.4;
    let plan = inexact_gradient_plan(&objective, epsilon)?;
    println!(
        "\nrandomized errors (mu = {:.2}, L = {:.2}, eps = {epsilon}):",
        objective.mu(),
        objective.lipschitz()
    );
    println!(
        "  hbar = {:.6}, kappa_eps = {:.6}, factor at hbar = {:.6}",
        plan.hbar(),
        plan.kappa_eff(),
        plan.predicted_factor().unwrap()
    );

    let report = certify_trials(&objective, &plan, 5, 100, 42)?;
    let mut sharper = 0usize;
    let mut counted = 0usize;
    for cert in &report.certificates {
        if let (Some(ratio), Some(data)) = (cert.observed_ratio, cert.data_dependent_bound) {
            counted += 1;
            if ratio <= data {
                sharper += 1;
            }
        }
    }
    println!(
        "  {counted} certified steps, all within the data-dependent factor: {sharper}/{counted}"
    );
    println!(
        "  worst ratio/bound = {:.8} -> {}",
        report.worst_ratio_over_bound,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(())
}
