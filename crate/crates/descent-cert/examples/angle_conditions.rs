//! Descent along directions that only satisfy angle and scaling
//! conditions relative to the gradient.
//!
//! With exact knowledge of `(theta, c)` the certified factor at `hbar`
//! is governed by `kappa = (L/mu) (1+sin)/(1-sin)`. When only bounds
//! `theta <= theta'` and `c1 <= c <= c2` are known, the factor degrades
//! to `kappa' = (L/mu)(c2/c1)(1+sin')/(1-sin')`; collapsing the bounds
//! recovers the exact plan.
//!
//! ```bash
//! cargo run --example angle_conditions
//! ```

use descent_cert::certify::certify_trials;
use descent_cert::descent::{gradient_related_plan, gradient_related_relaxed_plan};
use descent_cert::metric::sigma_to_angle;
use descent_cert::objective::Objective;
use descent_cert::seed::rng_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng_for(42, 0, 0);
    let objective = Objective::random_quadratic(1.0, 4.0, 5, &mut rng)?;

    let cos_theta = 30.0_f64.to_radians().cos();
    let scale = 1.5;

    let exact = gradient_related_plan(&objective, cos_theta, scale)?;
    println!(
        "exact data (theta = 30 deg, c = {scale}): kappa_eff = {:.6}, hbar = {:.6}, factor = {:.6}",
        exact.kappa_eff(),
        exact.hbar(),
        exact.predicted_factor().unwrap()
    );
    let report = certify_trials(&objective, &exact, 3, 200, 42)?;
    println!(
        "600 sampled-direction steps: worst ratio/bound = {:.8} -> {}",
        report.worst_ratio_over_bound,
        if report.passed { "PASS" } else { "FAIL" }
    );

    // only bounds: a 40-degree cap and a loose scaling box
    let relaxed = gradient_related_relaxed_plan(
        &objective,
        40.0_f64.to_radians().cos(),
        1.0,
        2.0,
    )?;
    println!(
        "\nrelaxed box (theta' = 40 deg, c in [1, 2]): kappa' = {:.6}, hbar = {:.6}, factor = {:.6}",
        relaxed.kappa_eff(),
        relaxed.hbar(),
        relaxed.predicted_factor().unwrap()
    );
    let report = certify_trials(&objective, &relaxed, 3, 200, 43)?;
    println!(
        "600 boxed-direction steps: worst ratio/bound = {:.8} -> {}",
        report.worst_ratio_over_bound,
        if report.passed { "PASS" } else { "FAIL" }
    );

    // collapsing the box reproduces the exact plan bit for bit
    let collapsed = gradient_related_relaxed_plan(&objective, cos_theta, scale, scale)?;
    println!(
        "\ncollapsed box equals exact plan: hbar {} == {}, factor {} == {}",
        collapsed.hbar(),
        exact.hbar(),
        collapsed.predicted_factor().unwrap(),
        exact.predicted_factor().unwrap()
    );

    // the ratio form of the scaling condition carries the same angle
    let sigma = cos_theta / scale; // <g, d> = sigma ||d||^2
    println!(
        "ratio condition: sigma = {sigma:.6}, c = {scale} -> cos(theta) = {:.6}",
        sigma_to_angle(sigma, scale)?
    );
    Ok(())
}
