//! Exact line search never loses to the certified fixed step along the
//! same direction, and satisfies the same angle-condition bound.
//!
//! ```bash
//! cargo run --example exact_line_search
//! ```

use descent_cert::certify::{tightness_suite, TightnessCase};
use descent_cert::descent::{
    direction_step, exact_line_search_plan, exact_line_search_step, gradient_related_plan,
    sample_direction, DirectionKind,
};
use descent_cert::linalg::random_gaussian_vector;
use descent_cert::objective::Objective;
use descent_cert::seed::rng_for;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng_for(42, 0, 0);
    println!("trial  cos(theta)  line-search ratio  fixed-step ratio   bound");
    let mut worst_margin = f64::NEG_INFINITY;
    for trial in 0..12 {
        let objective = Objective::random_quadratic(0.5, 6.0, 4, &mut rng)?;
        let x0 = objective
            .minimizer()
            .add(&random_gaussian_vector(4, &mut rng));
        let cos_theta: f64 = rng.gen_range(0.2..1.0);
        let g = objective.gradient(&x0);
        let d = sample_direction(
            &g,
            DirectionKind::AngleScaled {
                cos_theta,
                scale: rng.gen_range(0.5..2.0),
            },
            &mut rng_for(42, 1, trial),
        )?
        .direction;

        let gap = objective.gap(&x0);
        let (x_ls, _) = exact_line_search_step(&objective, &x0, &d)?;
        let ratio_ls = objective.gap(&x_ls) / gap;

        let scale = d.norm() / g.norm();
        let fixed = gradient_related_plan(&objective, cos_theta, scale)?;
        let ratio_fixed = objective.gap(&direction_step(&x0, &d, fixed.hbar())) / gap;

        let bound = exact_line_search_plan(&objective, cos_theta)?
            .predicted_factor()
            .unwrap();
        worst_margin = worst_margin.max(ratio_ls - ratio_fixed);
        println!(
            "{trial:>5}  {cos_theta:<11.6} {ratio_ls:<18.12} {ratio_fixed:<18.12} {bound:<10.6}"
        );
    }
    println!("\nmax(line-search - fixed-step) over trials = {worst_margin:.3e} (<= 0 expected)");

    // the two-dimensional witness where the line search attains the bound
    let tight = tightness_suite(TightnessCase::AngleExactLineSearch)?;
    println!(
        "tight case (theta = 30 deg on the isotropic quadratic): observed = {:.12}, bound = {:.12}",
        tight.certificates[0].observed_ratio.unwrap(),
        tight.certificates[0].bound.unwrap()
    );
    Ok(())
}
