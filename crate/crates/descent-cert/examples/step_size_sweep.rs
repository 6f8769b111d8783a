//! One-step certification across the whole admissible step-size window.
//!
//! For the gradient method the certified factor is
//! `max(1 - h mu, h L - 1)^2`: flat-to-falling on `[0, 2/(L+mu)]`, rising
//! again on the upper branch until it reaches 1 at `2/L`. The sweep
//! certifies one step from 100 random starts at each of 25 grid points
//! and writes the trace as CSV.
//!
//! ```bash
//! cargo run --example step_size_sweep
//! ```

use descent_cert::certify::sweep_step_sizes;
use descent_cert::cli::emit_csv_path;
use descent_cert::descent::Method;
use descent_cert::objective::Objective;
use descent_cert::seed::rng_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng_for(42, 0, 0);
    let objective = Objective::random_quadratic(1.0, 3.0, 5, &mut rng)?;
    let report = sweep_step_sizes(&objective, &Method::Gradient, 25, 100, 42)?;

    // one summary line per grid point
    println!("h            worst ratio     bound");
    let trials = 100;
    for cell in report.certificates.chunks(trials) {
        let h = cell[0].h;
        let bound = cell[0].bound.unwrap();
        let worst = cell
            .iter()
            .filter_map(|c| c.observed_ratio)
            .fold(0.0_f64, f64::max);
        println!("{h:<12.6} {worst:<15.10} {bound:<15.10}");
    }

    let path = std::env::temp_dir().join("descent-cert-sweep.csv");
    emit_csv_path(&report, &path)?;
    println!(
        "\n{} certificates written to {}",
        report.certificates.len(),
        path.display()
    );
    println!("{}", if report.passed { "PASS" } else { "FAIL" });
    Ok(())
}
