//! Driving the harness from config text, exactly as the command-line
//! binary does: parse, execute, and inspect the report programmatically.
//!
//! ```bash
//! cargo run --example config_driven_runs
//! ```

use descent_cert::cli::{execute, parse_config, Command};

const CONFIG: &str = "\
[objective]
kind = worstcase
dim = 4
mu = 1.0
L = 10.0

[method]
kind = inexact
epsilon = 0.3

[run]
iters = 8
trials = 50
seed = 42
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config(CONFIG, Command::Certify)?;
    let execution = execute(&config)?;
    println!("{}\n", execution.summary);

    let report = &execution.reports[0];
    println!("digest: {}", report.config_digest);
    println!(
        "{} certificates, worst ratio/bound = {:.8}",
        report.certificates.len(),
        report.worst_ratio_over_bound
    );

    // rejected configs name the offending key
    let bad = CONFIG.replace("epsilon = 0.3", "epsilon = 1.5");
    match parse_config(&bad, Command::Certify) {
        Err(e) => println!("\nvalidation works: {e}"),
        Ok(_) => unreachable!("epsilon = 1.5 must be rejected"),
    }
    Ok(())
}
