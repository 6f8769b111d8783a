//! The reflection metric for inexact gradients: an SPD `A` with
//! `A d = g` whenever `||d - g|| < ||g||`, built from a Householder
//! reflection. Its eigenvalues are `(1 + rho)^{-1}` and `(1 - rho)^{-1}`
//! with `rho = ||d - g|| / ||g||`, so `kappa(A) = (1 + rho)/(1 - rho)`.
//!
//! ```bash
//! cargo run --example reflection_metric
//! ```

use descent_cert::linalg::{random_unit_vector, symmetric_eigen, Vector};
use descent_cert::metric::reflection_metric;
use descent_cert::seed::rng_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // hand-checkable plane case: g = (1, 0), d = (1, 0.5) so rho = 1/2
    let g = Vector::from_slice(&[1.0, 0.0])?;
    let d = Vector::from_slice(&[1.0, 0.5])?;
    let result = reflection_metric(&d, &g)?;
    println!("g = {:?}, d = {:?}", g.as_slice(), d.as_slice());
    println!(
        "rho = 0.5: eigenvalues ({:.12}, {:.12}), kappa = {:.12}",
        result.lambda_min, result.lambda_max, result.kappa
    );
    println!(
        "A d = {:?} (target g)",
        result.matrix.matvec(&d)?.as_slice()
    );

    // random pairs across the whole admissible error range
    let mut rng = rng_for(42, 0, 0);
    println!("\nrho        kappa(A) observed     (1+rho)/(1-rho)");
    for k in 1..=9 {
        let rho = k as f64 / 10.0;
        let g = random_unit_vector(5, &mut rng).scale(2.0);
        let e = random_unit_vector(5, &mut rng).scale(rho * g.norm());
        let d = g.add(&e);
        let result = reflection_metric(&d, &g)?;
        let eig = symmetric_eigen(result.matrix.sym())?;
        println!(
            "{rho:<10.1} {:<20.12} {:<20.12}",
            eig.lambda_max() / eig.lambda_min(),
            (1.0 + rho) / (1.0 - rho)
        );
    }
    Ok(())
}
