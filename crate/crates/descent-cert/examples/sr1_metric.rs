//! The rank-one metric construction: a symmetric positive definite `B`
//! with `Bu = v` for unit vectors at angle `theta`, with the smallest
//! condition number such a matrix can have.
//!
//! `B = (1/alpha) (I - r r^* / <r, u>)` with `r = u - alpha v` and
//! `alpha = (1 - sin)/cos`; its spectrum is `cos/(1+sin)` (simple) and
//! `cos/(1-sin)` (multiplicity n-1).
//!
//! ```bash
//! cargo run --example sr1_metric
//! ```

use descent_cert::linalg::{inner, random_unit_vector, symmetric_eigen, Vector};
use descent_cert::metric::{sr1_metric, AngleWitness};
use descent_cert::seed::rng_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a 30-degree pair in the plane
    let u = Vector::unit(2, 0);
    let v = Vector::from_slice(&[3.0_f64.sqrt() / 2.0, 0.5])?;
    let witness = AngleWitness::new(u.clone(), v.clone())?;
    let result = sr1_metric(&witness)?;

    println!("u = {:?}", u.as_slice());
    println!("v = {:?} (30 degrees)", v.as_slice());
    println!(
        "analytic spectrum: lambda_min = {:.12}, lambda_max = {:.12}, kappa = {:.12}",
        result.lambda_min, result.lambda_max, result.kappa
    );
    let eig = symmetric_eigen(result.matrix.sym())?;
    println!("eigensolver:       {:?}", eig.eigenvalues());
    let bu = result.matrix.matvec(&u)?;
    println!("||B u - v|| = {:.3e}", bu.sub(&v).norm());

    // larger dimension: the big eigenvalue has multiplicity n - 1
    let n = 7;
    let mut rng = rng_for(42, 0, 0);
    let a = random_unit_vector(n, &mut rng);
    let raw = random_unit_vector(n, &mut rng);
    let orth = raw.axpy(-inner(&raw, &a)?, &a);
    let orth = orth.scale(1.0 / orth.norm());
    let cos_theta = 0.6;
    let sin_theta = 0.8;
    let b_vec = a.scale(cos_theta).axpy(sin_theta, &orth);
    let witness = AngleWitness::new(a, b_vec.scale(1.0 / b_vec.norm()))?;
    let result = sr1_metric(&witness)?;
    let eig = symmetric_eigen(result.matrix.sym())?;
    println!("\nn = {n}, cos(theta) = {cos_theta}:");
    for (i, lambda) in eig.eigenvalues().iter().enumerate() {
        println!("  lambda[{i}] = {lambda:.12}");
    }
    println!(
        "kappa = {:.12} = (1+sin)/(1-sin) = {:.12}",
        eig.lambda_max() / eig.lambda_min(),
        (1.0 + sin_theta) / (1.0 - sin_theta)
    );
    Ok(())
}
