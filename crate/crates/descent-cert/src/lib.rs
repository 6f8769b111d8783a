//! Fixed-step descent methods for smooth strongly convex minimization,
//! with per-step certificates that the optimal contraction bounds on
//! function values actually hold — and, on the right witnesses, hold
//! with equality.
//!
//! For an `L`-smooth, `mu`-strongly convex `f`, a gradient step with
//! `0 <= h <= 2/(L+mu)` contracts the gap `f(x) - f(x*)` by at least
//! `(1 - h mu)^2`, and the optimal step reaches
//! `((kappa-1)/(kappa+1))^2`. Preconditioned steps, directions under
//! angle and scaling conditions, and inexact gradients under a relative
//! error bound all reduce to that estimate under a change of metric;
//! this crate implements the methods, the metric constructions behind
//! the reductions, and a certification harness that checks every step
//! of every run against its predicted factor at rounding-level slack.
//!
//! # Examples first
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── gradient_descent_rates.rs       # tight per-step ratios on the worst case
//! ├── step_size_sweep.rs              # the full certified step-size window
//! ├── variable_metric.rs              # preconditioned steps and their witnesses
//! ├── sr1_metric.rs                   # rank-one metric: direction -> gradient
//! ├── reflection_metric.rs            # inexact-gradient metric construction
//! ├── min_condition_scan.rs           # minimal condition number, by brute force
//! ├── angle_conditions.rs             # exact and relaxed angle/scaling bounds
//! ├── inexact_gradient.rs             # epsilon and data-dependent factors
//! ├── exact_line_search.rs            # line search vs the fixed certified step
//! ├── nonquadratic_certification.rs   # beyond quadratics: softplus objective
//! └── config_driven_runs.rs           # the config format, programmatically
//! ```
//!
//! ```bash
//! cargo run --example gradient_descent_rates
//! cargo run --example min_condition_scan
//! ```
//!
//! # Library layout
//!
//! * [`linalg`] — dense vectors, symmetric/SPD matrices, Jacobi
//!   eigensolver, Cholesky solves, weighted inner products.
//! * [`objective`] — quadratic and softplus test functions with
//!   certified constants, minimizers, and worst-case instances.
//! * [`metric`] — the rank-one and reflection metric constructions and
//!   the minimal-condition-number oracle.
//! * [`descent`] — step plans (certified windows and factors) and the
//!   update rules themselves.
//! * [`certify`] — per-step certificates, multi-trial harnesses,
//!   step-size sweeps, tightness witnesses.
//! * [`cli`] — config parsing, CSV traces, summaries; the `descent-cert`
//!   binary is a thin wrapper over it.
//!
//! # Quick start
//!
//! ```
//! use descent_cert::certify::certify_run;
//! use descent_cert::descent::gradient_plan;
//! use descent_cert::objective::Objective;
//!
//! let (objective, witness) = Objective::worst_case_quadratic(1.0, 3.0, 2).unwrap();
//! let plan = gradient_plan(&objective); // h = 2/(L+mu), factor 0.25
//! let report = certify_run(&objective, &plan, &witness, 20, 42).unwrap();
//! assert!(report.passed);
//! for cert in &report.certificates {
//!     assert!((cert.observed_ratio.unwrap() - 0.25).abs() <= 1e-12);
//! }
//! ```

// validation guards are written `!(x > 0.0)` on purpose: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod descent;
pub mod error;
pub mod linalg;
pub mod metric;
pub mod objective;
pub mod seed;
pub mod tol;

pub use error::{Error, Result};
