//! Exact computations with n-systems from parametric geometry of numbers.
//!
//! An n-system is a piecewise-linear map `P = (P_1, ..., P_n)` whose sorted
//! coordinates sum to the parameter `q`. This crate stores such maps with
//! exact rational breakpoints ([`PlPath`]), checks them against the axioms of
//! the three system classes ([`validate`]), computes limit sets and spectrum
//! values of self-similar systems ([`spectrum`]), verifies two explicit
//! counter-example constructions ([`cex_min`], [`cex_nsa`]), and samples
//! random systems through the ball game ([`sim`]).
//!
//! ```
//! use nsystems::{cex_min, mu_exact, rational::int};
//!
//! let inst = cex_min::build_min_instance(&int(2), &int(3)).unwrap();
//! let mu = mu_exact(&inst.t, &inst.s).unwrap();
//! assert!(mu.values.iter().all(|v| *v == int(0)));
//! ```

// Errors carry exact rationals for diagnostics; their size is deliberate.
#![allow(clippy::result_large_err)]

pub mod cex_min;
pub mod cex_nsa;
pub mod error;
pub mod hull;
pub mod io;
pub mod lp;
pub mod path;
pub mod rational;
pub mod render;
pub mod report;
pub mod sim;
pub mod spectrum;
pub mod validate;

pub use error::{Error, Result};
pub use hull::{extreme_points, hull_contains, normalize, SimplexPoint};
pub use io::System;
pub use path::{PlPath, Trajectory};
pub use rational::Rational;
pub use report::Report;
pub use spectrum::{
    coordinatewise_min, limit_set_vertices, mu_estimate, mu_exact, LinearMap, SelfSimilarSystem,
    SpectrumMode, SpectrumPoint,
};
pub use validate::{
    division_numbers, switch_numbers, validate_exact_nsystem, validate_generalized, validate_rigid,
    Axiom, SystemClass, ValidationReport,
};
