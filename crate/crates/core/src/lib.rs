//! Majorization uncertainty relations for finite-dimensional quantum measurements.
//!
//! The crate computes eigenvalue-optimization bounds on direct-product and
//! direct-sum joint uncertainties, tightens them with the flatness process of
//! the majorization lattice, and checks them against Born-rule probabilities,
//! Schur-concave measures and a Monte Carlo guessing game.
//!
//! ```
//! use majur::bounds::{dp_bound_t, BoundOptions};
//! use majur::quantum::Measurement;
//!
//! let a = Measurement::builtin("A").unwrap();
//! let b = Measurement::builtin("B").unwrap();
//! let t = dp_bound_t(&a, &b, &BoundOptions::default()).unwrap();
//! assert!((t.flattened.components()[1] - 0.21875).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod error;
pub mod game;
pub mod lattice;
pub mod measures;
pub mod numerics;
pub mod quantum;

pub use error::{Error, Result};
