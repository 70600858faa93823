//! Simulation models, voting rules and Monte Carlo analysis for
//! evaluation-based voting.
//!
//! Everything here is pure computation over in-memory [`EvaluationProfile`]s:
//! no IO, no threads, no wall-clock. The crate is `no_std` and only needs
//! `alloc`; file formats, parallel experiment execution and the command line
//! live in the `evalvote` companion crate.
//!
//! ```
//! use evalvote_core::{generators, rules, SeededRandomSource};
//!
//! let mut rng = SeededRandomSource::new(7, 0);
//! let profile = generators::gen_eic_dirichlet(100, 5, &mut rng).unwrap();
//! let result = rules::range_winner(&profile);
//! assert!(result.winner < 5);
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod generators;
pub mod linalg;
pub mod math;
mod profile;
pub mod rng;
pub mod rules;

pub use error::{Error, Result};
pub use linalg::CorrelationMatrix;
pub use profile::{quantize, EvaluationProfile, GradeScale, Violation, ViolationKind};
pub use rng::SeededRandomSource;
