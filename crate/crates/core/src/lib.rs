//! Privacy accounting for the shuffle model with a k-ary randomized response
//! local randomizer.
//!
//! The crate is organised around four pieces:
//!
//! * [`params`]: instance types and the blanket constants κ₁..κ₅.
//! * [`bounds`]: the two-case (ε, δ) blanket bound, evaluated in log space.
//! * [`tightness`]: the critical polynomial and critical equation, their
//!   roots, and the ε-regions where the blanket bound is claimed tight.
//! * [`oracle`]: exact shuffled-histogram distributions, the exact tight δ via
//!   the hockey-stick divergence, and a seeded Monte Carlo sampler.
//!
//! ```
//! use shuffle_blanket_core::{bounds, params::ShuffleParams};
//!
//! let params = ShuffleParams::uniform(0.1, 10, 2).unwrap();
//! let bound = bounds::delta_bound(&params, 0.5).unwrap();
//! assert!(bound.delta_clamped < 1e-5);
//! ```

pub mod bounds;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod tightness;

pub use error::{Error, Result};
