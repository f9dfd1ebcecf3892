//! Covert communication over an amplify-and-forward relay.
//!
//! A relay forwards a source message at a fixed rate and tries to slip its
//! own message under the power it already spends. The source doubles as a
//! warden running a radiometer. This crate evaluates the warden's optimal
//! detection error, the relay's effective covert rate under two power
//! policies, the covertness-constrained optimum, and Monte Carlo / quadrature
//! oracles for all of them.

pub mod covert_rate;
pub mod detection;
pub mod error;
pub mod expcli;
pub mod montecarlo;
pub mod optimizer;
pub mod scenario;
pub mod search;

pub use error::{CovertError, Result};
