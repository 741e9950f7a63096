//! Terrain-aware UAV base-station placement.
//!
//! The crate models air-to-ground links over prism-building terrain
//! ([`terrain`], [`channel`]), fits an elevation-angle LoS-probability model
//! from flown samples ([`losmodel`]), classifies users by coverage
//! probability ([`classify`]), places the UAV with several algorithms
//! ([`deploy`]) and evaluates them in a Monte-Carlo harness ([`sim`]).
//! The `uav-terrain` binary wires these into file-based workflows ([`cli`]).

pub mod channel;
pub mod classify;
pub mod cli;
pub mod config;
pub mod deploy;
pub mod error;
pub mod losmodel;
pub mod rng;
pub mod sim;
pub mod terrain;

pub use error::{Error, Result};
