//! Soap-film catenoid between two coaxial unit rings at x = ±h.
//!
//! The crate solves for both extremal branches, classifies their stability
//! through the second variation and the associated string eigenproblem,
//! resolves the critical half-distance with the third variation, and
//! confirms the picture by minimizing a discretized area functional.

pub mod cli;
pub mod config;
pub mod direct_min;
pub mod energetics;
pub mod error;
pub mod extremals;
pub mod grid;
pub mod output;
pub mod rootfind;
pub mod spectrum;
pub mod variation;

pub use config::{Config, TWO_PI};
pub use error::{Error, Result};
pub use extremals::{critical_constants, solve_branches, Branch, CriticalConstants, Extremal};
pub use grid::{TestFunction, UniformGrid};
