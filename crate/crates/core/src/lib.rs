//! Time-dependent stresses and displacements around a shallow circular tunnel
//! in a viscoelastic half-plane whose surface is fixed far from the tunnel.

pub mod config;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod model;
pub mod run;
pub mod series;
pub mod solver;
pub mod time_model;
pub mod verification;

pub use error::{Result, TunnelError};
