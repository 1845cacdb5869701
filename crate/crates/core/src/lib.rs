//! Discrimination of quantum and classical channels: diamond-norm distances
//! with certified bounds, overlap certificates against perfect parallel
//! discrimination, adaptive strategy simulation, and exact optimization of
//! classical discrimination strategies.

pub mod channel;
pub mod classical;
pub mod cli;
pub mod error;
pub mod io;
pub mod matrix;
pub mod quantum;
pub mod report;

pub use error::{Error, Result};
