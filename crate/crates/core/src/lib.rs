//! Expected MaxCut performance of QAOA and multi-angle QAOA on low-girth infinite graphs,
//! with exact lightcone oracles, a parameter optimizer and classical local baselines.

pub mod classical;
pub mod config;
pub mod engine;
pub mod error;
pub mod eval;
pub mod factor;
pub mod graphs;
pub mod optimizer;
pub mod oracle;
pub mod params;
pub mod qmc;
pub mod reference;
pub mod reproduce;

pub use error::{Error, Result};
