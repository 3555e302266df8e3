pub mod certificate;
pub mod cli;
pub mod config;
pub mod coupler;
pub mod error;
pub mod export;
pub mod fem;
pub mod fluxes;
pub mod geometry;
pub mod linalg;
pub mod materials;
pub mod potential;
pub mod species;
pub mod temperature;

pub use error::{Error, Result};
