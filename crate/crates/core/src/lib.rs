//! Thermalization of two coupled two-level systems (TLSs) in contact with
//! either two independent heat baths or one common heat bath.
//!
//! Units: ħ = k_B = 1, all energies, temperatures and rates in units of a
//! reference rate γ.

pub mod dynamics;
pub mod entangle;
pub mod error;
pub mod rates;
pub mod sample;
pub mod spectrum;
pub mod steady;

pub use error::{PhysicsError, Result};
