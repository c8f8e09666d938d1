//! Radial eigenvalues by the shifted large-`l` expansion with Pade
//! resummation, and the spectra of one- and two-electron parabolic quantum
//! dots in a perpendicular magnetic field built on it.
//!
//! Energies are in effective Rydbergs and lengths in effective Bohr radii.

pub mod error;
pub mod oracle;
pub mod potential;
pub mod pslet;
pub mod qdot;
pub mod series;
pub mod tables;

pub use error::{Error, Result};
pub use potential::{effective_value, hybrid_derivative, HybridParams, PotentialModel};
pub use pslet::{EngineConfig, EnergyExpansion, ShiftParams, Solution, StateIndex};
pub use qdot::{
    DotParams, DotSolver, Level, SpectrumRecord, StateLabel, TwoElectronLevel, TwoElectronState,
};
pub use series::{PadeApproximant, Polynomial};
