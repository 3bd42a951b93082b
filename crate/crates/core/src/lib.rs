//! Kinetics of a generic N-level atom coupled to a stationary, possibly
//! non-equilibrium, bosonic radiation field.
//!
//! The field enters only through its spectral intensity `I(omega)` and
//! occupation `N(omega)` at the Bohr frequencies of the atom. From these the
//! crate builds the Pauli master equation for the level populations, solves
//! for its stationary state, integrates it in time, and evaluates the photon
//! fluxes exchanged with the field. For three-level atoms the analytic
//! stationary populations, Double Einstein quotient, inversion condition and
//! emission/absorption regime are provided as well.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod field;
pub mod flux;
pub mod kinetics;
pub mod levels;

pub use closedform::{Regime, ThreeLevelParams};
pub use error::{Error, Result};
pub use field::{FieldEntry, FieldMode, FieldSpec};
pub use flux::LineFlux;
pub use kinetics::{Generator, LineRates, StateVector, Trajectory};
pub use levels::{BohrLine, LevelSystem};
