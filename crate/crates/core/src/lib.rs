//! Bound states of square wells whose effective mass steps at the well edges.
//!
//! The kinetic term uses the `m^{-1/2} p² m^{-1/2}` ordering, under which
//! `ψ/√m` and its derivative are continuous across a mass step. The crate
//! solves the resulting transcendental energy equations, counts levels, finds
//! the critical widths and masses at which levels appear, builds normalized
//! wavefunctions, and checks everything against brute-force eigensolvers.
//!
//! Units: ħ² = 2.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod model;
pub mod oracle;
pub mod spectrum;
pub mod wavefunction;

pub use model::{BoundState, KineticOrdering, ModelError, Parity, RawConfig, WellConfig};
pub use oracle::{cross_validate, eigen_fd, shoot, Grid, OracleError, ValidationReport};
pub use spectrum::{Spectrum, SpectrumError};
pub use wavefunction::{PiecewiseWavefunction, WavefunctionError};
