//! Few-photon transport in one-dimensional waveguide QED.
//!
//! Closed-form scattering from two- and three-level emitters, a
//! tight-binding lattice time-evolution cross-check, a Rydberg-polariton
//! two-photon propagation solver, and an experiment runner that writes
//! reproducible data files.

pub mod analytic2le;
pub mod cli;
pub mod error;
pub mod grid;
pub mod lattice;
pub mod numerics;
pub mod params;
pub mod router3le;
pub mod rydberg;

pub use error::{Error, Result};
pub use grid::{make_grid, Coefficients, DetuningGrid, Grid2d, Spectrum, TwoPhotonField};
pub use params::{CoherentInput, EmitterParams, Scale, ThreeLevelParams};
