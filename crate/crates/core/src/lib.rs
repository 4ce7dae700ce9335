//! Simulation of a bidirectionally pumped, group-velocity-matched type-II
//! PPKTP biphoton source.
//!
//! The crystal temperature shapes the single-pass joint spectral amplitude
//! `s(ω1, ω2)`; a double pass through a dual-wavelength wave plate swaps the
//! photons, and a tilted glass plate sets the relative phase `φ` of the
//! superposition `S = s(ω1, ω2) + e^{iφ} s(ω2, ω1)`. From `S` the crate
//! predicts the two-photon spectral intensity and Hong-Ou-Mandel traces.
//!
//! Units: frequencies in THz (ordinary, not angular), delays in ps,
//! wavelengths in µm inside the dispersion code and nm at the config
//! boundary, temperatures in °C, wave numbers in rad/µm.

pub mod dispersion;
pub mod error;
pub mod experiment;
pub mod interference;
pub mod spdc;
pub mod state;
pub mod units;

pub use error::{Error, Result};
