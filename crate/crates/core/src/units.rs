//! Physical constants, unit conversions and the phase-value grammar.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Speed of light in µm·THz (equivalently µm/ps).
pub const C_UM_THZ: f64 = 299.792_458;

/// Speed of light in nm·THz.
pub const C_NM_THZ: f64 = 299_792.458;

pub fn nm_to_thz(wavelength_nm: f64) -> f64 {
    C_NM_THZ / wavelength_nm
}

pub fn thz_to_um(frequency_thz: f64) -> f64 {
    C_UM_THZ / frequency_thz
}

/// Converts a wavelength interval `dλ` at `λ` into a frequency interval,
/// `Δν = c·Δλ/λ²`.
pub fn bandwidth_nm_to_thz(center_nm: f64, width_nm: f64) -> f64 {
    C_NM_THZ * width_nm / (center_nm * center_nm)
}

/// Reduces a phase to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid may round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Parses a phase written either as plain radians (`"1.2"`) or as a multiple
/// of π (`"1.1pi"`, `"pi"`, `"-0.5 pi"`, `"0.6π"`).
pub fn parse_phase(text: &str) -> Result<f64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::config("empty phase value"));
    }
    let lower = s.to_ascii_lowercase();
    let (number, scale) = if let Some(head) = lower.strip_suffix("pi") {
        (head.trim(), PI)
    } else if let Some(head) = s.strip_suffix('π') {
        (head.trim(), PI)
    } else {
        (lower.as_str(), 1.0)
    };
    let coefficient = match number {
        "" | "+" => 1.0,
        "-" => -1.0,
        n => n
            .parse::<f64>()
            .map_err(|_| Error::config(format!("invalid phase value {text:?}")))?,
    };
    let phi = coefficient * scale;
    if !phi.is_finite() {
        return Err(Error::config(format!("phase value {text:?} is not finite")));
    }
    Ok(phi)
}
