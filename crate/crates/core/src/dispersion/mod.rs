//! Temperature-dependent refractive and group indices, and refraction
//! geometry for a tilted plate.

mod material;

pub use material::{AxisDispersion, MaterialModel, SellmeierForm, BUILTIN_MATERIALS};

use crate::error::{Error, Result};

/// Relative wavelength step of the symmetric stencil used by [`group_index`].
pub const GROUP_INDEX_RELATIVE_STEP: f64 = 1e-4;

/// `n(λ, T) = n_sellmeier(λ) + Δn_thermo(λ, T)`, λ in µm, T in °C.
pub fn refractive_index(
    material: &MaterialModel,
    axis: &str,
    wavelength_um: f64,
    temperature_c: f64,
) -> Result<f64> {
    let ax = material.axis(axis)?;
    material.check_wavelength(wavelength_um)?;
    Ok(index_unchecked(material, ax, wavelength_um, temperature_c))
}

fn index_unchecked(material: &MaterialModel, ax: &AxisDispersion, lam: f64, t: f64) -> f64 {
    ax.sellmeier_index(lam) + ax.thermo_optic_shift(lam, t - material.reference_temperature)
}

/// Group index `n_g = n − λ·dn/dλ` from a central difference with relative
/// step [`GROUP_INDEX_RELATIVE_STEP`].
pub fn group_index(
    material: &MaterialModel,
    axis: &str,
    wavelength_um: f64,
    temperature_c: f64,
) -> Result<f64> {
    let ax = material.axis(axis)?;
    let h = wavelength_um * GROUP_INDEX_RELATIVE_STEP;
    let (lo, hi) = material.valid_wavelength_range;
    if !(wavelength_um - h > lo && wavelength_um + h < hi) {
        return Err(Error::range(format!(
            "wavelength {wavelength_um} µm too close to the edge of [{lo}, {hi}] µm for the group-index stencil"
        )));
    }
    let n = index_unchecked(material, ax, wavelength_um, temperature_c);
    let plus = index_unchecked(material, ax, wavelength_um + h, temperature_c);
    let minus = index_unchecked(material, ax, wavelength_um - h, temperature_c);
    Ok(n - wavelength_um * (plus - minus) / (2.0 * h))
}

/// Path-length multiplier `1/cos θ_r` inside a plate of index `n` tilted by
/// `tilt` (radians from the plate normal), with `sin θ_r = sin(tilt)/n`.
pub fn internal_path_factor(n: f64, tilt: f64) -> f64 {
    let s = tilt.sin() / n;
    1.0 / (1.0 - s * s).sqrt()
}
