//! Single-pass joint spectral amplitude of a type-II periodically poled
//! crystal: pump envelope times sinc phase matching on a square frequency
//! grid.

mod modes;
mod poling;

pub use modes::{mode_centers, ModeCenters, DEFAULT_EXCLUSION_RADIUS_THZ};
pub use poling::solve_poling_period;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{refractive_index, MaterialModel};
use crate::error::{Error, Result};
use crate::units::{bandwidth_nm_to_thz, nm_to_thz, thz_to_um, C_UM_THZ};

use std::f64::consts::{LN_2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeShape {
    #[default]
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpec {
    pub center_wavelength_nm: f64,
    /// Intensity FWHM.
    pub bandwidth_fwhm_nm: f64,
    pub envelope: EnvelopeShape,
}

impl PumpSpec {
    pub fn new(center_wavelength_nm: f64, bandwidth_fwhm_nm: f64) -> Result<Self> {
        if !(center_wavelength_nm.is_finite() && center_wavelength_nm > 0.0) {
            return Err(Error::config(format!(
                "pump center wavelength must be positive, got {center_wavelength_nm} nm"
            )));
        }
        // "≪ center" read as below 10 % of it
        if !(bandwidth_fwhm_nm.is_finite()
            && bandwidth_fwhm_nm > 0.0
            && bandwidth_fwhm_nm < 0.1 * center_wavelength_nm)
        {
            return Err(Error::config(format!(
                "pump bandwidth must be positive and much smaller than the center wavelength, got {bandwidth_fwhm_nm} nm"
            )));
        }
        Ok(PumpSpec {
            center_wavelength_nm,
            bandwidth_fwhm_nm,
            envelope: EnvelopeShape::Gaussian,
        })
    }

    pub fn center_frequency_thz(&self) -> f64 {
        nm_to_thz(self.center_wavelength_nm)
    }

    pub fn fwhm_thz(&self) -> f64 {
        bandwidth_nm_to_thz(self.center_wavelength_nm, self.bandwidth_fwhm_nm)
    }
}

/// Transform-limited pump amplitude at sum frequency `sum_thz`; peak 1 at the
/// pump center, `|α|² = 1/2` at ± half the intensity FWHM.
pub fn pump_envelope(pump: &PumpSpec, sum_thz: f64) -> Complex64 {
    let x = (sum_thz - pump.center_frequency_thz()) / pump.fwhm_thz();
    match pump.envelope {
        EnvelopeShape::Gaussian => Complex64::new((-2.0 * LN_2 * x * x).exp(), 0.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrystalSpec {
    pub material: MaterialModel,
    pub length_mm: f64,
    pub poling_period_um: f64,
    pub temperature_c: f64,
    pub pump_axis: String,
    pub signal_axis: String,
    pub idler_axis: String,
}

impl CrystalSpec {
    pub fn new(
        material: MaterialModel,
        length_mm: f64,
        poling_period_um: f64,
        temperature_c: f64,
        axes: [&str; 3],
    ) -> Result<Self> {
        let [pump_axis, signal_axis, idler_axis] = axes;
        if !(length_mm.is_finite() && length_mm > 0.0) {
            return Err(Error::config(format!(
                "crystal length must be positive, got {length_mm} mm"
            )));
        }
        if !(poling_period_um.is_finite() && poling_period_um > 0.0) {
            return Err(Error::config(format!(
                "poling period must be positive, got {poling_period_um} µm"
            )));
        }
        if !temperature_c.is_finite() {
            return Err(Error::config("crystal temperature is not finite"));
        }
        if signal_axis == idler_axis {
            return Err(Error::config(format!(
                "type-II crystal needs orthogonal signal and idler axes, both are {signal_axis:?}"
            )));
        }
        for ax in axes {
            material.axis(ax)?;
        }
        Ok(CrystalSpec {
            material,
            length_mm,
            poling_period_um,
            temperature_c,
            pump_axis: pump_axis.to_owned(),
            signal_axis: signal_axis.to_owned(),
            idler_axis: idler_axis.to_owned(),
        })
    }

    pub fn with_temperature(&self, temperature_c: f64) -> Self {
        CrystalSpec {
            temperature_c,
            ..self.clone()
        }
    }

    pub fn with_poling_period(&self, poling_period_um: f64) -> Self {
        CrystalSpec {
            poling_period_um,
            ..self.clone()
        }
    }

    /// Wave number `k = 2π n ν / c` in rad/µm along `axis`.
    fn wave_number(&self, axis: &str, frequency_thz: f64) -> Result<f64> {
        let lam = thz_to_um(frequency_thz);
        let n = refractive_index(&self.material, axis, lam, self.temperature_c)?;
        Ok(TAU * n * frequency_thz / C_UM_THZ)
    }
}

/// `Δk = k_p(ν1+ν2) − k_1(ν1) − k_2(ν2) + 2π/Λ` in rad/µm.
///
/// The grating vector enters with a plus sign: for KTP y → y + z the bare
/// mismatch `k_p − k_1 − k_2` is negative and the poling closes it.
pub fn phase_mismatch(crystal: &CrystalSpec, nu1_thz: f64, nu2_thz: f64) -> Result<f64> {
    let kp = crystal.wave_number(&crystal.pump_axis, nu1_thz + nu2_thz)?;
    let k1 = crystal.wave_number(&crystal.signal_axis, nu1_thz)?;
    let k2 = crystal.wave_number(&crystal.idler_axis, nu2_thz)?;
    Ok(kp - k1 - k2 + TAU / crystal.poling_period_um)
}

/// `sinc(ΔkL/2)·exp(iΔkL/2)` for a uniformly poled crystal of `length_mm`.
pub fn phase_matching_function(delta_k: f64, length_mm: f64) -> Complex64 {
    let x = 0.5 * delta_k * length_mm * 1e3;
    Complex64::from_polar(sinc(x), x)
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Square grid of absolute optical frequencies for the two photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub center_frequency_1: f64,
    pub center_frequency_2: f64,
    /// Full width per axis, THz.
    pub span: f64,
    pub points_per_axis: usize,
}

impl FrequencyGrid {
    pub const MIN_POINTS: usize = 64;

    pub fn new(center_1: f64, center_2: f64, span: f64, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < Self::MIN_POINTS || !points_per_axis.is_multiple_of(2) {
            return Err(Error::config(format!(
                "points_per_axis must be even and at least {}, got {points_per_axis}",
                Self::MIN_POINTS
            )));
        }
        if !(span.is_finite() && span > 0.0) {
            return Err(Error::config(format!(
                "grid span must be positive, got {span} THz"
            )));
        }
        if !(center_1.is_finite()
            && center_2.is_finite()
            && center_1 > 0.5 * span
            && center_2 > 0.5 * span)
        {
            return Err(Error::config(
                "grid centers must be positive and exceed half the span",
            ));
        }
        Ok(FrequencyGrid {
            center_frequency_1: center_1,
            center_frequency_2: center_2,
            span,
            points_per_axis,
        })
    }

    /// Grid centered on the degenerate frequency (half the pump frequency)
    /// on both axes.
    pub fn degenerate(pump: &PumpSpec, span: f64, points_per_axis: usize) -> Result<Self> {
        let c = 0.5 * pump.center_frequency_thz();
        Self::new(c, c, span, points_per_axis)
    }

    pub fn spacing(&self) -> f64 {
        self.span / (self.points_per_axis - 1) as f64
    }

    /// Shift of sample `k` from the axis center, THz.
    pub fn detuning(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * (self.points_per_axis - 1) as f64) * self.spacing()
    }

    pub fn frequency_1(&self, i: usize) -> f64 {
        self.center_frequency_1 + self.detuning(i)
    }

    pub fn frequency_2(&self, j: usize) -> f64 {
        self.center_frequency_2 + self.detuning(j)
    }

    pub fn is_swap_symmetric(&self) -> bool {
        self.center_frequency_1 == self.center_frequency_2
    }

    pub fn len(&self) -> usize {
        self.points_per_axis * self.points_per_axis
    }

    pub fn is_empty(&self) -> bool {
        self.points_per_axis == 0
    }
}

/// Complex amplitude on a [`FrequencyGrid`], stored row-major with the first
/// index along ω1.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude {
    grid: FrequencyGrid,
    amplitudes: Vec<Complex64>,
    normalized: bool,
}

impl JointSpectralAmplitude {
    pub fn from_fn(grid: FrequencyGrid, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let n = grid.points_per_axis;
        let mut amplitudes = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                amplitudes.push(f(i, j));
            }
        }
        JointSpectralAmplitude {
            grid,
            amplitudes,
            normalized: false,
        }
    }

    pub fn from_vec(grid: FrequencyGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::config(format!(
                "{} amplitudes for a {}x{} grid",
                amplitudes.len(),
                grid.points_per_axis,
                grid.points_per_axis
            )));
        }
        Ok(JointSpectralAmplitude {
            grid,
            amplitudes,
            normalized: false,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn dim(&self) -> usize {
        self.grid.points_per_axis
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.dim() + j]
    }

    /// `Σ|a|²·δν²`.
    pub fn norm_squared(&self) -> f64 {
        let d = self.grid.spacing();
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * d * d
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Scales to unit `Σ|a|²δν²`.
    pub fn normalize(mut self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::DegenerateState(
                "amplitude contains NaN or Inf".into(),
            ));
        }
        let norm = self.norm_squared().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateState("amplitude has zero norm".into()));
        }
        let inv = 1.0 / norm;
        self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        self.normalized = true;
        Ok(self)
    }

    /// Exchanges the two frequency arguments. A permutation, so the norm
    /// (and the normalized flag) carry over exactly.
    pub fn transposed(&self) -> Self {
        let n = self.dim();
        let mut out = Self::from_fn(self.grid, |i, j| self.amplitudes[j * n + i]);
        out.normalized = self.normalized;
        out
    }

    /// `|a|²` in storage order.
    pub fn intensity(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Which factors [`compute_jsa_with`] multiplies together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsaTerms {
    Full,
    /// Phase-matching factor replaced by 1.
    PumpOnly,
}

pub fn compute_jsa(
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    grid: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    compute_jsa_with(crystal, pump, grid, JsaTerms::Full)
}

pub fn compute_jsa_with(
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    grid: &FrequencyGrid,
    terms: JsaTerms,
) -> Result<JointSpectralAmplitude> {
    let n = grid.points_per_axis;
    // wave numbers depend on one index (photons) or on i + j (pump)
    let k1: Vec<f64> = (0..n)
        .map(|i| crystal.wave_number(&crystal.signal_axis, grid.frequency_1(i)))
        .collect::<Result<_>>()?;
    let k2: Vec<f64> = (0..n)
        .map(|j| crystal.wave_number(&crystal.idler_axis, grid.frequency_2(j)))
        .collect::<Result<_>>()?;
    let sums: Vec<f64> = (0..2 * n - 1)
        .map(|s| {
            grid.center_frequency_1
                + grid.center_frequency_2
                + (s as f64 - (n - 1) as f64) * grid.spacing()
        })
        .collect();
    let kp: Vec<f64> = sums
        .iter()
        .map(|&nu| crystal.wave_number(&crystal.pump_axis, nu))
        .collect::<Result<_>>()?;
    let envelope: Vec<Complex64> = sums.iter().map(|&nu| pump_envelope(pump, nu)).collect();
    let grating = TAU / crystal.poling_period_um;

    let jsa = JointSpectralAmplitude::from_fn(*grid, |i, j| {
        let alpha = envelope[i + j];
        match terms {
            JsaTerms::PumpOnly => alpha,
            JsaTerms::Full => {
                let dk = kp[i + j] - k1[i] - k2[j] + grating;
                alpha * phase_matching_function(dk, crystal.length_mm)
            }
        }
    });
    jsa.normalize()
}
