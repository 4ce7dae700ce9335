//! Config-driven pipeline behind the command-line verbs.

mod config;
mod noise;
mod output;

use std::path::Path;

pub use config::{
    resolve_material, CrystalConfig, DelayConfig, ExperimentConfig, GridConfig, NoiseConfig,
    OutputConfig, OutputFormat, Phase, PlateConfig, PumpConfig,
};
pub use noise::poisson_noise;
pub use output::{
    write_hom, write_phase, write_sweep, write_tilt, write_tsi, PhaseReport, SweepRow, TiltReport,
};

use crate::error::{Error, Result};
use crate::interference::{delay_axis, fringe_stats, hom_trace, FringeStats, HomTrace};
use crate::spdc::{
    compute_jsa, mode_centers, solve_poling_period, CrystalSpec, FrequencyGrid,
    JointSpectralAmplitude, ModeCenters, PumpSpec,
};
use crate::state::{
    phase_from_tilt, superpose, tilt_for_phase, unwrapped_phase, PhasePlateSpec, PlateWavelengths,
};
use crate::units::{wrap_phase, C_NM_THZ};

/// A configuration resolved into physical objects.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub crystal: CrystalSpec,
    pub pump: PumpSpec,
    pub grid: FrequencyGrid,
    pub plate: PhasePlateSpec,
    /// Overrides the plate when set.
    pub explicit_phi: Option<f64>,
    pub delays: Vec<f64>,
}

/// One simulated state and what was measured on it.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub single_pass: JointSpectralAmplitude,
    /// Modes of the superposed state.
    pub modes: ModeCenters,
    pub wavelengths: PlateWavelengths,
    pub phi: f64,
    /// Continuous plate phase; `None` when φ was given explicitly.
    pub phi_unwrapped: Option<f64>,
    pub state: JointSpectralAmplitude,
}

#[derive(Debug, Clone)]
pub struct HomSummary {
    pub phi: f64,
    /// THz.
    pub separation: f64,
    pub trace: HomTrace,
    pub stats: FringeStats,
}

impl Experiment {
    /// Material paths in `config` are resolved against `base_dir`.
    pub fn resolve(config: &ExperimentConfig, base_dir: &Path) -> Result<Self> {
        let c = &config.crystal;
        let material = resolve_material(&c.material, base_dir)?;
        let pump = PumpSpec::new(
            config.pump.center_wavelength_nm,
            config.pump.bandwidth_fwhm_nm,
        )?;
        let axes = [
            c.pump_axis.as_str(),
            c.signal_axis.as_str(),
            c.idler_axis.as_str(),
        ];
        // placeholder period, replaced below
        let template = CrystalSpec::new(material, c.length_mm, 1.0, c.temperature_c, axes)?;
        let period = match c.poling_period_um {
            Some(p) => p,
            None => solve_poling_period(
                &template,
                2.0 * config.pump.center_wavelength_nm,
                c.reference_temperature_c,
            )?,
        };
        let crystal = CrystalSpec::new(
            template.material,
            c.length_mm,
            period,
            c.temperature_c,
            axes,
        )?;

        let g = &config.grid;
        let half = 0.5 * pump.center_frequency_thz();
        let grid = FrequencyGrid::new(
            g.center_frequency_1_thz.unwrap_or(half),
            g.center_frequency_2_thz.unwrap_or(half),
            g.span_thz,
            g.points_per_axis,
        )?;
        if !(g.peak_exclusion_thz.is_finite() && g.peak_exclusion_thz > 0.0) {
            return Err(Error::config(format!(
                "peak_exclusion_thz must be positive, got {}",
                g.peak_exclusion_thz
            )));
        }

        let p = &config.plate;
        let plate = PhasePlateSpec::new(
            resolve_material(&p.material, base_dir)?,
            p.thickness_mm,
            p.tilt_deg.to_radians(),
            p.phi0.0,
        )?;
        let delays = delay_axis(
            config.delays.min_ps,
            config.delays.max_ps,
            config.delays.count,
        )?;
        if let Some(n) = &config.noise {
            if n.mean_counts_at_peak == 0 {
                return Err(Error::config("noise mean_counts_at_peak must be positive"));
            }
        }

        Ok(Experiment {
            config: config.clone(),
            crystal,
            pump,
            grid,
            plate,
            explicit_phi: p.phi.map(|v| v.0),
            delays,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let config = ExperimentConfig::from_path(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::resolve(&config, base)
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.config.grid.peak_exclusion_thz
    }

    pub fn with_temperature(&self, temperature_c: f64) -> Self {
        let mut e = self.clone();
        e.crystal = e.crystal.with_temperature(temperature_c);
        e.config.crystal.temperature_c = temperature_c;
        e
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        let mut e = self.clone();
        e.explicit_phi = Some(phi);
        e.config.plate.phi = Some(Phase(phi));
        e
    }

    /// Plate tilt in radians; clears any explicit φ.
    pub fn with_tilt(&self, tilt: f64) -> Result<Self> {
        let mut e = self.clone();
        e.plate = PhasePlateSpec::new(
            e.plate.material.clone(),
            e.plate.thickness_mm,
            tilt,
            e.plate.phi0,
        )?;
        e.explicit_phi = None;
        e.config.plate.phi = None;
        e.config.plate.tilt_deg = tilt.to_degrees();
        Ok(e)
    }

    pub fn single_pass(&self) -> Result<JointSpectralAmplitude> {
        compute_jsa(&self.crystal, &self.pump, &self.grid)
    }

    /// Wavelengths at the strongest single-pass mode.
    pub fn mode_wavelengths(&self, single_pass: &JointSpectralAmplitude) -> PlateWavelengths {
        let peak = match mode_centers(single_pass, self.exclusion_radius()) {
            ModeCenters::Single { peak } => peak,
            ModeCenters::Pair { first, .. } => first,
        };
        PlateWavelengths {
            pump_nm: self.pump.center_wavelength_nm,
            photons_nm: (
                C_NM_THZ / (self.grid.center_frequency_1 + peak.0),
                C_NM_THZ / (self.grid.center_frequency_2 + peak.1),
            ),
        }
    }

    pub fn simulate(&self) -> Result<Simulation> {
        let single_pass = self.single_pass()?;
        let wavelengths = self.mode_wavelengths(&single_pass);
        let (phi, phi_unwrapped) = match self.explicit_phi {
            Some(phi) => (wrap_phase(phi), None),
            None => (
                phase_from_tilt(&self.plate, &wavelengths)?,
                Some(unwrapped_phase(&self.plate, &wavelengths)?),
            ),
        };
        let state = superpose(&single_pass, phi)?.normalize()?;
        let modes = mode_centers(&state, self.exclusion_radius());
        Ok(Simulation {
            single_pass,
            modes,
            wavelengths,
            phi,
            phi_unwrapped,
            state,
        })
    }

    /// The HOM trace of `sim.state`, with the configured noise applied.
    pub fn hom(&self, sim: &Simulation, seed_override: Option<u64>) -> Result<HomTrace> {
        let mut trace = hom_trace(&sim.state, &self.delays)?;
        trace.metadata.phi = sim.phi;
        trace.metadata.temperature_c = Some(self.crystal.temperature_c);
        if let Some(n) = &self.config.noise {
            let seed = seed_override.unwrap_or(n.seed);
            trace.coincidence = poisson_noise(&trace.coincidence, n.mean_counts_at_peak, seed);
        }
        Ok(trace)
    }

    /// The full measurement at this configuration.
    pub fn measure(
        &self,
        seed_override: Option<u64>,
    ) -> Result<(Simulation, HomTrace, FringeStats)> {
        let sim = self.simulate()?;
        let trace = self.hom(&sim, seed_override)?;
        let stats = fringe_stats(&trace, sim.modes.separation())?;
        Ok((sim, trace, stats))
    }

    /// The HOM trace with its fringe statistics and mode separation.
    pub fn summary(&self, seed_override: Option<u64>) -> Result<HomSummary> {
        let (sim, trace, stats) = self.measure(seed_override)?;
        Ok(HomSummary {
            phi: sim.phi,
            separation: sim.modes.separation(),
            trace,
            stats,
        })
    }

    /// Plate tilt (radians) realising `target_phi`, at the current mode wavelengths.
    pub fn tilt_for(&self, target_phi: f64) -> Result<(f64, PlateWavelengths)> {
        let sp = self.single_pass()?;
        let w = self.mode_wavelengths(&sp);
        Ok((tilt_for_phase(&self.plate, target_phi, &w)?, w))
    }
}

/// Parameter scanned by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Crystal temperature, °C.
    Temperature,
    /// Explicit relative phase, rad.
    Phi,
    /// Plate tilt, degrees.
    Tilt,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "temperature" | "T" => Ok(SweepParam::Temperature),
            "phi" => Ok(SweepParam::Phi),
            "tilt" => Ok(SweepParam::Tilt),
            other => Err(Error::config(format!(
                "unknown sweep parameter {other:?} (temperature, phi, tilt)"
            ))),
        }
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepParam::Temperature => "temperature",
            SweepParam::Phi => "phi",
            SweepParam::Tilt => "tilt",
        })
    }
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || steps == 0 {
        return Err(Error::config("sweep needs finite bounds and steps ≥ 1"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect())
}

pub fn sweep(
    experiment: &Experiment,
    param: SweepParam,
    values: &[f64],
    seed_override: Option<u64>,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let e = match param {
                SweepParam::Temperature => experiment.with_temperature(v),
                SweepParam::Phi => experiment.with_phi(v),
                SweepParam::Tilt => experiment.with_tilt(v.to_radians())?,
            };
            let (sim, _, stats) = e.measure(seed_override)?;
            Ok(SweepRow {
                value: v,
                separation_thz: sim.modes.separation(),
                beat_period_ps: stats.beat_period,
                visibility: stats.visibility,
                duality_residual: stats.duality_residual,
                phi_rad: sim.phi,
                phi_unwrapped_rad: sim.phi_unwrapped.unwrap_or(f64::NAN),
            })
        })
        .collect()
}
