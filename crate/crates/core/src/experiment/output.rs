//! File formats: commented CSV and a single JSON document ("structured").
//! Both embed the resolved configuration and are byte-for-byte deterministic.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::{Experiment, OutputFormat, Simulation, SweepParam};
use crate::error::{Error, Result};
use crate::interference::{tsi, FringeStats, HomTrace};
use crate::spdc::ModeCenters;
use crate::state::PlateWavelengths;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub separation_thz: f64,
    pub beat_period_ps: f64,
    pub visibility: f64,
    pub duality_residual: f64,
    pub phi_rad: f64,
    /// NaN when φ was explicit.
    pub phi_unwrapped_rad: f64,
}

/// Plate phase at the configured tilt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub tilt_deg: f64,
    pub phi_rad: f64,
    pub phi_unwrapped_rad: f64,
    pub pump_nm: f64,
    pub signal_nm: f64,
    pub idler_nm: f64,
}

/// Plate tilt found for a target phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TiltReport {
    pub target_phi_rad: f64,
    pub tilt_deg: f64,
    pub achieved_phi_rad: f64,
    pub pump_nm: f64,
    pub signal_nm: f64,
    pub idler_nm: f64,
}

impl PhaseReport {
    pub fn new(tilt_deg: f64, phi: f64, unwrapped: f64, w: &PlateWavelengths) -> Self {
        PhaseReport {
            tilt_deg,
            phi_rad: phi,
            phi_unwrapped_rad: unwrapped,
            pump_nm: w.pump_nm,
            signal_nm: w.photons_nm.0,
            idler_nm: w.photons_nm.1,
        }
    }
}

impl TiltReport {
    pub fn new(target: f64, tilt_deg: f64, achieved: f64, w: &PlateWavelengths) -> Self {
        TiltReport {
            target_phi_rad: target,
            tilt_deg,
            achieved_phi_rad: achieved,
            pump_nm: w.pump_nm,
            signal_nm: w.photons_nm.0,
            idler_nm: w.photons_nm.1,
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source: e,
    }
}

fn json_out(w: &mut dyn Write, doc: &Value) -> Result<()> {
    serde_json::to_writer(&mut *w, doc).map_err(|e| io(e.into()))?;
    writeln!(w).map_err(io)
}

fn header(w: &mut dyn Write, verb: &str, exp: &Experiment, extra: &[(&str, f64)]) -> Result<()> {
    writeln!(w, "# biphoton {verb} {}", env!("CARGO_PKG_VERSION")).map_err(io)?;
    writeln!(w, "# poling_period_um = {}", exp.crystal.poling_period_um).map_err(io)?;
    for (k, v) in extra {
        writeln!(w, "# {k} = {v}").map_err(io)?;
    }
    writeln!(w, "# config:").map_err(io)?;
    for line in exp.config.to_toml_string().lines() {
        if line.is_empty() {
            writeln!(w, "#").map_err(io)?;
        } else {
            writeln!(w, "#   {line}").map_err(io)?;
        }
    }
    Ok(())
}

fn resolved(exp: &Experiment) -> Value {
    json!({
        "poling_period_um": exp.crystal.poling_period_um,
        "grid_center_frequency_1_thz": exp.grid.center_frequency_1,
        "grid_center_frequency_2_thz": exp.grid.center_frequency_2,
        "grid_spacing_thz": exp.grid.spacing(),
    })
}

fn modes_json(m: &ModeCenters) -> Value {
    match m {
        ModeCenters::Single { peak } => json!({ "count": 1, "first": [peak.0, peak.1] }),
        ModeCenters::Pair {
            first,
            second,
            separation,
        } => json!({
            "count": 2,
            "first": [first.0, first.1],
            "second": [second.0, second.1],
            "separation_thz": separation,
        }),
    }
}

/// Two-photon spectral intensity on the detuning grid, row-major in Δν1.
pub fn write_tsi(
    w: &mut dyn Write,
    exp: &Experiment,
    sim: &Simulation,
    format: OutputFormat,
) -> Result<()> {
    let intensity = tsi(&sim.state)?;
    let g = &exp.grid;
    let n = g.points_per_axis;
    match format {
        OutputFormat::Csv => {
            header(
                w,
                "tsi",
                exp,
                &[
                    ("phi_rad", sim.phi),
                    ("mode_separation_thz", sim.modes.separation()),
                ],
            )?;
            writeln!(w, "# dnu1_THz, dnu2_THz, intensity").map_err(io)?;
            for i in 0..n {
                let d1 = g.detuning(i);
                for j in 0..n {
                    writeln!(w, "{d1},{},{}", g.detuning(j), intensity[i * n + j]).map_err(io)?;
                }
            }
            Ok(())
        }
        OutputFormat::Structured => {
            let rows: Vec<&[f64]> = intensity.chunks(n).collect();
            let detuning: Vec<f64> = (0..n).map(|k| g.detuning(k)).collect();
            json_out(
                w,
                &json!({
                    "command": "tsi",
                    "config": exp.config,
                    "resolved": resolved(exp),
                    "phi_rad": sim.phi,
                    "modes": modes_json(&sim.modes),
                    "dnu_thz": detuning,
                    "intensity": rows,
                }),
            )
        }
    }
}

pub fn write_hom(
    w: &mut dyn Write,
    exp: &Experiment,
    sim: &Simulation,
    trace: &HomTrace,
    stats: &FringeStats,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            header(
                w,
                "hom",
                exp,
                &[
                    ("phi_rad", sim.phi),
                    ("mode_separation_thz", sim.modes.separation()),
                    ("visibility", stats.visibility),
                    ("beat_period_ps", stats.beat_period),
                    ("duality_residual", stats.duality_residual),
                ],
            )?;
            writeln!(w, "# tau_ps, pc").map_err(io)?;
            for (t, p) in trace.delays.iter().zip(&trace.coincidence) {
                writeln!(w, "{t},{p}").map_err(io)?;
            }
            Ok(())
        }
        OutputFormat::Structured => json_out(
            w,
            &json!({
                "command": "hom",
                "config": exp.config,
                "resolved": resolved(exp),
                "phi_rad": sim.phi,
                "modes": modes_json(&sim.modes),
                "summary": stats,
                "tau_ps": trace.delays,
                "pc": trace.coincidence,
            }),
        ),
    }
}

pub fn write_sweep(
    w: &mut dyn Write,
    exp: &Experiment,
    param: SweepParam,
    rows: &[SweepRow],
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            header(w, "sweep", exp, &[])?;
            writeln!(w, "# parameter = {param}").map_err(io)?;
            writeln!(
                w,
                "# value, separation_thz, beat_period_ps, visibility, duality_residual, phi_rad, phi_unwrapped_rad"
            )
            .map_err(io)?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.value,
                    r.separation_thz,
                    r.beat_period_ps,
                    r.visibility,
                    r.duality_residual,
                    r.phi_rad,
                    r.phi_unwrapped_rad
                )
                .map_err(io)?;
            }
            Ok(())
        }
        OutputFormat::Structured => json_out(
            w,
            &json!({
                "command": "sweep",
                "config": exp.config,
                "resolved": resolved(exp),
                "parameter": param.to_string(),
                "rows": rows,
            }),
        ),
    }
}

pub fn write_phase(
    w: &mut dyn Write,
    exp: &Experiment,
    r: &PhaseReport,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            header(w, "phase", exp, &[])?;
            writeln!(
                w,
                "# tilt_deg, phi_rad, phi_unwrapped_rad, pump_nm, signal_nm, idler_nm"
            )
            .map_err(io)?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.tilt_deg, r.phi_rad, r.phi_unwrapped_rad, r.pump_nm, r.signal_nm, r.idler_nm
            )
            .map_err(io)
        }
        OutputFormat::Structured => json_out(
            w,
            &json!({ "command": "phase", "config": exp.config, "resolved": resolved(exp), "phase": r }),
        ),
    }
}

pub fn write_tilt(
    w: &mut dyn Write,
    exp: &Experiment,
    r: &TiltReport,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            header(w, "phase", exp, &[])?;
            writeln!(
                w,
                "# target_phi_rad, tilt_deg, achieved_phi_rad, pump_nm, signal_nm, idler_nm"
            )
            .map_err(io)?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.target_phi_rad,
                r.tilt_deg,
                r.achieved_phi_rad,
                r.pump_nm,
                r.signal_nm,
                r.idler_nm
            )
            .map_err(io)
        }
        OutputFormat::Structured => json_out(
            w,
            &json!({ "command": "phase", "config": exp.config, "resolved": resolved(exp), "tilt": r }),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ExperimentConfig;
    use std::path::Path;

    fn small() -> Experiment {
        let cfg = ExperimentConfig::from_toml_str(
            "[grid]\npoints_per_axis = 64\n[delays]\ncount = 11\n[plate]\nphi = \"pi\"\n",
        )
        .unwrap();
        Experiment::resolve(&cfg, Path::new(".")).unwrap()
    }

    #[test]
    fn hom_csv_layout() {
        let e = small();
        let (sim, trace, stats) = e.measure(None).unwrap();
        let mut buf = Vec::new();
        write_hom(&mut buf, &e, &sim, &trace, &stats, OutputFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 11);
        assert!(text.contains("# tau_ps, pc\n"));
        // the embedded config parses back
        let cfg: String = text
            .lines()
            .skip_while(|l| *l != "# config:")
            .skip(1)
            .take_while(|l| l.starts_with('#') && *l != "# tau_ps, pc" && !l.starts_with("# tau"))
            .map(|l| {
                l.trim_start_matches('#')
                    .trim_start_matches("   ")
                    .to_owned()
                    + "\n"
            })
            .collect();
        assert_eq!(ExperimentConfig::from_toml_str(&cfg).unwrap(), e.config);
    }

    #[test]
    fn tsi_structured_is_json() {
        let e = small();
        let sim = e.simulate().unwrap();
        let mut buf = Vec::new();
        write_tsi(&mut buf, &e, &sim, OutputFormat::Structured).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["intensity"].as_array().unwrap().len(), 64);
        assert_eq!(v["config"]["grid"]["points_per_axis"], 64);
    }
}
