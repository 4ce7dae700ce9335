//! Experiment configuration: a TOML document with sections `crystal`,
//! `pump`, `grid`, `plate`, `delays`, `noise` and `output`. Every field has a
//! default, so an empty document is a valid configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dispersion::MaterialModel;
use crate::error::{Error, Result};
use crate::spdc::{EnvelopeShape, DEFAULT_EXCLUSION_RADIUS_THZ};
use crate::units::parse_phase;

/// A phase in radians; reads plain numbers or strings such as `"1.1pi"`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Phase(pub f64);

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Float(f64),
            Int(i64),
            Text(String),
        }
        let phi = match Raw::deserialize(d)? {
            Raw::Float(v) => v,
            Raw::Int(v) => v as f64,
            Raw::Text(t) => parse_phase(&t).map_err(serde::de::Error::custom)?,
        };
        if !phi.is_finite() {
            return Err(serde::de::Error::custom("phase is not finite"));
        }
        Ok(Phase(phi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Structured,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Structured => "structured",
        })
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "structured" | "json" => Ok(OutputFormat::Structured),
            other => Err(Error::config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrystalConfig {
    pub material: String,
    pub length_mm: f64,
    pub temperature_c: f64,
    /// Temperature at which emission is degenerate; fixes the poling period
    /// unless `poling_period_um` is given.
    pub reference_temperature_c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poling_period_um: Option<f64>,
    pub pump_axis: String,
    pub signal_axis: String,
    pub idler_axis: String,
}

impl Default for CrystalConfig {
    fn default() -> Self {
        CrystalConfig {
            material: "ktp".into(),
            length_mm: 60.0,
            temperature_c: 65.0,
            reference_temperature_c: 25.0,
            poling_period_um: None,
            pump_axis: "y".into(),
            signal_axis: "y".into(),
            idler_axis: "z".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpConfig {
    pub center_wavelength_nm: f64,
    pub bandwidth_fwhm_nm: f64,
    pub envelope: EnvelopeShape,
}

impl Default for PumpConfig {
    fn default() -> Self {
        PumpConfig {
            center_wavelength_nm: 792.0,
            bandwidth_fwhm_nm: 0.2,
            envelope: EnvelopeShape::Gaussian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub span_thz: f64,
    pub points_per_axis: usize,
    /// Defaults to half the pump frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_frequency_1_thz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_frequency_2_thz: Option<f64>,
    /// Exclusion radius around the strongest mode when looking for the second.
    pub peak_exclusion_thz: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            span_thz: 3.0,
            points_per_axis: 512,
            center_frequency_1_thz: None,
            center_frequency_2_thz: None,
            peak_exclusion_thz: DEFAULT_EXCLUSION_RADIUS_THZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlateConfig {
    pub material: String,
    pub thickness_mm: f64,
    /// Degrees from the plate normal.
    pub tilt_deg: f64,
    pub phi0: Phase,
    /// Explicit relative phase; when set the plate is not consulted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Phase>,
}

impl Default for PlateConfig {
    fn default() -> Self {
        PlateConfig {
            material: "bk7".into(),
            thickness_mm: 1.0,
            tilt_deg: 0.0,
            phi0: Phase(0.0),
            phi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DelayConfig {
    pub min_ps: f64,
    pub max_ps: f64,
    pub count: usize,
}

impl Default for DelayConfig {
    fn default() -> Self {
        DelayConfig {
            min_ps: -25.0,
            max_ps: 25.0,
            count: 501,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Mean counts at the 0.5 coincidence baseline.
    pub mean_counts_at_peak: u64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            mean_counts_at_peak: 400,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub crystal: CrystalConfig,
    pub pump: PumpConfig,
    pub grid: GridConfig,
    pub plate: PlateConfig,
    pub delays: DelayConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("config: {e}")))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_toml_str(&text)
    }
}

/// Resolves a material reference: a bare name picks a built-in file, a
/// path (with a separator or `.toml` suffix) is read relative to `base_dir`.
pub fn resolve_material(reference: &str, base_dir: &Path) -> Result<MaterialModel> {
    let is_path =
        reference.contains('/') || reference.contains('\\') || reference.ends_with(".toml");
    if is_path {
        let p = PathBuf::from(reference);
        let full = if p.is_absolute() { p } else { base_dir.join(p) };
        MaterialModel::from_path(&full)
    } else {
        MaterialModel::builtin(reference)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_document_gives_defaults() {
        let c = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!(c.grid.points_per_axis, 512);
        assert_eq!(c.delays.count, 501);
        assert!(c.noise.is_none());
    }

    #[test]
    fn phase_accepts_pi_multiples() {
        let c = ExperimentConfig::from_toml_str("[plate]\nphi = \"1.1pi\"\nphi0 = 0.5\n").unwrap();
        assert!((c.plate.phi.unwrap().0 - 1.1 * PI).abs() < 1e-15);
        assert_eq!(c.plate.phi0.0, 0.5);
        let c = ExperimentConfig::from_toml_str("[plate]\nphi = 1\n").unwrap();
        assert_eq!(c.plate.phi.unwrap().0, 1.0);
        assert!(ExperimentConfig::from_toml_str("[plate]\nphi = \"lots\"\n").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml_str("[crystal]\ncolour = 1\n").is_err());
        assert!(ExperimentConfig::from_toml_str("[laser]\n").is_err());
        assert!(ExperimentConfig::from_toml_str("[output]\nformat = \"xml\"\n").is_err());
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let text = r#"
[crystal]
temperature_c = 80.0
poling_period_um = 44.95

[grid]
points_per_axis = 64
center_frequency_1_thz = 189.3

[plate]
phi = "0.6pi"

[noise]
mean_counts_at_peak = 400
seed = 7

[output]
format = "structured"
"#;
        let a = ExperimentConfig::from_toml_str(text).unwrap();
        let b = ExperimentConfig::from_toml_str(&a.to_toml_string()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn material_resolution() {
        let base = Path::new("/nonexistent");
        assert!(resolve_material("ktp", base).is_ok());
        assert!(matches!(
            resolve_material("materials/none.toml", base),
            Err(Error::MaterialNotFound(_))
        ));
        assert!(matches!(
            resolve_material("unobtainium", base),
            Err(Error::MaterialNotFound(_))
        ));
    }
}
