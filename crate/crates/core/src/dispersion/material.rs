//! Material dispersion models and their on-disk key/value format.
//!
//! A material file is TOML:
//!
//! ```toml
//! name = "KTP"
//! format_version = 2
//! reference_temperature = 25.0          # °C, thermo-optic terms vanish here
//! valid_wavelength_range = [0.43, 1.7]  # µm
//!
//! [axes.y]
//! sellmeier_form = "pole-offset"
//! sellmeier = [3.45018, 0.04341, 0.04597, 16.98825, 39.43799]
//! thermo_optic = [[5.425e-6, 5.154e-6, -4.063e-6, 1.997e-6]]
//! ```
//!
//! `thermo_optic[p][m]` multiplies `(T - T_ref)^(p+1) / λ^m`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const KTP_TOML: &str = include_str!("../../materials/ktp.toml");
const BK7_TOML: &str = include_str!("../../materials/bk7.toml");

/// Names accepted by [`MaterialModel::builtin`].
pub const BUILTIN_MATERIALS: &[&str] = &["ktp", "bk7"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SellmeierForm {
    /// `n² = 1 + Σ Bᵢ λ² / (λ² − Cᵢ)`, coefficients `[B₁..Bₖ, C₁..Cₖ]`.
    #[serde(rename = "sellmeier")]
    Sellmeier,
    /// `n² = A + Σ Bᵢ / (λ² − Cᵢ)`, coefficients `[A, B₁, C₁, B₂, C₂, ..]`.
    #[serde(rename = "pole-offset")]
    PoleOffset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisDispersion {
    pub form: SellmeierForm,
    pub sellmeier: Vec<f64>,
    pub thermo_optic: Vec<Vec<f64>>,
}

impl AxisDispersion {
    /// Room-temperature (reference) index from the Sellmeier term alone.
    pub fn sellmeier_index(&self, wavelength_um: f64) -> f64 {
        let l2 = wavelength_um * wavelength_um;
        let c = &self.sellmeier;
        let n2 = match self.form {
            SellmeierForm::Sellmeier => {
                let k = c.len() / 2;
                1.0 + (0..k).map(|i| c[i] * l2 / (l2 - c[k + i])).sum::<f64>()
            }
            SellmeierForm::PoleOffset => {
                c[0] + c[1..]
                    .chunks_exact(2)
                    .map(|p| p[0] / (l2 - p[1]))
                    .sum::<f64>()
            }
        };
        n2.sqrt()
    }

    /// Index change relative to the reference temperature.
    pub fn thermo_optic_shift(&self, wavelength_um: f64, delta_t: f64) -> f64 {
        let inv = 1.0 / wavelength_um;
        let mut power = delta_t;
        let mut total = 0.0;
        for row in &self.thermo_optic {
            // Horner in 1/λ
            let poly = row.iter().rev().fold(0.0, |acc, &c| acc * inv + c);
            total += poly * power;
            power *= delta_t;
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub name: String,
    pub format_version: u32,
    /// °C
    pub reference_temperature: f64,
    /// (min, max) in µm
    pub valid_wavelength_range: (f64, f64),
    pub axes: BTreeMap<String, AxisDispersion>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    #[serde(default = "one")]
    format_version: u32,
    reference_temperature: f64,
    valid_wavelength_range: [f64; 2],
    axes: BTreeMap<String, AxisFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisFile {
    sellmeier_form: SellmeierForm,
    sellmeier: Vec<f64>,
    #[serde(default)]
    thermo_optic: Vec<Vec<f64>>,
}

fn one() -> u32 {
    1
}

impl MaterialModel {
    /// Parses and validates a material document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: MaterialFile =
            toml::from_str(text).map_err(|e| Error::config(format!("material file: {e}")))?;
        Self::from_file_repr(file)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MaterialNotFound(path.display().to_string()),
            _ => Error::Io {
                path: path.display().to_string(),
                source: e,
            },
        })?;
        Self::from_toml_str(&text)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ktp" => Self::from_toml_str(KTP_TOML),
            "bk7" => Self::from_toml_str(BK7_TOML),
            other => Err(Error::MaterialNotFound(format!(
                "{other:?} is not a built-in material (known: {})",
                BUILTIN_MATERIALS.join(", ")
            ))),
        }
    }

    /// Raw text of a built-in material file.
    pub fn builtin_source(name: &str) -> Option<&'static str> {
        match name.to_ascii_lowercase().as_str() {
            "ktp" => Some(KTP_TOML),
            "bk7" => Some(BK7_TOML),
            _ => None,
        }
    }

    pub fn axis(&self, axis: &str) -> Result<&AxisDispersion> {
        self.axes.get(axis).ok_or_else(|| {
            Error::config(format!(
                "material {} has no axis {axis:?} (axes: {})",
                self.name,
                self.axes.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn check_wavelength(&self, wavelength_um: f64) -> Result<()> {
        let (lo, hi) = self.valid_wavelength_range;
        if wavelength_um.is_finite() && (lo..=hi).contains(&wavelength_um) {
            Ok(())
        } else {
            Err(Error::range(format!(
                "wavelength {wavelength_um} µm outside the valid interval [{lo}, {hi}] µm of {}",
                self.name
            )))
        }
    }

    fn from_file_repr(file: MaterialFile) -> Result<Self> {
        let [lo, hi] = file.valid_wavelength_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::config(format!(
                "material {}: invalid wavelength range [{lo}, {hi}]",
                file.name
            )));
        }
        if !file.reference_temperature.is_finite() {
            return Err(Error::config(format!(
                "material {}: reference temperature is not finite",
                file.name
            )));
        }
        if file.axes.is_empty() {
            return Err(Error::config(format!("material {}: no axes", file.name)));
        }
        let mut axes = BTreeMap::new();
        for (id, a) in file.axes {
            let n = a.sellmeier.len();
            let shape_ok = match a.sellmeier_form {
                SellmeierForm::Sellmeier => n >= 2 && n % 2 == 0,
                SellmeierForm::PoleOffset => n >= 1 && n % 2 == 1,
            };
            if !shape_ok {
                return Err(Error::config(format!(
                    "material {}, axis {id}: {n} coefficients do not fit form {:?}",
                    file.name, a.sellmeier_form
                )));
            }
            let all_finite = a
                .sellmeier
                .iter()
                .chain(a.thermo_optic.iter().flatten())
                .all(|c| c.is_finite());
            if !all_finite {
                return Err(Error::config(format!(
                    "material {}, axis {id}: non-finite coefficient",
                    file.name
                )));
            }
            axes.insert(
                id,
                AxisDispersion {
                    form: a.sellmeier_form,
                    sellmeier: a.sellmeier,
                    thermo_optic: a.thermo_optic,
                },
            );
        }
        let model = MaterialModel {
            name: file.name,
            format_version: file.format_version,
            reference_temperature: file.reference_temperature,
            valid_wavelength_range: (lo, hi),
            axes,
        };
        model.check_physical()?;
        Ok(model)
    }

    /// Samples each axis across the valid range at the reference temperature
    /// and rejects models whose index is not finite and > 1.
    fn check_physical(&self) -> Result<()> {
        let (lo, hi) = self.valid_wavelength_range;
        const SAMPLES: usize = 257;
        for (id, axis) in &self.axes {
            for k in 0..SAMPLES {
                let lam = lo + (hi - lo) * k as f64 / (SAMPLES - 1) as f64;
                let n = axis.sellmeier_index(lam);
                if !(n.is_finite() && n > 1.0) {
                    return Err(Error::config(format!(
                        "material {}, axis {id}: index {n} at {lam} µm is not a physical value",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}
