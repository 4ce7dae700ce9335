//! Bidirectional-pump superposition `S = s(ω1, ω2) + e^{iφ} s(ω2, ω1)` and the
//! tilt → φ map of the dispersive plate.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::dispersion::{internal_path_factor, refractive_index, MaterialModel};
use crate::error::{Error, Result};
use crate::spdc::JointSpectralAmplitude;
use crate::units::wrap_phase;

/// Largest tilt [`tilt_for_phase`] will consider.
pub const MAX_TILT_RAD: f64 = 80.0 * std::f64::consts::PI / 180.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePlateSpec {
    pub material: MaterialModel,
    /// Name of the plate material's axis (glass: its only axis).
    pub axis: String,
    pub thickness_mm: f64,
    /// Radians from the plate normal.
    pub tilt: f64,
    /// Calibration offset added to the plate phase; absorbs the untilted
    /// plate and the rest of the interferometer path.
    pub phi0: f64,
}

impl PhasePlateSpec {
    pub fn new(material: MaterialModel, thickness_mm: f64, tilt: f64, phi0: f64) -> Result<Self> {
        if !(thickness_mm.is_finite() && thickness_mm >= 0.0) {
            return Err(Error::config(format!(
                "plate thickness must be ≥ 0, got {thickness_mm} mm"
            )));
        }
        if !(tilt.is_finite() && tilt.abs() < FRAC_PI_2) {
            return Err(Error::config(format!(
                "plate tilt must satisfy |tilt| < π/2, got {tilt} rad"
            )));
        }
        if !phi0.is_finite() {
            return Err(Error::config("plate phi0 is not finite"));
        }
        let axis = material
            .axes
            .keys()
            .next()
            .cloned()
            .ok_or_else(|| Error::config("plate material has no axis"))?;
        Ok(PhasePlateSpec {
            material,
            axis,
            thickness_mm,
            tilt,
            phi0,
        })
    }

    pub fn with_tilt(&self, tilt: f64) -> Self {
        PhasePlateSpec {
            tilt,
            ..self.clone()
        }
    }
}

/// Where the relative phase comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSource {
    Explicit,
    FromPlate(PhasePlateSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionSpec {
    phi: f64,
    pub source: PhaseSource,
}

impl SuperpositionSpec {
    pub fn explicit(phi: f64) -> Self {
        SuperpositionSpec {
            phi: wrap_phase(phi),
            source: PhaseSource::Explicit,
        }
    }

    pub fn from_plate(plate: PhasePlateSpec, wavelengths: &PlateWavelengths) -> Result<Self> {
        let phi = phase_from_tilt(&plate, wavelengths)?;
        Ok(SuperpositionSpec {
            phi,
            source: PhaseSource::FromPlate(plate),
        })
    }

    /// In [0, 2π).
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Vacuum wavelengths (nm) at which the plate phase is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateWavelengths {
    pub pump_nm: f64,
    pub photons_nm: (f64, f64),
}

impl PlateWavelengths {
    pub fn degenerate(pump_nm: f64) -> Self {
        PlateWavelengths {
            pump_nm,
            photons_nm: (2.0 * pump_nm, 2.0 * pump_nm),
        }
    }
}

fn check_swap_grid(jsa: &JointSpectralAmplitude) -> Result<()> {
    let g = jsa.grid();
    if g.is_swap_symmetric() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "exchange needs equal grid centers, got {} and {} THz",
            g.center_frequency_1, g.center_frequency_2
        )))
    }
}

/// `s(ω1, ω2) → s(ω2, ω1)`: transpose across the main diagonal.
pub fn swap(jsa: &JointSpectralAmplitude) -> Result<JointSpectralAmplitude> {
    check_swap_grid(jsa)?;
    Ok(jsa.transposed())
}

/// `S = s + e^{iφ}·swap(s)`, renormalized.
pub fn superpose(s: &JointSpectralAmplitude, phi: f64) -> Result<JointSpectralAmplitude> {
    check_swap_grid(s)?;
    let n = s.dim();
    let a = s.amplitudes();
    let rot = Complex64::from_polar(1.0, wrap_phase(phi));
    let out = JointSpectralAmplitude::from_fn(*s.grid(), |i, j| a[i * n + j] + rot * a[j * n + i]);
    let input = s.norm_squared();
    if !(out.norm_squared() > 1e-24 * input) {
        return Err(Error::DegenerateState(format!(
            "s + e^(i·{phi:.6}) s^T vanishes: complete destructive interference"
        )));
    }
    out.normalize()
}

/// Double-pass plate phase exactly as accumulated by the pump minus the two
/// photons, `2ℓ_p k_p n_p − 2ℓ_1 k_1 n_1 − 2ℓ_2 k_2 n_2` with
/// `ℓ = thickness × internal_path_factor(n, θ)` and `k = 2π/λ_vacuum`.
/// Unwrapped, radians; the calibration offset is not included.
pub fn plate_dispersion_phase(
    plate: &PhasePlateSpec,
    wavelengths: &PlateWavelengths,
) -> Result<f64> {
    let thickness_um = plate.thickness_mm * 1e3;
    let t_ref = plate.material.reference_temperature;
    let term = |lam_nm: f64| -> Result<f64> {
        let lam_um = lam_nm * 1e-3;
        let n = refractive_index(&plate.material, &plate.axis, lam_um, t_ref)?;
        let path = thickness_um * internal_path_factor(n, plate.tilt);
        Ok(2.0 * path * (TAU / lam_um) * n)
    };
    let (l1, l2) = wavelengths.photons_nm;
    Ok(term(wavelengths.pump_nm)? - term(l1)? - term(l2)?)
}

/// Relative phase before wrapping: `φ0 + [P(0) − P(θ)]` where `P` is
/// [`plate_dispersion_phase`].
///
/// The swapped term of the superposition is the first-pass pair, which
/// carries the photons' plate phase; the direct term is born from the pump
/// after its own double pass. Their relative phase is photons minus pump,
/// the negative of `P`, and it is referenced to normal incidence.
pub fn unwrapped_phase(plate: &PhasePlateSpec, wavelengths: &PlateWavelengths) -> Result<f64> {
    if plate.thickness_mm == 0.0 {
        return Ok(plate.phi0);
    }
    let tilted = plate_dispersion_phase(plate, wavelengths)?;
    let normal = plate_dispersion_phase(&plate.with_tilt(0.0), wavelengths)?;
    Ok(plate.phi0 + (normal - tilted))
}

/// φ in [0, 2π) for the plate's current tilt.
pub fn phase_from_tilt(plate: &PhasePlateSpec, wavelengths: &PlateWavelengths) -> Result<f64> {
    if !(plate.tilt.abs() < FRAC_PI_2) {
        return Err(Error::range(format!(
            "tilt {} rad not below π/2",
            plate.tilt
        )));
    }
    Ok(wrap_phase(unwrapped_phase(plate, wavelengths)?))
}

/// Smallest non-negative tilt (radians) at which the plate produces
/// `target_phi` (mod 2π) to within 1e-6 rad.
pub fn tilt_for_phase(
    template: &PhasePlateSpec,
    target_phi: f64,
    wavelengths: &PlateWavelengths,
) -> Result<f64> {
    if !target_phi.is_finite() {
        return Err(Error::config("target phase is not finite"));
    }
    let phase_at = |t: f64| unwrapped_phase(&template.with_tilt(t), wavelengths);
    let start = phase_at(0.0)?;
    // the unwrapped phase grows from φ0 at normal incidence
    let goal = start + wrap_phase(target_phi - start);
    if goal == start {
        return Ok(0.0);
    }
    let end = phase_at(MAX_TILT_RAD)?;
    if end < goal {
        return Err(Error::Solver(format!(
            "φ = {:.6} rad unreachable below 80° tilt: unwrapped phase spans [{start:.6}, {end:.6}] rad",
            wrap_phase(target_phi)
        )));
    }
    // coarse scan for the first crossing, then bisection
    const SCAN: usize = 800;
    let mut lo = 0.0;
    let mut hi = MAX_TILT_RAD;
    for k in 1..=SCAN {
        let t = MAX_TILT_RAD * k as f64 / SCAN as f64;
        if phase_at(t)? >= goal {
            hi = t;
            break;
        }
        lo = t;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phase_at(mid)? < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spdc::FrequencyGrid;
    use std::f64::consts::PI;

    fn plate(thickness_mm: f64) -> PhasePlateSpec {
        PhasePlateSpec::new(
            MaterialModel::builtin("bk7").unwrap(),
            thickness_mm,
            0.0,
            0.0,
        )
        .unwrap()
    }

    fn wl() -> PlateWavelengths {
        PlateWavelengths::degenerate(792.0)
    }

    fn random_jsa(n: usize, seed: u64) -> JointSpectralAmplitude {
        let grid = FrequencyGrid::new(190.0, 190.0, 1.0, n).unwrap();
        let mut x = seed;
        JointSpectralAmplitude::from_fn(grid, |_, _| {
            // xorshift, test-only
            let mut next = || {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            Complex64::new(next(), next())
        })
        .normalize()
        .unwrap()
    }

    #[test]
    fn swap_is_an_involution() {
        let s = random_jsa(64, 7);
        let back = swap(&swap(&s).unwrap()).unwrap();
        for (a, b) in s.amplitudes().iter().zip(back.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((swap(&s).unwrap().norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_needs_equal_centers() {
        let grid = FrequencyGrid::new(190.0, 191.0, 1.0, 64).unwrap();
        let s = JointSpectralAmplitude::from_fn(grid, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(swap(&s), Err(Error::Config(_))));
        assert!(matches!(superpose(&s, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn symmetric_input_is_a_swap_fixed_point() {
        let s = random_jsa(64, 3);
        let sym = superpose(&s, 0.0).unwrap();
        assert_eq!(
            swap(&sym).unwrap().amplitudes().len(),
            sym.amplitudes().len()
        );
        for (a, b) in swap(&sym)
            .unwrap()
            .amplitudes()
            .iter()
            .zip(sym.amplitudes())
        {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn exchange_symmetry_at_zero_and_pi() {
        let s = random_jsa(64, 11);
        let n = s.dim();
        let sym = superpose(&s, 0.0).unwrap();
        let anti = superpose(&s, PI).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((sym.get(i, j) - sym.get(j, i)).norm() < 1e-12);
                assert!((anti.get(i, j) + anti.get(j, i)).norm() < 1e-12);
            }
        }
        assert!((sym.norm_squared() - 1.0).abs() < 1e-9);
        assert!((anti.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_input_at_pi_is_degenerate() {
        let sym = superpose(&random_jsa(64, 5), 0.0).unwrap();
        assert!(matches!(
            superpose(&sym, PI),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn zero_thickness_gives_calibration_offset() {
        assert_eq!(
            phase_from_tilt(&plate(0.0).with_tilt(0.7), &wl()).unwrap(),
            0.0
        );
        let mut p = plate(0.0);
        p.phi0 = 1.25;
        assert_eq!(phase_from_tilt(&p, &wl()).unwrap(), 1.25);
    }

    #[test]
    fn normal_incidence_is_phi0() {
        assert_eq!(phase_from_tilt(&plate(1.0), &wl()).unwrap(), 0.0);
        assert_eq!(tilt_for_phase(&plate(1.0), 0.0, &wl()).unwrap(), 0.0);
        let mut p = plate(1.0);
        p.phi0 = 0.4;
        assert_eq!(tilt_for_phase(&p, 0.4, &wl()).unwrap(), 0.0);
    }

    #[test]
    fn unwrapped_phase_is_monotone_and_spans_two_pi() {
        let p = plate(1.0);
        let mut prev = unwrapped_phase(&p, &wl()).unwrap();
        let start = prev;
        for k in 1..=450 {
            let t = (0.1 * k as f64).to_radians();
            let v = unwrapped_phase(&p.with_tilt(t), &wl()).unwrap();
            assert!(v >= prev, "dip at {t}");
            prev = v;
        }
        assert!(prev - start >= TAU, "span {}", prev - start);
    }

    #[test]
    fn figure_phases_reachable() {
        let p = plate(1.0);
        for target in [0.0, 0.6 * PI, 1.1 * PI, 1.4 * PI] {
            let t = tilt_for_phase(&p, target, &wl()).unwrap();
            assert!((0.0..MAX_TILT_RAD).contains(&t));
            let got = phase_from_tilt(&p.with_tilt(t), &wl()).unwrap();
            let err = wrap_phase(got - target).min(TAU - wrap_phase(got - target));
            assert!(err < 1e-6, "target {target}: got {got}");
        }
    }

    #[test]
    fn unreachable_phase_is_solver_error() {
        // 1 µm of glass barely moves the phase
        let p = plate(0.001);
        match tilt_for_phase(&p, 1.0, &wl()) {
            Err(Error::Solver(msg)) => assert!(msg.contains("spans")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn plate_validation() {
        let g = MaterialModel::builtin("bk7").unwrap();
        assert!(PhasePlateSpec::new(g.clone(), -1.0, 0.0, 0.0).is_err());
        assert!(PhasePlateSpec::new(g.clone(), 1.0, FRAC_PI_2, 0.0).is_err());
        assert!(PhasePlateSpec::new(g, 1.0, -0.3, 0.0).is_ok());
    }
}
