use super::{phase_mismatch, CrystalSpec};
use crate::error::{Error, Result};
use crate::units::nm_to_thz;

const BRACKET_UM: (f64, f64) = (10.0, 100.0);

/// Poling period that phase-matches degenerate emission at
/// `degenerate_wavelength_nm` when the crystal sits at `reference_temperature_c`.
///
/// Bisection on Λ over [10, 100] µm, run to floating-point resolution (well
/// below the 1e-6 µm target).
pub fn solve_poling_period(
    template: &CrystalSpec,
    degenerate_wavelength_nm: f64,
    reference_temperature_c: f64,
) -> Result<f64> {
    let nu = nm_to_thz(degenerate_wavelength_nm);
    let crystal = template.with_temperature(reference_temperature_c);
    let mismatch = |period: f64| phase_mismatch(&crystal.with_poling_period(period), nu, nu);

    let (mut lo, mut hi) = BRACKET_UM;
    let mut f_lo = mismatch(lo)?;
    let f_hi = mismatch(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Solver(format!(
            "no sign change of Δk over Λ ∈ [{lo}, {hi}] µm: Δk({lo}) = {f_lo:.6e}, Δk({hi}) = {f_hi:.6e} rad/µm"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = mismatch(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
