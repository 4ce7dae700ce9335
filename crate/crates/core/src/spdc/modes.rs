//! Location of the one or two intensity peaks of a joint spectrum.

use super::{FrequencyGrid, JointSpectralAmplitude};

/// Peaks closer than this (THz) to the global maximum belong to it.
pub const DEFAULT_EXCLUSION_RADIUS_THZ: f64 = 0.1;

/// Second peaks weaker than this fraction of the first are ignored.
const SECOND_PEAK_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeCenters {
    /// One mode; detunings (Δν1, Δν2) from the grid centers, THz.
    Single { peak: (f64, f64) },
    Pair {
        first: (f64, f64),
        second: (f64, f64),
        /// Per-photon frequency shift between the modes, THz.
        separation: f64,
    },
}

impl ModeCenters {
    /// Zero for a single mode.
    pub fn separation(&self) -> f64 {
        match self {
            ModeCenters::Single { .. } => 0.0,
            ModeCenters::Pair { separation, .. } => *separation,
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, ModeCenters::Single { .. })
    }
}

/// Finds the global intensity maximum, then the strongest local maximum
/// outside `exclusion_radius_thz` of it, each refined by a three-point
/// parabola per axis.
///
/// The separation is measured along the frequency-difference coordinate
/// `ν1 − ν2`: modes at `(ν1a, ν2a)` and `(ν1b, ν2b)` are
/// `|(ν1a − ν2a) − (ν1b − ν2b)| / 2` apart, which for an exchanged pair
/// `(+Ω, −Ω)`, `(−Ω, +Ω)` is `2Ω`, the beat frequency of their HOM fringe.
pub fn mode_centers(jsa: &JointSpectralAmplitude, exclusion_radius_thz: f64) -> ModeCenters {
    find_modes(&jsa.intensity(), jsa.grid(), exclusion_radius_thz)
}

pub(crate) fn find_modes(
    intensity: &[f64],
    grid: &FrequencyGrid,
    exclusion_radius_thz: f64,
) -> ModeCenters {
    let n = grid.points_per_axis;
    let at = |i: usize, j: usize| intensity[i * n + j];

    let (first_idx, &first_val) = intensity
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is never empty");
    let (fi, fj) = (first_idx / n, first_idx % n);
    let first = refine(intensity, grid, fi, fj);

    let r2 = exclusion_radius_thz * exclusion_radius_thz;
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            if best.is_some_and(|(_, _, b)| v <= b) {
                continue;
            }
            let d1 = grid.detuning(i) - grid.detuning(fi);
            let d2 = grid.detuning(j) - grid.detuning(fj);
            if d1 * d1 + d2 * d2 <= r2 {
                continue;
            }
            if is_local_max(intensity, n, i, j) {
                best = Some((i, j, v));
            }
        }
    }

    match best {
        Some((si, sj, v)) if v >= SECOND_PEAK_FLOOR * first_val && first_val > 0.0 => {
            let second = refine(intensity, grid, si, sj);
            let separation = ((first.0 - first.1) - (second.0 - second.1)).abs() / 2.0;
            ModeCenters::Pair {
                first,
                second,
                separation,
            }
        }
        _ => ModeCenters::Single { peak: first },
    }
}

fn is_local_max(intensity: &[f64], n: usize, i: usize, j: usize) -> bool {
    let v = intensity[i * n + j];
    for di in -1i64..=1 {
        for dj in -1i64..=1 {
            if di == 0 && dj == 0 {
                continue;
            }
            let (a, b) = (i as i64 + di, j as i64 + dj);
            if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                continue;
            }
            if intensity[a as usize * n + b as usize] > v {
                return false;
            }
        }
    }
    true
}

fn refine(intensity: &[f64], grid: &FrequencyGrid, i: usize, j: usize) -> (f64, f64) {
    let n = grid.points_per_axis;
    let h = grid.spacing();
    let offset = |lo: f64, mid: f64, hi: f64| {
        let denom = lo - 2.0 * mid + hi;
        if denom < 0.0 {
            (0.5 * (lo - hi) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    };
    let di = if i > 0 && i + 1 < n {
        offset(
            intensity[(i - 1) * n + j],
            intensity[i * n + j],
            intensity[(i + 1) * n + j],
        )
    } else {
        0.0
    };
    let dj = if j > 0 && j + 1 < n {
        offset(
            intensity[i * n + j - 1],
            intensity[i * n + j],
            intensity[i * n + j + 1],
        )
    } else {
        0.0
    };
    (grid.detuning(i) + di * h, grid.detuning(j) + dj * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn gaussian_pair(omega: f64, sigma: f64, n: usize) -> JointSpectralAmplitude {
        let grid = FrequencyGrid::new(190.0, 190.0, 2.0, n).unwrap();
        JointSpectralAmplitude::from_fn(grid, |i, j| {
            let (x, y) = (grid.detuning(i), grid.detuning(j));
            let g = |cx: f64, cy: f64| {
                (-((x - cx).powi(2) + (y - cy).powi(2)) / (4.0 * sigma * sigma)).exp()
            };
            Complex64::new(g(omega, -omega) + g(-omega, omega), 0.0)
        })
    }

    #[test]
    fn synthetic_pair_separation() {
        let jsa = gaussian_pair(0.2, 0.04, 256);
        let m = mode_centers(&jsa, DEFAULT_EXCLUSION_RADIUS_THZ);
        let half_bin = 0.5 * jsa.grid().spacing();
        assert!(!m.is_single());
        assert!((m.separation() - 0.40).abs() < half_bin, "{m:?}");
    }

    #[test]
    fn single_gaussian_is_single_mode() {
        let grid = FrequencyGrid::new(190.0, 190.0, 2.0, 128).unwrap();
        let jsa = JointSpectralAmplitude::from_fn(grid, |i, j| {
            let (x, y) = (grid.detuning(i) - 0.1, grid.detuning(j) + 0.1);
            Complex64::new((-(x * x + y * y) / 0.01).exp(), 0.0)
        });
        let m = mode_centers(&jsa, DEFAULT_EXCLUSION_RADIUS_THZ);
        assert!(m.is_single(), "{m:?}");
        assert_eq!(m.separation(), 0.0);
    }

    #[test]
    fn weak_second_peak_is_ignored() {
        let grid = FrequencyGrid::new(190.0, 190.0, 2.0, 128).unwrap();
        let jsa = JointSpectralAmplitude::from_fn(grid, |i, j| {
            let (x, y) = (grid.detuning(i), grid.detuning(j));
            let g = |cx: f64, cy: f64, a: f64| {
                a * (-((x - cx).powi(2) + (y - cy).powi(2)) / 0.005).exp()
            };
            // amplitude 0.3 → intensity 0.09 < 10 %
            Complex64::new(g(0.3, -0.3, 1.0) + g(-0.3, 0.3, 0.3), 0.0)
        });
        assert!(mode_centers(&jsa, 0.1).is_single());
    }
}
