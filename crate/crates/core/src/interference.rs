//! Observables of a two-photon state: normalized TSI, HOM coincidence
//! traces, and fringe statistics.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spdc::JointSpectralAmplitude;

/// Tolerance on `Σ|S|²δν² = 1` accepted by [`hom_trace`].
const NORM_TOLERANCE: f64 = 1e-6;

/// Zero-padding factor for the beat spectrum.
const SPECTRUM_OVERSAMPLING: usize = 16;

/// Spectral peak must exceed this multiple of the median floor.
const PEAK_TO_FLOOR: f64 = 3.0;

/// Minimum number of beat cycles the delay window must hold.
const MIN_CYCLES: f64 = 3.0;

/// Max-normalized `|S|²` in storage order (first index along ω1).
pub fn tsi(state: &JointSpectralAmplitude) -> Result<Vec<f64>> {
    if !state.is_finite() {
        return Err(Error::DegenerateState("state contains NaN or Inf".into()));
    }
    let mut intensity = state.intensity();
    let max = intensity.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::DegenerateState("all-zero spectral intensity".into()));
    }
    intensity.iter_mut().for_each(|v| *v /= max);
    Ok(intensity)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceMetadata {
    pub phi: f64,
    pub temperature_c: Option<f64>,
    pub grid_points: usize,
    pub grid_span_thz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomTrace {
    /// ps, uniform, increasing.
    pub delays: Vec<f64>,
    pub coincidence: Vec<f64>,
    pub metadata: TraceMetadata,
}

impl HomTrace {
    pub fn delay_step(&self) -> f64 {
        if self.delays.len() < 2 {
            0.0
        } else {
            (self.delays[self.delays.len() - 1] - self.delays[0]) / (self.delays.len() - 1) as f64
        }
    }
}

/// `count` uniformly spaced delays from `min_ps` to `max_ps` inclusive.
pub fn delay_axis(min_ps: f64, max_ps: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(min_ps.is_finite() && max_ps.is_finite() && max_ps > min_ps) {
        return Err(Error::config(format!(
            "delay axis needs count ≥ 2 and min < max, got [{min_ps}, {max_ps}] × {count}"
        )));
    }
    let step = (max_ps - min_ps) / (count - 1) as f64;
    Ok((0..count).map(|k| min_ps + k as f64 * step).collect())
}

fn check_trace_inputs(state: &JointSpectralAmplitude, delays: &[f64]) -> Result<()> {
    if !state.grid().is_swap_symmetric() {
        return Err(Error::config("HOM trace needs a swap-compatible grid"));
    }
    let norm = state.norm_squared();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Precondition(format!(
            "HOM trace needs a unit-normalized state, Σ|S|²δν² = {norm}"
        )));
    }
    if delays.is_empty() {
        return Err(Error::config("empty delay list"));
    }
    Ok(())
}

fn metadata(state: &JointSpectralAmplitude, phi: f64, temperature_c: Option<f64>) -> TraceMetadata {
    TraceMetadata {
        phi,
        temperature_c,
        grid_points: state.dim(),
        grid_span_thz: state.grid().span,
    }
}

/// HOM coincidence probability
/// `Pc(τ) = ½[1 − Re Σ_{i,j} S(ωi,ωj)·S*(ωj,ωi)·e^{−i2π(νi−νj)τ}·δν²]`.
///
/// On a swap-compatible grid `νi − νj = (i − j)·δν`, so the double sum is
/// grouped by the diagonal offset `i − j` before the delays are applied.
pub fn hom_trace(state: &JointSpectralAmplitude, delays: &[f64]) -> Result<HomTrace> {
    check_trace_inputs(state, delays)?;
    let n = state.dim();
    let d = state.grid().spacing();
    let a = state.amplitudes();

    // cross[n - 1 + (i - j)] = Σ S(i,j)·S*(j,i)
    let mut cross = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            cross[n - 1 + i - j] += a[i * n + j] * a[j * n + i].conj();
        }
    }
    let coincidence = delays
        .iter()
        .map(|&tau| {
            let step = Complex64::from_polar(1.0, -TAU * d * tau);
            // Horner over offsets m = -(n-1)..=(n-1): Σ c_m z^m
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cross.iter().rev() {
                acc = acc * step + c;
            }
            let total = acc * Complex64::from_polar(1.0, TAU * d * tau * (n - 1) as f64);
            clamp_probability(0.5 * (1.0 - total.re * d * d))
        })
        .collect();
    Ok(HomTrace {
        delays: delays.to_vec(),
        coincidence,
        metadata: metadata(state, f64::NAN, None),
    })
}

/// Same quantity as [`hom_trace`], evaluated as the literal double sum with
/// one complex exponential per grid point and delay.
pub fn hom_trace_double_sum(state: &JointSpectralAmplitude, delays: &[f64]) -> Result<HomTrace> {
    check_trace_inputs(state, delays)?;
    let n = state.dim();
    let g = state.grid();
    let d = g.spacing();
    let coincidence = delays
        .iter()
        .map(|&tau| {
            let mut re = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let term = state.get(i, j) * state.get(j, i).conj();
                    let phase = -TAU * (g.frequency_1(i) - g.frequency_2(j)) * tau;
                    re += (term * Complex64::from_polar(1.0, phase)).re;
                }
            }
            clamp_probability(0.5 * (1.0 - re * d * d))
        })
        .collect();
    Ok(HomTrace {
        delays: delays.to_vec(),
        coincidence,
        metadata: metadata(state, f64::NAN, None),
    })
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `(max − min)/(max + min)` over the sampled window.
pub fn visibility(trace: &HomTrace) -> Result<f64> {
    if trace.coincidence.is_empty() {
        return Err(Error::DegenerateState("empty trace".into()));
    }
    let max = trace
        .coincidence
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = trace
        .coincidence
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Err(Error::DegenerateState("all-zero trace".into()));
    }
    Ok((max - min) / (max + min))
}

/// Beat period (ps) from the dominant spectral peak of `Pc(τ) − mean`.
///
/// The trace is Hann-windowed and zero-padded before the FFT and the peak refined by a
/// three-point parabola on the magnitude. Only frequencies holding at least
/// three cycles in the window are searched, and the maximum there must be an
/// interior local maximum standing three times above the median floor.
pub fn beat_period(trace: &HomTrace) -> Result<f64> {
    let n = trace.coincidence.len();
    if n < 8 {
        return Err(Error::NoBeat(format!("{n} samples are too few")));
    }
    let step = trace.delay_step();
    if !(step > 0.0) {
        return Err(Error::NoBeat("delays do not increase".into()));
    }
    let mean = trace.coincidence.iter().sum::<f64>() / n as f64;
    let padded = (n * SPECTRUM_OVERSAMPLING).next_power_of_two();
    let mut buf: Vec<Complex64> = trace
        .coincidence
        .iter()
        .enumerate()
        .map(|(k, &p)| Complex64::new((p - mean) * hann(k, n), 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(padded)
        .collect();
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let half = padded / 2;
    let magnitude: Vec<f64> = buf[..=half].iter().map(|c| c.norm()).collect();
    let df = 1.0 / (padded as f64 * step);
    let window = n as f64 * step;

    let first = ((MIN_CYCLES / window) / df).ceil() as usize;
    if first + 2 >= half {
        return Err(Error::NoBeat("delay window too short".into()));
    }
    let (peak, &peak_value) = magnitude[first..half]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (k + first, v))
        .expect("search band is non-empty");

    let mut floor_values = magnitude[1..=half].to_vec();
    floor_values.sort_by(f64::total_cmp);
    let median = floor_values[floor_values.len() / 2];
    if !(peak_value > 0.0) || peak_value < PEAK_TO_FLOOR * median {
        return Err(Error::NoBeat(format!(
            "spectral peak {peak_value:.3e} below {PEAK_TO_FLOOR}× median floor {median:.3e}"
        )));
    }
    let (lo, mid, hi) = (magnitude[peak - 1], magnitude[peak], magnitude[peak + 1]);
    if peak == first || lo > mid || hi > mid {
        return Err(Error::NoBeat(
            "spectral maximum sits on the edge of the search band".into(),
        ));
    }
    let denom = lo - 2.0 * mid + hi;
    let offset = if denom < 0.0 {
        0.5 * (lo - hi) / denom
    } else {
        0.0
    };
    let frequency = (peak as f64 + offset) * df;
    Ok(1.0 / frequency)
}

fn hann(k: usize, n: usize) -> f64 {
    let x = (std::f64::consts::PI * k as f64 / (n - 1) as f64).sin();
    x * x
}

/// `|Δν·Δτ − 1|`.
pub fn duality_residual(separation_thz: f64, period_ps: f64) -> f64 {
    (separation_thz * period_ps - 1.0).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringeStats {
    pub visibility: f64,
    pub beat_period: f64,
    pub beat_frequency: f64,
    pub duality_residual: f64,
}

/// Statistics of `trace` against the spectral separation of the same state.
/// Beat-derived fields are NaN when no beat is detected.
pub fn fringe_stats(trace: &HomTrace, separation_thz: f64) -> Result<FringeStats> {
    let visibility = visibility(trace)?;
    let beat_period = match beat_period(trace) {
        Ok(p) => p,
        Err(Error::NoBeat(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    let beat_frequency = 1.0 / beat_period;
    let duality_residual = if separation_thz > 0.0 && beat_period.is_finite() {
        duality_residual(separation_thz, beat_period)
    } else {
        f64::NAN
    };
    Ok(FringeStats {
        visibility,
        beat_period,
        beat_frequency,
        duality_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spdc::FrequencyGrid;
    use std::f64::consts::PI;

    fn trace_of(f: impl Fn(f64) -> f64, min: f64, max: f64, count: usize) -> HomTrace {
        let delays = delay_axis(min, max, count).unwrap();
        HomTrace {
            coincidence: delays.iter().map(|&t| f(t)).collect(),
            delays,
            metadata: TraceMetadata {
                phi: 0.0,
                temperature_c: None,
                grid_points: 0,
                grid_span_thz: 0.0,
            },
        }
    }

    #[test]
    fn tsi_of_flat_state_is_all_ones() {
        let grid = FrequencyGrid::new(190.0, 190.0, 1.0, 64).unwrap();
        let s = JointSpectralAmplitude::from_fn(grid, |i, j| {
            Complex64::from_polar(1.0, (i * j) as f64)
        });
        let t = tsi(&s).unwrap();
        assert!(t.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        let zero = JointSpectralAmplitude::from_fn(grid, |_, _| Complex64::new(0.0, 0.0));
        assert!(matches!(tsi(&zero), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn visibility_definition() {
        let flat = trace_of(|_| 0.5, -10.0, 10.0, 101);
        assert_eq!(visibility(&flat).unwrap(), 0.0);
        let osc = trace_of(|t| 0.5 + 0.25 * (TAU * t / 2.0).cos(), -10.0, 10.0, 101);
        assert!((visibility(&osc).unwrap() - 0.5).abs() < 1e-15);
        let zero = trace_of(|_| 0.0, -1.0, 1.0, 11);
        assert!(matches!(visibility(&zero), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn beat_period_of_embedded_fringe() {
        let trace = trace_of(
            |t| 0.5 * (1.0 - (-(t / 6.0).powi(2)).exp() * (TAU * t / 4.4).cos()),
            -25.0,
            25.0,
            501,
        );
        let p = beat_period(&trace).unwrap();
        assert!((p - 4.4).abs() < 0.02 * 4.4, "{p}");
    }

    #[test]
    fn dc_trace_has_no_beat() {
        let trace = trace_of(|_| 0.5, -25.0, 25.0, 501);
        assert!(matches!(beat_period(&trace), Err(Error::NoBeat(_))));
        // a dip without oscillation
        let dip = trace_of(
            |t| 0.5 * (1.0 - (-(t / 2.0).powi(2)).exp()),
            -25.0,
            25.0,
            501,
        );
        assert!(matches!(beat_period(&dip), Err(Error::NoBeat(_))));
    }

    #[test]
    fn duality_values() {
        assert_eq!(duality_residual(0.625, 1.6), 0.0);
        assert!((duality_residual(0.61, 1.6) - 0.024).abs() < 1e-12);
        assert!((duality_residual(0.40, 2.3) - 0.08).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_rejected() {
        let grid = FrequencyGrid::new(190.0, 190.0, 1.0, 64).unwrap();
        let s = JointSpectralAmplitude::from_fn(grid, |_, _| Complex64::new(3.0, 0.0));
        assert!(matches!(hom_trace(&s, &[0.0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn grouped_sum_matches_double_sum() {
        let grid = FrequencyGrid::new(190.0, 190.0, 1.5, 64).unwrap();
        let s = JointSpectralAmplitude::from_fn(grid, |i, j| {
            let (x, y) = (grid.detuning(i), grid.detuning(j));
            let g = (-((x - 0.3).powi(2) + (y + 0.25).powi(2)) / 0.02).exp();
            Complex64::from_polar(g, 3.0 * x * y + x)
        });
        let s = crate::state::superpose(&s.normalize().unwrap(), 0.7 * PI).unwrap();
        let delays = delay_axis(-10.0, 10.0, 41).unwrap();
        let fast = hom_trace(&s, &delays).unwrap();
        let slow = hom_trace_double_sum(&s, &delays).unwrap();
        for (a, b) in fast.coincidence.iter().zip(&slow.coincidence) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
