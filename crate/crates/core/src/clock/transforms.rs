use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use super::{ClockParams, FrequencyWavefunction, TimeSampleSequence};
use crate::error::Result;

/// A value obtained from a truncated sum or integral, with a heuristic
/// estimate of the neglected tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub tail_estimate: f64,
}

impl<T> Truncated<T> {
    pub fn is_accurate(&self, tolerance: f64) -> bool {
        self.tail_estimate <= tolerance
    }
}

/// Continuous-time representation ψ(τ) = ⟨φ_τ^ML | ψ⟩.
pub fn freq_to_continuous(psi: &FrequencyWavefunction, tau: f64) -> Complex64 {
    let grid = psi.grid();
    let sk = grid.kappa().sqrt();
    let rate = tau / (2.0 * sk);
    let sum: Complex64 = psi
        .values()
        .iter()
        .zip(grid.warped().iter().zip(grid.cos_half()))
        .map(|(v, (&x, &c))| v * Complex64::from_polar(c, rate * x))
        .sum();
    sum * (2.0 * sk / PI).sqrt() * grid.weight()
}

/// Discrete-time representation on the lattice `2√κ(λ + n)` for the
/// requested `n`.
///
/// The lattice phases `e^{i(λ+n)x}` are advanced by repeated multiplication
/// with `e^{ix}` rather than evaluated per site.
pub fn freq_to_discrete(
    psi: &FrequencyWavefunction,
    n_range: RangeInclusive<i64>,
    clock: &ClockParams,
) -> Result<TimeSampleSequence> {
    let grid = psi.grid();
    let sk = grid.kappa().sqrt();
    let pref = (2.0 * sk / PI).sqrt() * grid.weight();
    let (n_min, n_max) = (*n_range.start(), *n_range.end());

    let mut terms: Vec<Complex64> = psi
        .values()
        .iter()
        .zip(grid.warped().iter().zip(grid.cos_half()))
        .map(|(v, (&x, &c))| {
            v * Complex64::from_polar(c * pref, (clock.lambda() + n_min as f64) * x)
        })
        .collect();
    let steps: Vec<Complex64> = grid
        .warped()
        .iter()
        .map(|&x| Complex64::from_polar(1.0, x))
        .collect();

    let mut values = Vec::with_capacity((n_max - n_min + 1).max(0) as usize);
    for _ in n_min..=n_max {
        values.push(terms.iter().sum());
        for (t, s) in terms.iter_mut().zip(&steps) {
            *t *= s;
        }
    }
    TimeSampleSequence::new(n_min, values, *clock)
}

/// Frequency representation recovered from lattice samples,
/// `√(√κ/2π) Σₙ (1 + κω²)^(1/2) e^{-2i(λ+n) arctan(√κω)} ψₙ`.
///
/// The sum runs over the stored range; the tail estimate is the size of the
/// two boundary terms.
pub fn discrete_to_freq(seq: &TimeSampleSequence, omega: f64) -> Truncated<Complex64> {
    let clock = seq.clock();
    let sk = clock.delta_t0();
    let theta = 2.0 * (sk * omega).atan();
    let pref = (sk / (2.0 * PI)).sqrt() * (1.0 + clock.kappa() * omega * omega).sqrt();
    let value: Complex64 = seq
        .iter()
        .map(|(n, v)| v * Complex64::from_polar(1.0, -(clock.lambda() + n as f64) * theta))
        .sum();
    let values = seq.values();
    let tail = pref * (values[0].norm() + values[values.len() - 1].norm());
    Truncated {
        value: value * pref,
        tail_estimate: tail,
    }
}

/// Truncation window and step for the inverse of [`freq_to_continuous`].
/// Both are measured in units of the lattice spacing 2√κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeQuadrature {
    pub half_width: f64,
    pub step: f64,
}

impl Default for TimeQuadrature {
    fn default() -> Self {
        Self {
            half_width: 128.0,
            step: 0.25,
        }
    }
}

/// Frequency representation recovered from ψ(τ),
/// `(8π√κ)^(-1/2) ∫ dτ (1 + κω²)^(1/2) e^{-iτ arctan(√κω)/√κ} ψ(τ)`.
pub fn continuous_to_freq<F: Fn(f64) -> Complex64>(
    psi_tau: F,
    omega: f64,
    clock: &ClockParams,
    quad: &TimeQuadrature,
) -> Truncated<Complex64> {
    continuous_to_freq_many(psi_tau, &[omega], clock, quad)
        .pop()
        .expect("one frequency requested")
}

/// [`continuous_to_freq`] at several frequencies, sampling ψ(τ) once.
///
/// The integral is a trapezoid sum over `|τ| <= half_width·2√κ`; the tail
/// estimate is the contribution of the outermost 5% of samples.
pub fn continuous_to_freq_many<F: Fn(f64) -> Complex64>(
    psi_tau: F,
    omegas: &[f64],
    clock: &ClockParams,
    quad: &TimeQuadrature,
) -> Vec<Truncated<Complex64>> {
    let sk = clock.delta_t0();
    let spacing = clock.lattice_spacing();
    let count = (2.0 * quad.half_width / quad.step).round() as usize;
    let samples: Vec<(f64, Complex64)> = (0..=count)
        .map(|k| {
            let s = -quad.half_width + k as f64 * quad.step;
            let w = if k == 0 || k == count { 0.5 } else { 1.0 };
            (s, psi_tau(s * spacing) * (w * quad.step * spacing))
        })
        .collect();
    let edge = (count / 20).max(1);
    let edge_mass: f64 = samples[..edge]
        .iter()
        .chain(&samples[count + 1 - edge..])
        .map(|(_, v)| v.norm())
        .sum();
    let norm = 1.0 / (8.0 * PI * sk).sqrt();

    omegas
        .iter()
        .map(|&omega| {
            let x = 2.0 * (sk * omega).atan();
            let pref = norm * (1.0 + clock.kappa() * omega * omega).sqrt();
            let sum: Complex64 = samples
                .iter()
                .map(|&(s, v)| v * Complex64::from_polar(1.0, -s * x))
                .sum();
            Truncated {
                value: sum * pref,
                tail_estimate: pref * edge_mass,
            }
        })
        .collect()
}
