//! Free particle with dispersion `E(p) = (ħ/√κ) arctan(√κp²/(2mħ))`.
//!
//! A packet stores its initial momentum amplitude `f(p)` and the elapsed
//! time; evolution only accumulates the phase `e^{-iE(p)τ/ħ}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clock::ClockParams;
use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::numerics::{fd4_derivative, trapezoid_weight};

/// Largest `|f|` allowed at the two ends of a momentum grid.
pub const DECAY_GATE: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// Energy of momentum `p`; `p²/2m` when κ = 0.
pub fn dispersion(p: f64, mass: f64, deformation: &Deformation) -> f64 {
    deformation.effective_energy(p * p / (2.0 * mass))
}

/// `dE/dp = (p/m) / (1 + κp⁴/(4m²ħ²))`.
pub fn group_velocity(p: f64, mass: f64, deformation: &Deformation) -> f64 {
    let hbar = deformation.hbar();
    let q = p * p / (2.0 * mass * hbar);
    p / mass / (1.0 + deformation.kappa() * q * q)
}

/// Upper bound on the group velocity, `√(3√3ħ / (8m√κ))`.
pub fn v_max(mass: f64, clock: &ClockParams) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::Parameter {
            name: "mass",
            value: mass,
            reason: "must be positive",
        });
    }
    Ok((3.0 * 3f64.sqrt() * clock.hbar() / (8.0 * mass * clock.delta_t0())).sqrt())
}

/// Momentum amplitude on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavepacket {
    momenta: Vec<f64>,
    step: f64,
    initial: Vec<Complex64>,
    mass: f64,
    deformation: Deformation,
    phase_time: f64,
}

impl MomentumWavepacket {
    /// `initial[j]` is `f(p_min + j·step)` at τ = 0.
    pub fn new(
        p_min: f64,
        step: f64,
        initial: Vec<Complex64>,
        mass: f64,
        deformation: Deformation,
    ) -> Result<Self> {
        if initial.len() < 16 || !(step > 0.0) {
            return Err(Error::Grid(format!(
                "momentum grid needs at least 16 points and a positive step, got {} points, step {step}",
                initial.len()
            )));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Parameter {
                name: "mass",
                value: mass,
                reason: "must be positive and finite",
            });
        }
        let ends = initial[0].norm().max(initial[initial.len() - 1].norm());
        if !(ends < DECAY_GATE) {
            return Err(Error::Grid(format!(
                "|f| = {ends:e} at the grid ends exceeds {DECAY_GATE:e}; widen the momentum window"
            )));
        }
        let momenta = (0..initial.len())
            .map(|j| p_min + j as f64 * step)
            .collect();
        let packet = Self {
            momenta,
            step,
            initial,
            mass,
            deformation,
            phase_time: 0.0,
        };
        let defect = (packet.norm_sq() - 1.0).abs();
        if defect > NORM_TOL {
            return Err(Error::Precondition {
                condition: "momentum amplitude normalized",
                residual: defect,
                tolerance: NORM_TOL,
            });
        }
        Ok(packet)
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn phase_time(&self) -> f64 {
        self.phase_time
    }

    pub fn initial_values(&self) -> &[Complex64] {
        &self.initial
    }

    /// `f(p) e^{-iE(p)τ/ħ}` at the accumulated time.
    pub fn values(&self) -> Vec<Complex64> {
        let hbar = self.deformation.hbar();
        self.momenta
            .iter()
            .zip(&self.initial)
            .map(|(&p, f)| {
                f * Complex64::from_polar(
                    1.0,
                    -dispersion(p, self.mass, &self.deformation) * self.phase_time / hbar,
                )
            })
            .collect()
    }

    fn integrate<F: Fn(usize) -> f64>(&self, g: F) -> f64 {
        let n = self.initial.len();
        (0..n)
            .map(|j| trapezoid_weight(j, n, self.step) * g(j))
            .sum()
    }

    /// `∫|f|² dp`.
    pub fn norm_sq(&self) -> f64 {
        self.integrate(|j| self.initial[j].norm_sqr())
    }

    /// `⟨p̂⟩`; unchanged by evolution.
    pub fn momentum_expectation(&self) -> f64 {
        self.integrate(|j| self.momenta[j] * self.initial[j].norm_sqr())
    }
}

/// Momentum window of a Gaussian packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    /// Half-width of the window in units of `Δp`.
    pub half_width: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 4096,
            half_width: 12.0,
        }
    }
}

/// `f(p) = (2π)^(-1/4) Δp^(-1/2) exp(-(p - p₀)²/(4Δp²))` on
/// `[p₀ - w Δp, p₀ + w Δp]`.
pub fn gaussian_packet(
    p0: f64,
    dp: f64,
    mass: f64,
    deformation: Deformation,
    grid: &GridSpec,
) -> Result<MomentumWavepacket> {
    if !(dp > 0.0) {
        return Err(Error::Parameter {
            name: "delta_p",
            value: dp,
            reason: "must be positive",
        });
    }
    let p_min = p0 - grid.half_width * dp;
    let step = 2.0 * grid.half_width * dp / (grid.points.max(2) - 1) as f64;
    let amp = (2.0 * PI).powf(-0.25) / dp.sqrt();
    let values = (0..grid.points)
        .map(|j| {
            let d = p_min + j as f64 * step - p0;
            Complex64::new(amp * (-d * d / (4.0 * dp * dp)).exp(), 0.0)
        })
        .collect();
    MomentumWavepacket::new(p_min, step, values, mass, deformation)
}

/// The packet after a further time `tau`.
pub fn evolve_free(packet: &MomentumWavepacket, tau: f64) -> MomentumWavepacket {
    let mut out = packet.clone();
    out.phase_time += tau;
    out
}

/// `⟨v̂⟩ = ∫|f|² v(p) dp`; unchanged by evolution.
pub fn velocity_expectation(packet: &MomentumWavepacket) -> f64 {
    packet.integrate(|j| {
        packet.initial[j].norm_sqr()
            * group_velocity(packet.momenta[j], packet.mass, &packet.deformation)
    })
}

/// `ψ(τ, x) = (2πħ)^(-1/2) ∫ f(p) e^{i(px - E(p)τ)/ħ} dp` by the trapezoid
/// rule.
///
/// Positions must satisfy `|x| < πħ/Δp_grid`, beyond which the sampled
/// phase `px/ħ` aliases.
pub fn position_wavefunction(packet: &MomentumWavepacket, xs: &[f64]) -> Result<Vec<Complex64>> {
    let hbar = packet.deformation.hbar();
    let limit = PI * hbar / packet.step;
    if let Some(&x) = xs.iter().find(|x| !(x.abs() < limit)) {
        return Err(Error::Resolution { x, limit });
    }
    let n = packet.momenta.len();
    let weighted: Vec<Complex64> = packet
        .values()
        .into_iter()
        .enumerate()
        .map(|(j, v)| v * trapezoid_weight(j, n, packet.step))
        .collect();
    let pref = 1.0 / (2.0 * PI * hbar).sqrt();
    let p_min = packet.momenta[0];
    Ok(xs
        .iter()
        .map(|&x| {
            let mut phase = Complex64::from_polar(1.0, p_min * x / hbar);
            let rot = Complex64::from_polar(1.0, packet.step * x / hbar);
            let mut acc = Complex64::new(0.0, 0.0);
            for w in &weighted {
                acc += w * phase;
                phase *= rot;
            }
            acc * pref
        })
        .collect())
}

/// Mean and spread of the position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionMoments {
    pub mean_x: f64,
    pub delta_x: f64,
}

/// Moments of the position after a further time `tau`.
///
/// In the momentum representation `x̂ = iħ∂_p`, and on `f(p)e^{-iE(p)τ/ħ}`
/// this gives `e^{-iEτ/ħ}(iħf′ + τ v(p) f)`. `f′` is taken by fourth-order
/// differences, which the decay gate keeps accurate at the grid ends.
pub fn position_moments(packet: &MomentumWavepacket, tau: f64) -> PositionMoments {
    let m = InitialMoments::at(packet, packet.phase_time + tau);
    PositionMoments {
        mean_x: m.mean_x,
        delta_x: m.delta_x,
    }
}

/// Mean and spread of `|ψ(x)|²` sampled on a uniform grid, by the
/// trapezoid rule and normalized by the sampled integral.
pub fn sampled_position_moments(xs: &[f64], psi: &[Complex64]) -> Result<PositionMoments> {
    if xs.len() < 2 || xs.len() != psi.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len().max(2),
            found: psi.len(),
        });
    }
    let h = xs[1] - xs[0];
    let n = xs.len();
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (k, (&x, v)) in xs.iter().zip(psi).enumerate() {
        let r = v.norm_sqr() * trapezoid_weight(k, n, h);
        m0 += r;
        m1 += r * x;
        m2 += r * x * x;
    }
    let mean_x = m1 / m0;
    Ok(PositionMoments {
        mean_x,
        delta_x: (m2 / m0 - mean_x * mean_x).max(0.0).sqrt(),
    })
}

/// Position and velocity moments entering the spreading law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialMoments {
    pub mean_x: f64,
    pub delta_x: f64,
    pub mean_v: f64,
    pub delta_v: f64,
    /// `⟨v̂x̂ + x̂v̂⟩`.
    pub symmetrized_xv: f64,
}

impl InitialMoments {
    /// Moments of `packet` at its accumulated time.
    pub fn of(packet: &MomentumWavepacket) -> Self {
        Self::at(packet, packet.phase_time)
    }

    fn at(packet: &MomentumWavepacket, tau: f64) -> Self {
        let hbar = packet.deformation.hbar();
        let f = &packet.initial;
        let df = fd4_derivative(f, packet.step);
        let v: Vec<f64> = packet
            .momenta
            .iter()
            .map(|&p| group_velocity(p, packet.mass, &packet.deformation))
            .collect();
        // x̂ψ with the common phase removed
        let g: Vec<Complex64> = (0..f.len())
            .map(|j| df[j] * Complex64::new(0.0, hbar) + f[j] * (tau * v[j]))
            .collect();
        let mean_x = packet.integrate(|j| (f[j].conj() * g[j]).re);
        let x2 = packet.integrate(|j| g[j].norm_sqr());
        let mean_v = packet.integrate(|j| f[j].norm_sqr() * v[j]);
        let v2 = packet.integrate(|j| f[j].norm_sqr() * v[j] * v[j]);
        let symmetrized_xv = 2.0 * packet.integrate(|j| v[j] * (f[j].conj() * g[j]).re);
        Self {
            mean_x,
            delta_x: (x2 - mean_x * mean_x).max(0.0).sqrt(),
            mean_v,
            delta_v: (v2 - mean_v * mean_v).max(0.0).sqrt(),
            symmetrized_xv,
        }
    }
}

/// `Δx(τ) = √(Δx₀² + τ(⟨v̂x̂ + x̂v̂⟩₀ - 2⟨x̂⟩₀⟨v̂⟩₀) + τ²Δv₀²)`.
pub fn spread_closed_form(initial: &InitialMoments, tau: f64) -> f64 {
    let lin = initial.symmetrized_xv - 2.0 * initial.mean_x * initial.mean_v;
    (initial.delta_x.powi(2) + tau * lin + tau * tau * initial.delta_v.powi(2))
        .max(0.0)
        .sqrt()
}
