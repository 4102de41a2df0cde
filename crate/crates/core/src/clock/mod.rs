//! The deformed clock space.
//!
//! The clock is described by time and frequency operators whose commutator
//! is `i(1 + κΩ²)`. Three equivalent representations of clock states are
//! implemented here:
//!
//! * the frequency representation ψ(ω), square integrable against
//!   `dμ = dω / (1 + κω²)` ([`FrequencyWavefunction`]);
//! * the continuous time representation ψ(τ), the overlap with the state
//!   maximally localized around τ ([`freq_to_continuous`]);
//! * the discrete time representation ψₙ = ψ(2√κ(λ + n)) on a shifted
//!   lattice ([`TimeSampleSequence`]).
//!
//! Quadratures run in the warped coordinate `x = 2 arctan(√κ ω)`, under
//! which `dμ = dx / (2√κ)` on `(-π, π)`.

mod discrete;
mod transforms;
mod wavefunction;

pub use discrete::{
    catalan_coefficients, discrete_derivative, discrete_frequency_apply, sinc_reconstruct,
    symbol_f, symbol_f_inverse, FrequencySeries, TimeSampleSequence,
};
pub use transforms::{
    continuous_to_freq, continuous_to_freq_many, discrete_to_freq, freq_to_continuous,
    freq_to_discrete, TimeQuadrature, Truncated,
};
pub use wavefunction::{
    maximal_localization_state, uncertainty_stats, warped_gaussian, FrequencyGrid,
    FrequencyWavefunction, UncertaintyStats, DEFAULT_GRID_POINTS,
};

use crate::error::{Error, Result};

/// Deformation κ, lattice shift λ and ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockParams {
    kappa: f64,
    lambda: f64,
    hbar: f64,
}

impl ClockParams {
    pub fn new(kappa: f64, lambda: f64, hbar: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Parameter {
                name: "kappa",
                value: kappa,
                reason: "must be positive and finite",
            });
        }
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::Parameter {
                name: "lambda",
                value: lambda,
                reason: "lattice shift must lie in [0, 1)",
            });
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Parameter {
                name: "hbar",
                value: hbar,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            kappa,
            lambda,
            hbar,
        })
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.kappa, lambda, self.hbar)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Smallest achievable time uncertainty, √κ.
    pub fn delta_t0(&self) -> f64 {
        self.kappa.sqrt()
    }

    /// Lattice spacing 2√κ.
    pub fn lattice_spacing(&self) -> f64 {
        2.0 * self.delta_t0()
    }

    /// Lattice site `2√κ(λ + n)`.
    pub fn lattice_time(&self, n: i64) -> f64 {
        self.lattice_spacing() * (self.lambda + n as f64)
    }
}

/// Smallest time uncertainty admitted by the deformed uncertainty relation,
/// `(1 + κΔω² + κ⟨Ω⟩²) / (2Δω)`.
pub fn gup_bound(delta_omega: f64, mean_omega: f64, kappa: f64) -> Result<f64> {
    if !(delta_omega > 0.0) {
        return Err(Error::Domain {
            function: "gup_bound",
            value: delta_omega,
        });
    }
    if kappa < 0.0 {
        return Err(Error::Parameter {
            name: "kappa",
            value: kappa,
            reason: "must be non-negative",
        });
    }
    Ok(
        (1.0 + kappa * delta_omega * delta_omega + kappa * mean_omega * mean_omega)
            / (2.0 * delta_omega),
    )
}

/// Minimum of [`gup_bound`] over Δω, `√(κ(1 + κ⟨Ω⟩²))`.
pub fn min_time_uncertainty(mean_omega: f64, kappa: f64) -> f64 {
    (kappa * (1.0 + kappa * mean_omega * mean_omega)).sqrt()
}

/// `sin(πx)`, exactly zero at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() > 0.5 {
        r.signum() * (std::f64::consts::PI * (1.0 - r.abs())).sin()
    } else {
        (std::f64::consts::PI * r).sin()
    }
}

/// Normalized sinc, `sin(πx) / (πx)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let y = (std::f64::consts::PI * x).powi(2);
        1.0 - y / 6.0 + y * y / 120.0
    } else {
        sin_pi(x) / (std::f64::consts::PI * x)
    }
}

/// Overlap of the states maximally localized around `tau` and `tau_prime`,
/// `sin(πu) / (π(u - u³))` with `u = (τ - τ')/(2√κ)`.
///
/// The removable singularities at `u = 0, ±1` are handled by rewriting the
/// expression as `sinc(u)/(1 - u²)` near the origin and as
/// `sinc(1 - |u|) / (|u|(1 + |u|))` elsewhere.
pub fn ml_overlap(tau: f64, tau_prime: f64, clock: &ClockParams) -> f64 {
    let u = (tau - tau_prime) / clock.lattice_spacing();
    let a = u.abs();
    if a < 0.5 {
        sinc(u) / (1.0 - u * u)
    } else {
        sinc(1.0 - a) / (a * (1.0 + a))
    }
}
