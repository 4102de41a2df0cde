use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::ClockParams;
use crate::error::{Error, Result};
use crate::numerics::fd4_derivative;

pub const DEFAULT_GRID_POINTS: usize = 4096;

/// Quadrature grid for the frequency representation.
///
/// Nodes are the midpoints of a uniform partition of `(-π, π)` in the warped
/// coordinate `x = 2 arctan(√κ ω)`; every node carries the same weight
/// `h / (2√κ)` for the measure `dμ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    kappa: f64,
    x: Vec<f64>,
    omega: Vec<f64>,
    cos_half: Vec<f64>,
    step: f64,
}

impl FrequencyGrid {
    pub fn new(kappa: f64, points: usize) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Parameter {
                name: "kappa",
                value: kappa,
                reason: "must be positive and finite",
            });
        }
        if points < 16 {
            return Err(Error::Grid(format!(
                "frequency grid needs at least 16 points, got {points}"
            )));
        }
        let sk = kappa.sqrt();
        let step = 2.0 * PI / points as f64;
        let x: Vec<f64> = (0..points).map(|j| -PI + (j as f64 + 0.5) * step).collect();
        let omega = x.iter().map(|&x| (0.5 * x).tan() / sk).collect();
        let cos_half = x.iter().map(|&x| (0.5 * x).cos()).collect();
        Ok(Self {
            kappa,
            x,
            omega,
            cos_half,
            step,
        })
    }

    pub fn for_clock(clock: &ClockParams) -> Self {
        Self::new(clock.kappa(), DEFAULT_GRID_POINTS).expect("clock parameters are validated")
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Warped coordinates `x_j`, strictly increasing in `(-π, π)`.
    pub fn warped(&self) -> &[f64] {
        &self.x
    }

    /// Frequencies `ω_j = tan(x_j / 2) / √κ`, strictly increasing.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// `(1 + κω_j²)^(-1/2) = cos(x_j / 2)`.
    pub fn cos_half(&self) -> &[f64] {
        &self.cos_half
    }

    /// Uniform quadrature weight for `dμ`.
    pub fn weight(&self) -> f64 {
        self.step / (2.0 * self.kappa.sqrt())
    }

    /// Spacing in the warped coordinate.
    pub fn step(&self) -> f64 {
        self.step
    }

    fn same_as(&self, other: &Self) -> bool {
        self.kappa == other.kappa && self.len() == other.len()
    }
}

/// Samples of a clock state ψ(ω) on a [`FrequencyGrid`].
#[derive(Debug, Clone)]
pub struct FrequencyWavefunction {
    grid: Arc<FrequencyGrid>,
    values: Vec<Complex64>,
    norm_sq: f64,
}

impl FrequencyWavefunction {
    pub fn from_values(grid: Arc<FrequencyGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let norm_sq = grid.weight() * values.iter().map(|v| v.norm_sqr()).sum::<f64>();
        if !norm_sq.is_finite() {
            return Err(Error::Grid("wavefunction has non-finite norm".into()));
        }
        Ok(Self {
            grid,
            values,
            norm_sq,
        })
    }

    /// Samples `f(ω)` at the grid frequencies.
    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<FrequencyGrid>, f: F) -> Result<Self> {
        let values = grid.omega().iter().map(|&w| f(w)).collect();
        Self::from_values(grid, values)
    }

    /// Samples `g(x)` as a function of the warped coordinate, so that
    /// ψ(ω) = g(2 arctan(√κ ω)).
    pub fn from_warped_fn<F: Fn(f64) -> Complex64>(grid: Arc<FrequencyGrid>, g: F) -> Result<Self> {
        let values = grid.warped().iter().map(|&x| g(x)).collect();
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `∫ dμ |ψ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.norm_sq <= 0.0 {
            return Err(Error::Grid("cannot normalize the zero state".into()));
        }
        let s = 1.0 / self.norm_sq.sqrt();
        Self::from_values(
            self.grid.clone(),
            self.values.iter().map(|v| v * s).collect(),
        )
    }

    /// `∫ dμ conj(self) other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.grid.weight())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::from_values(self.grid.clone(), values)
    }

    /// The frequency operator, multiplication by ω.
    pub fn apply_frequency(&self) -> Result<Self> {
        let values = self
            .values
            .iter()
            .zip(self.grid.omega())
            .map(|(v, &w)| v * w)
            .collect();
        Self::from_values(self.grid.clone(), values)
    }

    /// The time operator `i(1 + κω²)∂_ω`, evaluated as `2i√κ ∂_x` on the
    /// warped grid with fourth-order differences.
    pub fn apply_time(&self) -> Result<Self> {
        let d = fd4_derivative(&self.values, self.grid.step());
        let factor = Complex64::new(0.0, 2.0 * self.grid.kappa().sqrt());
        Self::from_values(
            self.grid.clone(),
            d.into_iter().map(|v| v * factor).collect(),
        )
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::Grid("wavefunctions live on different grids".into()))
        }
    }
}

/// Normalized Gaussian in the warped coordinate,
/// `exp(-(x - center)²/(2 width²) + i slope x)`.
///
/// In time such a state is centred near `τ = -2√κ·slope`.
pub fn warped_gaussian(
    grid: Arc<FrequencyGrid>,
    center: f64,
    width: f64,
    slope: f64,
) -> Result<FrequencyWavefunction> {
    if !(width > 0.0) {
        return Err(Error::Parameter {
            name: "width",
            value: width,
            reason: "must be positive",
        });
    }
    FrequencyWavefunction::from_warped_fn(grid, |x| {
        Complex64::from_polar(
            (-(x - center).powi(2) / (2.0 * width * width)).exp(),
            slope * x,
        )
    })?
    .normalized()
}

/// The state maximally localized around `tau`:
/// `√(2√κ/π) (1 + κω²)^(-1/2) exp(-iτ arctan(√κω)/√κ)`.
pub fn maximal_localization_state(tau: f64, grid: Arc<FrequencyGrid>) -> FrequencyWavefunction {
    let sk = grid.kappa().sqrt();
    let amp = (2.0 * sk / PI).sqrt();
    let rate = tau / (2.0 * sk);
    FrequencyWavefunction::from_warped_fn(grid, |x| {
        Complex64::from_polar(amp * (0.5 * x).cos(), -rate * x)
    })
    .expect("closed-form state is finite")
}

/// First and second moments of the time and frequency operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyStats {
    pub mean_t: f64,
    pub delta_t: f64,
    pub mean_omega: f64,
    pub delta_omega: f64,
    /// Set when the input was not normalized and was rescaled first.
    pub renormalized: bool,
}

impl UncertaintyStats {
    /// `ΔT·ΔΩ - (1 + κΔΩ² + κ⟨Ω⟩²)/2`; non-negative for physical states.
    pub fn gup_margin(&self, kappa: f64) -> f64 {
        self.delta_t * self.delta_omega
            - 0.5 * (1.0 + kappa * self.delta_omega.powi(2) + kappa * self.mean_omega.powi(2))
    }
}

/// Moments of Ω̂ (multiplication by ω) and T̂ under `dμ`.
///
/// `ΔT` is taken as `‖(T̂ - ⟨T̂⟩)ψ‖`, which is the meaningful spread for a
/// symmetric but not self-adjoint time operator.
pub fn uncertainty_stats(psi: &FrequencyWavefunction) -> Result<UncertaintyStats> {
    let renormalized = (psi.norm_sq() - 1.0).abs() > 1e-12;
    let psi = if renormalized {
        psi.normalized()?
    } else {
        psi.clone()
    };
    let w = psi.grid().weight();

    let (mut m1, mut m2) = (0.0, 0.0);
    for (v, &om) in psi.values().iter().zip(psi.grid().omega()) {
        let p = v.norm_sqr();
        m1 += om * p;
        m2 += om * om * p;
    }
    let mean_omega = w * m1;
    let var_omega = (w * m2 - mean_omega * mean_omega).max(0.0);

    let t_psi = psi.apply_time()?;
    let mean_t = psi.inner(&t_psi)?.re;
    let t_sq = t_psi.norm_sq();
    let var_t = (t_sq - mean_t * mean_t).max(0.0);

    Ok(UncertaintyStats {
        mean_t,
        delta_t: var_t.sqrt(),
        mean_omega,
        delta_omega: var_omega.sqrt(),
        renormalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(kappa: f64) -> Arc<FrequencyGrid> {
        Arc::new(FrequencyGrid::new(kappa, DEFAULT_GRID_POINTS).unwrap())
    }

    #[test]
    fn grid_is_increasing_and_symmetric() {
        let g = grid(0.3);
        assert!(g.omega().windows(2).all(|w| w[0] < w[1]));
        assert!(g.warped().iter().all(|x| x.abs() < PI));
        let n = g.len();
        assert!((g.omega()[0] + g.omega()[n - 1]).abs() < 1e-9 * g.omega()[n - 1]);
    }

    #[test]
    fn ml_state_is_normalized() {
        let g = grid(0.04);
        for tau in [-3.0, 0.0, 0.7, 25.0] {
            let phi = maximal_localization_state(tau, g.clone());
            assert!((phi.norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ml_state_saturates_minimal_uncertainty() {
        let kappa: f64 = 0.09;
        let g = grid(kappa);
        for tau in [-1.1, 0.0, 0.4, 3.0] {
            let s = uncertainty_stats(&maximal_localization_state(tau, g.clone())).unwrap();
            assert!((s.mean_t - tau).abs() < 1e-6, "{s:?}");
            assert!((s.delta_t - kappa.sqrt()).abs() < 1e-6, "{s:?}");
            assert!(s.mean_omega.abs() < 1e-8);
            assert!((s.delta_omega - 1.0 / kappa.sqrt()).abs() < 1e-6, "{s:?}");
            assert!(s.gup_margin(kappa).abs() < 1e-6);
            assert!(!s.renormalized);
        }
    }

    #[test]
    fn time_operator_on_ml_state_matches_closed_form() {
        // T φ_τ = τ φ_τ - i√κ √(2√κ/π) sin(x/2) e^{-iτx/(2√κ)}
        let kappa: f64 = 0.25;
        let sk = kappa.sqrt();
        let g = grid(kappa);
        let tau = 1.3;
        let phi = maximal_localization_state(tau, g.clone());
        let t_phi = phi.apply_time().unwrap();
        let amp = (2.0 * sk / PI).sqrt();
        let worst = g
            .warped()
            .iter()
            .zip(phi.values().iter().zip(t_phi.values()))
            .map(|(&x, (p, tp))| {
                let expected = p * tau
                    + Complex64::new(0.0, -sk)
                        * Complex64::from_polar(amp * (0.5 * x).sin(), -tau * x / (2.0 * sk));
                (tp - expected).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn even_real_state_has_zero_mean_frequency() {
        let g = grid(0.5);
        let psi =
            FrequencyWavefunction::from_warped_fn(g, |x| Complex64::new((-x * x / 0.2).exp(), 0.0))
                .unwrap();
        let s = uncertainty_stats(&psi).unwrap();
        assert!(s.renormalized);
        assert!(s.mean_omega.abs() < 1e-12);
    }

    #[test]
    fn combine_requires_same_grid() {
        let a = maximal_localization_state(0.0, grid(0.5));
        let b = maximal_localization_state(0.0, grid(0.4));
        assert!(a
            .combine(Complex64::new(1.0, 0.0), &b, Complex64::new(1.0, 0.0))
            .is_err());
    }
}
