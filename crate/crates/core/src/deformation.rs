//! The deformation map shared by the model systems, including the
//! undeformed limit κ = 0 that [`ClockParams`] excludes.

use crate::clock::ClockParams;
use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::operator::{
    apply_spectral_function, diagonalize, CVector, HermitianOperator, SpectralDecomposition,
    UnitaryOperator,
};

/// κ ≥ 0 and ħ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    kappa: f64,
    hbar: f64,
}

impl Deformation {
    pub fn new(kappa: f64, hbar: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::Parameter {
                name: "kappa",
                value: kappa,
                reason: "must be non-negative and finite",
            });
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Parameter {
                name: "hbar",
                value: hbar,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { kappa, hbar })
    }

    /// Ordinary quantum mechanics.
    pub fn standard(hbar: f64) -> Result<Self> {
        Self::new(0.0, hbar)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn is_deformed(&self) -> bool {
        self.kappa > 0.0
    }

    /// `arctan(√κ x)/√κ`, or `x` when κ = 0.
    pub fn rate(&self, x: f64) -> f64 {
        if self.kappa == 0.0 {
            x
        } else {
            let sk = self.kappa.sqrt();
            (sk * x).atan() / sk
        }
    }

    /// Energy of an eigenstate of the effective Hamiltonian,
    /// `(ħ/√κ) arctan(√κ E/ħ)`.
    pub fn effective_energy(&self, e: f64) -> f64 {
        self.hbar * self.rate(e / self.hbar)
    }

    pub fn clock(&self) -> Option<ClockParams> {
        ClockParams::new(self.kappa, 0.0, self.hbar).ok()
    }

    /// The effective Hamiltonian; returns a copy of `h` when κ = 0.
    pub fn effective_hamiltonian(&self, h: &HermitianOperator) -> Result<HermitianOperator> {
        if self.kappa == 0.0 {
            Ok(h.clone())
        } else {
            apply_spectral_function(h, |e| self.effective_energy(e))
        }
    }
}

/// A system Hamiltonian diagonalized once and evolved under the effective
/// Hamiltonian at any number of times.
#[derive(Debug, Clone)]
pub struct Dynamics {
    decomposition: SpectralDecomposition,
    rates: Vec<f64>,
}

impl Dynamics {
    pub fn new(h: &HermitianOperator, deformation: &Deformation) -> Result<Self> {
        let decomposition = diagonalize(h)?;
        let rates = decomposition
            .eigenvalues()
            .iter()
            .map(|&e| deformation.effective_energy(e) / deformation.hbar())
            .collect();
        Ok(Self {
            decomposition,
            rates,
        })
    }

    pub fn dim(&self) -> usize {
        self.rates.len()
    }

    /// Angular frequencies `E_eff / ħ` in the eigenbasis of `H`, ascending.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// `exp(-iτ H_eff/ħ) ψ`.
    pub fn evolve(&self, psi: &CVector, tau: f64) -> Result<CVector> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        let u = self.decomposition.eigenvectors();
        let mut coeffs = u.adjoint() * psi;
        for (c, &r) in coeffs.iter_mut().zip(&self.rates) {
            *c *= Complex64::from_polar(1.0, -tau * r);
        }
        Ok(u * coeffs)
    }

    pub fn propagator(&self, tau: f64) -> Result<UnitaryOperator> {
        let u = self.decomposition.eigenvectors();
        let mut scaled = u.clone();
        for (mut col, &r) in scaled.column_iter_mut().zip(&self.rates) {
            col *= Complex64::from_polar(1.0, -tau * r);
        }
        UnitaryOperator::new(scaled * u.adjoint())
    }
}

impl From<ClockParams> for Deformation {
    fn from(c: ClockParams) -> Self {
        Self {
            kappa: c.kappa(),
            hbar: c.hbar(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{effective_hamiltonian, max_abs_diff};
    use crate::pauli::sigma_z;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Deformation::new(-1.0, 1.0).is_err());
        assert!(Deformation::new(1.0, 0.0).is_err());
        assert!(Deformation::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn undeformed_rate_is_identity() {
        let d = Deformation::standard(1.0).unwrap();
        assert_eq!(d.rate(3.7), 3.7);
        assert!(d.clock().is_none());
    }

    #[test]
    fn matches_clock_route() {
        let clock = ClockParams::new(0.3, 0.0, 1.7).unwrap();
        let d = Deformation::from(clock);
        let h = HermitianOperator::new(sigma_z() * num_complex::Complex64::new(2.5, 0.0)).unwrap();
        let a = d.effective_hamiltonian(&h).unwrap();
        let b = effective_hamiltonian(&h, &clock).unwrap();
        assert!(max_abs_diff(a.entries(), b.entries()) < 1e-14);
        assert!(
            (d.effective_energy(2.5) - 1.7 / 0.3f64.sqrt() * (0.3f64.sqrt() * 2.5 / 1.7).atan())
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn cached_dynamics_matches_propagator() {
        let clock = ClockParams::new(0.2, 0.0, 1.0).unwrap();
        let d = Deformation::from(clock);
        let m = crate::pauli::sigma_x() * num_complex::Complex64::new(0.7, 0.0)
            + sigma_z() * num_complex::Complex64::new(-1.3, 0.0);
        let h = HermitianOperator::new(m).unwrap();
        let dyn_ = Dynamics::new(&h, &d).unwrap();
        let u = crate::operator::propagator(&effective_hamiltonian(&h, &clock).unwrap(), 2.3, 1.0)
            .unwrap();
        assert!(max_abs_diff(dyn_.propagator(2.3).unwrap().entries(), u.entries()) < 1e-13);
        let psi = crate::operator::CVector::from_vec(vec![
            num_complex::Complex64::new(0.6, 0.0),
            num_complex::Complex64::new(0.0, 0.8),
        ]);
        let a = dyn_.evolve(&psi, 2.3).unwrap();
        let b = u.apply(&psi).unwrap();
        assert!((a - b).norm() < 1e-13);
    }
}
