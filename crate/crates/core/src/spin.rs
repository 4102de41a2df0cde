//! One, two and three spin-1/2 particles in a magnetic field along z.
//!
//! Closed-form evolutions are provided alongside the operator route
//! (spectral effective Hamiltonian and propagator), which is the reference
//! every closed form is tested against. Basis ordering follows
//! [`crate::pauli`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clock::ClockParams;
use crate::deformation::{Deformation, Dynamics};
use crate::error::{Error, Result};
use crate::operator::{diagonalize, max_abs, CMatrix, CVector, HermitianOperator};
use crate::pauli::{embed, kron_all, pauli_string, sigma_plus, sigma_z, total_z, Pauli};

const NORM_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pure spin state `cos(θ/2) e^{-iφ/2}|↑⟩ + sin(θ/2) e^{iφ/2}|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub theta: f64,
    pub phi: f64,
}

impl BlochState {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        let (s, co) = (self.theta / 2.0).sin_cos();
        [
            Complex64::from_polar(co, -self.phi / 2.0),
            Complex64::from_polar(s, self.phi / 2.0),
        ]
    }

    pub fn vector(&self) -> CVector {
        CVector::from_row_slice(&self.amplitudes())
    }

    /// Angles of a normalized spinor, up to its global phase. `θ` is
    /// returned in `[0, π]` and `φ` in `(-π, π]`; `φ` is set to zero at the
    /// poles.
    pub fn from_spinor(v: &CVector) -> Result<Self> {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.len(),
            });
        }
        let defect = (v.norm() - 1.0).abs();
        if defect > 1e-10 {
            return Err(Error::Precondition {
                condition: "spinor normalized",
                residual: defect,
                tolerance: 1e-10,
            });
        }
        let theta = 2.0 * v[1].norm().atan2(v[0].norm());
        let phi = if v[0].norm() < 1e-14 || v[1].norm() < 1e-14 {
            0.0
        } else {
            (v[0].conj() * v[1]).arg()
        };
        Ok(Self { theta, phi })
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let a = self.amplitudes();
        let b = other.amplitudes();
        (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
    }
}

/// Normalized state of one to three spins.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSpinState {
    n_spins: usize,
    amplitudes: CVector,
}

impl MultiSpinState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n_spins = match amplitudes.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            other => {
                return Err(Error::DimensionMismatch {
                    expected: 8,
                    found: other,
                })
            }
        };
        let defect = (amplitudes.norm_squared() - 1.0).abs();
        if defect > NORM_TOL {
            return Err(Error::Precondition {
                condition: "state normalized",
                residual: defect,
                tolerance: NORM_TOL,
            });
        }
        Ok(Self {
            n_spins,
            amplitudes,
        })
    }

    /// `|s₀⟩ ⊗ |s₁⟩ ⊗ …`.
    pub fn product(spins: &[BlochState]) -> Result<Self> {
        let columns: Vec<CMatrix> = spins
            .iter()
            .map(|s| CMatrix::from_column_slice(2, 1, &s.amplitudes()))
            .collect();
        let k = kron_all(&columns);
        Self::new(CVector::from_column_slice(k.as_slice()))
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

/// Reduced or full density matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let h =
            HermitianOperator::new(entries).map_err(|e| Error::InvalidDensity(e.to_string()))?;
        let trace = h.entries().trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let eigenvalues = diagonalize(&h)?.eigenvalues().to_vec();
        if eigenvalues[0] < -NORM_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:e}",
                eigenvalues[0]
            )));
        }
        Ok(Self {
            entries: h.into_inner(),
            eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }
}

/// Precession frequency of a single spin, `(2/√κ) arctan(√κω₀/2)`.
pub fn larmor_frequency_kappa(omega0: f64, kappa: f64) -> f64 {
    if kappa <= 0.0 {
        return omega0;
    }
    2.0 * (kappa.sqrt() * omega0 / 2.0).atan() / kappa.sqrt()
}

/// `(ħω₀/2) σ_z`.
pub fn single_spin_hamiltonian(omega0: f64, hbar: f64) -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[hbar * omega0 / 2.0, -hbar * omega0 / 2.0])
        .expect("2x2 diagonal is Hermitian")
}

/// `|θ, φ + ω_κτ⟩`.
pub fn single_spin_evolve(
    s: BlochState,
    omega0: f64,
    deformation: &Deformation,
    tau: f64,
) -> BlochState {
    BlochState::new(
        s.theta,
        s.phi + larmor_frequency_kappa(omega0, deformation.kappa()) * tau,
    )
}

/// Operator route for one spin.
pub fn single_spin_evolve_operator(
    s: BlochState,
    omega0: f64,
    deformation: &Deformation,
    tau: f64,
) -> Result<CVector> {
    let h = single_spin_hamiltonian(omega0, deformation.hbar());
    Dynamics::new(&h, deformation)?.evolve(&s.vector(), tau)
}

/// `⟨σ₊⟩ = ⟨ψ|↑⟩⟨↓|ψ⟩`, whose phase is the azimuth φ of the spin.
pub fn sigma_plus_expectation(spinor: &CVector) -> Complex64 {
    spinor.dotc(&(sigma_plus() * spinor))
}

/// Slope of the unwrapped phase of `samples` against `times`, by least
/// squares.
pub fn phase_rate(times: &[f64], samples: &[Complex64]) -> Result<f64> {
    if times.len() != samples.len() || times.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: times.len().max(2),
            found: samples.len(),
        });
    }
    let mut phases = Vec::with_capacity(samples.len());
    let mut prev = samples[0].arg();
    let mut offset = 0.0;
    for z in samples {
        let a = z.arg();
        if a - prev > PI {
            offset -= 2.0 * PI;
        } else if a - prev < -PI {
            offset += 2.0 * PI;
        }
        phases.push(a + offset);
        prev = a;
    }
    let n = times.len() as f64;
    let tm = times.iter().sum::<f64>() / n;
    let pm = phases.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, p) in times.iter().zip(&phases) {
        sxy += (t - tm) * (p - pm);
        sxx += (t - tm) * (t - tm);
    }
    Ok(sxy / sxx)
}

/// Precession frequency measured from the simulated phase of `⟨σ₊⟩(τ)`.
///
/// The spin starts at `|π/2, 0⟩` and is evolved by the operator route at
/// `samples` times spaced so the phase advances by at most `π/4` per step.
pub fn measured_precession_frequency(
    omega0: f64,
    deformation: &Deformation,
    samples: usize,
) -> Result<f64> {
    let h = single_spin_hamiltonian(omega0, deformation.hbar());
    let dynamics = Dynamics::new(&h, deformation)?;
    let rate = (dynamics.rates()[1] - dynamics.rates()[0])
        .abs()
        .max(f64::MIN_POSITIVE);
    let dt = PI / 4.0 / rate;
    let psi0 = BlochState::new(PI / 2.0, 0.0).vector();
    let mut times = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for k in 0..samples.max(2) {
        let t = k as f64 * dt;
        times.push(t);
        values.push(sigma_plus_expectation(&dynamics.evolve(&psi0, t)?));
    }
    phase_rate(&times, &values)
}

/// `H₀ = (ħω₀/2)(σ_z⊗I + I⊗σ_z)` and `H₁ = (ħ²λ/4)(σ_x⊗σ_x + σ_y⊗σ_y)`.
pub fn two_spin_hamiltonians(
    omega0: f64,
    lambda: f64,
    hbar: f64,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let h0 = total_z(2) * c(hbar * omega0 / 2.0, 0.0);
    let h1 = (pauli_string(&[Pauli::X, Pauli::X]) + pauli_string(&[Pauli::Y, Pauli::Y]))
        * c(hbar * hbar * lambda / 4.0, 0.0);
    let product = max_abs(&(&h0 * &h1)) + max_abs(&(&h1 * &h0));
    if product > 1e-14 * (1.0 + max_abs(&h0) * max_abs(&h1)) {
        return Err(Error::Precondition {
            condition: "H0 H1 = H1 H0 = 0",
            residual: product,
            tolerance: 1e-14,
        });
    }
    Ok((HermitianOperator::new(h0)?, HermitianOperator::new(h1)?))
}

/// Deformed rates of the two-spin model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinRates {
    /// `(1/√κ) arctan(√κω₀)`.
    pub omega_kappa: f64,
    /// `(2/(ħ√κ)) arctan(ħ√κλ/2)`.
    pub lambda_kappa: f64,
}

pub fn two_spin_rates(omega0: f64, lambda: f64, deformation: &Deformation) -> TwoSpinRates {
    let hbar = deformation.hbar();
    TwoSpinRates {
        omega_kappa: deformation.rate(omega0),
        lambda_kappa: 2.0 / hbar * deformation.rate(hbar * lambda / 2.0),
    }
}

/// Closed-form evolution of `|θ,φ⟩⊗|θ,φ⟩`:
/// `cos²(θ/2) e^{-i(φ+ω_κτ)}|↑↑⟩ + sin²(θ/2) e^{i(φ+ω_κτ)}|↓↓⟩
///  + ½ sin θ e^{-iħλ_κτ/2}(|↑↓⟩ + |↓↑⟩)`.
pub fn two_spin_evolve(
    theta: f64,
    phi: f64,
    omega0: f64,
    lambda: f64,
    deformation: &Deformation,
    tau: f64,
) -> Result<MultiSpinState> {
    let r = two_spin_rates(omega0, lambda, deformation);
    let (s, co) = (theta / 2.0).sin_cos();
    let a = phi + r.omega_kappa * tau;
    let mixed = Complex64::from_polar(
        0.5 * theta.sin(),
        -deformation.hbar() * r.lambda_kappa * tau / 2.0,
    );
    MultiSpinState::new(CVector::from_vec(vec![
        Complex64::from_polar(co * co, -a),
        mixed,
        mixed,
        Complex64::from_polar(s * s, a),
    ]))
}

/// Operator route for two spins.
pub fn two_spin_evolve_operator(
    theta: f64,
    phi: f64,
    omega0: f64,
    lambda: f64,
    deformation: &Deformation,
    tau: f64,
) -> Result<MultiSpinState> {
    let dynamics = two_spin_dynamics(omega0, lambda, deformation)?;
    let psi0 = MultiSpinState::product(&[BlochState::new(theta, phi); 2])?;
    MultiSpinState::new(dynamics.evolve(psi0.amplitudes(), tau)?)
}

fn two_spin_dynamics(omega0: f64, lambda: f64, deformation: &Deformation) -> Result<Dynamics> {
    let (h0, h1) = two_spin_hamiltonians(omega0, lambda, deformation.hbar())?;
    Dynamics::new(&h0.add(&h1)?, deformation)
}

/// Reduced density matrix of spin `keep`.
pub fn partial_trace(state: &MultiSpinState, keep: usize) -> Result<DensityMatrix> {
    let n = state.n_spins();
    if n < 2 || keep >= n {
        return Err(Error::Range {
            index: keep as i64,
            min: 0,
            max: n as i64 - 1,
        });
    }
    let shift = n - 1 - keep;
    let amps = state.amplitudes();
    let mut rho = CMatrix::zeros(2, 2);
    for i in 0..amps.len() {
        let bi = (i >> shift) & 1;
        // partner index differs from i only in the kept bit
        for bj in 0..2 {
            let j = (i & !(1 << shift)) | (bj << shift);
            rho[(bi, bj)] += amps[i] * amps[j].conj();
        }
    }
    DensityMatrix::new(rho)
}

/// `-k_B Σ p ln p` over the spectrum of `rho`.
pub fn entanglement_entropy(rho: &DensityMatrix, k_b: f64) -> Result<f64> {
    let mut s = 0.0;
    for &p in rho.eigenvalues() {
        if p < -1e-10 {
            return Err(Error::InvalidDensity(format!("eigenvalue {p:e}")));
        }
        let p = p.clamp(0.0, 1.0);
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(k_b * s)
}

/// Closed form of the reduced density matrix of the first spin.
pub fn two_spin_reduced_closed_form(
    theta: f64,
    phi: f64,
    omega0: f64,
    lambda: f64,
    deformation: &Deformation,
    tau: f64,
) -> CMatrix {
    let r = two_spin_rates(omega0, lambda, deformation);
    let (s, co) = (theta / 2.0).sin_cos();
    let (c2, s2) = (co * co, s * s);
    let a = phi + r.omega_kappa * tau;
    let b = deformation.hbar() * r.lambda_kappa * tau / 2.0;
    let up_down = Complex64::from_polar(0.5 * theta.sin(), -a)
        * (Complex64::from_polar(c2, b) + Complex64::from_polar(s2, -b));
    CMatrix::from_row_slice(2, 2, &[c(c2, 0.0), up_down, up_down.conj(), c(s2, 0.0)])
}

/// Eigenvalues `p₁ ≥ p₂` of the reduced state of either spin.
pub fn two_spin_reduced_eigenvalues(
    theta: f64,
    lambda_kappa: f64,
    hbar: f64,
    tau: f64,
) -> (f64, f64) {
    let x = theta.sin().powi(4) * (hbar * lambda_kappa * tau / 2.0).sin().powi(2);
    let root = (1.0 - x).max(0.0).sqrt();
    // (1 - root)/2 written without cancellation
    let p2 = x / (2.0 * (1.0 + root));
    (1.0 - p2, p2)
}

/// Closed-form entanglement entropy of the two-spin model.
pub fn two_spin_entropy_closed_form(
    theta: f64,
    lambda: f64,
    deformation: &Deformation,
    tau: f64,
    k_b: f64,
) -> f64 {
    let r = two_spin_rates(0.0, lambda, deformation);
    let (p1, p2) = two_spin_reduced_eigenvalues(theta, r.lambda_kappa, deformation.hbar(), tau);
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    k_b * (term(p1) + term(p2))
}

/// `S(τ)` on a grid by evolving with the operator route, tracing out the
/// second spin and diagonalizing.
pub fn two_spin_entropy_series(
    theta: f64,
    omega0: f64,
    lambda: f64,
    deformation: &Deformation,
    taus: &[f64],
    k_b: f64,
) -> Result<Vec<f64>> {
    let dynamics = two_spin_dynamics(omega0, lambda, deformation)?;
    let psi0 = MultiSpinState::product(&[BlochState::new(theta, 0.0); 2])?;
    taus.iter()
        .map(|&t| {
            let state = MultiSpinState::new(dynamics.evolve(psi0.amplitudes(), t)?)?;
            entanglement_entropy(&partial_trace(&state, 0)?, k_b)
        })
        .collect()
}

/// Two-spin entanglement period `2π/(ħλ_κ)`.
pub fn two_spin_entropy_period(lambda: f64, deformation: &Deformation) -> f64 {
    2.0 * PI / (deformation.hbar() * two_spin_rates(0.0, lambda, deformation).lambda_kappa).abs()
}

/// Mean spacing of the local maxima of `f` on `[start, end]`.
///
/// Maxima are bracketed on a uniform scan of `scan_points` samples and
/// refined by golden-section search. Returns `None` with fewer than two
/// maxima.
pub fn oscillation_period<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    end: f64,
    scan_points: usize,
) -> Option<f64> {
    let n = scan_points.max(3);
    let h = (end - start) / (n - 1) as f64;
    let ys: Vec<f64> = (0..n).map(|k| f(start + k as f64 * h)).collect();
    let mut peaks = Vec::new();
    for k in 1..n - 1 {
        if ys[k] > ys[k - 1] && ys[k] >= ys[k + 1] {
            peaks.push(golden_max(
                &f,
                start + (k - 1) as f64 * h,
                start + (k + 1) as f64 * h,
            ));
        }
    }
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// `(ħω₀/2) Σ_k σ_z^{(k)}` on three spins.
pub fn three_spin_hamiltonian(omega0: f64, hbar: f64) -> HermitianOperator {
    HermitianOperator::new(total_z(3) * c(hbar * omega0 / 2.0, 0.0)).expect("diagonal real matrix")
}

/// Effective Hamiltonian of three non-interacting spins and its Pauli
/// content.
#[derive(Debug, Clone)]
pub struct ThreeSpinEffective {
    /// `(1/(4√κ))(arctan(3√κω₀/2) + arctan(√κω₀/2))`.
    pub omega_kappa: f64,
    /// `(1/(4√κ))(arctan(3√κω₀/2) - 3 arctan(√κω₀/2))`.
    pub lambda_kappa: f64,
    /// Spectral effective Hamiltonian.
    pub h_eff: HermitianOperator,
    /// Projection of `H_eff` on `σ_z` of each site.
    pub site_z: [f64; 3],
    /// Projection of `H_eff` on `σ_z⊗σ_z⊗σ_z`.
    pub zzz: f64,
    /// Largest entry of `H_eff` minus its `σ_z` and `σ_z⊗σ_z⊗σ_z` parts.
    pub remainder: f64,
}

impl ThreeSpinEffective {
    /// Rotation rate of each spin, `2 × (σ_z coefficient)/ħ`.
    pub fn single_spin_rate(&self, hbar: f64) -> f64 {
        2.0 * self.site_z[0] / hbar
    }

    /// Angular rate of the `σ_z⊗σ_z⊗σ_z` phase, `(coefficient)/ħ`.
    pub fn coupling_rate(&self, hbar: f64) -> f64 {
        self.zzz / hbar
    }
}

pub fn three_spin_effective(omega0: f64, clock: &ClockParams) -> Result<ThreeSpinEffective> {
    let sk = clock.delta_t0();
    let a3 = (3.0 * sk * omega0 / 2.0).atan();
    let a1 = (sk * omega0 / 2.0).atan();
    let h = three_spin_hamiltonian(omega0, clock.hbar());
    let h_eff = crate::operator::effective_hamiltonian(&h, clock)?;
    let z = sigma_z();
    let site_z = [0, 1, 2].map(|k| h_eff.projection(&embed(&z, k, 3)));
    let zzz_basis = pauli_string(&[Pauli::Z, Pauli::Z, Pauli::Z]);
    let zzz = h_eff.projection(&zzz_basis);
    let mut rest = h_eff.entries().clone() - &zzz_basis * c(zzz, 0.0);
    for (k, &coef) in site_z.iter().enumerate() {
        rest -= embed(&z, k, 3) * c(coef, 0.0);
    }
    Ok(ThreeSpinEffective {
        omega_kappa: (a3 + a1) / (4.0 * sk),
        lambda_kappa: (a3 - 3.0 * a1) / (4.0 * sk),
        h_eff,
        site_z,
        zzz,
        remainder: max_abs(&rest),
    })
}

/// `|-θ, φ⟩ = σ_z|θ, φ⟩`.
fn flipped(s: &BlochState) -> BlochState {
    BlochState::new(-s.theta, s.phi)
}

/// Closed-form evolution of a three-spin product state,
/// `cos(λτ) ⊗|θᵢ, φᵢ + ω′τ⟩ - i sin(λτ) ⊗|-θᵢ, φᵢ + ω′τ⟩`, with `ω′` and
/// `λ` read off the Pauli projections of the spectral `H_eff`.
pub fn three_spin_evolve(
    spins: &[BlochState; 3],
    omega0: f64,
    clock: &ClockParams,
    tau: f64,
) -> Result<MultiSpinState> {
    let eff = three_spin_effective(omega0, clock)?;
    let hbar = clock.hbar();
    let w = eff.single_spin_rate(hbar);
    let l = eff.coupling_rate(hbar);
    let rotated: Vec<BlochState> = spins
        .iter()
        .map(|s| BlochState::new(s.theta, s.phi + w * tau))
        .collect();
    let flipped: Vec<BlochState> = rotated.iter().map(flipped).collect();
    let a = MultiSpinState::product(&rotated)?;
    let b = MultiSpinState::product(&flipped)?;
    let (sl, cl) = (l * tau).sin_cos();
    let v = a.amplitudes() * c(cl, 0.0) + b.amplitudes() * c(0.0, -sl);
    // renormalize away rounding only; the closed form is exactly unitary
    let norm = v.norm();
    MultiSpinState::new(v / c(norm, 0.0))
}

/// Operator route for three spins.
pub fn three_spin_evolve_operator(
    spins: &[BlochState; 3],
    omega0: f64,
    clock: &ClockParams,
    tau: f64,
) -> Result<MultiSpinState> {
    let h = three_spin_hamiltonian(omega0, clock.hbar());
    let dynamics = Dynamics::new(&h, &Deformation::from(*clock))?;
    let psi0 = MultiSpinState::product(spins)?;
    MultiSpinState::new(dynamics.evolve(psi0.amplitudes(), tau)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn deform(kappa: f64) -> Deformation {
        Deformation::new(kappa, 1.0).unwrap()
    }

    fn clock(kappa: f64) -> ClockParams {
        ClockParams::new(kappa, 0.0, 1.0).unwrap()
    }

    fn as_state(v: CVector) -> MultiSpinState {
        MultiSpinState::new(v).unwrap()
    }

    #[test]
    fn bloch_angles_round_trip() {
        for (t, p) in [(0.3, 1.1), (2.9, -2.0), (PI / 2.0, 0.0)] {
            let s = BlochState::new(t, p);
            let v = s.vector() * Complex64::from_polar(1.0, 0.77);
            let back = BlochState::from_spinor(&v).unwrap();
            assert!((back.theta - t).abs() < 1e-14);
            assert!((back.phi - p).abs() < 1e-14);
        }
        let pole = BlochState::from_spinor(&BlochState::new(0.0, 2.0).vector()).unwrap();
        assert_eq!(pole.theta, 0.0);
    }

    #[test]
    fn larmor_limits() {
        assert_eq!(larmor_frequency_kappa(3.3, 0.0), 3.3);
        assert!((larmor_frequency_kappa(2.0, 1.0) - PI / 2.0).abs() < 1e-15);
        let w = larmor_frequency_kappa(1e9, 1.0);
        assert!(w < PI && PI - w < 1e-8);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..200 {
            let w = larmor_frequency_kappa(-50.0 + k as f64 * 0.5, 0.3);
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn single_spin_closed_form_against_operator_route() {
        let d = deform(0.4);
        let w = larmor_frequency_kappa(3.0, 0.4);
        for tau in [0.0, 0.7, PI / w, 5.3] {
            let s = BlochState::new(1.1, 0.4);
            let closed = single_spin_evolve(s, 3.0, &d, tau);
            let op = single_spin_evolve_operator(s, 3.0, &d, tau).unwrap();
            let fid = closed.vector().dotc(&op).norm_sqr();
            assert!((1.0 - fid).abs() < 1e-10, "tau {tau}");
        }
        let half = single_spin_evolve(BlochState::new(1.1, 0.4), 3.0, &d, PI / w);
        assert!((half.phi - 0.4 - PI).abs() < 1e-14);
    }

    #[test]
    fn north_pole_is_stationary() {
        let d = deform(0.4);
        let v = single_spin_evolve_operator(BlochState::new(0.0, 0.0), 3.0, &d, 2.2).unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn measured_frequency_matches_closed_form() {
        let w = measured_precession_frequency(2.0, &deform(1.0), 64).unwrap();
        assert!((w - PI / 2.0).abs() < 1e-12);
        let w0 =
            measured_precession_frequency(-0.8, &Deformation::standard(1.0).unwrap(), 64).unwrap();
        assert!((w0 + 0.8).abs() < 1e-12);
    }

    #[test]
    fn phase_rate_unwraps() {
        let times: Vec<f64> = (0..50).map(|k| k as f64 * 0.3).collect();
        let z: Vec<Complex64> = times
            .iter()
            .map(|t| Complex64::from_polar(2.0, -1.7 * t + 0.2))
            .collect();
        assert!((phase_rate(&times, &z).unwrap() + 1.7).abs() < 1e-12);
    }

    #[test]
    fn two_spin_hamiltonian_spectra() {
        let (h0, h1) = two_spin_hamiltonians(1.5, 10.0, 1.3).unwrap();
        let e0 = diagonalize(&h0).unwrap().eigenvalues().to_vec();
        let e1 = diagonalize(&h1).unwrap().eigenvalues().to_vec();
        let (w, l) = (1.3 * 1.5, 1.3 * 1.3 * 10.0 / 2.0);
        for (a, b) in e0.iter().zip([-w, 0.0, 0.0, w]) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in e1.iter().zip([-l, 0.0, 0.0, l]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(max_abs(&(h0.entries() * h1.entries())), 0.0);
    }

    #[test]
    fn two_spin_initial_and_stationary() {
        let d = deform(0.01);
        let s0 = two_spin_evolve(0.7, 0.3, 1.0, 10.0, &d, 0.0).unwrap();
        let p = MultiSpinState::product(&[BlochState::new(0.7, 0.3); 2]).unwrap();
        assert!((s0.fidelity(&p) - 1.0).abs() < 1e-14);
        let up = two_spin_evolve_operator(0.0, 0.0, 1.0, 10.0, &d, 3.7).unwrap();
        assert!((up.amplitudes()[0].norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn two_spin_small_kappa_rates() {
        let r = two_spin_rates(2.0, 10.0, &deform(1e-14));
        assert!((r.omega_kappa - 2.0).abs() < 1e-10);
        assert!((r.lambda_kappa - 10.0).abs() < 1e-10);
        // the non-interacting pair precesses more slowly than a lone spin
        let r = two_spin_rates(2.0, 0.0, &deform(1.0));
        assert!(r.omega_kappa < larmor_frequency_kappa(2.0, 1.0));
    }

    #[test]
    fn partial_trace_cases() {
        let p = MultiSpinState::product(&[BlochState::new(0.4, 1.0), BlochState::new(2.0, -1.0)])
            .unwrap();
        let rho = partial_trace(&p, 1).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        let single = BlochState::new(2.0, -1.0).vector();
        assert!(max_abs_diff(rho.entries(), &(&single * single.adjoint())) < 1e-15);

        let r = 0.5f64.sqrt();
        let bell = as_state(CVector::from_vec(vec![
            c(r, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(r, 0.0),
        ]));
        let rho = partial_trace(&bell, 0).unwrap();
        assert!(max_abs_diff(rho.entries(), &(CMatrix::identity(2, 2) * c(0.5, 0.0))) < 1e-15);
        assert!((entanglement_entropy(&rho, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(partial_trace(&bell, 2), Err(Error::Range { .. })));
        assert!(partial_trace(&as_state(BlochState::new(1.0, 0.0).vector()), 0).is_err());
    }

    #[test]
    fn partial_trace_three_spins_of_product() {
        let spins = [
            BlochState::new(0.4, 1.0),
            BlochState::new(2.0, -1.0),
            BlochState::new(1.2, 0.2),
        ];
        let p = MultiSpinState::product(&spins).unwrap();
        for k in 0..3 {
            let rho = partial_trace(&p, k).unwrap();
            let v = spins[k].vector();
            assert!(max_abs_diff(rho.entries(), &(&v * v.adjoint())) < 1e-15);
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err());
        let bad =
            CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn entropy_of_pure_and_scaled() {
        let v = BlochState::new(1.0, 2.0).vector();
        let rho = DensityMatrix::new(&v * v.adjoint()).unwrap();
        assert!(entanglement_entropy(&rho, 1.0).unwrap().abs() < 1e-14);
        let mixed = DensityMatrix::new(CMatrix::identity(2, 2) * c(0.5, 0.0)).unwrap();
        assert!((entanglement_entropy(&mixed, 2.5).unwrap() - 2.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn two_spin_maximal_entanglement_point() {
        let d = deform(0.01);
        let r = two_spin_rates(1.0, 10.0, &d);
        let tau = PI / r.lambda_kappa;
        let s = two_spin_entropy_closed_form(PI / 2.0, 10.0, &d, tau, 1.0);
        assert!((s - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_closed_form_matches_trace() {
        let d = deform(0.05);
        for tau in [0.0, 0.13, 0.9, 2.4] {
            let state = two_spin_evolve(0.9, 0.6, 1.7, 10.0, &d, tau).unwrap();
            let rho = partial_trace(&state, 0).unwrap();
            let closed = two_spin_reduced_closed_form(0.9, 0.6, 1.7, 10.0, &d, tau);
            assert!(max_abs_diff(rho.entries(), &closed) < 1e-12, "tau {tau}");
        }
    }

    #[test]
    fn entropy_series_against_closed_form() {
        let d = deform(0.01);
        let taus: Vec<f64> = (0..1000).map(|k| k as f64 * 0.002).collect();
        let brute = two_spin_entropy_series(PI / 4.0, 1.0, 10.0, &d, &taus, 1.0).unwrap();
        assert_eq!(brute[0].abs() < 1e-14, true);
        for (t, s) in taus.iter().zip(&brute) {
            let closed = two_spin_entropy_closed_form(PI / 4.0, 10.0, &d, *t, 1.0);
            assert!((s - closed).abs() < 1e-10, "tau {t}: {s} vs {closed}");
            assert!(*s >= 0.0 && *s <= 2f64.ln() + 1e-15);
        }
    }

    #[test]
    fn entropy_period_longer_with_kappa() {
        let d = deform(0.01);
        let p = two_spin_entropy_period(10.0, &d);
        let p0 = two_spin_entropy_period(10.0, &Deformation::standard(1.0).unwrap());
        assert!((p0 - 2.0 * PI / 10.0).abs() < 1e-15);
        assert!(p > p0);
        let f = |t: f64| two_spin_entropy_closed_form(PI / 4.0, 10.0, &d, t, 1.0);
        for t in [0.1, 0.37, 1.2] {
            assert!((f(t + p) - f(t)).abs() < 1e-10);
        }
        let measured = oscillation_period(f, 0.0, 6.0 * p, 600).unwrap();
        assert!((measured / p - 1.0).abs() < 1e-6);
    }

    #[test]
    fn three_spin_pauli_content() {
        let cl = clock(0.3);
        let w0 = 1.7;
        let eff = three_spin_effective(w0, &cl).unwrap();
        assert!(eff.remainder < 1e-12);
        for z in eff.site_z {
            assert!((z - eff.omega_kappa).abs() < 1e-12);
        }
        assert!((eff.zzz - eff.lambda_kappa).abs() < 1e-12);
        let h = eff.h_eff.entries();
        let sk = 0.3f64.sqrt();
        assert!((h[(0, 0)].re - (3.0 * sk * w0 / 2.0).atan() / sk).abs() < 1e-12);
        assert!(eff.lambda_kappa < 0.0);
    }

    #[test]
    fn three_spin_odd_powers() {
        let (w0, hbar) = (1.3, 0.8);
        let h = three_spin_hamiltonian(w0, hbar);
        let m = h.entries();
        let cube = m * m * m;
        let a = (hbar * w0 / 2.0).powi(3) / 4.0;
        let expected =
            total_z(3) * c(a * 28.0, 0.0) + pauli_string(&[Pauli::Z; 3]) * c(a * 24.0, 0.0);
        assert!(max_abs_diff(&cube, &expected) < 1e-12);
    }

    #[test]
    fn three_spin_small_kappa_has_no_coupling() {
        let eff = three_spin_effective(2.0, &clock(1e-14)).unwrap();
        assert!(eff.zzz.abs() < 1e-8);
        assert!(eff.lambda_kappa.abs() < 1e-8);
    }

    #[test]
    fn three_spin_closed_form_against_operator_route() {
        let cl = clock(0.2);
        let spins = [
            BlochState::new(0.5, 0.1),
            BlochState::new(1.9, -0.7),
            BlochState::new(1.2, 2.0),
        ];
        let eff = three_spin_effective(2.5, &cl).unwrap();
        let quarter = PI / 2.0 / eff.lambda_kappa.abs();
        for tau in [0.0, 0.3, quarter, 4.1] {
            let a = three_spin_evolve(&spins, 2.5, &cl, tau).unwrap();
            let b = three_spin_evolve_operator(&spins, 2.5, &cl, tau).unwrap();
            assert!((1.0 - a.fidelity(&b)).abs() < 1e-10, "tau {tau}");
        }
    }

    #[test]
    fn three_spin_entropy_positive_except_product_points() {
        let cl = clock(0.2);
        let spins = [
            BlochState::new(0.5, 0.1),
            BlochState::new(1.9, -0.7),
            BlochState::new(1.2, 2.0),
        ];
        let eff = three_spin_effective(2.5, &cl).unwrap();
        let l = eff.lambda_kappa.abs();
        for k in 1..40 {
            let x = k as f64 * PI / 40.0;
            if (x - PI / 2.0).abs() < 1e-12 {
                continue;
            }
            let state = three_spin_evolve_operator(&spins, 2.5, &cl, x / l).unwrap();
            for site in 0..3 {
                let s = entanglement_entropy(&partial_trace(&state, site).unwrap(), 1.0).unwrap();
                assert!(s > 1e-6, "site {site} at lambda tau {x}: {s}");
            }
        }
        // at λτ = π/2 the state is a product of flipped spins
        let state = three_spin_evolve_operator(&spins, 2.5, &cl, PI / 2.0 / l).unwrap();
        let s = entanglement_entropy(&partial_trace(&state, 0).unwrap(), 1.0).unwrap();
        assert!(s.abs() < 1e-10);
    }

    #[test]
    fn randomized_closed_forms_against_operator_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..120 {
            let theta = rng.gen_range(0.0..PI);
            let phi = rng.gen_range(-PI..PI);
            let w0 = rng.gen_range(-5.0..5.0);
            let lam = rng.gen_range(-20.0..20.0);
            let kappa = rng.gen_range(1e-4..2.0);
            let tau = rng.gen_range(0.0..10.0);
            let d = deform(kappa);

            let a = two_spin_evolve(theta, phi, w0, lam, &d, tau).unwrap();
            let b = two_spin_evolve_operator(theta, phi, w0, lam, &d, tau).unwrap();
            assert!((1.0 - a.fidelity(&b)).abs() < 1e-10);
            assert!((a.amplitudes().norm_squared() - 1.0).abs() < 1e-12);

            let s = BlochState::new(theta, phi);
            let op = single_spin_evolve_operator(s, w0, &d, tau).unwrap();
            assert!(
                (1.0 - single_spin_evolve(s, w0, &d, tau)
                    .vector()
                    .dotc(&op)
                    .norm_sqr())
                .abs()
                    < 1e-10
            );

            let spins = [
                s,
                BlochState::new(phi.abs(), theta),
                BlochState::new(1.0, lam / 10.0),
            ];
            let cl = clock(kappa);
            let a = three_spin_evolve(&spins, w0, &cl, tau).unwrap();
            let b = three_spin_evolve_operator(&spins, w0, &cl, tau).unwrap();
            assert!((1.0 - a.fidelity(&b)).abs() < 1e-10);
        }
    }
}
