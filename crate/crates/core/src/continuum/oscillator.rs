//! Harmonic oscillator started in a coherent state.
//!
//! With κ > 0 the level `n` acquires the phase
//! `exp(-iτ arctan(√κω(n + 1/2))/√κ)`; the levels are no longer equally
//! spaced and the coherent state disperses.

use num_complex::Complex64;

use crate::deformation::Deformation;
use crate::error::{Error, Result};

/// Tail weight `Σ_{n > N} |c_n|²` allowed when truncating a coherent state.
pub const TAIL_GATE: f64 = 1e-12;

/// Mass, angular frequency and ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Parameter {
                    name,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    /// `√(mω/ħ)`, the inverse oscillator length.
    pub fn inverse_length(&self) -> f64 {
        (self.mass * self.omega / self.hbar).sqrt()
    }
}

/// Amplitudes `c_n = ⟨n|ψ⟩` for `n = 0 ..= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockExpansion {
    coefficients: Vec<Complex64>,
    params: OscillatorParams,
}

impl FockExpansion {
    pub fn new(coefficients: Vec<Complex64>, params: OscillatorParams) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Grid(
                "Fock expansion needs at least one level".into(),
            ));
        }
        Ok(Self {
            coefficients,
            params,
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨n̂⟩`.
    pub fn mean_number(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// `⟨self|other⟩` over the common levels.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// `α = √(mω/2ħ) x₀ + i p₀/√(2mωħ)`.
pub fn coherent_alpha(x0: f64, p0: f64, params: &OscillatorParams) -> Complex64 {
    let OscillatorParams { mass, omega, hbar } = *params;
    Complex64::new(
        (mass * omega / (2.0 * hbar)).sqrt() * x0,
        p0 / (2.0 * mass * omega * hbar).sqrt(),
    )
}

/// `e^{-|α|²/2} αⁿ/√(n!)` for `n = 0 ..= n_max`, evaluated through
/// logarithms.
fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let r = alpha.norm();
    let mut out = Vec::with_capacity(n_max + 1);
    if r == 0.0 {
        out.push(Complex64::new(1.0, 0.0));
        out.resize(n_max + 1, Complex64::new(0.0, 0.0));
        return out;
    }
    let (ln_r, arg) = (r.ln(), alpha.arg());
    let mut ln_fact = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let ln_mod = -0.5 * r * r + n as f64 * ln_r - 0.5 * ln_fact;
        out.push(Complex64::from_polar(ln_mod.exp(), n as f64 * arg));
    }
    out
}

/// Poisson weight of mean `mu` above `n_max`.
fn poisson_tail(mu: f64, n_max: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    // terms beyond the mode decay faster than geometrically
    let cap = n_max.max((mu + 40.0 * mu.sqrt() + 100.0) as usize);
    let mut ln_term = -mu;
    let mut tail = 0.0;
    for n in 0..=cap {
        if n > 0 {
            ln_term += mu.ln() - (n as f64).ln();
        }
        if n > n_max {
            tail += ln_term.exp();
        }
    }
    tail
}

/// Coherent state with mean position `x0` and momentum `p0`, truncated at
/// `n_max`.
///
/// Fails with a suggested truncation when the discarded weight exceeds
/// [`TAIL_GATE`].
pub fn coherent_coefficients(
    x0: f64,
    p0: f64,
    params: &OscillatorParams,
    n_max: usize,
) -> Result<FockExpansion> {
    let alpha = coherent_alpha(x0, p0, params);
    let mu = alpha.norm_sqr();
    let tail = poisson_tail(mu, n_max);
    if tail > TAIL_GATE {
        let mut suggested = n_max + 1;
        while poisson_tail(mu, suggested) > TAIL_GATE {
            suggested += 1;
        }
        return Err(Error::FockTruncation {
            n_max,
            tail,
            suggested,
        });
    }
    FockExpansion::new(coherent_amplitudes(alpha, n_max), *params)
}

/// Evolution for a time `tau` under the effective Hamiltonian.
pub fn oscillator_evolve(
    fock: &FockExpansion,
    deformation: &Deformation,
    tau: f64,
) -> FockExpansion {
    let w = fock.params.omega;
    let coefficients = fock
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -tau * deformation.rate(w * (n as f64 + 0.5))))
        .collect();
    FockExpansion {
        coefficients,
        params: fock.params,
    }
}

/// `⟨β|ψ⟩` over the levels kept in `fock`.
pub fn coherent_overlap(fock: &FockExpansion, beta: Complex64) -> Complex64 {
    coherent_amplitudes(beta, fock.n_max())
        .iter()
        .zip(&fock.coefficients)
        .map(|(b, c)| b.conj() * c)
        .sum()
}

/// Coherent state closest to a given state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentFit {
    pub beta: Complex64,
    /// `|⟨β|ψ⟩|²`.
    pub fidelity: f64,
}

/// Maximizes `|⟨β|ψ⟩|²` over β in the square of half-width `radius` around
/// `guess`: a 61×61 scan followed by a compass search refined to 1e-10.
pub fn best_coherent_overlap(fock: &FockExpansion, guess: Complex64, radius: f64) -> CoherentFit {
    let score = |b: Complex64| coherent_overlap(fock, b).norm_sqr();
    const SCAN: i32 = 30;
    let h = radius / SCAN as f64;
    let mut best = CoherentFit {
        beta: guess,
        fidelity: score(guess),
    };
    for i in -SCAN..=SCAN {
        for j in -SCAN..=SCAN {
            let b = guess + Complex64::new(i as f64 * h, j as f64 * h);
            let s = score(b);
            if s > best.fidelity {
                best = CoherentFit {
                    beta: b,
                    fidelity: s,
                };
            }
        }
    }
    let mut step = h;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    while step > 1e-10 {
        let mut moved = false;
        for d in dirs {
            let b = best.beta + d * step;
            let s = score(b);
            if s > best.fidelity {
                best = CoherentFit {
                    beta: b,
                    fidelity: s,
                };
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

/// Normalized Hermite functions `ψ₀(ξ) … ψ_{n_max}(ξ)` in the
/// dimensionless coordinate, by the recurrence
/// `ψ_{n+1} = √(2/(n+1)) ξ ψ_n - √(n/(n+1)) ψ_{n-1}`.
pub fn hermite_functions(n_max: usize, xi: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp());
    if n_max >= 1 {
        out.push(2f64.sqrt() * xi * out[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    if let Some(bad) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::FockTruncation {
            n_max,
            tail: f64::INFINITY,
            suggested: bad.saturating_sub(1),
        });
    }
    Ok(out)
}

/// Sampled `|ψ(x)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDensity {
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl PositionDensity {
    /// Trapezoid integral over the sampled window.
    pub fn integral(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum()
    }
}

/// `|Σ c_n ψ_n(x)|²` with `ψ_n(x) = (mω/ħ)^(1/4) ψ_n(√(mω/ħ) x)`.
pub fn oscillator_position_density(fock: &FockExpansion, xs: &[f64]) -> Result<PositionDensity> {
    let k = fock.params.inverse_length();
    let density = xs
        .iter()
        .map(|&x| {
            let h = hermite_functions(fock.n_max(), k * x)?;
            let amp: Complex64 = fock.coefficients.iter().zip(&h).map(|(c, v)| c * v).sum();
            Ok(k * amp.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(PositionDensity {
        x: xs.to_vec(),
        density,
    })
}
