//! CODATA 2018 constants in SI units.
//!
//! Planck mass and time are derived from ħ, c and G so that ratios such as
//! `m_P / t_P` are exact to rounding.

/// Reduced Planck constant, J s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Newtonian constant of gravitation, m³ kg⁻¹ s⁻².
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

/// Proton mass, kg.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;

/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// `√(ħc/G)`, kg.
pub fn planck_mass() -> f64 {
    (HBAR * SPEED_OF_LIGHT / GRAVITATIONAL_CONSTANT).sqrt()
}

/// `√(ħG/c⁵)`, s.
pub fn planck_time() -> f64 {
    (HBAR * GRAVITATIONAL_CONSTANT / SPEED_OF_LIGHT.powi(5)).sqrt()
}
