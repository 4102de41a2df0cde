//! Particles on a line: the free particle in the momentum representation
//! and the harmonic oscillator in the Fock basis.

pub mod free;
pub mod oscillator;

pub use free::{
    dispersion, evolve_free, gaussian_packet, group_velocity, position_moments,
    position_wavefunction, sampled_position_moments, spread_closed_form, v_max,
    velocity_expectation, GridSpec, InitialMoments, MomentumWavepacket, PositionMoments,
};
pub use oscillator::{
    best_coherent_overlap, coherent_alpha, coherent_coefficients, coherent_overlap,
    hermite_functions, oscillator_evolve, oscillator_position_density, CoherentFit, FockExpansion,
    OscillatorParams, PositionDensity,
};
