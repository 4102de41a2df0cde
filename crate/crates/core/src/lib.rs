//! Quantum time evolution with a minimal measurable time scale.
//!
//! Time is read off a clock whose time and frequency operators satisfy
//! `[T, Ω] = i(1 + κΩ²)`. The uncertainty in time is then bounded below by
//! `√κ`, and a system Hamiltonian `H` generates translations in clock time
//! through the bounded effective Hamiltonian `(ħ/√κ) arctan(√κH/ħ)`.
//!
//! * [`operator`]: spectral functions of Hermitian matrices, propagators.
//! * [`clock`]: the clock space and its frequency, continuous-time and
//!   lattice representations.
//! * [`spin`]: precession and entanglement of one, two and three spins.
//! * [`continuum`]: the free particle and the harmonic oscillator.

pub mod clock;
pub mod constants;
pub mod continuum;
pub mod deformation;
pub mod error;
mod numerics;
pub mod operator;
pub mod pauli;
pub mod spin;

pub use clock::ClockParams;
pub use deformation::Deformation;
pub use error::{Error, Result};
pub use operator::{HermitianOperator, SpectralDecomposition, UnitaryOperator};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/clock.md")]
    mod clock {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/effective_hamiltonian.md")]
    mod effective_hamiltonian {}
    #[doc = include_str!("../../../book/src/spins.md")]
    mod spins {}
    #[doc = include_str!("../../../book/src/continuum.md")]
    mod continuum {}
}
