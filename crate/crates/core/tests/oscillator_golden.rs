//! Figure-4 oscillator densities (x₀ = 1, p₀ = 0, m = 1, ω = 2π/3, ħ = 1,
//! κ = 0.01) against values frozen from a 50-digit evaluation of the
//! explicit Hermite-polynomial series.

use std::f64::consts::PI;

use mintime_core::continuum::{
    coherent_coefficients, oscillator_evolve, oscillator_position_density, OscillatorParams,
};
use mintime_core::Deformation;

const GOLDEN: &str = include_str!("data/oscillator_golden.csv");

#[test]
fn figure4_densities_match_frozen_values() {
    let params = OscillatorParams::new(1.0, 2.0 * PI / 3.0, 1.0).unwrap();
    let fock = coherent_coefficients(1.0, 0.0, &params, 60).unwrap();
    let d = Deformation::new(0.01, 1.0).unwrap();
    let mut checked = 0;
    for line in GOLDEN.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let (tau, x, expected) = (cols[0], cols[1], cols[2]);
        let evolved = oscillator_evolve(&fock, &d, tau);
        let got = oscillator_position_density(&evolved, &[x]).unwrap().density[0];
        assert!(
            (got - expected).abs() <= 1e-13 + 1e-11 * expected,
            "tau {tau} x {x}: {got:e} vs {expected:e}"
        );
        checked += 1;
    }
    assert_eq!(checked, 104);
}
