//! The numerical experiments behind each command-line run.

use std::f64::consts::PI;
use std::sync::Arc;

use mintime_core::clock::{
    freq_to_continuous, freq_to_discrete, gup_bound, maximal_localization_state,
    min_time_uncertainty, sinc_reconstruct, uncertainty_stats, warped_gaussian, FrequencyGrid,
    FrequencyWavefunction,
};
use mintime_core::continuum::{
    best_coherent_overlap, coherent_alpha, coherent_coefficients, evolve_free, gaussian_packet,
    oscillator_evolve, oscillator_position_density, position_moments, position_wavefunction,
    sampled_position_moments, spread_closed_form, v_max, velocity_expectation, GridSpec,
    InitialMoments, OscillatorParams,
};
use mintime_core::operator::{
    diagonalize, effective_hamiltonian, lattice_generator, lattice_propagator, max_abs_diff,
    propagator, verify_function_transfer, CMatrix,
};
use mintime_core::spin::{
    entanglement_entropy, larmor_frequency_kappa, measured_precession_frequency,
    oscillation_period, partial_trace, three_spin_effective, three_spin_evolve,
    three_spin_evolve_operator, two_spin_entropy_closed_form, two_spin_entropy_period,
    two_spin_entropy_series, BlochState,
};
use mintime_core::{ClockParams, Deformation, HermitianOperator};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, Params};
use crate::error::CliError;
use crate::output::{Check, ExperimentOutput, Table};

pub fn compute(
    experiment: Experiment,
    p: &Params,
    seed: u64,
) -> Result<ExperimentOutput, CliError> {
    match experiment {
        Experiment::GupSurface => gup_surface(p, seed),
        Experiment::SpinPrecession => spin_precession(p),
        Experiment::TwoSpinEntropy => two_spin_entropy(p),
        Experiment::ThreeSpin => three_spin(p),
        Experiment::FreePacket => free_packet(p),
        Experiment::Oscillator => oscillator(p),
        Experiment::TransformsVerify => transforms_verify(p, seed),
        Experiment::TheoremA1 => theorem_a1(p, seed),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn require_range(p: &Params, lo: &str, hi: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = (p.get(lo), p.get(hi));
    if !(a < b) {
        return Err(usage(format!("`{lo}` = {a} must be below `{hi}` = {b}")));
    }
    Ok((a, b))
}

/// Sum of two warped Gaussians with random centres, widths and slopes.
pub fn random_clock_state(
    grid: &Arc<FrequencyGrid>,
    rng: &mut ChaCha8Rng,
) -> Result<FrequencyWavefunction, CliError> {
    let bump = |rng: &mut ChaCha8Rng| {
        warped_gaussian(
            grid.clone(),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.2..0.3),
            rng.gen_range(-15.0..15.0),
        )
    };
    let a = bump(rng)?;
    let b = bump(rng)?;
    let z = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI));
    Ok(a.combine(Complex64::new(1.0, 0.0), &b, z)?.normalized()?)
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Result<HermitianOperator, CliError> {
    let m = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    Ok(HermitianOperator::new(
        (&m + m.adjoint()) * Complex64::new(0.5, 0.0),
    )?)
}

fn gup_surface(p: &Params, seed: u64) -> Result<ExperimentOutput, CliError> {
    let kappa = p.get("kappa");
    if !(kappa > 0.0) {
        return Err(usage(format!("`kappa` = {kappa} must be positive")));
    }
    let (dw_min, dw_max) = require_range(p, "delta_omega_min", "delta_omega_max")?;
    let n_dw = p.count("delta_omega_points", 2)?;
    let n_mean = p.count("mean_omega_points", 1)?;
    let mean_max = p.get("mean_omega_max");

    let mut surface = Table::new(
        "gup_surface.csv",
        &["delta_omega", "mean_omega", "delta_t_min"],
    );
    let mut minima = Table::new(
        "gup_minimum.csv",
        &["mean_omega", "delta_t_min_grid", "delta_t_min_closed_form"],
    );
    let mut below_minimum: f64 = 0.0;
    for mean in linspace(0.0, mean_max, n_mean) {
        let mut lowest = f64::INFINITY;
        for dw in linspace(dw_min, dw_max, n_dw) {
            let b = gup_bound(dw, mean, kappa)?;
            lowest = lowest.min(b);
            surface.push(vec![dw, mean, b]);
        }
        let closed = min_time_uncertainty(mean, kappa);
        below_minimum = below_minimum.max(closed - lowest);
        minima.push(vec![mean, lowest, closed]);
    }

    let grid = Arc::new(FrequencyGrid::new(kappa, p.count("grid_points", 64)?)?);
    let n_ml = p.count("ml_states", 1)?;
    let sk = kappa.sqrt();
    let mut ml = Table::new(
        "ml_states.csv",
        &["tau", "mean_t", "delta_t", "mean_omega", "delta_omega"],
    );
    let (mut ml_dt, mut ml_t, mut ml_w) = (0.0f64, 0.0f64, 0.0f64);
    for tau in linspace(-4.0 * sk, 4.0 * sk, n_ml) {
        let s = uncertainty_stats(&maximal_localization_state(tau, grid.clone()))?;
        ml_dt = ml_dt.max((s.delta_t - sk).abs());
        ml_t = ml_t.max((s.mean_t - tau).abs());
        ml_w = ml_w.max(s.mean_omega.abs());
        ml.push(vec![tau, s.mean_t, s.delta_t, s.mean_omega, s.delta_omega]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = Table::new(
        "random_states.csv",
        &[
            "state",
            "mean_t",
            "delta_t",
            "mean_omega",
            "delta_omega",
            "gup_margin",
        ],
    );
    let mut worst_margin = f64::INFINITY;
    for k in 0..p.count("random_states", 0)? {
        let s = uncertainty_stats(&random_clock_state(&grid, &mut rng)?)?;
        let margin = s.gup_margin(kappa);
        worst_margin = worst_margin.min(margin);
        random.push(vec![
            k as f64,
            s.mean_t,
            s.delta_t,
            s.mean_omega,
            s.delta_omega,
            margin,
        ]);
    }

    let mut checks = vec![
        Check::at_most("bound_not_below_closed_form_minimum", below_minimum, 1e-12),
        Check::at_most("ml_delta_t_equals_sqrt_kappa", ml_dt, 1e-6),
        Check::at_most("ml_mean_t_equals_tau", ml_t, 1e-6),
        Check::at_most("ml_mean_omega_zero", ml_w, 1e-6),
    ];
    if worst_margin.is_finite() {
        checks.push(Check::at_most(
            "random_states_obey_bound",
            (-worst_margin).max(0.0),
            1e-8,
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![surface, minima, ml, random],
        checks,
    })
}

fn spin_precession(p: &Params) -> Result<ExperimentOutput, CliError> {
    let d = Deformation::new(p.get("kappa"), p.get("hbar"))?;
    let (lo, hi) = require_range(p, "omega0_min", "omega0_max")?;
    if !(lo > 0.0) {
        return Err(usage(format!("`omega0_min` = {lo} must be positive")));
    }
    let n = p.count("points", 2)?;
    let samples = p.count("samples", 3)?;
    let omegas: Vec<f64> = linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect();

    let rows = omegas
        .par_iter()
        .map(|&w| {
            let closed = larmor_frequency_kappa(w, d.kappa());
            let measured = measured_precession_frequency(w, &d, samples)?;
            Ok(vec![w, w, closed, measured])
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(
        "spin_precession.csv",
        &["omega0", "omega_larmor", "omega_kappa", "omega_measured"],
    );
    let mut rel: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for r in rows {
        rel = rel.max((r[3] - r[2]).abs() / r[2]);
        largest = largest.max(r[2]);
        table.push(r);
    }

    let reference = measured_precession_frequency(2.0, &Deformation::new(1.0, 1.0)?, samples)?;
    let mut checks = vec![
        Check::at_most("measured_matches_closed_form", rel, 1e-8),
        Check::at_most(
            "omega0_2_kappa_1_gives_half_pi",
            (reference - PI / 2.0).abs(),
            1e-8,
        ),
    ];
    if d.is_deformed() {
        checks.push(Check::above(
            "omega_kappa_below_pi_over_sqrt_kappa",
            PI / d.kappa().sqrt(),
            largest,
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn two_spin_entropy(p: &Params) -> Result<ExperimentOutput, CliError> {
    let hbar = p.get("hbar");
    let d = Deformation::new(p.get("kappa"), hbar)?;
    let reference = Deformation::standard(hbar)?;
    let (theta, lambda, omega0, k_b) = (
        p.get("theta"),
        p.get("lambda"),
        p.get("omega0"),
        p.get("k_b"),
    );
    let tau_max = p.get("tau_max");
    if !(tau_max > 0.0) || lambda == 0.0 {
        return Err(usage(
            "`tau_max` must be positive and `lambda` non-zero".into(),
        ));
    }
    let n = p.count("points", 3)?;
    let taus = linspace(0.0, tau_max, n);

    let operator = two_spin_entropy_series(theta, omega0, lambda, &d, &taus, k_b)?;
    let closed: Vec<f64> = taus
        .iter()
        .map(|&t| two_spin_entropy_closed_form(theta, lambda, &d, t, k_b))
        .collect();
    let plain: Vec<f64> = taus
        .iter()
        .map(|&t| two_spin_entropy_closed_form(theta, lambda, &reference, t, k_b))
        .collect();

    let mut table = Table::new(
        "two_spin_entropy.csv",
        &[
            "tau",
            "entropy_kappa",
            "entropy_reference",
            "entropy_operator",
        ],
    );
    let mut diff: f64 = 0.0;
    let mut out_of_range: f64 = 0.0;
    for k in 0..n {
        diff = diff.max((operator[k] - closed[k]).abs());
        out_of_range = out_of_range
            .max(-closed[k])
            .max(closed[k] - k_b * 2f64.ln());
        table.push(vec![taus[k], closed[k], plain[k], operator[k]]);
    }

    let measure = |def: &Deformation| {
        oscillation_period(
            |t| two_spin_entropy_closed_form(theta, lambda, def, t, k_b),
            0.0,
            tau_max,
            n,
        )
    };
    let expected = two_spin_entropy_period(lambda, &d);
    let expected_ref = two_spin_entropy_period(lambda, &reference);
    let measured = measure(&d);
    let measured_ref = measure(&reference);
    let mut periods = Table::new(
        "two_spin_period.csv",
        &["kappa", "period_measured", "period_closed_form"],
    );
    periods.push(vec![d.kappa(), measured.unwrap_or(f64::NAN), expected]);
    periods.push(vec![0.0, measured_ref.unwrap_or(f64::NAN), expected_ref]);

    let mut checks = vec![
        Check::at_most("closed_form_matches_operator", diff, 1e-10),
        Check::at_most("entropy_within_bounds", out_of_range.max(0.0), 1e-12),
        Check::at_most(
            "period_matches_closed_form",
            measured.map_or(f64::INFINITY, |m| (m - expected).abs() / expected),
            1e-6,
        ),
    ];
    if d.is_deformed() {
        checks.push(Check::above(
            "period_longer_than_undeformed",
            measured.unwrap_or(f64::NAN),
            measured_ref.unwrap_or(f64::INFINITY),
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![table, periods],
        checks,
    })
}

fn three_spin(p: &Params) -> Result<ExperimentOutput, CliError> {
    let hbar = p.get("hbar");
    let omega0 = p.get("omega0");
    let k_b = p.get("k_b");
    let clock = ClockParams::new(p.get("kappa"), 0.0, hbar)?;
    let eff = three_spin_effective(omega0, &clock)?;
    let rate = eff.coupling_rate(hbar).abs();
    if !(rate > 0.0) {
        return Err(usage(
            "`omega0` must be non-zero for the spins to become entangled".into(),
        ));
    }
    let spins = [1, 2, 3]
        .map(|k| BlochState::new(p.get(&format!("theta_{k}")), p.get(&format!("phi_{k}"))));
    let n = p.count("points", 2)?;

    let rows = (0..=n)
        .into_par_iter()
        .map(|k| {
            let lt = PI * k as f64 / n as f64;
            let tau = lt / rate;
            let closed = three_spin_evolve(&spins, omega0, &clock, tau)?;
            let op = three_spin_evolve_operator(&spins, omega0, &clock, tau)?;
            let mut row = vec![tau, lt];
            for site in 0..3 {
                row.push(entanglement_entropy(&partial_trace(&closed, site)?, k_b)?);
            }
            row.push(1.0 - closed.fidelity(&op));
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(
        "three_spin.csv",
        &[
            "tau",
            "lambda_tau",
            "entropy_1",
            "entropy_2",
            "entropy_3",
            "infidelity",
        ],
    );
    let mut infid: f64 = 0.0;
    let mut min_interior = f64::INFINITY;
    let mut at_half: f64 = 0.0;
    for r in rows {
        infid = infid.max(r[5].abs());
        let s = r[2].min(r[3]).min(r[4]);
        let smax = r[2].max(r[3]).max(r[4]);
        let lt = r[1];
        if (lt - PI / 2.0).abs() < 1e-9 {
            at_half = at_half.max(smax);
        } else if lt > 0.0 && lt < PI - 1e-12 {
            min_interior = min_interior.min(s);
        }
        table.push(r);
    }

    let tiny = three_spin_effective(omega0, &ClockParams::new(1e-14, 0.0, hbar)?)?;
    let mut coefficients = Table::new(
        "three_spin_coefficients.csv",
        &[
            "kappa",
            "omega_kappa",
            "lambda_kappa",
            "site_z",
            "zzz",
            "remainder",
        ],
    );
    for (kappa, e) in [(clock.kappa(), &eff), (1e-14, &tiny)] {
        coefficients.push(vec![
            kappa,
            e.omega_kappa,
            e.lambda_kappa,
            e.site_z[0],
            e.zzz,
            e.remainder,
        ]);
    }

    let site_err = eff
        .site_z
        .iter()
        .map(|z| (z - hbar * eff.omega_kappa).abs())
        .fold(0.0, f64::max);
    let mut checks = vec![
        Check::at_most("site_z_projection", site_err, 1e-12),
        Check::at_most(
            "zzz_projection",
            (eff.zzz - hbar * eff.lambda_kappa).abs(),
            1e-12,
        ),
        Check::at_most("no_other_pauli_terms", eff.remainder, 1e-12),
        Check::at_most("small_kappa_zzz_vanishes", tiny.zzz.abs(), 1e-8),
        Check::at_most("closed_form_matches_operator", infid, 1e-10),
        Check::above("entropy_positive_off_half_period", min_interior, 0.0),
    ];
    if n % 2 == 0 {
        checks.push(Check::at_most(
            "product_state_at_half_period",
            at_half,
            1e-10,
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![table, coefficients],
        checks,
    })
}

fn free_packet(p: &Params) -> Result<ExperimentOutput, CliError> {
    let hbar = p.get("hbar");
    let (p0, dp) = (p.get("p0"), p.get("delta_p"));
    let spec = GridSpec {
        points: p.count("grid_points", 16)?,
        half_width: 12.0,
    };

    // densities
    let m1 = p.get("density_mass");
    let d1 = Deformation::new(p.get("density_kappa"), hbar)?;
    let packet = gaussian_packet(p0, dp, m1, d1, &spec)?;
    let packet_ref = gaussian_packet(p0, dp, m1, Deformation::standard(hbar)?, &spec)?;
    let (x_min, x_max) = require_range(p, "x_min", "x_max")?;
    let xs = linspace(x_min, x_max, p.count("x_points", 2)?);
    let step = p.get("density_tau_step");
    let snapshots: Vec<f64> = (0..p.count("density_snapshots", 1)?)
        .map(|k| k as f64 * step)
        .collect();
    let blocks = snapshots
        .par_iter()
        .map(|&tau| {
            let a = position_wavefunction(&evolve_free(&packet, tau), &xs)?;
            let b = position_wavefunction(&evolve_free(&packet_ref, tau), &xs)?;
            Ok(xs
                .iter()
                .zip(a.iter().zip(&b))
                .map(|(&x, (u, v))| vec![tau, x, u.norm_sqr(), v.norm_sqr()])
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut density = Table::new(
        "free_density.csv",
        &["tau", "x", "density", "density_reference"],
    );
    blocks.into_iter().flatten().for_each(|r| density.push(r));

    // velocity and spreading
    let m2 = p.get("dynamics_mass");
    let clock = ClockParams::new(p.get("dynamics_kappa"), 0.0, hbar)?;
    let d2 = Deformation::from(clock);
    let packet = gaussian_packet(p0, dp, m2, d2, &spec)?;
    let packet_ref = gaussian_packet(p0, dp, m2, Deformation::standard(hbar)?, &spec)?;
    let init = InitialMoments::of(&packet);
    let init_ref = InitialMoments::of(&packet_ref);
    let taus = linspace(0.0, p.get("tau_max"), p.count("tau_points", 3)?);
    let rows = taus
        .par_iter()
        .map(|&tau| {
            let m = position_moments(&packet, tau);
            let closed = spread_closed_form(&init, tau);
            let centre = init.mean_x + tau * init.mean_v;
            let xs = linspace(centre - 12.0 * closed, centre + 12.0 * closed, 4001);
            let psi = position_wavefunction(&evolve_free(&packet, tau), &xs)?;
            let sampled = sampled_position_moments(&xs, &psi)?;
            Ok(vec![
                tau,
                m.delta_x,
                spread_closed_form(&init_ref, tau),
                closed,
                sampled.delta_x,
                m.mean_x,
                sampled.mean_x,
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut spread = Table::new(
        "free_spread.csv",
        &[
            "tau",
            "delta_x",
            "delta_x_reference",
            "delta_x_closed_form",
            "delta_x_position_space",
            "mean_x",
            "mean_x_position_space",
        ],
    );
    let (mut spread_err, mut mean_err): (f64, f64) = (0.0, 0.0);
    for r in &rows {
        spread_err = spread_err.max((r[4] - r[3]).abs() / r[3]);
        mean_err = mean_err.max((r[6] - r[5]).abs() / (1.0 + r[5].abs()));
    }
    let (intercept, slope, fit_err) =
        line_fit(&rows.iter().map(|r| (r[0], r[5])).collect::<Vec<_>>());
    rows.into_iter().for_each(|r| spread.push(r));

    let p0s = linspace(0.0, p.get("p0_max"), p.count("p0_points", 3)?);
    let vrows = p0s
        .par_iter()
        .map(|&q| {
            let a = velocity_expectation(&gaussian_packet(q, dp, m2, d2, &spec)?);
            let b = velocity_expectation(&gaussian_packet(
                q,
                dp,
                m2,
                Deformation::standard(hbar)?,
                &spec,
            )?);
            Ok(vec![q, a, b])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut velocity = Table::new("free_velocity.csv", &["p0", "v_expect", "v_reference"]);
    let (argmax, vpeak) =
        vrows
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(i, m), (k, r)| {
                if r[1] > m {
                    (k, r[1])
                } else {
                    (i, m)
                }
            });
    let vlast = vrows.last().map_or(f64::NAN, |r| r[1]);
    let interior = argmax > 0 && argmax + 1 < vrows.len();
    vrows.into_iter().for_each(|r| velocity.push(r));

    let scale = 1.0 + intercept.abs() + slope.abs() * taus.last().copied().unwrap_or(0.0);
    let checks = vec![
        Check::at_most("mean_x_linear_in_tau", fit_err / scale, 1e-8),
        Check::at_most(
            "mean_x_slope_is_mean_velocity",
            (slope - init.mean_v).abs() / init.mean_v.abs().max(f64::MIN_POSITIVE),
            1e-8,
        ),
        Check::at_most("mean_x_matches_position_space", mean_err, 1e-6),
        Check::at_most("spread_matches_position_space", spread_err, 1e-6),
        Check::at_most(
            "velocity_maximum_interior",
            if interior { 0.0 } else { 1.0 },
            0.0,
        ),
        Check::at_most("velocity_decays_at_large_p0", vlast / vpeak, 0.05),
        Check::below("velocity_below_v_max", vpeak / v_max(m2, &clock)?, 1.0),
    ];
    Ok(ExperimentOutput {
        tables: vec![density, spread, velocity],
        checks,
    })
}

/// Least-squares line through `(t, y)`: intercept, slope and the largest
/// deviation from it.
fn line_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let tm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = ym - slope * tm;
    let worst = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(0.0, f64::max);
    (intercept, slope, worst)
}

fn oscillator(p: &Params) -> Result<ExperimentOutput, CliError> {
    let hbar = p.get("hbar");
    let params = OscillatorParams::new(p.get("mass"), p.get("omega"), hbar)?;
    let (x0, p0) = (p.get("x0"), p.get("p0"));
    let fock = coherent_coefficients(x0, p0, &params, p.count("n_max", 1)?)?;
    let d = Deformation::new(p.get("kappa"), hbar)?;
    let reference = Deformation::standard(hbar)?;
    let (x_min, x_max) = require_range(p, "x_min", "x_max")?;
    let xs = linspace(x_min, x_max, p.count("x_points", 2)?);
    let step = p.get("tau_step");
    let snapshots: Vec<f64> = (0..p.count("snapshots", 1)?)
        .map(|k| k as f64 * step)
        .collect();

    let blocks = snapshots
        .par_iter()
        .map(|&tau| {
            let a = oscillator_position_density(&oscillator_evolve(&fock, &d, tau), &xs)?;
            let b = oscillator_position_density(&oscillator_evolve(&fock, &reference, tau), &xs)?;
            let rows: Vec<Vec<f64>> = xs
                .iter()
                .zip(a.density.iter().zip(&b.density))
                .map(|(&x, (&u, &v))| vec![tau, x, u, v])
                .collect();
            Ok((rows, (a.integral() - fock.norm_sq()).abs()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut density = Table::new(
        "oscillator_density.csv",
        &["tau", "x", "density", "density_reference"],
    );
    let mut integral_err: f64 = 0.0;
    for (rows, e) in blocks {
        integral_err = integral_err.max(e);
        rows.into_iter().for_each(|r| density.push(r));
    }

    let alpha = coherent_alpha(x0, p0, &params);
    let omega = params.omega;
    let fit = |tau: f64| {
        let evolved = oscillator_evolve(&fock, &d, tau);
        let guess = alpha * Complex64::from_polar(1.0, -omega * tau);
        best_coherent_overlap(&evolved, guess, 1.0 + alpha.norm())
    };
    let taus = linspace(
        0.0,
        p.get("coherence_tau_max"),
        p.count("coherence_points", 1)?,
    );
    let fits: Vec<_> = taus.par_iter().map(|&t| fit(t)).collect();
    let mut coherence = Table::new(
        "oscillator_coherence.csv",
        &["tau", "best_fidelity", "beta_re", "beta_im"],
    );
    for (t, f) in taus.iter().zip(&fits) {
        coherence.push(vec![*t, f.fidelity, f.beta.re, f.beta.im]);
    }

    let period = 2.0 * PI / omega;
    let revived = oscillator_evolve(&fock, &reference, period);
    let revival = fock.inner(&revived).norm_sqr() / fock.norm_sq().powi(2);
    let norm_drift = snapshots
        .iter()
        .map(|&t| (oscillator_evolve(&fock, &d, t).norm_sq() - fock.norm_sq()).abs())
        .fold(0.0, f64::max);

    let mut checks = vec![
        Check::at_most("undeformed_revival_fidelity", 1.0 - revival, 1e-10),
        Check::at_most("norm_preserved", norm_drift, 1e-12),
        Check::at_most("density_integral", integral_err, 1e-6),
    ];
    if d.is_deformed() {
        for tau in [1.0, 2.0, 3.0] {
            checks.push(Check::below(
                &format!("not_coherent_at_tau_{tau}"),
                fit(tau).fidelity,
                1.0 - 1e-6,
            ));
        }
    }
    Ok(ExperimentOutput {
        tables: vec![density, coherence],
        checks,
    })
}

fn transforms_verify(p: &Params, seed: u64) -> Result<ExperimentOutput, CliError> {
    let clock = ClockParams::new(p.get("kappa"), p.get("lambda"), 1.0)?;
    let grid = Arc::new(FrequencyGrid::for_clock(&clock));
    let n_max = p.count("n_max", 1)? as i64;
    let off = p.count("off_lattice_points", 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut jobs = Vec::new();
    for _ in 0..p.count("states", 1)? {
        let psi = random_clock_state(&grid, &mut rng)?;
        let taus: Vec<f64> = (0..off)
            .map(|_| {
                clock.lattice_spacing() * rng.gen_range(-(n_max as f64) / 2.0..n_max as f64 / 2.0)
            })
            .collect();
        jobs.push((psi, taus));
    }
    let results = jobs
        .par_iter()
        .enumerate()
        .map(|(s, (psi, taus))| {
            let seq = freq_to_discrete(psi, -n_max..=n_max, &clock)?;
            let lattice: Vec<Vec<f64>> = seq
                .iter()
                .map(|(n, v)| {
                    let t = clock.lattice_time(n);
                    let c = freq_to_continuous(psi, t);
                    vec![s as f64, n as f64, t, v.re, v.im, c.re, c.im]
                })
                .collect();
            let sinc: Vec<Vec<f64>> = taus
                .iter()
                .map(|&t| {
                    let r = sinc_reconstruct(&seq, t).value;
                    let c = freq_to_continuous(psi, t);
                    vec![s as f64, t, r.re, r.im, c.re, c.im]
                })
                .collect();
            Ok((lattice, sinc))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut lattice = Table::new(
        "transforms_lattice.csv",
        &[
            "state",
            "n",
            "tau",
            "discrete_re",
            "discrete_im",
            "continuous_re",
            "continuous_im",
        ],
    );
    let mut sinc = Table::new(
        "transforms_sinc.csv",
        &[
            "state",
            "tau",
            "sinc_re",
            "sinc_im",
            "continuous_re",
            "continuous_im",
        ],
    );
    let dist = |r: &[f64], i: usize| Complex64::new(r[i] - r[i + 2], r[i + 1] - r[i + 3]).norm();
    let (mut lattice_err, mut sinc_err): (f64, f64) = (0.0, 0.0);
    for (l, s) in results {
        for r in l {
            lattice_err = lattice_err.max(dist(&r, 3));
            lattice.push(r);
        }
        for r in s {
            sinc_err = sinc_err.max(dist(&r, 2));
            sinc.push(r);
        }
    }

    // lattice propagation of a random Hamiltonian
    let h = random_hermitian(p.count("hamiltonian_dim", 1)?, &mut rng)?;
    let generator = lattice_generator(&h, &clock)?;
    let h_eff = effective_hamiltonian(&h, &clock)?;
    let hbar = clock.hbar();
    let sk = clock.delta_t0();
    let mut prop = Table::new(
        "transforms_propagator.csv",
        &[
            "steps",
            "tau",
            "lattice_equation_residual",
            "continuum_residual",
        ],
    );
    let (mut eq_err, mut cont_err): (f64, f64) = (0.0, 0.0);
    for n in 0..=p.count("lattice_steps", 1)? as i64 {
        let u = lattice_propagator(&h, &clock, n)?;
        let up = lattice_propagator(&h, &clock, n + 1)?;
        let um = lattice_propagator(&h, &clock, n - 1)?;
        // iħ(U_{n+1} - U_{n-1})/(4√κ) = G U_n
        let lhs = (up.entries() - um.entries()) * Complex64::new(0.0, hbar / (4.0 * sk));
        let e1 = max_abs_diff(&lhs, &(generator.entries() * u.entries()));
        let tau = clock.lattice_spacing() * n as f64;
        let e2 = max_abs_diff(u.entries(), propagator(&h_eff, tau, hbar)?.entries());
        eq_err = eq_err.max(e1);
        cont_err = cont_err.max(e2);
        prop.push(vec![n as f64, tau, e1, e2]);
    }

    Ok(ExperimentOutput {
        tables: vec![lattice, sinc, prop],
        checks: vec![
            Check::at_most("lattice_matches_continuous", lattice_err, 1e-12),
            Check::at_most("sinc_matches_continuous_off_lattice", sinc_err, 1e-5),
            Check::at_most("lattice_schrodinger_equation", eq_err, 1e-10),
            Check::at_most("lattice_matches_continuum_propagator", cont_err, 1e-10),
        ],
    })
}

/// `Σ cₖ Mᵏ` by Horner's rule.
fn matrix_polynomial(coeffs: &[f64], m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let mut acc = CMatrix::zeros(d, d);
    for &c in coeffs.iter().rev() {
        acc = &acc * m + CMatrix::identity(d, d) * Complex64::new(c, 0.0);
    }
    acc
}

/// Coefficients of `p(x) + r(x)(x - root)`.
fn add_vanishing(p: &[f64], r: &[f64], root: f64) -> Vec<f64> {
    let mut out = p.to_vec();
    out.resize(p.len().max(r.len() + 1), 0.0);
    for (k, &c) in r.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

pub const THEOREM_FUNCTIONS: [(&str, fn(f64) -> f64); 3] = [
    ("atan", f64::atan),
    ("tanh", f64::tanh),
    ("x/(1+x^2)", |x| x / (1.0 + x * x)),
];

fn theorem_a1(p: &Params, seed: u64) -> Result<ExperimentOutput, CliError> {
    let dim = p.count("dim", 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(
        "theorem_a1.csv",
        &[
            "trial",
            "function",
            "residual",
            "commutator",
            "shared_action",
        ],
    );
    let mut worst: f64 = 0.0;

    // diag(1, 2, 5) and diag(1, 2, 7) agree on the first basis vector
    let a = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 5.0])?;
    let b = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 7.0])?;
    let e1 = mintime_core::operator::CVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ]);
    for (k, (_, f)) in THEOREM_FUNCTIONS.iter().enumerate() {
        let r = verify_function_transfer(&a, &b, &e1, f)?;
        worst = worst.max(r);
        table.push(vec![0.0, k as f64, r, a.commutator_norm(&b), 0.0]);
    }

    for trial in 1..=p.count("trials", 0)? {
        let c = random_hermitian(dim, &mut rng)?;
        let spectrum = diagonalize(&c)?;
        let k0 = rng.gen_range(0..dim);
        let root = spectrum.eigenvalues()[k0];
        let psi = spectrum.eigenvector(k0);
        let pc: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rc: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let qc = add_vanishing(&pc, &rc, root);
        let a = HermitianOperator::new(matrix_polynomial(&pc, c.entries()))?;
        let b = HermitianOperator::new(matrix_polynomial(&qc, c.entries()))?;
        let shared = (a.entries() * &psi - b.entries() * &psi).norm();
        let comm = a.commutator_norm(&b);
        for (k, (_, f)) in THEOREM_FUNCTIONS.iter().enumerate() {
            let r = verify_function_transfer(&a, &b, &psi, f)?;
            worst = worst.max(r);
            table.push(vec![trial as f64, k as f64, r, comm, shared]);
        }
    }

    Ok(ExperimentOutput {
        tables: vec![table],
        checks: vec![Check::at_most("function_transfer_residual", worst, 1e-9)],
    })
}
