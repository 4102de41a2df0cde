use num_complex::Complex64;

use super::transforms::Truncated;
use super::{sinc, ClockParams};
use crate::error::{Error, Result};

/// Lattice samples ψₙ at times `2√κ(λ + n)` for `n_min ..= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSampleSequence {
    n_min: i64,
    values: Vec<Complex64>,
    clock: ClockParams,
}

impl TimeSampleSequence {
    pub fn new(n_min: i64, values: Vec<Complex64>, clock: ClockParams) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Grid(format!(
                "a time sample sequence needs at least 3 sites, got {}",
                values.len()
            )));
        }
        Ok(Self {
            n_min,
            values,
            clock,
        })
    }

    /// Samples `f(τ)` at each lattice site.
    pub fn sample<F: Fn(f64) -> Complex64>(
        n_min: i64,
        n_max: i64,
        clock: ClockParams,
        f: F,
    ) -> Result<Self> {
        let values = (n_min..=n_max).map(|n| f(clock.lattice_time(n))).collect();
        Self::new(n_min, values, clock)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn clock(&self) -> &ClockParams {
        &self.clock
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        if n < self.n_min || n > self.n_max() {
            None
        } else {
            Some(self.values[(n - self.n_min) as usize])
        }
    }

    /// `(n, ψₙ)` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.n_min + k as i64, v))
    }

    /// `Σₙ |ψₙ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Band-limited reconstruction `Σₙ ψₙ sinc((τ - 2√κ(λ+n)) / (2√κ))`.
pub fn sinc_reconstruct(seq: &TimeSampleSequence, tau: f64) -> Truncated<Complex64> {
    let clock = seq.clock();
    let u = tau / clock.lattice_spacing() - clock.lambda();
    let value = seq.iter().map(|(n, v)| v * sinc(u - n as f64)).sum();
    let vals = seq.values();
    Truncated {
        value,
        tail_estimate: vals[0].norm() + vals[vals.len() - 1].norm(),
    }
}

/// Central lattice derivative `(ψ_{n+1} - ψ_{n-1}) / (4√κ)`.
pub fn discrete_derivative(seq: &TimeSampleSequence, n: i64) -> Result<Complex64> {
    match (seq.get(n - 1), seq.get(n + 1)) {
        (Some(prev), Some(next)) => Ok((next - prev) / (4.0 * seq.clock().delta_t0())),
        _ => Err(Error::Range {
            index: n,
            min: seq.n_min() + 1,
            max: seq.n_max() - 1,
        }),
    }
}

/// `f(x) = 2x / (1 + √(1 - 4x²))` on `|x| <= 1/2`.
///
/// This maps the symbol of `-i√κDₙ`, which is `√κω/(1 + κω²)`, back to `√κω`
/// on the branch `√κ|ω| <= 1`.
pub fn symbol_f(x: f64) -> Result<f64> {
    if !(x.abs() <= 0.5) {
        return Err(Error::Domain {
            function: "symbol_f",
            value: x,
        });
    }
    // 1 - 4x² factored to keep precision near |x| = 1/2
    let disc = ((1.0 - 2.0 * x) * (1.0 + 2.0 * x)).max(0.0);
    Ok(2.0 * x / (1.0 + disc.sqrt()))
}

/// `x / (1 + x²)`.
pub fn symbol_f_inverse(x: f64) -> f64 {
    x / (1.0 + x * x)
}

/// Coefficients of the odd power series of [`symbol_f`],
/// `x + x³ + 2x⁵ + 5x⁷ + 14x⁹ + …`; these are the Catalan numbers.
pub fn catalan_coefficients(terms: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms);
    let mut c = 1.0;
    for k in 0..terms {
        out.push(c);
        c *= 2.0 * (2.0 * k as f64 + 1.0) / (k as f64 + 2.0);
    }
    out
}

/// Truncation of the odd series used for the lattice frequency operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySeries {
    /// Number of odd terms kept; the highest power is `2·terms - 1`.
    pub terms: usize,
    /// Assumed bound on the symbol `|√κω/(1 + κω²)|` of the input, used for
    /// the tail estimate. `0.4` corresponds to `√κ|ω| <= 1/2`.
    pub symbol_bound: f64,
}

impl Default for FrequencySeries {
    fn default() -> Self {
        Self {
            terms: 40,
            symbol_bound: 0.4,
        }
    }
}

impl FrequencySeries {
    /// Sites consumed on each side of the input sequence.
    pub fn reach(&self) -> i64 {
        2 * self.terms as i64 - 1
    }

    /// `f(b) - Σ_{k<terms} C_k b^{2k+1}` at the symbol bound `b`.
    pub fn tail_bound(&self) -> f64 {
        let b = self.symbol_bound;
        let partial: f64 = catalan_coefficients(self.terms)
            .iter()
            .enumerate()
            .map(|(k, c)| c * b.powi(2 * k as i32 + 1))
            .sum();
        match symbol_f(b) {
            Ok(full) => (full - partial).abs(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// The frequency operator on lattice samples, `f(-i√κDₙ)/√κ`, by the
/// truncated odd series of `f`.
///
/// Every application of the central difference consumes one site on each
/// side, so the output covers `n_min + reach ..= n_max - reach`.
pub fn discrete_frequency_apply(
    seq: &TimeSampleSequence,
    series: &FrequencySeries,
) -> Result<Truncated<TimeSampleSequence>> {
    if series.terms == 0 {
        return Err(Error::Parameter {
            name: "terms",
            value: 0.0,
            reason: "series needs at least one term",
        });
    }
    let reach = series.reach() as usize;
    let len = seq.values().len();
    if len < 2 * reach + 3 {
        return Err(Error::Grid(format!(
            "sequence of {len} sites too short for a series of reach {reach}"
        )));
    }
    let out_len = len - 2 * reach;
    let coeffs = catalan_coefficients(series.terms);

    // -i√κ D ψ = -i (ψ_{n+1} - ψ_{n-1}) / 4
    let step = |v: &[Complex64]| -> Vec<Complex64> {
        v.windows(3)
            .map(|w| (w[2] - w[0]) * Complex64::new(0.0, -0.25))
            .collect()
    };

    let mut acc = vec![Complex64::new(0.0, 0.0); out_len];
    let mut power = step(seq.values());
    for (k, &c) in coeffs.iter().enumerate() {
        // power holds (-i√κD)^{2k+1} ψ, shrunk by 2k+1 sites per side
        let offset = reach - (2 * k + 1);
        for (a, p) in acc.iter_mut().zip(&power[offset..offset + out_len]) {
            *a += p * c;
        }
        if k + 1 < coeffs.len() {
            power = step(&step(&power));
        }
    }

    let inv_sk = 1.0 / seq.clock().delta_t0();
    let values: Vec<Complex64> = acc.into_iter().map(|v| v * inv_sk).collect();
    let max_in = seq.values().iter().fold(0.0, |m: f64, v| m.max(v.norm()));
    let tail = series.tail_bound() * inv_sk * max_in;
    Ok(Truncated {
        value: TimeSampleSequence::new(seq.n_min() + reach as i64, values, *seq.clock())?,
        tail_estimate: tail,
    })
}
