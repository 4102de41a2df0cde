//! Small finite-difference helpers shared by the grid-based models.

use num_complex::Complex64;

/// Fourth-order first derivative of uniformly spaced samples.
///
/// Central five-point stencils in the interior, five-point one-sided
/// stencils at the two outermost samples on each side.
pub(crate) fn fd4_derivative(y: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = y.len();
    assert!(n >= 5, "fourth-order differences need at least 5 samples");
    let s = 1.0 / (12.0 * h);
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for j in 2..n - 2 {
        d[j] = (y[j - 2] - y[j - 1] * 8.0 + y[j + 1] * 8.0 - y[j + 2]) * s;
    }
    d[0] = (y[0] * -25.0 + y[1] * 48.0 - y[2] * 36.0 + y[3] * 16.0 - y[4] * 3.0) * s;
    d[1] = (y[0] * -3.0 - y[1] * 10.0 + y[2] * 18.0 - y[3] * 6.0 + y[4]) * s;
    let m = n - 1;
    d[m] =
        -(y[m] * -25.0 + y[m - 1] * 48.0 - y[m - 2] * 36.0 + y[m - 3] * 16.0 - y[m - 4] * 3.0) * s;
    d[m - 1] = -(y[m] * -3.0 - y[m - 1] * 10.0 + y[m - 2] * 18.0 - y[m - 3] * 6.0 + y[m - 4]) * s;
    d
}

/// Trapezoid weights for `n` uniformly spaced samples with spacing `h`.
pub(crate) fn trapezoid_weight(j: usize, n: usize, h: f64) -> f64 {
    if j == 0 || j + 1 == n {
        0.5 * h
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_quartic_is_exact() {
        let h = 0.1;
        let xs: Vec<f64> = (0..12).map(|j| -0.4 + j as f64 * h).collect();
        let y: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new(x.powi(4) - x, 2.0 * x * x))
            .collect();
        let d = fd4_derivative(&y, h);
        for (x, dv) in xs.iter().zip(&d) {
            let exact = Complex64::new(4.0 * x.powi(3) - 1.0, 4.0 * x);
            assert!((dv - exact).norm() < 1e-12, "{x}: {dv} vs {exact}");
        }
    }

    #[test]
    fn derivative_of_exponential_is_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let y: Vec<Complex64> = (0..=n)
                .map(|j| Complex64::new((j as f64 * h).exp(), 0.0))
                .collect();
            let d = fd4_derivative(&y, h);
            d.iter()
                .enumerate()
                .map(|(j, v)| (v.re - (j as f64 * h).exp()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 12.0, "convergence ratio {ratio}");
    }
}
