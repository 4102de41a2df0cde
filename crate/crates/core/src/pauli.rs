//! Pauli matrices and tensor-product embeddings.
//!
//! Multi-spin operators use one ordering throughout the crate: the first
//! tensor factor is the slowest-varying index, so basis state `|b₀ b₁ … b_{n-1}⟩`
//! sits at index `Σ b_k 2^{n-1-k}` with `|↑⟩ = 0` and `|↓⟩ = 1`. Every
//! embedding goes through [`kron_all`], which is the only place the ordering
//! is decided.

use num_complex::Complex64;

use crate::operator::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::identity(2, 2),
            Pauli::X => sigma_x(),
            Pauli::Y => sigma_y(),
            Pauli::Z => sigma_z(),
        }
    }
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// `|↑⟩⟨↓|`
pub fn sigma_plus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

/// Kronecker product of the factors, first factor slowest.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Tensor product of single-site Pauli matrices.
pub fn pauli_string(ops: &[Pauli]) -> CMatrix {
    let factors: Vec<CMatrix> = ops.iter().map(|p| p.matrix()).collect();
    kron_all(&factors)
}

/// `op` acting on `site` of an `n_sites` register, identity elsewhere.
pub fn embed(op: &CMatrix, site: usize, n_sites: usize) -> CMatrix {
    assert!(site < n_sites, "site {site} outside register of {n_sites}");
    let factors: Vec<CMatrix> = (0..n_sites)
        .map(|k| {
            if k == site {
                op.clone()
            } else {
                CMatrix::identity(op.nrows(), op.ncols())
            }
        })
        .collect();
    kron_all(&factors)
}

/// `Σ_k σ_z^{(k)}` on `n_sites` spins.
pub fn total_z(n_sites: usize) -> CMatrix {
    let z = sigma_z();
    (0..n_sites).fold(CMatrix::zeros(1 << n_sites, 1 << n_sites), |acc, k| {
        acc + embed(&z, k, n_sites)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs_diff;

    #[test]
    fn algebra() {
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        let i = Complex64::new(0.0, 1.0);
        assert!(max_abs_diff(&(&x * &y), &z.map(|v| v * i)) < 1e-15);
        assert!(max_abs_diff(&(&z * &z), &CMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn ordering_first_factor_slowest() {
        // σ_z on site 0 of two spins is diag(1, 1, -1, -1)
        let zi = embed(&sigma_z(), 0, 2);
        let diag: Vec<f64> = (0..4).map(|k| zi[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        let iz = pauli_string(&[Pauli::I, Pauli::Z]);
        let diag: Vec<f64> = (0..4).map(|k| iz[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn total_z_three_sites() {
        let t = total_z(3);
        assert_eq!(t[(0, 0)].re, 3.0);
        assert_eq!(t[(7, 7)].re, -3.0);
        assert_eq!(t[(1, 1)].re, 1.0);
    }
}
