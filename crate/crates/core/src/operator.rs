//! Spectral calculus for dense Hermitian matrices.
//!
//! Every matrix function in this crate goes through [`diagonalize`]: the
//! eigenvalues are mapped by a scalar function and the matrix is rebuilt as
//! `U f(Λ) U†`. Power series are never used for this, since the arctangent
//! series diverges once the spectral radius exceeds one.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::clock::ClockParams;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Acceptance thresholds for the structural checks done on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound on `max |A - A†|`, scaled by `1 + max |A_ij|`.
    pub hermiticity: f64,
    /// Relative bound on `max |U Λ U† - A|`, scaled by `1 + spectral radius`.
    pub reconstruction: f64,
    /// Bound on `max |U†U - I|` for eigenvector matrices.
    pub orthonormality: f64,
    /// Bound on `max |U†U - I|` for propagators.
    pub unitarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            reconstruction: 1e-10,
            orthonormality: 1e-12,
            unitarity: 1e-10,
        }
    }
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

fn identity_defect(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    max_abs_diff(&gram, &id)
}

/// Dense complex matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        Self::with_tolerance(entries, Tolerances::default().hermiticity)
    }

    /// Checks `max |A - A†| <= tolerance * (1 + max |A_ij|)` and stores the
    /// exactly Hermitian part `(A + A†) / 2`.
    pub fn with_tolerance(entries: CMatrix, tolerance: f64) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Grid("matrix has non-finite entries".into()));
        }
        let adjoint = entries.adjoint();
        let defect = max_abs_diff(&entries, &adjoint);
        let bound = tolerance * (1.0 + max_abs(&entries));
        if defect > bound {
            return Err(Error::NotHermitian {
                defect,
                tolerance: bound,
            });
        }
        let entries = (&entries + adjoint).scale(0.5);
        Ok(Self {
            entries,
            hermiticity_defect: defect,
        })
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(
            diagonal.len(),
            diagonal.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        Self::new(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.scale(factor),
            hermiticity_defect: self.hermiticity_defect * factor.abs(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::new(&self.entries + &other.entries)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_len(self.dim(), v)?;
        Ok(&self.entries * v)
    }

    /// `max |[A, B]|` entrywise.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        max_abs_diff(&ab, &ba)
    }

    /// Hilbert–Schmidt projection coefficient `Tr(P A) / dim` onto a
    /// Hermitian basis element `P` with `P² = I`.
    pub fn projection(&self, basis: &CMatrix) -> f64 {
        let tr = (basis * &self.entries).trace();
        tr.re / self.dim() as f64
    }
}

fn check_len(dim: usize, v: &CVector) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(())
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    reconstruction_residual: f64,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, e| acc.max(e.abs()))
    }

    /// `U diag(values) U†` for an arbitrary complex diagonal.
    fn rebuild(&self, values: &[Complex64]) -> CMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (mut col, &v) in scaled.column_iter_mut().zip(values) {
            col *= v;
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// Applies a real scalar function to the spectrum.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<HermitianOperator> {
        let mut values = Vec::with_capacity(self.eigenvalues.len());
        for &e in &self.eigenvalues {
            let fe = f(e);
            if !fe.is_finite() {
                return Err(Error::NonFiniteSpectralValue { eigenvalue: e });
            }
            values.push(Complex64::new(fe, 0.0));
        }
        HermitianOperator::new(self.rebuild(&values))
    }

    /// Applies a complex scalar function to the spectrum; used for
    /// exponentials, whose result is not Hermitian.
    pub fn map_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<CMatrix> {
        let mut values = Vec::with_capacity(self.eigenvalues.len());
        for &e in &self.eigenvalues {
            let fe = f(e);
            if !fe.re.is_finite() || !fe.im.is_finite() {
                return Err(Error::NonFiniteSpectralValue { eigenvalue: e });
            }
            values.push(fe);
        }
        Ok(self.rebuild(&values))
    }
}

pub fn diagonalize(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    diagonalize_with(h, &Tolerances::default())
}

pub fn diagonalize_with(h: &HermitianOperator, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let eig = SymmetricEigen::try_new(h.entries.clone(), f64::EPSILON, 1000 * n.max(10)).ok_or(
        Error::EigenSolver {
            reason: "QR iteration did not converge",
            residual: f64::NAN,
        },
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let mut decomposition = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        reconstruction_residual: 0.0,
    };

    let orthonormality = identity_defect(&decomposition.eigenvectors);
    if orthonormality > tol.orthonormality {
        return Err(Error::EigenSolver {
            reason: "eigenvectors are not orthonormal",
            residual: orthonormality,
        });
    }

    let values: Vec<Complex64> = decomposition
        .eigenvalues
        .iter()
        .map(|&e| Complex64::new(e, 0.0))
        .collect();
    let residual = max_abs_diff(&decomposition.rebuild(&values), &h.entries);
    if residual > tol.reconstruction * (1.0 + decomposition.spectral_radius()) {
        return Err(Error::EigenSolver {
            reason: "reconstruction residual too large",
            residual,
        });
    }
    decomposition.reconstruction_residual = residual;
    Ok(decomposition)
}

/// `U f(Λ) U†` for a real scalar function `f`.
pub fn apply_spectral_function<F: Fn(f64) -> f64>(
    h: &HermitianOperator,
    f: F,
) -> Result<HermitianOperator> {
    diagonalize(h)?.map(f)
}

/// The generator of translations in the deformed time parameter,
/// `(ħ/√κ) arctan(√κ H / ħ)`. Its spectrum is confined to
/// `(-ħπ/(2√κ), ħπ/(2√κ))` however large `H` is.
pub fn effective_hamiltonian(
    h: &HermitianOperator,
    clock: &ClockParams,
) -> Result<HermitianOperator> {
    let sk = clock.delta_t0();
    let hbar = clock.hbar();
    apply_spectral_function(h, |e| hbar / sk * (sk * e / hbar).atan())
}

/// The right-hand side operator of the lattice Schrödinger equation,
/// `H (1 + κ (H/ħ)²)⁻¹`.
pub fn lattice_generator(h: &HermitianOperator, clock: &ClockParams) -> Result<HermitianOperator> {
    let kappa = clock.kappa();
    let hbar = clock.hbar();
    apply_spectral_function(h, |e| e / (1.0 + kappa * (e / hbar).powi(2)))
}

/// Dense unitary matrix, checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    entries: CMatrix,
}

impl UnitaryOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        Self::with_tolerance(entries, Tolerances::default().unitarity)
    }

    pub fn with_tolerance(entries: CMatrix, tolerance: f64) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let defect = identity_defect(&entries);
        if defect > tolerance {
            return Err(Error::NotUnitary { defect, tolerance });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_len(self.dim(), v)?;
        Ok(&self.entries * v)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::new(&self.entries * &other.entries)
    }
}

/// `exp(-i τ H_eff / ħ)` built from the spectral decomposition of `H_eff`.
pub fn propagator(h_eff: &HermitianOperator, tau: f64, hbar: f64) -> Result<UnitaryOperator> {
    let d = diagonalize(h_eff)?;
    let m = d.map_complex(|e| Complex64::from_polar(1.0, -tau * e / hbar))?;
    UnitaryOperator::new(m)
}

/// Solution operator of the lattice Schrödinger equation after `steps`
/// lattice sites, `exp(-2 i n arctan(√κ H / ħ))`.
pub fn lattice_propagator(
    h: &HermitianOperator,
    clock: &ClockParams,
    steps: i64,
) -> Result<UnitaryOperator> {
    let sk = clock.delta_t0();
    let hbar = clock.hbar();
    let d = diagonalize(h)?;
    let m = d.map_complex(|e| {
        Complex64::from_polar(1.0, -2.0 * steps as f64 * (sk * e / hbar).atan())
    })?;
    UnitaryOperator::new(m)
}

/// Euclidean norm of `f(A)ψ - f(B)ψ` for commuting Hermitian `A`, `B` that
/// act identically on `ψ`.
///
/// The hypotheses are checked first (commutator and `|Aψ - Bψ|` below
/// `1e-10`, `ψ` normalized); a violated hypothesis is reported as
/// [`Error::Precondition`].
pub fn verify_function_transfer<F: Fn(f64) -> f64>(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &CVector,
    f: F,
) -> Result<f64> {
    const HYPOTHESIS_TOL: f64 = 1e-10;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    check_len(a.dim(), psi)?;

    let norm_defect = (psi.norm() - 1.0).abs();
    if norm_defect > HYPOTHESIS_TOL {
        return Err(Error::Precondition {
            condition: "psi normalized",
            residual: norm_defect,
            tolerance: HYPOTHESIS_TOL,
        });
    }
    let commutator = a.commutator_norm(b);
    if commutator > HYPOTHESIS_TOL {
        return Err(Error::Precondition {
            condition: "[A, B] = 0",
            residual: commutator,
            tolerance: HYPOTHESIS_TOL,
        });
    }
    let shared = (a.entries() * psi - b.entries() * psi).norm();
    if shared > HYPOTHESIS_TOL {
        return Err(Error::Precondition {
            condition: "A psi = B psi",
            residual: shared,
            tolerance: HYPOTHESIS_TOL,
        });
    }

    let fa = apply_spectral_function(a, &f)?;
    let fb = apply_spectral_function(b, &f)?;
    Ok((fa.entries() * psi - fb.entries() * psi).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{sigma_x, sigma_z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> HermitianOperator {
        let m = CMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        HermitianOperator::new((&m + m.adjoint()).scale(0.5 * scale)).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            HermitianOperator::new(rect),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn identity_spectrum() {
        let id = HermitianOperator::new(CMatrix::identity(2, 2)).unwrap();
        let d = diagonalize(&id).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 1.0]);
    }

    #[test]
    fn sigma_z_spectrum_is_ascending() {
        let z = HermitianOperator::new(sigma_z()).unwrap();
        let d = diagonalize(&z).unwrap();
        assert_eq!(d.eigenvalues(), &[-1.0, 1.0]);
        // ascending order puts |down> first
        assert!((d.eigenvectors()[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((d.eigenvectors()[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(5, 1.0, &mut rng);
        let d = diagonalize(&h).unwrap();
        assert!(d.reconstruction_residual() < 1e-10);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_function_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(6, 3.0, &mut rng);
        let same = apply_spectral_function(&h, |x| x).unwrap();
        assert!(max_abs_diff(same.entries(), h.entries()) < 1e-12);
    }

    #[test]
    fn arctan_of_scaled_sigma_z() {
        let a = 2.7;
        let h = HermitianOperator::new(sigma_z().scale(a)).unwrap();
        let out = apply_spectral_function(&h, f64::atan).unwrap();
        let expected = sigma_z().scale(a.atan());
        assert!(max_abs_diff(out.entries(), &expected) < 1e-14);
    }

    #[test]
    fn arctan_matches_taylor_at_small_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(3, 1.0, &mut rng);
        let rho = diagonalize(&h).unwrap().spectral_radius();
        let h = h.scale(0.1 / rho);
        let out = apply_spectral_function(&h, f64::atan).unwrap();
        // x - x^3/3 + x^5/5 - x^7/7, remainder ~ 0.1^9 / 9
        let x = h.entries();
        let x2 = x * x;
        let x3 = &x2 * x;
        let x5 = &x3 * &x2;
        let x7 = &x5 * &x2;
        let series = x - x3.scale(1.0 / 3.0) + x5.scale(0.2) - x7.scale(1.0 / 7.0);
        assert!(max_abs_diff(out.entries(), &series) < 1e-10);
    }

    #[test]
    fn composition_of_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = random_hermitian(4, 2.0, &mut rng);
        let inner = apply_spectral_function(&h, f64::tanh).unwrap();
        let nested = apply_spectral_function(&inner, f64::atan).unwrap();
        let direct = apply_spectral_function(&h, |x| x.tanh().atan()).unwrap();
        assert!(max_abs_diff(nested.entries(), direct.entries()) < 1e-10);
    }

    #[test]
    fn non_finite_function_names_eigenvalue() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let err = apply_spectral_function(&h, |x| 1.0 / x).unwrap_err();
        assert_eq!(err, Error::NonFiniteSpectralValue { eigenvalue: 0.0 });
    }

    #[test]
    fn effective_hamiltonian_spin() {
        let clock = ClockParams::new(0.3, 0.0, 1.0).unwrap();
        let w0 = 4.0;
        let h = HermitianOperator::new(sigma_z().scale(w0 / 2.0)).unwrap();
        let heff = effective_hamiltonian(&h, &clock).unwrap();
        let sk = clock.delta_t0();
        let expected = sigma_z().scale((sk * w0 / 2.0).atan() / sk);
        assert!(max_abs_diff(heff.entries(), &expected) < 1e-14);
        assert!(heff.commutator_norm(&h) < 1e-10);
    }

    #[test]
    fn effective_hamiltonian_is_bounded() {
        let clock = ClockParams::new(0.04, 0.0, 1.0).unwrap();
        let cap = std::f64::consts::FRAC_PI_2 / clock.delta_t0();
        let h = HermitianOperator::from_real_diagonal(&[
            0.0,
            -1e6 / clock.delta_t0(),
            1e6 / clock.delta_t0(),
        ])
        .unwrap();
        let heff = effective_hamiltonian(&h, &clock).unwrap();
        let d = diagonalize(&heff).unwrap();
        assert!(d.eigenvalues().iter().all(|e| e.abs() < cap));
        assert!(d.eigenvalues().iter().any(|e| e.abs() < 1e-15));
    }

    #[test]
    fn effective_hamiltonian_small_kappa_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_hermitian(4, 1.0, &mut rng);
        let clock = ClockParams::new(1e-12, 0.0, 1.0).unwrap();
        let heff = effective_hamiltonian(&h, &clock).unwrap();
        assert!(max_abs_diff(heff.entries(), h.entries()) < 1e-8);
    }

    #[test]
    fn propagator_identity_and_diagonal() {
        let h = HermitianOperator::from_real_diagonal(&[0.4, -1.3]).unwrap();
        let u0 = propagator(&h, 0.0, 1.0).unwrap();
        assert!(max_abs_diff(u0.entries(), &CMatrix::identity(2, 2)) < 1e-15);
        let tau = 0.77;
        let hbar = 0.5;
        let u = propagator(&h, tau, hbar).unwrap();
        assert!(
            (u.entries()[(0, 0)] - Complex64::from_polar(1.0, -tau * 0.4 / hbar)).norm() < 1e-14
        );
        assert!(
            (u.entries()[(1, 1)] - Complex64::from_polar(1.0, tau * 1.3 / hbar)).norm() < 1e-14
        );
        assert!(u.entries()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn propagator_group_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = random_hermitian(5, 2.0, &mut rng);
        let (t1, t2) = (0.37, -1.21);
        let u1 = propagator(&h, t1, 1.0).unwrap();
        let u2 = propagator(&h, t2, 1.0).unwrap();
        let u12 = propagator(&h, t1 + t2, 1.0).unwrap();
        assert!(max_abs_diff(u1.compose(&u2).unwrap().entries(), u12.entries()) < 1e-10);
    }

    #[test]
    fn lattice_propagator_samples_continuous_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let h = random_hermitian(4, 5.0, &mut rng);
        let clock = ClockParams::new(0.09, 0.0, 1.0).unwrap();
        let heff = effective_hamiltonian(&h, &clock).unwrap();
        for n in [-3i64, 0, 1, 7] {
            let lattice = lattice_propagator(&h, &clock, n).unwrap();
            let tau = 2.0 * clock.delta_t0() * n as f64;
            let cont = propagator(&heff, tau, clock.hbar()).unwrap();
            assert!(max_abs_diff(lattice.entries(), cont.entries()) < 1e-12);
        }
    }

    #[test]
    fn lattice_sequence_solves_discrete_equation() {
        // i ħ (ψ_{n+1} - ψ_{n-1}) / (4√κ) = H (1 + κ H²/ħ²)⁻¹ ψ_n
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let h = random_hermitian(3, 4.0, &mut rng);
        let clock = ClockParams::new(0.25, 0.0, 0.7).unwrap();
        let psi0 = CVector::from_fn(3, |i, _| c(1.0 + i as f64, 0.5 - i as f64)).normalize();
        let step = |n| {
            lattice_propagator(&h, &clock, n)
                .unwrap()
                .apply(&psi0)
                .unwrap()
        };
        let generator = lattice_generator(&h, &clock).unwrap();
        for n in [-1i64, 0, 4] {
            let lhs = (step(n + 1) - step(n - 1)) * c(0.0, clock.hbar() / (4.0 * clock.delta_t0()));
            let rhs = generator.apply(&step(n)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn function_transfer_shared_eigenvector() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 5.0]).unwrap();
        let b = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 7.0]).unwrap();
        let psi = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let r = verify_function_transfer(&a, &b, &psi, f64::atan).unwrap();
        assert!(r <= 1e-12);
        let same = verify_function_transfer(&a, &a, &psi, f64::tanh).unwrap();
        assert!(same < 1e-14);
    }

    #[test]
    fn function_transfer_rejects_violated_hypotheses() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let b = HermitianOperator::from_real_diagonal(&[3.0, 2.0]).unwrap();
        let psi = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let err = verify_function_transfer(&a, &b, &psi, f64::atan).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                condition: "A psi = B psi",
                ..
            }
        ));

        let x = HermitianOperator::new(sigma_x()).unwrap();
        let z = HermitianOperator::new(sigma_z()).unwrap();
        let err = verify_function_transfer(&x, &z, &psi, f64::atan).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                condition: "[A, B] = 0",
                ..
            }
        ));

        let unnormalized = CVector::from_vec(vec![c(2.0, 0.0), c(0.0, 0.0)]);
        let err = verify_function_transfer(&a, &a, &unnormalized, f64::atan).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                condition: "psi normalized",
                ..
            }
        ));
    }
}
