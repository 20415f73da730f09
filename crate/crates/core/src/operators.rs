//! Dense Hermitian linear algebra on small matrices.
//!
//! Everything here works on `d x d` complex matrices with `d` in the low
//! single digits: eigendecomposition, spectral projectors, the trace norm,
//! and the Pauli (Bloch) coordinates of qubit operators.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance used when validating Hermiticity on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default tolerance for eigenvalue classification and PSD checks.
pub const EIGEN_TOL: f64 = 1e-10;

/// A `d x d` complex Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<Complex64>,
}

/// Real 3-vector of Pauli coordinates `(Tr[A sx], Tr[A sy], Tr[A sz])`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct BlochVector(pub [f64; 3]);

/// Eigenvalues (ascending) together with the projectors onto the negative,
/// null and positive eigenspaces.
#[derive(Clone, Debug)]
pub struct SpectralParts {
    pub eigenvalues: Vec<f64>,
    pub negative_projector: HermitianOperator,
    pub null_projector: HermitianOperator,
    pub positive_projector: HermitianOperator,
}

fn pauli(k: usize) -> DMatrix<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        1 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        2 => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => unreachable!("Pauli index out of range"),
    }
}

impl HermitianOperator {
    /// Builds an operator from a square complex matrix, rejecting it when
    /// `|a_ij - conj(a_ji)|` exceeds [`HERMITIAN_TOL`].
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian(worst));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Builds an operator from row-major `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        let data: Vec<Complex64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&(re, im)| Complex64::new(re, im)))
            .collect();
        Self::new(DMatrix::from_row_slice(n, n, &data))
    }

    /// Symmetrizes `m` as `(m + m^dagger) / 2` without validation.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        Self { m: (m + adj) * Complex64::new(0.5, 0.0) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    /// `(X + X^dagger)/2` with entries of `X` uniform in `[-1, 1) + i[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let m = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        Self::from_matrix_unchecked(m)
    }

    /// Rank-one projector `|psi><psi|` (not normalized).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let m = DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
        Self::from_matrix_unchecked(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Row-major `(re, im)` pairs.
    pub fn to_rows(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| (self.m[(i, j)].re, self.m[(i, j)].im)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: &self.m * Complex64::new(s, 0.0) }
    }

    /// `Tr[self * other]`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        acc
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order with the matching unit eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<Complex64>>) {
        let eig = SymmetricEigen::new(self.m.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.m.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 2 {
            let (a, d) = (self.m[(0, 0)].re, self.m[(1, 1)].re);
            let r = ((a - d) / 2.0).hypot(self.m[(0, 1)].norm());
            return (a + d) / 2.0 - r;
        }
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Splits the spectrum into negative, null (`|lambda| <= tol`) and
    /// positive parts and returns the projector onto each.
    pub fn spectral_parts(&self, tol: f64) -> SpectralParts {
        let n = self.dim();
        let (values, vectors) = self.eigen();
        let mut parts = [DMatrix::<Complex64>::zeros(n, n), DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
        for (lambda, v) in values.iter().zip(&vectors) {
            let slot = if *lambda < -tol {
                0
            } else if *lambda <= tol {
                1
            } else {
                2
            };
            for i in 0..n {
                for j in 0..n {
                    parts[slot][(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        let [neg, null, pos] = parts;
        SpectralParts {
            eigenvalues: values,
            negative_projector: Self::from_matrix_unchecked(neg),
            null_projector: Self::from_matrix_unchecked(null),
            positive_projector: Self::from_matrix_unchecked(pos),
        }
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// True iff the smallest eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Operator absolute value `|A| = A_+ - A_-`.
    pub fn abs(&self) -> Self {
        let n = self.dim();
        let (values, vectors) = self.eigen();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (lambda, v) in values.iter().zip(&vectors) {
            let w = Complex64::new(lambda.abs(), 0.0);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += w * v[i] * v[j].conj();
                }
            }
        }
        Self::from_matrix_unchecked(m)
    }

    /// Pauli coordinates with the standard (unnormalized) Pauli matrices.
    pub fn pauli_vector(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::Dimension { expected: 2, got: self.dim() });
        }
        // Tr[A sx] = 2 Re a01, Tr[A sy] = -2 Im a01, Tr[A sz] = a00 - a11
        let a01 = self.m[(0, 1)];
        Ok(BlochVector([
            2.0 * a01.re,
            -2.0 * a01.im,
            self.m[(0, 0)].re - self.m[(1, 1)].re,
        ]))
    }

    /// Inverse of the Pauli map: `(trace * I + v . sigma) / 2`.
    pub fn from_bloch(trace: f64, v: BlochVector) -> Self {
        let mut m = DMatrix::identity(2, 2) * Complex64::new(trace, 0.0);
        for (k, &c) in v.0.iter().enumerate() {
            m += pauli(k) * Complex64::new(c, 0.0);
        }
        Self { m: m * Complex64::new(0.5, 0.0) }
    }

    /// Distance `max |a_ij - b_ij|`.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { m: &self.m - &rhs.m }
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        HermitianOperator { m: -&self.m }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

/// Free-function form of [`HermitianOperator::pauli_vector`].
pub fn pauli_vector(a: &HermitianOperator) -> Result<BlochVector> {
    a.pauli_vector()
}

/// Free-function form of [`HermitianOperator::from_bloch`].
pub fn from_bloch(trace: f64, v: BlochVector) -> HermitianOperator {
    HermitianOperator::from_bloch(trace, v)
}

/// Free-function form of [`HermitianOperator::spectral_parts`].
pub fn spectral_parts(a: &HermitianOperator, tol: f64) -> SpectralParts {
    a.spectral_parts(tol)
}

/// Free-function form of [`HermitianOperator::trace_norm`].
pub fn trace_norm(a: &HermitianOperator) -> f64 {
    a.trace_norm()
}

/// Free-function form of [`HermitianOperator::is_psd`].
pub fn is_psd(a: &HermitianOperator, tol: f64) -> bool {
    a.is_psd(tol)
}
