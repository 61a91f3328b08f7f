//! Dense 4x4 complex matrix kernel.
//!
//! Just enough linear algebra for two-qubit density matrices: products,
//! traces, adjoints, Kronecker products of single-qubit operators, and a
//! cyclic Jacobi eigensolver for Hermitian input.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum `|m[i][j] - conj(m[j][i])|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which Jacobi iteration stops, relative to
/// the Frobenius norm of the input.
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const IDENTITY2: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Matrix2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

/// A 4x4 complex matrix in the computational basis |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4 {
    entries: [[Complex64; 4]; 4],
}

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl ComplexMatrix4 {
    pub const fn from_entries(entries: [[Complex64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn from_real(entries: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in entries.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.entries[i][j] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub const fn zeros() -> Self {
        Self { entries: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(values: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in values.iter().enumerate() {
            m.entries[i][i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Kronecker product `a ⊗ b` of two single-qubit operators.
    pub fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        Self::from_entries(std::array::from_fn(|r| {
            std::array::from_fn(|c| a[r / 2][c / 2] * b[r % 2][c % 2])
        }))
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[Complex64; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|m[i][j] - conj(m[j][i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_TOL
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.entries[i][j] * v[j]).sum();
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row][col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[row][col]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        matmul(&self, &rhs)
    }
}

pub fn matmul(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.entries[i][j] = (0..4).map(|k| a.entries[i][k] * b.entries[k][j]).sum();
        }
    }
    m
}

/// `tr(a·b)` without forming the product.
pub fn trace_product(a: &ComplexMatrix4, b: &ComplexMatrix4) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            acc += a.entries[i][j] * b.entries[j][i];
        }
    }
    acc
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// `values` are sorted descending; column `k` of `vectors` is the unit
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: ComplexMatrix4,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> [Complex64; 4] {
        std::array::from_fn(|i| self.vectors[(i, k)])
    }
}

/// Cyclic Jacobi diagonalisation of a Hermitian 4x4 matrix.
pub fn hermitian_eigen(m: &ComplexMatrix4) -> Result<HermitianEigen> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL || deviation.is_nan() {
        return Err(Error::NotHermitian { deviation });
    }
    // Symmetrise to absorb roundoff before rotating.
    let mut a = (*m + m.adjoint()).scale(0.5);
    let mut v = ComplexMatrix4::identity();
    let threshold = JACOBI_TOL * a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    let diag: [f64; 4] = std::array::from_fn(|i| a[(i, i)].re);
    // Stable sort: ties keep the original index order.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let mut vectors = ComplexMatrix4::zeros();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..4 {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values: order.map(|i| diag[i]), vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`.
///
/// The (p, q) plane transform is `W = diag(1, ω)·R(θ)` where the phase
/// `ω = exp(-i·arg a_pq)` makes the pivot real and `R` is the real Jacobi
/// rotation. `a` becomes `W† a W` and `v` accumulates `v W`.
fn rotate(a: &mut ComplexMatrix4, v: &mut ComplexMatrix4, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let omega = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (-2.0 * r).atan2(app - aqq);
    let (s, c) = theta.sin_cos();

    // a <- a W (columns)
    for k in 0..4 {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * omega * s;
        a[(k, q)] = akp * s + akq * omega * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * omega * s;
        v[(k, q)] = vkp * s + vkq * omega * c;
    }
    // a <- W† a (rows)
    let omega_c = omega.conj();
    for k in 0..4 {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * omega_c * s;
        a[(q, k)] = apk * s + aqk * omega_c * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Singular values sorted descending.
///
/// Hermitian input takes the fast path `|λ|`; anything else goes through
/// the eigenvalues of `m†m`.
pub fn singular_values(m: &ComplexMatrix4) -> [f64; 4] {
    let mut out = match hermitian_eigenvalues(m) {
        Ok(values) => values.map(f64::abs),
        Err(_) => {
            let gram = matmul(&m.adjoint(), m);
            hermitian_eigenvalues(&gram)
                .expect("m†m is Hermitian by construction")
                .map(|x| x.max(0.0).sqrt())
        }
    };
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_hermitian() -> ComplexMatrix4 {
        ComplexMatrix4::from_entries([
            [c(0.4, 0.0), c(0.1, 0.2), c(-0.05, 0.0), c(0.0, 0.3)],
            [c(0.1, -0.2), c(0.1, 0.0), c(0.2, 0.1), c(0.05, 0.0)],
            [c(-0.05, 0.0), c(0.2, -0.1), c(-0.3, 0.0), c(0.0, -0.1)],
            [c(0.0, -0.3), c(0.05, 0.0), c(0.0, 0.1), c(0.8, 0.0)],
        ])
    }

    #[test]
    fn identity_is_neutral() {
        let m = sample_hermitian();
        assert_eq!(matmul(&ComplexMatrix4::identity(), &m), m);
        assert_eq!(matmul(&m, &ComplexMatrix4::identity()), m);
    }

    #[test]
    fn diagonal_product() {
        let p = matmul(
            &ComplexMatrix4::diag([1.0, 2.0, 3.0, 4.0]),
            &ComplexMatrix4::diag([4.0, 3.0, 2.0, 1.0]),
        );
        assert_eq!(p, ComplexMatrix4::diag([4.0, 6.0, 6.0, 4.0]));
    }

    #[test]
    fn trace_of_identity_product() {
        let id = ComplexMatrix4::identity();
        assert_eq!(trace_product(&id, &id), c(4.0, 0.0));
    }

    #[test]
    fn double_adjoint() {
        let m = sample_hermitian() * ComplexMatrix4::kron(&PAULI_Y, &PAULI_X);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn eigenvalues_of_diagonal_input() {
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix4::identity()).unwrap(), [1.0; 4]);
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix4::diag([0.1, 0.0, 0.9, 0.0])).unwrap(),
            [0.9, 0.1, 0.0, 0.0]
        );
    }

    #[test]
    fn eigen_residuals_are_small() {
        let m = sample_hermitian();
        let eig = hermitian_eigen(&m).unwrap();
        for k in 0..4 {
            let v = eig.vector(k);
            let mv = m.apply(&v);
            let residual: f64 =
                (0..4).map(|i| (mv[i] - v[i] * eig.values[k]).norm_sqr()).sum::<f64>().sqrt();
            assert!(residual <= 1e-10, "residual {residual}");
        }
        let sum: f64 = eig.values.iter().sum();
        assert_abs_diff_eq!(sum, m.trace().re, epsilon = 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = sample_hermitian();
        m[(0, 1)] += c(1e-6, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn singular_values_basic() {
        assert_eq!(singular_values(&ComplexMatrix4::zeros()), [0.0; 4]);
        assert_eq!(
            singular_values(&ComplexMatrix4::diag([-0.5, 0.5, 0.0, 0.0])),
            [0.5, 0.5, 0.0, 0.0]
        );
    }

    #[test]
    fn singular_values_of_non_hermitian() {
        // Upper shift: singular values 1, 1, 1, 0.
        let mut m = ComplexMatrix4::zeros();
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 2)] = c(0.0, 2.0);
        m[(2, 3)] = c(-3.0, 0.0);
        let s = singular_values(&m);
        for (got, want) in s.iter().zip([3.0, 2.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn pauli_kron_is_involution() {
        for p in [&PAULI_X, &PAULI_Y, &PAULI_Z] {
            let k = ComplexMatrix4::kron(p, p);
            assert!(matmul(&k, &k).max_abs_diff(&ComplexMatrix4::identity()) < 1e-15);
        }
    }
}
