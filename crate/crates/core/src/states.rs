//! Bell-diagonal two-qubit states.
//!
//! A Bell-diagonal state is `ρ = ¼(I⊗I + Σ c_i σ_i⊗σ_i)`, fixed entirely by
//! the correlation triple `(c1, c2, c3)`. Its eigenvectors are the Bell
//! states
//!
//! ```text
//! |Ψ±> = (|00> ± |11>)/√2     |Φ±> = (|01> ± |10>)/√2
//! ```
//!
//! with eigenvalues `λ±_Ψ = (1 ± c1 ∓ c2 + c3)/4` and
//! `λ±_Φ = (1 ± c1 ± c2 − c3)/4`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{trace_product, ComplexMatrix4, PAULI_X, PAULI_Y, PAULI_Z};

/// Eigenvalues down to this are accepted as non-negative.
pub const VALIDITY_TOL: f64 = 1e-12;

/// Reconstruction error above which a matrix is not Bell-diagonal.
pub const BELL_DIAGONAL_TOL: f64 = 1e-8;

/// The correlation triple `(c1, c2, c3)` of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellCoefficients {
    c: [f64; 3],
}

impl BellCoefficients {
    /// Fails with [`Error::Domain`] unless every `|c_i| <= 1`.
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c = [c1, c2, c3];
        if c.iter().any(|x| !x.is_finite() || x.abs() > 1.0) {
            return Err(Error::Domain(format!(
                "Bell coefficients must lie in [-1, 1], got ({c1}, {c2}, {c3})"
            )));
        }
        Ok(Self { c })
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self> {
        Self::new(c[0], c[1], c[2])
    }

    /// Callers guarantee `|c_i| <= 1`.
    pub(crate) fn from_array_unchecked(c: [f64; 3]) -> Self {
        debug_assert!(c.iter().all(|x| x.abs() <= 1.0));
        Self { c }
    }

    /// The maximally mixed state.
    pub fn zero() -> Self {
        Self { c: [0.0; 3] }
    }

    /// Werner state with magnitude `c`, stored as `(c, −c, c)` so that it is
    /// valid for every `c` in `[0, 1]`.
    pub fn werner(c: f64) -> Result<Self> {
        Self::new(c, -c, c)
    }

    /// Draws a triple uniformly from the tetrahedron of valid states by
    /// rejection from the cube `[-1, 1]³`.
    pub fn sample_valid<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c = Self {
                c: [
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                ],
            };
            if c.is_valid() {
                return c;
            }
        }
    }

    pub fn c1(&self) -> f64 {
        self.c[0]
    }

    pub fn c2(&self) -> f64 {
        self.c[1]
    }

    pub fn c3(&self) -> f64 {
        self.c[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.c
    }

    pub fn magnitudes(&self) -> [f64; 3] {
        self.c.map(f64::abs)
    }

    /// Largest coefficient magnitude.
    pub fn chi(&self) -> f64 {
        self.magnitudes().into_iter().fold(0.0, f64::max)
    }

    pub fn spectrum(&self) -> BellSpectrum {
        spectrum(self)
    }

    pub fn is_valid(&self) -> bool {
        is_valid(self)
    }

    pub fn to_density_matrix(&self) -> ComplexMatrix4 {
        to_density_matrix(self)
    }

    /// Fails with [`Error::InvalidState`] when the spectrum has a negative
    /// entry.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidState(*self))
        }
    }
}

impl fmt::Display for BellCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c[0], self.c[1], self.c[2])
    }
}

/// Eigenvalues of a Bell-diagonal state, labelled by Bell vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    pub plus_psi: f64,
    pub minus_psi: f64,
    pub plus_phi: f64,
    pub minus_phi: f64,
}

impl BellSpectrum {
    /// In the order `Ψ+, Ψ−, Φ+, Φ−`.
    pub fn values(&self) -> [f64; 4] {
        [self.plus_psi, self.minus_psi, self.plus_phi, self.minus_phi]
    }

    pub fn sorted_desc(&self) -> [f64; 4] {
        let mut v = self.values();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn min(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }
}

pub fn spectrum(c: &BellCoefficients) -> BellSpectrum {
    let [c1, c2, c3] = c.c;
    BellSpectrum {
        plus_psi: (1.0 + c1 - c2 + c3) / 4.0,
        minus_psi: (1.0 - c1 + c2 + c3) / 4.0,
        plus_phi: (1.0 + c1 + c2 - c3) / 4.0,
        minus_phi: (1.0 - c1 - c2 - c3) / 4.0,
    }
}

pub fn is_valid(c: &BellCoefficients) -> bool {
    spectrum(c).min() >= -VALIDITY_TOL
}

/// `Σ c_i σ_i⊗σ_i / 4` written out in the computational basis.
///
/// The identity part is left out so the same map turns coefficient
/// derivatives into `dρ/dt`.
pub fn correlation_operator(c: [f64; 3]) -> ComplexMatrix4 {
    let [c1, c2, c3] = c;
    let mut m = ComplexMatrix4::zeros();
    let re = |x: f64| Complex64::new(x / 4.0, 0.0);
    m[(0, 0)] = re(c3);
    m[(1, 1)] = re(-c3);
    m[(2, 2)] = re(-c3);
    m[(3, 3)] = re(c3);
    m[(0, 3)] = re(c1 - c2);
    m[(3, 0)] = re(c1 - c2);
    m[(1, 2)] = re(c1 + c2);
    m[(2, 1)] = re(c1 + c2);
    m
}

pub fn to_density_matrix(c: &BellCoefficients) -> ComplexMatrix4 {
    ComplexMatrix4::identity().scale(0.25) + correlation_operator(c.c)
}

/// `σ_i ⊗ σ_i` for `i` in `0..3` (x, y, z).
pub fn pauli_pair(i: usize) -> ComplexMatrix4 {
    let p = [&PAULI_X, &PAULI_Y, &PAULI_Z][i];
    ComplexMatrix4::kron(p, p)
}

/// Recovers `c_i = tr(m·σ_i⊗σ_i)`, failing when `m` is not of Bell-diagonal
/// form.
pub fn from_density_matrix(m: &ComplexMatrix4) -> Result<BellCoefficients> {
    let raw: [f64; 3] = std::array::from_fn(|i| trace_product(m, &pauli_pair(i)).re);
    let c = BellCoefficients { c: raw.map(|x| x.clamp(-1.0, 1.0)) };
    let deviation = m.max_abs_diff(&to_density_matrix(&c));
    if deviation > BELL_DIAGONAL_TOL || deviation.is_nan() {
        return Err(Error::NotBellDiagonal { deviation });
    }
    Ok(c)
}

/// The Bell vectors in the order `Ψ+, Ψ−, Φ+, Φ−`.
pub fn bell_vectors() -> [[Complex64; 4]; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [[h, z, z, h], [h, z, z, -h], [z, h, h, z], [z, h, -h, z]]
}
