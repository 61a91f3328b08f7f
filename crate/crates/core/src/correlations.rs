//! Mutual information, classical correlation and quantum discord of
//! Bell-diagonal states, in bits.
//!
//! The classical correlation of a Bell-diagonal state depends only on
//! `χ = max|c_i|`:
//!
//! ```text
//! CC = ((1 − χ)/2)·log2(1 − χ) + ((1 + χ)/2)·log2(1 + χ)
//! ```
//!
//! and the discord is `I − CC`. [`discord_oracle`] recomputes the discord
//! by brute-force optimisation over projective measurements on qubit B.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, matmul, ComplexMatrix4, Matrix2, IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z,
};
use crate::states::{to_density_matrix, BellCoefficients};

pub const MIN_THETA_STEPS: usize = 64;
pub const MIN_PHI_STEPS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTriple {
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    /// Largest coefficient magnitude.
    pub chi: f64,
}

/// `x·log2(x)` with `0·log2(0) = 0`.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn mutual_information(c: &BellCoefficients) -> Result<f64> {
    c.ensure_valid()?;
    let s: f64 = c.spectrum().values().into_iter().map(xlog2x).sum();
    Ok(2.0 + s)
}

pub fn classical_correlation(c: &BellCoefficients) -> Result<f64> {
    c.ensure_valid()?;
    Ok(classical_from_chi(c.chi()))
}

fn classical_from_chi(chi: f64) -> f64 {
    let minus = 1.0 - chi;
    let plus = 1.0 + chi;
    let term = |w: f64| if w <= 0.0 { 0.0 } else { 0.5 * w * w.log2() };
    term(minus) + term(plus)
}

/// Clamped at zero; classically correlated states would otherwise show
/// rounding noise of either sign.
pub fn quantum_discord(c: &BellCoefficients) -> Result<f64> {
    Ok((mutual_information(c)? - classical_correlation(c)?).max(0.0))
}

pub fn correlation_triple(c: &BellCoefficients) -> Result<CorrelationTriple> {
    let mutual_info = mutual_information(c)?;
    let classical = classical_correlation(c)?;
    Ok(CorrelationTriple {
        mutual_info,
        classical,
        discord: (mutual_info - classical).max(0.0),
        chi: c.chi(),
    })
}

fn partial_trace_b(m: &ComplexMatrix4) -> Matrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)]))
}

fn partial_trace_a(m: &ComplexMatrix4) -> Matrix2 {
    std::array::from_fn(|k| std::array::from_fn(|l| m[(k, l)] + m[(2 + k, 2 + l)]))
}

/// Von Neumann entropy (bits) of a 2x2 Hermitian matrix with unit trace.
fn entropy2(m: &Matrix2) -> f64 {
    let mean = 0.5 * (m[0][0].re + m[1][1].re);
    let half_gap = 0.5 * (m[0][0].re - m[1][1].re);
    let radius = (half_gap * half_gap + m[0][1].norm_sqr()).sqrt();
    -(xlog2x(mean + radius) + xlog2x(mean - radius))
}

fn entropy4(m: &ComplexMatrix4) -> Result<f64> {
    Ok(-hermitian_eigenvalues(m)?.into_iter().map(xlog2x).sum::<f64>())
}

/// Projector `(I + sign·n̂·σ)/2` on qubit B, lifted to the two-qubit space.
fn measurement_projector(theta: f64, phi: f64, sign: f64) -> ComplexMatrix4 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let single: Matrix2 = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let dot = PAULI_X[i][j] * n[0] + PAULI_Y[i][j] * n[1] + PAULI_Z[i][j] * n[2];
            (IDENTITY2[i][j] + dot * sign) * 0.5
        })
    });
    ComplexMatrix4::kron(&IDENTITY2, &single)
}

/// `S(ρ_A) − Σ_± p_± S(ρ_A|±)` for the measurement along `(θ, φ)` on B.
fn measured_correlation(rho: &ComplexMatrix4, entropy_a: f64, theta: f64, phi: f64) -> f64 {
    let mut conditional = 0.0;
    for sign in [1.0, -1.0] {
        let proj = measurement_projector(theta, phi, sign);
        let post = matmul(&matmul(&proj, rho), &proj);
        let reduced = partial_trace_b(&post);
        let prob = reduced[0][0].re + reduced[1][1].re;
        if prob <= 1e-15 {
            continue;
        }
        let normalised = reduced.map(|row| row.map(|z: Complex64| z / prob));
        conditional += prob * entropy2(&normalised);
    }
    entropy_a - conditional
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Discord computed by maximising the measured classical correlation over
/// projective measurements on qubit B.
///
/// The Bloch direction runs over a `(theta_steps + 1) × phi_steps` grid on
/// `θ ∈ [0, π]`, `φ ∈ [0, π)`, followed by one golden-section refinement
/// along each axis around the best grid point. Mutual information comes
/// from matrix entropies rather than the Bell spectrum.
pub fn discord_oracle(c: &BellCoefficients, theta_steps: usize, phi_steps: usize) -> Result<f64> {
    c.ensure_valid()?;
    if theta_steps < MIN_THETA_STEPS || phi_steps < MIN_PHI_STEPS {
        return Err(Error::Domain(format!(
            "oracle grid needs at least {MIN_THETA_STEPS}x{MIN_PHI_STEPS} points, \
             got {theta_steps}x{phi_steps}"
        )));
    }
    let rho = to_density_matrix(c);
    let entropy_a = entropy2(&partial_trace_b(&rho));
    let entropy_b = entropy2(&partial_trace_a(&rho));
    let mutual_info = entropy_a + entropy_b - entropy4(&rho)?;

    let d_theta = PI / theta_steps as f64;
    let d_phi = PI / phi_steps as f64;
    let cc = |theta: f64, phi: f64| measured_correlation(&rho, entropy_a, theta, phi);

    // Row maxima in parallel, reduced in row order so ties keep the
    // smallest (θ, φ).
    let rows: Vec<(f64, usize, usize)> = (0..=theta_steps)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * d_theta;
            let mut best = (f64::NEG_INFINITY, i, 0);
            for j in 0..phi_steps {
                let v = cc(theta, j as f64 * d_phi);
                if v > best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .collect();
    let (mut best, bi, bj) =
        rows.into_iter()
            .fold((f64::NEG_INFINITY, 0, 0), |acc, r| if r.0 > acc.0 { r } else { acc });

    let mut theta = bi as f64 * d_theta;
    let phi = bj as f64 * d_phi;
    let (t, v) = golden_max(|x| cc(x, phi), (theta - d_theta).max(0.0), (theta + d_theta).min(PI));
    if v > best {
        best = v;
        theta = t;
    }
    let (_, v) = golden_max(|x| cc(theta, x), phi - d_phi, phi + d_phi);
    best = best.max(v);
    Ok(mutual_info - best)
}
