//! Local, symmetric, non-dissipative flip channels acting on both qubits.
//!
//! Each qubit independently suffers a Pauli flip with probability `p/2`,
//! where `p = 1 − exp(−γt)`. On a Bell-diagonal state this leaves one
//! coefficient untouched (the preserved axis) and scales the other two by
//! `(1 − p)² = exp(−2γt)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{matmul, ComplexMatrix4, Matrix2, IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z};
use crate::states::BellCoefficients;

/// Upper clamp for `p` derived from a time, keeping `1 − p` strictly positive.
pub const P_MAX: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PhaseFlip,
    BitFlip,
    BitPhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [Self::PhaseFlip, Self::BitFlip, Self::BitPhaseFlip];

    /// Index of the coefficient the channel leaves unchanged.
    pub fn preserved_axis(self) -> usize {
        match self {
            Self::PhaseFlip => 2,
            Self::BitFlip => 0,
            Self::BitPhaseFlip => 1,
        }
    }

    /// Coefficient indices `[x, y, z]` that play the phase-flip roles
    /// `(c1, c2, c3)`: `x`, `y` decay and `z` is preserved.
    ///
    /// Bit flip is phase flip with c1 and c3 exchanged; bit-phase flip is
    /// phase flip with c2 and c3 exchanged.
    pub fn phase_flip_roles(self) -> [usize; 3] {
        match self {
            Self::PhaseFlip => [0, 1, 2],
            Self::BitFlip => [2, 1, 0],
            Self::BitPhaseFlip => [0, 2, 1],
        }
    }

    /// Coefficients rearranged into phase-flip roles.
    pub fn to_phase_flip_frame(self, c: [f64; 3]) -> [f64; 3] {
        self.phase_flip_roles().map(|i| c[i])
    }

    /// The single-qubit Pauli applied by the flip.
    pub fn pauli(self) -> &'static Matrix2 {
        match self {
            Self::PhaseFlip => &PAULI_Z,
            Self::BitFlip => &PAULI_X,
            Self::BitPhaseFlip => &PAULI_Y,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PhaseFlip => "phase-flip",
            Self::BitFlip => "bit-flip",
            Self::BitPhaseFlip => "bit-phase-flip",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase-flip" => Ok(Self::PhaseFlip),
            "bit-flip" => Ok(Self::BitFlip),
            "bit-phase-flip" => Ok(Self::BitPhaseFlip),
            other => Err(Error::Domain(format!("unknown channel '{other}'"))),
        }
    }
}

/// A flip channel with decay rate `gamma`, applied identically to both qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipChannel {
    kind: ChannelKind,
    gamma: f64,
}

impl FlipChannel {
    pub fn new(kind: ChannelKind, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("decay rate must be positive, got {gamma}")));
        }
        Ok(Self { kind, gamma })
    }

    pub fn phase_flip(gamma: f64) -> Result<Self> {
        Self::new(ChannelKind::PhaseFlip, gamma)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p_at(&self, t: f64) -> Result<f64> {
        p_of_t(t, self.gamma)
    }

    /// Coefficients after evolving for time `t`.
    pub fn evolve_for(&self, c: &BellCoefficients, t: f64) -> Result<BellCoefficients> {
        Ok(evolve_coeffs(c, self, self.p_at(t)?))
    }
}

/// Parametric time `p = 1 − exp(−γt)`, clamped to `[0, P_MAX]`.
pub fn p_of_t(t: f64, gamma: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    Ok((-(-gamma * t).exp_m1()).clamp(0.0, P_MAX))
}

/// Scales the two non-preserved coefficients by `(1 − p)²`.
pub fn evolve_coeffs(c: &BellCoefficients, ch: &FlipChannel, p: f64) -> BellCoefficients {
    debug_assert!((0.0..=1.0).contains(&p), "p = {p} outside [0, 1]");
    let keep = (1.0 - p.clamp(0.0, 1.0)).powi(2);
    let preserved = ch.kind.preserved_axis();
    let mut out = c.as_array();
    for (i, x) in out.iter_mut().enumerate() {
        if i != preserved {
            *x *= keep;
        }
    }
    BellCoefficients::from_array_unchecked(out)
}

/// The four two-qubit Kraus products `K^A_i K^B_j`, ordered
/// `(0,0), (0,1), (1,0), (1,1)`.
pub fn kraus_operators(ch: &FlipChannel, p: f64) -> [ComplexMatrix4; 4] {
    let p = p.clamp(0.0, 1.0);
    let scaled = |m: &Matrix2, s: f64| -> Matrix2 { m.map(|row| row.map(|z| z * s)) };
    let single =
        [scaled(&IDENTITY2, (1.0 - p / 2.0).sqrt()), scaled(ch.kind.pauli(), (p / 2.0).sqrt())];
    [
        ComplexMatrix4::kron(&single[0], &single[0]),
        ComplexMatrix4::kron(&single[0], &single[1]),
        ComplexMatrix4::kron(&single[1], &single[0]),
        ComplexMatrix4::kron(&single[1], &single[1]),
    ]
}

/// Operator-sum evolution `Σ K ρ K†`.
pub fn apply_kraus(rho: &ComplexMatrix4, ch: &FlipChannel, p: f64) -> ComplexMatrix4 {
    kraus_operators(ch, p)
        .iter()
        .fold(ComplexMatrix4::zeros(), |acc, k| acc + matmul(&matmul(k, rho), &k.adjoint()))
}

/// `Σ K†K`, which equals the identity for a trace-preserving channel.
pub fn kraus_completeness(ch: &FlipChannel, p: f64) -> ComplexMatrix4 {
    kraus_operators(ch, p)
        .iter()
        .fold(ComplexMatrix4::zeros(), |acc, k| acc + matmul(&k.adjoint(), k))
}

/// `dc_i/dt` at time `t`: `−2γ exp(−2γt) c_i` on the decaying pair, zero on
/// the preserved axis.
pub fn coeff_derivative(c: &BellCoefficients, ch: &FlipChannel, t: f64) -> Result<[f64; 3]> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let rate = -2.0 * ch.gamma * (-2.0 * ch.gamma * t).exp();
    let preserved = ch.kind.preserved_axis();
    let mut out = c.as_array();
    for (i, x) in out.iter_mut().enumerate() {
        *x = if i == preserved { 0.0 } else { rate * *x };
    }
    Ok(out)
}

/// `ṗ(1 − p) = γ exp(−2γt)`, the common time factor of every singular value
/// of `dρ/dt`.
pub fn rate_factor(gamma: f64, t: f64) -> f64 {
    gamma * (-2.0 * gamma * t).exp()
}
