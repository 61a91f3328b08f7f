//! Quantum speed limit times for Bell-diagonal states under flip channels.
//!
//! The bound for a leg `ρ(τ) → ρ(τ + τ_D)` is
//!
//! ```text
//! τ_QSL = B · max{ 1 / avg(Σ σ_i ϱ_i), 1 / avg(sqrt(Σ σ_i²)) }
//! B     = |tr(ρ(τ)ρ(τ+τ_D)) − tr(ρ(τ)²)|
//! ```
//!
//! where `σ_i` are the singular values of `dρ/dt`, `ϱ_i` the eigenvalues of
//! the starting state (both sorted descending) and `avg` is the time
//! average over the leg. The first term is the Margolus-Levitin branch, the
//! second the Mandelstam-Tamm branch.
//!
//! Two routes are provided. The closed forms work on coefficient magnitudes
//! in the phase-flip frame `(a, b, d)`, where `a`, `b` decay and `d` is
//! preserved:
//!
//! ```text
//! case I   d ≥ a ≥ b     τ_D (a² + b²) / (a + b d)
//! case II  d ≥ b ≥ a     τ_D (a² + b²) / (b + a d)
//! case III a ≥ d, a ≥ b  τ_D (a² + b²) / (a (1 + b))
//! case IV  b ≥ d, b ≥ a  τ_D (a² + b²) / (b (1 + a))
//! ```
//!
//! The numeric route ([`numeric_qslt`]) evaluates the bound directly from
//! density matrices and serves as an independent oracle for the closed forms.

use std::fmt;

use crate::channels::{apply_kraus, coeff_derivative, FlipChannel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, singular_values, trace_product, ComplexMatrix4};
use crate::states::{correlation_operator, to_density_matrix, BellCoefficients};

/// Distances below this are treated as a stationary leg with `τ_QSL = 0`.
pub const DEGENERATE_DISTANCE: f64 = 1e-15;

/// Minimum number of quadrature intervals accepted by [`numeric_qslt`].
pub const MIN_STEPS: usize = 16;

pub const DEFAULT_STEPS: usize = 2048;

/// Which term of the max in the unified bound is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    MargolusLevitin,
    MandelstamTamm,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MargolusLevitin => "ML",
            Self::MandelstamTamm => "MT",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    /// Time-dependent start while a decaying coefficient still dominates.
    TimeDependentFrozen,
    /// Time-dependent start once the preserved coefficient dominates.
    TimeDependentDecaying,
    /// Both decaying coefficients vanish; the state never moves.
    Degenerate,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::TimeDependentFrozen => "TimeDependentFrozen",
            Self::TimeDependentDecaying => "TimeDependentDecaying",
            Self::Degenerate => "Degenerate",
        }
    }

    /// Cases where the preserved coefficient dominates.
    pub fn preserved_dominant(&self) -> bool {
        matches!(self, Self::I | Self::II | Self::TimeDependentDecaying)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A speed-limit value together with the pieces of the bound that produced
/// it. Averages are per unit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsltResult {
    pub value: f64,
    pub branch: Branch,
    pub case: CaseLabel,
    pub distance: f64,
    pub ml_average: f64,
    pub mt_average: f64,
}

/// Case classification on phase-frame magnitudes; ties resolve to the first
/// matching case in the order I, II, III, IV.
pub fn classify(a: f64, b: f64, d: f64) -> CaseLabel {
    if a == 0.0 && b == 0.0 {
        CaseLabel::Degenerate
    } else if d >= a && a >= b {
        CaseLabel::I
    } else if d >= b && b >= a {
        CaseLabel::II
    } else if a >= d && a >= b {
        CaseLabel::III
    } else {
        CaseLabel::IV
    }
}

/// Denominator of the Margolus-Levitin closed form, `2·avg(Σσϱ)/avg(ṗ(1−p))`.
///
/// The top two eigenvalues of a Bell-diagonal state sum to
/// `(1 + max|c_i|)/2`, so the four cases collapse to
/// `[(a+b)(1+m) + |a−b|(1−m)]/2` with `m = max(a, b, d)`.
fn ml_denominator(a: f64, b: f64, d: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if d >= hi {
        hi + lo * d
    } else {
        hi * (1.0 + lo)
    }
}

/// Closed-form speed limit for phase-flip-frame magnitudes `(a, b, d)`.
///
/// No validity check: used directly for parameter sweeps that cover the
/// whole magnitude square.
pub fn phase_flip_closed_form(a: f64, b: f64, d: f64, tau_d: f64) -> (f64, CaseLabel) {
    let case = classify(a, b, d);
    if case == CaseLabel::Degenerate {
        return (0.0, case);
    }
    if a == b && b == d {
        // Werner magnitudes: all four case formulas reduce to this.
        return (werner_formula(a, tau_d), case);
    }
    (tau_d * (a * a + b * b) / ml_denominator(a, b, d), case)
}

fn werner_formula(c: f64, tau_d: f64) -> f64 {
    2.0 * tau_d / (1.0 + 1.0 / c)
}

/// `2τ_D/(1 + 1/c)`, the speed limit of a Werner state of magnitude `c`
/// under any of the three channels.
pub fn werner_qslt(c_mag: f64, tau_d: f64) -> Result<f64> {
    if !(c_mag > 0.0 && c_mag <= 1.0) {
        return Err(Error::Domain(format!("Werner magnitude must lie in (0, 1], got {c_mag}")));
    }
    Ok(werner_formula(c_mag, tau_d))
}

/// `|tr(ρ0·ρτ) − tr(ρ0²)|`.
pub fn bures_like_distance(rho0: &ComplexMatrix4, rho_t: &ComplexMatrix4) -> f64 {
    (trace_product(rho0, rho_t).re - trace_product(rho0, rho0).re).abs()
}

fn check_tau_d(tau_d: f64) -> Result<()> {
    if tau_d > 0.0 && tau_d.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("driving time must be positive, got {tau_d}")))
    }
}

/// Closed form for the state `c` (already at the start of the leg), with
/// the bound's ingredients filled in analytically.
fn closed_form_at(c: &BellCoefficients, ch: &FlipChannel, tau_d: f64) -> QsltResult {
    let [a, b, d] = ch.kind().to_phase_flip_frame(c.magnitudes());
    let (value, case) = phase_flip_closed_form(a, b, d, tau_d);
    // 1 − exp(−2γτ_D): fraction of the decaying coefficients lost over the leg.
    let loss = -(-2.0 * ch.gamma() * tau_d).exp_m1();
    let rate_average = loss / (2.0 * tau_d);
    let (ml_average, mt_average) = if case == CaseLabel::Degenerate {
        (0.0, 0.0)
    } else {
        (0.5 * rate_average * ml_denominator(a, b, d), rate_average * (a * a + b * b).sqrt())
    };
    QsltResult {
        value,
        branch: if ml_average <= mt_average {
            Branch::MargolusLevitin
        } else {
            Branch::MandelstamTamm
        },
        case,
        distance: 0.25 * loss * (a * a + b * b),
        ml_average,
        mt_average,
    }
}

/// Speed limit for the leg `ρ(0) → ρ(τ_D)`.
pub fn closed_form_initial(
    c: &BellCoefficients,
    ch: &FlipChannel,
    tau_d: f64,
) -> Result<QsltResult> {
    c.ensure_valid()?;
    check_tau_d(tau_d)?;
    Ok(closed_form_at(c, ch, tau_d))
}

/// Speed limit for the leg `ρ(τ) → ρ(τ + τ_D)` of the trajectory starting at
/// `c0`.
///
/// The evolved state is again Bell-diagonal, so the case formulas apply to
/// the evolved magnitudes; in terms of the initial ones this is
/// `τ_D e^{−2γτ}(a² + b²) / (max(a,b)·[1 + e^{−2γτ} min(a,b)])` while a
/// decaying coefficient dominates and
/// `τ_D e^{−2γτ}(a² + b²) / (max(a,b) + min(a,b)·d)` afterwards.
pub fn closed_form_from_time(
    c0: &BellCoefficients,
    ch: &FlipChannel,
    tau: f64,
    tau_d: f64,
) -> Result<QsltResult> {
    c0.ensure_valid()?;
    check_tau_d(tau_d)?;
    let evolved = ch.evolve_for(c0, tau)?;
    let mut result = closed_form_at(&evolved, ch, tau_d);
    result.case = match result.case {
        CaseLabel::Degenerate => CaseLabel::Degenerate,
        c if c.preserved_dominant() => CaseLabel::TimeDependentDecaying,
        _ => CaseLabel::TimeDependentFrozen,
    };
    Ok(result)
}

/// Time at which the larger decaying magnitude falls to the preserved one,
/// `ln(max(a,b)/d)/(2γ)`.
///
/// `None` when the preserved coefficient is zero (never reached) or already
/// dominant at `τ = 0`.
pub fn critical_time(c0: &BellCoefficients, ch: &FlipChannel) -> Result<Option<f64>> {
    c0.ensure_valid()?;
    let [a, b, d] = ch.kind().to_phase_flip_frame(c0.magnitudes());
    let hi = a.max(b);
    if d > 0.0 && hi > d {
        Ok(Some((hi / d).ln() / (2.0 * ch.gamma())))
    } else {
        Ok(None)
    }
}

/// Composite trapezoid rule over equally spaced samples.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    match samples {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Evaluates the unified bound from first principles for the leg
/// `[tau_start, tau_start + tau_d]`.
///
/// States come from the Kraus maps, `dρ/dt` from the analytic coefficient
/// derivatives, singular values and eigenvalues from the Jacobi solver, and
/// the time averages from a `steps`-interval trapezoid rule.
pub fn numeric_qslt(
    c0: &BellCoefficients,
    ch: &FlipChannel,
    tau_start: f64,
    tau_d: f64,
    steps: usize,
) -> Result<QsltResult> {
    c0.ensure_valid()?;
    check_tau_d(tau_d)?;
    if steps < MIN_STEPS {
        return Err(Error::Domain(format!(
            "at least {MIN_STEPS} quadrature steps required, got {steps}"
        )));
    }
    let rho0 = to_density_matrix(c0);
    let rho_start = apply_kraus(&rho0, ch, ch.p_at(tau_start)?);
    let rho_end = apply_kraus(&rho0, ch, ch.p_at(tau_start + tau_d)?);

    let varrho = hermitian_eigenvalues(&rho_start)?;
    let h = tau_d / steps as f64;
    let mut ml_samples = Vec::with_capacity(steps + 1);
    let mut mt_samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = tau_start + k as f64 * h;
        let rho_dot = correlation_operator(coeff_derivative(c0, ch, t)?);
        let sigma = singular_values(&rho_dot);
        ml_samples.push(sigma.iter().zip(&varrho).map(|(s, r)| s * r).sum::<f64>());
        mt_samples.push(sigma.iter().map(|s| s * s).sum::<f64>().sqrt());
    }
    let ml_average = trapezoid(&ml_samples, h) / tau_d;
    let mt_average = trapezoid(&mt_samples, h) / tau_d;

    let distance = bures_like_distance(&rho_start, &rho_end);
    let [a, b, d] =
        ch.kind().to_phase_flip_frame(crate::states::from_density_matrix(&rho_start)?.magnitudes());
    let mut case = classify(a, b, d);
    if tau_start > 0.0 && case != CaseLabel::Degenerate {
        case = if case.preserved_dominant() {
            CaseLabel::TimeDependentDecaying
        } else {
            CaseLabel::TimeDependentFrozen
        };
    }

    if distance < DEGENERATE_DISTANCE {
        return Ok(QsltResult {
            value: 0.0,
            branch: Branch::MargolusLevitin,
            case: CaseLabel::Degenerate,
            distance,
            ml_average,
            mt_average,
        });
    }
    if !(ml_average > 0.0 && mt_average > 0.0)
        || !(ml_average.is_normal() && mt_average.is_normal())
    {
        return Err(Error::QuadratureFailure(format!(
            "time averages underflowed (ML {ml_average:e}, MT {mt_average:e}) \
             with distance {distance:e}"
        )));
    }
    let (ml_inv, mt_inv) = (1.0 / ml_average, 1.0 / mt_average);
    let (branch, inv) = if ml_inv >= mt_inv {
        (Branch::MargolusLevitin, ml_inv)
    } else {
        (Branch::MandelstamTamm, mt_inv)
    };
    Ok(QsltResult { value: distance * inv, branch, case, distance, ml_average, mt_average })
}
