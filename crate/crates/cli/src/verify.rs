//! Randomised agreement checks between the closed forms and the
//! independent numerical routes.

use std::io::Write;

use bellspeed::channels::{apply_kraus, evolve_coeffs, ChannelKind};
use bellspeed::correlations::{discord_oracle, quantum_discord};
use bellspeed::qslt::{closed_form_from_time, closed_form_initial, numeric_qslt};
use bellspeed::states::to_density_matrix;
use bellspeed::{BellCoefficients, FlipChannel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format::sig9;
use crate::{CliError, CliResult, VerifyArgs};

pub const DISCORD_TOL: f64 = 1e-4;
pub const KRAUS_TOL: f64 = 1e-12;
const ORACLE_THETA_STEPS: usize = 64;
const ORACLE_PHI_STEPS: usize = 128;
/// Richardson pairs are expensive; cap the number of states they use.
const RICHARDSON_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

/// One random draw: a valid state, a start time in (0, 2] and a flip
/// probability in [0, 1].
#[derive(Debug, Clone, Copy)]
struct Sample {
    state: BellCoefficients,
    tau_start: f64,
    p: f64,
}

fn draw_samples(n: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Sample {
            state: BellCoefficients::sample_valid(&mut rng),
            tau_start: 2.0 - rng.gen_range(0.0..2.0),
            p: rng.gen_range(0.0..=1.0),
        })
        .collect()
}

fn max_of(errors: impl ParallelIterator<Item = CliResult<f64>>) -> CliResult<f64> {
    errors.try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn channels(gamma: f64) -> CliResult<Vec<FlipChannel>> {
    ChannelKind::ALL.iter().map(|&k| FlipChannel::new(k, gamma).map_err(CliError::from)).collect()
}

pub fn run_suites(args: &VerifyArgs) -> CliResult<Vec<SuiteReport>> {
    if args.samples == 0 {
        return Err(CliError::InvalidInput("--samples must be at least 1".into()));
    }
    if !(args.tau_d > 0.0 && args.tau_d.is_finite()) {
        return Err(CliError::InvalidInput(format!(
            "--tau-d must be positive, got {}",
            args.tau_d
        )));
    }
    let samples = draw_samples(args.samples, args.seed);
    let chans = channels(args.gamma)?;
    let tau_d = args.tau_d;
    let mut reports = Vec::new();

    let qslt = max_of(samples.par_iter().map(|s| {
        let mut worst = 0.0f64;
        for ch in &chans {
            for tau in [0.0, s.tau_start] {
                let closed = closed_form_from_time(&s.state, ch, tau, tau_d)?.value;
                let numeric = numeric_qslt(&s.state, ch, tau, tau_d, args.steps)?.value;
                worst = worst.max((closed - numeric).abs());
            }
        }
        Ok(worst)
    }))?;
    reports.push(SuiteReport {
        name: "qslt closed vs numeric",
        instances: samples.len() * chans.len() * 2,
        max_error: qslt,
        tolerance: args.tol * tau_d,
    });

    let richardson_set = &samples[..samples.len().min(RICHARDSON_SAMPLES)];
    let richardson = max_of(richardson_set.par_iter().map(|s| {
        let mut worst = 0.0f64;
        for ch in &chans {
            let coarse = numeric_qslt(&s.state, ch, 0.0, tau_d, args.steps)?.value;
            let fine = numeric_qslt(&s.state, ch, 0.0, tau_d, 2 * args.steps)?.value;
            worst = worst.max((coarse - fine).abs());
        }
        Ok(worst)
    }))?;
    reports.push(SuiteReport {
        name: "quadrature steps vs 2*steps",
        instances: richardson_set.len() * chans.len(),
        max_error: richardson,
        tolerance: args.tol * tau_d,
    });

    let discord = max_of(samples.par_iter().map(|s| {
        let oracle = discord_oracle(&s.state, ORACLE_THETA_STEPS, ORACLE_PHI_STEPS)?;
        Ok((oracle - quantum_discord(&s.state)?).abs())
    }))?;
    reports.push(SuiteReport {
        name: "discord closed vs oracle",
        instances: samples.len(),
        max_error: discord,
        tolerance: DISCORD_TOL,
    });

    let symmetry = max_of(samples.par_iter().map(|s| {
        let [c1, c2, c3] = s.state.as_array();
        let phase = &chans[0];
        let bit = closed_form_initial(&s.state, &chans[1], tau_d)?.value;
        let bit_ref = closed_form_initial(&BellCoefficients::new(c3, c2, c1)?, phase, tau_d)?.value;
        let bit_phase = closed_form_initial(&s.state, &chans[2], tau_d)?.value;
        let bit_phase_ref =
            closed_form_initial(&BellCoefficients::new(c1, c3, c2)?, phase, tau_d)?.value;
        Ok((bit - bit_ref).abs().max((bit_phase - bit_phase_ref).abs()))
    }))?;
    reports.push(SuiteReport {
        name: "channel swap symmetry",
        instances: samples.len() * 2,
        max_error: symmetry,
        tolerance: 0.0,
    });

    let kraus = max_of(samples.par_iter().map(|s| {
        let rho = to_density_matrix(&s.state);
        let worst = chans
            .iter()
            .map(|ch| {
                apply_kraus(&rho, ch, s.p)
                    .max_abs_diff(&to_density_matrix(&evolve_coeffs(&s.state, ch, s.p)))
            })
            .fold(0.0, f64::max);
        Ok(worst)
    }))?;
    reports.push(SuiteReport {
        name: "kraus vs coefficient evolution",
        instances: samples.len() * chans.len(),
        max_error: kraus,
        tolerance: KRAUS_TOL,
    });

    Ok(reports)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let reports = run_suites(args)?;
    writeln!(
        out,
        "{:<32} {:>9} {:>16} {:>12}  status",
        "suite", "instances", "max error", "tolerance"
    )?;
    for r in &reports {
        writeln!(
            out,
            "{:<32} {:>9} {:>16} {:>12}  {}",
            r.name,
            r.instances,
            sig9(r.max_error),
            sig9(r.tolerance),
            if r.passed() { "pass" } else { "FAIL" }
        )?;
    }
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(CliError::VerifyFailed(r.name.to_string())),
        None => Ok(()),
    }
}
