//! Command implementations behind the `bellspeed` binary.
//!
//! Every command writes to caller-supplied sinks so the same code drives
//! the binary and the integration tests. CSV numbers use [`format::sig9`].

pub mod format;
pub mod verify;

use std::io::{self, Write};
use std::path::PathBuf;

use bellspeed::channels::ChannelKind;
use bellspeed::correlations::correlation_triple;
use bellspeed::qslt::{
    closed_form_from_time, closed_form_initial, critical_time, numeric_qslt,
    phase_flip_closed_form, DEFAULT_STEPS,
};
use bellspeed::{BellCoefficients, Error as CoreError, FlipChannel};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::format::sig9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid Bell-diagonal state {0}")]
    InvalidState(BellCoefficients),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: suite '{0}' exceeded its tolerance")]
    VerifyFailed(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidState(_) | Self::InvalidInput(_) => 2,
            Self::Numerical(_) | Self::VerifyFailed(_) | Self::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidState(c) => Self::InvalidState(c),
            CoreError::Domain(msg) => Self::InvalidInput(msg),
            CoreError::NegativeTime(t) => Self::InvalidInput(format!("negative time {t}")),
            other => Self::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "bellspeed",
    version,
    about = "Quantum speed limits of Bell-diagonal states under flip noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and numeric speed limit plus correlations for one state.
    Compute(ComputeArgs),
    /// Closed-form speed limit over a grid of |c1|, |c2| at fixed |c3| (CSV).
    Sweep(SweepArgs),
    /// Speed limit and correlations along a trajectory (CSV).
    Dynamics(DynamicsArgs),
    /// Randomised closed-form vs oracle checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    PhaseFlip,
    BitFlip,
    BitPhaseFlip,
}

impl From<ChannelArg> for ChannelKind {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::PhaseFlip => ChannelKind::PhaseFlip,
            ChannelArg::BitFlip => ChannelKind::BitFlip,
            ChannelArg::BitPhaseFlip => ChannelKind::BitPhaseFlip,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChannelOpts {
    #[arg(long, value_enum, default_value = "phase-flip")]
    pub channel: ChannelArg,
    /// Decay rate γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Driving time τ_D.
    #[arg(long = "tau-d", default_value_t = 1.0)]
    pub tau_d: f64,
}

impl ChannelOpts {
    fn channel(&self) -> CliResult<FlipChannel> {
        if !(self.tau_d > 0.0 && self.tau_d.is_finite()) {
            return Err(CliError::InvalidInput(format!(
                "--tau-d must be positive, got {}",
                self.tau_d
            )));
        }
        Ok(FlipChannel::new(self.channel.into(), self.gamma)?)
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct StateOpts {
    /// Signed coefficients `c1,c2,c3`.
    #[arg(long = "c", value_parser = parse_triple, allow_hyphen_values = true)]
    pub coeffs: Option<[f64; 3]>,
    /// Werner state of magnitude c, stored as (c, -c, c).
    #[arg(long)]
    pub werner: Option<f64>,
}

impl StateOpts {
    pub fn state(&self) -> CliResult<BellCoefficients> {
        let c = match (self.coeffs, self.werner) {
            (Some(c), _) => BellCoefficients::from_array(c)?,
            (None, Some(w)) => BellCoefficients::werner(w)?,
            (None, None) => return Err(CliError::InvalidInput("no state given".into())),
        };
        if !c.is_valid() {
            return Err(CliError::InvalidState(c));
        }
        Ok(c)
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("bad number '{p}': {e}"))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub channel: ChannelOpts,
    #[command(flatten)]
    pub state: StateOpts,
    /// Start of the leg; 0 means the initial state.
    #[arg(long = "tau", default_value_t = 0.0)]
    pub tau: f64,
    /// Quadrature intervals for the numeric bound.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelOpts,
    /// Fixed |c3|.
    #[arg(long, default_value_t = 0.4)]
    pub c3: f64,
    /// Points per axis over [0, 1].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub channel: ChannelOpts,
    #[command(flatten)]
    pub state: StateOpts,
    /// Last start time of the trace.
    #[arg(long = "tau-max", default_value_t = 2.0)]
    pub tau_max: f64,
    /// Number of start times, evenly spaced over [0, tau-max].
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Leave the numeric column empty.
    #[arg(long = "no-numeric")]
    pub no_numeric: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Decay rate γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Driving time τ_D.
    #[arg(long = "tau-d", default_value_t = 1.0)]
    pub tau_d: f64,
    /// Random states per suite.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Tolerance for closed form vs numeric speed limits.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

/// Dispatches a parsed command line; CSV commands create their `--out` file.
pub fn run(cli: &Cli, report: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Compute(args) => cmd_compute(args, report),
        Command::Sweep(args) => {
            let mut file = create_output(&args.out)?;
            cmd_sweep(args, &mut file)?;
            file.flush()?;
            writeln!(report, "wrote {}", args.out.display())?;
            Ok(())
        }
        Command::Dynamics(args) => {
            let mut file = create_output(&args.out)?;
            cmd_dynamics(args, &mut file)?;
            file.flush()?;
            writeln!(report, "wrote {}", args.out.display())?;
            Ok(())
        }
        Command::Verify(args) => verify::cmd_verify(args, report),
    }
}

fn create_output(path: &std::path::Path) -> CliResult<io::BufWriter<std::fs::File>> {
    if path.as_os_str().is_empty() {
        return Err(CliError::InvalidInput("--out must not be empty".into()));
    }
    Ok(io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write) -> CliResult<()> {
    let ch = args.channel.channel()?;
    let c = args.state.state()?;
    let tau_d = args.channel.tau_d;
    if !args.tau.is_finite() || args.tau < 0.0 {
        return Err(CliError::InvalidInput(format!(
            "--tau must be finite and non-negative, got {}",
            args.tau
        )));
    }
    let closed = if args.tau == 0.0 {
        closed_form_initial(&c, &ch, tau_d)?
    } else {
        closed_form_from_time(&c, &ch, args.tau, tau_d)?
    };
    let numeric = numeric_qslt(&c, &ch, args.tau, tau_d, args.steps)?;
    let evolved = ch.evolve_for(&c, args.tau)?;
    let corr = correlation_triple(&evolved)?;
    let tau_c = critical_time(&c, &ch)?;

    writeln!(out, "channel        {} (gamma = {})", ch.kind(), sig9(ch.gamma()))?;
    writeln!(out, "state          {c}")?;
    writeln!(out, "tau_D          {}", sig9(tau_d))?;
    writeln!(out, "tau            {}", sig9(args.tau))?;
    writeln!(out, "case           {}", closed.case)?;
    writeln!(out, "closed form    {}", sig9(closed.value))?;
    writeln!(out, "numeric        {}  (steps = {})", sig9(numeric.value), args.steps)?;
    writeln!(out, "branch         {}", numeric.branch)?;
    writeln!(out, "distance B     {}", sig9(numeric.distance))?;
    writeln!(out, "mutual info    {}", sig9(corr.mutual_info))?;
    writeln!(out, "CC             {}", sig9(corr.classical))?;
    writeln!(out, "QD             {}", sig9(corr.discord))?;
    match tau_c {
        Some(t) => writeln!(out, "tau_c          {}", sig9(t))?,
        None => writeln!(out, "tau_c          none")?,
    }
    Ok(())
}

/// Whether some sign assignment of the magnitudes is a valid state.
fn realisable(mags: [f64; 3]) -> bool {
    (0..8u8).any(|signs| {
        let c: [f64; 3] =
            std::array::from_fn(|i| if signs >> i & 1 == 1 { -mags[i] } else { mags[i] });
        BellCoefficients::from_array(c).map(|c| c.is_valid()).unwrap_or(false)
    })
}

pub const SWEEP_HEADER: &str = "c1,c2,c3,valid,case,tau_qsl";

/// Rows are coefficient magnitudes, `c1` outer and `c2` inner. `valid`
/// reports whether some sign pattern of the magnitudes is a valid state;
/// the speed limit is evaluated either way.
pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let ch = args.channel.channel()?;
    if args.grid < 2 {
        return Err(CliError::InvalidInput(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    if !(0.0..=1.0).contains(&args.c3) {
        return Err(CliError::InvalidInput(format!("--c3 must lie in [0, 1], got {}", args.c3)));
    }
    let n = args.grid;
    let axis: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let rows: Vec<String> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let mags = [axis[idx / n], axis[idx % n], args.c3];
            let [a, b, d] = ch.kind().to_phase_flip_frame(mags);
            let (value, case) = phase_flip_closed_form(a, b, d, args.channel.tau_d);
            format!(
                "{},{},{},{},{},{}",
                sig9(mags[0]),
                sig9(mags[1]),
                sig9(mags[2]),
                realisable(mags),
                case,
                sig9(value)
            )
        })
        .collect();
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub const DYNAMICS_HEADER: &str = "tau,tau_qsl_closed,tau_qsl_numeric,cc,qd,mutual_info";

pub fn cmd_dynamics(args: &DynamicsArgs, out: &mut dyn Write) -> CliResult<()> {
    let ch = args.channel.channel()?;
    let c0 = args.state.state()?;
    let tau_d = args.channel.tau_d;
    if args.points < 2 {
        return Err(CliError::InvalidInput(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    if !(args.tau_max > 0.0 && args.tau_max.is_finite()) {
        return Err(CliError::InvalidInput(format!(
            "--tau-max must be positive, got {}",
            args.tau_max
        )));
    }
    let n = args.points;
    let rows = (0..n)
        .into_par_iter()
        .map(|k| -> CliResult<String> {
            let tau = args.tau_max * k as f64 / (n - 1) as f64;
            let closed = closed_form_from_time(&c0, &ch, tau, tau_d)?;
            let numeric = if args.no_numeric {
                String::new()
            } else {
                sig9(numeric_qslt(&c0, &ch, tau, tau_d, args.steps)?.value)
            };
            let corr = correlation_triple(&ch.evolve_for(&c0, tau)?)?;
            Ok(format!(
                "{},{},{},{},{},{}",
                sig9(tau),
                sig9(closed.value),
                numeric,
                sig9(corr.classical),
                sig9(corr.discord),
                sig9(corr.mutual_info)
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    writeln!(out, "{DYNAMICS_HEADER}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    if let Some(tc) = critical_time(&c0, &ch)? {
        writeln!(out, "# tau_c={}", sig9(tc))?;
    }
    Ok(())
}
