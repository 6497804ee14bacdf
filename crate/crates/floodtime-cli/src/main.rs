//! Command-line front end for the flooding-time library.
//!
//! Single-point computations (`exact`, `bounds`, `sparse`, `oracle`), grid
//! sweeps (`sweep`, `scaling`), the crossover search (`crossover`), and the
//! Monte Carlo simulators (`simulate`). Every number printed is exactly the
//! value returned by the library — serialization is full round-trip
//! precision — and all commands emit CSV by default or JSON via
//! `--format json`.
//!
//! Exit status: 0 on success, 2 for usage errors (bad flags or parameter
//! ranges), 1 for computation or I/O failures.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floodtime::{
    crossover_n, exact_flooding_time, lower_bound_flooding_time, monte_carlo, oracle_report,
    sparse_envelope, sparse_flooding_time, upper_bound_flooding_time, ModelParams, OnDurationLaw,
    OracleError, ParamError, SimError, SimulatorKind,
};
use rayon::prelude::*;

use output::{
    emit_crossover, emit_rows, emit_single, BoundsRow, ExactRow, OracleRow, OutputFormat,
    ScalingRow, SimulateRow, SparseRow, SweepRow,
};

#[derive(Parser)]
#[command(
    name = "floodtime",
    version,
    about = "Expected flooding time of intermittently connected mobile networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact expected flooding time at one parameter point.
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lower and upper bounds bracketing the exact value.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Point-like closed form with its logarithmic envelope.
    Sparse {
        /// Number of nodes N.
        #[arg(long)]
        nodes: usize,
        /// Link activation rate (OFF -> ON).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Grid sweep over N and p emitting every analytic quantity per cell.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Link activation rate (OFF -> ON).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Comma-separated stationary ON probabilities.
        #[arg(long = "p-list", value_delimiter = ',', required = true)]
        p_list: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate next to the analytic reference value.
    Simulate {
        /// Which simulator to run.
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        model: ModelArgs,
        /// ON-duration law used by the physical simulator.
        #[arg(long = "on-dist", value_enum, default_value = "exp")]
        on_dist: OnDistArg,
        /// Number of independent replications.
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Base RNG seed; replication r draws from stream (seed, r).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smallest N at which the upper bound beats the point-like value.
    Crossover {
        /// Link activation rate (OFF -> ON).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Stationary ON probability of a link.
        #[arg(long)]
        p: f64,
        /// Largest population size to scan.
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Growth of N*F/ln N along the schedule p(N) = min(p_cap, ln N/(b*N)).
    Scaling {
        #[command(flatten)]
        grid: GridArgs,
        /// Link activation rate (OFF -> ON).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Schedule divisor b in p(N) = min(p_cap, ln N/(b*N)).
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Cap on the scheduled probabilities.
        #[arg(long = "p-cap", default_value_t = 0.9)]
        p_cap: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Independent small-network chain solve next to the analytic values.
    Oracle {
        /// Number of nodes N (2 <= N <= 4).
        #[arg(long)]
        nodes: usize,
        /// Link activation rate (OFF -> ON).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Mean contact duration 1/mu (positive).
        #[arg(long = "mu-inv")]
        mu_inv: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Flags shared by the single-point commands: the population size, the
/// activation rate, and exactly one of `--p` / `--mu-inv`.
#[derive(Args)]
struct ModelArgs {
    /// Number of nodes N.
    #[arg(long)]
    nodes: usize,
    /// Link activation rate (OFF -> ON).
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Stationary ON probability of a link (conflicts with --mu-inv).
    #[arg(long, conflicts_with = "mu_inv")]
    p: Option<f64>,
    /// Mean contact duration 1/mu (conflicts with --p).
    #[arg(long = "mu-inv")]
    mu_inv: Option<f64>,
}

impl ModelArgs {
    fn model(&self) -> Result<ModelParams, CliError> {
        match (self.p, self.mu_inv) {
            (Some(p), None) => {
                ModelParams::from_edge_probability(self.nodes, self.lambda, p).map_err(param_usage)
            }
            (None, Some(mu_inv)) => ModelParams::from_mean_contact(self.nodes, self.lambda, mu_inv)
                .map_err(param_usage),
            (None, None) => Err(CliError::Usage(
                "exactly one of --p or --mu-inv is required".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects the conflicting pair"),
        }
    }
}

/// Population grid for `sweep` and `scaling`: n-from..=n-to with a stride.
#[derive(Args)]
struct GridArgs {
    /// Smallest population size (at least 2).
    #[arg(long = "n-from")]
    n_from: usize,
    /// Largest population size (inclusive).
    #[arg(long = "n-to")]
    n_to: usize,
    /// Stride through population sizes.
    #[arg(long = "n-step", default_value_t = 1)]
    n_step: usize,
}

impl GridArgs {
    fn values(&self) -> Result<Vec<usize>, CliError> {
        if self.n_from < 2 {
            return Err(CliError::Usage(format!(
                "--n-from: population sizes start at 2, got {}",
                self.n_from
            )));
        }
        if self.n_to < self.n_from {
            return Err(CliError::Usage(format!(
                "--n-to: must be at least --n-from ({}), got {}",
                self.n_from, self.n_to
            )));
        }
        if self.n_step == 0 {
            return Err(CliError::Usage("--n-step: stride must be positive".into()));
        }
        Ok((self.n_from..=self.n_to).step_by(self.n_step).collect())
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Serialization format.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Generative,
    Physical,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OnDistArg {
    Exp,
    Det,
}

/// A validated sweep request. All sizes are at least 2 and all
/// probabilities lie in [0, 1]; every analytic quantity is emitted for
/// every cell, so the column set is fixed.
struct SweepSpec {
    n_values: Vec<usize>,
    p_values: Vec<f64>,
    lambda: f64,
    output: Option<PathBuf>,
    format: OutputFormat,
}

enum CliError {
    /// Bad flag values; the message names the offending flag. Exit 2.
    Usage(String),
    /// Computation or I/O failure after valid flags. Exit 1.
    Failure(anyhow::Error),
}

/// Attach the flag name a parameter error refers to, so usage errors point
/// at what to fix. `nodes_flag`/`prob_flag` vary by command (`--n-max` for
/// the crossover scan, `--p-list` for sweeps, ...).
fn flag_usage(err: ParamError, nodes_flag: &str, prob_flag: &str) -> CliError {
    let flag = match err {
        ParamError::NodeCount { .. } => nodes_flag,
        ParamError::Lambda(_) => "--lambda",
        ParamError::Probability(_) => prob_flag,
        ParamError::ContactMean(_) => "--mu-inv",
        _ => return CliError::Usage(err.to_string()),
    };
    CliError::Usage(format!("{flag}: {err}"))
}

fn param_usage(err: ParamError) -> CliError {
    flag_usage(err, "--nodes", "--p")
}

fn sim_error(err: SimError) -> CliError {
    match err {
        SimError::TooFewReplications(_) => CliError::Usage(format!("--reps: {err}")),
        SimError::InconsistentLaw { .. } => CliError::Usage(err.to_string()),
        SimError::Guard { .. } => CliError::Failure(anyhow::Error::new(err)),
    }
}

fn oracle_error(err: OracleError) -> CliError {
    match err {
        OracleError::UnsupportedSize(_) => CliError::Usage(format!("--nodes: {err}")),
        OracleError::BadRates { .. } => CliError::Usage(err.to_string()),
        OracleError::Singular => CliError::Failure(anyhow::Error::new(err)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact { model, out } => {
            let params = model.model()?;
            let (f, _, _) = exact_flooding_time(&params);
            let row = ExactRow {
                n: params.n_nodes(),
                lambda: params.lambda(),
                p: params.p(),
                f,
            };
            emit_single(&row, out.format, out.output.as_deref()).map_err(CliError::Failure)
        }
        Command::Bounds { model, out } => {
            let params = model.model()?;
            let f_lower = lower_bound_flooding_time(&params);
            let (f_upper, _) = upper_bound_flooding_time(&params);
            let row = BoundsRow {
                n: params.n_nodes(),
                lambda: params.lambda(),
                p: params.p(),
                f_lower,
                f_upper,
            };
            emit_single(&row, out.format, out.output.as_deref()).map_err(CliError::Failure)
        }
        Command::Sparse { nodes, lambda, out } => {
            let params = ModelParams::point_like(nodes, lambda).map_err(param_usage)?;
            let f0 = sparse_flooding_time(&params);
            let (f0_low, f0_high) =
                sparse_envelope(&params).map_err(|err| CliError::Usage(format!("--nodes: {err}")))?;
            let row = SparseRow {
                n: nodes,
                lambda,
                f0,
                f0_low,
                f0_high,
            };
            emit_single(&row, out.format, out.output.as_deref()).map_err(CliError::Failure)
        }
        Command::Sweep {
            grid,
            lambda,
            p_list,
            out,
        } => {
            let spec = SweepSpec {
                n_values: grid.values()?,
                p_values: sorted_probabilities(p_list),
                lambda,
                output: out.output,
                format: out.format,
            };
            run_sweep(spec)
        }
        Command::Simulate {
            kind,
            model,
            on_dist,
            reps,
            seed,
            out,
        } => run_simulate(kind, &model, on_dist, reps, seed, &out),
        Command::Crossover {
            lambda,
            p,
            n_max,
            out,
        } => {
            let n_hat =
                crossover_n(lambda, p, n_max).map_err(|err| flag_usage(err, "--n-max", "--p"))?;
            emit_crossover(n_hat, out.format, out.output.as_deref()).map_err(CliError::Failure)
        }
        Command::Scaling {
            grid,
            lambda,
            b,
            p_cap,
            out,
        } => run_scaling(&grid, lambda, b, p_cap, &out),
        Command::Oracle {
            nodes,
            lambda,
            mu_inv,
            out,
        } => {
            if !(mu_inv.is_finite() && mu_inv > 0.0) {
                return Err(CliError::Usage(format!(
                    "--mu-inv: mean contact duration must be a positive finite real, got {mu_inv}"
                )));
            }
            let report = oracle_report(nodes, lambda, 1.0 / mu_inv).map_err(oracle_error)?;
            let row = OracleRow {
                n: report.n_nodes,
                lambda: report.lambda,
                mu: report.mu,
                p: report.p,
                f_ctmc: report.ctmc,
                f: report.exact,
                f_lower: report.lower,
                f_upper: report.upper,
                f0: report.sparse,
                rel_dev_ctmc_f: report.rel_dev_exact,
                rel_dev_ctmc_flower: report.rel_dev_lower,
                rel_dev_ctmc_fupper: report.rel_dev_upper,
                rel_dev_ctmc_f0: report.rel_dev_sparse,
                ctmc_within_bounds: report.ctmc_within_bounds,
            };
            emit_single(&row, out.format, out.output.as_deref()).map_err(CliError::Failure)
        }
    }
}

/// Ascending probability order makes row order (and therefore output bytes)
/// independent of how the flag was spelled; duplicates are kept as given.
fn sorted_probabilities(mut p_values: Vec<f64>) -> Vec<f64> {
    p_values.sort_by(|a, b| a.total_cmp(b));
    p_values
}

fn run_sweep(spec: SweepSpec) -> Result<(), CliError> {
    let mut cells = Vec::with_capacity(spec.n_values.len() * spec.p_values.len());
    for &n in &spec.n_values {
        for &p in &spec.p_values {
            cells.push(
                ModelParams::from_edge_probability(n, spec.lambda, p)
                    .map_err(|err| flag_usage(err, "--n-from", "--p-list"))?,
            );
        }
    }
    let rows: Vec<SweepRow> = cells.par_iter().map(sweep_row).collect();
    emit_rows(&rows, spec.format, spec.output.as_deref()).map_err(CliError::Failure)
}

fn sweep_row(params: &ModelParams) -> SweepRow {
    let f0 = sparse_flooding_time(params);
    let (f, _, _) = exact_flooding_time(params);
    let f_lower = lower_bound_flooding_time(params);
    let (f_upper, _) = upper_bound_flooding_time(params);
    SweepRow {
        n: params.n_nodes(),
        lambda: params.lambda(),
        p: params.p(),
        f0,
        f,
        f_lower,
        f_upper,
        ratio_f0_f: f0 / f,
        ratio_fupper_f: f_upper / f,
        ratio_flower_f: f_lower / f,
    }
}

fn run_simulate(
    kind: KindArg,
    model: &ModelArgs,
    on_dist: OnDistArg,
    reps: usize,
    seed: u64,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let params = model.model()?;
    let p = params.p();
    if p >= 1.0 {
        return Err(CliError::Usage(
            "--p: p = 1 means every link is permanently ON, so flooding is \
             instantaneous and there is nothing to simulate"
                .into(),
        ));
    }
    let law = if p == 0.0 {
        OnDurationLaw::PointLike
    } else {
        let mean = params.mean_contact_duration();
        match on_dist {
            OnDistArg::Exp => OnDurationLaw::exponential(mean),
            OnDistArg::Det => OnDurationLaw::deterministic(mean),
        }
        .map_err(param_usage)?
    };
    let kind = match kind {
        KindArg::Generative => SimulatorKind::Generative,
        KindArg::Physical => SimulatorKind::Physical,
    };
    let estimate = monte_carlo(kind, &params, law, reps, seed).map_err(sim_error)?;
    let (f, _, _) = exact_flooding_time(&params);
    let row = SimulateRow {
        n: params.n_nodes(),
        lambda: params.lambda(),
        p,
        kind: kind.to_string(),
        law: law.to_string(),
        replications: estimate.replications,
        seed: estimate.seed,
        mean: estimate.mean,
        stderr: estimate.stderr,
        ci_low: estimate.ci_low,
        ci_high: estimate.ci_high,
        f,
        z: (estimate.mean - f) / estimate.stderr,
    };
    emit_single(&row, out.format, out.output.as_deref()).map_err(CliError::Failure)
}

fn run_scaling(
    grid: &GridArgs,
    lambda: f64,
    b: f64,
    p_cap: f64,
    out: &OutputArgs,
) -> Result<(), CliError> {
    if !(b.is_finite() && b > 0.0) {
        return Err(CliError::Usage(format!(
            "--b: schedule divisor must be a positive finite real, got {b}"
        )));
    }
    if !(p_cap > 0.0 && p_cap < 1.0) {
        return Err(CliError::Usage(format!(
            "--p-cap: cap must lie strictly between 0 and 1, got {p_cap}"
        )));
    }
    let mut cells = Vec::new();
    for n in grid.values()? {
        let p = p_cap.min((n as f64).ln() / (b * n as f64));
        cells.push(
            ModelParams::from_edge_probability(n, lambda, p)
                .map_err(|err| flag_usage(err, "--n-from", "--p-cap"))?,
        );
    }
    let rows: Vec<ScalingRow> = cells
        .par_iter()
        .map(|params| {
            let (f, _, _) = exact_flooding_time(params);
            let n = params.n_nodes() as f64;
            ScalingRow {
                n: params.n_nodes(),
                p: params.p(),
                f,
                normalized: n * f / n.ln(),
            }
        })
        .collect();
    emit_rows(&rows, out.format, out.output.as_deref()).map_err(CliError::Failure)
}
