use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qcorr_core::Subsystem;
use qcorr_harness::{
    default_axes, emit_svg_scatter, run, AxesSpec, Experiment, ExperimentConfig, FamilyKind, Outcome, Suite,
};

#[derive(Parser)]
#[command(name = "qcorr", version, about = "Negativity and geometric discord experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random two-qubit states: negativity², discord and Q
    #[command(name = "scatter-2q")]
    Scatter2q(RunArgs),
    /// Random qubit-qutrit states with optimizer discord
    #[command(name = "scatter-2x3")]
    Scatter2x3(RunArgs),
    /// Pure d⊗d states with the minimal-discord curve
    PureQudit(RunArgs),
    /// Werner or isotropic family sweep
    FamilySweep(RunArgs),
    /// Upper envelope of discord at fixed negativity for two qubits
    #[command(name = "boundary-2q")]
    Boundary2q(RunArgs),
    /// Run an invariant suite; exit status 1 on any violation
    Verify(RunArgs),
    /// Closed form, variational and optimizer discord side by side
    OracleCheck(RunArgs),
    /// Plot columns of a CSV produced by this tool
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Optimizer convergence tolerance (simplex diameter)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(Subsystem))]
    measured_side: Option<Subsystem>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Fraction of unconverged optimizer runs tolerated by `verify`
    #[arg(long)]
    allowed_nonconvergence: Option<f64>,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the CSV as an SVG plot (requires --out)
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<String>,
    #[arg(long)]
    group: Option<String>,
    /// Series drawn as lines, by column or group value
    #[arg(long, value_delimiter = ',')]
    lines: Vec<String>,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long)]
    out: PathBuf,
}

fn config(experiment: Experiment, args: &RunArgs) -> ExperimentConfig {
    let mut cfg = match experiment {
        Experiment::Verify => ExperimentConfig::verify(args.suite.unwrap_or(Suite::Hierarchy2q)),
        other => ExperimentConfig::new(other),
    };
    cfg.seed = args.seed;
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.d {
        cfg.d = v;
    }
    if let Some(v) = args.grid {
        cfg.grid = v;
    }
    if let Some(v) = args.restarts {
        cfg.optimizer.restarts = v;
    }
    if let Some(v) = args.tol {
        cfg.optimizer.convergence_tol = v;
    }
    if let Some(v) = args.max_iterations {
        cfg.optimizer.max_iterations = v;
    }
    if let Some(v) = args.measured_side {
        cfg.measured_side = v;
    }
    if let Some(v) = args.family {
        cfg.family = v;
    }
    if let Some(v) = args.allowed_nonconvergence {
        cfg.allowed_nonconvergence = v;
    }
    cfg.rank = args.rank;
    cfg.output_path = args.out.clone();
    cfg
}

fn execute(experiment: Experiment, args: &RunArgs) -> anyhow::Result<ExitCode> {
    if args.svg.is_some() && args.out.is_none() {
        bail!("--svg needs --out");
    }
    let cfg = config(experiment, args);
    match run(&cfg)? {
        Outcome::Table(table) => {
            table.write(cfg.output_path.as_deref())?;
            if let (Some(svg), Some(csv)) = (&args.svg, &cfg.output_path) {
                let axes = default_axes(experiment).context("no plot layout for this experiment")?;
                emit_svg_scatter(csv, &axes, svg)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Report(report) => {
            let text = report.render();
            print!("{text}");
            if let Some(path) = &cfg.output_path {
                std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn plot(args: &PlotArgs) -> anyhow::Result<ExitCode> {
    let axes = AxesSpec {
        x: args.x.clone(),
        y: args.y.clone(),
        group: args.group.clone(),
        lines: args.lines.clone(),
        title: args.title.clone(),
    };
    emit_svg_scatter(&args.csv, &axes, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scatter2q(a) => execute(Experiment::Scatter2Q, a),
        Command::Scatter2x3(a) => execute(Experiment::Scatter2x3, a),
        Command::PureQudit(a) => execute(Experiment::PureQudit, a),
        Command::FamilySweep(a) => execute(Experiment::FamilySweep, a),
        Command::Boundary2q(a) => execute(Experiment::Boundary2Q, a),
        Command::Verify(a) => execute(Experiment::Verify, a),
        Command::OracleCheck(a) => execute(Experiment::OracleCheck, a),
        Command::Plot(a) => plot(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
