//! Experiments, invariant suites and plotting on top of `qcorr-core`.

pub mod boundary;
pub mod config;
pub mod error;
pub mod experiments;
pub mod parallel;
pub mod svg;
pub mod table;
pub mod verify;

pub use config::{Experiment, ExperimentConfig, FamilyKind, Suite};
pub use error::{HarnessError, Result};
pub use experiments::SampleRecord;
pub use svg::{emit_svg_scatter, AxesSpec};
pub use table::{Cell, Table};
pub use verify::{verify, verify_with, MeasureSet, VerifyReport};

#[derive(Debug)]
pub enum Outcome {
    Table(Table),
    Report(VerifyReport),
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    Ok(match cfg.experiment {
        Experiment::Scatter2Q => Outcome::Table(experiments::scatter_2q(cfg)?),
        Experiment::Scatter2x3 => Outcome::Table(experiments::scatter_2x3(cfg)?),
        Experiment::PureQudit => Outcome::Table(experiments::pure_qudit_scan(cfg)?),
        Experiment::FamilySweep => Outcome::Table(experiments::family_sweep(cfg)?),
        Experiment::Boundary2Q => Outcome::Table(boundary::boundary_2q(cfg)?),
        Experiment::OracleCheck => Outcome::Table(experiments::oracle_check(cfg)?),
        Experiment::Verify => Outcome::Report(verify::verify(cfg)?),
    })
}

/// Plot layout used for `--svg`; `None` for experiments without a figure.
pub fn default_axes(experiment: Experiment) -> Option<AxesSpec> {
    Some(match experiment {
        Experiment::Scatter2Q => AxesSpec::new("negativity_sq", &["d_g", "q"]).titled("two qubits"),
        Experiment::Scatter2x3 => AxesSpec::new("negativity_sq", &["d_g"]).titled("qubit-qutrit"),
        Experiment::PureQudit => AxesSpec::new("negativity_sq", &["d_g"])
            .grouped("kind", &["curve", "saturating"])
            .titled("pure states"),
        Experiment::FamilySweep => AxesSpec::new("param", &["n_paper", "dg_closed", "dg_definitional", "dg_numeric"])
            .with_lines(&["n_paper", "dg_closed", "dg_definitional"])
            .titled("family sweep"),
        Experiment::Boundary2Q => AxesSpec::new("negativity_sq", &["d_g"])
            .grouped("kind", &["envelope", "lower"])
            .titled("rank-two X family"),
        Experiment::OracleCheck => AxesSpec::new("dg_closed", &["dg_numeric"]).titled("optimizer vs closed form"),
        Experiment::Verify => return None,
    })
}
