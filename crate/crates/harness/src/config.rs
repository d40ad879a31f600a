use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use qcorr_core::{OptimizerConfig, Subsystem};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Scatter2Q,
    Scatter2x3,
    PureQudit,
    FamilySweep,
    Boundary2Q,
    Verify,
    OracleCheck,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Scatter2Q => "scatter-2q",
            Experiment::Scatter2x3 => "scatter-2x3",
            Experiment::PureQudit => "pure-qudit",
            Experiment::FamilySweep => "family-sweep",
            Experiment::Boundary2Q => "boundary-2q",
            Experiment::Verify => "verify",
            Experiment::OracleCheck => "oracle-check",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Werner,
    Isotropic,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Werner => "werner",
            FamilyKind::Isotropic => "isotropic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "hierarchy2q")]
    Hierarchy2q,
    #[value(name = "chain2q")]
    Chain2q,
    PureQudit,
    Families,
    #[value(name = "2x3")]
    TwoByThree,
    Oracle,
}

impl Suite {
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Hierarchy2q | Suite::Chain2q => 100_000,
            Suite::PureQudit => 3_000,
            Suite::Families => 100,
            Suite::TwoByThree => 2_000,
            Suite::Oracle => 1_000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub samples: usize,
    pub seed: u64,
    pub d: usize,
    /// Parameter steps for sweeps and curves.
    pub grid: usize,
    /// Rank of random mixed states; `None` cycles through all ranks or uses
    /// full rank, depending on the experiment.
    pub rank: Option<usize>,
    pub family: FamilyKind,
    pub measured_side: Subsystem,
    pub suite: Suite,
    pub optimizer: OptimizerConfig,
    /// Fraction of optimizer runs allowed to end unconverged before `verify` fails.
    pub allowed_nonconvergence: f64,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        let (samples, d, grid) = match experiment {
            Experiment::Scatter2Q => (100_000, 2, 0),
            Experiment::Scatter2x3 => (2_000, 3, 0),
            Experiment::PureQudit => (3_000, 3, 200),
            Experiment::FamilySweep => (1, 2, 100),
            Experiment::Boundary2Q => (1, 2, 400),
            Experiment::Verify => (Suite::Hierarchy2q.default_samples(), 2, 100),
            Experiment::OracleCheck => (1_000, 2, 0),
        };
        Self {
            experiment,
            samples,
            seed: 1,
            d,
            grid,
            rank: None,
            family: FamilyKind::Werner,
            measured_side: match experiment {
                Experiment::Scatter2x3 => Subsystem::A,
                _ => Subsystem::B,
            },
            suite: Suite::Hierarchy2q,
            optimizer: OptimizerConfig::default(),
            allowed_nonconvergence: 1e-3,
            output_path: None,
        }
    }

    pub fn verify(suite: Suite) -> Self {
        let mut cfg = Self::new(Experiment::Verify);
        cfg.suite = suite;
        cfg.samples = suite.default_samples();
        if suite == Suite::TwoByThree {
            cfg.measured_side = Subsystem::A;
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        match self.experiment {
            Experiment::PureQudit if !(2..=7).contains(&self.d) => {
                return bad(format!("pure-qudit needs 2 <= d <= 7, got {}", self.d));
            }
            Experiment::FamilySweep if self.d < 2 => return bad(format!("d must be at least 2, got {}", self.d)),
            Experiment::FamilySweep | Experiment::PureQudit if self.grid < 1 => {
                return bad("grid must be at least 1".into());
            }
            Experiment::Boundary2Q if self.grid < 10 => {
                return bad(format!("boundary-2q needs grid >= 10, got {}", self.grid));
            }
            _ => {}
        }
        if !(0.0..=1.0).contains(&self.allowed_nonconvergence) {
            return bad(format!(
                "allowed non-convergence fraction {} outside [0, 1]",
                self.allowed_nonconvergence
            ));
        }
        self.optimizer.validate()?;
        Ok(())
    }
}
