//! Computable measures of bipartite quantum correlations: negativity,
//! geometric discord and its observable lower bound, together with the
//! state families and random ensembles used to compare them.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod rng;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Subsystem};
pub use measures::{MeasureValue, Method, OptimizerConfig};
pub use states::{BipartiteDensityMatrix, BlochForm, SchmidtSpectrum};
