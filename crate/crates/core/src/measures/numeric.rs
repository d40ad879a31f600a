//! Geometric discord of arbitrary bipartite states by direct minimization of
//! the measurement-induced disturbance over rank-one projective measurements.
//!
//! For a measurement basis {U|k⟩} on the measured side, the dephased state
//! Π(ρ) keeps exactly the entries of (I⊗U†)ρ(I⊗U) that are diagonal in the
//! measured index, so Tr ρ² - Tr Π(ρ)² is the squared modulus of the
//! remaining entries. The closest classical-quantum state never has to be
//! formed.

use num_complex::Complex64;

use super::{clip, MeasureValue, Method};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::rng::stream;
use crate::states::{random_unitary, BipartiteDensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Independent local searches; the first starts from the computational
    /// basis, the rest from Haar-random bases.
    pub restarts: usize,
    pub max_iterations: usize,
    /// Simplex diameter at which a local search is converged.
    pub convergence_tol: f64,
    /// Initial simplex edge in the rotation parameters.
    pub initial_step: f64,
    /// Seed for the random restart bases.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 24,
            max_iterations: 5_000,
            convergence_tol: 1e-9,
            initial_step: 0.5,
            seed: 0x5eed,
        }
    }
}

impl OptimizerConfig {
    /// Real parameters of a measurement basis in dimension `d`: one complex
    /// Givens rotation per pair of levels.
    pub fn parameter_count(d: usize) -> usize {
        d * (d - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: 0.0,
                range: ">= 1",
            });
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "convergence_tol",
                value: self.convergence_tol,
                range: "> 0",
            });
        }
        Ok(())
    }
}

/// `base · Π_{i<j} G_ij(z_ij)`, where `G_ij(z)` rotates levels i and j by
/// angle |z| with relative phase arg z, and `z_ij = params[2m] + i params[2m+1]`.
pub fn measurement_unitary(base: &ComplexMatrix, params: &[f64]) -> ComplexMatrix {
    let d = base.rows();
    assert_eq!(params.len(), OptimizerConfig::parameter_count(d));
    let mut u = base.clone();
    let mut m = 0;
    for i in 0..d {
        for j in i + 1..d {
            let z = Complex64::new(params[2 * m], params[2 * m + 1]);
            m += 1;
            let theta = z.norm();
            if theta == 0.0 {
                continue;
            }
            let cos = theta.cos();
            // e^{i phi} sin(theta)
            let w = z * (theta.sin() / theta);
            for r in 0..d {
                let ui = u[(r, i)];
                let uj = u[(r, j)];
                u[(r, i)] = ui * cos + uj * w;
                u[(r, j)] = uj * cos - ui * w.conj();
            }
        }
    }
    u
}

/// Tr ρ² - Tr Π(ρ)² for the projective measurement on B in the basis given
/// by the columns of `u`. `rho` is d_A d_B square with B the fast index.
pub fn measurement_disturbance(rho: &ComplexMatrix, d_a: usize, d_b: usize, u: &ComplexMatrix) -> f64 {
    let n = d_a * d_b;
    // X = ρ (I ⊗ U)
    let mut x = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for a2 in 0..d_a {
            for b2 in 0..d_b {
                let mut acc = Complex64::new(0.0, 0.0);
                for beta in 0..d_b {
                    acc += rho[(r, a2 * d_b + beta)] * u[(beta, b2)];
                }
                x[(r, a2 * d_b + b2)] = acc;
            }
        }
    }
    // entries of (I ⊗ U†) X off the measured-index diagonal
    let mut total = 0.0;
    for a in 0..d_a {
        for b in 0..d_b {
            for c in 0..n {
                if c % d_b == b {
                    continue;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for beta in 0..d_b {
                    acc += u[(beta, b)].conj() * x[(a * d_b + beta, c)];
                }
                total += acc.norm_sqr();
            }
        }
    }
    total
}

/// Normalized geometric discord with respect to measurements on `measured_side`:
/// (d_m/(d_m-1)) min_Π (Tr ρ² - Tr Π(ρ)²).
pub fn geometric_discord_numeric(
    rho: &BipartiteDensityMatrix,
    measured_side: Subsystem,
    cfg: &OptimizerConfig,
) -> Result<MeasureValue> {
    cfg.validate()?;
    let oriented;
    let rho = match measured_side {
        Subsystem::B => rho,
        Subsystem::A => {
            oriented = rho.swap();
            &oriented
        }
    };
    let (d_a, d_b) = (rho.d_a(), rho.d_b());
    if d_b < 2 {
        return Err(Error::DimensionMismatch(format!(
            "measured side has dimension {d_b}; need at least 2"
        )));
    }
    let scale = d_b as f64 / (d_b - 1) as f64;
    let matrix = rho.matrix();
    let opts = NelderMeadOptions {
        max_iterations: cfg.max_iterations,
        diameter_tol: cfg.convergence_tol,
        initial_step: cfg.initial_step,
    };
    let start = vec![0.0; OptimizerConfig::parameter_count(d_b)];

    let mut finals = Vec::with_capacity(cfg.restarts);
    let mut any_converged = false;
    for restart in 0..cfg.restarts {
        let base = if restart == 0 {
            ComplexMatrix::identity(d_b)
        } else {
            random_unitary(d_b, &mut stream(cfg.seed, restart as u64))
        };
        let objective = |p: &[f64]| measurement_disturbance(matrix, d_a, d_b, &measurement_unitary(&base, p));
        let found = nelder_mead(objective, &start, &opts);
        any_converged |= found.converged;
        finals.push(found.value);
    }
    finals.sort_by(f64::total_cmp);
    let best = finals[0];
    let residual = finals.get(1).map_or(0.0, |second| scale * (second - best));

    Ok(MeasureValue {
        value: clip(scale * best),
        method: Method::Optimizer,
        residual,
        restarts_used: cfg.restarts,
        converged: any_converged,
    })
}
