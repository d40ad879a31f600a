//! Correlation quantifiers.
//!
//! Negativity comes from the partial-transpose spectrum; geometric discord is
//! available in closed form for two qubits (two independent algebraic
//! routes), for pure states through the Schmidt spectrum, for the Werner and
//! isotropic families, and for arbitrary states through
//! [`geometric_discord_numeric`].

mod numeric;

pub use numeric::{geometric_discord_numeric, measurement_disturbance, measurement_unitary, OptimizerConfig};

use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem};
use crate::states::{bloch_decompose, BipartiteDensityMatrix, BlochForm, SchmidtSpectrum, SPECTRUM_TOL};

/// Values in `[-CLIP_TOL, 0)` are reported as exactly 0.
pub const CLIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Variational,
    Optimizer,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Variational => "variational",
            Method::Optimizer => "optimizer",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    /// Best-vs-second-best restart gap for the optimizer, 0 for closed forms.
    pub residual: f64,
    pub restarts_used: usize,
    /// False when no optimizer restart met its convergence tolerance.
    pub converged: bool,
}

impl MeasureValue {
    pub fn closed_form(value: f64) -> Self {
        Self::exact(value, Method::ClosedForm)
    }

    fn exact(value: f64, method: Method) -> Self {
        Self {
            value: clip(value),
            method,
            residual: 0.0,
            restarts_used: 0,
            converged: true,
        }
    }
}

/// Round-off negatives become 0; genuinely negative values are left visible.
pub(crate) fn clip(value: f64) -> f64 {
    if (-CLIP_TOL..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

/// (‖ρ^{t_A}‖₁ - 1) / (min(d_A, d_B) - 1).
pub fn negativity(rho: &BipartiteDensityMatrix) -> MeasureValue {
    let d_min = rho.d_a().min(rho.d_b());
    if d_min < 2 {
        return MeasureValue::closed_form(0.0);
    }
    let pt = rho.partial_transpose(Subsystem::A);
    let norm = linalg::trace_norm(&pt).expect("partial transpose of a density matrix is Hermitian");
    MeasureValue::closed_form((norm - 1.0) / (d_min - 1) as f64)
}

fn require_two_qubits(rho: &BipartiteDensityMatrix) -> Result<BlochForm> {
    bloch_decompose(rho)
}

fn largest_symmetric_eigenvalue(m: &[[f64; 3]; 3]) -> f64 {
    let flat: Vec<f64> = m.iter().flatten().copied().collect();
    let mat = ComplexMatrix::from_real(3, 3, &flat).expect("3x3");
    linalg::hermitian_eigenvalues(&mat).expect("symmetric").max()
}

/// y yᵗ + TᵗT.
fn correlation_gram(form: &BlochForm) -> [[f64; 3]; 3] {
    let mut g = [[0.0; 3]; 3];
    for (j, row) in g.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = form.y[j] * form.y[k] + (0..3).map(|i| form.t[i][j] * form.t[i][k]).sum::<f64>();
        }
    }
    g
}

/// Two-qubit geometric discord (measurement on B):
/// ½(‖y‖² + ‖T‖² - k_max), k_max the top eigenvalue of y yᵗ + TᵗT.
pub fn geometric_discord_2q(rho: &BipartiteDensityMatrix) -> Result<MeasureValue> {
    let form = require_two_qubits(rho)?;
    Ok(MeasureValue::closed_form(discord_from_bloch(&form)))
}

pub(crate) fn discord_from_bloch(form: &BlochForm) -> f64 {
    let y2: f64 = form.y.iter().map(|v| v * v).sum();
    let t2: f64 = form.t.iter().flatten().map(|v| v * v).sum();
    let k_max = largest_symmetric_eigenvalue(&correlation_gram(form));
    0.5 * (y2 + t2 - k_max)
}

/// Same quantity through the isometry form 2[Tr(CᵗC) - max_a Tr(A CᵗC Aᵗ)]
/// with C = R/2; the maximum over unit `a` is M₀₀ + λ_max(M̂).
pub fn geometric_discord_2q_variational(rho: &BipartiteDensityMatrix) -> Result<MeasureValue> {
    let form = require_two_qubits(rho)?;
    let r = form.correlation_matrix();
    let mut m = [[0.0; 4]; 4];
    for (j, row) in m.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = (0..4).map(|i| 0.25 * r[i][j] * r[i][k]).sum();
        }
    }
    let trace: f64 = (0..4).map(|i| m[i][i]).sum();
    let mut block = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            block[j][k] = m[j + 1][k + 1];
        }
    }
    let best = m[0][0] + largest_symmetric_eigenvalue(&block);
    Ok(MeasureValue::exact(2.0 * (trace - best), Method::Variational))
}

/// Which algebraic form of the observable bound Q to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QFormula {
    /// (2/3)[2 Tr S - √(6 Tr S² - 2 (Tr S)²)]; equals D_G on pure states.
    #[default]
    Corrected,
    /// (2/3)[Tr S - √(6 Tr S² - 2 (Tr S)²)], as usually printed; kept for
    /// comparison only (½ on Bell states, negative on weakly entangled ones).
    Printed,
}

/// Observable lower bound Q on the two-qubit geometric discord,
/// with S = ¼(y yᵗ + TᵗT).
pub fn q_lower_bound(rho: &BipartiteDensityMatrix) -> Result<MeasureValue> {
    q_lower_bound_with(rho, QFormula::Corrected)
}

pub fn q_lower_bound_with(rho: &BipartiteDensityMatrix, formula: QFormula) -> Result<MeasureValue> {
    let form = require_two_qubits(rho)?;
    let s = correlation_gram(&form).map(|row| row.map(|v| 0.25 * v));
    let tr: f64 = (0..3).map(|i| s[i][i]).sum();
    let tr_sq: f64 = s.iter().flatten().map(|v| v * v).sum();
    let root = (6.0 * tr_sq - 2.0 * tr * tr).max(0.0).sqrt();
    Ok(match formula {
        QFormula::Corrected => MeasureValue::closed_form((2.0 / 3.0 * (2.0 * tr - root)).max(0.0)),
        QFormula::Printed => MeasureValue {
            value: 2.0 / 3.0 * (tr - root),
            ..MeasureValue::closed_form(0.0)
        },
    })
}

fn check_spectrum_dim(alpha: &SchmidtSpectrum, d: usize) -> Result<()> {
    if d < 2 || alpha.len() > d {
        return Err(Error::BadSpectrum(format!("{} coefficients for d = {d}", alpha.len())));
    }
    let total: f64 = alpha.alpha().iter().sum();
    if (total - 1.0).abs() > SPECTRUM_TOL {
        return Err(Error::BadSpectrum(format!("sums to {total}")));
    }
    Ok(())
}

/// Pure-state discord (d/(d-1))(1 - Σ α_i²); the closest classical state is ρ_A ⊗ ρ_B.
pub fn geometric_discord_pure(alpha: &SchmidtSpectrum, d: usize) -> Result<MeasureValue> {
    check_spectrum_dim(alpha, d)?;
    let df = d as f64;
    let sum_sq: f64 = alpha.alpha().iter().map(|a| a * a).sum();
    Ok(MeasureValue::closed_form(df / (df - 1.0) * (1.0 - sum_sq)))
}

/// Pure-state negativity [(Σ √α_i)² - 1]/(d - 1).
pub fn negativity_pure(alpha: &SchmidtSpectrum, d: usize) -> Result<MeasureValue> {
    check_spectrum_dim(alpha, d)?;
    let s: f64 = alpha.alpha().iter().map(|a| a.sqrt()).sum();
    Ok(MeasureValue::closed_form((s * s - 1.0) / (d - 1) as f64))
}

/// Minimum pure-state discord at fixed negativity `n` in dimension `d`.
pub fn dg_lower_bound_curve(n: f64, d: usize) -> Result<f64> {
    check_range("negativity", n, 0.0, 1.0, "[0, 1]")?;
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: ">= 2",
        });
    }
    let d = d as f64;
    let dm1 = d - 1.0;
    let r = (dm1 * dm1 * (1.0 - n) * (1.0 + dm1 * n)).max(0.0).sqrt();
    let first = 2.0 * (d - r - 1.0) + (d - 2.0) * dm1 * n;
    let second = 2.0 * (dm1 * dm1 + r) - (d - 2.0) * dm1 * n;
    Ok(first * second / (dm1 * dm1 * d * d))
}

/// Discord and negativity of a state family at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyValues {
    pub dg: f64,
    pub negativity: f64,
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: ">= 2",
        });
    }
    Ok(())
}

/// Published Werner forms: D_G = (dk+1)²/(d+1)², 𝒩 = max(0, k).
///
/// These coincide with the definitional values only for d = 2; see
/// [`werner_definitional`].
pub fn werner_closed(d: usize, k: f64) -> Result<FamilyValues> {
    check_d(d)?;
    check_range("k", k, -1.0, 1.0, "[-1, 1]")?;
    let df = d as f64;
    Ok(FamilyValues {
        dg: ((df * k + 1.0) / (df + 1.0)).powi(2),
        negativity: k.max(0.0),
    })
}

/// Werner values that follow from the definitions applied to
/// [`crate::states::werner`]: D_G = (dk+1)²/(d²-1)², 𝒩 = max(0, 2k/(d(d-1))).
pub fn werner_definitional(d: usize, k: f64) -> Result<FamilyValues> {
    check_d(d)?;
    check_range("k", k, -1.0, 1.0, "[-1, 1]")?;
    let df = d as f64;
    Ok(FamilyValues {
        dg: ((df * k + 1.0) / (df * df - 1.0)).powi(2),
        negativity: (2.0 * k / (df * (df - 1.0))).max(0.0),
    })
}

/// Isotropic forms: D_G = (d²p-1)²/(d²-1)², 𝒩 = max(0, (dp-1)/(d-1)).
pub fn isotropic_closed(d: usize, p: f64) -> Result<FamilyValues> {
    check_d(d)?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let df = d as f64;
    let d2 = df * df;
    Ok(FamilyValues {
        dg: ((d2 * p - 1.0) / (d2 - 1.0)).powi(2),
        negativity: ((df * p - 1.0) / (df - 1.0)).max(0.0),
    })
}

/// [(1 + d𝒩)/(1 + d)]², the discord of both families in their entangled region.
pub fn family_discord_from_negativity(n: f64, d: usize) -> f64 {
    let df = d as f64;
    ((1.0 + df * n) / (1.0 + df)).powi(2)
}
