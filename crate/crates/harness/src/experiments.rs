use std::f64::consts::FRAC_PI_2;

use qcorr_core::measures::{
    dg_lower_bound_curve, family_discord_from_negativity, geometric_discord_2q, geometric_discord_2q_variational,
    geometric_discord_numeric, geometric_discord_pure, isotropic_closed, negativity, negativity_pure, q_lower_bound,
    werner_closed, werner_definitional, FamilyValues,
};
use qcorr_core::rng::stream;
use qcorr_core::states::{isotropic, random_mixed, random_schmidt, saturating_schmidt, saturating_theta_min, werner};
use qcorr_core::{BipartiteDensityMatrix, Method, Subsystem};

use crate::config::{ExperimentConfig, FamilyKind};
use crate::error::Result;
use crate::parallel::par_map;
use crate::table::{Cell, Table};

/// Row tolerance for D_G ≥ 𝒩² when both sides are closed forms.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Row tolerance when D_G comes from the optimizer.
pub const OPTIMIZER_TOL: f64 = 1e-6;
/// Largest d for which family sweeps also build the density matrix.
pub const MATRIX_FAMILY_MAX_D: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub index: usize,
    pub d_a: usize,
    pub d_b: usize,
    pub rank: usize,
    pub negativity: f64,
    pub negativity_sq: f64,
    pub d_g: f64,
    pub q: Option<f64>,
    pub d_g_method: Method,
    pub optimizer_residual: f64,
    pub converged: bool,
}

impl SampleRecord {
    pub const HEADER: [&'static str; 11] = [
        "index",
        "d_a",
        "d_b",
        "rank",
        "negativity",
        "negativity_sq",
        "d_g",
        "q",
        "d_g_method",
        "optimizer_residual",
        "converged",
    ];

    pub fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.d_a.into(),
            self.d_b.into(),
            self.rank.into(),
            self.negativity.into(),
            self.negativity_sq.into(),
            self.d_g.into(),
            self.q.into(),
            self.d_g_method.to_string().into(),
            self.optimizer_residual.into(),
            self.converged.into(),
        ]
    }

    pub fn margin(&self) -> f64 {
        self.d_g - self.negativity_sq
    }
}

fn records_table(records: &[SampleRecord]) -> Table {
    let mut t = Table::new(&SampleRecord::HEADER);
    for r in records {
        t.push(r.cells());
    }
    t
}

fn min_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::INFINITY, f64::min)
}

fn max_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::NEG_INFINITY, f64::max)
}

/// Rank used for sample `i`: the configured one, or `default`.
fn rank_for(cfg: &ExperimentConfig, default: usize) -> usize {
    cfg.rank.unwrap_or(default)
}

pub fn sample_2q(cfg: &ExperimentConfig, index: usize, rank: usize) -> Result<(BipartiteDensityMatrix, SampleRecord)> {
    let rho = random_mixed(2, 2, rank, &mut stream(cfg.seed, index as u64))?;
    let n = negativity(&rho).value;
    let dg = geometric_discord_2q(&rho)?;
    let q = q_lower_bound(&rho)?.value;
    let record = SampleRecord {
        index,
        d_a: 2,
        d_b: 2,
        rank,
        negativity: n,
        negativity_sq: n * n,
        d_g: dg.value,
        q: Some(q),
        d_g_method: dg.method,
        optimizer_residual: 0.0,
        converged: true,
    };
    Ok((rho, record))
}

/// Hilbert–Schmidt random two-qubit states with closed-form 𝒩², D_G and Q.
pub fn scatter_2q(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let rank = rank_for(cfg, 4);
    let records = par_map(cfg.samples, |i| sample_2q(cfg, i, rank).map(|(_, r)| r))?;

    let mut t = records_table(&records);
    let q = |r: &SampleRecord| r.q.unwrap_or(f64::NAN);
    t.note(format!("samples={} seed={} rank={rank}", cfg.samples, cfg.seed));
    t.note(format!(
        "min(d_g - negativity_sq)={:.16e}",
        min_of(records.iter().map(SampleRecord::margin))
    ));
    t.note(format!(
        "min(d_g - q)={:.16e}",
        min_of(records.iter().map(|r| r.d_g - q(r)))
    ));
    t.note(format!(
        "min(q - negativity_sq)={:.16e}",
        min_of(records.iter().map(|r| q(r) - r.negativity_sq))
    ));
    let violations = records.iter().filter(|r| r.margin() < -ANALYTIC_TOL).count();
    t.note(format!(
        "violations(d_g < negativity_sq - {ANALYTIC_TOL:e})={violations}"
    ));
    let sep_max = max_of(records.iter().filter(|r| r.negativity < 1e-9).map(|r| r.d_g));
    t.note(format!("max d_g with negativity < 1e-9={sep_max:.16e}"));
    Ok(t)
}

/// Numerical D_G of a random 2⊗3 state measured on `cfg.measured_side`.
pub fn sample_2x3(cfg: &ExperimentConfig, index: usize, rank: usize) -> Result<SampleRecord> {
    let rho = random_mixed(2, 3, rank, &mut stream(cfg.seed, index as u64))?;
    let n = negativity(&rho).value;
    let dg = geometric_discord_numeric(&rho, cfg.measured_side, &cfg.optimizer)?;
    Ok(SampleRecord {
        index,
        d_a: 2,
        d_b: 3,
        rank,
        negativity: n,
        negativity_sq: n * n,
        d_g: dg.value,
        q: None,
        d_g_method: dg.method,
        optimizer_residual: dg.residual,
        converged: dg.converged,
    })
}

/// Random 2⊗3 mixed states with numerically minimized D_G. Unconverged rows
/// are kept and marked in the `converged` column.
pub fn scatter_2x3(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let rank = rank_for(cfg, 6);
    let records = par_map(cfg.samples, |i| sample_2x3(cfg, i, rank))?;

    let mut t = records_table(&records);
    let side_dim = if cfg.measured_side == Subsystem::A { 2 } else { 3 };
    t.note(format!("samples={} seed={} rank={rank}", cfg.samples, cfg.seed));
    t.note(format!(
        "measured_side={} normalization={side_dim}/{}",
        cfg.measured_side,
        side_dim - 1
    ));
    t.note(format!(
        "optimizer restarts={} tol={:e} max_iterations={}",
        cfg.optimizer.restarts, cfg.optimizer.convergence_tol, cfg.optimizer.max_iterations
    ));
    t.note(format!(
        "min(d_g - negativity_sq)={:.16e}",
        min_of(records.iter().map(SampleRecord::margin))
    ));
    let violations = records.iter().filter(|r| r.margin() < -OPTIMIZER_TOL).count();
    t.note(format!(
        "violations(d_g < negativity_sq - {OPTIMIZER_TOL:e})={violations}"
    ));
    t.note(format!(
        "not_converged={}",
        records.iter().filter(|r| !r.converged).count()
    ));
    Ok(t)
}

/// Pure d⊗d states: random Schmidt spectra, the minimal-discord curve and
/// the family of spectra that saturates it.
pub fn pure_qudit_scan(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let d = cfg.d;
    let mut t = Table::new(&[
        "kind",
        "index",
        "d",
        "theta",
        "negativity",
        "negativity_sq",
        "d_g",
        "lower_curve",
    ]);
    let rows = par_map(cfg.samples, |i| {
        let alpha = random_schmidt(d, &mut stream(cfg.seed, i as u64))?;
        let n = negativity_pure(&alpha, d)?.value;
        let dg = geometric_discord_pure(&alpha, d)?.value;
        Ok((n, dg, dg_lower_bound_curve(n.clamp(0.0, 1.0), d)?))
    })?;
    let push = |t: &mut Table, kind: &str, i: usize, theta: Option<f64>, n: f64, dg: f64, curve: f64| {
        t.push(vec![
            kind.into(),
            i.into(),
            d.into(),
            theta.into(),
            n.into(),
            (n * n).into(),
            dg.into(),
            curve.into(),
        ])
    };
    for (i, &(n, dg, curve)) in rows.iter().enumerate() {
        push(&mut t, "sample", i, None, n, dg, curve);
    }
    for j in 0..=cfg.grid {
        let n = j as f64 / cfg.grid as f64;
        let curve = dg_lower_bound_curve(n, d)?;
        push(&mut t, "curve", j, None, n, curve, curve);
    }
    let lo = saturating_theta_min(d);
    let mut saturation_gap: f64 = 0.0;
    for j in 0..=cfg.grid {
        let theta = lo + (FRAC_PI_2 - lo) * j as f64 / cfg.grid as f64;
        let alpha = saturating_schmidt(d, theta)?;
        let n = negativity_pure(&alpha, d)?.value;
        let dg = geometric_discord_pure(&alpha, d)?.value;
        let curve = dg_lower_bound_curve(n.clamp(0.0, 1.0), d)?;
        saturation_gap = saturation_gap.max((dg - curve).abs());
        push(&mut t, "saturating", j, Some(theta), n, dg, curve);
    }

    t.note(format!("samples={} seed={} d={d}", cfg.samples, cfg.seed));
    t.note(format!(
        "min(d_g - negativity_sq)={:.16e}",
        min_of(rows.iter().map(|(n, dg, _)| dg - n * n))
    ));
    t.note(format!(
        "min(d_g - lower_curve)={:.16e}",
        min_of(rows.iter().map(|(_, dg, c)| dg - c))
    ));
    t.note(format!(
        "max |d_g - lower_curve| on saturating family={saturation_gap:.16e}"
    ));
    Ok(t)
}

/// Values of a family at one parameter: (published form, definitional form).
pub fn family_values(family: FamilyKind, d: usize, param: f64) -> Result<(FamilyValues, FamilyValues)> {
    Ok(match family {
        FamilyKind::Werner => (werner_closed(d, param)?, werner_definitional(d, param)?),
        FamilyKind::Isotropic => {
            let v = isotropic_closed(d, param)?;
            (v, v)
        }
    })
}

pub fn family_state(family: FamilyKind, d: usize, param: f64) -> Result<BipartiteDensityMatrix> {
    Ok(match family {
        FamilyKind::Werner => werner(d, param)?,
        FamilyKind::Isotropic => isotropic(d, param)?,
    })
}

/// Evenly spaced parameter grid over the family's domain, endpoints included.
pub fn family_grid(family: FamilyKind, steps: usize) -> Vec<f64> {
    let (lo, hi) = match family {
        FamilyKind::Werner => (-1.0, 1.0),
        FamilyKind::Isotropic => (0.0, 1.0),
    };
    (0..=steps)
        .map(|j| {
            if j == steps {
                hi
            } else {
                lo + (hi - lo) * j as f64 / steps as f64
            }
        })
        .collect()
}

/// Werner or isotropic sweep. For d ≤ [`MATRIX_FAMILY_MAX_D`] the state is
/// also built explicitly and its negativity and optimizer D_G reported.
pub fn family_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let (family, d) = (cfg.family, cfg.d);
    let params = family_grid(family, cfg.grid);
    let with_matrix = d <= MATRIX_FAMILY_MAX_D;
    let mut t = Table::new(&[
        "param",
        "n_paper",
        "n_definitional",
        "dg_closed",
        "dg_definitional",
        "eq29_residual",
        "negativity_matrix",
        "dg_matrix_closed",
        "dg_numeric",
        "numeric_residual",
        "converged",
    ]);
    let rows = par_map(params.len(), |i| {
        let p = params[i];
        let (paper, exact) = family_values(family, d, p)?;
        let identity =
            (paper.negativity > 0.0).then(|| (paper.dg - family_discord_from_negativity(paper.negativity, d)).abs());
        let mut matrix = None;
        if with_matrix {
            let rho = family_state(family, d, p)?;
            let closed = if d == 2 {
                Some(geometric_discord_2q(&rho)?.value)
            } else {
                None
            };
            let numeric = geometric_discord_numeric(&rho, Subsystem::B, &cfg.optimizer)?;
            matrix = Some((negativity(&rho).value, closed, numeric));
        }
        Ok((p, paper, exact, identity, matrix))
    })?;

    let mut worst_identity: f64 = 0.0;
    let mut worst_numeric_exact: f64 = 0.0;
    let mut worst_numeric_paper: f64 = 0.0;
    for (p, paper, exact, identity, matrix) in &rows {
        worst_identity = worst_identity.max(identity.unwrap_or(0.0));
        let mut cells: Vec<Cell> = vec![
            (*p).into(),
            paper.negativity.into(),
            exact.negativity.into(),
            paper.dg.into(),
            exact.dg.into(),
            (*identity).into(),
        ];
        match matrix {
            Some((n, closed, numeric)) => {
                worst_numeric_exact = worst_numeric_exact.max((numeric.value - exact.dg).abs());
                worst_numeric_paper = worst_numeric_paper.max((numeric.value - paper.dg).abs());
                cells.extend([
                    (*n).into(),
                    (*closed).into(),
                    numeric.value.into(),
                    numeric.residual.into(),
                    numeric.converged.into(),
                ]);
            }
            None => cells.extend(std::iter::repeat_n(Cell::Empty, 5)),
        }
        t.push(cells);
    }
    t.note(format!("family={family} d={d} steps={}", cfg.grid));
    t.note(format!("max eq29_residual on entangled rows={worst_identity:.16e}"));
    if with_matrix {
        t.note(format!("max |dg_numeric - dg_definitional|={worst_numeric_exact:.16e}"));
        t.note(format!("max |dg_numeric - dg_closed|={worst_numeric_paper:.16e}"));
    }
    Ok(t)
}

/// Closed-form, variational and optimizer D_G side by side on random
/// two-qubit states; ranks cycle through 1..=4 unless fixed.
pub fn oracle_check(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let mut t = Table::new(&[
        "index",
        "rank",
        "dg_closed",
        "dg_variational",
        "dg_numeric",
        "gap_numeric",
        "gap_variational",
        "optimizer_residual",
        "converged",
    ]);
    let rows = par_map(cfg.samples, |i| {
        let rank = cfg.rank.unwrap_or(i % 4 + 1);
        let rho = random_mixed(2, 2, rank, &mut stream(cfg.seed, i as u64))?;
        let closed = geometric_discord_2q(&rho)?.value;
        let variational = geometric_discord_2q_variational(&rho)?.value;
        let numeric = geometric_discord_numeric(&rho, Subsystem::B, &cfg.optimizer)?;
        Ok((rank, closed, variational, numeric))
    })?;
    let (mut gap_n, mut gap_v, mut unconverged): (f64, f64, usize) = (0.0, 0.0, 0);
    for (i, (rank, closed, variational, numeric)) in rows.iter().enumerate() {
        let gn = (numeric.value - closed).abs();
        let gv = (variational - closed).abs();
        gap_n = gap_n.max(gn);
        gap_v = gap_v.max(gv);
        unconverged += usize::from(!numeric.converged);
        t.push(vec![
            i.into(),
            (*rank).into(),
            (*closed).into(),
            (*variational).into(),
            numeric.value.into(),
            gn.into(),
            gv.into(),
            numeric.residual.into(),
            numeric.converged.into(),
        ]);
    }
    t.note(format!("samples={} seed={}", cfg.samples, cfg.seed));
    t.note(format!("max |numeric - closed|={gap_n:.16e}"));
    t.note(format!("max |variational - closed|={gap_v:.16e}"));
    t.note(format!("not_converged={unconverged}"));
    Ok(t)
}
