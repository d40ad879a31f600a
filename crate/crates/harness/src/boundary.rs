//! Upper envelope of D_G at fixed 𝒩² over the rank-two X family.
//!
//! The admissible (a, c) region is swept on a square grid over [0, ½]², and
//! its boundary is traced separately by bisection along every grid line and
//! the diagonal a = c, where the separable maximum sits. Points are binned
//! uniformly in 𝒩² and the largest D_G per bin is kept.

use qcorr_core::measures::{geometric_discord_2q, negativity};
use qcorr_core::states::{x_boundary_discriminant, x_boundary_state};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::parallel::par_map;
use crate::table::{Cell, Table};

pub const BINS: usize = 200;
/// Points within this distance of 𝒩² = 0 or 𝒩² = 1 define the endpoint values.
pub const ENDPOINT_WINDOW: f64 = 1e-12;
const EDGE: f64 = 0.5;
const BISECTIONS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub a: f64,
    pub c: f64,
    pub negativity_sq: f64,
    pub d_g: f64,
}

fn evaluate(a: f64, c: f64) -> Result<Option<BoundaryPoint>> {
    if x_boundary_discriminant(a, c) < 0.0 {
        return Ok(None);
    }
    let rho = x_boundary_state(a, c)?;
    let n = negativity(&rho).value;
    Ok(Some(BoundaryPoint {
        a,
        c,
        negativity_sq: n * n,
        d_g: geometric_discord_2q(&rho)?.value,
    }))
}

/// Zeros of `f` on [0, EDGE], located by sign changes over `scan` cells
/// and refined to the side where `f ≥ 0`.
fn roots(f: impl Fn(f64) -> f64, scan: usize) -> Vec<f64> {
    let at = |i: usize| EDGE * i as f64 / scan as f64;
    let mut out = Vec::new();
    for i in 0..scan {
        let (x0, x1) = (at(i), at(i + 1));
        let (f0, f1) = (f(x0), f(x1));
        if (f0 >= 0.0) == (f1 >= 0.0) {
            continue;
        }
        let (mut inside, mut outside) = if f0 >= 0.0 { (x0, x1) } else { (x1, x0) };
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (inside + outside);
            if f(mid) >= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        out.push(inside);
    }
    out
}

/// Every admissible grid point plus the traced region boundary.
pub fn sweep(grid: usize) -> Result<Vec<BoundaryPoint>> {
    let at = |i: usize| EDGE * i as f64 / grid as f64;
    let scan = 4 * grid;
    let rows = par_map(grid + 1, |i| {
        let x = at(i);
        let mut pts = Vec::new();
        for j in 0..=grid {
            pts.extend(evaluate(x, at(j))?);
        }
        for c in roots(|c| x_boundary_discriminant(x, c), scan) {
            pts.extend(evaluate(x, c)?);
        }
        for a in roots(|a| x_boundary_discriminant(a, x), scan) {
            pts.extend(evaluate(a, x)?);
        }
        Ok(pts)
    })?;
    let mut pts: Vec<BoundaryPoint> = rows.into_iter().flatten().collect();
    for t in roots(|t| x_boundary_discriminant(t, t), scan) {
        pts.extend(evaluate(t, t)?);
    }
    Ok(pts)
}

pub fn bin_of(negativity_sq: f64) -> usize {
    ((negativity_sq * BINS as f64).floor().max(0.0) as usize).min(BINS - 1)
}

/// Largest-D_G point in each 𝒩² bin.
pub fn envelope(points: &[BoundaryPoint]) -> Vec<Option<BoundaryPoint>> {
    let mut best: Vec<Option<BoundaryPoint>> = vec![None; BINS];
    for p in points {
        let slot = &mut best[bin_of(p.negativity_sq)];
        if slot.is_none_or(|b| p.d_g > b.d_g) {
            *slot = Some(*p);
        }
    }
    best
}

/// Largest D_G among points with 𝒩² within [`ENDPOINT_WINDOW`] of `target`.
pub fn endpoint(points: &[BoundaryPoint], target: f64) -> Option<BoundaryPoint> {
    points
        .iter()
        .filter(|p| (p.negativity_sq - target).abs() <= ENDPOINT_WINDOW)
        .copied()
        .reduce(|x, y| if y.d_g > x.d_g { y } else { x })
}

pub fn boundary_2q(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let points = sweep(cfg.grid)?;
    let env = envelope(&points);
    let mut t = Table::new(&["kind", "bin", "negativity_sq", "d_g", "a", "c"]);
    let point_row = |kind: &str, bin: Cell, p: &BoundaryPoint| {
        vec![
            kind.into(),
            bin,
            p.negativity_sq.into(),
            p.d_g.into(),
            p.a.into(),
            p.c.into(),
        ]
    };
    let mut worst_margin = f64::INFINITY;
    for (bin, p) in env.iter().enumerate() {
        if let Some(p) = p {
            worst_margin = worst_margin.min(p.d_g - p.negativity_sq);
            t.push(point_row("envelope", bin.into(), p));
        }
    }
    let ends = [endpoint(&points, 0.0), endpoint(&points, 1.0)];
    for p in ends.iter().flatten() {
        t.push(point_row("endpoint", Cell::Empty, p));
    }
    for j in 0..=BINS {
        let x = j as f64 / BINS as f64;
        t.push(vec![
            "lower".into(),
            Cell::Empty,
            x.into(),
            x.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }

    let fmt_end = |p: &Option<BoundaryPoint>| p.map_or("none".to_string(), |p| format!("{:.16e}", p.d_g));
    t.note(format!("grid={} points={} bins={BINS}", cfg.grid, points.len()));
    t.note(format!("envelope at negativity_sq=0: {}", fmt_end(&ends[0])));
    t.note(format!("envelope at negativity_sq=1: {}", fmt_end(&ends[1])));
    t.note(format!("min(envelope - negativity_sq)={worst_margin:.16e}"));
    Ok(t)
}
