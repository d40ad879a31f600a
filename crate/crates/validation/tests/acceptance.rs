//! Acceptance criteria, one PASS/FAIL line each. Criteria that need a
//! single-threaded runtime bound are evaluated sequentially on this thread.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcorr_core::linalg::Subsystem;
use qcorr_core::measures::{
    dg_lower_bound_curve, family_discord_from_negativity, geometric_discord_2q, geometric_discord_2q_variational,
    geometric_discord_numeric, geometric_discord_pure, isotropic_closed, negativity, negativity_pure, q_lower_bound,
    werner_closed,
};
use qcorr_core::rng::stream;
use qcorr_core::states::{
    isotropic, random_mixed, random_pure, random_schmidt, saturating_schmidt, saturating_theta_min, sep_mixture,
    sep_opt_state, werner,
};
use qcorr_core::OptimizerConfig;
use qcorr_harness::boundary::{endpoint, sweep};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

/// Running minimum of a margin and the number of samples below `-tol`.
#[derive(Default)]
struct Margin {
    worst: Option<f64>,
    violations: usize,
}

impl Margin {
    fn observe(&mut self, margin: f64, tol: f64) {
        if margin.is_nan() || margin < -tol {
            self.violations += 1;
        }
        self.worst = Some(self.worst.map_or(margin, |w| w.min(margin)));
    }

    fn observe_gap(&mut self, a: f64, b: f64, tol: f64) {
        self.observe(-(a - b).abs(), tol);
    }

    fn worst(&self) -> f64 {
        self.worst.unwrap_or(f64::NAN)
    }
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut theorem = Margin::default();
    let mut upper = Margin::default();
    let mut lower = Margin::default();
    for i in 0..100_000u64 {
        let rho = random_mixed(2, 2, 4, &mut stream(SEED, i)).expect("state");
        let n = negativity(&rho).value;
        let dg = geometric_discord_2q(&rho).expect("dg").value;
        let q = q_lower_bound(&rho).expect("q").value;
        theorem.observe(dg - n * n, 1e-10);
        upper.observe(dg - q, 1e-10);
        lower.observe(q - n * n, 1e-9);
    }
    let elapsed = start.elapsed();
    let first = outcome(
        theorem.violations == 0 && within(elapsed, 30),
        format!(
            "10^5 HS two-qubit states: {} violations of D_G >= N^2 - 1e-10 (min margin {:.3e}), {:.2?} single-threaded",
            theorem.violations,
            theorem.worst(),
            elapsed
        ),
    );
    let second = outcome(
        upper.violations == 0 && lower.violations == 0,
        format!(
            "D_G >= Q - 1e-10: {} violations (min {:.3e}); Q >= N^2 - 1e-9: {} violations (min {:.3e})",
            upper.violations,
            upper.worst(),
            lower.violations,
            lower.worst()
        ),
    );
    (first, second)
}

fn criterion_3() -> Outcome {
    let mut collapse = Margin::default();
    let mut det = Margin::default();
    for i in 0..10_000u64 {
        let rho = random_pure(2, 2, &mut stream(SEED + 3, i));
        let n = negativity(&rho).value;
        let dg = geometric_discord_2q(&rho).expect("dg").value;
        let ra = rho.partial_trace(Subsystem::A);
        let det_a = (ra[(0, 0)] * ra[(1, 1)] - ra[(0, 1)] * ra[(1, 0)]).re;
        collapse.observe_gap(dg, n * n, 1e-10);
        det.observe_gap(dg, 4.0 * det_a, 1e-10);
    }
    outcome(
        collapse.violations == 0 && det.violations == 0,
        format!(
            "10^4 pure two-qubit states: max |D_G - N^2| = {:.3e}, max |D_G - 4 det rho_A| = {:.3e}",
            -collapse.worst(),
            -det.worst()
        ),
    )
}

fn criterion_4() -> Outcome {
    let sep = sep_opt_state();
    let dg = geometric_discord_2q(&sep).expect("dg").value;
    let n = negativity(&sep).value;
    let swapped = geometric_discord_numeric(&sep.swap(), Subsystem::B, &OptimizerConfig::default())
        .expect("numeric")
        .value;
    let mut mixture = Margin::default();
    for j in 0..50 {
        let p = j as f64 / 49.0;
        let v = geometric_discord_2q(&sep_mixture(p).expect("mixture"))
            .expect("dg")
            .value;
        mixture.observe_gap(v, p * p / 4.0, 1e-10);
    }
    outcome(
        (dg - 0.25).abs() <= 1e-10 && n.abs() <= 1e-12 && swapped < 1e-8 && mixture.violations == 0,
        format!(
            "sep_opt D_G = {dg:.12}, N = {n:.1e}; swapped numeric D_G = {swapped:.1e}; mixture max |D_G - p^2/4| = {:.1e}",
            -mixture.worst()
        ),
    )
}

fn criterion_5() -> Outcome {
    let cfg = OptimizerConfig {
        restarts: 24,
        convergence_tol: 1e-9,
        ..Default::default()
    };
    let start = Instant::now();
    let mut numeric = Margin::default();
    let mut variational = Margin::default();
    let mut unconverged = 0;
    for i in 0..1_000u64 {
        let rho = random_mixed(2, 2, (i % 4 + 1) as usize, &mut stream(SEED + 5, i)).expect("state");
        let closed = geometric_discord_2q(&rho).expect("dg").value;
        let v = geometric_discord_numeric(&rho, Subsystem::B, &cfg).expect("numeric");
        unconverged += usize::from(!v.converged);
        numeric.observe_gap(v.value, closed, 1e-6);
        let var = geometric_discord_2q_variational(&rho).expect("variational").value;
        variational.observe_gap(var, closed, 1e-10);
    }
    let elapsed = start.elapsed();
    outcome(
        numeric.violations == 0 && variational.violations == 0 && within(elapsed, 120),
        format!(
            "10^3 states: max |numeric - closed| = {:.3e} ({unconverged} unconverged), max |variational - closed| = {:.3e}, {:.2?}",
            -numeric.worst(),
            -variational.worst(),
            elapsed
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut theorem = Margin::default();
    let mut curve = Margin::default();
    let mut saturation = Margin::default();
    for d in 2..=7usize {
        for i in 0..3_000u64 {
            let alpha = random_schmidt(d, &mut stream(SEED + 6 + d as u64, i)).expect("spectrum");
            let n = negativity_pure(&alpha, d).expect("n").value;
            let dg = geometric_discord_pure(&alpha, d).expect("dg").value;
            theorem.observe(dg - n * n, 1e-12);
            curve.observe(dg - dg_lower_bound_curve(n.clamp(0.0, 1.0), d).expect("curve"), 1e-9);
        }
        let lo = saturating_theta_min(d);
        for j in 0..50 {
            let theta = lo + (std::f64::consts::FRAC_PI_2 - lo) * j as f64 / 49.0;
            let alpha = saturating_schmidt(d, theta).expect("saturating");
            let n = negativity_pure(&alpha, d).expect("n").value;
            let dg = geometric_discord_pure(&alpha, d).expect("dg").value;
            saturation.observe_gap(dg, dg_lower_bound_curve(n.clamp(0.0, 1.0), d).expect("curve"), 1e-9);
        }
    }
    outcome(
        theorem.violations + curve.violations + saturation.violations == 0,
        format!(
            "d=2..7 x 3000: min(D_G - N^2) = {:.3e}, min(D_G - curve) = {:.3e}; saturating family max gap = {:.3e}",
            theorem.worst(),
            curve.worst(),
            -saturation.worst()
        ),
    )
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| {
            if j + 1 == points {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn criterion_7a() -> Outcome {
    let mut identity = Margin::default();
    for d in [2usize, 3, 10, 99] {
        for k in grid(-1.0, 1.0, 201) {
            let v = werner_closed(d, k).expect("werner");
            if v.negativity > 0.0 {
                identity.observe_gap(v.dg, family_discord_from_negativity(v.negativity, d), 1e-12);
            }
        }
        for p in grid(0.0, 1.0, 201) {
            let v = isotropic_closed(d, p).expect("isotropic");
            if v.negativity > 0.0 {
                identity.observe_gap(v.dg, family_discord_from_negativity(v.negativity, d), 1e-12);
            }
        }
    }
    outcome(
        identity.violations == 0,
        format!(
            "Werner and isotropic, d in {{2,3,10,99}}: max identity residual {:.3e}",
            -identity.worst()
        ),
    )
}

fn criterion_7b() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut parts = Vec::new();
    let mut passed = true;
    for d in [2usize, 3] {
        let mut w = Margin::default();
        for k in grid(-1.0, 1.0, 21) {
            let v = geometric_discord_numeric(&werner(d, k).expect("werner"), Subsystem::B, &cfg).expect("numeric");
            w.observe_gap(v.value, werner_closed(d, k).expect("closed").dg, 1e-6);
        }
        let mut iso = Margin::default();
        for p in grid(0.0, 1.0, 21) {
            let v =
                geometric_discord_numeric(&isotropic(d, p).expect("isotropic"), Subsystem::B, &cfg).expect("numeric");
            iso.observe_gap(v.value, isotropic_closed(d, p).expect("closed").dg, 1e-6);
        }
        passed &= w.violations == 0 && iso.violations == 0;
        parts.push(format!(
            "d={d}: Werner max gap {:.3e} ({} of 21 off), isotropic max gap {:.3e}",
            -w.worst(),
            w.violations,
            -iso.worst()
        ));
    }
    outcome(passed, format!("optimizer vs closed forms: {}", parts.join("; ")))
}

fn criterion_7c() -> Outcome {
    let mut gap = Margin::default();
    let mut at = 0.0;
    for k in grid(-1.0, 1.0, 100) {
        let v = werner_closed(99, k).expect("werner").dg;
        let before = gap.worst;
        gap.observe_gap(v, k * k, 0.03);
        if gap.worst != before {
            at = k;
        }
    }
    outcome(
        gap.violations == 0,
        format!(
            "d=99 Werner, 100-point k grid: max |D_G - k^2| = {:.4} at k = {at:.3} ({} points >= 0.03)",
            -gap.worst(),
            gap.violations
        ),
    )
}

fn criterion_8() -> Outcome {
    let cfg = OptimizerConfig::default();
    let start = Instant::now();
    let mut margin = Margin::default();
    let mut unconverged = 0;
    for i in 0..10_000u64 {
        let rho = random_mixed(2, 3, 6, &mut stream(SEED + 8, i)).expect("state");
        let n = negativity(&rho).value;
        let v = geometric_discord_numeric(&rho, Subsystem::A, &cfg).expect("numeric");
        unconverged += usize::from(!v.converged);
        margin.observe(v.value - n * n, 1e-6);
    }
    let elapsed = start.elapsed();
    outcome(
        margin.violations == 0 && within(elapsed, 15 * 60),
        format!(
            "10^4 HS 2x3 states, qubit measured: {} violations (min margin {:.3e}), {unconverged} unconverged, {:.2?}",
            margin.violations,
            margin.worst(),
            elapsed
        ),
    )
}

fn criterion_9() -> Outcome {
    let points = sweep(400).expect("sweep");
    let zero = endpoint(&points, 0.0).map(|p| p.d_g);
    let one = endpoint(&points, 1.0).map(|p| p.d_g);
    let ok = zero.is_some_and(|v| (v - 0.25).abs() <= 1e-4) && one.is_some_and(|v| (v - 1.0).abs() <= 1e-4);
    outcome(
        ok,
        format!(
            "rank-two X family envelope, grid 400 ({} points): N^2=0 -> {zero:?}, N^2=1 -> {one:?}",
            points.len()
        ),
    )
}

fn main() -> ExitCode {
    let (c1, c2) = criterion_1_and_2();
    let results = [
        ("1", "hierarchy D_G >= N^2 at desk scale", c1),
        ("2", "chain D_G >= Q >= N^2", c2),
        ("3", "pure two-qubit collapse", criterion_3()),
        ("4", "separable anchors", criterion_4()),
        ("5", "optimizer vs closed form and variational path", criterion_5()),
        ("6", "pure qudits and the minimal curve", criterion_6()),
        ("7a", "family identity on entangled regions", criterion_7a()),
        ("7b", "optimizer reproduces family closed forms", criterion_7b()),
        ("7c", "large-d Werner discord near k^2", criterion_7c()),
        ("8", "qubit-qutrit hierarchy", criterion_8()),
        ("9", "two-qubit envelope endpoints", criterion_9()),
    ];
    let mut failed = 0;
    for (id, name, r) in &results {
        println!("{} [{id}] {name}: {}", if r.passed { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
