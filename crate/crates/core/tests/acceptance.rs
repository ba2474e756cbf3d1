//! End-to-end acceptance run: nine criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p selfsim-ot --test acceptance`. The report goes to
//! stderr directly, so it shows without `--nocapture`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim_ot::verify::{random_discrete_pair, sample_configs, RandomConfig};
use selfsim_ot::*;

const SEED: u64 = 42;
const CONFIGS: usize = 50;

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self {
            passed,
            summary: summary.into(),
        }
    }
}

fn ck(k: u32, cfg: &RandomConfig) -> f64 {
    cfg.sys.c().powi(k as i32)
}

fn criterion_1(configs: &[RandomConfig]) -> Result<Outcome> {
    let (mut ok, mut worst) = (true, 0.0f64);
    for cfg in configs {
        for r in cfg.interior_r(5) {
            let dc = discretize_coupling(&cfg.sys, &CouplingParam::new(cfg.p, cfg.q, r)?, 10)?;
            let gap = (coupling_moment(&dc, 1)? - phi1(&MomentFormulaInput::new(cfg.sys, cfg.p, cfg.q, r)?)).abs();
            let tol = 3.0 * ck(10, cfg);
            ok &= gap <= tol;
            worst = worst.max(gap / tol);
        }
    }
    Ok(Outcome::new(
        ok,
        format!("first moment vs phi1, worst gap/tol {worst:.3e}"),
    ))
}

fn criterion_2(configs: &[RandomConfig]) -> Result<Outcome> {
    let (mut ok, mut worst) = (true, 0.0f64);
    for cfg in configs {
        for r in cfg.interior_r(5) {
            let dc = discretize_coupling(&cfg.sys, &CouplingParam::new(cfg.p, cfg.q, r)?, 9)?;
            let formula = phi2(&MomentFormulaInput::new(cfg.sys, cfg.p, cfg.q, r)?);
            let gap = (coupling_moment(&dc, 2)?.powi(2) - formula * formula).abs();
            let tol = 6.0 * ck(9, cfg);
            ok &= gap <= tol;
            worst = worst.max(gap / tol);
        }
    }
    Ok(Outcome::new(
        ok,
        format!("second moment vs phi2^2, worst gap/tol {worst:.3e}"),
    ))
}

fn criterion_3(configs: &[RandomConfig]) -> Result<Outcome> {
    let (mut ok, mut worst) = (true, 0.0f64);
    for cfg in configs {
        let (a, b) = cfg.marginals(14)?;
        let gap = (monotone_transport(&a, &b)?.cost_rho1 - w1_exact(&cfg.sys, cfg.p, cfg.q)?).abs();
        let tol = 3.0 * ck(14, cfg);
        ok &= gap <= tol;
        worst = worst.max(gap / tol);
    }
    let half = RandomConfig {
        sys: IfsSystem::new(0.5, 0.0, 0.5)?,
        p: 0.2,
        q: 0.8,
    };
    // 0.8 - 0.2 is not exactly 0.6 in binary, so allow the rounding of that one subtraction.
    let w1 = w1_exact(&half.sys, 0.2, 0.8)?;
    let closed_ok = (w1 - 0.6).abs() <= 2.0 * f64::EPSILON;
    let (a, b) = half.marginals(14)?;
    let fig_gap = (monotone_transport(&a, &b)?.cost_rho1 - w1).abs();
    let fig_ok = fig_gap <= 3.0 * 0.5f64.powi(14);
    Ok(Outcome::new(
        ok && closed_ok && fig_ok,
        format!("W1 oracle vs closed form, worst gap/tol {worst:.3e}; reference w1 = {w1}, oracle gap {fig_gap:.3e}"),
    ))
}

fn criterion_4(configs: &[RandomConfig]) -> Result<Outcome> {
    let mut ok = true;
    let (mut lower_gap, mut upper_gap) = (f64::INFINITY, f64::INFINITY);
    for cfg in configs {
        let (a, b) = cfg.marginals(14)?;
        let w2 = monotone_transport(&a, &b)?.cost_rho2;
        let bounds = w2_bounds(&cfg.sys, cfg.p, cfg.q)?;
        let tol = 3.0 * ck(14, cfg);
        ok &= w2 >= bounds.lower - tol && w2 <= bounds.upper + tol;
        lower_gap = lower_gap.min(w2 - bounds.lower);
        upper_gap = upper_gap.min(bounds.upper - w2);
    }
    Ok(Outcome::new(
        ok,
        format!("W2 sandwich; min(oracle - lower) {lower_gap:.3e}, min(upper - oracle) {upper_gap:.3e}"),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let (p, q) = (0.2, 0.9);
    let mut ok = true;
    let mut prev = f64::NEG_INFINITY;
    for k in 1..=10 {
        let c = 0.05 * k as f64;
        ok &= w1_exact(&IfsSystem::cantor(c)?, p, q)? == 0.7;
        let close = w1_exact(&IfsSystem::new(c, 0.0, c)?, p, q)?;
        ok &= close > prev;
        if k < 10 {
            ok &= close < 0.7;
        }
        prev = close;
    }
    Ok(Outcome::new(
        ok,
        "cantor W1 = 0.7 for every c; t2 = c regime increasing and below 0.7",
    ))
}

/// Atoms of an `N`-map IFS with midpoint representatives.
fn n_map_atoms(maps: &[(f64, f64)], weights: &[f64], depth: u32) -> Result<discrete::DiscreteMeasure> {
    let mut atoms = vec![(0.5, 1.0)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(atoms.len() * maps.len());
        for (&(c, t), &w) in maps.iter().zip(weights) {
            next.extend(atoms.iter().map(|&(x, m)| (c * x + t, w * m)));
        }
        atoms = next;
    }
    discrete::DiscreteMeasure::from_atoms(atoms)
}

fn criterion_6() -> Result<Outcome> {
    let (p, q) = ([0.4, 0.5, 0.1], [0.6, 0.1, 0.3]);
    let mut ok = true;
    let mut parts = Vec::new();
    for c in [0.05, 0.15, 0.25] {
        let maps = [(c, 0.0), (c, c), (c, 2.0 * c)];
        let bound = general_lower_bound(&GeneralIfsSpec::new(maps.to_vec(), p.to_vec(), q.to_vec())?)?;
        let w1 = monotone_transport(&n_map_atoms(&maps, &p, 9)?, &n_map_atoms(&maps, &q, 9)?)?.cost_rho1;
        ok &= bound.abs() <= 1e-14 && w1 > 0.0;
        parts.push(format!("c={c}: bound {bound:.1e}, oracle {w1:.4e}"));
    }
    Ok(Outcome::new(
        ok,
        format!("linear bound vanishes, W1 does not ({})", parts.join("; ")),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut ok, mut worst) = (true, 0.0f64);
    for _ in 0..20 {
        let cfg = RandomConfig::sample_separated(&mut rng, 0.1);
        let reg = coupling_region(cfg.p, cfg.q)?;
        let r = reg.lo + reg.width() * rng.random_range(0.25..0.75);
        let mut prev = f64::INFINITY;
        for d in [6, 8, 10] {
            let res = techlem_residual(&cfg.sys, cfg.p, cfg.q, r, d)?;
            let tol = 12.0 * ck(d, &cfg);
            ok &= res <= tol && res < prev;
            worst = worst.max(res / tol);
            prev = res;
        }
    }
    Ok(Outcome::new(
        ok,
        format!("signed-moment identity, worst residual/tol {worst:.3e}, strictly decreasing"),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let mut fails = Vec::new();
    for cfg in sample_configs(SEED, 100) {
        let curve = MomentCurve::new(cfg.sys, cfg.p, cfg.q)?;
        let reg = curve.region();

        let mid = 0.5 * (reg.lo + reg.hi);
        let h = 1e-6;
        let fd = (curve.phi1(mid + h)? - curve.phi1(mid - h)?) / (2.0 * h);
        let exact = curve.phi1_derivative(mid)?;
        if (fd - exact).abs() > 1e-6 * exact.abs() {
            fails.push("derivative");
        }
        if curve.phi1(curve.phi1_root())?.abs() > 1e-12 {
            fails.push("root");
        }
        let grid: Vec<f64> = reg
            .grid(101)
            .into_iter()
            .map(|r| curve.phi1(r))
            .collect::<Result<_>>()?;
        if !(grid.windows(2).all(|w| w[1] < w[0]) && grid.iter().all(|&v| v > 0.0)) {
            fails.push("monotone");
        }
        let w1 = w1_exact(&cfg.sys, cfg.p, cfg.q)?;
        let kr = kr_functional(&cfg.sys, cfg.p, cfg.q, 1.0)?.max(kr_functional(&cfg.sys, cfg.p, cfg.q, -1.0)?);
        if kr != w1 {
            fails.push("duality");
        }
        let edge = phi1(&MomentFormulaInput::new(cfg.sys, cfg.p, cfg.q, cfg.p.min(cfg.q))?);
        if (edge - w1).abs() > 1e-12 {
            fails.push("boundary");
        }
    }
    fails.dedup();
    Ok(Outcome::new(
        fails.is_empty(),
        if fails.is_empty() {
            "derivative, root, monotonicity, duality and boundary checks on 100 configs".to_string()
        } else {
            format!("failed: {}", fails.join(", "))
        },
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut ok, mut margin) = (true, f64::INFINITY);
    for _ in 0..20 {
        let (a, b) = random_discrete_pair(&mut rng, 64)?;
        let plan = monotone_transport(&a, &b)?;
        for rho in [1, 2] {
            let best = plan.cost(rho)?;
            for _ in 0..1000 {
                let cost = random_feasible_coupling_cost(&a, &b, rng.random(), rho)?;
                ok &= cost >= best - 1e-10;
                margin = margin.min(cost - best);
            }
        }
    }
    Ok(Outcome::new(
        ok,
        format!("40000 random couplings, min(cost - monotone) {margin:.3e}"),
    ))
}

#[test]
fn acceptance() {
    let configs = sample_configs(SEED, CONFIGS);
    let results = [
        criterion_1(&configs),
        criterion_2(&configs),
        criterion_3(&configs),
        criterion_4(&configs),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut failed = Vec::new();
    for (i, res) in results.into_iter().enumerate() {
        let n = i + 1;
        let out = res.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let line = format!(
            "[{}] criterion {n}: {}\n",
            if out.passed { "PASS" } else { "FAIL" },
            out.summary
        );
        // Written past the test harness capture so the report shows in every run.
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !out.passed {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
