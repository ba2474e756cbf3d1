use std::process::ExitCode;

use anyhow::{anyhow, bail};
use rayon::prelude::*;
use selfsim_ot::verify::{self, VerifyOptions};
use selfsim_ot::*;

use crate::config::{Command, Format, Params};
use crate::output::{emit, json_bytes, Cell, Table};

/// Default system and weights: `c = 1/2`, `t = (0, 1/2)`, `p = 0.2`, `q = 0.8`.
const DEFAULT_SYSTEM: (f64, f64, f64) = (0.5, 0.0, 0.5);
const DEFAULT_WEIGHTS: (f64, f64) = (0.2, 0.8);
const COUPLING_DEPTH: u32 = 10;
const MARGINAL_DEPTH: u32 = 14;
const SWEEP_R_GRID: usize = 201;
const SWEEP_C_GRID: usize = 50;
const SWEEP_C_RANGE: (f64, f64) = (0.01, 0.5);
const SWEEP_C_WEIGHTS: (f64, f64) = (0.2, 0.9);

pub fn run(command: Command) -> anyhow::Result<ExitCode> {
    let name = command.name();
    match command {
        Command::Moments(p) => single(name, p, moments),
        Command::W1(p) => single(name, p, w1),
        Command::W2Bounds(p) => single(name, p, w2),
        Command::SweepR(p) => single(name, p, sweep_r),
        Command::SweepC(p) => single(name, p, sweep_c),
        Command::Verify(p) => run_verify(p.resolve()?),
    }
}

fn single(name: &str, params: Params, f: fn(&str, &Params) -> anyhow::Result<Table>) -> anyhow::Result<ExitCode> {
    let params = params.resolve()?;
    let table = f(name, &params)?;
    emit(
        &table.render(params.format.unwrap_or(Format::Csv))?,
        params.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

/// Turns a core error into a one-line diagnostic naming the parameter.
fn param_err(e: Error) -> anyhow::Error {
    match e {
        Error::ResourceLimit { .. } => anyhow!("parameter `depth` too large: {e}"),
        _ => anyhow!(e),
    }
}

fn system(p: &Params) -> anyhow::Result<IfsSystem> {
    let (c, t1, t2) = DEFAULT_SYSTEM;
    IfsSystem::new(p.c.unwrap_or(c), p.t1.unwrap_or(t1), p.t2.unwrap_or(t2)).map_err(param_err)
}

fn weights(p: &Params, default: (f64, f64)) -> anyhow::Result<(f64, f64)> {
    let (pw, qw) = (p.p.unwrap_or(default.0), p.q.unwrap_or(default.1));
    coupling_region(pw, qw).map_err(param_err)?;
    Ok((pw, qw))
}

fn ck(sys: &IfsSystem, k: u32) -> f64 {
    sys.c().powi(k as i32)
}

fn sys_fields(sys: &IfsSystem, p: f64, q: f64) -> Vec<(&'static str, Cell)> {
    vec![
        ("c", sys.c().into()),
        ("t1", sys.t1().into()),
        ("t2", sys.t2().into()),
        ("p", p.into()),
        ("q", q.into()),
    ]
}

fn moments(name: &str, params: &Params) -> anyhow::Result<Table> {
    params.reject(
        name,
        &[("grid", params.grid.is_some()), ("configs", params.configs.is_some())],
    )?;
    let sys = system(params)?;
    let (p, q) = weights(params, DEFAULT_WEIGHTS)?;
    let r = params.r.ok_or_else(|| anyhow!("missing required parameter `r`"))?;
    let depth = params.depth.unwrap_or(COUPLING_DEPTH);
    let input = MomentFormulaInput::new(sys, p, q, r).map_err(param_err)?;
    let dc = discretize_coupling(&sys, &CouplingParam::new(p, q, r).map_err(param_err)?, depth).map_err(param_err)?;
    let (f1, f2) = (phi1(&input), phi2(&input));
    let o1 = coupling_moment(&dc, 1).map_err(param_err)?;
    let o2 = coupling_moment(&dc, 2).map_err(param_err)?;
    let mut fields = sys_fields(&sys, p, q);
    fields.extend([
        ("r", input.r().into()),
        ("depth", depth.into()),
        ("phi1", f1.into()),
        ("phi2", f2.into()),
        ("oracle_rho1", o1.into()),
        ("oracle_rho2", o2.into()),
        ("abs_gap_rho1", (o1 - f1).abs().into()),
        ("abs_gap_rho2", (o2 - f2).abs().into()),
        ("tolerance", (2.0 * ck(&sys, depth)).into()),
        ("w1_exact", w1_exact(&sys, p, q).map_err(param_err)?.into()),
        ("boundary", input.on_boundary().into()),
    ]);
    Ok(Table::record(fields))
}

fn marginals(sys: &IfsSystem, p: f64, q: f64, depth: u32) -> anyhow::Result<TransportPlan> {
    let a = discretize_measure(&SelfSimilarMeasure::new(*sys, p).map_err(param_err)?, depth).map_err(param_err)?;
    let b = discretize_measure(&SelfSimilarMeasure::new(*sys, q).map_err(param_err)?, depth).map_err(param_err)?;
    monotone_transport(&a, &b).map_err(param_err)
}

fn w1(name: &str, params: &Params) -> anyhow::Result<Table> {
    params.reject(name, &[("r", params.r.is_some()), ("grid", params.grid.is_some())])?;
    let sys = system(params)?;
    let (p, q) = weights(params, DEFAULT_WEIGHTS)?;
    let depth = params.depth.unwrap_or(MARGINAL_DEPTH);
    let exact = w1_exact(&sys, p, q).map_err(param_err)?;
    let oracle = marginals(&sys, p, q, depth)?.cost_rho1;
    let mut fields = sys_fields(&sys, p, q);
    fields.extend([
        ("depth", depth.into()),
        ("w1_exact", exact.into()),
        ("kr_lower_bound", kr_lower_bound(&sys, p, q).map_err(param_err)?.into()),
        ("oracle_w1", oracle.into()),
        ("abs_gap", (oracle - exact).abs().into()),
        ("tolerance", (2.0 * ck(&sys, depth)).into()),
    ]);
    Ok(Table::record(fields))
}

fn w2(name: &str, params: &Params) -> anyhow::Result<Table> {
    params.reject(name, &[("r", params.r.is_some()), ("grid", params.grid.is_some())])?;
    let sys = system(params)?;
    let (p, q) = weights(params, DEFAULT_WEIGHTS)?;
    let depth = params.depth.unwrap_or(MARGINAL_DEPTH);
    let bounds = w2_bounds(&sys, p, q).map_err(param_err)?;
    let oracle = marginals(&sys, p, q, depth)?.cost_rho2;
    let mut fields = sys_fields(&sys, p, q);
    fields.extend([
        ("depth", depth.into()),
        ("lower", bounds.lower.into()),
        ("upper", bounds.upper.into()),
        ("gap", bounds.gap().into()),
        ("oracle_w2", oracle.into()),
        ("oracle_minus_lower", (oracle - bounds.lower).into()),
        ("upper_minus_oracle", (bounds.upper - oracle).into()),
        ("tolerance", (2.0 * ck(&sys, depth)).into()),
    ]);
    Ok(Table::record(fields))
}

fn sweep_r(name: &str, params: &Params) -> anyhow::Result<Table> {
    params.reject(name, &[("r", params.r.is_some()), ("depth", params.depth.is_some())])?;
    let sys = system(params)?;
    let (p, q) = weights(params, DEFAULT_WEIGHTS)?;
    let n = params.grid.unwrap_or(SWEEP_R_GRID);
    if n < 2 {
        bail!("parameter `grid` must be at least 2, got {n}");
    }
    let curve = MomentCurve::new(sys, p, q).map_err(param_err)?;
    let rows = curve
        .region()
        .grid(n)
        .into_par_iter()
        .map(|r| {
            let input = curve.at(r).map_err(param_err)?;
            Ok(vec![r.into(), phi1(&input).into(), phi2(&input).into()])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(&["r", "phi1", "phi2"]);
    table.rows = rows;
    Ok(table)
}

const REGIMES: [&str; 3] = ["cantor", "close", "mid"];

/// Translations of the three regimes at contraction `c`.
fn regime_systems(c: f64) -> Result<[IfsSystem; 3]> {
    Ok([
        IfsSystem::new(c, 0.0, 1.0 - c)?,
        IfsSystem::new(c, 0.0, c)?,
        IfsSystem::new(c, 0.0, 0.5)?,
    ])
}

fn sweep_c(name: &str, params: &Params) -> anyhow::Result<Table> {
    params.reject(
        name,
        &[
            ("c", params.c.is_some()),
            ("t1", params.t1.is_some()),
            ("t2", params.t2.is_some()),
            ("r", params.r.is_some()),
            ("depth", params.depth.is_some()),
        ],
    )?;
    let (p, q) = weights(params, SWEEP_C_WEIGHTS)?;
    let n = params.grid.unwrap_or(SWEEP_C_GRID);
    if n < 2 {
        bail!("parameter `grid` must be at least 2, got {n}");
    }
    let (lo, hi) = (
        params.c_min.unwrap_or(SWEEP_C_RANGE.0),
        params.c_max.unwrap_or(SWEEP_C_RANGE.1),
    );
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        bail!("parameter `c_min` must be below `c_max`, got {lo} and {hi}");
    }
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let rows: Vec<std::result::Result<Vec<Cell>, String>> = grid
        .into_par_iter()
        .map(|c| {
            let systems = regime_systems(c).map_err(|e| format!("skipping c={c}: {e}"))?;
            let mut row = vec![Cell::Num(c)];
            let mut upper = Vec::new();
            let mut gaps = Vec::new();
            for sys in &systems {
                row.push(w1_exact(sys, p, q).map_err(|e| e.to_string())?.into());
                let b = w2_bounds(sys, p, q).map_err(|e| e.to_string())?;
                upper.push(b.upper.into());
                gaps.push(b.gap().into());
            }
            row.extend(upper);
            row.extend(gaps);
            Ok(row)
        })
        .collect();
    let mut columns = vec!["c".to_string()];
    for prefix in ["w1", "w2u", "w2gap"] {
        columns.extend(REGIMES.iter().map(|r| format!("{prefix}_{r}")));
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
        single: false,
    };
    for row in rows {
        match row {
            Ok(row) => table.rows.push(row),
            Err(warning) => eprintln!("warning: {warning}"),
        }
    }
    Ok(table)
}

fn run_verify(params: Params) -> anyhow::Result<ExitCode> {
    params.reject(
        "verify",
        &[
            ("c", params.c.is_some()),
            ("t1", params.t1.is_some()),
            ("t2", params.t2.is_some()),
            ("p", params.p.is_some()),
            ("q", params.q.is_some()),
            ("r", params.r.is_some()),
            ("grid", params.grid.is_some()),
        ],
    )?;
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        depth: params.depth.unwrap_or(defaults.depth),
        configs: params.configs.unwrap_or(defaults.configs),
        seed: params.seed.unwrap_or(defaults.seed),
    };
    let checks = verify::run(&opts).map_err(param_err)?;
    let passed = checks.iter().all(|c| c.passed);
    let bytes = match params.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&serde_json::json!({
            "passed": passed,
            "depth": opts.depth,
            "configs": opts.configs,
            "seed": opts.seed,
            "checks": checks,
        }))?,
        Format::Csv => {
            let mut table = Table::new(&["name", "passed", "measured", "tolerance", "detail"]);
            table.rows = checks
                .iter()
                .map(|c| {
                    vec![
                        Cell::Text(c.name.clone()),
                        c.passed.into(),
                        c.measured.into(),
                        c.tolerance.into(),
                        Cell::Text(c.detail.clone()),
                    ]
                })
                .collect();
            table.to_csv()?
        }
    };
    emit(&bytes, params.out.as_deref())?;
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        eprintln!("verification failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
