//! Cross-checks between the closed forms and the brute-force oracle.
//!
//! [`run`] evaluates every check on seeded random configurations and returns
//! one [`CheckResult`] per property. Tolerances scale with the discretization
//! depth `k` as multiples of `c^k`, so shallow runs use proportionally looser
//! bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closed_form;
use crate::closed_form::{
    general_lower_bound, kr_lower_bound, w1_exact, w2_bounds, GeneralIfsSpec, MomentCurve, MomentFormulaInput,
};
use crate::discrete::{discretize_coupling, discretize_measure, DiscreteMeasure};
use crate::error::Result;
use crate::ifs::{CouplingParam, IfsSystem, SelfSimilarMeasure};
use crate::oracle::{coupling_moment, monotone_transport, random_feasible_coupling_cost, techlem_residual};

/// Contraction ratios of random configurations are drawn from this range.
///
/// Below it, `c^14` tolerances on depth-14 marginals fall under the rounding
/// noise of double precision sums.
pub const SAMPLE_C_RANGE: (f64, f64) = (0.2, 0.5);
/// Range of the weights `p`, `q` of random configurations.
pub const SAMPLE_WEIGHT_RANGE: (f64, f64) = (0.05, 0.95);

/// A random valid `(sys, p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub sys: IfsSystem,
    pub p: f64,
    pub q: f64,
}

impl RandomConfig {
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let c = rng.random_range(SAMPLE_C_RANGE.0..=SAMPLE_C_RANGE.1);
        let t1 = rng.random_range(0.0..=(1.0 - 2.0 * c));
        let t2 = rng.random_range((t1 + c)..=(1.0 - c));
        let sys = IfsSystem::new(c, t1, t2).expect("sampled inside the valid ranges");
        let p = rng.random_range(SAMPLE_WEIGHT_RANGE.0..SAMPLE_WEIGHT_RANGE.1);
        let q = rng.random_range(SAMPLE_WEIGHT_RANGE.0..SAMPLE_WEIGHT_RANGE.1);
        Self { sys, p, q }
    }

    /// Sample with `|p - q| >= min_gap`.
    pub fn sample_separated<R: Rng>(rng: &mut R, min_gap: f64) -> Self {
        loop {
            let cfg = Self::sample(rng);
            if (cfg.p - cfg.q).abs() >= min_gap {
                return cfg;
            }
        }
    }

    pub fn curve(&self) -> MomentCurve {
        MomentCurve::new(self.sys, self.p, self.q).expect("sampled weights are valid")
    }

    /// `n` evenly spaced interior points of the open coupling region.
    pub fn interior_r(&self, n: usize) -> Vec<f64> {
        let reg = self.curve().region();
        (1..=n)
            .map(|i| reg.lo + reg.width() * i as f64 / (n + 1) as f64)
            .collect()
    }

    pub fn marginals(&self, depth: u32) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
        let a = discretize_measure(&SelfSimilarMeasure::new(self.sys, self.p)?, depth)?;
        let b = discretize_measure(&SelfSimilarMeasure::new(self.sys, self.q)?, depth)?;
        Ok((a, b))
    }
}

/// Draws `n` configurations from a seeded stream.
pub fn sample_configs(seed: u64, n: usize) -> Vec<RandomConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| RandomConfig::sample(&mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Depth of coupling discretizations; marginals use `depth + 4`.
    pub depth: u32,
    pub configs: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            depth: 10,
            configs: 50,
            seed: 42,
        }
    }
}

impl VerifyOptions {
    pub fn marginal_depth(&self) -> u32 {
        self.depth + 4
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed gap (at the configuration with the largest gap/tolerance ratio).
    pub measured: f64,
    /// Tolerance that applied to `measured`.
    pub tolerance: f64,
    pub detail: String,
}

/// Keeps the worst `gap / tolerance` ratio seen so far.
#[derive(Debug, Default)]
struct Worst {
    ratio: f64,
    gap: f64,
    tol: f64,
    failures: usize,
    detail: String,
}

impl Worst {
    fn observe(&mut self, gap: f64, tol: f64, detail: impl FnOnce() -> String) {
        let ratio = if tol > 0.0 {
            gap / tol
        } else if gap > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        // NaN gaps count as failures.
        let within = gap <= tol;
        if !within {
            self.failures += 1;
        }
        if ratio > self.ratio || self.detail.is_empty() {
            self.ratio = ratio;
            self.gap = gap;
            self.tol = tol;
            self.detail = detail();
        }
    }

    fn finish(self, name: &str) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: self.failures == 0,
            measured: self.gap,
            tolerance: self.tol,
            detail: if self.failures == 0 {
                format!("worst at {}", self.detail)
            } else {
                format!("{} failures; worst at {}", self.failures, self.detail)
            },
        }
    }
}

/// Runs the full suite.
pub fn run(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let configs = sample_configs(opts.seed, opts.configs);
    let mut out = vec![
        first_moment(opts, &configs)?,
        second_moment(opts, &configs)?,
        exact_w1(opts, &configs)?,
        w2_sandwich(opts, &configs)?,
        c_independence()?,
        linear_bound_counterexample(opts)?,
        signed_moment_identity(opts)?,
    ];
    out.extend(analytic_features(opts)?);
    out.push(optimality_witness(opts)?);
    Ok(out)
}

fn first_moment(opts: &VerifyOptions, configs: &[RandomConfig]) -> Result<CheckResult> {
    let k = opts.depth;
    let mut worst = Worst::default();
    for cfg in configs {
        for r in cfg.interior_r(5) {
            let dc = discretize_coupling(&cfg.sys, &CouplingParam::new(cfg.p, cfg.q, r)?, k)?;
            let formula = closed_form::phi1(&MomentFormulaInput::new(cfg.sys, cfg.p, cfg.q, r)?);
            let gap = (coupling_moment(&dc, 1)? - formula).abs();
            worst.observe(gap, 3.0 * cfg.sys.c().powi(k as i32), || format!("{cfg:?} r={r}"));
        }
    }
    Ok(worst.finish("first_moment_formula"))
}

fn second_moment(opts: &VerifyOptions, configs: &[RandomConfig]) -> Result<CheckResult> {
    let k = opts.depth.saturating_sub(1);
    let mut worst = Worst::default();
    for cfg in configs {
        for r in cfg.interior_r(5) {
            let dc = discretize_coupling(&cfg.sys, &CouplingParam::new(cfg.p, cfg.q, r)?, k)?;
            let formula = closed_form::phi2(&MomentFormulaInput::new(cfg.sys, cfg.p, cfg.q, r)?);
            let gap = (coupling_moment(&dc, 2)?.powi(2) - formula * formula).abs();
            worst.observe(gap, 6.0 * cfg.sys.c().powi(k as i32), || format!("{cfg:?} r={r}"));
        }
    }
    Ok(worst.finish("second_moment_formula"))
}

fn exact_w1(opts: &VerifyOptions, configs: &[RandomConfig]) -> Result<CheckResult> {
    let k = opts.marginal_depth();
    let mut worst = Worst::default();
    let half = RandomConfig {
        sys: IfsSystem::new(0.5, 0.0, 0.5)?,
        p: 0.2,
        q: 0.8,
    };
    let w1 = w1_exact(&half.sys, half.p, half.q)?;
    worst.observe((w1 - 0.6).abs(), 2.0 * f64::EPSILON, || "reference closed form".into());
    for cfg in std::iter::once(&half).chain(configs) {
        let (a, b) = cfg.marginals(k)?;
        let plan = monotone_transport(&a, &b)?;
        let gap = (plan.cost_rho1 - w1_exact(&cfg.sys, cfg.p, cfg.q)?).abs();
        worst.observe(gap, 3.0 * cfg.sys.c().powi(k as i32), || format!("{cfg:?}"));
    }
    Ok(worst.finish("exact_w1"))
}

fn w2_sandwich(opts: &VerifyOptions, configs: &[RandomConfig]) -> Result<CheckResult> {
    let k = opts.marginal_depth();
    let mut worst = Worst::default();
    let (mut min_lower_gap, mut min_upper_gap) = (f64::INFINITY, f64::INFINITY);
    for cfg in configs {
        let (a, b) = cfg.marginals(k)?;
        let w2 = monotone_transport(&a, &b)?.cost_rho2;
        let bounds = w2_bounds(&cfg.sys, cfg.p, cfg.q)?;
        min_lower_gap = min_lower_gap.min(w2 - bounds.lower);
        min_upper_gap = min_upper_gap.min(bounds.upper - w2);
        let violation = (bounds.lower - w2).max(w2 - bounds.upper).max(0.0);
        worst.observe(violation, 3.0 * cfg.sys.c().powi(k as i32), || {
            format!("{cfg:?} w2={w2}")
        });
    }
    let mut res = worst.finish("w2_sandwich");
    res.detail = format!(
        "{}; smallest oracle-lower gap {min_lower_gap:e}, smallest upper-oracle gap {min_upper_gap:e}",
        res.detail
    );
    Ok(res)
}

fn c_independence() -> Result<CheckResult> {
    let (p, q) = (0.2, 0.9);
    let mut worst = Worst::default();
    let mut prev_close = f64::NEG_INFINITY;
    for k in 1..=10 {
        let c = k as f64 / 20.0;
        let cantor = w1_exact(&IfsSystem::cantor(c)?, p, q)?;
        worst.observe((cantor - 0.7).abs(), f64::EPSILON, || format!("cantor c={c}"));
        let close = w1_exact(&IfsSystem::new(c, 0.0, c)?, p, q)?;
        let increasing = close > prev_close;
        let below = k == 10 || close < 0.7;
        worst.observe(if increasing && below { 0.0 } else { 1.0 }, 0.0, || {
            format!("close regime c={c} value={close} previous={prev_close}")
        });
        prev_close = close;
    }
    Ok(worst.finish("cantor_c_independence"))
}

/// Depth-`depth` atoms of an `N`-map IFS, used only by the counterexample check.
fn expand_general(maps: &[(f64, f64)], weights: &[f64], depth: u32) -> Result<DiscreteMeasure> {
    let mut atoms = vec![(0.5, 1.0)];
    for _ in 0..depth {
        atoms = maps
            .iter()
            .zip(weights)
            .flat_map(|(&(c, t), &w)| atoms.iter().map(move |&(x, m)| (c * x + t, w * m)))
            .collect();
    }
    DiscreteMeasure::from_atoms(atoms)
}

fn linear_bound_counterexample(opts: &VerifyOptions) -> Result<CheckResult> {
    let depth = opts.depth.saturating_sub(1);
    let (p, q) = (vec![0.4, 0.5, 0.1], vec![0.6, 0.1, 0.3]);
    let mut worst = Worst::default();
    let mut min_oracle = f64::INFINITY;
    for c in [0.05, 0.15, 0.25] {
        let maps = vec![(c, 0.0), (c, c), (c, 2.0 * c)];
        let spec = GeneralIfsSpec::new(maps.clone(), p.clone(), q.clone())?;
        let bound = general_lower_bound(&spec)?;
        worst.observe(bound.abs(), 1e-14, || format!("lower bound at c={c}"));
        let w1 = monotone_transport(&expand_general(&maps, &p, depth)?, &expand_general(&maps, &q, depth)?)?.cost_rho1;
        min_oracle = min_oracle.min(w1);
        worst.observe(if w1 > 0.0 { 0.0 } else { 1.0 }, 0.0, || {
            format!("oracle W1 at c={c} = {w1}")
        });
    }
    let mut res = worst.finish("linear_bound_counterexample");
    res.detail = format!("{}; smallest oracle W1 {min_oracle:e}", res.detail);
    Ok(res)
}

fn signed_moment_identity(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut depths: Vec<u32> = [4, 2, 0]
        .iter()
        .filter_map(|&off| opts.depth.checked_sub(off))
        .collect();
    depths.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(7));
    let mut worst = Worst::default();
    for _ in 0..20 {
        let cfg = RandomConfig::sample_separated(&mut rng, 0.1);
        let reg = cfg.curve().region();
        let r = reg.lo + reg.width() * rng.random_range(0.25..0.75);
        let mut prev = f64::INFINITY;
        for &d in &depths {
            let res = techlem_residual(&cfg.sys, cfg.p, cfg.q, r, d)?;
            worst.observe(res, 12.0 * cfg.sys.c().powi(d as i32), || {
                format!("{cfg:?} r={r} depth={d}")
            });
            worst.observe(if res < prev { 0.0 } else { 1.0 }, 0.0, || {
                format!("{cfg:?} r={r}: residual {res:e} at depth {d} not below {prev:e}")
            });
            prev = res;
        }
    }
    Ok(worst.finish("signed_moment_identity"))
}

fn analytic_features(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let configs = sample_configs(opts.seed.wrapping_add(13), 100);
    let mut derivative = Worst::default();
    let mut root = Worst::default();
    let mut shape = Worst::default();
    let mut duality = Worst::default();
    let mut boundary = Worst::default();
    for cfg in &configs {
        let curve = cfg.curve();
        let reg = curve.region();
        let sys = &cfg.sys;

        let mid = 0.5 * (reg.lo + reg.hi);
        let h = 1e-6;
        let fd = (curve.phi1(mid + h)? - curve.phi1(mid - h)?) / (2.0 * h);
        let exact = curve.phi1_derivative(mid)?;
        derivative.observe((fd - exact).abs(), 1e-6 * exact.abs(), || format!("{cfg:?}"));

        root.observe(curve.phi1(curve.phi1_root())?.abs(), 1e-12, || format!("{cfg:?}"));

        let values: Vec<f64> = reg
            .grid(101)
            .into_iter()
            .map(|r| curve.phi1(r))
            .collect::<Result<_>>()?;
        let ok = values.windows(2).all(|w| w[1] < w[0]) && values.iter().all(|&v| v > 0.0);
        shape.observe(if ok { 0.0 } else { 1.0 }, 0.0, || format!("{cfg:?}"));

        let w1 = w1_exact(sys, cfg.p, cfg.q)?;
        duality.observe((kr_lower_bound(sys, cfg.p, cfg.q)? - w1).abs(), 0.0, || {
            format!("{cfg:?}")
        });

        let at_hi = closed_form::phi1(&curve.at(reg.hi)?);
        boundary.observe((at_hi - w1).abs(), 1e-12, || format!("{cfg:?}"));
    }
    Ok(vec![
        derivative.finish("phi1_derivative_finite_difference"),
        root.finish("phi1_root"),
        shape.finish("phi1_decreasing_positive"),
        duality.finish("duality_gap_closes"),
        boundary.finish("boundary_identity"),
    ])
}

/// Random discrete pair with at most `max_atoms` atoms per side.
pub fn random_discrete_pair<R: Rng>(rng: &mut R, max_atoms: usize) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    let one = |rng: &mut R| -> Result<DiscreteMeasure> {
        let n = rng.random_range(1..=max_atoms);
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(0.0..=1.0), rng.random_range(0.01..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|a| a.1).sum();
        DiscreteMeasure::from_atoms(raw.into_iter().map(|(x, w)| (x, w / total)))
    };
    Ok((one(rng)?, one(rng)?))
}

fn optimality_witness(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(29));
    let mut worst = Worst::default();
    for pair in 0..20 {
        let (a, b) = random_discrete_pair(&mut rng, 64)?;
        let plan = monotone_transport(&a, &b)?;
        for rho in [1, 2] {
            let best = plan.cost(rho)?;
            for trial in 0..1000u64 {
                let seed = opts.seed ^ ((pair as u64) << 32) ^ trial;
                let cost = random_feasible_coupling_cost(&a, &b, seed, rho)?;
                worst.observe((best - cost).max(0.0), 1e-10, || {
                    format!("pair {pair} rho={rho} seed={seed}")
                });
            }
        }
    }
    Ok(worst.finish("monotone_optimality_witness"))
}
