//! Brute-force transport oracle on discretized measures.
//!
//! Everything here works on atoms only and never looks at the closed forms,
//! so it can be used to check them. On the line the monotone (quantile)
//! coupling is optimal for every convex cost of `|x - y|`, which makes
//! [`monotone_transport`] an exact `W_1`/`W_2` solver for discrete measures.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closed_form::MomentFormulaInput;
use crate::discrete::{discretize_coupling, Atom, DiscreteCoupling, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::ifs::{CouplingParam, IfsSystem};
use crate::sum::{pairwise, par_map_sum};

/// Allowed deviation of a total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

fn check_normalized(total: f64) -> Result<()> {
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        Err(Error::NotNormalized { sum: total })
    } else {
        Ok(())
    }
}

fn check_rho(rho: u32) -> Result<()> {
    if rho == 1 || rho == 2 {
        Ok(())
    } else {
        Err(Error::out_of_range("rho", rho as f64, "rho in {1, 2}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// A coupling of two discrete measures given as a sparse list of transfers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub pairs: Vec<PlanEntry>,
    /// `sum mass * |x - y|`
    pub cost_rho1: f64,
    /// `(sum mass * |x - y|^2)^{1/2}`
    pub cost_rho2: f64,
}

impl TransportPlan {
    fn from_pairs(a: &[Atom], b: &[Atom], pairs: Vec<PlanEntry>) -> Self {
        let dist = |e: &PlanEntry| (a[e.source].position - b[e.target].position).abs();
        let cost_rho1 = pairwise(pairs.iter().map(|e| e.mass * dist(e)));
        let cost_rho2 = pairwise(pairs.iter().map(|e| e.mass * dist(e) * dist(e))).sqrt();
        Self {
            pairs,
            cost_rho1,
            cost_rho2,
        }
    }

    pub fn cost(&self, rho: u32) -> Result<f64> {
        check_rho(rho)?;
        Ok(if rho == 1 { self.cost_rho1 } else { self.cost_rho2 })
    }

    /// Mass leaving each source atom.
    pub fn row_sums(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for e in &self.pairs {
            out[e.source] += e.mass;
        }
        out
    }

    /// Mass arriving at each target atom.
    pub fn column_sums(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for e in &self.pairs {
            out[e.target] += e.mass;
        }
        out
    }
}

/// North-west corner rule: walk both atom lists in the given orders, moving
/// as much mass as possible between the current pair before advancing.
///
/// An atom is exhausted once its remaining mass hits exactly zero; the
/// smaller of the two remainders always does, since `x - x == 0` in floating
/// point. Whatever is left on one side when the other runs out is rounding
/// residue and is dropped.
fn northwest_corner(a: &[Atom], b: &[Atom], order_a: &[usize], order_b: &[usize]) -> Vec<PlanEntry> {
    let mut pairs = Vec::with_capacity(order_a.len() + order_b.len());
    let (mut i, mut j) = (0, 0);
    let mut rest_a = order_a.first().map_or(0.0, |&k| a[k].weight);
    let mut rest_b = order_b.first().map_or(0.0, |&k| b[k].weight);
    while i < order_a.len() && j < order_b.len() {
        let moved = rest_a.min(rest_b);
        if moved > 0.0 {
            pairs.push(PlanEntry {
                source: order_a[i],
                target: order_b[j],
                mass: moved,
            });
        }
        rest_a -= moved;
        rest_b -= moved;
        if rest_a <= 0.0 {
            i += 1;
            rest_a = order_a.get(i).map_or(0.0, |&k| a[k].weight);
        }
        if rest_b <= 0.0 {
            j += 1;
            rest_b = order_b.get(j).map_or(0.0, |&k| b[k].weight);
        }
    }
    pairs
}

/// Optimal coupling of two discrete measures on the line: the quantile
/// (monotone rearrangement) coupling.
pub fn monotone_transport(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<TransportPlan> {
    check_normalized(a.total_mass())?;
    check_normalized(b.total_mass())?;
    let order_a: Vec<usize> = (0..a.len()).collect();
    let order_b: Vec<usize> = (0..b.len()).collect();
    let pairs = northwest_corner(a.atoms(), b.atoms(), &order_a, &order_b);
    Ok(TransportPlan::from_pairs(a.atoms(), b.atoms(), pairs))
}

/// Cost of the north-west-corner coupling for explicit atom visiting orders.
///
/// Any pair of orders yields a feasible coupling; the identity orders on
/// sorted atoms reproduce [`monotone_transport`].
pub fn greedy_coupling_cost(
    a: &DiscreteMeasure,
    b: &DiscreteMeasure,
    order_a: &[usize],
    order_b: &[usize],
    rho: u32,
) -> Result<f64> {
    check_rho(rho)?;
    check_normalized(a.total_mass())?;
    check_normalized(b.total_mass())?;
    for (order, n, name) in [(order_a, a.len(), "order_a"), (order_b, b.len(), "order_b")] {
        let mut seen = vec![false; n];
        let is_perm = order.len() == n && order.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true));
        if !is_perm {
            return Err(Error::DegenerateInput(format!("{name} is not a permutation of 0..{n}")));
        }
    }
    let pairs = northwest_corner(a.atoms(), b.atoms(), order_a, order_b);
    TransportPlan::from_pairs(a.atoms(), b.atoms(), pairs).cost(rho)
}

/// Cost of a feasible (generally suboptimal) coupling built greedily over a
/// seeded random permutation of each measure's atoms.
pub fn random_feasible_coupling_cost(a: &DiscreteMeasure, b: &DiscreteMeasure, seed: u64, rho: u32) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order_a: Vec<usize> = (0..a.len()).collect();
    let mut order_b: Vec<usize> = (0..b.len()).collect();
    order_a.shuffle(&mut rng);
    order_b.shuffle(&mut rng);
    greedy_coupling_cost(a, b, &order_a, &order_b, rho)
}

/// `(sum weight * |x - y|^rho)^{1/rho}` over the coupling atoms, `rho in {1, 2}`.
pub fn coupling_moment(dc: &DiscreteCoupling, rho: u32) -> Result<f64> {
    check_rho(rho)?;
    check_normalized(dc.total_mass())?;
    Ok(match rho {
        1 => par_map_sum(dc.atoms(), |a| a.weight * (a.x - a.y).abs()),
        _ => par_map_sum(dc.atoms(), |a| a.weight * (a.x - a.y) * (a.x - a.y)).sqrt(),
    })
}

/// `sum weight * (x - y)` over the coupling atoms.
pub fn signed_moment(dc: &DiscreteCoupling) -> Result<f64> {
    check_normalized(dc.total_mass())?;
    Ok(par_map_sum(dc.atoms(), |a| a.weight * (a.x - a.y)))
}

/// Both sides of the identity
///
/// ```text
/// int (x - y) d gamma_r = 4 (t2 - t1)(q - r)(p - r) / ((p - q)(1 - c + c (p + q - 2r)))
///                         - ((p + q - 2r) / (p - q)) int |x - y| d gamma_r
/// ```
///
/// with both integrals replaced by sums over a depth-`depth` discretization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedMomentCheck {
    pub signed_moment: f64,
    pub first_moment: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn techlem_check(sys: &IfsSystem, p: f64, q: f64, r: f64, depth: u32) -> Result<SignedMomentCheck> {
    let input = MomentFormulaInput::new(*sys, p, q, r)?;
    let r = input.r();
    if p == q {
        return Err(Error::DegenerateInput(
            "identity divides by p - q; p must differ from q".into(),
        ));
    }
    let cp = CouplingParam::new(p, q, r)?;
    let dc = discretize_coupling(sys, &cp, depth)?;
    let signed = signed_moment(&dc)?;
    let first = coupling_moment(&dc, 1)?;
    let c = sys.c();
    let excess = p + q - 2.0 * r;
    let rhs = 4.0 * sys.spread() * (q - r) * (p - r) / ((p - q) * (1.0 - c + c * excess)) - excess / (p - q) * first;
    Ok(SignedMomentCheck {
        signed_moment: signed,
        first_moment: first,
        rhs,
        residual: (signed - rhs).abs(),
    })
}

/// `|signed moment - rhs|` of [`techlem_check`].
pub fn techlem_residual(sys: &IfsSystem, p: f64, q: f64, r: f64, depth: u32) -> Result<f64> {
    Ok(techlem_check(sys, p, q, r, depth)?.residual)
}
