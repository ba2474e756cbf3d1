//! Parameter space of the two-map equicontractive IFS on `[0, 1]`.
//!
//! The system is `S_1(x) = c x + t1`, `S_2(x) = c x + t2` with `0 < c <= 1/2`,
//! `0 <= t1 <= 1 - 2c` and `t1 + c <= t2 <= 1 - c`. These ranges make the two
//! images of `[0, 1]` sit inside `[0, 1]` with `S_1([0,1])` to the left of
//! `S_2([0,1])`, touching in at most one point, so the open set condition holds
//! with the open unit interval.
//!
//! Self-similar couplings of `mu_p` and `mu_q` use the four product maps
//! `S_{i,j}(x, y) = (S_i(x), S_j(y))` in the order `(1,1), (1,2), (2,1), (2,2)`
//! with probability vector `(r, p - r, q - r, 1 - p - q + r)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack for comparisons against bounds that are themselves computed in
/// floating point (e.g. `t2 = 1 - c`, `r = p + q - 1`).
pub const BOUND_SLACK: f64 = 1e-12;

/// Validated parameters `(c, t1, t2)` of the two-map IFS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfsSystem {
    c: f64,
    t1: f64,
    t2: f64,
}

impl IfsSystem {
    /// Validates `(c, t1, t2)`.
    pub fn new(c: f64, t1: f64, t2: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0 && c <= 0.5) {
            return Err(Error::out_of_range("c", c, "0 < c <= 1/2"));
        }
        if !(t1.is_finite() && t1 >= -BOUND_SLACK && t1 <= 1.0 - 2.0 * c + BOUND_SLACK) {
            return Err(Error::out_of_range(
                "t1",
                t1,
                format!("0 <= t1 <= 1 - 2c = {}", 1.0 - 2.0 * c),
            ));
        }
        if !(t2.is_finite() && t2 >= t1 + c - BOUND_SLACK && t2 <= 1.0 - c + BOUND_SLACK) {
            return Err(Error::out_of_range(
                "t2",
                t2,
                format!("t1 + c = {} <= t2 <= 1 - c = {}", t1 + c, 1.0 - c),
            ));
        }
        Ok(Self { c, t1, t2 })
    }

    /// Middle-`(1 - 2c)` Cantor set: `t1 = 0`, `t2 = 1 - c`.
    pub fn cantor(c: f64) -> Result<Self> {
        Self::new(c, 0.0, 1.0 - c)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Gap between the translations, `t2 - t1`.
    pub fn spread(&self) -> f64 {
        self.t2 - self.t1
    }

    /// The common prefactor `(t2 - t1) / (1 - c)` of every closed form.
    pub fn scale(&self) -> f64 {
        (self.t2 - self.t1) / (1.0 - self.c)
    }

    /// Applies `S_1` (`index == 0`) or `S_2` (`index == 1`).
    #[inline]
    pub fn apply(&self, index: usize, x: f64) -> f64 {
        let t = if index == 0 { self.t1 } else { self.t2 };
        self.c * x + t
    }
}

/// Alias of [`IfsSystem::new`].
pub fn validate_system(c: f64, t1: f64, t2: f64) -> Result<IfsSystem> {
    IfsSystem::new(c, t1, t2)
}

/// Checks that a probability weight lies in the open interval `(0, 1)`.
pub fn check_weight(name: &'static str, w: f64) -> Result<f64> {
    if w.is_finite() && w > 0.0 && w < 1.0 {
        Ok(w)
    } else {
        Err(Error::out_of_range(name, w, "0 < weight < 1"))
    }
}

/// Self-similar measure `mu_p`: weight `p` on `S_1` and `1 - p` on `S_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarMeasure {
    system: IfsSystem,
    p: f64,
}

impl SelfSimilarMeasure {
    pub fn new(system: IfsSystem, p: f64) -> Result<Self> {
        Ok(Self {
            system,
            p: check_weight("p", p)?,
        })
    }

    pub fn system(&self) -> &IfsSystem {
        &self.system
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `(p, 1 - p)`.
    pub fn weights(&self) -> [f64; 2] {
        [self.p, 1.0 - self.p]
    }
}

/// Closed interval of admissible coupling parameters for `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingRegion {
    pub lo: f64,
    pub hi: f64,
}

impl CouplingRegion {
    /// Membership in the closed interval, with [`BOUND_SLACK`] tolerance.
    pub fn contains(&self, r: f64) -> bool {
        r.is_finite() && r >= self.lo - BOUND_SLACK && r <= self.hi + BOUND_SLACK
    }

    /// Membership in the open interval (the region the coupling family is defined on).
    pub fn contains_open(&self, r: f64) -> bool {
        r > self.lo && r < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n >= 2` uniformly spaced points from `lo` to `hi` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.lo, self.hi, n)
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * (i as f64) / last
                    }
                })
                .collect()
        }
    }
}

/// `(max{0, p + q - 1}, min{p, q})`.
pub fn coupling_region(p: f64, q: f64) -> Result<CouplingRegion> {
    let p = check_weight("p", p)?;
    let q = check_weight("q", q)?;
    Ok(CouplingRegion {
        lo: (p + q - 1.0).max(0.0),
        hi: p.min(q),
    })
}

/// Coupling parameter `r` for the pair `(mu_p, mu_q)`, on the closed region.
///
/// Values within [`BOUND_SLACK`] of an endpoint are snapped onto it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParam {
    p: f64,
    q: f64,
    r: f64,
}

impl CouplingParam {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        let region = coupling_region(p, q)?;
        if !region.contains(r) {
            return Err(Error::OutOfRegion {
                r,
                lo: region.lo,
                hi: region.hi,
            });
        }
        Ok(Self {
            p,
            q,
            r: r.clamp(region.lo, region.hi),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn region(&self) -> CouplingRegion {
        CouplingRegion {
            lo: (self.p + self.q - 1.0).max(0.0),
            hi: self.p.min(self.q),
        }
    }

    /// Weights of `S_{1,1}, S_{1,2}, S_{2,1}, S_{2,2}`.
    ///
    /// Rounding residue at the region endpoints (|entry| below the slack) is
    /// clamped to zero so every entry is nonnegative.
    pub fn probability_vector(&self) -> [f64; 4] {
        let (p, q, r) = (self.p, self.q, self.r);
        let clamp = |v: f64| if v < 0.0 && v > -BOUND_SLACK { 0.0 } else { v };
        [clamp(r), clamp(p - r), clamp(q - r), clamp(1.0 - p - q + r)]
    }
}
