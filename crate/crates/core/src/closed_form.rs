//! Closed-form moment integrals of self-similar couplings and the Wasserstein
//! quantities derived from them.
//!
//! For fixed `(c, t1, t2, p, q)` write `a(r) = p + q - 2r`, `d = p - q` and
//! `s = (t2 - t1) / (1 - c)`. Then
//!
//! ```text
//! phi1(r)   = s * (c d^2 + (1 - c) a) / ((1 - c) + c a)
//! phi2(r)^2 = s^2 * (2 c d^2 + (1 - c) a) / (1 + c)
//! ```
//!
//! are the first moment and the squared root-second-moment of `|x - y|` under
//! `gamma_r`. Both decrease in `r`, so their infima over the coupling region are
//! attained at `r = min{p, q}`; for the first moment that infimum is the exact
//! `W_1(mu_p, mu_q) = s |p - q|`, matched from below by the linear test
//! functions `x -> lambda x`.
//!
//! [`MomentCurve`] evaluates the formulas as functions of `r` on the whole real
//! line (pole and roots included). [`MomentFormulaInput`] pins `r` to the closed
//! coupling region, where every formula is finite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{check_weight, CouplingRegion, IfsSystem, SelfSimilarMeasure, BOUND_SLACK};

/// Distance from the pole below which `phi1` refuses to evaluate.
pub const POLE_GUARD: f64 = 1e-12;

fn check_ratio(c: f64) -> Result<f64> {
    if c.is_finite() && c > 0.0 && c <= 0.5 {
        Ok(c)
    } else {
        Err(Error::out_of_range("c", c, "0 < c <= 1/2"))
    }
}

/// Location of the simple pole of `phi1`: `(p + q)/2 + (1 - c)/(2c)`.
pub fn phi1_pole(p: f64, q: f64, c: f64) -> Result<f64> {
    let (p, q, c) = (check_weight("p", p)?, check_weight("q", q)?, check_ratio(c)?);
    Ok(0.5 * (p + q) + (1.0 - c) / (2.0 * c))
}

/// Root of `phi1`: `(p + q)/2 + c (p - q)^2 / (2 (1 - c))`.
pub fn phi1_root(p: f64, q: f64, c: f64) -> Result<f64> {
    let (p, q, c) = (check_weight("p", p)?, check_weight("q", q)?, check_ratio(c)?);
    let d = p - q;
    Ok(0.5 * (p + q) + c * d * d / (2.0 * (1.0 - c)))
}

/// Root of `phi2`: `(p + q)/2 + c (p - q)^2 / (1 - c)`. `phi2` is undefined to its right.
pub fn phi2_root(p: f64, q: f64, c: f64) -> Result<f64> {
    let (p, q, c) = (check_weight("p", p)?, check_weight("q", q)?, check_ratio(c)?);
    let d = p - q;
    Ok(0.5 * (p + q) + c * d * d / (1.0 - c))
}

/// Derivative of `phi2^2` in `r`, which is the constant `-2 (t2 - t1)^2 / (1 - c^2)`.
pub fn phi2_squared_slope(sys: &IfsSystem) -> f64 {
    let c = sys.c();
    let spread = sys.spread();
    -2.0 * spread * spread / (1.0 - c * c)
}

/// The moment formulas of one pair `(mu_p, mu_q)` as functions of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCurve {
    sys: IfsSystem,
    p: f64,
    q: f64,
}

impl MomentCurve {
    pub fn new(sys: IfsSystem, p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            sys,
            p: check_weight("p", p)?,
            q: check_weight("q", q)?,
        })
    }

    pub fn system(&self) -> &IfsSystem {
        &self.sys
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn region(&self) -> CouplingRegion {
        CouplingRegion {
            lo: (self.p + self.q - 1.0).max(0.0),
            hi: self.p.min(self.q),
        }
    }

    pub fn pole(&self) -> f64 {
        0.5 * (self.p + self.q) + (1.0 - self.sys.c()) / (2.0 * self.sys.c())
    }

    pub fn phi1_root(&self) -> f64 {
        let c = self.sys.c();
        let d = self.p - self.q;
        0.5 * (self.p + self.q) + c * d * d / (2.0 * (1.0 - c))
    }

    pub fn phi2_root(&self) -> f64 {
        let c = self.sys.c();
        let d = self.p - self.q;
        0.5 * (self.p + self.q) + c * d * d / (1.0 - c)
    }

    fn excess(&self, r: f64) -> f64 {
        self.p + self.q - 2.0 * r
    }

    fn guard_pole(&self, r: f64) -> Result<()> {
        let pole = self.pole();
        if (r - pole).abs() <= POLE_GUARD {
            Err(Error::PoleEvaluation { pole })
        } else {
            Ok(())
        }
    }

    /// First moment formula at any `r` away from the pole.
    pub fn phi1(&self, r: f64) -> Result<f64> {
        self.guard_pole(r)?;
        let c = self.sys.c();
        let d = self.p - self.q;
        let a = self.excess(r);
        Ok(self.sys.scale() * (c * d * d + (1.0 - c) * a) / ((1.0 - c) + c * a))
    }

    /// `d phi1 / dr = 2 (t2 - t1) (c^2 d^2 - (1 - c)^2) / ((1 - c) (1 - c + c a)^2)`.
    pub fn phi1_derivative(&self, r: f64) -> Result<f64> {
        self.guard_pole(r)?;
        let c = self.sys.c();
        let d = self.p - self.q;
        let den = (1.0 - c) + c * self.excess(r);
        let num = c * c * d * d - (1.0 - c) * (1.0 - c);
        Ok(2.0 * self.sys.spread() * num / ((1.0 - c) * den * den))
    }

    /// `phi2(r)^2`; a linear function of `r`, negative right of [`Self::phi2_root`].
    pub fn phi2_squared(&self, r: f64) -> f64 {
        let s = self.sys.scale();
        s * s * self.radicand(r)
    }

    fn radicand(&self, r: f64) -> f64 {
        let c = self.sys.c();
        let d = self.p - self.q;
        (2.0 * c * d * d + (1.0 - c) * self.excess(r)) / (1.0 + c)
    }

    /// Positive square root of [`Self::phi2_squared`], where it exists.
    pub fn phi2(&self, r: f64) -> Result<f64> {
        let rad = self.radicand(r);
        if rad < 0.0 {
            // rounding at the root itself
            if rad > -1e-15 {
                return Ok(0.0);
            }
            return Err(Error::Domain(format!(
                "phi2 undefined at r={r}: radicand {rad} < 0 (root at {})",
                self.phi2_root()
            )));
        }
        Ok(self.sys.scale() * rad.sqrt())
    }

    /// Pins `r` to the closed coupling region. Values within the bound slack
    /// of an endpoint are snapped onto it.
    pub fn at(&self, r: f64) -> Result<MomentFormulaInput> {
        let region = self.region();
        if !region.contains(r) {
            return Err(Error::OutOfRegion {
                r,
                lo: region.lo,
                hi: region.hi,
            });
        }
        Ok(MomentFormulaInput {
            curve: *self,
            r: r.clamp(region.lo, region.hi),
        })
    }
}

/// Argument tuple `(sys, p, q, r)` with `r` in the closed coupling region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentFormulaInput {
    curve: MomentCurve,
    r: f64,
}

impl MomentFormulaInput {
    pub fn new(sys: IfsSystem, p: f64, q: f64, r: f64) -> Result<Self> {
        MomentCurve::new(sys, p, q)?.at(r)
    }

    pub fn curve(&self) -> &MomentCurve {
        &self.curve
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Whether `r` sits on an endpoint of the region (within the bound slack).
    pub fn on_boundary(&self) -> bool {
        let reg = self.curve.region();
        (self.r - reg.lo).abs() <= BOUND_SLACK || (self.r - reg.hi).abs() <= BOUND_SLACK
    }
}

/// First moment `int |x - y| d gamma_r`.
pub fn phi1(input: &MomentFormulaInput) -> f64 {
    // the pole lies strictly right of the region
    input.curve.phi1(input.r).expect("pole outside coupling region")
}

/// `(int |x - y|^2 d gamma_r)^{1/2}`.
pub fn phi2(input: &MomentFormulaInput) -> f64 {
    input.curve.phi2(input.r).expect("phi2 root outside coupling region")
}

pub fn phi1_derivative(input: &MomentFormulaInput) -> f64 {
    input
        .curve
        .phi1_derivative(input.r)
        .expect("pole outside coupling region")
}

/// `int x d mu_p = (p t1 + (1 - p) t2) / (1 - c)`.
pub fn measure_mean(m: &SelfSimilarMeasure) -> f64 {
    let sys = m.system();
    let p = m.p();
    (p * sys.t1() + (1.0 - p) * sys.t2()) / (1.0 - sys.c())
}

/// `int lambda x d(mu_p - mu_q) = lambda (p - q)(t1 - t2) / (1 - c)` for `|lambda| <= 1`.
pub fn kr_functional(sys: &IfsSystem, p: f64, q: f64, lambda: f64) -> Result<f64> {
    let (p, q) = (check_weight("p", p)?, check_weight("q", q)?);
    if !(lambda.is_finite() && lambda.abs() <= 1.0) {
        return Err(Error::out_of_range("lambda", lambda, "-1 <= lambda <= 1"));
    }
    let slope = (sys.t1() - sys.t2()) / (1.0 - sys.c());
    Ok(lambda * (p - q) * slope)
}

/// Supremum of [`kr_functional`] over `lambda in [-1, 1]`, attained at `lambda = +-1`.
pub fn kr_lower_bound(sys: &IfsSystem, p: f64, q: f64) -> Result<f64> {
    Ok(kr_functional(sys, p, q, 1.0)?.max(kr_functional(sys, p, q, -1.0)?))
}

/// `W_1(mu_p, mu_q) = (t2 - t1) |p - q| / (1 - c)`.
pub fn w1_exact(sys: &IfsSystem, p: f64, q: f64) -> Result<f64> {
    let (p, q) = (check_weight("p", p)?, check_weight("q", q)?);
    Ok(sys.scale() * (p - q).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W2Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl W2Bounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Bounds on `W_2(mu_p, mu_q)`: `W_1` below and `phi2(min{p, q})` above.
pub fn w2_bounds(sys: &IfsSystem, p: f64, q: f64) -> Result<W2Bounds> {
    let lower = w1_exact(sys, p, q)?;
    let c = sys.c();
    let d = (p - q).abs();
    let upper = sys.scale() * ((2.0 * c * d * d + (1.0 - c) * d) / (1.0 + c)).sqrt();
    Ok(W2Bounds { lower, upper })
}

/// `N`-map IFS `S_i(x) = c_i x + t_i` with two probability vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralIfsSpec {
    maps: Vec<(f64, f64)>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl GeneralIfsSpec {
    /// Validates ratios in `(0, 1)`, images inside `[0, 1]` meeting in at most
    /// a point, and both probability vectors.
    pub fn new(maps: Vec<(f64, f64)>, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::DegenerateSystem(format!(
                "need at least two maps, got {}",
                maps.len()
            )));
        }
        for (name, v) in [("p_vec", &p), ("q_vec", &q)] {
            if v.len() != maps.len() {
                return Err(Error::DegenerateSystem(format!(
                    "{name} has {} entries for {} maps",
                    v.len(),
                    maps.len()
                )));
            }
            for &w in v.iter() {
                check_weight(name, w)?;
            }
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > BOUND_SLACK {
                return Err(Error::NotNormalized { sum });
            }
        }
        check_open_set_condition(&maps)?;
        Ok(Self { maps, p, q })
    }

    pub fn maps(&self) -> &[(f64, f64)] {
        &self.maps
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

fn check_open_set_condition(maps: &[(f64, f64)]) -> Result<()> {
    for &(c, t) in maps {
        if !(c.is_finite() && c > 0.0 && c < 1.0) {
            return Err(Error::out_of_range("c_i", c, "0 < c_i < 1"));
        }
        if !(t.is_finite() && t >= -BOUND_SLACK && t + c <= 1.0 + BOUND_SLACK) {
            return Err(Error::out_of_range(
                "t_i",
                t,
                format!("0 <= t_i <= 1 - c_i = {}", 1.0 - c),
            ));
        }
    }
    let mut images: Vec<(f64, f64)> = maps.iter().map(|&(c, t)| (t, t + c)).collect();
    images.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in images.windows(2) {
        if pair[1].0 < pair[0].1 - BOUND_SLACK {
            return Err(Error::DegenerateSystem(format!(
                "images [{}, {}] and [{}, {}] overlap in more than a point",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            )));
        }
    }
    Ok(())
}

/// Lower bound on `W_1` from the linear test functions, for `N` maps with
/// possibly distinct ratios:
///
/// `|A (1 - Q) - B (1 - P)| / ((1 - P)(1 - Q))` with `A = sum p_i t_i`,
/// `B = sum q_i t_i`, `P = sum p_i c_i`, `Q = sum q_i c_i`.
pub fn general_lower_bound(spec: &GeneralIfsSpec) -> Result<f64> {
    let dot = |w: &[f64], f: fn(&(f64, f64)) -> f64| -> f64 { w.iter().zip(&spec.maps).map(|(wi, m)| wi * f(m)).sum() };
    let mean_p = dot(&spec.p, |m| m.1);
    let mean_q = dot(&spec.q, |m| m.1);
    let ratio_p = dot(&spec.p, |m| m.0);
    let ratio_q = dot(&spec.q, |m| m.0);
    let (dp, dq) = (1.0 - ratio_p, 1.0 - ratio_q);
    if dp <= 0.0 || dq <= 0.0 {
        return Err(Error::DegenerateSystem(format!(
            "nonpositive denominator factor: 1 - sum p_i c_i = {dp}, 1 - sum q_i c_i = {dq}"
        )));
    }
    Ok((mean_p * dq - mean_q * dp).abs() / (dp * dq))
}

/// Two maps with ratios `c1, c2`: the `N = 2` case of [`general_lower_bound`]
/// written out in `(p, 1 - p)` form.
pub fn two_map_distinct_ratio_bound(c1: f64, c2: f64, t1: f64, t2: f64, p: f64, q: f64) -> Result<f64> {
    let (p, q) = (check_weight("p", p)?, check_weight("q", q)?);
    check_open_set_condition(&[(c1, t1), (c2, t2)])?;
    let mean_p = p * t1 + (1.0 - p) * t2;
    let mean_q = q * t1 + (1.0 - q) * t2;
    let den_p = 1.0 - p * c1 - (1.0 - p) * c2;
    let den_q = 1.0 - q * c1 - (1.0 - q) * c2;
    if den_p <= 0.0 || den_q <= 0.0 {
        return Err(Error::DegenerateSystem(format!(
            "nonpositive denominator factor: {den_p}, {den_q}"
        )));
    }
    Ok(((mean_p * den_q - mean_q * den_p) / (den_p * den_q)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::validate_system;
    use approx::assert_relative_eq;

    fn half() -> IfsSystem {
        validate_system(0.5, 0.0, 0.5).unwrap()
    }

    fn input(r: f64) -> MomentFormulaInput {
        MomentFormulaInput::new(half(), 0.2, 0.8, r).unwrap()
    }

    #[test]
    fn phi1_reference_values() {
        // 0.5 * 0.36 + 0.5 * 0.8 = 0.58 over 0.5 + 0.5 * 0.8 = 0.9
        assert_relative_eq!(phi1(&input(0.1)), 0.58 / 0.9, max_relative = 1e-14);
        assert_relative_eq!(phi1(&input(0.2)), 0.6, max_relative = 1e-14);
        assert_relative_eq!(phi1(&input(0.2)), w1_exact(&half(), 0.2, 0.8).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn phi1_equal_weights() {
        // p = q = 0.5, r = 0.3: a = 0.4, scale = 1, value = 0.5*0.4 / (0.5 + 0.2)
        let v = phi1(&MomentFormulaInput::new(half(), 0.5, 0.5, 0.3).unwrap());
        assert_relative_eq!(v, 0.2 / 0.7, max_relative = 1e-14);
    }

    #[test]
    fn outside_region_rejected() {
        let err = MomentFormulaInput::new(half(), 0.2, 0.8, 0.3).unwrap_err();
        assert!(matches!(err, Error::OutOfRegion { .. }));
    }

    #[test]
    fn pole_and_roots() {
        assert_relative_eq!(phi1_pole(0.2, 0.8, 0.5).unwrap(), 1.0);
        assert_relative_eq!(phi1_pole(0.5, 0.5, 0.5).unwrap(), 1.0);
        assert_relative_eq!(phi1_root(0.2, 0.8, 0.5).unwrap(), 0.68, epsilon = 1e-15);
        assert_eq!(phi1_root(0.3, 0.3, 0.25).unwrap(), 0.3);
        assert_relative_eq!(phi2_root(0.2, 0.8, 0.5).unwrap(), 0.86, epsilon = 1e-15);
        assert_eq!(phi2_root(0.3, 0.3, 0.25).unwrap(), 0.3);
        assert!(phi1_pole(0.2, 0.8, 0.7).is_err());
        assert!(phi1_root(1.2, 0.8, 0.3).is_err());
    }

    #[test]
    fn pole_evaluation_errors() {
        let curve = MomentCurve::new(half(), 0.2, 0.8).unwrap();
        assert!(matches!(curve.phi1(1.0), Err(Error::PoleEvaluation { .. })));
        assert!(matches!(curve.phi1_derivative(1.0), Err(Error::PoleEvaluation { .. })));
        assert!(curve.phi1(1.0 + 1e-6).is_ok());
    }

    #[test]
    fn derivative_reference_config() {
        // 2 * 0.5 * (0.25 * 0.36 - 0.25) / (0.5 * 0.81)
        assert_relative_eq!(
            phi1_derivative(&input(0.1)),
            (0.09 - 0.25) / (0.5 * 0.81),
            max_relative = 1e-14
        );
    }

    #[test]
    fn derivative_matches_central_difference() {
        let curve = MomentCurve::new(half(), 0.2, 0.8).unwrap();
        let h = 1e-6;
        let fd = (curve.phi1(0.1 + h).unwrap() - curve.phi1(0.1 - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(fd, curve.phi1_derivative(0.1).unwrap(), max_relative = 1e-6);
    }

    #[test]
    fn phi2_reference_values() {
        assert_relative_eq!(phi2(&input(0.1)), (0.76f64 / 1.5).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(phi2(&input(0.2)), (0.66f64 / 1.5).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            phi2(&input(0.2)),
            w2_bounds(&half(), 0.2, 0.8).unwrap().upper,
            epsilon = 1e-12
        );
    }

    #[test]
    fn phi2_domain() {
        let curve = MomentCurve::new(half(), 0.2, 0.8).unwrap();
        assert!(matches!(curve.phi2(0.9), Err(Error::Domain(_))));
        assert_eq!(curve.phi2(curve.phi2_root()).unwrap(), 0.0);
    }

    #[test]
    fn squared_slope() {
        assert_relative_eq!(phi2_squared_slope(&half()), -0.5 / 0.75, max_relative = 1e-14);
        let curve = MomentCurve::new(half(), 0.2, 0.8).unwrap();
        let h = 1e-4;
        let fd = (curve.phi2_squared(0.1 + h) - curve.phi2_squared(0.1 - h)) / (2.0 * h);
        assert_relative_eq!(fd, phi2_squared_slope(&half()), max_relative = 1e-8);
    }

    #[test]
    fn means() {
        let m = SelfSimilarMeasure::new(half(), 0.2).unwrap();
        assert_relative_eq!(measure_mean(&m), 0.8, max_relative = 1e-15);
        let cantor = validate_system(1.0 / 3.0, 0.0, 2.0 / 3.0).unwrap();
        let m = SelfSimilarMeasure::new(cantor, 0.5).unwrap();
        assert_relative_eq!(measure_mean(&m), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn kr_values() {
        assert_relative_eq!(
            kr_functional(&half(), 0.2, 0.8, 1.0).unwrap(),
            0.6,
            max_relative = 1e-15
        );
        assert_eq!(kr_functional(&half(), 0.2, 0.8, 0.0).unwrap(), 0.0);
        assert!(kr_functional(&half(), 0.2, 0.8, 1.5).is_err());
        assert_eq!(
            kr_lower_bound(&half(), 0.2, 0.8).unwrap(),
            w1_exact(&half(), 0.2, 0.8).unwrap()
        );
    }

    #[test]
    fn w1_and_w2_values() {
        assert_relative_eq!(w1_exact(&half(), 0.2, 0.8).unwrap(), 0.6, max_relative = 1e-15);
        assert_eq!(w1_exact(&half(), 0.4, 0.4).unwrap(), 0.0);
        let b = w2_bounds(&half(), 0.2, 0.8).unwrap();
        assert_relative_eq!(b.lower, 0.6, max_relative = 1e-15);
        assert_relative_eq!(b.upper, (0.66f64 / 1.5).sqrt(), max_relative = 1e-14);
        assert_eq!(
            w2_bounds(&half(), 0.3, 0.3).unwrap(),
            W2Bounds { lower: 0.0, upper: 0.0 }
        );
    }

    #[test]
    fn cantor_family_w1_is_weight_gap() {
        for k in 1..=10 {
            let c = k as f64 / 20.0;
            let sys = IfsSystem::cantor(c).unwrap();
            assert_eq!(w1_exact(&sys, 0.2, 0.9).unwrap(), (0.9f64 - 0.2).abs());
            let b = w2_bounds(&sys, 0.2, 0.9).unwrap();
            let d: f64 = 0.7;
            assert_relative_eq!(
                b.upper,
                ((2.0 * c * d * d + (1.0 - c) * d) / (1.0 + c)).sqrt(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn three_map_counterexample_vanishes() {
        for c in [0.05, 0.15, 0.25] {
            let spec = GeneralIfsSpec::new(
                vec![(c, 0.0), (c, c), (c, 2.0 * c)],
                vec![0.4, 0.5, 0.1],
                vec![0.6, 0.1, 0.3],
            )
            .unwrap();
            assert!(general_lower_bound(&spec).unwrap().abs() <= 1e-14);
        }
    }

    #[test]
    fn general_bound_identical_vectors_zero() {
        let spec = GeneralIfsSpec::new(vec![(0.2, 0.0), (0.3, 0.5)], vec![0.3, 0.7], vec![0.3, 0.7]).unwrap();
        assert_eq!(general_lower_bound(&spec).unwrap(), 0.0);
    }

    #[test]
    fn general_spec_validation() {
        assert!(GeneralIfsSpec::new(vec![(0.5, 0.0)], vec![1.0], vec![1.0]).is_err());
        // overlapping images
        assert!(matches!(
            GeneralIfsSpec::new(vec![(0.4, 0.0), (0.4, 0.3)], vec![0.5, 0.5], vec![0.5, 0.5]),
            Err(Error::DegenerateSystem(_))
        ));
        // touching images are fine
        assert!(GeneralIfsSpec::new(vec![(0.4, 0.0), (0.4, 0.4)], vec![0.5, 0.5], vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            GeneralIfsSpec::new(vec![(0.4, 0.0), (0.4, 0.6)], vec![0.5, 0.6], vec![0.5, 0.5]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(GeneralIfsSpec::new(vec![(0.4, 0.0), (0.4, 0.7)], vec![0.5, 0.5], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn distinct_ratio_bound_reductions() {
        let sys = validate_system(0.3, 0.1, 0.55).unwrap();
        let b = two_map_distinct_ratio_bound(0.3, 0.3, 0.1, 0.55, 0.25, 0.7).unwrap();
        assert_relative_eq!(b, w1_exact(&sys, 0.25, 0.7).unwrap(), max_relative = 1e-12);
        assert_eq!(two_map_distinct_ratio_bound(0.3, 0.4, 0.0, 0.6, 0.4, 0.4).unwrap(), 0.0);
        assert!(two_map_distinct_ratio_bound(0.5, 0.4, 0.0, 0.3, 0.4, 0.6).is_err());
    }
}
