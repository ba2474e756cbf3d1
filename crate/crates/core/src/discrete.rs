//! Depth-`k` atomic approximations of `mu_p` and of the coupling `gamma_r`.
//!
//! Each word `w = w_1 ... w_k` contributes one atom at `S_{w_1} o ... o S_{w_k}(1/2)`,
//! the midpoint of the cylinder `S_w([0, 1])`, carrying the product of the
//! weights along the word. Every point of the support lies within `c^k / 2` of
//! the atom of its cylinder.
//!
//! Atoms are generated in lexicographic word order with the first letter most
//! significant. For the one-dimensional measure that order is already sorted by
//! position, since `S_1([0,1])` lies left of `S_2([0,1])`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{CouplingParam, IfsSystem, SelfSimilarMeasure};

/// Default cap on the number of atoms a discretization may allocate.
pub const DEFAULT_ATOM_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// Atoms on `[0, 1]` sorted by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
    depth: Option<u32>,
}

impl DiscreteMeasure {
    /// Builds a measure from arbitrary `(position, weight)` pairs.
    ///
    /// Positions must lie in `[0, 1]` and weights must be nonnegative; the
    /// atoms are stably sorted by position. Normalization is not enforced here.
    pub fn from_atoms<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut out = Vec::new();
        for (position, weight) in atoms {
            if !(position.is_finite() && (0.0..=1.0).contains(&position)) {
                return Err(Error::out_of_range("position", position, "0 <= position <= 1"));
            }
            if !(weight.is_finite() && weight >= 0.0) {
                return Err(Error::out_of_range("weight", weight, "weight >= 0"));
            }
            out.push(Atom { position, weight });
        }
        out.sort_by(|a, b| a.position.total_cmp(&b.position));
        Ok(Self {
            atoms: out,
            depth: None,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Cylinder depth, `None` for hand-built measures.
    pub fn depth(&self) -> Option<u32> {
        self.depth
    }

    pub fn total_mass(&self) -> f64 {
        crate::sum::pairwise(self.atoms.iter().map(|a| a.weight))
    }

    /// `sum weight * position`.
    pub fn mean(&self) -> f64 {
        crate::sum::pairwise(self.atoms.iter().map(|a| a.weight * a.position))
    }

    /// Merges atoms sharing an identical position, summing their weights.
    pub fn grouped(&self) -> Vec<Atom> {
        group_sorted(self.atoms.iter().copied())
    }
}

fn group_sorted(atoms: impl Iterator<Item = Atom>) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    for atom in atoms {
        match out.last_mut() {
            Some(last) if last.position == atom.position => last.weight += atom.weight,
            _ => out.push(atom),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingAtom {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

/// Atoms on `[0, 1]^2` approximating `gamma_r`, in word order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCoupling {
    atoms: Vec<CouplingAtom>,
    depth: u32,
}

impl DiscreteCoupling {
    pub fn atoms(&self) -> &[CouplingAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn total_mass(&self) -> f64 {
        crate::sum::pairwise(self.atoms.iter().map(|a| a.weight))
    }

    /// Projection onto the first coordinate, coincident positions merged.
    pub fn marginal_x(&self) -> Vec<Atom> {
        self.marginal(|a| a.x)
    }

    /// Projection onto the second coordinate, coincident positions merged.
    pub fn marginal_y(&self) -> Vec<Atom> {
        self.marginal(|a| a.y)
    }

    fn marginal(&self, coord: impl Fn(&CouplingAtom) -> f64) -> Vec<Atom> {
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                position: coord(a),
                weight: a.weight,
            })
            .collect();
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        group_sorted(atoms.into_iter())
    }
}

fn check_budget(branching: u128, depth: u32, budget: usize) -> Result<usize> {
    let requested = branching.checked_pow(depth).unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::ResourceLimit { requested, budget });
    }
    Ok(requested as usize)
}

/// Depth-`depth` discretization of `mu_p` under the default atom budget.
pub fn discretize_measure(measure: &SelfSimilarMeasure, depth: u32) -> Result<DiscreteMeasure> {
    discretize_measure_with_budget(measure, depth, DEFAULT_ATOM_BUDGET)
}

pub fn discretize_measure_with_budget(
    measure: &SelfSimilarMeasure,
    depth: u32,
    budget: usize,
) -> Result<DiscreteMeasure> {
    let n = check_budget(2, depth, budget)?;
    let sys = measure.system();
    let weights = measure.weights();

    let mut atoms = Vec::with_capacity(n);
    atoms.push(Atom {
        position: 0.5,
        weight: 1.0,
    });
    for _ in 0..depth {
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for (i, &w) in weights.iter().enumerate() {
            next.extend(atoms.iter().map(|a| Atom {
                position: sys.apply(i, a.position),
                weight: w * a.weight,
            }));
        }
        atoms = next;
    }
    // Already ordered for valid systems; stable so ties keep word order.
    atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
    Ok(DiscreteMeasure {
        atoms,
        depth: Some(depth),
    })
}

/// Depth-`depth` discretization of `gamma_r` under the default atom budget.
pub fn discretize_coupling(sys: &IfsSystem, cp: &CouplingParam, depth: u32) -> Result<DiscreteCoupling> {
    discretize_coupling_with_budget(sys, cp, depth, DEFAULT_ATOM_BUDGET)
}

pub fn discretize_coupling_with_budget(
    sys: &IfsSystem,
    cp: &CouplingParam,
    depth: u32,
    budget: usize,
) -> Result<DiscreteCoupling> {
    let n = check_budget(4, depth, budget)?;
    let weights = cp.probability_vector();
    // (1,1), (1,2), (2,1), (2,2)
    const MAPS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

    let mut atoms = Vec::with_capacity(n);
    atoms.push(CouplingAtom {
        x: 0.5,
        y: 0.5,
        weight: 1.0,
    });
    for _ in 0..depth {
        let mut next = Vec::with_capacity(atoms.len() * 4);
        for (&(i, j), &w) in MAPS.iter().zip(weights.iter()) {
            next.extend(atoms.iter().map(|a| CouplingAtom {
                x: sys.apply(i, a.x),
                y: sys.apply(j, a.y),
                weight: w * a.weight,
            }));
        }
        atoms = next;
    }
    Ok(DiscreteCoupling { atoms, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::validate_system;

    fn half() -> IfsSystem {
        validate_system(0.5, 0.0, 0.5).unwrap()
    }

    #[test]
    fn depth_zero_is_midpoint() {
        let m = SelfSimilarMeasure::new(half(), 0.2).unwrap();
        let d = discretize_measure(&m, 0).unwrap();
        assert_eq!(
            d.atoms(),
            &[Atom {
                position: 0.5,
                weight: 1.0
            }]
        );
        let cp = CouplingParam::new(0.2, 0.8, 0.1).unwrap();
        let dc = discretize_coupling(&half(), &cp, 0).unwrap();
        assert_eq!(
            dc.atoms(),
            &[CouplingAtom {
                x: 0.5,
                y: 0.5,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn depth_one_half_contraction() {
        let m = SelfSimilarMeasure::new(half(), 0.2).unwrap();
        let d = discretize_measure(&m, 1).unwrap();
        assert_eq!(
            d.atoms(),
            &[
                Atom {
                    position: 0.25,
                    weight: 0.2
                },
                Atom {
                    position: 0.75,
                    weight: 0.8
                }
            ]
        );
    }

    #[test]
    fn middle_third_depth_two() {
        let sys = validate_system(1.0 / 3.0, 0.0, 2.0 / 3.0).unwrap();
        let m = SelfSimilarMeasure::new(sys, 0.5).unwrap();
        let d = discretize_measure(&m, 2).unwrap();
        // S_a(S_b(1/2)) computed by hand: 1/18, 5/18, 13/18, 17/18.
        let expected = [1.0, 5.0, 13.0, 17.0].map(|k| k / 18.0);
        assert_eq!(d.len(), 4);
        for (a, e) in d.atoms().iter().zip(expected) {
            assert!((a.position - e).abs() < 1e-15, "{} vs {}", a.position, e);
            assert_eq!(a.weight, 0.25);
        }
    }

    #[test]
    fn coupling_depth_one_weights_in_map_order() {
        let cp = CouplingParam::new(0.2, 0.8, 0.1).unwrap();
        let dc = discretize_coupling(&half(), &cp, 1).unwrap();
        let expected = [
            (0.25, 0.25, 0.1),
            (0.25, 0.75, 0.1),
            (0.75, 0.25, 0.7),
            (0.75, 0.75, 0.1),
        ];
        for (a, (x, y, w)) in dc.atoms().iter().zip(expected) {
            assert_eq!((a.x, a.y), (x, y));
            assert!((a.weight - w).abs() < 1e-15);
        }
        let mx = dc.marginal_x();
        assert!((mx[0].weight - 0.2).abs() < 1e-15);
        assert!((mx[1].weight - 0.8).abs() < 1e-15);
    }

    #[test]
    fn budget_enforced() {
        let m = SelfSimilarMeasure::new(half(), 0.3).unwrap();
        assert!(matches!(
            discretize_measure(&m, 23),
            Err(Error::ResourceLimit { requested, budget }) if requested == 1 << 23 && budget == DEFAULT_ATOM_BUDGET
        ));
        let cp = CouplingParam::new(0.3, 0.6, 0.2).unwrap();
        assert!(discretize_coupling(&half(), &cp, 12).is_err());
        assert!(discretize_coupling_with_budget(&half(), &cp, 3, 63).is_err());
        assert_eq!(discretize_coupling_with_budget(&half(), &cp, 3, 64).unwrap().len(), 64);
        // overflowing word counts are reported rather than wrapping
        assert!(discretize_measure_with_budget(&m, 200, usize::MAX).is_err());
    }

    #[test]
    fn coincident_positions_are_kept() {
        // c = 1/2 with t2 - t1 = c: S_1(1) = S_2(0), but midpoints never coincide
        // at depth >= 1; atoms still equal 2^depth.
        let sys = validate_system(0.5, 0.0, 0.5).unwrap();
        let m = SelfSimilarMeasure::new(sys, 0.4).unwrap();
        assert_eq!(discretize_measure(&m, 6).unwrap().len(), 64);
    }

    #[test]
    fn from_atoms_sorts_and_validates() {
        let d = DiscreteMeasure::from_atoms([(0.9, 0.5), (0.1, 0.5)]).unwrap();
        assert_eq!(d.atoms()[0].position, 0.1);
        assert_eq!(d.depth(), None);
        assert!(DiscreteMeasure::from_atoms([(1.5, 1.0)]).is_err());
        assert!(DiscreteMeasure::from_atoms([(0.5, -1.0)]).is_err());
    }
}
