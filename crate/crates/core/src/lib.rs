//! Moment integrals and Wasserstein distances for self-similar measures of
//! two-map equicontractive iterated function systems on `[0, 1]`.
//!
//! - [`ifs`]: the parameter space `(c, t1, t2)`, weights `p, q` and the
//!   coupling parameter `r`.
//! - [`closed_form`]: explicit first and second moments of self-similar
//!   couplings, exact `W_1`, bounds on `W_2` and linear-test-function lower
//!   bounds for general systems.
//! - [`discrete`] and [`oracle`]: depth-`k` atomic approximations and an
//!   independent brute-force transport solver used to check the closed forms.
//! - [`verify`]: the full cross-check suite.

#![forbid(unsafe_code)]

pub mod closed_form;
pub mod discrete;
pub mod error;
pub mod ifs;
pub mod oracle;
pub mod sum;
pub mod verify;

pub use closed_form::{
    general_lower_bound, kr_functional, kr_lower_bound, measure_mean, phi1, phi1_derivative, phi1_pole, phi1_root,
    phi2, phi2_root, phi2_squared_slope, two_map_distinct_ratio_bound, w1_exact, w2_bounds, GeneralIfsSpec,
    MomentCurve, MomentFormulaInput, W2Bounds,
};
pub use discrete::{
    discretize_coupling, discretize_measure, Atom, CouplingAtom, DiscreteCoupling, DiscreteMeasure, DEFAULT_ATOM_BUDGET,
};
pub use error::{Error, Result};
pub use ifs::{coupling_region, validate_system, CouplingParam, CouplingRegion, IfsSystem, SelfSimilarMeasure};
pub use oracle::{
    coupling_moment, monotone_transport, random_feasible_coupling_cost, signed_moment, techlem_residual, TransportPlan,
};
