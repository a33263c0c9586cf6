//! Simplicial complexes ordered by vertex-surjective simplicial maps, and the
//! Čech stratification of `Ran(ℝᵈ) × ℝ≥0`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cech;
pub mod cli;
pub mod complexes;
pub mod error;
pub mod geometry;
pub mod paths;
pub mod scalar;
pub mod scposet;
pub mod strat;

pub use cech::{cech_complex, cech_filtration, CechOptions};
pub use complexes::{
    are_isomorphic, canonical_form, compose, is_simplicial, make_complex, IsoClass, Simplex, SimplicialComplex,
    SimplicialMap,
};
pub use error::{Error, Result};
pub use paths::{as_filtration, cech_path, entrance_map, evaluate, transitions, zigzag, ClassChain};
pub use scalar::Real;
pub use scposet::{dominates, enumerate_classes, export_dot, hasse, HasseDiagram, PosetUniverse};
pub use strat::{local_map, r1, r2, r2_prime, stratum_label, tilde_r, SafeCase, StratumLabel};

pub type PointConfig = geometry::PointConfig<f64>;
pub type RanPoint = geometry::RanPoint<f64>;
pub type Ball = geometry::Ball<f64>;
pub type Filtration = cech::Filtration<f64>;
pub type SafeBall = strat::SafeBall<f64>;
pub type PLPath = paths::PLPath<f64>;
pub type ZigzagDiagram = paths::ZigzagDiagram<f64>;

pub type PointConfig32 = geometry::PointConfig<f32>;
pub type RanPoint32 = geometry::RanPoint<f32>;
pub type Ball32 = geometry::Ball<f32>;
pub type Filtration32 = cech::Filtration<f32>;
pub type SafeBall32 = strat::SafeBall<f32>;
pub type PLPath32 = paths::PLPath<f32>;
pub type ZigzagDiagram32 = paths::ZigzagDiagram<f32>;
