//! Stratum labels of `Ran(ℝᵈ) × ℝ≥0` under the Čech map, and the explicit
//! neighborhoods on which the label can only move up in the order.
//!
//! For `x = (P, r)` the safe ball is the open sup-norm ball of radius `r̃/4`
//! around `x`. Every `y` inside it carries a vertex-surjective simplicial map
//! `Č(y) → Č(x)` ([`local_map`]), so `[Č(y)] ≽ [Č(x)]`.

mod frontier;

pub use frontier::{
    frontier_check, frontier_demo, BoundaryWitness, DEMO_PROBES, FamilySampler, FrontierOptions, FrontierReport, InteriorWitness,
    LabelMode, StratumKey, Verdict, Witnesses,
};

use serde::{Deserialize, Serialize};

use crate::cech::{cech_complex, subset_radii, CechOptions};
use crate::complexes::{canonical_form, IsoClass, Simplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::geometry::{dist, sup_distance, PointConfig, RanPoint};
use crate::scalar::Real;

/// Value of the Čech map at a point, with the subsets sitting at their critical radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumLabel {
    #[serde(rename = "class")]
    pub cls: IsoClass,
    pub degenerate: bool,
    /// Vertex subsets (of the input labeling) with `|čr| ≤ eps_geo`.
    pub degenerate_subsets: Vec<Vec<usize>>,
}

impl StratumLabel {
    /// The coarser refinement that only looks at the whole configuration.
    pub fn whole_set_degenerate(&self) -> bool {
        let n = self.cls.n_vertices();
        self.degenerate_subsets.iter().any(|s| s.len() == n)
    }
}

/// Which branch of the neighborhood construction applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SafeCase {
    /// No subset sits at its critical radius.
    Generic,
    /// Some subset does; its slack is dropped from the minimum.
    Boundary,
}

/// Neighborhood of a point on which the stratum label can only go up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SafeBall<T> {
    pub center: RanPoint<T>,
    pub r_tilde: T,
    pub safe_radius: T,
    pub case: SafeCase,
}

impl<T: Real> SafeBall<T> {
    /// Whether `y` lies strictly inside the ball.
    pub fn contains(&self, y: &RanPoint<T>) -> Result<bool> {
        Ok(sup_distance(y, &self.center)? < self.safe_radius)
    }
}

/// Smallest pairwise distance; `+∞` for a single point.
pub fn r1<T: Real>(config: &PointConfig<T>) -> T {
    let pts = config.points();
    let mut best = T::infinity();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(dist(&pts[i], &pts[j]));
        }
    }
    best
}

/// Twice the distance of `čr` from the tolerance band it must not cross.
///
/// A subset without a simplex (`čr < 0`) is present once `čr ≥ −eps`, so its
/// usable slack is `|čr| − eps`. Subsets with a simplex only need `čr` to stay
/// above zero.
fn slack<T: Real>(cr: T, eps: T) -> T {
    let two = T::lit(2.0);
    if cr < T::zero() {
        two * (-cr - eps).max(T::zero())
    } else {
        two * cr
    }
}

fn cech_radii<T: Real>(config: &PointConfig<T>, r: T, opts: &CechOptions<T>) -> Result<Vec<(Simplex, T)>> {
    Ok(subset_radii(config, opts)?
        .into_iter()
        .map(|(s, m)| (s, r - m))
        .collect())
}

/// Minimum over subsets with at least two points of `2·|čr(P′, r)|`.
///
/// Returns `+∞` for a single point. See [`slack`] for the tolerance handling.
pub fn r2<T: Real>(config: &PointConfig<T>, r: T, opts: &CechOptions<T>) -> Result<T> {
    Ok(cech_radii(config, r, opts)?
        .into_iter()
        .map(|(_, cr)| if cr.abs() <= opts.eps_geo { T::zero() } else { slack(cr, opts.eps_geo) })
        .fold(T::infinity(), T::min))
}

/// As [`r2`] but skipping subsets with `|čr| ≤ eps_geo`; `+∞` if every subset is skipped.
pub fn r2_prime<T: Real>(config: &PointConfig<T>, r: T, opts: &CechOptions<T>) -> Result<T> {
    Ok(cech_radii(config, r, opts)?
        .into_iter()
        .filter(|&(_, cr)| cr.abs() > opts.eps_geo)
        .map(|(_, cr)| slack(cr, opts.eps_geo))
        .fold(T::infinity(), T::min))
}

fn degenerate_subsets<T: Real>(x: &RanPoint<T>, opts: &CechOptions<T>) -> Result<Vec<Simplex>> {
    Ok(cech_radii(&x.config, x.radius, opts)?
        .into_iter()
        .filter(|&(_, cr)| cr.abs() <= opts.eps_geo)
        .map(|(s, _)| s)
        .collect())
}

/// Safe ball around `x`.
///
/// `r̃ = min(r1, r2)` when no subset is degenerate and `min(r1, r2′)` otherwise.
/// A single point has no pairwise constraint; any perturbation keeps one
/// vertex, so `r̃ = 4·max(r, 1)`.
pub fn tilde_r<T: Real>(x: &RanPoint<T>, opts: &CechOptions<T>) -> Result<SafeBall<T>> {
    let four = T::lit(4.0);
    if x.config.len() == 1 {
        let r_tilde = four * x.radius.max(T::one());
        return Ok(SafeBall {
            center: x.clone(),
            r_tilde,
            safe_radius: r_tilde / four,
            case: SafeCase::Generic,
        });
    }
    let degenerate = !degenerate_subsets(x, opts)?.is_empty();
    let (other, case) = if degenerate {
        (r2_prime(&x.config, x.radius, opts)?, SafeCase::Boundary)
    } else {
        (r2(&x.config, x.radius, opts)?, SafeCase::Generic)
    };
    let r_tilde = r1(&x.config).min(other);
    Ok(SafeBall {
        center: x.clone(),
        r_tilde,
        safe_radius: r_tilde / four,
        case,
    })
}

/// Label of `x`: the class of its Čech complex plus the degenerate subsets.
pub fn stratum_label<T: Real>(x: &RanPoint<T>, opts: &CechOptions<T>) -> Result<StratumLabel> {
    let cls = canonical_form(&cech_complex(x, opts)?)?;
    let subsets: Vec<Vec<usize>> = degenerate_subsets(x, opts)?.into_iter().map(Simplex::to_vec).collect();
    Ok(StratumLabel {
        cls,
        degenerate: !subsets.is_empty(),
        degenerate_subsets: subsets,
    })
}

/// The map `Č(from) → Č(to)` sending each point of `from` to the unique point
/// of `to` within `r̃/4` of it.
///
/// Fails with [`Error::OutsideSafeBall`] unless `from` lies strictly inside
/// the safe ball of `to`.
pub fn local_map<T: Real>(from: &RanPoint<T>, to: &RanPoint<T>, opts: &CechOptions<T>) -> Result<SimplicialMap> {
    local_map_in(from, &tilde_r(to, opts)?, opts)
}

/// [`local_map`] with a precomputed safe ball.
pub fn local_map_in<T: Real>(from: &RanPoint<T>, ball: &SafeBall<T>, opts: &CechOptions<T>) -> Result<SimplicialMap> {
    let to = &ball.center;
    let distance = sup_distance(from, to)?;
    if !(distance < ball.safe_radius) {
        return Err(Error::OutsideSafeBall {
            distance: distance.as_f64(),
            safe_radius: ball.safe_radius.as_f64(),
        });
    }
    // the balls of radius r̃/4 around the points of `to` are disjoint, so the
    // nearest point is the only candidate
    let vertex_map: Vec<usize> = from
        .config
        .points()
        .iter()
        .map(|q| {
            let (i, _) = to
                .config
                .points()
                .iter()
                .enumerate()
                .map(|(i, p)| (i, dist(p, q)))
                .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
            i
        })
        .collect();
    let map = SimplicialMap::new(cech_complex(from, opts)?, cech_complex(to, opts)?, vertex_map)?;
    if !map.is_vertex_surjective() {
        return Err(Error::NotSimplicial("local map is not vertex-surjective".into()));
    }
    Ok(map)
}
