//! Piecewise-linear paths in `Ran(ℝᵈ) × ℝ≥0`, the simplicial maps they
//! induce, and the zigzag of Čech complexes along them.
//!
//! A path is a bundle of labeled tracks sharing breakpoints, plus a radius.
//! At each time the tracks are deduplicated into a configuration, so tracks
//! may merge; once two tracks meet they must stay together.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cech::{cech_complex, CechOptions};
use crate::complexes::{canonical_form, compose, IsoClass, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::geometry::{dist, PointConfig, RanPoint};
use crate::scalar::Real;
use crate::scposet::dominates;
use crate::strat::{local_map_in, stratum_label, tilde_r, StratumLabel};

/// Piecewise-linear path given by tracks and a radius on shared breakpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PLPath<T> {
    dim: usize,
    breakpoints: Vec<T>,
    /// `tracks[k][j]` is the position of track `k` at breakpoint `j`.
    tracks: Vec<Vec<Vec<T>>>,
    radius: Vec<T>,
    #[serde(skip)]
    merge_tolerance: T,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct PathRepr<T> {
    dim: usize,
    breakpoints: Vec<T>,
    tracks: Vec<Vec<Vec<T>>>,
    radius: Vec<T>,
}

impl<'de, T: Real> Deserialize<'de> for PLPath<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = PathRepr::<T>::deserialize(deserializer)?;
        PLPath::new(r.dim, r.breakpoints, r.tracks, r.radius).map_err(serde::de::Error::custom)
    }
}

/// Default distance below which tracks count as merged.
///
/// Larger than both the point tolerance and twice the Čech band, so two
/// tracks merge before the tolerant simplex test would join them by an edge
/// at radius 0.
pub fn default_merge_tolerance<T: Real>() -> T {
    T::lit(4.0) * T::default_delta().max(T::default_eps())
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::InvalidPath(msg))
}

impl<T: Real> PLPath<T> {
    pub fn new(dim: usize, breakpoints: Vec<T>, tracks: Vec<Vec<Vec<T>>>, radius: Vec<T>) -> Result<Self> {
        let m = breakpoints.len();
        if dim == 0 {
            return invalid("dimension must be at least 1".into());
        }
        if m < 2 || breakpoints[0] != T::zero() || breakpoints[m - 1] != T::one() {
            return invalid("breakpoints must run from 0 to 1".into());
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid("breakpoints must increase strictly".into());
        }
        if tracks.is_empty() {
            return invalid("a path needs at least one track".into());
        }
        for (k, track) in tracks.iter().enumerate() {
            if track.len() != m {
                return invalid(format!("track {k} has {} waypoints, expected {m}", track.len()));
            }
            if track.iter().any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite())) {
                return invalid(format!("track {k} has a waypoint of the wrong dimension or a non-finite coordinate"));
            }
        }
        if radius.len() != m || radius.iter().any(|r| !r.is_finite() || *r < T::zero()) {
            return invalid("radius needs one finite nonnegative value per breakpoint".into());
        }
        let path = PLPath {
            dim,
            breakpoints,
            tracks,
            radius,
            merge_tolerance: default_merge_tolerance(),
        };
        path.check_merges()?;
        Ok(path)
    }

    /// Replaces the merge tolerance and re-validates.
    pub fn with_merge_tolerance(mut self, tol: T) -> Result<Self> {
        if !(tol > T::zero()) {
            return invalid("merge tolerance must be positive".into());
        }
        self.merge_tolerance = tol;
        self.check_merges()?;
        Ok(self)
    }

    pub fn merge_tolerance(&self) -> T {
        self.merge_tolerance
    }

    /// A pair of tracks that comes within the merge tolerance on a segment
    /// must still be within it at the segment's end. The distance is convex
    /// on a segment, so it then stays within tolerance from the first contact on.
    fn check_merges(&self) -> Result<()> {
        let delta = self.merge_tolerance;
        for a in 0..self.tracks.len() {
            for b in a + 1..self.tracks.len() {
                for j in 0..self.breakpoints.len() - 1 {
                    let d0: Vec<T> = diff(&self.tracks[a][j], &self.tracks[b][j]);
                    let d1: Vec<T> = diff(&self.tracks[a][j + 1], &self.tracks[b][j + 1]);
                    let e = diff(&d1, &d0);
                    let ee = dot(&e, &e);
                    let s = if ee > T::zero() {
                        (-dot(&d0, &e) / ee).max(T::zero()).min(T::one())
                    } else {
                        T::zero()
                    };
                    let closest: Vec<T> = d0.iter().zip(&e).map(|(&x, &y)| x + s * y).collect();
                    if norm(&closest) <= delta && norm(&d1) > delta {
                        return invalid(format!(
                            "tracks {a} and {b} meet on segment {j} and separate again"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn tracks(&self) -> &[Vec<Vec<T>>] {
        &self.tracks
    }

    pub fn radius(&self) -> &[T] {
        &self.radius
    }

    pub fn n_tracks(&self) -> usize {
        self.tracks.len()
    }

    /// Segment index and local coordinate in `[0, 1]` for time `t`.
    fn locate(&self, t: T) -> (usize, T) {
        let m = self.breakpoints.len();
        let j = self.breakpoints.partition_point(|&b| b <= t).clamp(1, m - 1) - 1;
        let (a, b) = (self.breakpoints[j], self.breakpoints[j + 1]);
        (j, ((t - a) / (b - a)).max(T::zero()).min(T::one()))
    }

    fn lerp(&self, x0: T, x1: T, s: T) -> T {
        x0 + (x1 - x0) * s
    }

    fn radius_at(&self, t: T) -> T {
        let (j, s) = self.locate(t);
        self.lerp(self.radius[j], self.radius[j + 1], s).max(T::zero())
    }

    fn positions_at(&self, t: T) -> Vec<Vec<T>> {
        let (j, s) = self.locate(t);
        self.tracks
            .iter()
            .map(|tr| tr[j].iter().zip(&tr[j + 1]).map(|(&a, &b)| self.lerp(a, b, s)).collect())
            .collect()
    }

    /// Largest speed of any track or of the radius, in the sup metric.
    pub fn lipschitz(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.breakpoints.len() - 1 {
            let dt = self.breakpoints[j + 1] - self.breakpoints[j];
            best = best.max((self.radius[j + 1] - self.radius[j]).abs() / dt);
            for tr in &self.tracks {
                best = best.max(dist(&tr[j], &tr[j + 1]) / dt);
            }
        }
        best
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let rev = |v: &[T]| -> Vec<T> { v.iter().rev().copied().collect() };
        PLPath {
            dim: self.dim,
            breakpoints: self.breakpoints.iter().rev().map(|&b| T::one() - b).collect(),
            tracks: self.tracks.iter().map(|tr| tr.iter().rev().cloned().collect()).collect(),
            radius: rev(&self.radius),
            merge_tolerance: self.merge_tolerance,
        }
    }
}

fn diff<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::OutOfRange {
            param: "t",
            value: t.as_f64(),
        });
    }
    Ok(())
}

/// The point of the path at time `t` and, for every track, the index of the
/// configuration point it lands on.
pub fn evaluate_tracks<T: Real>(path: &PLPath<T>, t: T) -> Result<(RanPoint<T>, Vec<usize>)> {
    check_time(t)?;
    let (config, assignment) = PointConfig::deduped(path.dim, path.positions_at(t), path.merge_tolerance)?;
    Ok((RanPoint::new(config, path.radius_at(t))?, assignment))
}

/// The point of the path at time `t`.
pub fn evaluate<T: Real>(path: &PLPath<T>, t: T) -> Result<RanPoint<T>> {
    Ok(evaluate_tracks(path, t)?.0)
}

/// A place where the Čech class changes along a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Transition<T> {
    pub time: T,
    /// Label at `time` itself.
    pub label: StratumLabel,
    /// Classes just before and just after.
    pub before: IsoClass,
    pub after: IsoClass,
}

struct Walker<'p, T> {
    path: &'p PLPath<T>,
    opts: &'p CechOptions<T>,
    lipschitz: T,
    classes: RefCell<HashMap<SimplicialComplex, IsoClass>>,
}

impl<'p, T: Real> Walker<'p, T> {
    fn new(path: &'p PLPath<T>, opts: &'p CechOptions<T>) -> Self {
        Walker {
            path,
            opts,
            lipschitz: path.lipschitz(),
            classes: RefCell::new(HashMap::new()),
        }
    }

    fn complex_at(&self, t: T) -> Result<SimplicialComplex> {
        cech_complex(&evaluate(self.path, t)?, self.opts)
    }

    fn class_at(&self, t: T) -> Result<IsoClass> {
        let c = self.complex_at(t)?;
        if let Some(cls) = self.classes.borrow().get(&c) {
            return Ok(cls.clone());
        }
        let cls = canonical_form(&c)?;
        self.classes.borrow_mut().insert(c, cls.clone());
        Ok(cls)
    }

    /// Time span around `t_to` that stays inside its safe ball.
    fn safe_span(&self, t_to: T) -> Result<T> {
        let ball = tilde_r(&evaluate(self.path, t_to)?, self.opts)?;
        if self.lipschitz <= T::zero() {
            return Ok(T::infinity());
        }
        // dedupe may move a point by up to the merge tolerance at either end
        let usable = ball.safe_radius - T::lit(2.0) * self.path.merge_tolerance;
        Ok((T::lit(0.99) * usable / self.lipschitz).max(T::zero()))
    }

    /// Finds every class change in `[lo, hi]`, given the classes at both ends.
    fn locate(&self, mut lo: T, mut hi: T, a: IsoClass, b: IsoClass, width: T, out: &mut Vec<Transition<T>>) -> Result<()> {
        let half = T::lit(0.5);
        while hi - lo > width {
            let mid = (lo + hi) * half;
            let c = self.class_at(mid)?;
            if c == a {
                lo = mid;
            } else if c == b {
                hi = mid;
            } else {
                self.locate(lo, mid, a, c.clone(), width, out)?;
                return self.locate(mid, hi, c, b, width, out);
            }
        }
        // the instant carries the lower of the two side classes
        let left_lower = if dominates(b.canonical(), a.canonical())?.is_some() {
            true
        } else if dominates(a.canonical(), b.canonical())?.is_some() {
            false
        } else {
            return Err(Error::IncomparableTransition(((lo + hi) * half).as_f64()));
        };
        // narrow further until the far side of the bracket is inside the
        // safe ball of the instant, so entrance maps can reach it
        loop {
            let instant = if left_lower { lo } else { hi };
            if hi - lo < self.safe_span(instant)? {
                out.push(Transition {
                    time: instant,
                    label: stratum_label(&evaluate(self.path, instant)?, self.opts)?,
                    before: a,
                    after: b,
                });
                return Ok(());
            }
            let mid = (lo + hi) * half;
            if !(lo < mid && mid < hi) {
                return Err(Error::SafeBallUnreachable(instant.as_f64()));
            }
            let c = self.class_at(mid)?;
            if c == a {
                lo = mid;
            } else if c == b {
                hi = mid;
            } else {
                self.locate(lo, mid, a, c.clone(), width, out)?;
                return self.locate(mid, hi, c, b, width, out);
            }
        }
    }

    fn transitions(&self, resolution: T) -> Result<Vec<Transition<T>>> {
        if !(resolution > T::zero()) {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        let steps = (T::one() / resolution).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        let width = (resolution * T::lit(1e-3)).min(T::lit(1e-10));
        let time = |i: usize| T::lit(i as f64 / steps as f64);
        let mut out = Vec::new();
        let mut prev = self.class_at(T::zero())?;
        for i in 1..=steps {
            let cur = self.class_at(time(i))?;
            if cur != prev {
                self.locate(time(i - 1), time(i), prev, cur.clone(), width, &mut out)?;
            }
            prev = cur;
        }
        Ok(out)
    }

    /// Vertex map from `γ(t1)` to `γ(t2)` following the tracks; must be an
    /// isomorphism of the labeled complexes.
    fn renaming(&self, t1: T, t2: T) -> Result<SimplicialMap> {
        let violated = || Error::ConstancyViolated {
            from: t1.as_f64(),
            to: t2.as_f64(),
        };
        let (x1, a1) = evaluate_tracks(self.path, t1)?;
        let (x2, a2) = evaluate_tracks(self.path, t2)?;
        let mut vertex_map = vec![usize::MAX; x1.len()];
        for (&v, &w) in a1.iter().zip(&a2) {
            if vertex_map[v] != usize::MAX && vertex_map[v] != w {
                return Err(violated());
            }
            vertex_map[v] = w;
        }
        let (c1, c2) = (cech_complex(&x1, self.opts)?, cech_complex(&x2, self.opts)?);
        if c1.len() != c2.len() {
            return Err(violated());
        }
        let map = SimplicialMap::new(c1, c2, vertex_map).map_err(|_| violated())?;
        if !map.is_vertex_bijective() {
            return Err(violated());
        }
        Ok(map)
    }

    fn entrance_map(&self, t_from: T, t_to: T) -> Result<SimplicialMap> {
        check_time(t_from)?;
        check_time(t_to)?;
        let x_to = evaluate(self.path, t_to)?;
        let ball = tilde_r(&x_to, self.opts)?;
        let span = self.safe_span(t_to)?;
        let t_b = if t_from <= t_to {
            t_from.max(t_to - span)
        } else {
            t_from.min(t_to + span)
        };
        let renaming = self.renaming(t_from, t_b)?;
        let local = local_map_in(&evaluate(self.path, t_b)?, &ball, self.opts)?;
        compose(&renaming, &local)
    }
}

/// Times where the Čech class changes, with the label at each instant.
///
/// The path is sampled every `resolution`; each change is bisected to width
/// `min(resolution·1e-3, 1e-10)` and then until the bracket fits inside the
/// safe ball of the instant. The instant is the side whose class is dominated
/// by the other. Changes narrower than the sampling step can be missed.
pub fn transitions<T: Real>(path: &PLPath<T>, resolution: T, opts: &CechOptions<T>) -> Result<Vec<Transition<T>>> {
    Walker::new(path, opts).transitions(resolution)
}

/// Simplicial map `Č(γ(t_from)) → Č(γ(t_to))` induced by the path.
///
/// Follows the tracks from `t_from` to a time `t_b` whose point lies in the
/// safe ball of `γ(t_to)`, then applies [`local_map_in`]. The class must be
/// constant between `t_from` and `t_b`; `t_to` may lie on either side.
pub fn entrance_map<T: Real>(path: &PLPath<T>, t_from: T, t_to: T, opts: &CechOptions<T>) -> Result<SimplicialMap> {
    Walker::new(path, opts).entrance_map(t_from, t_to)
}

/// The maps into the complex at one transition instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionMaps {
    pub left: SimplicialMap,
    pub right: SimplicialMap,
}

/// Alternating sequence `I₀ → T₀ ← I₁ → T₁ ← … ← I_q` of complexes along a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ZigzagDiagram<T> {
    pub times: Vec<T>,
    pub interval_classes: Vec<StratumLabel>,
    pub transition_classes: Vec<StratumLabel>,
    pub maps: Vec<TransitionMaps>,
}

impl<T: Real> ZigzagDiagram<T> {
    /// Interval and transition classes interleaved, consecutive repeats removed.
    pub fn class_sequence(&self) -> Vec<IsoClass> {
        let mut seq: Vec<IsoClass> = Vec::new();
        for (i, iv) in self.interval_classes.iter().enumerate() {
            let mut push = |c: &IsoClass| {
                if seq.last() != Some(c) {
                    seq.push(c.clone());
                }
            };
            push(&iv.cls);
            if let Some(tr) = self.transition_classes.get(i) {
                push(&tr.cls);
            }
        }
        seq
    }
}

/// Zigzag of Čech complexes along `path`.
///
/// Each open interval between transitions is represented by its midpoint; at
/// each transition the entrance maps from both neighboring representatives
/// land in the complex at the instant.
pub fn zigzag<T: Real>(path: &PLPath<T>, resolution: T, opts: &CechOptions<T>) -> Result<ZigzagDiagram<T>> {
    let walker = Walker::new(path, opts);
    let found = walker.transitions(resolution)?;
    let times: Vec<T> = found.iter().map(|t| t.time).collect();
    let mut bounds = vec![T::zero()];
    bounds.extend(&times);
    bounds.push(T::one());
    let reps: Vec<T> = bounds.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5)).collect();
    let interval_classes = reps
        .iter()
        .map(|&t| stratum_label(&evaluate(path, t)?, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        maps.push(TransitionMaps {
            left: walker.entrance_map(reps[k], t)?,
            right: walker.entrance_map(reps[k + 1], t)?,
        });
    }
    Ok(ZigzagDiagram {
        times,
        interval_classes,
        transition_classes: found.into_iter().map(|t| t.label).collect(),
        maps,
    })
}

/// A chain `C₀ ≽ C₁ ≽ …` of classes on a fixed number of vertices, with
/// vertex-bijective simplicial maps between consecutive canonical complexes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassChain {
    pub classes: Vec<IsoClass>,
    pub maps: Vec<SimplicialMap>,
}

/// The filtration underlying a zigzag, if there is one.
///
/// Present iff every class on the zigzag has the same number of vertices and
/// the classes are totally ordered. The chain lists the distinct classes from
/// fewest to most simplices.
pub fn as_filtration<T: Real>(z: &ZigzagDiagram<T>) -> Option<ClassChain> {
    let mut classes: Vec<IsoClass> = z
        .interval_classes
        .iter()
        .chain(&z.transition_classes)
        .map(|l| l.cls.clone())
        .collect();
    let n = classes.first()?.n_vertices();
    if classes.iter().any(|c| c.n_vertices() != n) {
        return None;
    }
    classes.sort_by_key(|c| (c.canonical().len(), c.key().to_vec()));
    classes.dedup();
    let mut maps = Vec::new();
    for w in classes.windows(2) {
        let m = dominates(w[0].canonical(), w[1].canonical()).ok()??;
        maps.push(m);
    }
    Some(ClassChain { classes, maps })
}

/// The path `t ↦ (P, t/(1−t))` on `[0, t_max]`, held constant on `[t_max, 1]`.
///
/// Breakpoints are spaced so linear interpolation of the radius is within
/// 1e-6 of the exact value.
pub fn cech_path<T: Real>(config: &PointConfig<T>, t_max: T) -> Result<PLPath<T>> {
    if !(t_max > T::zero() && t_max < T::one()) {
        return Err(Error::InvalidArgument("t_max must lie in (0, 1)".into()));
    }
    let f = |t: T| t / (T::one() - t);
    // chord error on a step h is at most h²/8 · max f'', with f'' = 2/(1−t)³
    let tol = T::lit(1e-6);
    let step = |t_end: T| (T::lit(8.0) * tol * (T::one() - t_end).powi(3) / T::lit(2.0)).sqrt();
    let mut ts = vec![T::zero()];
    let mut t = T::zero();
    while t < t_max {
        let mut h = step(t);
        h = step((t + h).min(t_max));
        h = step((t + h).min(t_max));
        t = (t + h).min(t_max);
        ts.push(t);
    }
    if t_max < T::one() {
        ts.push(T::one());
    }
    let radius: Vec<T> = ts.iter().map(|&t| f(t.min(t_max))).collect();
    let tracks = config
        .points()
        .iter()
        .map(|p| vec![p.clone(); ts.len()])
        .collect();
    PLPath::new(config.dim(), ts, tracks, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::cech_filtration;
    use crate::complexes::make_complex;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn opts() -> CechOptions<f64> {
        CechOptions::default()
    }

    fn cls(c: SimplicialComplex) -> IsoClass {
        canonical_form(&c).unwrap()
    }

    fn two_points_ramp(r0: f64, r1: f64) -> PLPath<f64> {
        PLPath::new(1, vec![0.0, 1.0], vec![vec![vec![0.0]; 2], vec![vec![1.0]; 2]], vec![r0, r1]).unwrap()
    }

    fn merging() -> PLPath<f64> {
        PLPath::new(1, vec![0.0, 1.0], vec![vec![vec![0.0]; 2], vec![vec![1.0], vec![0.0]]], vec![0.0, 0.0]).unwrap()
    }

    fn triangle() -> PointConfig<f64> {
        PointConfig::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap()
    }

    #[test]
    fn construction_errors() {
        let ok_tracks = vec![vec![vec![0.0]; 2]];
        assert!(PLPath::new(1, vec![0.0, 0.5], ok_tracks.clone(), vec![0.0, 0.0]).is_err());
        assert!(PLPath::new(1, vec![0.0, 1.0], ok_tracks.clone(), vec![0.0, -1.0]).is_err());
        assert!(PLPath::new(1, vec![0.0, 1.0], vec![], vec![0.0, 0.0]).is_err());
        assert!(PLPath::new(2, vec![0.0, 1.0], ok_tracks, vec![0.0, 0.0]).is_err());
        // tracks crossing through each other
        let crossing = vec![vec![vec![0.0], vec![1.0]], vec![vec![1.0], vec![0.0]]];
        assert!(matches!(
            PLPath::new(1, vec![0.0, 1.0], crossing, vec![0.0, 0.0]),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let p = two_points_ramp(0.2, 0.4);
        let x = evaluate(&p, 1.0).unwrap();
        assert_eq!(x.radius, 0.4);
        assert_eq!(x.config.points(), &[vec![0.0], vec![1.0]]);
        assert_abs_diff_eq!(evaluate(&p, 0.5).unwrap().radius, 0.3, epsilon = 1e-15);

        let (x, asg) = evaluate_tracks(&merging(), 1.0).unwrap();
        assert_eq!(x.config.points(), &[vec![0.0]]);
        assert_eq!(asg, vec![0, 0]);
        let x = evaluate(&merging(), 0.5).unwrap();
        assert_eq!(x.config.points(), &[vec![0.0], vec![0.5]]);

        assert!(matches!(evaluate(&p, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn constant_path_has_no_transitions() {
        let p = two_points_ramp(0.2, 0.2);
        assert!(transitions(&p, 0.01, &opts()).unwrap().is_empty());
        let z = zigzag(&p, 0.01, &opts()).unwrap();
        assert_eq!(z.interval_classes.len(), 1);
        assert!(z.maps.is_empty());
    }

    #[test]
    fn radius_ramp_over_two_points() {
        let p = two_points_ramp(0.0, 1.0);
        let tr = transitions(&p, 0.01, &opts()).unwrap();
        assert_eq!(tr.len(), 1);
        assert_abs_diff_eq!(tr[0].time, 0.5, epsilon = 1e-8);
        let edge = cls(make_complex(2, &[[0, 1]]).unwrap());
        let two = cls(SimplicialComplex::discrete(2).unwrap());
        assert_eq!(tr[0].label.cls, edge);
        assert!(tr[0].label.degenerate);
        assert_eq!((tr[0].before.clone(), tr[0].after.clone()), (two.clone(), edge.clone()));

        let z = zigzag(&p, 0.01, &opts()).unwrap();
        assert_eq!(z.class_sequence(), vec![two.clone(), edge.clone()]);
        let m = &z.maps[0];
        assert_eq!(m.left.vertex_map(), &[0, 1]);
        assert_eq!(m.right.vertex_map(), &[0, 1]);
        assert_eq!(m.right.source(), m.right.target());

        let chain = as_filtration(&z).unwrap();
        assert_eq!(chain.classes, vec![two, edge]);
        assert!(chain.maps.iter().all(SimplicialMap::is_vertex_bijective));
    }

    #[test]
    fn triangle_cech_path() {
        let p = cech_path(&triangle(), 0.9).unwrap();
        let tr = transitions(&p, 1e-3, &opts()).unwrap();
        assert_eq!(tr.len(), 2);
        assert_abs_diff_eq!(tr[0].time, 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(tr[1].time, 1.0 / (3f64.sqrt() + 1.0), epsilon = 1e-6);

        let discrete = cls(SimplicialComplex::discrete(3).unwrap());
        let cycle = cls(make_complex(3, &[[0, 1], [1, 2], [0, 2]]).unwrap());
        let filled = cls(SimplicialComplex::full(3).unwrap());
        let z = zigzag(&p, 1e-3, &opts()).unwrap();
        assert_eq!(z.class_sequence(), vec![discrete.clone(), cycle.clone(), filled.clone()]);
        assert_eq!(z.transition_classes[0].cls, cycle);
        assert_eq!(z.transition_classes[1].cls, filled);
        for m in &z.maps {
            for f in [&m.left, &m.right] {
                assert!(f.is_simplicial() && f.is_vertex_surjective());
            }
        }
        let chain = as_filtration(&z).unwrap();
        assert_eq!(chain.classes, vec![discrete, cycle, filled]);
    }

    #[test]
    fn cech_path_shape() {
        let p = cech_path(&PointConfig::on_line(&[0.0]).unwrap(), 0.5).unwrap();
        assert_eq!(*p.radius().last().unwrap(), 1.0);
        assert_abs_diff_eq!(evaluate(&p, 0.5).unwrap().radius, 1.0, epsilon = 1e-12);
        assert!(transitions(&p, 0.01, &opts()).unwrap().is_empty());
        // interpolation error stays below 1e-6 between breakpoints
        let q = cech_path(&triangle(), 0.9).unwrap();
        for w in q.breakpoints().windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            if t < 0.9 {
                let r = evaluate(&q, t).unwrap().radius;
                assert!((r - t / (1.0 - t)).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn entrance_map_examples() {
        // renaming along a constant stretch
        let p = two_points_ramp(0.2, 0.3);
        let m = entrance_map(&p, 0.0, 1.0, &opts()).unwrap();
        assert_eq!(m.vertex_map(), &[0, 1]);

        let m = entrance_map(&merging(), 0.5, 1.0, &opts()).unwrap();
        assert_eq!(m.vertex_map(), &[0, 0]);
        assert_eq!(m.target().n_vertices(), 1);

        let p = two_points_ramp(0.4, 0.5);
        let m = entrance_map(&p, 0.0, 1.0, &opts()).unwrap();
        assert_eq!(m.vertex_map(), &[0, 1]);
        assert_eq!(m.source(), &SimplicialComplex::discrete(2).unwrap());
        assert_eq!(m.target(), &make_complex(2, &[[0, 1]]).unwrap());
        assert!(m.is_vertex_surjective());

        // merging is not a constant stretch
        assert!(matches!(
            entrance_map(&merging(), 1.0, 0.0, &opts()),
            Err(Error::ConstancyViolated { .. }) | Err(Error::OutsideSafeBall { .. })
        ));
    }

    #[test]
    fn merging_tracks_are_not_a_filtration() {
        let z = zigzag(&merging(), 0.01, &opts()).unwrap();
        assert_eq!(z.times.len(), 1);
        assert_eq!(z.transition_classes[0].cls.n_vertices(), 1);
        assert_eq!(z.maps[0].left.vertex_map(), &[0, 0]);
        assert!(as_filtration(&z).is_none());
    }

    #[test]
    fn functoriality_on_constant_stretch() {
        let p = two_points_ramp(0.0, 1.0);
        let (t0, t1, t2) = (0.1, 0.3, 0.45);
        let o = opts();
        let w = Walker::new(&p, &o);
        let direct = w.entrance_map(t0, t2).unwrap();
        let split = compose(&w.renaming(t0, t1).unwrap(), &w.entrance_map(t1, t2).unwrap()).unwrap();
        assert_eq!(direct, split);
    }

    #[test]
    fn reversal_reflects_the_zigzag() {
        let p = cech_path(&triangle(), 0.9).unwrap();
        let z = zigzag(&p, 1e-3, &opts()).unwrap();
        let r = zigzag(&p.reversed(), 1e-3, &opts()).unwrap();
        assert_eq!(z.times.len(), r.times.len());
        for (a, b) in z.times.iter().zip(r.times.iter().rev()) {
            assert_abs_diff_eq!(*a, 1.0 - b, epsilon = 1e-8);
        }
        let mut seq = r.class_sequence();
        seq.reverse();
        assert_eq!(z.class_sequence(), seq);
        for (m, n) in z.maps.iter().zip(r.maps.iter().rev()) {
            assert_eq!(m.left.source(), n.right.source());
            assert_eq!(m.right.source(), n.left.source());
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = two_points_ramp(0.0, 1.0);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with("{\"dim\":1,\"breakpoints\""));
        assert_eq!(serde_json::from_str::<PLPath<f64>>(&s).unwrap(), p);
        let z = zigzag(&p, 0.01, &opts()).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(serde_json::from_str::<ZigzagDiagram<f64>>(&s).unwrap(), z);
    }

    fn arb_config() -> impl Strategy<Value = PointConfig<f64>> {
        prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 2), 1..=4)
            .prop_filter_map("distinct", |pts| PointConfig::new(2, pts).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn zigzag_matches_filtration(p in arb_config()) {
            let path = cech_path(&p, 0.9).unwrap();
            let z = zigzag(&path, 1e-3, &opts()).unwrap();
            let f = cech_filtration(&p, &opts()).unwrap();
            let expected: Vec<IsoClass> = f
                .critical_radii()
                .iter()
                .zip(f.classes().unwrap())
                .filter(|(r, _)| **r < 9.0)
                .map(|(_, c)| c)
                .collect();
            prop_assert_eq!(z.class_sequence(), expected);
            for m in &z.maps {
                prop_assert!(m.left.is_simplicial() && m.left.is_vertex_surjective());
                prop_assert!(m.right.is_simplicial() && m.right.is_vertex_surjective());
            }
        }
    }
}
