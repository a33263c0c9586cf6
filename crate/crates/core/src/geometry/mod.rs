//! Finite point configurations in Euclidean space and the metrics on them.
//!
//! A [`PointConfig`] is an element of the Ran space of `ℝᵈ`: a nonempty finite
//! set of pairwise distinct points. [`RanPoint`] pairs it with a radius.

mod meb;

pub use meb::{cech_radius, cech_radius_literal, cech_set, meb, meb_of_subset, Ball};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nonempty set of pairwise distinct points in `ℝ^dim`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointConfig<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct ConfigRepr<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<'de, T: Real> Deserialize<'de> for PointConfig<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = ConfigRepr::<T>::deserialize(deserializer)?;
        PointConfig::new(r.dim, r.points).map_err(serde::de::Error::custom)
    }
}

impl<T: Real> PointConfig<T> {
    /// Validates with the default dedupe tolerance.
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        Self::with_tolerance(dim, points, T::default_delta())
    }

    /// Validates shape, finiteness and pairwise distance `> delta`.
    pub fn with_tolerance(dim: usize, points: Vec<Vec<T>>, delta: T) -> Result<Self> {
        check_shape(dim, &points)?;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if dist(&points[i], &points[j]) <= delta {
                    return Err(Error::DuplicatePoints {
                        first: i,
                        second: j,
                        tolerance: delta.as_f64(),
                    });
                }
            }
        }
        Ok(PointConfig { dim, points })
    }

    /// Merges points closer than `delta`.
    ///
    /// Returns the configuration and, for every input point, the index of the
    /// output point it was merged into. Output points appear in order of their
    /// first input occurrence and keep that occurrence's coordinates.
    pub fn deduped(dim: usize, points: Vec<Vec<T>>, delta: T) -> Result<(Self, Vec<usize>)> {
        check_shape(dim, &points)?;
        let n = points.len();
        // union-find over the "within delta" graph
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist(&points[i], &points[j]) <= delta {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut assignment = vec![0; n];
        let mut kept = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = kept.len();
                kept.push(points[i].clone());
            }
            assignment[i] = slot[root];
        }
        Ok((PointConfig { dim, points: kept }, assignment))
    }

    /// Points on the real line.
    pub fn on_line(xs: &[T]) -> Result<Self> {
        Self::new(1, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.points[i]
    }

    /// Borrowed view of the points indexed by `subset`.
    pub fn subset(&self, subset: &[usize]) -> Vec<&[T]> {
        subset.iter().map(|&i| self.points[i].as_slice()).collect()
    }

    pub fn as_slices(&self) -> Vec<&[T]> {
        self.points.iter().map(Vec::as_slice).collect()
    }
}

fn check_shape<T: Real>(dim: usize, points: &[Vec<T>]) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if points.is_empty() {
        return Err(Error::EmptyConfig);
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
    }
    Ok(())
}

/// A point of `Ran(ℝᵈ) × ℝ≥0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RanPoint<T> {
    pub config: PointConfig<T>,
    pub radius: T,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RanRepr<T> {
    config: PointConfig<T>,
    radius: T,
}

impl<'de, T: Real> Deserialize<'de> for RanPoint<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = RanRepr::<T>::deserialize(deserializer)?;
        RanPoint::new(r.config, r.radius).map_err(serde::de::Error::custom)
    }
}

impl<T: Real> RanPoint<T> {
    pub fn new(config: PointConfig<T>, radius: T) -> Result<Self> {
        if !radius.is_finite() || radius < T::zero() {
            return Err(Error::InvalidRadius(radius.as_f64()));
        }
        Ok(RanPoint { config, radius })
    }

    pub fn len(&self) -> usize {
        self.config.len()
    }

    pub fn is_empty(&self) -> bool {
        self.config.is_empty()
    }
}

/// Euclidean distance.
#[inline]
pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    dist_sq(a, b).sqrt()
}

#[inline]
pub fn dist_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

fn same_dim<T>(p: &PointConfig<T>, q: &PointConfig<T>) -> Result<()> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            left: p.dim,
            right: q.dim,
        });
    }
    Ok(())
}

/// `max_{p∈P} min_{q∈Q} d(p, q)`.
pub fn directed_hausdorff<T: Real>(p: &PointConfig<T>, q: &PointConfig<T>) -> Result<T> {
    same_dim(p, q)?;
    Ok(p.points
        .iter()
        .map(|a| nearest(a, &q.points))
        .fold(T::zero(), T::max))
}

fn nearest<T: Real>(a: &[T], set: &[Vec<T>]) -> T {
    set.iter().map(|b| dist(a, b)).fold(T::infinity(), T::min)
}

/// Hausdorff distance between two finite configurations.
pub fn hausdorff<T: Real>(p: &PointConfig<T>, q: &PointConfig<T>) -> Result<T> {
    Ok(directed_hausdorff(p, q)?.max(directed_hausdorff(q, p)?))
}

/// Infimum of pairwise distances between two finite sets.
pub fn set_distance<T: Real>(x: &PointConfig<T>, y: &PointConfig<T>) -> Result<T> {
    same_dim(x, y)?;
    Ok(x.points
        .iter()
        .map(|a| nearest(a, &y.points))
        .fold(T::infinity(), T::min))
}

/// Distance from a finite set to a single point.
pub fn point_set_distance<T: Real>(x: &[&[T]], p: &[T]) -> T {
    x.iter().map(|a| dist(a, p)).fold(T::infinity(), T::min)
}

/// Sup-norm distance on `Ran(ℝᵈ) × ℝ≥0`.
pub fn sup_distance<T: Real>(a: &RanPoint<T>, b: &RanPoint<T>) -> Result<T> {
    Ok(hausdorff(&a.config, &b.config)?.max((a.radius - b.radius).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> PointConfig<f64> {
        PointConfig::on_line(xs).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let p = line(&[0.0, 1.0]);
        assert_eq!(hausdorff(&p, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(hausdorff(&line(&[0.0]), &line(&[0.0, 1.0])).unwrap(), 1.0);
        assert_abs_diff_eq!(hausdorff(&p, &line(&[0.1, 0.9])).unwrap(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn set_distance_examples() {
        assert_eq!(set_distance(&line(&[2.0]), &line(&[2.0])).unwrap(), 0.0);
        assert_abs_diff_eq!(set_distance(&line(&[0.0]), &line(&[3.0, 5.0])).unwrap(), 3.0);
    }

    #[test]
    fn sup_distance_examples() {
        let a = RanPoint::new(line(&[0.0]), 0.3).unwrap();
        assert_eq!(sup_distance(&a, &a).unwrap(), 0.0);
        let b = RanPoint::new(line(&[0.0, 1.0]), 0.2).unwrap();
        let c = RanPoint::new(line(&[0.0, 1.0]), 0.7).unwrap();
        assert_abs_diff_eq!(sup_distance(&b, &c).unwrap(), 0.5);
        let d = RanPoint::new(line(&[0.0]), 0.4).unwrap();
        let e = RanPoint::new(line(&[1.0]), 0.4).unwrap();
        assert_abs_diff_eq!(sup_distance(&d, &e).unwrap(), 1.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = line(&[0.0]);
        let q = PointConfig::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hausdorff(&p, &q), Err(Error::DimensionMismatch { .. })));
        assert!(set_distance(&p, &q).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(PointConfig::<f64>::new(1, vec![]), Err(Error::EmptyConfig));
        assert!(matches!(
            PointConfig::new(1, vec![vec![0.0], vec![1e-12]]),
            Err(Error::DuplicatePoints { first: 0, second: 1, .. })
        ));
        assert!(matches!(
            PointConfig::new(2, vec![vec![0.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(PointConfig::new(1, vec![vec![f64::NAN]]).is_err());
        assert!(RanPoint::new(line(&[0.0]), -0.1).is_err());
    }

    #[test]
    fn dedupe_merges_close_points() {
        let (c, assign) =
            PointConfig::deduped(1, vec![vec![0.0], vec![1.0], vec![1e-12], vec![1.0 + 1e-11]], 1e-9).unwrap();
        assert_eq!(c.points(), &[vec![0.0], vec![1.0]]);
        assert_eq!(assign, vec![0, 1, 0, 1]);
    }

    #[test]
    fn json_roundtrip() {
        let p = PointConfig::new(2, vec![vec![0.0, 1.5], vec![-2.0, 0.25]]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"dim":2,"points":[[0.0,1.5],[-2.0,0.25]]}"#);
        assert_eq!(serde_json::from_str::<PointConfig<f64>>(&s).unwrap(), p);
        assert!(serde_json::from_str::<PointConfig<f64>>(r#"{"dim":1,"points":[[0.0],[0.0]]}"#).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let p = PointConfig::<f32>::on_line(&[0.0, 1.0]).unwrap();
        let q = PointConfig::<f32>::on_line(&[0.1, 0.9]).unwrap();
        assert!((hausdorff(&p, &q).unwrap() - 0.1).abs() < 1e-6);
    }

    fn arb_config() -> impl Strategy<Value = PointConfig<f64>> {
        proptest::collection::vec(proptest::collection::vec(-5.0..5.0f64, 2), 1..6)
            .prop_filter_map("distinct", |pts| PointConfig::new(2, pts).ok())
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(p in arb_config(), q in arb_config(), r in arb_config()) {
            let pq = hausdorff(&p, &q).unwrap();
            prop_assert_eq!(pq, hausdorff(&q, &p).unwrap());
            prop_assert_eq!(hausdorff(&p, &p).unwrap(), 0.0);
            prop_assert!(pq <= hausdorff(&p, &r).unwrap() + hausdorff(&r, &q).unwrap() + 1e-12);
        }

        #[test]
        fn set_distance_bounded_by_hausdorff(p in arb_config(), q in arb_config()) {
            prop_assert!(set_distance(&p, &q).unwrap() <= hausdorff(&p, &q).unwrap());
        }
    }
}
