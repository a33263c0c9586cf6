//! Čech complexes and Čech filtrations of Euclidean point configurations.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::complexes::{canonical_form, IsoClass, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{meb, PointConfig, RanPoint};
use crate::scalar::Real;

/// Configurations up to this size may be scanned without a dimension cap.
pub const UNCAPPED_POINTS: usize = 8;

/// Knobs shared by the Čech and stratification code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CechOptions<T> {
    /// Largest simplex dimension considered. Required above [`UNCAPPED_POINTS`] points.
    pub max_dim: Option<usize>,
    /// Width of the band in which a Čech radius counts as zero.
    pub eps_geo: T,
}

impl<T: Real> Default for CechOptions<T> {
    fn default() -> Self {
        CechOptions {
            max_dim: None,
            eps_geo: T::default_eps(),
        }
    }
}

impl<T: Real> CechOptions<T> {
    pub fn with_max_dim(max_dim: usize) -> Self {
        CechOptions {
            max_dim: Some(max_dim),
            ..Self::default()
        }
    }

    /// Largest subset size to scan for a configuration of `n` points.
    pub fn max_subset_size(&self, n: usize) -> Result<usize> {
        match self.max_dim {
            Some(d) => Ok(n.min(d + 1)),
            None if n > UNCAPPED_POINTS => Err(Error::MaxDimRequired {
                size: n,
                cap: UNCAPPED_POINTS,
            }),
            None => Ok(n),
        }
    }
}

/// Every subset of `0..n` with `2 ≤ |σ| ≤ max_size`, grouped by size, each group in mask order.
pub fn subsets(n: usize, max_size: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    for k in 2..=max_size.min(n) {
        let mut level: Vec<u64> = Vec::new();
        combinations(n, k, 0, 0, &mut level);
        level.sort_unstable();
        out.extend(level.into_iter().filter_map(Simplex::from_mask));
    }
    out
}

fn combinations(n: usize, k: usize, start: usize, mask: u64, out: &mut Vec<u64>) {
    if k == 0 {
        out.push(mask);
        return;
    }
    for v in start..=n - k {
        combinations(n, k - 1, v + 1, mask | (1 << v), out);
    }
}

/// Minimum enclosing ball radius of every subset with at least two points.
pub fn subset_radii<T: Real>(config: &PointConfig<T>, opts: &CechOptions<T>) -> Result<Vec<(Simplex, T)>> {
    let k = opts.max_subset_size(config.len())?;
    Ok(subsets(config.len(), k)
        .into_iter()
        .map(|s| (s, meb(&config.subset(&s.to_vec())).radius))
        .collect())
}

/// Čech complex of `x`: a subset spans a simplex iff its closed `r`-balls share a point.
///
/// Membership is `meb(σ).radius ≤ r + eps_geo`. Candidates of size `k` are only
/// tested when all their faces are present, which is exact because the
/// enclosing radius is monotone under inclusion.
pub fn cech_complex<T: Real>(x: &RanPoint<T>, opts: &CechOptions<T>) -> Result<SimplicialComplex> {
    let config = &x.config;
    let n = config.len();
    let max_size = opts.max_subset_size(n)?;
    let threshold = x.radius + opts.eps_geo;
    let mut present: HashSet<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut frontier: Vec<Simplex> = (0..n).map(Simplex::singleton).collect();
    for _ in 2..=max_size {
        let mut next = Vec::new();
        for s in &frontier {
            for v in s.max_vertex() + 1..n {
                let cand = Simplex::from_mask(s.mask() | (1 << v)).expect("nonempty");
                if !cand.boundary().all(|f| present.contains(&f.mask())) {
                    continue;
                }
                if meb(&config.subset(&cand.to_vec())).radius <= threshold {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        present.extend(next.iter().map(|s| s.mask()));
        frontier = next;
    }
    SimplicialComplex::from_simplices(n, present.into_iter().filter_map(Simplex::from_mask))
}

/// The Čech filtration of a configuration as a finite list of closed-left intervals.
///
/// `complexes[i]` is the complex on `[critical_radii[i], critical_radii[i+1])`,
/// the last one on `[critical_radii.last(), ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Filtration<T> {
    #[serde(rename = "points")]
    config: PointConfig<T>,
    critical_radii: Vec<T>,
    complexes: Vec<SimplicialComplex>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct FiltrationRepr<T> {
    points: PointConfig<T>,
    critical_radii: Vec<T>,
    complexes: Vec<SimplicialComplex>,
}

impl<'de, T: Real> Deserialize<'de> for Filtration<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = FiltrationRepr::<T>::deserialize(deserializer)?;
        let f = Filtration {
            config: r.points,
            critical_radii: r.critical_radii,
            complexes: r.complexes,
        };
        f.validate().map_err(serde::de::Error::custom)?;
        Ok(f)
    }
}

impl<T: Real> Filtration<T> {
    pub fn config(&self) -> &PointConfig<T> {
        &self.config
    }

    pub fn critical_radii(&self) -> &[T] {
        &self.critical_radii
    }

    pub fn complexes(&self) -> &[SimplicialComplex] {
        &self.complexes
    }

    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    /// Index of the interval containing `r`.
    pub fn interval_of(&self, r: T) -> usize {
        self.critical_radii.partition_point(|&c| c <= r).saturating_sub(1)
    }

    /// Stored complex for radius `r`.
    pub fn complex_at(&self, r: T) -> &SimplicialComplex {
        &self.complexes[self.interval_of(r)]
    }

    /// Isomorphism classes of the stored complexes, in order.
    pub fn classes(&self) -> Result<Vec<IsoClass>> {
        self.complexes.iter().map(canonical_form).collect()
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(format!("filtration: {msg}")));
        if self.critical_radii.len() != self.complexes.len() || self.complexes.is_empty() {
            return bad("needs one complex per critical radius");
        }
        if self.critical_radii[0] != T::zero() {
            return bad("first critical radius must be 0");
        }
        if self.critical_radii.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("critical radii must increase strictly");
        }
        for c in &self.complexes {
            c.validate()?;
            if c.n_vertices() != self.config.len() {
                return bad("complex vertex count differs from the configuration");
            }
        }
        if self.complexes.windows(2).any(|w| !w[0].is_subcomplex_of(&w[1])) {
            return bad("complexes must be nested");
        }
        Ok(())
    }
}

/// Čech filtration of `config`.
///
/// Critical radii are 0 and the enclosing radii of all scanned subsets,
/// sorted, with values within `eps_geo` of the previously kept radius merged.
pub fn cech_filtration<T: Real>(config: &PointConfig<T>, opts: &CechOptions<T>) -> Result<Filtration<T>> {
    let mut radii: Vec<T> = subset_radii(config, opts)?.into_iter().map(|(_, r)| r).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    let mut critical = vec![T::zero()];
    for r in radii {
        if r - *critical.last().expect("nonempty") > opts.eps_geo {
            critical.push(r);
        }
    }
    let complexes = critical
        .iter()
        .map(|&r| cech_complex(&RanPoint::new(config.clone(), r)?, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filtration {
        config: config.clone(),
        critical_radii: critical,
        complexes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::make_complex;
    use crate::scposet::class_geq;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn opts() -> CechOptions<f64> {
        CechOptions::default()
    }

    fn at(config: &PointConfig<f64>, r: f64) -> SimplicialComplex {
        cech_complex(&RanPoint::new(config.clone(), r).unwrap(), &opts()).unwrap()
    }

    fn triangle() -> PointConfig<f64> {
        PointConfig::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap()
    }

    #[test]
    fn subsets_are_grouped_by_size() {
        let s = subsets(4, 3);
        assert_eq!(s.len(), 6 + 4);
        assert!(s.windows(2).all(|w| w[0].len() <= w[1].len()));
        assert!(subsets(1, 5).is_empty());
    }

    #[test]
    fn two_points() {
        let p = PointConfig::on_line(&[0.0, 1.0]).unwrap();
        assert_eq!(at(&p, 0.4), SimplicialComplex::discrete(2).unwrap());
        assert_eq!(at(&p, 0.5), make_complex(2, &[[0, 1]]).unwrap());
    }

    #[test]
    fn equilateral_triangle() {
        let t = triangle();
        assert_eq!(at(&t, 0.55), make_complex(3, &[[0, 1], [1, 2], [0, 2]]).unwrap());
        assert_eq!(at(&t, 0.58), SimplicialComplex::full(3).unwrap());
    }

    #[test]
    fn max_dim_caps_simplices() {
        let t = triangle();
        let x = RanPoint::new(t, 1.0).unwrap();
        let c = cech_complex(&x, &CechOptions::with_max_dim(1)).unwrap();
        assert_eq!(c.dimension(), 1);
        let many = PointConfig::new(1, (0..9).map(|i| vec![i as f64]).collect()).unwrap();
        let x = RanPoint::new(many, 0.1).unwrap();
        assert_eq!(
            cech_complex(&x, &opts()),
            Err(Error::MaxDimRequired { size: 9, cap: 8 })
        );
        assert!(cech_complex(&x, &CechOptions::with_max_dim(2)).is_ok());
    }

    #[test]
    fn filtration_examples() {
        let single = cech_filtration(&PointConfig::on_line(&[3.0]).unwrap(), &opts()).unwrap();
        assert_eq!(single.critical_radii(), &[0.0]);
        assert_eq!(single.complexes(), &[SimplicialComplex::discrete(1).unwrap()]);

        let pair = cech_filtration(&PointConfig::on_line(&[0.0, 1.0]).unwrap(), &opts()).unwrap();
        assert_eq!(pair.critical_radii(), &[0.0, 0.5]);
        assert_eq!(
            pair.complexes(),
            &[SimplicialComplex::discrete(2).unwrap(), make_complex(2, &[[0, 1]]).unwrap()]
        );

        let tri = cech_filtration(&triangle(), &opts()).unwrap();
        let r = tri.critical_radii();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], 0.0);
        assert_abs_diff_eq!(r[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r[2], 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(tri.complexes()[0], SimplicialComplex::discrete(3).unwrap());
        assert_eq!(tri.complexes()[1], make_complex(3, &[[0, 1], [1, 2], [0, 2]]).unwrap());
        assert_eq!(tri.complexes()[2], SimplicialComplex::full(3).unwrap());
    }

    #[test]
    fn filtration_json_roundtrip() {
        let f = cech_filtration(&triangle(), &opts()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("points").is_some() && v.get("critical_radii").is_some());
        let back: Filtration<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let broken = s.replace("\"critical_radii\":[0.0,", "\"critical_radii\":[0.1,");
        assert!(serde_json::from_str::<Filtration<f64>>(&broken).is_err());
    }

    #[test]
    fn single_precision() {
        let t = PointConfig::<f32>::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.866_025_4]]).unwrap();
        let f = cech_filtration(&t, &CechOptions::default()).unwrap();
        assert_eq!(f.len(), 3);
        assert!((f.critical_radii()[2] - 0.577_350_26).abs() < 1e-5);
    }

    fn arb_config() -> impl Strategy<Value = PointConfig<f64>> {
        prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 2), 1..=5)
            .prop_filter_map("distinct", |pts| PointConfig::new(2, pts).ok())
    }

    proptest! {
        #[test]
        fn radius_monotonicity(p in arb_config(), a in 0.0..1.5f64, b in 0.0..1.5f64) {
            let (r, s) = (a.min(b), a.max(b));
            let (cr, cs) = (at(&p, r), at(&p, s));
            prop_assert!(cr.is_subcomplex_of(&cs));
            let id: Vec<usize> = (0..p.len()).collect();
            prop_assert!(crate::complexes::is_simplicial(&cr, &cs, &id));
            prop_assert!(class_geq(&cr, &cs).unwrap());
        }

        #[test]
        fn filtration_intervals_partition(p in arb_config()) {
            let f = cech_filtration(&p, &opts()).unwrap();
            let r = f.critical_radii();
            for i in 0..f.len() {
                let lo = r[i];
                let hi = if i + 1 < r.len() { r[i + 1] } else { lo + 1.0 };
                // membership is tolerant, so the switch to the next complex
                // happens eps_geo before the next critical radius
                for s in [lo, (lo + hi) / 2.0, hi - (hi - lo) * 1e-3] {
                    if hi - s <= 2e-9 {
                        continue;
                    }
                    prop_assert_eq!(&at(&p, s), &f.complexes()[i]);
                    prop_assert_eq!(f.interval_of(s), i);
                }
            }
        }

        #[test]
        fn complex_matches_subset_scan(p in arb_config(), r in 0.0..1.5f64) {
            // every subset, tested independently of the face pruning
            let c = at(&p, r);
            for (s, rad) in subset_radii(&p, &opts()).unwrap() {
                prop_assert_eq!(c.contains(s), rad <= r + 1e-9);
            }
        }
    }
}
