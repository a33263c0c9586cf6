//! Monte-Carlo check of the frontier condition between two strata.
//!
//! The frontier condition fails for a pair `(a, b)` when some point of `b`
//! lies in the closure of `a` while another point of `b` does not. The
//! checker looks for both kinds of witness inside a parametrized family of
//! Ran-space points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{stratum_label, StratumLabel};
use crate::cech::CechOptions;
use crate::complexes::{canonical_form, IsoClass, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{sup_distance, PointConfig, RanPoint};
use crate::scalar::Real;

/// How much of a [`StratumLabel`] identifies a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// Čech class only.
    Coarse,
    /// Čech class and whether some subset sits at its critical radius.
    Refined,
}

/// Stratum identifier used by the checker.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumKey {
    #[serde(rename = "class")]
    pub cls: IsoClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
}

impl StratumKey {
    pub fn coarse(cls: IsoClass) -> Self {
        StratumKey { cls, degenerate: None }
    }

    pub fn refined(cls: IsoClass, degenerate: bool) -> Self {
        StratumKey {
            cls,
            degenerate: Some(degenerate),
        }
    }

    pub fn of(label: &StratumLabel, mode: LabelMode) -> Self {
        match mode {
            LabelMode::Coarse => Self::coarse(label.cls.clone()),
            LabelMode::Refined => Self::refined(label.cls.clone(), label.degenerate),
        }
    }

    pub fn mode(&self) -> LabelMode {
        match self.degenerate {
            None => LabelMode::Coarse,
            Some(_) => LabelMode::Refined,
        }
    }
}

type Builder<'a, T> = Box<dyn Fn(&[T]) -> Result<RanPoint<T>> + 'a>;

/// A family of Ran-space points parametrized by a box.
pub struct FamilySampler<'a, T> {
    lo: Vec<T>,
    hi: Vec<T>,
    build: Builder<'a, T>,
}

impl<'a, T: Real> FamilySampler<'a, T> {
    /// `build` may reject parameters (for example coinciding points); such
    /// samples are skipped.
    pub fn new(lo: Vec<T>, hi: Vec<T>, build: impl Fn(&[T]) -> Result<RanPoint<T>> + 'a) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidArgument("parameter box needs matching nonempty bounds".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidArgument("parameter box must have lo < hi".into()));
        }
        Ok(FamilySampler {
            lo,
            hi,
            build: Box::new(build),
        })
    }

    pub fn point(&self, theta: &[T]) -> Result<RanPoint<T>> {
        (self.build)(theta)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<T> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| a + (b - a) * T::lit(rng.gen::<f64>()))
            .collect()
    }

    fn draw_near(&self, center: &[T], radius: T, rng: &mut ChaCha8Rng) -> Vec<T> {
        center
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&c, (&a, &b))| {
                let lo = (c - radius).max(a);
                let hi = (c + radius).min(b);
                lo + (hi - lo) * T::lit(rng.gen::<f64>())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierOptions<T> {
    pub n_samples: usize,
    /// Parameter-space radius of the probe balls used for interior witnesses.
    pub probe_radius: T,
    pub n_probes: usize,
    pub seed: u64,
    pub cech: CechOptions<T>,
}

impl<T: Real> Default for FrontierOptions<T> {
    fn default() -> Self {
        FrontierOptions {
            n_samples: 2000,
            probe_radius: T::lit(0.05),
            n_probes: 200,
            seed: 0,
            cech: CechOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Violated,
    SatisfiedAtBudget,
    Inconclusive,
}

/// A point of stratum `b` approached by points of stratum `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BoundaryWitness<T> {
    pub point: RanPoint<T>,
    /// Points of stratum `a`, ordered by decreasing distance to `point`.
    pub approach: Vec<RanPoint<T>>,
    /// Sup distance from the last approach point to `point`.
    pub gap: T,
}

/// A point of stratum `b` whose probe ball contains no point of stratum `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct InteriorWitness<T> {
    pub point: RanPoint<T>,
    pub probe_radius: T,
    pub probes: usize,
    /// Whether the emptiness of the ball is also established without sampling.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Witnesses<T> {
    pub boundary: Option<BoundaryWitness<T>>,
    pub interior: Option<InteriorWitness<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FrontierReport<T> {
    pub pair: [StratumKey; 2],
    pub verdict: Verdict,
    pub witnesses: Witnesses<T>,
    /// Number of sampled points that landed in `a` and `b`.
    pub samples: [usize; 2],
}

const MAX_BISECTIONS: usize = 200;
const MAX_BOUNDARY_ATTEMPTS: usize = 32;
const MAX_INTERIOR_ATTEMPTS: usize = 64;
const APPROACH_KEPT: usize = 8;

struct Labeler<'s, 'a, T> {
    sampler: &'s FamilySampler<'a, T>,
    opts: &'s FrontierOptions<T>,
    mode: LabelMode,
}

impl<T: Real> Labeler<'_, '_, T> {
    fn key(&self, theta: &[T]) -> Option<(RanPoint<T>, StratumKey)> {
        let x = self.sampler.point(theta).ok()?;
        let label = stratum_label(&x, &self.opts.cech).ok()?;
        Some((x, StratumKey::of(&label, self.mode)))
    }
}

fn param_gap<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max)
}

/// Searches the family for the two witnesses of a frontier violation of `(a, b)`.
///
/// Both keys must use the same [`LabelMode`]. Boundary witnesses come from
/// bisecting segments between an `a`-sample and a `b`-sample; a segment is
/// abandoned when a midpoint belongs to a third stratum. Interior witnesses
/// are `b`-samples whose probe ball (clipped to the box) yields no `a` point.
pub fn frontier_check<T: Real>(
    sampler: &FamilySampler<'_, T>,
    pair: (StratumKey, StratumKey),
    opts: &FrontierOptions<T>,
) -> Result<FrontierReport<T>> {
    let (a, b) = pair;
    let mode = a.mode();
    if b.mode() != mode {
        return Err(Error::InvalidArgument("both stratum keys must use the same label mode".into()));
    }
    let mut report = FrontierReport {
        pair: [a.clone(), b.clone()],
        verdict: Verdict::SatisfiedAtBudget,
        witnesses: Witnesses {
            boundary: None,
            interior: None,
        },
        samples: [0, 0],
    };
    if a == b {
        return Ok(report);
    }
    let labeler = Labeler { sampler, opts, mode };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut in_a = Vec::new();
    let mut in_b = Vec::new();
    for _ in 0..opts.n_samples {
        let theta = sampler.draw(&mut rng);
        match labeler.key(&theta) {
            Some((_, k)) if k == a => in_a.push(theta),
            Some((_, k)) if k == b => in_b.push(theta),
            _ => {}
        }
    }
    report.samples = [in_a.len(), in_b.len()];
    if in_a.is_empty() || in_b.is_empty() {
        report.verdict = Verdict::Inconclusive;
        return Ok(report);
    }

    // pair each b-sample with its nearest a-sample, closest pairs first
    let mut pairs: Vec<(T, usize, usize)> = in_b
        .iter()
        .enumerate()
        .map(|(j, tb)| {
            let (i, d) = in_a
                .iter()
                .enumerate()
                .map(|(i, ta)| (i, param_gap(ta, tb)))
                .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
            (d, i, j)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite gaps"));

    for &(_, i, j) in pairs.iter().take(MAX_BOUNDARY_ATTEMPTS) {
        if let Some(w) = bisect(&labeler, &a, &b, in_a[i].clone(), in_b[j].clone())? {
            report.witnesses.boundary = Some(w);
            break;
        }
    }

    // farthest b-samples from stratum a are the best interior candidates
    for &(_, _, j) in pairs.iter().rev().take(MAX_INTERIOR_ATTEMPTS) {
        let center = &in_b[j];
        let hit = (0..opts.n_probes).any(|_| {
            let theta = sampler.draw_near(center, opts.probe_radius, &mut rng);
            matches!(labeler.key(&theta), Some((_, k)) if k == a)
        });
        if !hit {
            report.witnesses.interior = Some(InteriorWitness {
                point: sampler.point(center)?,
                probe_radius: opts.probe_radius,
                probes: opts.n_probes,
                certified: false,
            });
            break;
        }
    }

    if report.witnesses.boundary.is_some() && report.witnesses.interior.is_some() {
        report.verdict = Verdict::Violated;
    }
    Ok(report)
}

fn bisect<T: Real>(
    labeler: &Labeler<'_, '_, T>,
    a: &StratumKey,
    b: &StratumKey,
    mut ta: Vec<T>,
    mut tb: Vec<T>,
) -> Result<Option<BoundaryWitness<T>>> {
    let tol = T::lit(1e-12);
    let mut approach = Vec::new();
    for _ in 0..MAX_BISECTIONS {
        if param_gap(&ta, &tb) <= tol {
            let point = labeler.sampler.point(&tb)?;
            let last: RanPoint<T> = labeler.sampler.point(&ta)?;
            let gap = sup_distance(&last, &point)?;
            if approach.last() != Some(&last) {
                approach.push(last);
            }
            let skip = approach.len().saturating_sub(APPROACH_KEPT);
            return Ok(Some(BoundaryWitness {
                point,
                approach: approach.split_off(skip),
                gap,
            }));
        }
        let mid: Vec<T> = ta.iter().zip(&tb).map(|(&x, &y)| (x + y) / T::lit(2.0)).collect();
        match labeler.key(&mid) {
            Some((x, k)) if k == *a => {
                approach.push(x);
                ta = mid;
            }
            Some((_, k)) if k == *b => tb = mid,
            _ => return Ok(None),
        }
    }
    Ok(None)
}

/// Default Monte-Carlo budget of [`frontier_demo`].
pub const DEMO_PROBES: usize = 10_000;

/// The two-point witness pair on the real line.
///
/// With `P = {0, 1}`: `(P, 0.5)` has an edge and is the limit of
/// `(P, 0.5 − 2⁻ᵏ)`, which have two isolated vertices; `(P, 0.6)` has an edge
/// and no configuration within sup distance 0.05 of it has two isolated
/// vertices. The second claim holds because such a `Q` has diameter at most
/// 1.1 and radius above 0.55, so its Čech complex is a full simplex; the
/// report additionally samples `probes` configurations with 2 to 4 points.
pub fn frontier_demo(mode: LabelMode, probes: usize, seed: u64) -> Result<FrontierReport<f64>> {
    let opts = CechOptions::<f64>::default();
    let p = PointConfig::on_line(&[0.0, 1.0])?;
    let at = |r: f64| RanPoint::new(p.clone(), r);
    let key = |x: &RanPoint<f64>| -> Result<StratumKey> { Ok(StratumKey::of(&stratum_label(x, &opts)?, mode)) };
    let two_points = canonical_form(&SimplicialComplex::discrete(2)?)?;
    let edge = canonical_form(&SimplicialComplex::full(2)?)?;
    let (a, b) = match mode {
        LabelMode::Coarse => (StratumKey::coarse(two_points), StratumKey::coarse(edge)),
        LabelMode::Refined => (StratumKey::refined(two_points, false), StratumKey::refined(edge, false)),
    };

    let boundary_point = at(0.5)?;
    let approach: Vec<RanPoint<f64>> = (2..=26).map(|k| at(0.5 - 0.5f64.powi(k))).collect::<Result<_>>()?;
    let approach_ok = approach.iter().map(&key).collect::<Result<Vec<_>>>()?.iter().all(|k| *k == a);
    let approach_len = approach.len();
    let boundary = if approach_ok && key(&boundary_point)? == b {
        let gap = sup_distance(approach.last().expect("nonempty"), &boundary_point)?;
        Some(BoundaryWitness {
            point: boundary_point,
            approach,
            gap,
        })
    } else {
        None
    };

    let probe_radius = 0.05;
    let center = at(0.6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut in_b = 0usize;
    let mut drawn = 0usize;
    while drawn < probes {
        let q = random_nearby(&p, probe_radius, &mut rng)?;
        let s = center.radius + probe_radius * rng.gen_range(-1.0..1.0);
        let y = RanPoint::new(q, s)?;
        if !(sup_distance(&y, &center)? < probe_radius) {
            continue;
        }
        drawn += 1;
        let k = key(&y)?;
        hits += (k == a) as usize;
        in_b += (k == b) as usize;
    }
    // every Q in the open ball has diameter < 1 + 2h and radius > 0.6 − h;
    // both bounds are strict, so equality up to rounding still certifies
    let diameter_bound = 1.0 + 2.0 * probe_radius;
    let radius_bound = center.radius - probe_radius;
    let certified = key(&center)? == b && diameter_bound <= 2.0 * radius_bound + 1e-12;
    let interior = (hits == 0).then_some(InteriorWitness {
        point: center,
        probe_radius,
        probes,
        certified,
    });

    let verdict = if boundary.is_some() && interior.is_some() {
        Verdict::Violated
    } else {
        Verdict::SatisfiedAtBudget
    };
    Ok(FrontierReport {
        pair: [a, b],
        verdict,
        witnesses: Witnesses { boundary, interior },
        samples: [if approach_ok { approach_len } else { 0 }, in_b],
    })
}

/// A configuration within Hausdorff distance `h` of `p`, with one to three
/// extra points. Every point of `p` keeps at least one nearby point.
fn random_nearby(p: &PointConfig<f64>, h: f64, rng: &mut ChaCha8Rng) -> Result<PointConfig<f64>> {
    loop {
        let extra = rng.gen_range(0..=2);
        let mut pts: Vec<Vec<f64>> = p
            .points()
            .iter()
            .map(|c| c.iter().map(|x| x + h * rng.gen_range(-1.0..1.0)).collect())
            .collect();
        for _ in 0..extra {
            let c = p.point(rng.gen_range(0..p.len()));
            pts.push(c.iter().map(|x| x + h * rng.gen_range(-1.0..1.0)).collect());
        }
        if let Ok(q) = PointConfig::new(p.dim(), pts) {
            return Ok(q);
        }
    }
}
