//! Minimum enclosing balls, Čech sets and Čech radii.
//!
//! In Euclidean space the smallest radius at which the closed balls around a
//! finite set share a point is the radius of its minimum enclosing ball, and
//! the shared point is the ball's center.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{dist, point_set_distance, PointConfig};
use crate::scalar::Real;

const SHUFFLE_SEED: u64 = 0x5eed_ba11;

/// A closed ball. Open/closed semantics are decided by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn contains(&self, p: &[T], tol: T) -> bool {
        dist(&self.center, p) <= self.radius + tol
    }
}

/// Minimum enclosing ball of a nonempty point set.
///
/// Welzl's recursion in the move-to-front form, with the input order
/// shuffled by a fixed seed so the result is reproducible.
///
/// # Panics
/// If `points` is empty.
pub fn meb<T: Real>(points: &[&[T]]) -> Ball<T> {
    assert!(!points.is_empty(), "minimum enclosing ball of an empty set");
    let dim = points[0].len();
    if points.len() == 1 {
        return Ball {
            center: points[0].to_vec(),
            radius: T::zero(),
        };
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let mut mb = MoveToFront {
        points,
        dim,
        order,
        support: Vec::with_capacity(dim + 1),
        ball: None,
    };
    mb.run(points.len());
    mb.ball.expect("nonempty input yields a ball")
}

/// Minimum enclosing ball of the points of `config` indexed by `subset`.
pub fn meb_of_subset<T: Real>(config: &PointConfig<T>, subset: &[usize]) -> Ball<T> {
    meb(&config.subset(subset))
}

/// Čech set of a finite set, represented by the center of its minimum enclosing ball.
pub fn cech_set<T: Real>(points: &[&[T]]) -> Ball<T> {
    meb(points)
}

/// Signed slack `r − r_crit`, where `r_crit` is the smallest radius at which
/// the closed `r`-balls around `points` share a point.
///
/// Positive when the intersection has interior, negative when empty, zero at
/// the critical radius.
pub fn cech_radius<T: Real>(points: &[&[T]], r: T) -> T {
    r - meb(points).radius
}

/// `r` minus the infimum distance from `points` to the center of their Čech set.
///
/// This is the set-distance reading of the slack. It coincides with
/// [`cech_radius`] when every point lies on the enclosing sphere and
/// undershoots the critical radius otherwise (obtuse triangles, for example).
pub fn cech_radius_literal<T: Real>(points: &[&[T]], r: T) -> T {
    let ball = meb(points);
    r - point_set_distance(points, &ball.center)
}

struct MoveToFront<'a, T> {
    points: &'a [&'a [T]],
    dim: usize,
    order: Vec<usize>,
    support: Vec<usize>,
    ball: Option<Ball<T>>,
}

impl<T: Real> MoveToFront<'_, T> {
    fn outside(&self, idx: usize) -> bool {
        match &self.ball {
            None => true,
            Some(b) => {
                let slack = T::lit(1e-12) * (T::one() + b.radius);
                dist(&b.center, self.points[idx]) > b.radius + slack
            }
        }
    }

    /// Smallest ball of `order[..end]` with the current support on its boundary.
    fn run(&mut self, end: usize) {
        if self.support.len() == self.dim + 1 {
            return;
        }
        let mut k = 0;
        while k < end {
            let j = k;
            k += 1;
            let idx = self.order[j];
            if !self.outside(idx) {
                continue;
            }
            self.support.push(idx);
            let pts: Vec<&[T]> = self.support.iter().map(|&s| self.points[s]).collect();
            match circumball(&pts) {
                Some(b) => {
                    self.ball = Some(b);
                    self.run(j);
                    self.support.pop();
                    self.order[..=j].rotate_right(1);
                }
                None => {
                    self.support.pop();
                }
            }
        }
    }
}

/// Smallest ball with every point of `pts` on its boundary; the center lies in
/// their affine hull. `None` when the points are affinely dependent.
pub(crate) fn circumball<T: Real>(pts: &[&[T]]) -> Option<Ball<T>> {
    let origin = pts[0];
    let k = pts.len() - 1;
    if k == 0 {
        return Some(Ball {
            center: origin.to_vec(),
            radius: T::zero(),
        });
    }
    let diffs: Vec<Vec<T>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(origin).map(|(&a, &b)| a - b).collect())
        .collect();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
    let two = T::lit(2.0);
    // Gram system: 2 <q_i, q_j> λ_j = |q_i|²
    let mut a: Vec<Vec<T>> = (0..k)
        .map(|i| (0..k).map(|j| two * dot(&diffs[i], &diffs[j])).collect())
        .collect();
    let mut rhs: Vec<T> = (0..k).map(|i| dot(&diffs[i], &diffs[i])).collect();
    let scale = a
        .iter()
        .enumerate()
        .map(|(i, row)| row[i])
        .fold(T::zero(), T::max);
    let lambda = solve(&mut a, &mut rhs, scale * T::lit(1e-12))?;
    let mut center = origin.to_vec();
    for (l, q) in lambda.iter().zip(&diffs) {
        for (c, &x) in center.iter_mut().zip(q) {
            *c = *c + *l * x;
        }
    }
    let radius = pts.iter().map(|p| dist(&center, p)).fold(T::zero(), T::max);
    Some(Ball { center, radius })
}

/// Gaussian elimination with partial pivoting. `None` if a pivot falls below `tiny`.
fn solve<T: Real>(a: &mut [Vec<T>], b: &mut [T], tiny: T) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].abs() > tiny) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (dst, &v) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst = *dst - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc = acc - a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}
