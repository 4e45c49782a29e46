use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::premetric::{euclidean, squared_euclidean};
use crate::quantale::QValue;

use super::common_dimension;

pub const MAX_BALL_DIMENSION: usize = 16;

const DEFAULT_SHUFFLE_SEED: u64 = 0x5eed_ba11;

// relative slack of the containment test
const CONTAINS_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: QValue,
}

impl Ball {
    pub fn contains(&self, p: &[f64], slack: f64) -> bool {
        euclidean(p, &self.center) <= self.radius.value() + slack
    }
}

/// Smallest ball enclosing `points`, using a fixed shuffle seed.
pub fn smallest_enclosing_ball(points: &[Vec<f64>]) -> Result<Ball> {
    smallest_enclosing_ball_seeded(points, DEFAULT_SHUFFLE_SEED)
}

pub fn smallest_enclosing_ball_seeded(points: &[Vec<f64>], seed: u64) -> Result<Ball> {
    let dim = common_dimension(points, "smallest enclosing ball")?;
    if dim > MAX_BALL_DIMENSION {
        return Err(Error::DimensionMismatch {
            context: "smallest enclosing ball (dimension limit)",
            expected: MAX_BALL_DIMENSION,
            found: dim,
        });
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Solver("smallest enclosing ball: non-finite coordinate".into()));
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let scale = points
        .iter()
        .flatten()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let mut welzl = Welzl {
        points,
        dim,
        slack: CONTAINS_RTOL * scale,
        support: Vec::with_capacity(dim + 1),
    };
    let end = order.len();
    let (center, _) = welzl.move_to_front(&mut order, end);
    let center = center.expect("nonempty input yields a ball");

    // the reported radius always encloses every input exactly
    let r2 = points
        .iter()
        .map(|p| squared_euclidean(p, &center))
        .fold(0.0, f64::max);
    Ok(Ball {
        center,
        radius: QValue::new(r2.sqrt())?,
    })
}

struct Welzl<'a> {
    points: &'a [Vec<f64>],
    dim: usize,
    slack: f64,
    support: Vec<usize>,
}

impl Welzl<'_> {
    /// Smallest ball enclosing `order[..end]` with the current support on its boundary.
    fn move_to_front(&mut self, order: &mut Vec<usize>, end: usize) -> (Option<Vec<f64>>, f64) {
        let (mut center, mut radius) = self.support_ball();
        if self.support.len() == self.dim + 1 {
            return (center, radius);
        }
        for i in 0..end {
            let p = &self.points[order[i]];
            let inside = center
                .as_ref()
                .is_some_and(|c| euclidean(p, c) <= radius + self.slack);
            if inside {
                continue;
            }
            self.support.push(order[i]);
            (center, radius) = self.move_to_front(order, i);
            self.support.pop();
            let moved = order.remove(i);
            order.insert(0, moved);
        }
        (center, radius)
    }

    /// Smallest ball with every support point on its boundary: the circumcenter within the
    /// affine hull, taking the minimum-norm solution when the support is affinely dependent.
    fn support_ball(&self) -> (Option<Vec<f64>>, f64) {
        let Some((&first, rest)) = self.support.split_first() else {
            return (None, -1.0);
        };
        let origin = &self.points[first];
        if rest.is_empty() {
            return (Some(origin.clone()), 0.0);
        }
        let k = rest.len();
        let edges = DMatrix::from_fn(self.dim, k, |r, c| self.points[rest[c]][r] - origin[r]);
        let gram = edges.transpose() * &edges;
        let rhs = DVector::from_fn(k, |j, _| 0.5 * gram[(j, j)]);
        let eps = gram.iter().fold(0.0_f64, |m, x| m.max(x.abs())) * 1e-13;
        let lambda = gram
            .svd(true, true)
            .solve(&rhs, eps)
            .unwrap_or_else(|_| DVector::zeros(k));
        let offset = edges * lambda;
        let center: Vec<f64> = origin.iter().zip(offset.iter()).map(|(o, d)| o + d).collect();
        let radius = self
            .support
            .iter()
            .map(|&s| euclidean(&self.points[s], &center))
            .fold(0.0, f64::max);
        (Some(center), radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(points: &[[f64; 2]]) -> Ball {
        let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        smallest_enclosing_ball(&pts).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn two_points() {
        let b = ball(&[[0.0, 0.0], [2.0, 0.0]]);
        assert!(close(&b.center, &[1.0, 0.0], 1e-12));
        assert!((b.radius.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn right_triangle() {
        let b = ball(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(close(&b.center, &[0.5, 0.5], 1e-12));
        assert!((b.radius.value() - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn collinear_points() {
        let b = ball(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(close(&b.center, &[1.0, 0.0], 1e-12));
        assert!((b.radius.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_points_have_zero_radius() {
        let b = ball(&[[0.3, 0.1]; 7]);
        assert_eq!(b.radius, QValue::TOP);
        assert_eq!(b.center, vec![0.3, 0.1]);
    }

    #[test]
    fn seed_independent_radius() {
        let pts: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.7;
                vec![t.cos() * (1.0 + 0.1 * (i % 3) as f64), t.sin(), 0.2 * (t * 1.3).cos()]
            })
            .collect();
        let r0 = smallest_enclosing_ball_seeded(&pts, 1).unwrap().radius.value();
        let r1 = smallest_enclosing_ball_seeded(&pts, 99).unwrap().radius.value();
        assert!((r0 - r1).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(smallest_enclosing_ball(&[]), Err(Error::Empty(_))));
        let too_wide = vec![vec![0.0; 17]];
        assert!(matches!(
            smallest_enclosing_ball(&too_wide),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
