//! Exact small-scale solvers for the "best approximation" steps of the metrics.
//!
//! * [`smallest_enclosing_ball`]: Welzl's move-to-front algorithm.
//! * [`geometric_median`]: Weiszfeld iteration with the Vardi–Zhang vertex safeguard.
//! * [`mean_and_variance`], [`diameter`], [`mean_pairwise_distance`]: closed forms.
//! * [`affine_fit`]: minimax, least-squares and least-absolute-deviation affine regression.

mod affine;
mod ball;
mod median;
mod moments;
pub mod simplex;

pub use affine::{affine_fit, affine_fit_with, AffineMap, FitObjective, FitOptions};
pub use ball::{smallest_enclosing_ball, smallest_enclosing_ball_seeded, Ball, MAX_BALL_DIMENSION};
pub use median::{geometric_median, geometric_median_with, MedianOptions};
pub use moments::{
    diameter, mean, mean_and_variance, mean_pairwise_distance, mean_pairwise_squared_distance,
};

use crate::error::{Error, Result};

/// Checks that `points` is nonempty and rectangular, returning the common dimension.
pub(crate) fn common_dimension(points: &[Vec<f64>], context: &'static str) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty(context))?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            context,
            expected: dim,
            found: bad.len(),
        });
    }
    Ok(dim)
}
