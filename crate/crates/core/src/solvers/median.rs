use crate::error::Result;
use crate::premetric::euclidean;
use crate::quantale::QValue;

use super::{common_dimension, mean};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianOptions {
    /// Stop once an iteration improves the mean distance by less than this, relative to the
    /// spread of the data.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MedianOptions {
    fn default() -> Self {
        MedianOptions {
            tolerance: 1e-12,
            max_iterations: 10_000,
        }
    }
}

fn mean_distance(points: &[Vec<f64>], y: &[f64]) -> f64 {
    points.iter().map(|p| euclidean(p, y)).sum::<f64>() / points.len() as f64
}

/// Geometric median and the minimized mean distance (mean absolute deviation around it).
pub fn geometric_median(points: &[Vec<f64>]) -> Result<(Vec<f64>, QValue)> {
    geometric_median_with(points, MedianOptions::default())
}

pub fn geometric_median_with(
    points: &[Vec<f64>],
    options: MedianOptions,
) -> Result<(Vec<f64>, QValue)> {
    let dim = common_dimension(points, "geometric median")?;
    let mut y = mean(points)?;
    let mut objective = mean_distance(points, &y);
    if objective == 0.0 {
        return Ok((y, QValue::TOP));
    }
    let spread = objective;
    // points closer than this to the iterate are treated as coinciding with it
    let coincide = 1e-14 * spread.max(f64::MIN_POSITIVE);

    for _ in 0..options.max_iterations {
        // Vardi–Zhang modified Weiszfeld step
        let mut weighted = vec![0.0; dim];
        let mut weight_sum = 0.0;
        let mut pull = vec![0.0; dim];
        let mut multiplicity = 0.0;
        for p in points {
            let d = euclidean(p, &y);
            if d <= coincide {
                multiplicity += 1.0;
                continue;
            }
            let w = 1.0 / d;
            weight_sum += w;
            for k in 0..dim {
                weighted[k] += w * p[k];
                pull[k] += w * (p[k] - y[k]);
            }
        }
        if weight_sum == 0.0 {
            break;
        }
        let pull_norm = pull.iter().map(|v| v * v).sum::<f64>().sqrt();
        if multiplicity > 0.0 && pull_norm <= multiplicity {
            // optimality condition at a data point
            break;
        }
        let target: Vec<f64> = weighted.iter().map(|w| w / weight_sum).collect();
        let next: Vec<f64> = if multiplicity > 0.0 {
            let mix = (multiplicity / pull_norm).min(1.0);
            target
                .iter()
                .zip(&y)
                .map(|(t, yk)| (1.0 - mix) * t + mix * yk)
                .collect()
        } else {
            target
        };
        let next_objective = mean_distance(points, &next);
        if next_objective >= objective {
            break;
        }
        let improvement = objective - next_objective;
        y = next;
        objective = next_objective;
        if improvement <= options.tolerance * spread {
            break;
        }
    }

    // Weiszfeld approaches a vertex optimum only sublinearly; test the data points directly
    for p in points {
        let at_p = mean_distance(points, p);
        if at_p < objective {
            objective = at_p;
            y = p.clone();
        }
    }
    Ok((y, QValue::new(objective)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn identical_points() {
        let pts = vec![vec![2.0, -1.0]; 5];
        let (c, mad) = geometric_median(&pts).unwrap();
        assert_eq!(c, pts[0]);
        assert_eq!(mad, QValue::TOP);
    }

    #[test]
    fn one_dimensional_median() {
        let pts = vec![vec![0.0], vec![0.0], vec![10.0]];
        let (c, mad) = geometric_median(&pts).unwrap();
        assert!(c[0].abs() < 1e-9);
        assert!((mad.value() - 10.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn unit_square_corners() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let (c, mad) = geometric_median(&pts).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-9 && (c[1] - 0.5).abs() < 1e-9);
        assert!((mad.value() - 0.5_f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn vertex_optimum_with_heavy_point() {
        // the shared point carries most of the mass
        let mut pts = vec![vec![1.0, 1.0]; 6];
        pts.extend([vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]]);
        let (c, _) = geometric_median(&pts).unwrap();
        assert_eq!(c, vec![1.0, 1.0]);
    }

    #[test]
    fn empty_input() {
        assert!(matches!(geometric_median(&[]), Err(Error::Empty(_))));
    }
}
