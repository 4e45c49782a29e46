use crate::error::Result;
use crate::premetric::{euclidean, squared_euclidean};
use crate::quantale::QValue;

use super::common_dimension;

/// Arithmetic mean, accumulated as offsets from the first point so that a set of identical
/// points has that point as its exact mean.
pub fn mean(points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let dim = common_dimension(points, "mean")?;
    let origin = &points[0];
    let n = points.len() as f64;
    let mut acc = vec![0.0; dim];
    for p in points {
        for (a, (x, o)) in acc.iter_mut().zip(p.iter().zip(origin)) {
            *a += x - o;
        }
    }
    Ok(origin.iter().zip(&acc).map(|(o, a)| o + a / n).collect())
}

/// Mean and variance, the variance being the mean squared distance to the mean.
pub fn mean_and_variance(points: &[Vec<f64>]) -> Result<(Vec<f64>, QValue)> {
    let center = mean(points)?;
    let var = points
        .iter()
        .map(|p| squared_euclidean(p, &center))
        .sum::<f64>()
        / points.len() as f64;
    Ok((center, QValue::new(var)?))
}

/// Greatest pairwise distance.
pub fn diameter(points: &[Vec<f64>]) -> Result<QValue> {
    common_dimension(points, "diameter")?;
    let mut best = 0.0_f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(squared_euclidean(p, q));
        }
    }
    QValue::new(best.sqrt())
}

/// Mean distance over all ordered pairs, self-pairs included.
pub fn mean_pairwise_distance(points: &[Vec<f64>]) -> Result<QValue> {
    ordered_pair_mean(points, euclidean, "mean pairwise distance")
}

/// Mean squared distance over all ordered pairs, self-pairs included. Equals twice the
/// variance.
pub fn mean_pairwise_squared_distance(points: &[Vec<f64>]) -> Result<QValue> {
    ordered_pair_mean(points, squared_euclidean, "mean pairwise squared distance")
}

fn ordered_pair_mean(
    points: &[Vec<f64>],
    dist: fn(&[f64], &[f64]) -> f64,
    context: &'static str,
) -> Result<QValue> {
    common_dimension(points, context)?;
    let n = points.len();
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            total += dist(p, q);
        }
    }
    QValue::new(2.0 * total / (n * n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn line(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn mean_and_variance_examples() {
        let (m, v) = mean_and_variance(&line(&[0.0, 10.0])).unwrap();
        assert_eq!((m[0], v.value()), (5.0, 25.0));
        let (m, v) = mean_and_variance(&line(&[0.0, 10.0, 20.0])).unwrap();
        assert_eq!(m[0], 10.0);
        assert!((v.value() - 200.0 / 3.0).abs() < 1e-12);
        let same = vec![vec![0.1, 0.7, -3.3]; 9];
        let (m, v) = mean_and_variance(&same).unwrap();
        assert_eq!(m, same[0]);
        assert_eq!(v, QValue::TOP);
    }

    #[test]
    fn diameter_and_pairwise() {
        assert_eq!(diameter(&line(&[4.0])).unwrap(), QValue::TOP);
        assert_eq!(mean_pairwise_distance(&line(&[4.0])).unwrap(), QValue::TOP);
        assert_eq!(diameter(&line(&[0.0, 3.0])).unwrap().value(), 3.0);

        let pts = line(&[0.0, 1.0, 2.0]);
        let pair_sq = mean_pairwise_squared_distance(&pts).unwrap().value();
        assert!((pair_sq - 4.0 / 3.0).abs() < 1e-15);
        let (_, var) = mean_and_variance(&pts).unwrap();
        assert!((var.value() - 2.0 / 3.0).abs() < 1e-15);
        assert!((pair_sq / var.value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_and_ragged_inputs() {
        assert!(matches!(mean(&[]), Err(Error::Empty(_))));
        assert!(matches!(diameter(&[]), Err(Error::Empty(_))));
        assert!(matches!(
            mean(&[vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
