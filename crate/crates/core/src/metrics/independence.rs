use super::q;
use crate::error::{Error, Result};
use crate::grid::FactorGrid;
use crate::premetric::Aggregator;
use crate::quantale::QValue;
use crate::solvers::mean;

const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// A conditional distribution `p(Z | Y)` over a product of finite code alphabets.
///
/// Row `k` belongs to grid index `k`. Outcomes are ordered row-major over
/// `alphabet_sizes`, the last block varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteKernel {
    alphabet_sizes: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl DiscreteKernel {
    pub fn new(alphabet_sizes: Vec<usize>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if alphabet_sizes.is_empty() || alphabet_sizes.contains(&0) {
            return Err(Error::InvalidKernel("every block needs a nonempty alphabet".into()));
        }
        if rows.is_empty() {
            return Err(Error::InvalidKernel("kernel has no rows".into()));
        }
        let outcomes: usize = alphabet_sizes.iter().product();
        for (k, row) in rows.iter().enumerate() {
            if row.len() != outcomes {
                return Err(Error::InvalidKernel(format!(
                    "row {k} has {} entries, expected {outcomes}",
                    row.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
                return Err(Error::InvalidKernel(format!("row {k} has invalid probability {p}")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidKernel(format!("row {k} sums to {total}")));
            }
        }
        Ok(DiscreteKernel { alphabet_sizes, rows })
    }

    /// A kernel whose rows are products of the given per-block distributions.
    pub fn from_marginals(marginals: &[Vec<Vec<f64>>]) -> Result<Self> {
        let first = marginals
            .first()
            .ok_or_else(|| Error::InvalidKernel("kernel has no rows".into()))?;
        let sizes: Vec<usize> = first.iter().map(Vec::len).collect();
        let rows = marginals.iter().map(|blocks| product_row(blocks)).collect();
        DiscreteKernel::new(sizes, rows)
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_blocks(&self) -> usize {
        self.alphabet_sizes.len()
    }

    /// Marginal `p(Z_i | Y = y_k)`.
    pub fn marginal(&self, k: usize, i: usize) -> Vec<f64> {
        let size = self.alphabet_sizes[i];
        let stride: usize = self.alphabet_sizes[i + 1..].iter().product();
        let mut out = vec![0.0; size];
        for (outcome, &p) in self.rows[k].iter().enumerate() {
            out[(outcome / stride) % size] += p;
        }
        out
    }

    pub fn marginals(&self, k: usize) -> Vec<Vec<f64>> {
        (0..self.num_blocks()).map(|i| self.marginal(k, i)).collect()
    }
}

fn product_row(blocks: &[Vec<f64>]) -> Vec<f64> {
    blocks.iter().fold(vec![1.0], |acc, block| {
        acc.iter().flat_map(|a| block.iter().map(move |b| a * b)).collect()
    })
}

/// `D(p ‖ q)` in nats.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<QValue> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            context: "kl_divergence",
            expected: p.len(),
            found: q.len(),
        });
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(QValue::BOTTOM);
        }
        total += pi * (pi / qi).ln();
    }
    // rounding can push a near-zero divergence slightly negative
    Ok(q_clamped(total))
}

fn q_clamped(value: f64) -> QValue {
    q(value.max(0.0))
}

/// How far each row is from the product of its block marginals, aggregated over rows.
pub fn output_independence(kernel: &DiscreteKernel, agg_y: Aggregator) -> Result<QValue> {
    let scores = (0..kernel.rows.len())
        .map(|k| kl_divergence(&kernel.rows[k], &product_row(&kernel.marginals(k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(agg_y.apply_q(&scores))
}

/// For each block `i`, the mean over grid rows of `D(p(Z_i | y) ‖ q(Z_i | y_i))`, where
/// `q(· | y_i)` is the average of the marginals over the slice fixing `y_i`.
pub fn input_independence_by_component(kernel: &DiscreteKernel, grid: &FactorGrid) -> Result<Vec<QValue>> {
    if kernel.rows.len() != grid.len() {
        return Err(Error::InvalidKernel(format!(
            "kernel has {} rows for a grid of {} points",
            kernel.rows.len(),
            grid.len()
        )));
    }
    if kernel.num_blocks() != grid.num_factors() {
        return Err(Error::InvalidKernel(format!(
            "kernel has {} blocks for {} factors",
            kernel.num_blocks(),
            grid.num_factors()
        )));
    }
    (0..grid.num_factors())
        .map(|i| {
            let mut scores = Vec::with_capacity(grid.len());
            for v in 0..grid.factors()[i].len() {
                let slice = grid.slice_fixing(i, v)?;
                let marginals: Vec<Vec<f64>> =
                    slice.indices.iter().map(|&k| kernel.marginal(k, i)).collect();
                let best = mean(&marginals)?;
                for p in &marginals {
                    scores.push(kl_divergence(p, &best)?);
                }
            }
            Ok(Aggregator::Mean.apply_q(&scores))
        })
        .collect()
}

/// Worst component of [`input_independence_by_component`].
pub fn input_independence_mean(kernel: &DiscreteKernel, grid: &FactorGrid) -> Result<QValue> {
    Ok(Aggregator::Max.apply_q(&input_independence_by_component(kernel, grid)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn kl_of_hand_computed_pair() {
        let kl = kl_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap().value();
        let expected = 0.5 * LN_2 + 0.5 * (2.0_f64 / 3.0).ln();
        assert!((kl - expected).abs() < 1e-15);
        assert!((kl - 0.1438).abs() < 1e-4);
    }

    #[test]
    fn kl_conventions() {
        assert_eq!(kl_divergence(&[0.0, 1.0], &[0.0, 1.0]).unwrap(), QValue::TOP);
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), QValue::BOTTOM);
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn correlated_bits_lose_ln2() {
        let kernel = DiscreteKernel::new(vec![2, 2], vec![vec![0.5, 0.0, 0.0, 0.5]]).unwrap();
        let score = output_independence(&kernel, Aggregator::Max).unwrap().value();
        assert!((score - LN_2).abs() < 1e-12);
    }

    #[test]
    fn product_rows_are_independent() {
        let kernel = DiscreteKernel::from_marginals(&[
            vec![vec![0.25, 0.75], vec![0.5, 0.125, 0.375]],
            vec![vec![1.0, 0.0], vec![0.0, 0.0, 1.0]],
        ])
        .unwrap();
        assert_eq!(output_independence(&kernel, Aggregator::Max).unwrap(), QValue::TOP);
        assert_eq!(kernel.marginal(0, 1), vec![0.5, 0.125, 0.375]);
    }

    #[test]
    fn invalid_kernels_are_rejected() {
        assert!(DiscreteKernel::new(vec![2], vec![vec![0.5, 0.4]]).is_err());
        assert!(DiscreteKernel::new(vec![2], vec![vec![1.5, -0.5]]).is_err());
        assert!(DiscreteKernel::new(vec![2], vec![vec![1.0]]).is_err());
        assert!(DiscreteKernel::new(vec![0], vec![vec![]]).is_err());
        assert!(DiscreteKernel::new(vec![2], vec![]).is_err());
    }

    fn bits() -> FactorGrid {
        FactorGrid::uniform(2, &[0.0, 1.0]).unwrap()
    }

    fn deterministic(grid: &FactorGrid, code: impl Fn(&[usize]) -> Vec<usize>) -> DiscreteKernel {
        let rows = (0..grid.len())
            .map(|k| {
                let z = code(&grid.tuple_of(k));
                let blocks: Vec<Vec<f64>> = z
                    .iter()
                    .map(|&zi| (0..2).map(|s| if s == zi { 1.0 } else { 0.0 }).collect())
                    .collect();
                product_row(&blocks)
            })
            .collect();
        DiscreteKernel::new(vec![2, 2], rows).unwrap()
    }

    #[test]
    fn kernels_following_their_own_factor_are_input_independent() {
        let grid = bits();
        let kernel = deterministic(&grid, |y| vec![y[0], y[1]]);
        assert_eq!(input_independence_mean(&kernel, &grid).unwrap(), QValue::TOP);
    }

    #[test]
    fn wrong_factor_coding_costs_ln2() {
        let grid = bits();
        let kernel = deterministic(&grid, |y| vec![y[1], y[1]]);
        let by = input_independence_by_component(&kernel, &grid).unwrap();
        assert!((by[0].value() - LN_2).abs() < 1e-12);
        assert_eq!(by[1], QValue::TOP);
        let score = input_independence_mean(&kernel, &grid).unwrap().value();
        assert!((score - LN_2).abs() < 1e-12);
    }

    #[test]
    fn kernel_must_match_grid() {
        let kernel = DiscreteKernel::new(vec![2, 2], vec![vec![0.25; 4]]).unwrap();
        assert!(input_independence_mean(&kernel, &bits()).is_err());
    }
}
