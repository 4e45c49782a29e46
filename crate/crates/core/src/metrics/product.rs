use rayon::prelude::*;

use super::{q, MetricKind, MetricReport};
use crate::error::{Error, Result};
use crate::grid::{component_codes, CodeTable};
use crate::premetric::{euclidean, squared_euclidean, Aggregator};
use crate::quantale::QValue;
use crate::solvers::{geometric_median, mean_and_variance, smallest_enclosing_ball};

/// Result of measuring modularity by approximation: the report plus the fitted product
/// approximation `∏ m_{i,i}` as a lookup table.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductApproximation {
    pub report: MetricReport,
    /// `centers[i][v]`: the approximating code block `m_{i,i}(v)`.
    pub centers: Vec<Vec<Vec<f64>>>,
}

impl ProductApproximation {
    /// The product approximation evaluated on every grid point of `table`.
    pub fn product_table(&self, table: &CodeTable) -> Result<CodeTable> {
        let grid = table.grid();
        let codes = (0..grid.len())
            .map(|k| {
                (0..grid.num_factors())
                    .flat_map(|i| self.centers[i][grid.coordinate(k, i)].iter().copied())
                    .collect()
            })
            .collect();
        CodeTable::new(grid.clone(), table.partition().clone(), codes)
    }
}

/// Center and deviation of a point set under the inner aggregation: the smallest enclosing
/// ball (`max`), the geometric median (`mean`) or the mean (`second_moment`).
fn centroid(points: &[Vec<f64>], inner: Aggregator) -> Result<(Vec<f64>, QValue)> {
    match inner {
        Aggregator::Max => smallest_enclosing_ball(points).map(|b| (b.center, b.radius)),
        Aggregator::Mean => geometric_median(points),
        Aggregator::SecondMoment => mean_and_variance(points),
        other => Err(Error::UnsupportedAggregator {
            metric: "product approximation",
            aggregator: other.name().to_owned(),
        }),
    }
}

/// Distance from each component to its best approximation depending on its own factor only.
///
/// For component `i` and each value `v` of factor `i`, the `i`-th code blocks over the slice
/// `y_i = v` are summarized by the centroid matched to `inner`; the deviation is the
/// slice's score. A component scores the maximum over its slices and `outer` reduces the
/// components.
pub fn product_via_approximation(
    table: &CodeTable,
    inner: Aggregator,
    outer: Aggregator,
) -> Result<ProductApproximation> {
    if !matches!(
        inner,
        Aggregator::Max | Aggregator::Mean | Aggregator::SecondMoment
    ) {
        return Err(Error::UnsupportedAggregator {
            metric: "product approximation",
            aggregator: inner.name().to_owned(),
        });
    }
    let grid = table.grid();
    let jobs: Vec<(usize, usize)> = (0..grid.num_factors())
        .flat_map(|i| (0..grid.factors()[i].len()).map(move |v| (i, v)))
        .collect();
    let solved = jobs
        .par_iter()
        .map(|&(i, v)| {
            let slice = grid.slice_fixing(i, v)?;
            let points = component_codes(table, i, &slice.indices)?;
            centroid(&points, inner).map_err(|e| Error::Metric {
                metric: "product approximation",
                component: i,
                fixed_value: v,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut centers: Vec<Vec<Vec<f64>>> = vec![Vec::new(); grid.num_factors()];
    let mut per_fixed_value: Vec<Vec<QValue>> = vec![Vec::new(); grid.num_factors()];
    for (&(i, _), (center, deviation)) in jobs.iter().zip(solved) {
        centers[i].push(center);
        per_fixed_value[i].push(deviation);
    }
    let per_component: Vec<QValue> = per_fixed_value
        .iter()
        .map(|row| Aggregator::Max.apply_q(row))
        .collect();
    let report = MetricReport {
        metric: MetricKind::Approximation,
        inner: inner.name().to_owned(),
        outer: Some(outer),
        overall: outer.apply_q(&per_component),
        per_component,
        per_fixed_value,
        metadata: Default::default(),
    }
    .with_meta(
        "centroid",
        match inner {
            Aggregator::Max => "smallest_enclosing_ball",
            Aggregator::Mean => "geometric_median",
            _ => "mean",
        },
    );
    Ok(ProductApproximation { report, centers })
}

/// Modularity without optimization: constancy of the curried components.
///
/// For component `i`, every unordered pair of complement assignments `(c, c')` is compared
/// by `max_v d(m_i(v, c), m_i(v, c'))`, the max-induced distance between the curried maps;
/// `pair_agg` reduces over pairs and `outer` over components. `per_fixed_value[i][v]`
/// reduces `d(m_i(v, c), m_i(v, c'))` over pairs at a single `v`, which for `pair_agg = max`
/// is the diameter of that slice.
pub fn product_via_constancy(
    table: &CodeTable,
    pair_agg: Aggregator,
    outer: Aggregator,
) -> Result<MetricReport> {
    let grid = table.grid();
    let components = (0..grid.num_factors())
        .into_par_iter()
        .map(|i| {
            let slices = (0..grid.factors()[i].len())
                .map(|v| {
                    let slice = grid.slice_fixing(i, v)?;
                    component_codes(table, i, &slice.indices)
                })
                .collect::<Result<Vec<_>>>()?;
            let complement = slices[0].len();
            let pairs = complement * complement.saturating_sub(1) / 2;
            let mut curried = Vec::with_capacity(pairs);
            let mut at_value = vec![Vec::with_capacity(pairs); slices.len()];
            for c in 0..complement {
                for c2 in (c + 1)..complement {
                    let mut worst = 0.0_f64;
                    for (v, codes) in slices.iter().enumerate() {
                        let d = euclidean(&codes[c], &codes[c2]);
                        at_value[v].push(d);
                        worst = worst.max(d);
                    }
                    curried.push(worst);
                }
            }
            let fixed: Vec<QValue> = at_value.iter().map(|ds| q(pair_agg.apply(ds))).collect();
            Ok((q(pair_agg.apply(&curried)), fixed))
        })
        .collect::<Result<Vec<_>>>()?;

    let (per_component, per_fixed_value): (Vec<QValue>, Vec<Vec<QValue>>) =
        components.into_iter().unzip();
    Ok(MetricReport {
        metric: MetricKind::Constancy,
        inner: pair_agg.name().to_owned(),
        outer: Some(outer),
        overall: outer.apply_q(&per_component),
        per_component,
        per_fixed_value,
        metadata: Default::default(),
    }
    .with_meta("pairs", "unordered, no self-pairs"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairConvention {
    /// Each unordered pair once, no self-pairs.
    Unordered,
    /// All `n²` ordered pairs including `(x, x)`.
    OrderedWithSelf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstancyMethod {
    /// Deviation from the best constant (a centroid).
    Centroid,
    /// Aggregate of pairwise distances; squared distances for `second_moment`.
    Pairwise(PairConvention),
}

/// How far `points` are from being a single point.
pub fn constancy(points: &[Vec<f64>], method: ConstancyMethod, agg: Aggregator) -> Result<QValue> {
    if points.is_empty() {
        return Err(Error::Empty("constancy"));
    }
    match method {
        ConstancyMethod::Centroid => centroid(points, agg).map(|(_, d)| d),
        ConstancyMethod::Pairwise(convention) => {
            // second moment of distances: average the squared distances directly
            let (dist, agg): (fn(&[f64], &[f64]) -> f64, Aggregator) = match agg {
                Aggregator::SecondMoment => (squared_euclidean, Aggregator::Mean),
                other => (euclidean, other),
            };
            let n = points.len();
            let mut ds = Vec::new();
            for i in 0..n {
                let start = match convention {
                    PairConvention::Unordered => i + 1,
                    PairConvention::OrderedWithSelf => 0,
                };
                for j in start..n {
                    ds.push(dist(&points[i], &points[j]));
                }
            }
            QValue::new(agg.apply(&ds))
        }
    }
}
