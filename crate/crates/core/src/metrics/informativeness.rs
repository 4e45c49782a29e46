use rayon::prelude::*;

use super::{q, MetricKind, MetricReport, PairConvention};
use crate::error::Result;
use crate::grid::{format_f64, CodeTable};
use crate::premetric::{euclidean, Aggregator};
use crate::quantale::QValue;
use crate::solvers::{affine_fit_with, diameter, AffineMap, FitObjective, FitOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct LeftInverse {
    pub report: MetricReport,
    /// The fitted decoder `h: Z → Y`.
    pub map: AffineMap,
}

/// Error of the best affine decoder from codes back to factor tuples.
///
/// `constrain_linear` fixes the decoder offset to zero.
pub fn left_inverse_metric(
    table: &CodeTable,
    objective: FitObjective,
    constrain_linear: bool,
) -> Result<LeftInverse> {
    let options = FitOptions {
        with_offset: !constrain_linear,
        ..FitOptions::default()
    };
    left_inverse_metric_with(table, objective, options)
}

pub(crate) fn left_inverse_metric_with(
    table: &CodeTable,
    objective: FitObjective,
    options: FitOptions,
) -> Result<LeftInverse> {
    let targets = table.grid().points();
    let (map, value) = affine_fit_with(table.codes(), &targets, objective, options)?;
    let report = MetricReport {
        metric: MetricKind::LeftInverse,
        inner: objective.name().to_owned(),
        outer: None,
        overall: value,
        per_component: Vec::new(),
        per_fixed_value: Vec::new(),
        metadata: Default::default(),
    }
    .with_meta("decoder", if options.with_offset { "affine" } else { "linear" });
    let report = match objective {
        FitObjective::Minimax => report.with_meta("tolerance", format_f64(options.minimax_tolerance)),
        FitObjective::LeastAbs => report.with_meta("tolerance", format_f64(options.irls_tolerance)),
        FitObjective::LeastSquares => report,
    };
    Ok(LeftInverse { report, map })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionScope {
    /// All unordered pairs of grid points.
    Whole,
    /// For each factor `i`, pairs differing only in factor `i`, compared through code block `i`.
    PerComponent,
}

/// How much the encoder contracts pairs of inputs: `agg` over pairs of
/// `d_Z(m(y), m(y')) ⊸ d_Y(y, y') = max(d_Y − d_Z, 0)`.
pub fn contraction_metric(
    table: &CodeTable,
    agg: Aggregator,
    scope: ContractionScope,
) -> Result<MetricReport> {
    contraction_metric_with(table, agg, scope, PairConvention::Unordered)
}

/// [`contraction_metric`] under a chosen pair convention. Self-pairs never contract, so
/// `OrderedWithSelf` only changes non-max aggregates, pulling them toward `0`.
pub fn contraction_metric_with(
    table: &CodeTable,
    agg: Aggregator,
    scope: ContractionScope,
    pairs: PairConvention,
) -> Result<MetricReport> {
    let grid = table.grid();
    let points = grid.points();
    let report = match scope {
        ContractionScope::Whole => {
            let n = grid.len();
            let rows: Vec<Vec<f64>> = (0..n)
                .into_par_iter()
                .map(|k| {
                    ((k + 1)..n)
                        .map(|l| {
                            let dy = q(euclidean(&points[k], &points[l]));
                            let dz = q(euclidean(table.code(k), table.code(l)));
                            dz.hom(dy).value()
                        })
                        .collect()
                })
                .collect();
            let all = expand_pairs(rows.into_iter().flatten().collect(), n, pairs);
            MetricReport {
                metric: MetricKind::Contraction,
                inner: agg.name().to_owned(),
                outer: None,
                overall: q(agg.apply(&all)),
                per_component: Vec::new(),
                per_fixed_value: Vec::new(),
                metadata: Default::default(),
            }
            .with_meta("scope", "whole")
        }
        ContractionScope::PerComponent => {
            let per_component: Vec<QValue> = (0..grid.num_factors())
                .into_par_iter()
                .map(|i| {
                    let values = &grid.factors()[i].values;
                    let slices: Vec<Vec<usize>> = (0..values.len())
                        .map(|v| grid.slice_fixing(i, v).map(|s| s.indices))
                        .collect::<Result<_>>()?;
                    let complement = slices[0].len();
                    let mut all = Vec::new();
                    let mut self_pairs = 0;
                    for c in 0..complement {
                        self_pairs += values.len();
                        for v in 0..values.len() {
                            for v2 in (v + 1)..values.len() {
                                let dy = q(euclidean(&values[v], &values[v2]));
                                let dz = q(euclidean(
                                    table.block(slices[v][c], i),
                                    table.block(slices[v2][c], i),
                                ));
                                all.push(dz.hom(dy).value());
                            }
                        }
                    }
                    Ok(q(agg.apply(&expand_pairs(all, self_pairs, pairs))))
                })
                .collect::<Result<_>>()?;
            MetricReport {
                metric: MetricKind::Contraction,
                inner: agg.name().to_owned(),
                outer: Some(Aggregator::Max),
                overall: Aggregator::Max.apply_q(&per_component),
                per_component,
                per_fixed_value: Vec::new(),
                metadata: Default::default(),
            }
            .with_meta("scope", "per_component")
        }
    };
    let convention = match pairs {
        PairConvention::Unordered => "unordered, no self-pairs",
        PairConvention::OrderedWithSelf => "ordered, with self-pairs",
    };
    Ok(report
        .with_meta("pairs", convention)
        .with_meta("factor_diameter", format_f64(diameter(&points)?.value()))
        .with_meta("code_diameter", format_f64(diameter(table.codes())?.value())))
}

/// Unordered pair values turned into the list the convention aggregates over.
fn expand_pairs(unordered: Vec<f64>, self_pairs: usize, pairs: PairConvention) -> Vec<f64> {
    match pairs {
        PairConvention::Unordered => unordered,
        PairConvention::OrderedWithSelf => {
            let mut all = Vec::with_capacity(2 * unordered.len() + self_pairs);
            all.extend_from_slice(&unordered);
            all.extend_from_slice(&unordered);
            all.resize(all.len() + self_pairs, 0.0);
            all
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CodePartition, FactorGrid};

    fn cube() -> FactorGrid {
        FactorGrid::uniform(3, &[0.0, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn constant_encoder_contracts_by_the_grid_diameter() {
        let table = CodeTable::from_fn(cube(), CodePartition::scalar(3), |_| vec![0.0; 3]).unwrap();
        let r = contraction_metric(&table, Aggregator::Max, ContractionScope::Whole).unwrap();
        assert!((r.overall.value() - 3.0_f64.sqrt()).abs() < 1e-12);
        let mean = contraction_metric(&table, Aggregator::Mean, ContractionScope::Whole).unwrap();
        assert!(mean.overall <= r.overall);
    }

    #[test]
    fn self_pairs_dilute_the_mean() {
        let table = CodeTable::from_fn(cube(), CodePartition::scalar(3), |_| vec![0.0; 3]).unwrap();
        let n = 27.0;
        for scope in [ContractionScope::Whole, ContractionScope::PerComponent] {
            let plain = contraction_metric(&table, Aggregator::Mean, scope).unwrap();
            let ordered =
                contraction_metric_with(&table, Aggregator::Mean, scope, PairConvention::OrderedWithSelf).unwrap();
            if scope == ContractionScope::Whole {
                let expected = plain.overall.value() * (n - 1.0) / n;
                assert!((ordered.overall.value() - expected).abs() < 1e-12);
            } else {
                // three values per factor: 3 unordered pairs against 9 ordered ones
                let expected = plain.overall.value() * 6.0 / 9.0;
                assert!((ordered.overall.value() - expected).abs() < 1e-12);
            }
            let max = contraction_metric_with(&table, Aggregator::Max, scope, PairConvention::OrderedWithSelf).unwrap();
            assert_eq!(max.overall, contraction_metric(&table, Aggregator::Max, scope).unwrap().overall);
        }
    }

    #[test]
    fn identity_and_expansions_do_not_contract() {
        let id = CodeTable::from_fn(cube(), CodePartition::scalar(3), |y| y.to_vec()).unwrap();
        let red = CodeTable::from_fn(cube(), CodePartition::new(vec![2, 1, 1]).unwrap(), |y| {
            vec![y[0], -y[0], y[1], y[2]]
        })
        .unwrap();
        for table in [&id, &red] {
            for scope in [ContractionScope::Whole, ContractionScope::PerComponent] {
                let r = contraction_metric(table, Aggregator::Max, scope).unwrap();
                assert_eq!(r.overall, QValue::TOP);
                assert!(r.is_consistent());
            }
        }
    }

    #[test]
    fn per_component_isolates_the_collapsed_factor() {
        let table = CodeTable::from_fn(cube(), CodePartition::scalar(3), |y| vec![y[0], 0.0, y[2]]).unwrap();
        let r = contraction_metric(&table, Aggregator::Max, ContractionScope::PerComponent).unwrap();
        assert_eq!(r.per_component[0], QValue::TOP);
        assert_eq!(r.per_component[1].value(), 1.0);
        assert_eq!(r.per_component[2], QValue::TOP);
        assert_eq!(r.overall.value(), 1.0);
    }

    #[test]
    fn left_inverse_of_linear_codes_is_exact() {
        let table = CodeTable::from_fn(cube(), CodePartition::scalar(3), |y| {
            vec![y[0] + y[1], y[1] - y[2], 2.0 * y[2]]
        })
        .unwrap();
        for objective in FitObjective::ALL {
            let inv = left_inverse_metric(&table, objective, false).unwrap();
            assert!(inv.report.overall.value() < 1e-9, "{objective}");
        }
    }

    #[test]
    fn constant_codes_left_inverse() {
        let table = CodeTable::from_fn(cube(), CodePartition::scalar(3), |_| vec![0.0; 3]).unwrap();
        let inv = left_inverse_metric(&table, FitObjective::Minimax, false).unwrap();
        assert!((inv.report.overall.value() - 3.0_f64.sqrt() / 2.0).abs() < 1e-9);
        for b in &inv.map.offset {
            assert!((b - 0.5).abs() < 1e-6);
        }
        // linear decoders of the zero code can only output the origin
        let lin = left_inverse_metric(&table, FitObjective::Minimax, true).unwrap();
        assert!((lin.report.overall.value() - 3.0_f64.sqrt()).abs() < 1e-9);
    }
}
