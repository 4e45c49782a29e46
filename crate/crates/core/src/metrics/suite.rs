//! Running several metric/aggregator combinations over many code tables, and flattening
//! the results into records and wide tables.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    contraction_metric, left_inverse_metric, product_via_approximation, product_via_constancy,
    ContractionScope, MetricKind, MetricReport,
};
use crate::error::{Error, Result};
use crate::grid::{format_f64, CodeTable, Provenance};
use crate::premetric::Aggregator;
use crate::quantale::QValue;
use crate::solvers::FitObjective;

/// The ten columns of the standard comparison table, in order.
pub const STANDARD_COLUMNS: [(MetricKind, Aggregator); 10] = [
    (MetricKind::Approximation, Aggregator::Max),
    (MetricKind::Approximation, Aggregator::Mean),
    (MetricKind::Approximation, Aggregator::SecondMoment),
    (MetricKind::Constancy, Aggregator::Max),
    (MetricKind::Constancy, Aggregator::Mean),
    (MetricKind::LeftInverse, Aggregator::Max),
    (MetricKind::LeftInverse, Aggregator::Mean),
    (MetricKind::LeftInverse, Aggregator::SecondMoment),
    (MetricKind::Contraction, Aggregator::Max),
    (MetricKind::Contraction, Aggregator::Mean),
];

pub fn supported_aggregators(metric: MetricKind) -> &'static [Aggregator] {
    match metric {
        MetricKind::Approximation | MetricKind::LeftInverse => {
            &[Aggregator::Max, Aggregator::Mean, Aggregator::SecondMoment]
        }
        MetricKind::Constancy | MetricKind::Contraction => &[Aggregator::Max, Aggregator::Mean],
    }
}

/// Short column heading, e.g. `Rad.` for the enclosing-ball approximation.
pub fn column_label(metric: MetricKind, agg: Aggregator) -> Option<&'static str> {
    Some(match (metric, agg) {
        (MetricKind::Approximation, Aggregator::Max) => "Rad.",
        (MetricKind::Approximation, Aggregator::Mean) => "MAD",
        (MetricKind::Approximation, Aggregator::SecondMoment) => "Var.",
        (MetricKind::LeftInverse, Aggregator::Max) => "MME",
        (MetricKind::LeftInverse, Aggregator::Mean) => "MAE",
        (MetricKind::LeftInverse, Aggregator::SecondMoment) => "MSE",
        (MetricKind::Constancy | MetricKind::Contraction, Aggregator::Max) => "Max",
        (MetricKind::Constancy | MetricKind::Contraction, Aggregator::Mean) => "Mean",
        _ => return None,
    })
}

fn metric_title(metric: MetricKind) -> &'static str {
    match metric {
        MetricKind::Approximation => "Approximation",
        MetricKind::Constancy => "Constancy",
        MetricKind::LeftInverse => "Left-inverse",
        MetricKind::Contraction => "Contraction",
    }
}

/// The fitting objective that plays the role of `agg` for the left-inverse metric.
pub fn fit_objective_for(agg: Aggregator) -> Option<FitObjective> {
    match agg {
        Aggregator::Max => Some(FitObjective::Minimax),
        Aggregator::Mean => Some(FitObjective::LeastAbs),
        Aggregator::SecondMoment => Some(FitObjective::LeastSquares),
        _ => None,
    }
}

/// One metric under one aggregator. Modularity scores reduce components by their maximum;
/// contraction is measured over the whole grid.
pub fn evaluate_metric(table: &CodeTable, metric: MetricKind, agg: Aggregator) -> Result<MetricReport> {
    if !supported_aggregators(metric).contains(&agg) {
        return Err(Error::UnsupportedAggregator {
            metric: metric.name(),
            aggregator: agg.name().to_owned(),
        });
    }
    match metric {
        MetricKind::Approximation => Ok(product_via_approximation(table, agg, Aggregator::Max)?.report),
        MetricKind::Constancy => product_via_constancy(table, agg, Aggregator::Max),
        MetricKind::LeftInverse => {
            let objective = fit_objective_for(agg).expect("checked above");
            Ok(left_inverse_metric(table, objective, false)?.report)
        }
        MetricKind::Contraction => contraction_metric(table, agg, ContractionScope::Whole),
    }
}

/// How much detail a suite report carries into its records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    #[default]
    Overall,
    PerComponent,
    PerFixedValue,
}

impl Granularity {
    pub const ALL: [Granularity; 3] = [
        Granularity::Overall,
        Granularity::PerComponent,
        Granularity::PerFixedValue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Granularity::Overall => "overall",
            Granularity::PerComponent => "per_component",
            Granularity::PerFixedValue => "per_fixed_value",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Granularity::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown granularity `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredReport {
    pub aggregator: Aggregator,
    pub report: MetricReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub target: String,
    #[serde(default)]
    pub provenance: Provenance,
    pub scores: Vec<ScoredReport>,
}

/// Every metric/aggregator pair requested, for every evaluated code table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub granularity: Granularity,
    pub targets: Vec<TargetReport>,
}

/// The requested combinations in column order: metrics in the given order, and for each
/// metric the requested aggregators it supports.
pub fn combinations(metrics: &[MetricKind], aggs: &[Aggregator]) -> Vec<(MetricKind, Aggregator)> {
    metrics
        .iter()
        .flat_map(|&m| {
            aggs.iter()
                .filter(move |a| supported_aggregators(m).contains(a))
                .map(move |&a| (m, a))
        })
        .collect()
}

pub fn evaluate_target(
    target: &str,
    provenance: Provenance,
    table: &CodeTable,
    combos: &[(MetricKind, Aggregator)],
) -> Result<TargetReport> {
    let mut scores = Vec::with_capacity(combos.len());
    for &(metric, agg) in combos {
        let mut report = evaluate_metric(table, metric, agg)?.with_meta("dataset", target);
        if let Some(seed) = provenance.seed {
            report = report.with_meta("seed", seed);
        }
        scores.push(ScoredReport { aggregator: agg, report });
    }
    Ok(TargetReport {
        target: target.to_owned(),
        provenance,
        scores,
    })
}

/// One score in long format.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub target: String,
    pub metric: MetricKind,
    pub aggregator: Aggregator,
    pub component: Option<usize>,
    pub fixed_value: Option<usize>,
    pub score: QValue,
}

impl Record {
    fn column(&self) -> ColumnKey {
        (self.metric, self.aggregator, self.component, self.fixed_value)
    }
}

type ColumnKey = (MetricKind, Aggregator, Option<usize>, Option<usize>);

pub const RECORD_HEADER: [&str; 6] = ["target", "metric", "aggregator", "component", "fixed_value", "score"];

impl SuiteReport {
    /// Overall scores always; component and slice scores as the granularity asks.
    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for t in &self.targets {
            for s in &t.scores {
                let rec = |component, fixed_value, score| Record {
                    target: t.target.clone(),
                    metric: s.report.metric,
                    aggregator: s.aggregator,
                    component,
                    fixed_value,
                    score,
                };
                out.push(rec(None, None, s.report.overall));
                if self.granularity != Granularity::Overall {
                    for (i, &score) in s.report.per_component.iter().enumerate() {
                        out.push(rec(Some(i), None, score));
                    }
                }
                if self.granularity == Granularity::PerFixedValue {
                    for (i, row) in s.report.per_fixed_value.iter().enumerate() {
                        for (v, &score) in row.iter().enumerate() {
                            out.push(rec(Some(i), Some(v), score));
                        }
                    }
                }
            }
        }
        out
    }

    /// Long-format CSV with full precision.
    pub fn records_csv(&self) -> String {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = RECORD_HEADER.join(",");
        out.push('\n');
        for r in self.records() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&r.target),
                r.metric,
                r.aggregator,
                opt(r.component),
                opt(r.fixed_value),
                format_f64(r.score.value())
            ));
        }
        out
    }

    /// One row per target, one column per score. Overall granularity gives the standard
    /// comparison table; per-component granularity gives the componentwise table of the
    /// modularity metrics; per-fixed-value granularity gives every slice score.
    pub fn wide_table(&self) -> WideTable {
        let keep = |r: &Record| match self.granularity {
            Granularity::Overall => r.component.is_none(),
            Granularity::PerComponent => r.component.is_some() && r.fixed_value.is_none(),
            Granularity::PerFixedValue => r.fixed_value.is_some(),
        };
        let mut columns: Vec<ColumnKey> = Vec::new();
        let mut rows: Vec<(String, HashMap<ColumnKey, QValue>)> = Vec::new();
        for r in self.records().into_iter().filter(keep) {
            let key = r.column();
            if !columns.contains(&key) {
                columns.push(key);
            }
            if rows.last().is_none_or(|(t, _)| *t != r.target) {
                rows.push((r.target.clone(), HashMap::new()));
            }
            rows.last_mut().expect("pushed above").1.insert(key, r.score);
        }
        let headers = columns
            .iter()
            .map(|&(metric, agg, component, fixed)| {
                let label = column_label(metric, agg).unwrap_or(agg.name());
                let mut h = format!("{} {label}", metric_title(metric));
                if let Some(i) = component {
                    h.push_str(&format!(" [{}]", i + 1));
                }
                if let Some(v) = fixed {
                    h.push_str(&format!(" @{v}"));
                }
                h
            })
            .collect();
        let rows = rows
            .into_iter()
            .map(|(target, scores)| {
                let cells = columns.iter().map(|k| scores.get(k).copied()).collect();
                (target, cells)
            })
            .collect();
        WideTable { headers, rows }
    }
}

/// A rendered table with optional cells.
#[derive(Clone, Debug, PartialEq)]
pub struct WideTable {
    pub headers: Vec<String>,
    pub rows: Vec<(String, Vec<Option<QValue>>)>,
}

impl WideTable {
    pub fn to_csv(&self, format: impl Fn(f64) -> String) -> String {
        let mut out = String::from("target");
        for h in &self.headers {
            out.push(',');
            out.push_str(&csv_field(h));
        }
        out.push('\n');
        for (target, cells) in &self.rows {
            out.push_str(&csv_field(target));
            for c in cells {
                out.push(',');
                if let Some(q) = c {
                    out.push_str(&format(q.value()));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self, format: impl Fn(f64) -> String) -> String {
        let mut out = String::from("| target |");
        for h in &self.headers {
            out.push_str(&format!(" {h} |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(self.headers.len()));
        out.push('\n');
        for (target, cells) in &self.rows {
            out.push_str(&format!("| {target} |"));
            for c in cells {
                match c {
                    Some(q) => out.push_str(&format!(" {} |", format(q.value()))),
                    None => out.push_str("  |"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Two decimal places, as in published tables.
pub fn two_decimals(v: f64) -> String {
    format!("{v:.2}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CodePartition, FactorGrid};

    fn suite(granularity: Granularity) -> SuiteReport {
        let grid = FactorGrid::uniform(2, &[0.0, 1.0, 2.0]).unwrap();
        let table = CodeTable::from_fn(grid, CodePartition::scalar(2), |y| vec![y[0] + y[1], y[1]]).unwrap();
        let combos = combinations(&MetricKind::ALL, &[Aggregator::Max, Aggregator::Mean, Aggregator::SecondMoment]);
        assert_eq!(combos, STANDARD_COLUMNS.to_vec());
        let target = evaluate_target("skew", Provenance::default(), &table, &combos).unwrap();
        SuiteReport {
            granularity,
            targets: vec![target],
        }
    }

    #[test]
    fn standard_table_has_ten_labelled_columns() {
        let table = suite(Granularity::Overall).wide_table();
        assert_eq!(table.headers.len(), 10);
        assert_eq!(table.headers[0], "Approximation Rad.");
        assert_eq!(table.headers[7], "Left-inverse MSE");
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].1.iter().all(Option::is_some));
    }

    #[test]
    fn records_follow_granularity() {
        let overall = suite(Granularity::Overall).records();
        assert_eq!(overall.len(), 10);
        let per_component = suite(Granularity::PerComponent);
        // five modularity columns with two components each
        assert_eq!(per_component.records().len(), 10 + 5 * 2);
        assert_eq!(per_component.wide_table().headers.len(), 10);
        let per_value = suite(Granularity::PerFixedValue).records();
        assert_eq!(per_value.len(), 10 + 5 * 2 + 5 * 2 * 3);
    }

    #[test]
    fn records_are_consistent_with_reports() {
        let s = suite(Granularity::PerComponent);
        for t in &s.targets {
            for sc in &t.scores {
                assert!(sc.report.is_consistent());
            }
        }
        let csv = s.records_csv();
        assert!(csv.starts_with("target,metric,aggregator,component,fixed_value,score\n"));
        assert!(csv.contains("skew,approximation,max,0,,"));
    }

    #[test]
    fn unsupported_combination_is_an_error() {
        let grid = FactorGrid::uniform(1, &[0.0, 1.0]).unwrap();
        let table = CodeTable::from_fn(grid, CodePartition::scalar(1), |y| y.to_vec()).unwrap();
        assert!(evaluate_metric(&table, MetricKind::Constancy, Aggregator::SecondMoment).is_err());
        assert!(evaluate_metric(&table, MetricKind::Contraction, Aggregator::Median).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = suite(Granularity::PerFixedValue);
        let json = serde_json::to_string(&s).unwrap();
        let back: SuiteReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
