//! Disentanglement metrics over sampled encoders.
//!
//! Modularity (is the encoder a product function?):
//! * [`product_via_approximation`]: distance to the best product approximation.
//! * [`product_via_constancy`]: constancy of the curried components, no optimization.
//!
//! Informativeness:
//! * [`left_inverse_metric`]: error of the best affine left inverse.
//! * [`contraction_metric`]: how much the encoder contracts pairs of inputs.
//!
//! Beyond plain functions: [`equivariance_metric`], [`output_independence`] and
//! [`input_independence_mean`].
//!
//! Every score is a [`QValue`]; `0` means the defining equation holds exactly.

mod equivariance;
mod independence;
mod informativeness;
mod product;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use equivariance::{equivariance_metric, CodeAction, FiniteAction};
pub use independence::{
    input_independence_by_component, input_independence_mean, kl_divergence,
    output_independence, DiscreteKernel,
};
pub use informativeness::{
    contraction_metric, contraction_metric_with, left_inverse_metric, ContractionScope,
    LeftInverse,
};
pub use product::{
    constancy, product_via_approximation, product_via_constancy, ConstancyMethod,
    PairConvention, ProductApproximation,
};

use crate::premetric::Aggregator;
use crate::quantale::QValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Approximation,
    Constancy,
    LeftInverse,
    Contraction,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Approximation,
        MetricKind::Constancy,
        MetricKind::LeftInverse,
        MetricKind::Contraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Approximation => "approximation",
            MetricKind::Constancy => "constancy",
            MetricKind::LeftInverse => "left_inverse",
            MetricKind::Contraction => "contraction",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        MetricKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Scores of one metric under one aggregation policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: MetricKind,
    /// Inner aggregation or fitting objective, e.g. `max`, `second_moment`, `minimax`.
    pub inner: String,
    /// Reduction from `per_component` to `overall`; `None` for whole-map scores.
    pub outer: Option<Aggregator>,
    pub overall: QValue,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_component: Vec<QValue>,
    /// `per_fixed_value[i][v]`: score of component `i` on the slice with factor `i` at value `v`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_fixed_value: Vec<Vec<QValue>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl MetricReport {
    /// Recomputes `overall` from the component scores, where the report has an outer
    /// aggregation.
    pub fn recomputed_overall(&self) -> Option<QValue> {
        self.outer.map(|agg| agg.apply_q(&self.per_component))
    }

    pub fn is_consistent(&self) -> bool {
        self.recomputed_overall().is_none_or(|q| q == self.overall)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_owned(), value.to_string());
        self
    }
}

pub(crate) fn q(value: f64) -> QValue {
    // metric computations only produce non-negative, non-NaN values
    QValue::new(value).expect("metric value is a valid quantale element")
}
