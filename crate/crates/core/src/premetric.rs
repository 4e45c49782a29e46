//! Ground distances on points, aggregators, and premetrics induced on finitely sampled
//! functions.
//!
//! A sampled function is stored extensionally as parallel input/output arrays. The distance
//! between two sampled functions on the same inputs is an aggregate of the pointwise
//! distances; with [`Aggregator::Max`] it is the meet-induced premetric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::QValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Euclidean,
    Discrete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDistance {
    pub kind: DistanceKind,
    pub dimension: usize,
}

impl PointDistance {
    pub fn euclidean(dimension: usize) -> Self {
        PointDistance {
            kind: DistanceKind::Euclidean,
            dimension,
        }
    }

    pub fn discrete(dimension: usize) -> Self {
        PointDistance {
            kind: DistanceKind::Discrete,
            dimension,
        }
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<QValue> {
        for p in [a, b] {
            if p.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    context: "point distance",
                    expected: self.dimension,
                    found: p.len(),
                });
            }
        }
        let d = match self.kind {
            DistanceKind::Euclidean => euclidean(a, b),
            DistanceKind::Discrete => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
        };
        QValue::new(d)
    }
}

pub fn point_distance(d: &PointDistance, a: &[f64], b: &[f64]) -> Result<QValue> {
    d.eval(a, b)
}

/// Euclidean distance without dimension checks; `a` and `b` must have equal length.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Reduction replacing a universal quantifier over a finite set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    Max,
    Mean,
    Sum,
    Median,
    SecondMoment,
}

impl Aggregator {
    pub const ALL: [Aggregator; 5] = [
        Aggregator::Max,
        Aggregator::Mean,
        Aggregator::Sum,
        Aggregator::Median,
        Aggregator::SecondMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Max => "max",
            Aggregator::Mean => "mean",
            Aggregator::Sum => "sum",
            Aggregator::Median => "median",
            Aggregator::SecondMoment => "second_moment",
        }
    }

    /// Reduces `values` in index order. An empty input yields `0`, the quantale top.
    pub fn apply(self, values: &[f64]) -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        let n = values.len() as f64;
        match self {
            Aggregator::Max => values.iter().copied().fold(0.0, f64::max),
            Aggregator::Sum => values.iter().sum(),
            Aggregator::Mean => values.iter().sum::<f64>() / n,
            Aggregator::SecondMoment => values.iter().map(|v| v * v).sum::<f64>() / n,
            Aggregator::Median => {
                let mut sorted = values.to_vec();
                sorted.sort_by(f64::total_cmp);
                // lower median for even counts
                sorted[(sorted.len() - 1) / 2]
            }
        }
    }

    pub fn apply_q(self, values: &[QValue]) -> QValue {
        let raw: Vec<f64> = values.iter().map(|q| q.value()).collect();
        QValue::new(self.apply(&raw)).expect("aggregate of non-negative values")
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Aggregator::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown aggregator `{s}`"))
    }
}

/// A function known only on a finite list of distinct inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    inputs: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
}

impl SampledFunction {
    pub fn new(inputs: Vec<Vec<f64>>, outputs: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::DimensionMismatch {
                context: "sampled function outputs",
                expected: inputs.len(),
                found: outputs.len(),
            });
        }
        for (i, a) in inputs.iter().enumerate() {
            if inputs[..i].contains(a) {
                return Err(Error::DuplicateInput(a.clone()));
            }
        }
        Ok(SampledFunction { inputs, outputs })
    }

    pub fn from_fn(inputs: Vec<Vec<f64>>, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let outputs = inputs.iter().map(|a| f(a)).collect();
        SampledFunction::new(inputs, outputs)
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Vec<f64>] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn eval(&self, a: &[f64]) -> Option<&[f64]> {
        self.inputs
            .iter()
            .position(|x| x.as_slice() == a)
            .map(|i| self.outputs[i].as_slice())
    }

    /// `outer ∘ self`, defined when every output of `self` is a sampled input of `outer`.
    pub fn then(&self, outer: &SampledFunction) -> Result<SampledFunction> {
        let outputs = self
            .outputs
            .iter()
            .map(|b| {
                outer
                    .eval(b)
                    .map(<[f64]>::to_vec)
                    .ok_or_else(|| Error::NotComposable(b.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction {
            inputs: self.inputs.clone(),
            outputs,
        })
    }

    /// `self ⊗ other` on the product of the two input lists, row-major, with concatenated
    /// inputs and outputs.
    pub fn parallel(&self, other: &SampledFunction) -> SampledFunction {
        let mut inputs = Vec::with_capacity(self.len() * other.len());
        let mut outputs = Vec::with_capacity(self.len() * other.len());
        for (a, fa) in self.inputs.iter().zip(&self.outputs) {
            for (c, hc) in other.inputs.iter().zip(&other.outputs) {
                inputs.push([a.as_slice(), c.as_slice()].concat());
                outputs.push([fa.as_slice(), hc.as_slice()].concat());
            }
        }
        SampledFunction { inputs, outputs }
    }

    /// Largest ratio `d(f(u), f(v)) / d(u, v)` over distinct sampled inputs.
    pub fn empirical_lipschitz(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let dx = euclidean(&self.inputs[i], &self.inputs[j]);
                let dy = euclidean(&self.outputs[i], &self.outputs[j]);
                if dx > 0.0 {
                    worst = worst.max(dy / dx);
                }
            }
        }
        worst
    }
}

/// Aggregate of pointwise distances `d(f(a), g(a))` over the shared inputs.
pub fn induced_function_distance(
    d: &PointDistance,
    agg: Aggregator,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<QValue> {
    if f.inputs != g.inputs {
        return Err(Error::InputMismatch);
    }
    let pointwise = f
        .outputs
        .iter()
        .zip(&g.outputs)
        .map(|(a, b)| d.eval(a, b).map(QValue::value))
        .collect::<Result<Vec<f64>>>()?;
    QValue::new(agg.apply(&pointwise))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub reflexivity: bool,
    pub symmetry: bool,
    pub triangle: bool,
    pub identity_of_indiscernibles: bool,
    /// First triangle violation found, as indices `(x, y, z)` with `d(x,z) > d(x,y) + d(y,z)`.
    pub triangle_witness: Option<(usize, usize, usize)>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.reflexivity && self.symmetry && self.triangle && self.identity_of_indiscernibles
    }
}

/// Checks premetric and metric laws of an arbitrary distance on a finite sample.
pub fn check_laws_with<F>(points: &[Vec<f64>], dist: F) -> LawReport
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let n = points.len();
    let mut table = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = dist(&points[i], &points[j]);
        }
    }
    let d = |i: usize, j: usize| table[i * n + j];
    let mut report = LawReport {
        reflexivity: (0..n).all(|i| d(i, i) == 0.0),
        symmetry: true,
        triangle: true,
        identity_of_indiscernibles: true,
        triangle_witness: None,
    };
    for i in 0..n {
        for j in 0..n {
            if d(i, j) != d(j, i) {
                report.symmetry = false;
            }
            if d(i, j) == 0.0 && points[i] != points[j] {
                report.identity_of_indiscernibles = false;
            }
        }
    }
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = d(x, z);
                let rhs = d(x, y) + d(y, z);
                // relative slack for the rounding of the two-term sum
                if lhs > rhs + 4.0 * f64::EPSILON * lhs.max(rhs) {
                    report.triangle = false;
                    report.triangle_witness = Some((x, y, z));
                    break 'outer;
                }
            }
        }
    }
    report
}

pub fn check_premetric_laws(d: &PointDistance, points: &[Vec<f64>]) -> Result<LawReport> {
    for p in points {
        if p.len() != d.dimension {
            return Err(Error::DimensionMismatch {
                context: "premetric law check",
                expected: d.dimension,
                found: p.len(),
            });
        }
    }
    Ok(check_laws_with(points, |a, b| {
        d.eval(a, b).expect("dimensions checked").value()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InequalityCheck {
    Holds { lhs: f64, rhs: f64 },
    Fails { lhs: f64, rhs: f64 },
    /// An outer map is not 1-Lipschitz on the sample, so the inequality is not asserted.
    PreconditionUnmet { lipschitz: f64 },
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, InequalityCheck::Holds { .. })
    }

    fn compare(lhs: f64, rhs: f64) -> Self {
        if lhs <= rhs + 8.0 * f64::EPSILON * rhs.max(1.0) {
            InequalityCheck::Holds { lhs, rhs }
        } else {
            InequalityCheck::Fails { lhs, rhs }
        }
    }
}

fn max_distance(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    let dim = f.outputs.first().map_or(0, Vec::len);
    induced_function_distance(&PointDistance::euclidean(dim), Aggregator::Max, f, g)
        .map(QValue::value)
}

/// Series composition: `d(g∘f, g'∘f') ≤ d(g, g') + d(f, f')` under the max aggregator.
///
/// `g` and `g'` must share their input list, which must contain every output of `f` and
/// `f'`. The inequality is only asserted when both outer maps are 1-Lipschitz on the sample.
pub fn check_composition_inequality(
    f: &SampledFunction,
    f_alt: &SampledFunction,
    g: &SampledFunction,
    g_alt: &SampledFunction,
) -> Result<InequalityCheck> {
    let gf = f.then(g)?;
    let gf_alt = f_alt.then(g_alt)?;
    let lipschitz = g.empirical_lipschitz().max(g_alt.empirical_lipschitz());
    if lipschitz > 1.0 + 1e-12 {
        return Ok(InequalityCheck::PreconditionUnmet { lipschitz });
    }
    let lhs = max_distance(&gf, &gf_alt)?;
    let rhs = max_distance(g, g_alt)? + max_distance(f, f_alt)?;
    Ok(InequalityCheck::compare(lhs, rhs))
}

/// Parallel product: `d(f⊗h, f'⊗h') ≤ d(f, f') + d(h, h')` under the max aggregator with the
/// Euclidean metric on concatenated outputs.
pub fn check_product_inequality(
    f: &SampledFunction,
    f_alt: &SampledFunction,
    h: &SampledFunction,
    h_alt: &SampledFunction,
) -> Result<InequalityCheck> {
    if f.len() != f_alt.len() || h.len() != h_alt.len() {
        return Err(Error::InputMismatch);
    }
    let lhs = max_distance(&f.parallel(h), &f_alt.parallel(h_alt))?;
    let rhs = max_distance(f, f_alt)? + max_distance(h, h_alt)?;
    Ok(InequalityCheck::compare(lhs, rhs))
}
