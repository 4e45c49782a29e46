//! Truth values for exact and quantitative reasoning.
//!
//! [`QValue`] is an element of the Lawvere quantale `([0, ∞], ≥, +, 0)`. Its order is the
//! reverse of the numeric order: `p ⪯ q` holds when `p ≥ q`, so the top element is `0`
//! (a perfect score) and the bottom is `+∞`. Meet is numeric `max`, join is numeric `min`,
//! the monoidal product is addition and the internal hom is truncated subtraction.
//!
//! [`BoolQ`] is the two-element Boolean quantale, and [`UnitQ`] is `([0, 1], ≤, ×, 1)`,
//! isomorphic to the Lawvere quantale through `exp(-x)` / `-ln(u)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A distance-valued truth value in `[0, +∞]`. NaN and negative values are unrepresentable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QValue(f64);

impl QValue {
    /// Top of the quantale order: the unit of meet and of the monoidal product.
    pub const TOP: QValue = QValue(0.0);
    /// Bottom of the quantale order.
    pub const BOTTOM: QValue = QValue(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidValue(value));
        }
        // normalize -0.0
        Ok(QValue(value + 0.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `self ⪯ other` in the quantale order, i.e. `self >= other` numerically.
    pub fn precedes(self, other: QValue) -> bool {
        self.0 >= other.0
    }

    /// Greatest lower bound: numeric maximum.
    pub fn meet(self, other: QValue) -> QValue {
        QValue(self.0.max(other.0))
    }

    /// Least upper bound: numeric minimum.
    pub fn join(self, other: QValue) -> QValue {
        QValue(self.0.min(other.0))
    }

    /// Monoidal product: addition, with `+∞` absorbing.
    pub fn tensor(self, other: QValue) -> QValue {
        QValue(self.0 + other.0)
    }

    /// Internal hom `self ⊸ target`, the truncated subtraction `max(target - self, 0)`.
    ///
    /// `+∞ ⊸ t = 0` for every `t`, and `s ⊸ +∞ = +∞` for finite `s`. Under floating-point rounding the
    /// adjunction with `tensor` is exact whenever `t - s` and `q + s` are representable.
    pub fn hom(self, target: QValue) -> QValue {
        if self.0 == f64::INFINITY {
            return QValue::TOP;
        }
        if target.0 == f64::INFINITY {
            return QValue::BOTTOM;
        }
        QValue((target.0 - self.0).max(0.0))
    }

    /// Maps into the unit-interval quantale via `exp(-x)`.
    pub fn to_unit(self) -> UnitQ {
        UnitQ((-self.0).exp())
    }

    pub fn from_unit(u: UnitQ) -> QValue {
        if u.0 == 0.0 {
            QValue::BOTTOM
        } else {
            // ln(1) is exactly 0; the max clears a possible -0.0
            QValue((-u.0.ln()).max(0.0))
        }
    }
}

impl Eq for QValue {}

impl PartialOrd for QValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on the underlying value (not the quantale order).
impl Ord for QValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl TryFrom<f64> for QValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        QValue::new(value)
    }
}

impl From<QValue> for f64 {
    fn from(q: QValue) -> f64 {
        q.0
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn meet(a: QValue, b: QValue) -> QValue {
    a.meet(b)
}

pub fn join(a: QValue, b: QValue) -> QValue {
    a.join(b)
}

pub fn tensor(a: QValue, b: QValue) -> QValue {
    a.tensor(b)
}

pub fn hom(s: QValue, t: QValue) -> QValue {
    s.hom(t)
}

pub fn to_unit(a: QValue) -> UnitQ {
    a.to_unit()
}

pub fn from_unit(u: UnitQ) -> QValue {
    QValue::from_unit(u)
}

/// Checks the tensor-hom adjunction `q + s ⪯ t  ⇔  q ⪯ s ⊸ t` on every sampled triple.
pub fn check_adjunction(samples: &[(QValue, QValue, QValue)]) -> bool {
    samples
        .iter()
        .all(|&(q, s, t)| q.tensor(s).precedes(t) == q.precedes(s.hom(t)))
}

/// The Boolean quantale: `false ⊢ true`, meet is conjunction, hom is implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolQ(pub bool);

impl BoolQ {
    pub const TOP: BoolQ = BoolQ(true);
    pub const BOTTOM: BoolQ = BoolQ(false);

    pub fn precedes(self, other: BoolQ) -> bool {
        !self.0 || other.0
    }

    pub fn meet(self, other: BoolQ) -> BoolQ {
        BoolQ(self.0 && other.0)
    }

    pub fn join(self, other: BoolQ) -> BoolQ {
        BoolQ(self.0 || other.0)
    }

    pub fn tensor(self, other: BoolQ) -> BoolQ {
        self.meet(other)
    }

    pub fn hom(self, target: BoolQ) -> BoolQ {
        BoolQ(!self.0 || target.0)
    }

    /// The exact counterpart of a score: `true` iff the distance is the top element `0`.
    pub fn from_score(q: QValue) -> BoolQ {
        BoolQ(q == QValue::TOP)
    }
}

/// An element of `([0, 1], ≤, ×, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct UnitQ(f64);

impl UnitQ {
    pub const TOP: UnitQ = UnitQ(1.0);
    pub const BOTTOM: UnitQ = UnitQ(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfUnitInterval(value));
        }
        Ok(UnitQ(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn tensor(self, other: UnitQ) -> UnitQ {
        UnitQ(self.0 * other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: f64) -> QValue {
        QValue::new(x).unwrap()
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn construction_rejects_nan_and_negatives() {
        assert!(QValue::new(f64::NAN).is_err());
        assert!(QValue::new(-1e-300).is_err());
        assert_eq!(q(-0.0).value().to_bits(), 0.0f64.to_bits());
        assert!(q(INF).value().is_infinite());
    }

    #[test]
    fn meet_is_numeric_max() {
        assert_eq!(meet(q(3.0), q(5.0)), q(5.0));
        assert_eq!(meet(q(0.0), q(0.0)), q(0.0));
        assert_eq!(meet(q(INF), q(2.0)), q(INF));
    }

    #[test]
    fn join_is_numeric_min() {
        assert_eq!(join(q(3.0), q(5.0)), q(3.0));
        assert_eq!(join(q(INF), q(2.0)), q(2.0));
        assert_eq!(join(q(0.0), q(7.0)), q(0.0));
    }

    #[test]
    fn tensor_is_addition() {
        assert_eq!(tensor(q(1.5), q(2.5)), q(4.0));
        assert_eq!(tensor(QValue::TOP, q(0.37)), q(0.37));
        assert_eq!(tensor(q(INF), q(0.0)), q(INF));
    }

    #[test]
    fn hom_is_truncated_subtraction() {
        assert_eq!(hom(q(5.0), q(3.0)), q(0.0));
        assert_eq!(hom(q(3.0), q(5.0)), q(2.0));
        assert_eq!(hom(q(1.25), q(1.25)), q(0.0));
        assert_eq!(hom(q(INF), q(INF)), q(0.0));
        assert_eq!(hom(q(INF), q(4.0)), q(0.0));
        assert_eq!(hom(q(4.0), q(INF)), q(INF));
    }

    #[test]
    fn adjunction_hand_cases() {
        assert!(check_adjunction(&[(q(2.0), q(3.0), q(5.0))]));
        assert!(check_adjunction(&[(q(1.0), q(3.0), q(5.0))]));
    }

    #[test]
    fn adjunction_is_exact_on_dyadic_values() {
        // sums and differences of multiples of 1/64 below 2^40 are computed exactly
        let values: Vec<QValue> = (0..40).map(|k| q(k as f64 * 0.390625)).chain([q(INF)]).collect();
        let mut samples = Vec::new();
        for &a in &values {
            for &b in &values {
                for &c in &values {
                    samples.push((a, b, c));
                }
            }
        }
        assert!(check_adjunction(&samples));
    }

    #[test]
    fn unit_interval_isomorphism() {
        assert_eq!(to_unit(q(0.0)).value(), 1.0);
        assert_eq!(from_unit(UnitQ::TOP), q(0.0));
        assert_eq!(to_unit(q(INF)).value(), 0.0);
        assert_eq!(from_unit(UnitQ::BOTTOM), q(INF));
        let back = from_unit(to_unit(q(2.5))).value();
        assert!((back - 2.5).abs() <= 1e-12);
        assert!(UnitQ::new(1.5).is_err());
    }

    #[test]
    fn boolean_quantale() {
        let (t, f) = (BoolQ::TOP, BoolQ::BOTTOM);
        assert_eq!(t.hom(f), f);
        assert_eq!(f.hom(f), t);
        assert_eq!(t.meet(f), f);
        assert_eq!(t.join(f), t);
        for a in [t, f] {
            for b in [t, f] {
                for c in [t, f] {
                    assert_eq!(a.tensor(b).precedes(c), a.precedes(b.hom(c)));
                }
            }
        }
        assert_eq!(BoolQ::from_score(QValue::TOP), t);
        assert_eq!(BoolQ::from_score(q(1e-300)), f);
    }
}
