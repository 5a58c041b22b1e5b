//! Values with a symbolic infinitesimal offset, and the internal comparison
//! key that adds an identity tie-break.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest infinitesimal offset accepted from callers.
pub const MAX_EPS: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    MinusInf,
    Finite,
    PlusInf,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValueError {
    #[error("value {0} is not a finite real")]
    NotFinite(f64),
    #[error("infinitesimal offset {0} outside [-{MAX_EPS}, {MAX_EPS}]")]
    EpsOutOfRange(i32),
}

/// `real + eps * ε` for an arbitrarily small `ε > 0`, or one of the two
/// infinities. Ordered by `(kind, real, eps)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ExtValue {
    pub kind: Kind,
    pub real: f64,
    pub eps: i32,
}

pub(crate) fn normalize(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl ExtValue {
    pub const PLUS_INF: ExtValue = ExtValue { kind: Kind::PlusInf, real: 0.0, eps: 0 };
    pub const MINUS_INF: ExtValue = ExtValue { kind: Kind::MinusInf, real: 0.0, eps: 0 };

    pub fn make(real: f64, eps: i32) -> Result<Self, ValueError> {
        if !real.is_finite() {
            return Err(ValueError::NotFinite(real));
        }
        if eps.abs() > MAX_EPS {
            return Err(ValueError::EpsOutOfRange(eps));
        }
        Ok(ExtValue { kind: Kind::Finite, real: normalize(real), eps })
    }

    pub fn finite(real: f64) -> Result<Self, ValueError> {
        Self::make(real, 0)
    }
}

impl PartialEq for ExtValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtValue {}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind.cmp(&other.kind).then_with(|| self.real.total_cmp(&other.real)).then_with(|| self.eps.cmp(&other.eps))
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::PlusInf => write!(f, "+inf"),
            Kind::MinusInf => write!(f, "-inf"),
            Kind::Finite if self.eps == 0 => write!(f, "{}", self.real),
            Kind::Finite => write!(f, "{}{:+}e", self.real, self.eps),
        }
    }
}

/// Which of the two trees a comparison happens in. The down-tree orders
/// every value by its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Up,
    Down,
}

impl Polarity {
    pub const BOTH: [Polarity; 2] = [Polarity::Up, Polarity::Down];

    pub fn idx(self) -> usize {
        match self {
            Polarity::Up => 0,
            Polarity::Down => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Polarity::Up => Polarity::Down,
            Polarity::Down => Polarity::Up,
        }
    }
}

/// Total comparison key of an item: `(kind, real, tie, eps)`.
///
/// Equal reals fall back to `tie`, the creation key of the item whose value
/// this is; hooks and transient values share the tie of the item they hug so
/// that no foreign value fits between them.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Height {
    pub kind: i8,
    pub real: f64,
    pub tie: i64,
    pub eps: i32,
}

impl Height {
    /// Above every item; the special root.
    pub const TOP: Height = Height { kind: 1, real: 0.0, tie: 0, eps: 0 };

    pub fn item(real: f64, tie: i64) -> Self {
        Height { kind: 0, real: normalize(real), tie, eps: 0 }
    }

    pub fn offset(self, d: i32) -> Self {
        Height { eps: self.eps + d, ..self }
    }

    pub fn signed(self, pol: Polarity) -> Self {
        match pol {
            Polarity::Up => self,
            Polarity::Down => -self,
        }
    }

    pub fn ext(self) -> ExtValue {
        match self.kind {
            0 => ExtValue { kind: Kind::Finite, real: self.real, eps: self.eps },
            k if k > 0 => ExtValue::PLUS_INF,
            _ => ExtValue::MINUS_INF,
        }
    }
}

impl PartialEq for Height {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Height {}

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Height {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| self.real.total_cmp(&other.real))
            .then_with(|| self.tie.cmp(&other.tie))
            .then_with(|| self.eps.cmp(&other.eps))
    }
}

impl std::ops::Neg for Height {
    type Output = Height;

    fn neg(self) -> Height {
        Height { kind: -self.kind, real: normalize(-self.real), tie: -self.tie, eps: -self.eps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_value_identity() {
        let v = ExtValue::make(3.0, 0).unwrap();
        assert_eq!(v.real, 3.0);
        assert_eq!(v.eps, 0);
        assert_eq!(v.kind, Kind::Finite);
    }

    #[test]
    fn lexicographic_order() {
        assert!(ExtValue::make(3.0, -1).unwrap() < ExtValue::make(3.0, 0).unwrap());
        assert!(ExtValue::make(2.0, 4).unwrap() < ExtValue::make(3.0, -4).unwrap());
        assert!(ExtValue::MINUS_INF < ExtValue::make(-1e300, 0).unwrap());
        assert!(ExtValue::PLUS_INF > ExtValue::make(1e300, 4).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ExtValue::make(f64::NAN, 0), Err(ValueError::NotFinite(_))));
        assert!(matches!(ExtValue::make(1.0, 5), Err(ValueError::EpsOutOfRange(5))));
    }

    #[test]
    fn negative_zero_is_zero() {
        assert_eq!(ExtValue::make(-0.0, 0).unwrap(), ExtValue::make(0.0, 0).unwrap());
        assert_eq!(Height::item(-0.0, 1), Height::item(0.0, 1));
        assert_eq!(-Height::item(0.0, 1), Height::item(0.0, -1));
    }

    #[test]
    fn tie_precedes_eps() {
        let a = Height::item(1.0, 5).offset(3);
        let b = Height::item(1.0, 6).offset(-3);
        assert!(a < b);
    }

    #[test]
    fn negation_reverses() {
        let a = Height::item(1.0, 5).offset(1);
        let b = Height::item(1.0, 5).offset(2);
        assert!(a < b);
        assert!(-a > -b);
        assert!(-Height::TOP < -a);
    }
}
