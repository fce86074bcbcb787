use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// The map `x ↦ a·x + b` with `a ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct AffineMap {
    a: Rational,
    b: Rational,
}

#[derive(Deserialize)]
struct RawMap {
    a: Rational,
    b: Rational,
}

impl TryFrom<RawMap> for AffineMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<Self> {
        AffineMap::new(raw.a, raw.b)
    }
}

impl AffineMap {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("affine map with zero slope".into()));
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity() -> Self {
        AffineMap {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn translation(b: Rational) -> Self {
        AffineMap {
            a: Rational::one(),
            b,
        }
    }

    pub fn negation() -> Self {
        AffineMap {
            a: -Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_increasing(&self) -> bool {
        self.a.is_positive()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &(&self.a * x) + &self.b
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            a: &self.a * &inner.a,
            b: &(&self.a * &inner.b) + &self.b,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv_a = self.a.recip().expect("slope is nonzero");
        let b = -(&inv_a * &self.b);
        AffineMap { a: inv_a, b }
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ {}·x + {}", self.a, self.b)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", self.a, self.b)
    }
}
