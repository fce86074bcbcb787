use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;

/// Exponents of `x`, `y`, `z`.
pub type Exponents = [u32; 3];

/// Sparse polynomial in `x`, `y`, `z` over ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, Rational>,
}

/// Graded lexicographic order, largest first.
fn grlex_desc(a: &Exponents, b: &Exponents) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Rational, e: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MultiPoly { terms }
    }

    pub fn x() -> Self {
        MultiPoly::monomial(Rational::one(), [1, 0, 0])
    }

    pub fn y() -> Self {
        MultiPoly::monomial(Rational::one(), [0, 1, 0])
    }

    pub fn z() -> Self {
        MultiPoly::monomial(Rational::one(), [0, 0, 1])
    }

    /// Builds from `(coefficient, [i, j, k])` pairs, merging repeats.
    pub fn from_terms(terms: &[(i64, Exponents)]) -> Self {
        terms
            .iter()
            .map(|&(c, e)| MultiPoly::monomial(Rational::integer(c), e))
            .fold(MultiPoly::zero(), |acc, t| acc + t)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    /// Terms in graded lexicographic order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(Exponents, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| grlex_desc(&a.0, &b.0));
        v
    }

    pub fn coefficient(&self, e: Exponents) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Degree in the variable with index `var` (0 = x, 1 = y, 2 = z).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        (0..n).fold(MultiPoly::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| c * &x.pow(e[0]) * y.pow(e[1]) * z.pow(e[2]))
            .sum()
    }

    /// Exact evaluation at small integer points; `None` if a coefficient is
    /// not an integer or the value overflows.
    pub fn eval_i128(&self, x: i128, y: i128, z: i128) -> Option<i128> {
        let mut total: i128 = 0;
        for (e, c) in &self.terms {
            let c = c.is_integer().then(|| c.numer().to_i128()).flatten()?;
            let mut t = c;
            for (base, exp) in [(x, e[0]), (y, e[1]), (z, e[2])] {
                t = t.checked_mul(base.checked_pow(exp)?)?;
            }
            total = total.checked_add(t)?;
        }
        Some(total)
    }

    /// Swaps `x` and `z`.
    pub fn phi(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| ([e[2], e[1], e[0]], c.clone())).collect(),
        }
    }

    /// Substitutes `y = value`.
    pub fn with_y(&self, value: &Rational) -> MultiPoly {
        self.terms
            .iter()
            .map(|(e, c)| MultiPoly::monomial(c * &value.pow(e[1]), [e[0], 0, e[2]]))
            .fold(MultiPoly::zero(), |acc, t| acc + t)
    }

    /// Substitutes `z = x`.
    pub fn with_z_eq_x(&self) -> MultiPoly {
        self.terms
            .iter()
            .map(|(e, c)| MultiPoly::monomial(c.clone(), [e[0] + e[2], e[1], 0]))
            .fold(MultiPoly::zero(), |acc, t| acc + t)
    }

    /// Divides by a monomial factor if it divides every term.
    pub fn divide_monomial(&self, e: Exponents) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            if t.iter().zip(e.iter()).any(|(a, b)| a < b) {
                return None;
            }
            terms.insert([t[0] - e[0], t[1] - e[1], t[2] - e[2]], c.clone());
        }
        Some(MultiPoly { terms })
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e.iter())
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Exponents,
    coefficient: Rational,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .sorted_terms()
            .into_iter()
            .map(|(exponents, coefficient)| TermJson { exponents, coefficient })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let mut p = MultiPoly::zero();
        for t in terms {
            p.add_term(t.exponents, t.coefficient);
        }
        Ok(p)
    }
}
