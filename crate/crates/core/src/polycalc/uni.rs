use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Polynomial in one variable over ℚ, coefficients lowest degree first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl From<Vec<Rational>> for UniPoly {
    fn from(coeffs: Vec<Rational>) -> Self {
        UniPoly::new(coeffs)
    }
}

impl From<UniPoly> for Vec<Rational> {
    fn from(p: UniPoly) -> Self {
        p.coeffs
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::integer(c)).collect())
    }

    /// From integer coefficients, highest degree first.
    pub fn from_ints_desc(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().rev().map(|&c| Rational::integer(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    /// The variable itself.
    pub fn var() -> Self {
        UniPoly::from_ints(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Monic multiple (zero stays zero).
    pub fn monic(&self) -> UniPoly {
        match self.coeffs.last() {
            Some(lc) => self.scale(&lc.recip().expect("leading coefficient is nonzero")),
            None => UniPoly::zero(),
        }
    }

    /// Quotient and remainder of division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lc_inv = divisor.leading().recip()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") * &lc_inv;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &(&factor * c);
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Rational::is_zero) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.div_rem(self).is_ok_and(|(_, r)| r.is_zero())
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("b is nonzero").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient,
    /// proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().expect("nonzero").is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Removes the largest power of the variable dividing `self`, returning
    /// the quotient and that power.
    pub fn strip_variable_power(&self) -> (UniPoly, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (UniPoly::zero(), 0);
        }
        (UniPoly::new(self.coeffs[k..].to_vec()), k)
    }

    /// Substitutes a polynomial for the variable.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| &(&acc * inner) + &UniPoly::constant(c.clone()))
    }
}

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Ok(vec![BigInt::one()]);
    }
    // Trial division up to sqrt(n); refuse inputs where that is hopeless.
    if n.bits() > 80 {
        return Err(Error::Resource(format!("coefficient {n} is too large to enumerate divisors")));
    }
    let n = n.to_u128().expect("fits in 80 bits");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small.into_iter().map(BigInt::from).collect())
}

/// All rational roots of a nonzero polynomial, by the rational root theorem:
/// after clearing denominators, a root `p/q` in lowest terms has `p` dividing
/// the lowest nonzero coefficient and `q` dividing the leading one. Every
/// candidate is checked by exact evaluation.
pub fn rational_roots(p: &UniPoly) -> Result<BTreeSet<Rational>> {
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has every number as a root".into()));
    }
    let (stripped, k) = p.strip_variable_power();
    let mut roots = BTreeSet::new();
    if k > 0 {
        roots.insert(Rational::zero());
    }
    // Square-free part keeps the candidate coefficients small.
    let ints = UniPoly::new(stripped.primitive_integer().into_iter().map(Rational::from_bigint).collect());
    let derivative = UniPoly::new(
        ints.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::integer(i as i64))
            .collect(),
    );
    let g = ints.gcd(&derivative);
    let squarefree = if g.degree().unwrap_or(0) > 0 { ints.exact_div(&g)? } else { ints };
    let coeffs = squarefree.primitive_integer();
    if coeffs.len() <= 1 {
        return Ok(roots);
    }
    let numerators = positive_divisors(&coeffs[0])?;
    let denominators = positive_divisors(coeffs.last().expect("degree >= 1"))?;
    for num in &numerators {
        for den in &denominators {
            if !num.gcd(den).is_one() {
                continue;
            }
            for sign in [BigInt::one(), -BigInt::one()] {
                let candidate = Rational::from_bigints(num * &sign, den.clone())?;
                if p.eval(&candidate).is_zero() {
                    roots.insert(candidate);
                }
            }
        }
    }
    Ok(roots)
}

pub fn positive_rational_roots(p: &UniPoly) -> Result<BTreeSet<Rational>> {
    Ok(rational_roots(p)?.into_iter().filter(Rational::is_positive).collect())
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}
