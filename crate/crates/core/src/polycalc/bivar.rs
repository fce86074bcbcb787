use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

use super::multi::MultiPoly;
use super::uni::UniPoly;

/// Polynomial in `z` with coefficients in ℚ[x], lowest `z`-degree first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZPoly {
    coeffs: Vec<UniPoly>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    /// Views a polynomial free of `y` as an element of ℚ[x][z].
    pub fn from_multi(p: &MultiPoly) -> Result<Self> {
        if p.degree_in(1) > 0 {
            return Err(Error::Contract(format!("{p} still involves y")));
        }
        let dz = p.degree_in(2) as usize;
        let dx = p.degree_in(0) as usize;
        let mut grid = vec![vec![Rational::zero(); dx + 1]; dz + 1];
        for (e, c) in p.terms() {
            grid[e[2] as usize][e[0] as usize] = c.clone();
        }
        Ok(ZPoly::new(grid.into_iter().map(UniPoly::new).collect()))
    }

    pub fn to_multi(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (i, v) in c.coeffs().iter().enumerate() {
                out = out + MultiPoly::monomial(v.clone(), [i as u32, 0, k as u32]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> UniPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Substitutes `x = x0`, leaving a polynomial in `z`.
    pub fn at_x(&self, x0: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(x0)).collect())
    }

    fn scale(&self, c: &UniPoly) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &ZPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        ZPoly::new((0..n).map(|i| &get(self, i) - &get(other, i)).collect())
    }

    fn shift(&self, k: usize) -> ZPoly {
        let mut coeffs = vec![UniPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly::new(coeffs)
    }

    /// Gcd of the ℚ[x] coefficients.
    pub fn content(&self) -> UniPoly {
        self.coeffs.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
    }

    fn divide_content(&self, c: &UniPoly) -> Result<ZPoly> {
        Ok(ZPoly::new(
            self.coeffs.iter().map(|v| v.exact_div(c)).collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        self.divide_content(&self.content()).expect("content divides every coefficient")
    }

    pub fn zero() -> Self {
        ZPoly::default()
    }

    /// Pseudo-remainder of `self` by `divisor` (nonzero).
    fn pseudo_rem(&self, divisor: &ZPoly) -> ZPoly {
        let dd = divisor.degree().expect("divisor is nonzero");
        let lc = divisor.leading();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lead = r.leading();
            r = r.scale(&lc).sub(&divisor.scale(&lead).shift(dr - dd));
        }
        r
    }

    /// Exact quotient in ℚ[x][z]; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &ZPoly) -> Result<ZPoly> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lc = divisor.leading();
        let mut r = self.clone();
        let mut quot = vec![UniPoly::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return Err(Error::Internal("inexact bivariate division".into()));
            }
            let factor = r.leading().exact_div(&lc)?;
            r = r.sub(&divisor.scale(&factor).shift(dr - dd));
            quot[dr - dd] = factor;
        }
        Ok(ZPoly::new(quot))
    }

    /// Greatest common divisor in ℚ[x][z], normalized so that the content
    /// and the leading coefficient in `x` of the leading `z`-coefficient are
    /// monic.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                a = ZPoly::new(vec![UniPoly::one()]);
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&content).normalized()
    }

    fn normalized(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let lc = self.leading().leading();
        self.scale(&UniPoly::constant(lc.recip().expect("nonzero")))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({})", self.to_multi())
    }
}

/// Determinant of a square matrix over ℚ[x] by fraction-free (Bareiss)
/// elimination with row swaps.
fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> Result<UniPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UniPoly::one());
    }
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(UniPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { -&det } else { det })
}

/// Sylvester resultant with respect to `z`.
///
/// A polynomial of `z`-degree 0 contributes its constant to the power of the
/// other's degree; the resultant of two constants is 1.
pub fn resultant(p: &ZPoly, q: &ZPoly) -> Result<UniPoly> {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return Ok(UniPoly::zero());
    };
    let size = m + n;
    if size == 0 {
        return Ok(UniPoly::one());
    }
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, copies) in [(p, m, n), (q, n, m)] {
        for r in 0..copies {
            let mut row = vec![UniPoly::zero(); size];
            for (i, c) in poly.coeffs().iter().enumerate() {
                // Highest z-degree first, shifted right by r.
                row[r + deg - i] = c.clone();
            }
            rows.push(row);
        }
    }
    bareiss_det(rows)
}
