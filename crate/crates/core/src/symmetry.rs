//! Symmetry types and canonical geometric forms.
//!
//! `S` has symmetry type `(i, j)` when `S ∖ {s_i}` is a copy of `S ∖ {s_j}`.
//! For `n ≥ 4` only `(1,n)`, `(2,n)` and `(1,n-1)` occur, and at most one of
//! them; every symmetric set is then a copy or reflection of
//! `C₁(n,k) = {1,k,…,k^{n-1}}` or `C₂(n,k) = {0,1,k,…,k^{n-2}}` for some `k > 1`
//! (or an arithmetic progression).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{apply_map, find_affine_map, AffineMap, Orientation, Pattern, Rational};

/// Pair of 1-based indices `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymmetryType {
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    NonSymmetric,
    Arithmetic,
    #[serde(rename = "geometric_1n")]
    Geometric1n,
    #[serde(rename = "geometric_2n")]
    Geometric2n,
    #[serde(rename = "geometric_1n1")]
    Geometric1n1,
}

impl SymmetryKind {
    pub fn is_symmetric(self) -> bool {
        self != SymmetryKind::NonSymmetric
    }

    /// The symmetry type this kind stands for in a set of size `n`.
    pub fn symmetry_type(self, n: usize) -> Option<SymmetryType> {
        match self {
            SymmetryKind::NonSymmetric => None,
            SymmetryKind::Arithmetic | SymmetryKind::Geometric1n => Some(SymmetryType { i: 1, j: n }),
            SymmetryKind::Geometric2n => Some(SymmetryType { i: 2, j: n }),
            SymmetryKind::Geometric1n1 => Some(SymmetryType { i: 1, j: n - 1 }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: SymmetryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Rational>,
    /// Maps the canonical form onto `S` (onto `reflect(S)` for `Geometric1n1`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AffineMap>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalForm {
    C1,
    C2,
}

fn require_len(s: &Pattern, min: usize, op: &str) -> Result<()> {
    if s.len() < min {
        return Err(Error::Contract(format!(
            "{op} needs a pattern of size >= {min}, got {}",
            s.len()
        )));
    }
    Ok(())
}

pub fn symmetry_types(s: &Pattern) -> Result<BTreeSet<SymmetryType>> {
    require_len(s, 3, "symmetry_types")?;
    let n = s.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let without_j = s.without(j)?;
            let without_i = s.without(i)?;
            if find_affine_map(&without_j, &without_i, Orientation::Increasing)?.is_some() {
                out.insert(SymmetryType { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(out)
}

pub fn reflect(s: &Pattern) -> Pattern {
    apply_map(&AffineMap::negation(), s)
}

pub fn canonical_pattern(form: CanonicalForm, n: usize, k: &Rational) -> Result<Pattern> {
    if k <= &Rational::one() {
        return Err(Error::Domain(format!("canonical forms need k > 1, got {k}")));
    }
    if n < 2 {
        return Err(Error::Domain(format!("canonical forms need n >= 2, got {n}")));
    }
    let values = match form {
        CanonicalForm::C1 => (0..n as u32).map(|e| k.pow(e)).collect(),
        CanonicalForm::C2 => std::iter::once(Rational::zero())
            .chain((0..n as u32 - 1).map(|e| k.pow(e)))
            .collect(),
    };
    Pattern::new(values)
}

fn is_arithmetic(s: &Pattern) -> bool {
    let d = s.differences();
    d.windows(2).all(|w| w[0] == w[1])
}

/// Ratio `d_{i+1} / d_i` when it is the same for every consecutive pair.
fn common_difference_ratio(diffs: &[Rational]) -> Option<Rational> {
    let r = &diffs[1] / &diffs[0];
    diffs
        .windows(2)
        .all(|w| &w[1] / &w[0] == r)
        .then_some(r)
}

/// Fits `C₁(n,k)` onto `s`, reporting `k > 1` and a witness of either orientation.
fn fit_c1(s: &Pattern) -> Result<Option<(Rational, AffineMap)>> {
    let Some(r) = common_difference_ratio(&s.differences()) else {
        return Ok(None);
    };
    let (k, orientation) = if r > Rational::one() {
        (r, Orientation::Increasing)
    } else {
        (r.recip()?, Orientation::Decreasing)
    };
    let canon = canonical_pattern(CanonicalForm::C1, s.len(), &k)?;
    Ok(find_affine_map(&canon, s, orientation)?.map(|f| (k, f)))
}

/// Fits `C₂(n,k)` onto `s` by an increasing map.
fn fit_c2(s: &Pattern) -> Result<Option<(Rational, AffineMap)>> {
    let k = (&s[2] - &s[0]) / (&s[1] - &s[0]);
    if k <= Rational::one() {
        return Ok(None);
    }
    let canon = canonical_pattern(CanonicalForm::C2, s.len(), &k)?;
    Ok(find_affine_map(&canon, s, Orientation::Increasing)?.map(|f| (k, f)))
}

pub fn classify(s: &Pattern) -> Result<Classification> {
    require_len(s, 3, "classify")?;
    let n = s.len();
    let types = symmetry_types(s)?;
    if is_arithmetic(s) {
        return Ok(Classification {
            kind: SymmetryKind::Arithmetic,
            k: None,
            witness: None,
        });
    }
    let has = |i: usize, j: usize| types.contains(&SymmetryType { i, j });

    let found = if has(1, n) {
        fit_c1(s)?.map(|(k, f)| (SymmetryKind::Geometric1n, k, f))
    } else if has(2, n) {
        fit_c2(s)?.map(|(k, f)| (SymmetryKind::Geometric2n, k, f))
    } else if has(1, n - 1) {
        fit_c2(&reflect(s))?.map(|(k, f)| (SymmetryKind::Geometric1n1, k, f))
    } else if types.is_empty() {
        return Ok(Classification {
            kind: SymmetryKind::NonSymmetric,
            k: None,
            witness: None,
        });
    } else {
        return Err(Error::Internal(format!(
            "{s:?} has symmetry types {types:?} outside (1,n), (2,n), (1,n-1)"
        )));
    };

    let Some((kind, k, witness)) = found else {
        return Err(Error::Internal(format!(
            "{s:?} has symmetry types {types:?} but no canonical form fits"
        )));
    };
    let (form, target) = match kind {
        SymmetryKind::Geometric1n => (CanonicalForm::C1, s.clone()),
        SymmetryKind::Geometric2n => (CanonicalForm::C2, s.clone()),
        _ => (CanonicalForm::C2, reflect(s)),
    };
    if apply_map(&witness, &canonical_pattern(form, n, &k)?) != target {
        return Err(Error::Internal(format!(
            "classification witness for {s:?} does not reproduce the set"
        )));
    }
    Ok(Classification {
        kind,
        k: Some(k),
        witness: Some(witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::q;
    use proptest::prelude::*;

    fn p(v: &[i64]) -> Pattern {
        Pattern::from_ints(v).unwrap()
    }

    fn st(i: usize, j: usize) -> SymmetryType {
        SymmetryType { i, j }
    }

    #[test]
    fn symmetry_type_examples() {
        assert_eq!(symmetry_types(&p(&[1, 2, 3, 5])).unwrap(), [st(2, 4)].into());
        assert_eq!(symmetry_types(&p(&[1, 2, 3, 4])).unwrap(), [st(1, 4)].into());
        assert_eq!(
            symmetry_types(&p(&[0, 1, 5])).unwrap(),
            [st(1, 2), st(1, 3), st(2, 3)].into()
        );
        assert!(symmetry_types(&p(&[0, 2, 3, 6])).unwrap().is_empty());
        assert!(matches!(symmetry_types(&p(&[0, 1])), Err(Error::Contract(_))));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(&[1, 2, 4, 8])).unwrap();
        assert_eq!(c.kind, SymmetryKind::Geometric1n);
        assert_eq!(c.k, Some(q(2, 1)));
        assert!(c.witness.unwrap().is_identity());

        let c = classify(&p(&[1, 2, 3, 5])).unwrap();
        assert_eq!(c.kind, SymmetryKind::Geometric2n);
        assert_eq!(c.k, Some(q(2, 1)));
        let w = c.witness.unwrap();
        assert_eq!((w.a(), w.b()), (&q(1, 1), &q(1, 1)));

        assert_eq!(classify(&p(&[0, 1, 2, 5])).unwrap().kind, SymmetryKind::NonSymmetric);
        assert_eq!(classify(&p(&[5, 8, 11, 14])).unwrap().kind, SymmetryKind::Arithmetic);
        assert!(classify(&p(&[1, 2])).is_err());
    }

    #[test]
    fn decreasing_differences_use_reversed_witness() {
        // differences 4, 2, 1
        let c = classify(&p(&[0, 4, 6, 7])).unwrap();
        assert_eq!(c.kind, SymmetryKind::Geometric1n);
        assert_eq!(c.k, Some(q(2, 1)));
        assert!(!c.witness.as_ref().unwrap().is_increasing());
    }

    #[test]
    fn reflection_of_type_2n_is_type_1n1() {
        let s = reflect(&p(&[1, 2, 3, 5]));
        let c = classify(&s).unwrap();
        assert_eq!(c.kind, SymmetryKind::Geometric1n1);
        assert_eq!(c.k, Some(q(2, 1)));
        assert_eq!(symmetry_types(&s).unwrap(), [st(1, 3)].into());
    }

    #[test]
    fn three_sets_prefer_arithmetic_then_c1() {
        assert_eq!(classify(&p(&[0, 2, 4])).unwrap().kind, SymmetryKind::Arithmetic);
        assert_eq!(classify(&p(&[0, 1, 5])).unwrap().kind, SymmetryKind::Geometric1n);
        assert_eq!(classify(&p(&[0, 4, 5])).unwrap().kind, SymmetryKind::Geometric1n);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_pattern(CanonicalForm::C1, 4, &q(2, 1)).unwrap(), p(&[1, 2, 4, 8]));
        assert_eq!(canonical_pattern(CanonicalForm::C2, 4, &q(3, 1)).unwrap(), p(&[0, 1, 3, 9]));
        assert_eq!(
            canonical_pattern(CanonicalForm::C1, 5, &q(3, 2)).unwrap().to_string(),
            "1,3/2,9/4,27/8,81/16"
        );
        assert!(matches!(
            canonical_pattern(CanonicalForm::C1, 4, &q(1, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&p(&[0, 2, 3, 6])), p(&[-6, -3, -2, 0]));
        let r = reflect(&p(&[0, 3, 4, 6]));
        assert_eq!(r, p(&[-6, -4, -3, 0]));
        assert!(find_affine_map(&p(&[0, 2, 3, 6]), &r, Orientation::Increasing)
            .unwrap()
            .is_some());
        assert_eq!(reflect(&p(&[1])), p(&[-1]));
    }

    #[test]
    fn json_shape() {
        let c = classify(&p(&[1, 2, 3, 5])).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"geometric_2n","k":"2","witness":{"a":"1","b":"1"}}"#
        );
        let c = classify(&p(&[0, 1, 2, 5])).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"kind":"non_symmetric"}"#);
    }

    fn arb_k() -> impl Strategy<Value = Rational> {
        (1i64..6, 1i64..6).prop_map(|(extra, d)| q(d + extra, d))
    }

    fn arb_map() -> impl Strategy<Value = AffineMap> {
        (1i64..20, 1i64..6, -20i64..20, 1i64..6, prop::bool::ANY).prop_map(|(an, ad, bn, bd, neg)| {
            let a = q(if neg { -an } else { an }, ad);
            AffineMap::new(a, q(bn, bd)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn canonical_round_trip(k in arb_k(), f in arb_map(), n in 4usize..7, c2 in prop::bool::ANY) {
            let form = if c2 { CanonicalForm::C2 } else { CanonicalForm::C1 };
            let s = apply_map(&f, &canonical_pattern(form, n, &k).unwrap());
            let c = classify(&s).unwrap();
            prop_assert_eq!(c.k.as_ref(), Some(&k));
            let w = c.witness.unwrap();
            let expected_kind = match (form, f.is_increasing()) {
                (CanonicalForm::C1, _) => SymmetryKind::Geometric1n,
                (CanonicalForm::C2, true) => SymmetryKind::Geometric2n,
                (CanonicalForm::C2, false) => SymmetryKind::Geometric1n1,
            };
            prop_assert_eq!(c.kind, expected_kind);
            let target = if c.kind == SymmetryKind::Geometric1n1 { reflect(&s) } else { s.clone() };
            prop_assert_eq!(apply_map(&w, &canonical_pattern(form, n, &k).unwrap()), target);
            // Endpoint-deleted subpatterns stay symmetric with the same ratio.
            let ty = c.kind.symmetry_type(n).unwrap();
            for idx in [ty.i, ty.j] {
                let sub = s.without(idx - 1).unwrap();
                let sc = classify(&sub).unwrap();
                prop_assert!(sc.kind.is_symmetric());
                if sub.len() >= 4 {
                    prop_assert_eq!(sc.k.as_ref(), Some(&k));
                }
            }
        }
    }
}
