use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AffineMap, Rational};
use crate::error::{Error, Result};

/// A finite, nonempty, strictly increasing sequence of rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<Rational>);

impl Pattern {
    /// Builds a pattern from values that must already be strictly increasing.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("pattern must be nonempty".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "pattern must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Pattern(values))
    }

    /// Sorts the values; duplicates are rejected.
    pub fn from_unsorted(mut values: Vec<Rational>) -> Result<Self> {
        values.sort();
        Pattern::new(values)
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Pattern::from_unsorted(values.iter().map(|&v| Rational::integer(v)).collect())
    }

    pub fn from_naturals(values: &[u64]) -> Result<Self> {
        Pattern::from_unsorted(values.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn elements(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn first(&self) -> &Rational {
        &self.0[0]
    }

    pub fn last(&self) -> &Rational {
        &self.0[self.0.len() - 1]
    }

    /// Consecutive differences `s[i+1] - s[i]`, all positive.
    pub fn differences(&self) -> Vec<Rational> {
        self.0.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// The pattern with the element at `index` (0-based) removed.
    pub fn without(&self, index: usize) -> Result<Pattern> {
        if self.0.len() < 2 || index >= self.0.len() {
            return Err(Error::Contract(format!(
                "cannot remove index {index} from a pattern of size {}",
                self.0.len()
            )));
        }
        let mut v = self.0.clone();
        v.remove(index);
        Ok(Pattern(v))
    }

    pub fn with(&self, x: Rational) -> Result<Pattern> {
        let mut v = self.0.clone();
        v.push(x);
        Pattern::from_unsorted(v)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.0.binary_search(x).is_ok()
    }

    /// All elements are non-negative integers.
    pub fn is_natural(&self) -> bool {
        self.0.iter().all(|v| v.is_integer() && !v.is_negative())
    }

    pub fn to_naturals(&self) -> Option<Vec<u64>> {
        self.0.iter().map(Rational::to_u64).collect()
    }

    pub fn map(&self, f: &AffineMap) -> Pattern {
        apply_map(f, self)
    }
}

/// Image of `p` under `f`, re-sorted ascending when `f` is decreasing.
pub fn apply_map(f: &AffineMap, p: &Pattern) -> Pattern {
    let mut v: Vec<Rational> = p.0.iter().map(|x| f.apply(x)).collect();
    if !f.is_increasing() {
        v.reverse();
    }
    Pattern(v)
}

impl Deref for Pattern {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a Pattern {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Parses the comma-separated form. Values must be given in ascending order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Err(Error::Parse("empty set literal".into()));
        }
        let values = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Rational>>>()?;
        Pattern::new(values).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            List(Vec<Rational>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::List(v) => Pattern::new(v).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::q;

    #[test]
    fn rejects_unsorted_and_duplicates() {
        assert!(Pattern::new(vec![q(2, 1), q(1, 1)]).is_err());
        assert!(Pattern::from_ints(&[2, 2, 3]).is_err());
        assert!(Pattern::new(vec![]).is_err());
        assert_eq!(Pattern::from_ints(&[3, 1, 2]).unwrap(), Pattern::from_ints(&[1, 2, 3]).unwrap());
    }

    #[test]
    fn apply_map_examples() {
        let f = AffineMap::new(q(2, 1), q(-1, 1)).unwrap();
        assert_eq!(
            apply_map(&f, &Pattern::from_ints(&[1, 2, 3]).unwrap()),
            Pattern::from_ints(&[1, 3, 5]).unwrap()
        );
        let p = Pattern::from_ints(&[0, 2, 3, 6]).unwrap();
        assert_eq!(apply_map(&AffineMap::identity(), &p), p);
        let r = AffineMap::new(q(-1, 1), q(6, 1)).unwrap();
        assert_eq!(apply_map(&r, &p), Pattern::from_ints(&[0, 3, 4, 6]).unwrap());
    }

    #[test]
    fn textual_form() {
        let p: Pattern = "-1/2,0,3/2,48".parse().unwrap();
        assert_eq!(p.to_string(), "-1/2,0,3/2,48");
        assert!("1,1".parse::<Pattern>().is_err());
        assert!("".parse::<Pattern>().is_err());
        assert!("1,x".parse::<Pattern>().is_err());
        let json: Pattern = serde_json::from_str("[1,2,\"5/2\"]").unwrap();
        assert_eq!(json.to_string(), "1,2,5/2");
    }
}
