//! Exact scalars, affine maps, patterns, and copy detection.
//!
//! A *copy* of `S` is an image `a·S + b` with `a > 0`; a *reflection* is an
//! image with `a < 0`. Every other module reduces its questions to the three
//! primitives here: [`find_affine_map`], [`completions`] and [`contains_copy`].

mod affine;
mod pattern;
pub mod rational;

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

pub use affine::AffineMap;
pub use pattern::{apply_map, Pattern};
pub use rational::Rational;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Increasing,
    Decreasing,
    Either,
}

/// Which images count as a winning copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyMode {
    /// `a ∈ ℚ⁺`, `b ∈ ℚ`.
    #[default]
    Rational,
    /// `a ∈ ℕ∖{0}`, `b ∈ ℤ`.
    Integer,
}

impl std::str::FromStr for CopyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(CopyMode::Rational),
            "integer" => Ok(CopyMode::Integer),
            other => Err(Error::Parse(format!("unknown copy mode {other:?}"))),
        }
    }
}

/// The unique map of the requested orientation sending `source` onto `target`.
///
/// Increasing maps pair the two patterns in ascending order, decreasing maps
/// pair ascending with descending. A singleton source maps by translation
/// (slope `1`, or `-1` for a decreasing request). `Either` prefers the
/// increasing map.
pub fn find_affine_map(
    source: &Pattern,
    target: &Pattern,
    orientation: Orientation,
) -> Result<Option<AffineMap>> {
    if source.len() != target.len() {
        return Err(Error::Contract(format!(
            "find_affine_map on patterns of sizes {} and {}",
            source.len(),
            target.len()
        )));
    }
    if source.len() == 1 && orientation == Orientation::Decreasing {
        let b = target.first() + source.first();
        return Ok(Some(AffineMap::new(-Rational::one(), b)?));
    }
    Ok(match orientation {
        Orientation::Increasing => map_between(source, target.iter()),
        Orientation::Decreasing => map_between(source, target.iter().rev()),
        Orientation::Either => map_between(source, target.iter())
            .or_else(|| map_between(source, target.iter().rev())),
    })
}

/// Solves `f(source[i]) = image[i]` from the extreme points and checks the
/// rest. Singletons map by translation.
fn map_between<'a, I>(source: &Pattern, image: I) -> Option<AffineMap>
where
    I: Iterator<Item = &'a Rational> + Clone,
{
    let first = image.clone().next()?;
    let map = if source.len() == 1 {
        AffineMap::translation(first - source.first())
    } else {
        let last = image.clone().last()?;
        let a = (last - first) / (source.last() - source.first());
        let b = first - &(&a * source.first());
        AffineMap::new(a, b).ok()?
    };
    source
        .iter()
        .zip(image)
        .all(|(x, y)| map.apply(x) == *y)
        .then_some(map)
}

/// Points `x ∉ partial` such that `partial ∪ {x}` is a copy of `s`.
///
/// For each index `i` the increasing map `g` with `g(s ∖ {s_i}) = partial` is
/// solved and `g(s_i)` collected. For `|s| = 2` the one-point partial maps
/// by translation, so only the two translated points are reported even
/// though every other point also completes a copy.
pub fn completions(partial: &[Rational], s: &Pattern) -> Result<BTreeSet<Rational>> {
    if s.len() < 2 || partial.len() + 1 != s.len() {
        return Err(Error::Contract(format!(
            "completions needs |partial| = |s| - 1 with |s| >= 2 (got {} and {})",
            partial.len(),
            s.len()
        )));
    }
    let partial = Pattern::from_unsorted(partial.to_vec())?;
    let mut out = BTreeSet::new();
    for i in 0..s.len() {
        let rest = s.without(i)?;
        if let Some(g) = map_between(&rest, partial.iter()) {
            let x = g.apply(&s[i]);
            if !partial.contains(&x) {
                out.insert(x);
            }
        }
    }
    Ok(out)
}

/// A witness that holdings contain a copy of the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyWitness {
    pub points: Pattern,
    pub map: AffineMap,
}

/// Whether `map` qualifies as a winning copy map under `mode`.
pub fn map_fits_mode(map: &AffineMap, mode: CopyMode) -> bool {
    match mode {
        CopyMode::Rational => map.is_increasing(),
        CopyMode::Integer => map.is_increasing() && map.a().is_integer() && map.b().is_integer(),
    }
}

/// Finds the lexicographically smallest subset of `holdings` that is a copy
/// of `s` under `mode`, together with the map `f` with `f(s) = subset`.
pub fn contains_copy(holdings: &[Rational], s: &Pattern, mode: CopyMode) -> Option<CopyWitness> {
    let mut sorted = holdings.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < s.len() {
        return None;
    }
    sorted
        .iter()
        .combinations(s.len())
        .find_map(|subset| {
            let map = map_between(s, subset.iter().copied())?;
            if !map_fits_mode(&map, mode) {
                return None;
            }
            let points = Pattern::new(subset.into_iter().cloned().collect()).ok()?;
            Some(CopyWitness { points, map })
        })
}

#[cfg(test)]
mod tests {
    use super::rational::q;
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[i64]) -> Pattern {
        Pattern::from_ints(v).unwrap()
    }

    fn inc(a: &Pattern, b: &Pattern) -> Option<AffineMap> {
        find_affine_map(a, b, Orientation::Increasing).unwrap()
    }

    #[test]
    fn find_map_examples() {
        let f = inc(&p(&[1, 2, 3]), &p(&[10, 20, 30])).unwrap();
        assert_eq!((f.a(), f.b()), (&q(10, 1), &q(0, 1)));
        let f = inc(&p(&[1, 2, 3]), &p(&[1, 3, 5])).unwrap();
        assert_eq!((f.a(), f.b()), (&q(2, 1), &q(-1, 1)));
        let f = inc(&p(&[0, 2, 3, 6]), &p(&[0, 16, 24, 48])).unwrap();
        assert_eq!((f.a(), f.b()), (&q(8, 1), &q(0, 1)));
        assert!(inc(&p(&[1, 2, 4]), &p(&[1, 2, 3])).is_none());
    }

    #[test]
    fn find_map_orientations() {
        let s = p(&[0, 2, 3, 6]);
        let r = p(&[0, 3, 4, 6]);
        assert!(inc(&s, &r).is_none());
        let f = find_affine_map(&s, &r, Orientation::Decreasing).unwrap().unwrap();
        assert_eq!((f.a(), f.b()), (&q(-1, 1), &q(6, 1)));
        let e = find_affine_map(&s, &r, Orientation::Either).unwrap().unwrap();
        assert_eq!(e, f);
        let t = inc(&p(&[5]), &p(&[9])).unwrap();
        assert_eq!((t.a(), t.b()), (&q(1, 1), &q(4, 1)));
        let d = find_affine_map(&p(&[5]), &p(&[9]), Orientation::Decreasing).unwrap().unwrap();
        assert_eq!(d.apply(&q(5, 1)), q(9, 1));
    }

    #[test]
    fn find_map_size_mismatch_is_error() {
        assert!(matches!(
            find_affine_map(&p(&[1, 2]), &p(&[1, 2, 3]), Orientation::Increasing),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn completion_examples() {
        let c = completions(&[q(2, 1), q(4, 1), q(8, 1)], &p(&[1, 2, 4, 8])).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![q(1, 1), q(16, 1)]);
        let c = completions(&[q(0, 1), q(1, 1)], &p(&[0, 1, 2])).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![q(-1, 1), q(1, 2), q(2, 1)]);
        let c = completions(
            &[q(2, 1), q(4, 1), q(8, 1), q(16, 1)],
            &p(&[1, 2, 4, 8, 16]),
        )
        .unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![q(1, 1), q(32, 1)]);
        assert!(completions(&[q(1, 1)], &p(&[1, 2, 3])).is_err());
    }

    #[test]
    fn contains_copy_examples() {
        let w = contains_copy(&[q(3, 1), q(5, 1), q(7, 1)], &p(&[0, 1, 2]), CopyMode::Rational).unwrap();
        assert_eq!(w.points, p(&[3, 5, 7]));
        assert_eq!((w.map.a(), w.map.b()), (&q(2, 1), &q(3, 1)));

        let h = [q(0, 1), q(1, 1), q(2, 1)];
        let w = contains_copy(&h, &p(&[0, 2, 4]), CopyMode::Rational).unwrap();
        assert_eq!((w.map.a(), w.map.b()), (&q(1, 2), &q(0, 1)));
        assert!(contains_copy(&h, &p(&[0, 2, 4]), CopyMode::Integer).is_none());

        let h: Vec<Rational> = [0, 12, 16, 24, 48].iter().map(|&v| q(v, 1)).collect();
        let w = contains_copy(&h, &p(&[0, 2, 3, 6]), CopyMode::Rational).unwrap();
        assert_eq!(w.points, p(&[0, 16, 24, 48]));
        assert_eq!((w.map.a(), w.map.b()), (&q(8, 1), &q(0, 1)));

        assert!(contains_copy(&[q(1, 1)], &p(&[0, 1]), CopyMode::Rational).is_none());
    }

    #[test]
    fn contains_copy_prefers_smallest_subset() {
        let h: Vec<Rational> = [1, 2, 3, 4, 5].iter().map(|&v| q(v, 1)).collect();
        let w = contains_copy(&h, &p(&[0, 1, 2]), CopyMode::Rational).unwrap();
        assert_eq!(w.points, p(&[1, 2, 3]));
    }

    #[test]
    fn singleton_target_is_always_contained() {
        let w = contains_copy(&[q(7, 1)], &p(&[3]), CopyMode::Integer).unwrap();
        assert_eq!(w.map, AffineMap::translation(q(4, 1)));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..8).prop_map(|(n, d)| q(n, d))
    }

    fn arb_pattern(max: usize) -> impl Strategy<Value = Pattern> {
        prop::collection::btree_set(arb_rational(), 1..=max)
            .prop_map(|s| Pattern::new(s.into_iter().collect()).unwrap())
    }

    fn arb_increasing_map() -> impl Strategy<Value = AffineMap> {
        ((1i64..30, 1i64..7), arb_rational())
            .prop_map(|((n, d), b)| AffineMap::new(q(n, d), b).unwrap())
    }

    proptest! {
        #[test]
        fn map_round_trip(f in arb_increasing_map(), pat in arb_pattern(8)) {
            prop_assume!(pat.len() >= 2 || f.a().is_one());
            let image = apply_map(&f, &pat);
            prop_assert_eq!(inc(&pat, &image), Some(f));
        }

        #[test]
        fn non_identity_maps_move_points(pat in arb_pattern(8), f in arb_increasing_map()) {
            prop_assume!(pat.len() >= 2 && !f.is_identity());
            let image = apply_map(&f, &pat);
            prop_assert_eq!(inc(&pat, &image), Some(f.clone()));
            let moved = pat.iter().filter(|x| f.apply(x) != **x).count();
            prop_assert!(moved >= pat.len() - 1);
        }

        #[test]
        fn completions_agree_with_contains_copy(s in arb_pattern(5), f in arb_increasing_map(), drop in 0usize..5) {
            prop_assume!(s.len() >= 3);
            let image = apply_map(&f, &s);
            let drop = drop % s.len();
            let partial = image.without(drop).unwrap();
            let comps = completions(&partial, &s).unwrap();
            prop_assert!(comps.contains(&image[drop]));
            for x in &comps {
                let all = partial.with(x.clone()).unwrap();
                let w = contains_copy(&all, &s, CopyMode::Rational);
                prop_assert!(w.is_some());
                prop_assert_eq!(w.unwrap().points, all);
            }
            // A nearby non-completion must not produce a copy.
            let probe = &image[drop] + &q(1, 97);
            if !comps.contains(&probe) && !partial.contains(&probe) {
                let all = partial.with(probe).unwrap();
                prop_assert!(contains_copy(&all, &s, CopyMode::Rational).is_none());
            }
        }

        #[test]
        fn integer_witness_is_rational_witness(h in arb_pattern(7), s in arb_pattern(4)) {
            if let Some(w) = contains_copy(&h, &s, CopyMode::Integer) {
                let r = contains_copy(&w.points, &s, CopyMode::Rational).unwrap();
                prop_assert_eq!(r.points, w.points);
            }
        }
    }
}
