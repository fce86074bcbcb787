//! Seeded generators for random targets used by test suites and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactnum::{AffineMap, Pattern, Rational};
use crate::symmetry::{canonical_pattern, classify, reflect, CanonicalForm};

pub fn rational<R: Rng>(rng: &mut R, max_numer: i64, max_denom: i64) -> Rational {
    Rational::new(rng.gen_range(1..=max_numer), rng.gen_range(1..=max_denom))
}

/// A ratio `k > 1` with small numerator and denominator.
pub fn ratio<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(1..=4);
    let n = rng.gen_range(d + 1..=d + 6);
    Rational::new(n, d)
}

/// `n` distinct naturals in `0..=max`, sorted.
pub fn natural_set<R: Rng>(rng: &mut R, n: usize, max: u64) -> Pattern {
    let mut values: Vec<u64> = (0..=max).collect::<Vec<_>>().choose_multiple(rng, n).copied().collect();
    values.sort_unstable();
    Pattern::from_naturals(&values).expect("distinct naturals")
}

/// Increasing pattern of `n` rationals built from random positive gaps.
pub fn rational_pattern<R: Rng>(rng: &mut R, n: usize) -> Pattern {
    let mut acc = Rational::new(rng.gen_range(-10..=10), rng.gen_range(1..=5));
    let mut values = vec![acc.clone()];
    for _ in 1..n {
        acc = &acc + &rational(rng, 12, 6);
        values.push(acc.clone());
    }
    Pattern::new(values).expect("positive gaps")
}

/// Rescales a rational pattern into the smallest natural copy with least element 0.
pub fn naturalize(p: &Pattern) -> Pattern {
    let scale = Rational::from_bigint(crate::exactnum::rational::lcm_of_denominators(
        p.elements().iter().map(|x| x - p.first()).collect::<Vec<_>>().iter(),
    ));
    let f = AffineMap::new(scale.clone(), -(p.first() * &scale)).expect("positive scale");
    p.map(&f)
}

/// Random increasing image of a symmetric 4-set: an arithmetic
/// progression, `C₁(4,k)`, `C₂(4,k)` or the reflection of `C₂(4,k)`.
pub fn symmetric4<R: Rng>(rng: &mut R) -> Pattern {
    let base = match rng.gen_range(0..4) {
        0 => Pattern::from_ints(&[0, 1, 2, 3]).expect("increasing"),
        1 => canonical_pattern(CanonicalForm::C1, 4, &ratio(rng)).expect("k > 1"),
        2 => canonical_pattern(CanonicalForm::C2, 4, &ratio(rng)).expect("k > 1"),
        _ => reflect(&canonical_pattern(CanonicalForm::C2, 4, &ratio(rng)).expect("k > 1")),
    };
    let f = AffineMap::new(rational(rng, 5, 3), Rational::new(rng.gen_range(-8..=8), rng.gen_range(1..=3)))
        .expect("positive slope");
    base.map(&f)
}

/// Random non-symmetric 4-set of naturals `{0, x, x+y, x+y+z}` with gaps in `1..=max_gap`.
pub fn nonsymmetric4<R: Rng>(rng: &mut R, max_gap: i64) -> Pattern {
    loop {
        let (x, y, z) = (
            rng.gen_range(1..=max_gap),
            rng.gen_range(1..=max_gap),
            rng.gen_range(1..=max_gap),
        );
        let p = Pattern::from_ints(&[0, x, x + y, x + y + z]).expect("positive gaps");
        if !classify(&p).expect("size 4").kind.is_symmetric() {
            return p;
        }
    }
}
