//! Exact polynomial toolkit for the degeneracy analysis of the generic
//! 4-set tree: vertex formulas, difference numerators, the `x ↔ z`
//! involution, sign tests, rational roots and resultant elimination.

mod appendix;
mod bivar;
mod multi;
mod uni;

pub use appendix::{
    analyze_pairs, appendix_pair, check_chains, diff_numerator, eliminant_rational_roots, printed_h,
    table_polynomials, uniform_sign, vanishing_pairs, verify_appendix, verify_appendix_with, vertex_formula,
    vertex_formulas, AppendixOptions, AppendixReport, ChainReport, Difference, PairAnalysis, PairClass,
    PairReport, Relation, ShortcutReport, SignClass, TableRow, Triple, VertexFormula, FIRST_CHAINS,
    LITERAL_SECOND_CHAIN, SECOND_CHAINS, SYMMETRY_PAIRS,
};
pub use bivar::{resultant, ZPoly};
pub use multi::{Exponents, MultiPoly};
pub use uni::{positive_rational_roots, rational_roots, UniPoly};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::q;
    use crate::exactnum::{Pattern, Rational};
    use crate::strategy::{build_generic4, generic4_labels};
    use crate::symmetry::{classify, SymmetryKind};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn vertex_formula_examples() {
        let f01 = vertex_formula("f01").unwrap();
        assert_eq!(f01.numerator, MultiPoly::from_terms(&[(-1, [1, 1, 0]), (-1, [0, 2, 0]), (-1, [0, 1, 1])]));
        assert_eq!(f01.denominator, MultiPoly::from_terms(&[(1, [1, 0, 1])]));
        let (x, y, z) = (r(3), r(1), r(2));
        assert_eq!(vertex_formula("f11").unwrap().eval(&x, &y, &z), q(1, 2));
        assert_eq!(vertex_formula("f011").unwrap().eval(&x, &y, &z), q(1, 2));
        assert_eq!(vertex_formulas().len(), 12);
        assert!(vertex_formula("f2").is_err());
    }

    #[test]
    fn difference_examples() {
        let d = diff_numerator("f0", "f00").unwrap();
        assert_eq!(d.numerator, MultiPoly::z());
        assert_eq!(d.denominator, "(x)");
        assert_eq!(uniform_sign(&d.numerator).unwrap(), SignClass::AllPositive);
        assert_eq!(diff_numerator("f11", "f011").unwrap().numerator, Relation::G1.numerator());
        assert_eq!(uniform_sign(&Relation::G1.numerator()).unwrap(), SignClass::Mixed);
        assert!(diff_numerator("f1", "f1").is_err());
        let p = MultiPoly::from_terms(&[(1, [2, 0, 0]), (3, [1, 1, 0]), (2, [0, 0, 0])]);
        assert_eq!(uniform_sign(&p).unwrap(), SignClass::AllPositive);
        assert!(uniform_sign(&MultiPoly::zero()).is_err());
    }

    #[test]
    fn special_point_and_h() {
        let (x, y, z) = (r(3), r(1), r(2));
        assert!(Relation::G1.numerator().eval(&x, &y, &z).is_zero());
        assert!(Relation::G2.numerator().phi().eval(&x, &y, &z).is_zero());
        // Term by term: -1 - 1 + 1 + 1 + 3 + 1 + 2 + 2 + 1.
        assert_eq!(printed_h().eval(&r(1), &r(1), &r(1)), r(9));
        assert_eq!(Relation::G2.numerator().with_y(&r(1)), printed_h());
        let h = printed_h();
        let (px, pz) = (MultiPoly::x(), MultiPoly::z());
        let one = MultiPoly::constant(r(1));
        assert_eq!(h.phi() - &h, &px * &pz * (&one + &px + &pz) * (&px - &pz));
    }

    #[test]
    fn pair_12_recovers_special_point() {
        let case = appendix_pair(1, 2).unwrap();
        assert_eq!(case.solutions, vec![[r(3), r(1), r(2)]]);
        assert_eq!(case.eliminant_positive_rational_roots, vec![r(3)]);
        assert!(appendix_pair(2, 1).is_err());
        assert!(appendix_pair(0, 2).is_err());
    }

    #[test]
    fn symmetric_pairs_reproduce_symmetry() {
        for k in [q(2, 1), q(3, 1), q(5, 2)] {
            // f00 = f1 at x = 1, y = k - 1, z = k² - k.
            let (x, y, z) = (r(1), &k - &r(1), &k * &k - &k);
            let f00 = vertex_formula("f00").unwrap().eval(&x, &y, &z);
            let f1 = vertex_formula("f1").unwrap().eval(&x, &y, &z);
            assert_eq!(f00, f1);
            let s = Pattern::new(vec![r(0), x.clone(), &x + &y, &x + &y + &z]).unwrap();
            assert_eq!(classify(&s).unwrap().kind, SymmetryKind::Geometric2n);
            // The reflection: f10 = f11 and f011 = 0 at (z, y, x).
            let f10 = vertex_formula("f10").unwrap().eval(&z, &y, &x);
            let f11 = vertex_formula("f11").unwrap().eval(&z, &y, &x);
            assert_eq!(f10, f11);
            assert!(vertex_formula("f011").unwrap().eval(&z, &y, &x).is_zero());
            let s = Pattern::new(vec![r(0), z.clone(), &z + &y, &x + &y + &z]).unwrap();
            assert_eq!(classify(&s).unwrap().kind, SymmetryKind::Geometric1n1);
        }
    }

    #[test]
    fn chains_and_literal_typo() {
        let report = check_chains(500, 1);
        assert!(report.first_chain_holds && report.second_chain_holds);
        assert!(report.literal_second_chain_counterexample.is_some());
    }

    #[test]
    fn perturbed_g1_is_caught() {
        let opts = AppendixOptions {
            chain_samples: 50,
            grid: 12,
            perturb: Some(Relation::G1),
            ..AppendixOptions::default()
        };
        let report = verify_appendix_with(&opts).unwrap();
        assert!(!report.passed);
        assert!(report.discrepancies.iter().any(|d| d.contains("g1")));
    }

    fn arb_positive() -> impl Strategy<Value = Rational> {
        (1i64..=30, 1i64..=10).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn formulas_match_tree_labels(x in arb_positive(), y in arb_positive(), z in arb_positive()) {
            let labels = generic4_labels(&x, &y, &z);
            for (v, label) in vertex_formulas().iter().zip(labels.iter()) {
                prop_assert_eq!(&v.eval(&x, &y, &z), label);
            }
        }

        #[test]
        fn degeneracy_matches_vanishing_relations(x in arb_positive(), y in arb_positive(), z in arb_positive()) {
            let degenerate = build_generic4(&x, &y, &z).is_err();
            prop_assert_eq!(degenerate, !vanishing_pairs(&x, &y, &z).is_empty());
        }

        #[test]
        fn uniform_positive_means_positive_values(x in arb_positive(), y in arb_positive(), z in arb_positive()) {
            for a in 0..12 {
                for b in a + 1..12 {
                    let names = crate::strategy::GENERIC_VERTEX_NAMES;
                    let d = diff_numerator(names[a], names[b]).unwrap();
                    match uniform_sign(&d.numerator).unwrap() {
                        SignClass::AllPositive => prop_assert!(d.numerator.eval(&x, &y, &z).is_positive()),
                        SignClass::AllNegative => prop_assert!(d.numerator.eval(&x, &y, &z).is_negative()),
                        SignClass::Mixed => {}
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_example_is_a_root() {
        let (x, y, z) = (r(3), r(1), r(2));
        assert!(build_generic4(&x, &y, &z).is_err());
        assert!(vanishing_pairs(&x, &y, &z).contains(&("f11", "f011")));
    }
}
