//! One line per acceptance criterion, then a nonzero exit if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use affmb_core::exactnum::{apply_map, completions};
use affmb_core::game::{play_out, BreakerPolicy, MakerAgent, Status};
use affmb_core::polycalc::{appendix_pair, positive_rational_roots, printed_h, table_polynomials, verify_appendix, MultiPoly, UniPoly};
use affmb_core::sample;
use affmb_core::solver::{completion_closure, solve_bounded, Board};
use affmb_core::strategy::{
    build_generic4, build_size3, build_strategy, build_sym4, example_tree, prepare_agent_tree, realize,
    validate_tree, ExampleName, StrategyTree,
};
use affmb_core::symmetry::{canonical_pattern, classify, reflect, symmetry_types, CanonicalForm, SymmetryType};
use affmb_core::{AffineMap, CopyMode, Error, Pattern, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, detail: String::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

/// A builder output the game suite plays with.
struct Target {
    label: String,
    s: Pattern,
    tree: StrategyTree,
    moves: usize,
}

fn tree_validity(targets: &mut Vec<Target>) -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = [0usize; 5];

    for (i, name) in [ExampleName::Ex1234, ExampleName::Ex0236].into_iter().enumerate() {
        let (t, s) = (example_tree(name), name.target());
        let bound = [4, 5][i];
        out.check(name.moves() == bound && validate_tree(&t, &s, bound).valid, format!("{s:?} example tree"));
        counts[i] += 1;
        targets.push(Target { label: format!("example {s:?}"), s, tree: t, moves: bound });
    }
    for _ in 0..50 {
        let s = sample::natural_set(&mut rng, 3, 60);
        let t = build_size3(&s).unwrap();
        out.check(validate_tree(&t, &s, 3).valid, format!("size-3 tree for {s:?}"));
        counts[2] += 1;
        targets.push(Target { label: format!("size3 {s:?}"), s, tree: t, moves: 3 });
    }
    for _ in 0..200 {
        let s = sample::naturalize(&sample::symmetric4(&mut rng));
        let t = build_sym4(&classify(&s).unwrap(), &s).unwrap();
        let ok = validate_tree(&t, &s, 4).valid && build_strategy(&s).is_ok_and(|st| st.claimed_moves == 4);
        out.check(ok, format!("symmetric tree for {s:?}"));
        counts[3] += 1;
        targets.push(Target { label: format!("sym4 {s:?}"), s, tree: t, moves: 4 });
    }
    let mut degenerate = 0;
    for _ in 0..200 {
        let s = sample::nonsymmetric4(&mut rng, 20);
        let d = s.differences();
        let strategy = build_strategy(&s).unwrap();
        let mut ok = strategy.claimed_moves == 5 && validate_tree(&strategy.tree, &s, 5).valid;
        let tree = match build_generic4(&d[0], &d[1], &d[2]) {
            Ok(t) => {
                ok &= validate_tree(&t, &s, 5).valid;
                t
            }
            Err(Error::Degenerate { .. }) => {
                degenerate += 1;
                strategy.tree
            }
            Err(e) => panic!("unexpected error for {s:?}: {e}"),
        };
        out.check(ok, format!("generic tree for {s:?}"));
        counts[4] += 1;
        targets.push(Target { label: format!("generic {s:?}"), s, tree, moves: 5 });
    }
    out.detail = format!(
        "2 printed examples (4 and 5 moves), {} size-3 (3 moves), {} symmetric (4), {} non-symmetric (5; {} degenerate via build_strategy)",
        counts[2], counts[3], counts[4], degenerate
    );
    out
}

fn oracle_agreement() -> Outcome {
    let mut out = Outcome::new();
    let s1234 = Pattern::from_ints(&[1, 2, 3, 4]).unwrap();
    let board = Board::range(0, 8).unwrap();
    let r = solve_bounded(&s1234, &board, 4, CopyMode::Rational, None).unwrap();
    out.check(
        r.min_maker_moves == Some(4),
        format!("{{1,2,3,4}} on {{0..8}} budget 4: expected 4, got {:?}", r.min_maker_moves),
    );
    let realized = realize(&example_tree(ExampleName::Ex1234), &s1234).unwrap();
    let plain = Board::from_tree(&realized).unwrap();
    let r = solve_bounded(&s1234, &plain, 4, CopyMode::Rational, None).unwrap();
    out.note(format!("realized example labels {plain}: {:?}", r.min_maker_moves));
    let grafted = Board::from_tree(&prepare_agent_tree(&example_tree(ExampleName::Ex1234), &s1234).unwrap()).unwrap();
    let r = solve_bounded(&s1234, &grafted, 4, CopyMode::Rational, None).unwrap();
    out.note(format!("root-fixed realized board {grafted}: {:?}", r.min_maker_moves));

    let s123 = Pattern::from_ints(&[1, 2, 3]).unwrap();
    let r = solve_bounded(&s123, &Board::range(0, 12).unwrap(), 3, CopyMode::Rational, None).unwrap();
    out.check(r.min_maker_moves == Some(3), format!("{{1,2,3}} on {{0..12}}: got {:?}", r.min_maker_moves));

    let s0125 = Pattern::from_ints(&[0, 1, 2, 5]).unwrap();
    let strategy = build_strategy(&s0125).unwrap();
    let board = Board::from_tree(&prepare_agent_tree(&strategy.tree, &s0125).unwrap()).unwrap();
    let r = solve_bounded(&s0125, &board, 4, CopyMode::Rational, None).unwrap();
    out.check(
        r.min_maker_moves.is_none() && r.board_relative,
        format!("{{0,1,2,5}} on realized board: got {:?}", r.min_maker_moves),
    );
    out.detail = format!("{{1,2,3,4}} on 0..8, {{1,2,3}} on 0..12, {{0,1,2,5}} on its {}-point realized board", board.len());
    out
}

fn game_suite(targets: &[Target]) -> Outcome {
    let mut out = Outcome::new();
    let mut games = 0usize;
    for target in targets {
        let agent_tree = match prepare_agent_tree(&target.tree, &target.s) {
            Ok(t) => t,
            Err(e) => {
                out.check(false, format!("{}: cannot realize ({e})", target.label));
                continue;
            }
        };
        let labels = agent_tree.natural_labels().unwrap();
        let agent = MakerAgent::Tree(agent_tree);
        let mut policies = vec![
            BreakerPolicy::UniqueCompletion,
            BreakerPolicy::GreedyThreat,
            BreakerPolicy::Endpoint,
            BreakerPolicy::Scripted(labels.clone()),
            BreakerPolicy::Scripted(labels.iter().rev().copied().collect()),
        ];
        policies.extend((0..100).map(|seed| BreakerPolicy::Random { seed }));
        for policy in &policies {
            games += 1;
            match play_out(&target.s, &agent, policy, target.moves, CopyMode::Rational) {
                Ok(t) if t.status == Status::MakerWon => {}
                Ok(t) => out.check(false, format!("{} vs {policy}: {:?}", target.label, t.status)),
                Err(e) => out.check(false, format!("{} vs {policy}: {e}", target.label)),
            }
        }
    }
    out.detail = format!("{} targets, {games} games", targets.len());
    out
}

fn symmetry_laws() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut symmetric = 0;
    for i in 0..10_000 {
        let n = rng.gen_range(4..=8);
        let s = if i % 2 == 0 {
            sample::rational_pattern(&mut rng, n)
        } else {
            let form = if rng.gen_bool(0.5) { CanonicalForm::C1 } else { CanonicalForm::C2 };
            let k = sample::ratio(&mut rng);
            let canon = canonical_pattern(form, n, &k).unwrap();
            let f = AffineMap::new(sample::rational(&mut rng, 9, 4), Rational::new(rng.gen_range(-20..=20), 3)).unwrap();
            let s = canon.map(&f);
            let s = if rng.gen_bool(0.5) { reflect(&s) } else { s };
            let c = classify(&s).unwrap();
            let expected_form = if c.kind == affmb_core::symmetry::SymmetryKind::Geometric1n { CanonicalForm::C1 } else { CanonicalForm::C2 };
            let image = apply_map(c.witness.as_ref().unwrap(), &canonical_pattern(expected_form, n, c.k.as_ref().unwrap()).unwrap());
            let round_trip = if c.kind == affmb_core::symmetry::SymmetryKind::Geometric1n1 { image == reflect(&s) } else { image == s };
            out.check(round_trip && c.k.as_ref() == Some(&k), format!("canonical round trip for {s:?}"));
            s
        };
        let types = symmetry_types(&s).unwrap();
        let allowed: BTreeSet<SymmetryType> =
            [SymmetryType { i: 1, j: n }, SymmetryType { i: 2, j: n }, SymmetryType { i: 1, j: n - 1 }].into();
        out.check(types.is_subset(&allowed), format!("{s:?} has types {types:?}"));
        out.check(types.len() <= 1, format!("{s:?} has {} types", types.len()));
        symmetric += usize::from(!types.is_empty());
    }
    out.detail = format!("10000 patterns, {symmetric} symmetric");
    out
}

fn five_move_evidence() -> Outcome {
    let mut out = Outcome::new();
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::integer(x)).collect::<Vec<_>>();
    let set = |v: &[i64]| ints(v).into_iter().collect::<BTreeSet<_>>();
    let c4 = completions(&ints(&[2, 4, 8]), &Pattern::from_ints(&[1, 2, 4, 8]).unwrap()).unwrap();
    out.check(c4 == set(&[1, 16]), format!("completions of {{2,4,8}}: {c4:?}"));
    let c5 = completions(&ints(&[2, 4, 8, 16]), &Pattern::from_ints(&[1, 2, 4, 8, 16]).unwrap()).unwrap();
    out.check(c5 == set(&[1, 32]), format!("completions of {{2,4,8,16}}: {c5:?}"));

    let s = Pattern::from_ints(&[1, 2, 4, 8, 16]).unwrap();
    let board = completion_closure(&s, &[1, 2, 4, 8, 16], 32).unwrap();
    let r = solve_bounded(&s, &board, 5, CopyMode::Rational, Some(&BreakerPolicy::Endpoint)).unwrap();
    out.check(r.min_maker_moves.is_none(), format!("endpoint Breaker lost in {:?}", r.min_maker_moves));
    out.check(r.board_relative, "board_relative flag missing");
    let greedy = solve_bounded(&s, &board, 5, CopyMode::Rational, Some(&BreakerPolicy::GreedyThreat)).unwrap();
    out.note(format!("greedy Breaker on the same board: Maker wins in {:?}", greedy.min_maker_moves));
    out.detail = format!("board of {} points, {} nodes, board_relative = {}", board.len(), r.nodes_searched, r.board_relative);
    out
}

fn appendix_reproduction() -> Outcome {
    let mut out = Outcome::new();
    let report = verify_appendix().unwrap();
    for d in &report.discrepancies {
        out.check(false, d.clone());
    }
    out.check(report.passed, "verify_appendix did not pass");
    let r = |n: i64| Rational::integer(n);
    let g1 = affmb_core::polycalc::Relation::G1.numerator();
    let g2 = affmb_core::polycalc::Relation::G2.numerator();
    out.check(g1.eval(&r(3), &r(1), &r(2)).is_zero(), "g1(3,1,2) != 0");
    out.check(g2.phi().eval(&r(3), &r(1), &r(2)).is_zero(), "phi(g2)(3,1,2) != 0");
    let h = printed_h();
    let (x, z, one) = (MultiPoly::x(), MultiPoly::z(), MultiPoly::constant(r(1)));
    out.check(h.phi() - &h == &x * &z * (&one + &x + &z) * (&x - &z), "phi(h) - h identity");
    let quartic = UniPoly::from_ints_desc(&[-2, 1, 5, 4, 1]);
    out.check(positive_rational_roots(&quartic).unwrap().is_empty(), "quartic has a positive rational root");
    out.check(!quartic.eval(&Rational::new(1, 2)).is_zero(), "1/2 is a root of the quartic");
    for (pair, p) in table_polynomials() {
        out.check(positive_rational_roots(&p).unwrap().is_empty(), format!("table row {pair:?} has positive rational roots"));
    }
    let case = appendix_pair(1, 2).unwrap();
    out.check(
        case.eliminant_positive_rational_roots == vec![r(3)],
        format!("(1,2) eliminant roots {:?}", case.eliminant_positive_rational_roots),
    );
    out.check(
        report.chains.samples == 10_000 && report.chains.first_chain_holds && report.chains.second_chain_holds,
        "inequality chains",
    );
    if report.chains.literal_second_chain_counterexample.is_some() {
        out.note("second chain checked as f110 < 0 < f11 < 1 < f111 < f1; the printed f110 < f0 < f11 fails at (1,1,1) since f0 > 1");
    }
    out.detail = format!(
        "flagged solutions {:?}, {} pairs classified",
        report.flagged_solutions.iter().map(|t| format!("({},{},{})", t[0], t[1], t[2])).collect::<Vec<_>>(),
        report.pairs.len()
    );
    out
}

fn impossibility_boundary() -> Outcome {
    let mut out = Outcome::new();
    for s in [[1, 2, 4, 8, 16], [0, 1, 2, 3, 4], [0, 2, 3, 7, 11]] {
        let s = Pattern::from_ints(&s).unwrap();
        match build_strategy(&s) {
            Err(Error::Unsupported(msg)) => out.check(msg.contains("|S| >= 5"), format!("message {msg:?}")),
            other => out.check(false, format!("{s:?} was not rejected: {:?}", other.map(|st| st.claimed_moves))),
        }
    }
    let r = solve_bounded(
        &Pattern::from_ints(&[0, 1, 2, 5]).unwrap(),
        &Board::range(0, 10).unwrap(),
        4,
        CopyMode::Rational,
        None,
    )
    .unwrap();
    out.check(r.board_relative, "solver results must be board-relative");
    out.detail = "|S| = 5 rejected with the n >= 5 impossibility; lower bounds reported board-relative".into();
    out
}

fn report(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = f();
    let elapsed = start.elapsed();
    if elapsed > limit {
        outcome.passed = false;
        outcome.notes.push(format!("failed: runtime {elapsed:.2?} exceeds {limit:?}"));
    }
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{verdict} {name} [{elapsed:.2?} / {limit:?}] {}", outcome.detail);
    for note in &outcome.notes {
        println!("     {note}");
    }
    outcome.passed
}

fn main() -> ExitCode {
    let mut targets = Vec::new();
    let results = [
        report("tree-validity", Duration::from_secs(5), || tree_validity(&mut targets)),
        report("oracle-agreement", Duration::from_secs(60), oracle_agreement),
        report("game-suite", Duration::from_secs(30), || game_suite(&targets)),
        report("symmetry-laws", Duration::from_secs(10), symmetry_laws),
        report("five-move-evidence", Duration::from_secs(60), five_move_evidence),
        report("appendix-reproduction", Duration::from_secs(60), appendix_reproduction),
        report("impossibility-boundary", Duration::from_secs(5), impossibility_boundary),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
