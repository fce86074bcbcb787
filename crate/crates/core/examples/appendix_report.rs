use affmb_core::polycalc::verify_appendix;

fn main() {
    let report = verify_appendix().expect("appendix analysis runs");
    println!("passed: {}", report.passed);
    for d in &report.discrepancies {
        println!("discrepancy: {d}");
    }
    for row in &report.table {
        println!("table {:?}: divides eliminant = {}", row.pair, row.divides_eliminant);
    }
    for case in &report.cases {
        println!(
            "pair {:?}: common factor {} eliminant degree {:?} positive rational roots {:?}",
            case.pair,
            case.common_factor,
            case.eliminant.degree(),
            case.eliminant_positive_rational_roots
        );
    }
    let mut counts = std::collections::BTreeMap::new();
    for p in &report.pairs {
        *counts.entry(format!("{:?}", p.class)).or_insert(0) += 1;
    }
    println!("pair classes: {counts:?}");
}
