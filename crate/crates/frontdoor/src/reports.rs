//! Query results shared by the CLI and the HTTP API, so both print the
//! same JSON for the same question.

use affmb_core::game::BreakerPolicy;
use affmb_core::solver::{solve_bounded, Board, SolveResult};
use affmb_core::strategy::{build_strategy, prepare_agent_tree, validate_tree, RealizedTree, Strategy, StrategyTree, ValidationReport};
use affmb_core::symmetry::{classify, symmetry_types, Classification};
use affmb_core::{CopyMode, Error, Pattern, Rational, Result};
use serde::Serialize;

/// Parses a set literal such as `1,2,3,5`, `{1,2,3,5}` or `[0, 1/2, 3]`.
/// Order does not matter; repeated elements are rejected.
pub fn parse_set(text: &str) -> Result<Pattern> {
    let inner = text
        .trim()
        .trim_start_matches(['{', '['])
        .trim_end_matches(['}', ']'])
        .trim();
    if inner.is_empty() {
        return Err(Error::Parse(format!("empty set literal {text:?}")));
    }
    let values = inner
        .split(',')
        .map(|v| v.trim().parse::<Rational>())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse(format!("bad set literal {text:?}: {e}")))?;
    Pattern::from_unsorted(values).map_err(|e| Error::Parse(format!("bad set literal {text:?}: {e}")))
}

pub fn naturals(s: &Pattern) -> Result<Vec<u64>> {
    s.to_naturals()
        .ok_or_else(|| Error::Domain(format!("target {{{s}}} must consist of naturals")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub s: Pattern,
    #[serde(flatten)]
    pub classification: Classification,
    pub symmetry_types: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_moves: Option<usize>,
}

impl ClassifyReport {
    pub fn summary(&self) -> String {
        let kind = serde_json::to_value(self.classification.kind).expect("kind serializes");
        let mut line = format!("S = {{{}}}: {}", self.s, kind.as_str().unwrap_or("?"));
        if let Some(k) = &self.classification.k {
            line.push_str(&format!(", k = {k}"));
        }
        if !self.symmetry_types.is_empty() {
            line.push_str(&format!(", symmetry type {}", self.symmetry_types.join(" ")));
        }
        if let Some(m) = self.claimed_moves {
            line.push_str(&format!("; Maker claims {m} moves"));
        }
        line
    }
}

pub fn classify_report(s: &Pattern) -> Result<ClassifyReport> {
    let classification = classify(s)?;
    let types = symmetry_types(s)?;
    Ok(ClassifyReport {
        s: s.clone(),
        classification,
        symmetry_types: if s.len() > 3 { types.iter().map(ToString::to_string).collect() } else { Vec::new() },
        claimed_moves: build_strategy(s).ok().map(|st| st.claimed_moves),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub s: Pattern,
    #[serde(flatten)]
    pub strategy: Strategy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realized: Option<RealizedTree>,
}

impl TreeReport {
    pub fn summary(&self) -> String {
        let construction = serde_json::to_value(self.strategy.construction).expect("construction serializes");
        let mut line = format!(
            "S = {{{}}}: {} tree with {} vertices, Maker wins in {} moves",
            self.s,
            construction.as_str().unwrap_or("?"),
            self.strategy.tree.len(),
            self.strategy.claimed_moves
        );
        if let Some(r) = &self.realized {
            line.push_str(&format!(
                "; realized by x -> {}x + {}, integer copies certified: {}",
                r.map.a(),
                r.map.b(),
                r.integer_copy_certified
            ));
        }
        line
    }
}

pub fn tree_report(s: &Pattern, realize: bool) -> Result<TreeReport> {
    let strategy = build_strategy(s)?;
    let realized = if realize {
        naturals(s)?;
        Some(prepare_agent_tree(&strategy.tree, s)?)
    } else {
        None
    };
    Ok(TreeReport {
        s: s.clone(),
        strategy,
        realized,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub s: Pattern,
    pub moves: usize,
    #[serde(flatten)]
    pub report: ValidationReport,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        if self.report.valid {
            format!("valid {}-move strategy tree for {{{}}}", self.moves, self.s)
        } else {
            let failed: Vec<String> = self
                .report
                .failures
                .iter()
                .map(|f| format!("{:?}: {}", f.condition, f.detail))
                .collect();
            format!("invalid for {{{}}} in {} moves: {}", self.s, self.moves, failed.join("; "))
        }
    }
}

pub fn verify_report(tree: &StrategyTree, s: &Pattern, moves: usize) -> VerifyReport {
    VerifyReport {
        s: s.clone(),
        moves,
        report: validate_tree(tree, s, moves),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub s: Pattern,
    pub board: Board,
    pub budget: usize,
    pub mode: CopyMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breaker: Option<BreakerPolicy>,
    #[serde(flatten)]
    pub result: SolveResult,
}

impl SolveReport {
    pub fn summary(&self) -> String {
        match self.result.min_maker_moves {
            Some(m) => format!(
                "Maker forces a copy of {{{}}} in {m} moves on a {}-point board ({} nodes)",
                self.s,
                self.board.len(),
                self.result.nodes_searched
            ),
            None => format!(
                "no forced win within {} moves on this {}-point board; board-relative only ({} nodes)",
                self.budget,
                self.board.len(),
                self.result.nodes_searched
            ),
        }
    }
}

pub fn solve_report(
    s: &Pattern,
    board: Board,
    budget: usize,
    mode: CopyMode,
    breaker: Option<BreakerPolicy>,
) -> Result<SolveReport> {
    let result = solve_bounded(s, &board, budget, mode, breaker.as_ref())?;
    Ok(SolveReport {
        s: s.clone(),
        board,
        budget,
        mode,
        breaker,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_literals() {
        assert_eq!(parse_set("{1, 2,3,5}").unwrap(), Pattern::from_ints(&[1, 2, 3, 5]).unwrap());
        assert_eq!(parse_set("[5,3,1]").unwrap(), Pattern::from_ints(&[1, 3, 5]).unwrap());
        assert!(parse_set("0,1/2,3").is_ok());
        for bad in ["", "{}", "1,,2", "2,2,3", "1,x"] {
            assert!(matches!(parse_set(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn classify_summary() {
        let r = classify_report(&parse_set("1,2,3,5").unwrap()).unwrap();
        assert_eq!(r.summary(), "S = {1,2,3,5}: geometric_2n, k = 2, symmetry type (2,4); Maker claims 4 moves");
        let json: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(json["kind"], "geometric_2n");
        assert_eq!(json["k"], "2");
    }
}
