use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::StrategyTree;
use crate::exactnum::{contains_copy, CopyMode, Pattern, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Labels are pairwise distinct.
    Distinct,
    /// Every root-to-leaf branch contains a copy of the target.
    BranchCopy,
    /// Internal non-root vertices have at least two children.
    Outdegree,
    /// Leaves sit at most `N - 1` edges below the root.
    Depth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub condition: Condition,
    pub detail: String,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub move_bound: usize,
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn fails(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    /// Valid on the conditions that do not depend on the move bound.
    pub fn structurally_valid(&self) -> bool {
        !self.fails(Condition::Distinct) && !self.fails(Condition::BranchCopy)
    }
}

/// Checks that `t` describes an `n`-move Maker strategy for `s`.
pub fn validate_tree(t: &StrategyTree, s: &Pattern, n: usize) -> ValidationReport {
    let mut failures = Vec::new();

    let mut seen: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for (v, label) in t.labels().iter().enumerate() {
        seen.entry(label).or_default().push(v);
    }
    for (label, vertices) in seen.into_iter().filter(|(_, vs)| vs.len() > 1) {
        failures.push(Failure {
            condition: Condition::Distinct,
            detail: format!("label {label} appears {} times", vertices.len()),
            vertices,
        });
    }

    for branch in t.branches() {
        let labels = t.branch_labels(&branch);
        if contains_copy(&labels, s, CopyMode::Rational).is_none() {
            let shown: Vec<String> = labels.iter().map(ToString::to_string).collect();
            failures.push(Failure {
                condition: Condition::BranchCopy,
                detail: format!("branch {{{}}} contains no copy of {{{s}}}", shown.join(",")),
                vertices: branch.clone(),
            });
        }
        let edges = branch.len() - 1;
        if edges + 1 > n {
            failures.push(Failure {
                condition: Condition::Depth,
                detail: format!("leaf at depth {edges} exceeds bound {}", n.saturating_sub(1)),
                vertices: vec![*branch.last().expect("branch is nonempty")],
            });
        }
    }

    for v in 0..t.len() {
        if v != t.root() && t.children(v).len() == 1 {
            failures.push(Failure {
                condition: Condition::Outdegree,
                detail: format!("internal vertex {} has a single child", t.label(v)),
                vertices: vec![v],
            });
        }
    }

    ValidationReport {
        valid: failures.is_empty(),
        move_bound: n,
        failures,
    }
}
