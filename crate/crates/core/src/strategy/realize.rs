use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{validate_tree, StrategyTree};
use crate::error::{Error, Result};
use crate::exactnum::rational::lcm_of_denominators;
use crate::exactnum::{contains_copy, AffineMap, CopyMode, Pattern, Rational};

/// Result of [`fix_root_outdegree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootGraft {
    pub tree: StrategyTree,
    /// Translation applied to put the root at 0 (zero when nothing changed).
    pub shift: Rational,
    /// Scale of the grafted duplicate (absent when no graft was needed).
    pub scale: Option<Rational>,
}

/// Gives the root a second child by grafting a scaled duplicate of the tree.
///
/// The tree is first translated so the root is 0. With `c` the largest label
/// magnitude and `m` the smallest nonzero one, the smallest integer `k` with
/// `k·m > c` keeps `k·(V ∖ {0})` disjoint from `V`.
pub fn fix_root_outdegree(t: &StrategyTree) -> RootGraft {
    let root = t.root();
    if t.children(root).len() >= 2 || t.is_leaf(root) {
        return RootGraft {
            tree: t.clone(),
            shift: Rational::zero(),
            scale: None,
        };
    }
    let shift = -t.label(root);
    let mut tree = t.map_labels(&AffineMap::translation(shift.clone()));
    let c = tree.labels().iter().map(Rational::abs).max().expect("nonempty");
    let m = tree
        .labels()
        .iter()
        .filter(|l| !l.is_zero())
        .map(Rational::abs)
        .min()
        .expect("a non-root vertex exists");
    let k = (&c / &m).floor() + BigInt::one();
    let scale = Rational::from_bigint(k);

    let original = tree.clone();
    let mut stack: Vec<(usize, usize)> = original
        .children(root)
        .iter()
        .rev()
        .map(|&child| (child, root))
        .collect();
    while let Some((v, parent)) = stack.pop() {
        let id = tree.push_child(parent, original.label(v) * &scale);
        stack.extend(original.children(v).iter().rev().map(|&c| (c, id)));
    }
    RootGraft {
        tree,
        shift,
        scale: Some(scale),
    }
}

/// A strategy tree relabeled into distinct naturals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedTree {
    #[serde(flatten)]
    pub tree: StrategyTree,
    pub map: AffineMap,
    pub integer_copy_certified: bool,
}

impl RealizedTree {
    /// Labels as machine naturals; fails if any label does not fit in `u64`.
    pub fn natural_labels(&self) -> Result<Vec<u64>> {
        self.tree
            .labels()
            .iter()
            .map(|l| {
                l.to_u64()
                    .ok_or_else(|| Error::Resource(format!("realized label {l} does not fit in u64")))
            })
            .collect()
    }

    pub fn max_label(&self) -> Rational {
        self.tree.labels().iter().max().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Maps `t` by `x ↦ c·x + d` into the naturals so that every branch copy of
/// `s` becomes an integer copy.
///
/// `c` is the lcm of all label denominators and of the slope denominators of
/// the branch witnesses; `d` is the least non-negative integer that lifts
/// every label to at least zero.
pub fn realize(t: &StrategyTree, s: &Pattern) -> Result<RealizedTree> {
    let report = validate_tree(t, s, t.height() + 1);
    if !report.structurally_valid() {
        return Err(Error::InvalidTree(Box::new(report)));
    }
    let mut slopes = Vec::new();
    for branch in t.branches() {
        let w = contains_copy(&t.branch_labels(&branch), s, CopyMode::Rational)
            .ok_or_else(|| Error::Internal("validated branch lost its copy".into()))?;
        slopes.push(w.map.a().clone());
    }
    let scale = lcm_of_denominators(t.labels().iter().chain(slopes.iter()));
    let scale_q = Rational::from_bigint(scale);
    let min_scaled = t
        .labels()
        .iter()
        .map(|l| l * &scale_q)
        .min()
        .expect("nonempty tree");
    let offset = if min_scaled.is_negative() {
        -min_scaled
    } else {
        Rational::zero()
    };
    let map = AffineMap::new(scale_q, offset)?;
    let tree = t.map_labels(&map);

    debug_assert!(tree.labels().iter().all(|l| l.is_integer() && !l.is_negative()));
    let integer_copy_certified = tree.branches().iter().all(|b| {
        contains_copy(&tree.branch_labels(b), s, CopyMode::Integer).is_some()
    });
    Ok(RealizedTree {
        tree,
        map,
        integer_copy_certified,
    })
}

/// Root fix followed by realization: the tree a Maker agent actually walks.
pub fn prepare_agent_tree(t: &StrategyTree, s: &Pattern) -> Result<RealizedTree> {
    let graft = fix_root_outdegree(t);
    let realized = realize(&graft.tree, s)?;
    if let Some(max) = realized.tree.labels().iter().max() {
        if max.to_u64().is_none() {
            return Err(Error::Resource(format!("realized label {max} does not fit in u64")));
        }
    }
    Ok(realized)
}

