use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tree::TreeBuilder;
use super::StrategyTree;
use crate::error::{Error, Result};
use crate::exactnum::rational::q;
use crate::exactnum::Pattern;

/// The two hand-made trees shipped as fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    /// 4-move tree for `{1,2,3,4}`.
    Ex1234,
    /// 5-move tree for `{0,2,3,6}`.
    Ex0236,
}

impl FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1234" => Ok(ExampleName::Ex1234),
            "ex0236" => Ok(ExampleName::Ex0236),
            other => Err(Error::Domain(format!("unknown example tree {other:?}"))),
        }
    }
}

impl ExampleName {
    pub fn target(self) -> Pattern {
        match self {
            ExampleName::Ex1234 => Pattern::from_ints(&[1, 2, 3, 4]),
            ExampleName::Ex0236 => Pattern::from_ints(&[0, 2, 3, 6]),
        }
        .expect("fixture targets are valid")
    }

    pub fn moves(self) -> usize {
        match self {
            ExampleName::Ex1234 => 4,
            ExampleName::Ex0236 => 5,
        }
    }
}

pub fn example_tree(name: ExampleName) -> StrategyTree {
    match name {
        ExampleName::Ex1234 => {
            let mut b = TreeBuilder::new(q(0, 1));
            let one = b.add(0, q(1, 1));
            let two = b.add(one, q(2, 1));
            let half = b.add(one, q(1, 2));
            b.add(half, q(-1, 2));
            b.add(half, q(3, 2));
            b.add(two, q(-1, 1));
            b.add(two, q(3, 1));
            b.finish()
        }
        ExampleName::Ex0236 => {
            let mut b = TreeBuilder::new(q(0, 1));
            let v48 = b.add(0, q(48, 1));
            let v16 = b.add(v48, q(16, 1));
            let v12 = b.add(v48, q(12, 1));
            b.add(v16, q(24, 1));
            b.add(v12, q(-24, 1));
            let vm6 = b.add(v12, q(-6, 1));
            let v64 = b.add(v16, q(64, 1));
            b.add(v64, q(-32, 1));
            b.add(v64, q(112, 1));
            b.add(vm6, q(21, 1));
            b.add(vm6, q(3, 1));
            b.finish()
        }
    }
}

/// The six copies of `{0,2,3,6}` that the branches of the `ex0236` tree contain.
pub fn ex0236_witness_copies() -> Vec<Pattern> {
    [
        [0, 16, 24, 48],
        [-32, 0, 16, 64],
        [16, 48, 64, 112],
        [-6, 0, 3, 12],
        [-24, 0, 12, 48],
        [-6, 12, 21, 48],
    ]
    .iter()
    .map(|p| Pattern::from_ints(p).expect("fixture copies are valid"))
    .collect()
}
