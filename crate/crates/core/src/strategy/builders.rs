use serde::{Deserialize, Serialize};

use super::fixtures::{example_tree, ExampleName};
use super::tree::TreeBuilder;
use super::{validate_tree, StrategyTree};
use crate::error::{Error, Result};
use crate::exactnum::{find_affine_map, Orientation, Pattern, Rational};
use crate::symmetry::{classify, reflect, Classification, SymmetryKind};

/// Which construction produced a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Trivial,
    Size3,
    Symmetric,
    Generic,
    GenericReflected,
    Example0236,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub tree: StrategyTree,
    pub claimed_moves: usize,
    pub construction: Construction,
}

fn r(n: i64) -> Rational {
    Rational::integer(n)
}

pub fn build_size3(s: &Pattern) -> Result<StrategyTree> {
    if s.len() != 3 {
        return Err(Error::Contract(format!("build_size3 needs |S| = 3, got {}", s.len())));
    }
    let d = s.differences();
    let (b, c) = (&d[0], &d[1]);
    let bc = b + c;
    let mut t = TreeBuilder::new(Rational::zero());
    let one = t.add(0, Rational::one());
    t.add(one, &bc / b);
    t.add(one, b / &bc);
    Ok(t.finish())
}

/// Tree for `(1,4)`-symmetric sets in coordinates where `{0,1,1+k,1+k+k²}`
/// is the target.
fn sym14_tree(k: &Rational) -> StrategyTree {
    let one = Rational::one();
    let k2 = k * k;
    let one_k = &one + k;
    let one_k_k2 = &one_k + &k2;
    let mut t = TreeBuilder::new(Rational::zero());
    let v1 = t.add(0, one.clone());
    let c = t.add(v1, one_k.clone());
    let d = t.add(v1, one.clone() / &one_k);
    t.add(d, &one_k_k2 / &one_k);
    t.add(d, -(one.clone() / (k + &k2)));
    t.add(c, one_k_k2);
    t.add(c, -(one / k));
    t.finish()
}

/// Tree for `(2,4)`-symmetric sets in coordinates where
/// `{-1/(k-1), 0, 1, 1+k}` (a copy of `C₂(4,k)`) is the target.
fn sym24_tree(k: &Rational) -> StrategyTree {
    let one = Rational::one();
    let mut t = TreeBuilder::new(Rational::zero());
    let v1 = t.add(0, one.clone());
    let c = t.add(v1, -(one.clone() / (k - &one)));
    let d = t.add(v1, one.clone() / k);
    t.add(d, one.clone() / (k * k));
    t.add(d, k.clone());
    t.add(c, &one + k);
    t.add(c, -(one / k));
    t.finish()
}

fn sym24_target(k: &Rational) -> Pattern {
    let one = Rational::one();
    Pattern::new(vec![-(one.clone() / (k - &one)), Rational::zero(), one.clone(), one + k])
        .expect("k > 1 keeps the target increasing")
}

/// Symmetric 4-set tree together with the pattern its branches are copies of.
fn sym4_with_target(c: &Classification, s: &Pattern) -> Result<(StrategyTree, Pattern)> {
    if s.len() != 4 {
        return Err(Error::Contract(format!("build_sym4 needs |S| = 4, got {}", s.len())));
    }
    match c.kind {
        SymmetryKind::Arithmetic | SymmetryKind::Geometric1n => {
            let d = s.differences();
            let k = &d[1] / &d[0];
            if &d[2] / &d[1] != k {
                return Err(Error::Domain(format!("{s:?} is not (1,4)-symmetric")));
            }
            let one = Rational::one();
            let target = Pattern::new(vec![
                Rational::zero(),
                one.clone(),
                &one + &k,
                &one + &k + &k * &k,
            ])?;
            Ok((sym14_tree(&k), target))
        }
        SymmetryKind::Geometric2n | SymmetryKind::Geometric1n1 => {
            let k = c
                .k
                .clone()
                .ok_or_else(|| Error::Domain("geometric classification without k".into()))?;
            if k <= Rational::one() {
                return Err(Error::Domain(format!("classification ratio {k} must exceed 1")));
            }
            let tree = sym24_tree(&k);
            let target = sym24_target(&k);
            if c.kind == SymmetryKind::Geometric2n {
                Ok((tree, target))
            } else {
                Ok((tree.negated(), reflect(&target)))
            }
        }
        SymmetryKind::NonSymmetric => Err(Error::Domain(format!(
            "{s:?} is not symmetric; use build_generic4 for a 5-move tree"
        ))),
    }
}

/// 4-move tree for a symmetric 4-set, in the canonical coordinates of its type.
pub fn build_sym4(c: &Classification, s: &Pattern) -> Result<StrategyTree> {
    sym4_with_target(c, s).map(|(t, _)| t)
}

pub const GENERIC_VERTEX_NAMES: [&str; 12] = [
    "0", "1", "f0", "f1", "f00", "f01", "f10", "f11", "f010", "f011", "f110", "f111",
];

/// The twelve vertex values of the generic 4-set tree for `S = {0,x,x+y,x+y+z}`,
/// in the order of [`GENERIC_VERTEX_NAMES`].
pub fn generic4_labels(x: &Rational, y: &Rational, z: &Rational) -> [Rational; 12] {
    let xy = x * y;
    let xz = x * z;
    let yz = y * z;
    let x2 = x * x;
    let y2 = y * y;
    let sum = x + y + z;
    let x_plus_y = x + y;
    // (x+y)(y+z)
    let quad = &xy + &y2 + &xz + &yz;

    let f0 = &sum / x;
    let f1 = &sum / &x_plus_y;
    let f00 = &x_plus_y / x;
    let f10 = x / &x_plus_y;
    let f01 = -(&xy + &y2 + &yz) / &xz;
    let f11 = (&yz + &xy + &y2) / &quad;
    let f010 = -(&x2 + &(&xy * &r(2)) + &y2 + &yz + &xz) / &xz;
    let f110 = -(&x2 + &xy + &xz) / &quad;
    let f011 = (&xz - &y2 - &yz) / &xz;
    let f111 = (&(&yz * &r(2)) + &xy + &y2 + &xz) / &quad;
    [
        Rational::zero(),
        Rational::one(),
        f0,
        f1,
        f00,
        f01,
        f10,
        f11,
        f010,
        f011,
        f110,
        f111,
    ]
}

/// 5-move tree for `S = {0,x,x+y,x+y+z}`; fails when two vertices coincide.
pub fn build_generic4(x: &Rational, y: &Rational, z: &Rational) -> Result<StrategyTree> {
    if !(x.is_positive() && y.is_positive() && z.is_positive()) {
        return Err(Error::Domain(format!(
            "generic tree needs positive gaps, got ({x}, {y}, {z})"
        )));
    }
    let labels = generic4_labels(x, y, z);
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] == labels[j] {
                return Err(Error::Degenerate {
                    first: GENERIC_VERTEX_NAMES[i].into(),
                    second: GENERIC_VERTEX_NAMES[j].into(),
                    value: labels[i].to_string(),
                });
            }
        }
    }
    let children = vec![
        vec![1],
        vec![2, 3],
        vec![4, 5],
        vec![6, 7],
        vec![],
        vec![8, 9],
        vec![],
        vec![10, 11],
        vec![],
        vec![],
        vec![],
        vec![],
    ];
    StrategyTree::new(labels.to_vec(), children, 0)
}

/// Picks and builds the fastest known strategy for `|s| ≤ 4`.
///
/// The returned tree is mapped so that its branches contain copies of `s`
/// in the coordinates of `s` itself, and always validates against
/// `claimed_moves`.
pub fn build_strategy(s: &Pattern) -> Result<Strategy> {
    let n = s.len();
    let (tree, target, claimed_moves, construction) = match n {
        1 => (StrategyTree::leaf(s[0].clone()), s.clone(), 1, Construction::Trivial),
        2 => {
            let mut t = TreeBuilder::new(Rational::zero());
            t.add(0, Rational::one());
            let target = Pattern::new(vec![Rational::zero(), Rational::one()])?;
            (t.finish(), target, 2, Construction::Trivial)
        }
        3 => {
            let d = s.differences();
            let target = Pattern::new(vec![Rational::zero(), Rational::one(), (&d[0] + &d[1]) / &d[0]])?;
            (build_size3(s)?, target, 3, Construction::Size3)
        }
        4 => {
            let c = classify(s)?;
            if c.kind.is_symmetric() {
                let (tree, target) = sym4_with_target(&c, s)?;
                (tree, target, 4, Construction::Symmetric)
            } else {
                let (tree, target, construction) = build_nonsymmetric4(s)?;
                (tree, target, 5, construction)
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no strategy construction for |S| = {n}: Maker has no |S|-move strategy once \
                 |S| >= 5, and no constructive move bound is available for larger sets"
            )))
        }
    };
    let h = find_affine_map(&target, s, Orientation::Either)?
        .ok_or_else(|| Error::Internal(format!("tree target {target:?} is not an image of {s:?}")))?;
    let tree = tree.map_labels(&h);
    let report = validate_tree(&tree, s, claimed_moves);
    if !report.valid {
        return Err(Error::Internal(format!(
            "constructed tree for {s:?} fails validation: {:?}",
            report.failures
        )));
    }
    Ok(Strategy {
        tree,
        claimed_moves,
        construction,
    })
}

fn build_nonsymmetric4(s: &Pattern) -> Result<(StrategyTree, Pattern, Construction)> {
    let d = s.differences();
    let (x, y, z) = (&d[0], &d[1], &d[2]);
    let normal = |a: &Rational, b: &Rational, c: &Rational| {
        Pattern::new(vec![Rational::zero(), a.clone(), a + b, a + b + c])
    };
    match build_generic4(x, y, z) {
        Ok(t) => return Ok((t, normal(x, y, z)?, Construction::Generic)),
        Err(Error::Degenerate { .. }) => {}
        Err(e) => return Err(e),
    }
    // The reflection {0,z,z+y,z+y+x} = -S + (x+y+z); its tree maps back through a
    // decreasing map.
    match build_generic4(z, y, x) {
        Ok(t) => return Ok((t, normal(z, y, x)?, Construction::GenericReflected)),
        Err(Error::Degenerate { .. }) => {}
        Err(e) => return Err(e),
    }
    let base = ExampleName::Ex0236.target();
    if find_affine_map(&base, s, Orientation::Either)?.is_some() {
        return Ok((example_tree(ExampleName::Ex0236), base, Construction::Example0236));
    }
    Err(Error::Internal(format!(
        "both orientations of the generic tree degenerate for {s:?}, which is not an image of {{0,2,3,6}}"
    )))
}

