use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{AffineMap, Rational};

/// Rooted tree of rational labels describing a Maker strategy.
///
/// Children keep their insertion order; that order is the order Maker tries
/// them in and the order they are serialized in.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct StrategyTree {
    labels: Vec<Rational>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct VertexJson {
    id: usize,
    label: Rational,
    children: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TreeJson {
    root: usize,
    vertices: Vec<VertexJson>,
}

impl TryFrom<TreeJson> for StrategyTree {
    type Error = Error;
    fn try_from(raw: TreeJson) -> Result<Self> {
        let n = raw.vertices.len();
        let mut labels = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for v in raw.vertices {
            if v.id >= n || labels[v.id].is_some() {
                return Err(Error::Parse(format!("bad or repeated vertex id {}", v.id)));
            }
            labels[v.id] = Some(v.label);
            children[v.id] = v.children;
        }
        let labels = labels.into_iter().map(|l| l.expect("all ids filled")).collect();
        StrategyTree::new(labels, children, raw.root)
    }
}

impl From<StrategyTree> for TreeJson {
    fn from(t: StrategyTree) -> Self {
        TreeJson {
            root: t.root,
            vertices: t
                .labels
                .into_iter()
                .zip(t.children)
                .enumerate()
                .map(|(id, (label, children))| VertexJson { id, label, children })
                .collect(),
        }
    }
}

impl StrategyTree {
    pub fn new(labels: Vec<Rational>, children: Vec<Vec<usize>>, root: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 || children.len() != n || root >= n {
            return Err(Error::Domain("malformed tree: sizes or root out of range".into()));
        }
        let mut parent_count = vec![0usize; n];
        for (v, kids) in children.iter().enumerate() {
            for &c in kids {
                if c >= n {
                    return Err(Error::Domain(format!("vertex {v} has out-of-range child {c}")));
                }
                parent_count[c] += 1;
            }
        }
        if parent_count[root] != 0 {
            return Err(Error::Domain("root has a parent".into()));
        }
        if let Some(v) = (0..n).find(|&v| v != root && parent_count[v] != 1) {
            return Err(Error::Domain(format!(
                "vertex {v} has {} parents; expected exactly one",
                parent_count[v]
            )));
        }
        let tree = StrategyTree { labels, children, root };
        if tree.preorder().len() != n {
            return Err(Error::Domain("tree has vertices unreachable from the root".into()));
        }
        Ok(tree)
    }

    /// Single-vertex tree.
    pub fn leaf(label: Rational) -> Self {
        StrategyTree {
            labels: vec![label],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn label(&self, v: usize) -> &Rational {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Rational] {
        &self.labels
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Appends a vertex under `parent` and returns its id.
    pub fn push_child(&mut self, parent: usize, label: Rational) -> usize {
        let id = self.labels.len();
        self.labels.push(label);
        self.children.push(Vec::new());
        self.children[parent].push(id);
        id
    }

    pub fn preorder(&self) -> Vec<usize> {
        self.subtree(self.root)
    }

    /// Vertex ids of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if out.len() > self.labels.len() {
                break;
            }
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Root-to-leaf vertex paths in child order.
    pub fn branches(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![self.root];
        self.collect_branches(&mut path, &mut out);
        out
    }

    fn collect_branches(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().expect("path is nonempty");
        if self.children[v].is_empty() {
            out.push(path.clone());
            return;
        }
        for &c in &self.children[v] {
            path.push(c);
            self.collect_branches(path, out);
            path.pop();
        }
    }

    /// Number of edges between the root and `v`.
    pub fn depth_of(&self, v: usize) -> usize {
        self.branches()
            .iter()
            .find_map(|b| b.iter().position(|&u| u == v))
            .unwrap_or(0)
    }

    /// Largest root-to-leaf edge count.
    pub fn height(&self) -> usize {
        self.branches().iter().map(|b| b.len() - 1).max().unwrap_or(0)
    }

    pub fn branch_labels(&self, branch: &[usize]) -> Vec<Rational> {
        branch.iter().map(|&v| self.labels[v].clone()).collect()
    }

    /// Same shape with every label replaced by `f(label)`.
    pub fn map_labels(&self, f: &AffineMap) -> StrategyTree {
        StrategyTree {
            labels: self.labels.iter().map(|x| f.apply(x)).collect(),
            children: self.children.clone(),
            root: self.root,
        }
    }

    pub fn negated(&self) -> StrategyTree {
        self.map_labels(&AffineMap::negation())
    }

    pub fn with_label(&self, v: usize, label: Rational) -> StrategyTree {
        let mut t = self.clone();
        t.labels[v] = label;
        t
    }

    pub fn find_label(&self, x: &Rational) -> Option<usize> {
        self.labels.iter().position(|l| l == x)
    }
}

impl fmt::Debug for StrategyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &StrategyTree, v: usize, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:indent$}{}", "", t.labels[v], indent = depth * 2)?;
            for &c in &t.children[v] {
                go(t, c, depth + 1, f)?;
            }
            Ok(())
        }
        go(self, self.root, 0, f)
    }
}

/// Incremental construction helper used by the builders.
pub(crate) struct TreeBuilder {
    tree: StrategyTree,
}

impl TreeBuilder {
    pub fn new(root: Rational) -> Self {
        TreeBuilder {
            tree: StrategyTree::leaf(root),
        }
    }

    pub fn add(&mut self, parent: usize, label: Rational) -> usize {
        self.tree.push_child(parent, label)
    }

    pub fn finish(self) -> StrategyTree {
        self.tree
    }
}
