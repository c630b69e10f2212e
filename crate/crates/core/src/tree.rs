//! Pure rooted trees and leaf subsets.
//!
//! Nodes are stored in breadth-first order with siblings kept in input order, so
//! index 0 is the root and the leaves (all at the same depth) appear left to right.
//! Consequently the leaves below any node form a contiguous run of leaf positions,
//! which makes E-relatedness a range query.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{bell, factorial, fubini};
use crate::error::{Error, Result};

/// Index of a node in breadth-first order.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    label: String,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    depth: usize,
    leaves: Range<usize>,
}

/// On-disk shape of a tree: `{ "id": "...", "children": [ ... ] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<NodeSpec>,
}

impl NodeSpec {
    pub fn leaf(id: &str) -> Self {
        NodeSpec {
            id: id.to_string(),
            children: Vec::new(),
        }
    }

    pub fn node(id: &str, children: Vec<NodeSpec>) -> Self {
        NodeSpec {
            id: id.to_string(),
            children,
        }
    }
}

/// A rooted tree whose leaves all sit at the same depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureTree {
    nodes: Vec<Node>,
    depth: usize,
    inner: Vec<NodeId>,
    leaves: Vec<NodeId>,
    inner_pos: Vec<Option<usize>>,
    leaf_pos: Vec<Option<usize>>,
    sibling_rank: Vec<usize>,
    by_label: HashMap<String, NodeId>,
}

/// Summary counts for a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub depth: usize,
    pub inner_nodes: usize,
    pub leaves: usize,
    /// Number of local orderings, the product of `|C_x|!`.
    pub state_count: BigUint,
    /// Size of the support lattice, the product of `Bell(|C_x|)`.
    pub lattice_size: BigUint,
    /// Size of the ordered-partition semigroup, the product of the ordered Bell numbers.
    pub semigroup_size: BigUint,
}

/// A set of leaves, stored as leaf positions (indices into [`PureTree::leaves`]).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafSubset {
    members: BTreeSet<usize>,
}

impl LeafSubset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_positions(positions: impl IntoIterator<Item = usize>) -> Self {
        LeafSubset {
            members: positions.into_iter().collect(),
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.members.contains(&position)
    }

    pub fn is_subset(&self, other: &LeafSubset) -> bool {
        self.members.is_subset(&other.members)
    }

    fn meets(&self, range: Range<usize>) -> bool {
        self.members.range(range).next().is_some()
    }
}

impl PureTree {
    /// Parses the JSON tree format.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::EmptyTree);
        }
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.is_null() || value.as_object().is_some_and(|o| o.is_empty()) {
            return Err(Error::EmptyTree);
        }
        let spec: NodeSpec = serde_json::from_value(value)?;
        Self::from_spec(&spec)
    }

    pub fn from_spec(root: &NodeSpec) -> Result<Self> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut by_label = HashMap::new();
        let mut queue = VecDeque::from([(root, None::<NodeId>, 0usize)]);

        while let Some((spec, parent, depth)) = queue.pop_front() {
            let id = nodes.len();
            if by_label.insert(spec.id.clone(), id).is_some() {
                return Err(Error::DuplicateLabel(spec.id.clone()));
            }
            if let Some(p) = parent {
                nodes[p].children.push(id);
            }
            nodes.push(Node {
                label: spec.id.clone(),
                parent,
                children: Vec::new(),
                depth,
                leaves: 0..0,
            });
            for child in &spec.children {
                queue.push_back((child, Some(id), depth + 1));
            }
        }

        let leaves: Vec<NodeId> = (0..nodes.len())
            .filter(|&id| nodes[id].children.is_empty())
            .collect();
        let depth = nodes[*leaves.last().unwrap()].depth;
        if let Some(&bad) = leaves.iter().find(|&&id| nodes[id].depth != depth) {
            return Err(Error::NotPure {
                label: nodes[bad].label.clone(),
                depth: nodes[bad].depth,
                expected: depth,
            });
        }
        let inner: Vec<NodeId> = (0..nodes.len())
            .filter(|&id| !nodes[id].children.is_empty())
            .collect();

        let mut inner_pos = vec![None; nodes.len()];
        for (pos, &id) in inner.iter().enumerate() {
            inner_pos[id] = Some(pos);
        }
        let mut leaf_pos = vec![None; nodes.len()];
        for (pos, &id) in leaves.iter().enumerate() {
            leaf_pos[id] = Some(pos);
            nodes[id].leaves = pos..pos + 1;
        }
        // Children always come after their parent in BFS order.
        for id in (0..nodes.len()).rev() {
            if let (Some(&first), Some(&last)) =
                (nodes[id].children.first(), nodes[id].children.last())
            {
                nodes[id].leaves = nodes[first].leaves.start..nodes[last].leaves.end;
            }
        }
        let mut sibling_rank = vec![0; nodes.len()];
        for node in &nodes {
            for (rank, &child) in node.children.iter().enumerate() {
                sibling_rank[child] = rank;
            }
        }

        Ok(PureTree {
            nodes,
            depth,
            inner,
            leaves,
            inner_pos,
            leaf_pos,
            sibling_rank,
            by_label,
        })
    }

    pub fn to_spec(&self) -> NodeSpec {
        fn build(tree: &PureTree, id: NodeId) -> NodeSpec {
            NodeSpec {
                id: tree.nodes[id].label.clone(),
                children: tree.nodes[id]
                    .children
                    .iter()
                    .map(|&c| build(tree, c))
                    .collect(),
            }
        }
        build(self, self.root())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("tree serializes")
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Inner nodes in breadth-first order.
    pub fn inner_nodes(&self) -> &[NodeId] {
        &self.inner
    }

    /// Leaves, left to right.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.nodes[id].label
    }

    pub fn node_depth(&self, id: NodeId) -> usize {
        self.nodes[id].depth
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Position of `id` among its parent's children in input order.
    pub fn sibling_rank(&self, id: NodeId) -> usize {
        self.sibling_rank[id]
    }

    /// Position of an inner node in [`inner_nodes`](Self::inner_nodes).
    pub fn inner_position(&self, id: NodeId) -> Option<usize> {
        self.inner_pos[id]
    }

    pub fn leaf_position(&self, id: NodeId) -> Option<usize> {
        self.leaf_pos[id]
    }

    /// Leaf positions below `id` (a leaf counts as its own descendant).
    pub fn leaf_span(&self, id: NodeId) -> Range<usize> {
        self.nodes[id].leaves.clone()
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    /// Builds a leaf subset from labels, rejecting inner nodes, unknown labels and repeats.
    pub fn leaf_subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<LeafSubset> {
        let mut members = BTreeSet::new();
        for label in labels {
            let label = label.as_ref();
            let id = self.node(label)?;
            let pos = self.leaf_pos[id].ok_or_else(|| Error::NotALeaf(label.to_string()))?;
            if !members.insert(pos) {
                return Err(Error::DuplicateLeaf(label.to_string()));
            }
        }
        Ok(LeafSubset { members })
    }

    pub fn full_subset(&self) -> LeafSubset {
        LeafSubset::from_positions(0..self.leaves.len())
    }

    /// Every subset of the leaves, ordered by bitmask (bit `i` is leaf position `i`).
    pub fn all_leaf_subsets(&self) -> Result<Vec<LeafSubset>> {
        let n = self.leaves.len();
        if n > 20 {
            return Err(Error::CapExceeded {
                what: "leaf power set",
                size: format!("2^{n}"),
                cap: 1 << 20,
            });
        }
        Ok((0u32..1 << n)
            .map(|mask| LeafSubset::from_positions((0..n).filter(|i| mask >> i & 1 == 1)))
            .collect())
    }

    pub fn subset_labels(&self, subset: &LeafSubset) -> Vec<&str> {
        subset
            .positions()
            .map(|p| self.label(self.leaves[p]))
            .collect()
    }

    /// `{a,b}`-style rendering of a subset.
    pub fn format_subset(&self, subset: &LeafSubset) -> String {
        format!("{{{}}}", self.subset_labels(subset).join(","))
    }

    /// True iff some leaf below `id` (or `id` itself) is in `subset`.
    pub fn e_related(&self, subset: &LeafSubset, id: NodeId) -> bool {
        subset.meets(self.nodes[id].leaves.clone())
    }

    /// E-relatedness of each child of `id`, in input child order.
    pub fn related_children(&self, subset: &LeafSubset, id: NodeId) -> Vec<bool> {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| self.e_related(subset, c))
            .collect()
    }

    pub fn stats(&self) -> TreeStats {
        let product = |f: fn(usize) -> BigUint| {
            self.inner.iter().fold(BigUint::one(), |acc, &x| {
                acc * f(self.nodes[x].children.len())
            })
        };
        TreeStats {
            depth: self.depth,
            inner_nodes: self.inner.len(),
            leaves: self.leaves.len(),
            state_count: product(factorial),
            lattice_size: product(bell),
            semigroup_size: product(fubini),
        }
    }
}

impl std::str::FromStr for PureTree {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        PureTree::parse(text)
    }
}
