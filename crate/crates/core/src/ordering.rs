//! Local orderings of a tree and the random-to-front move.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::combinatorics::{factorial, next_permutation, permutation_rank, permutation_unrank};
use crate::error::{Error, Result};
use crate::tree::{LeafSubset, NodeId, PureTree};

/// One linear order of the children of every inner node.
///
/// `per_node[i]` is the order at `tree.inner_nodes()[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalOrdering {
    per_node: Vec<Vec<NodeId>>,
}

impl LocalOrdering {
    /// Checks that `per_node` lists each inner node's children exactly once.
    pub fn new(tree: &PureTree, per_node: Vec<Vec<NodeId>>) -> Result<Self> {
        let ordering = LocalOrdering { per_node };
        ordering.validate(tree)?;
        Ok(ordering)
    }

    pub fn per_node(&self) -> &[Vec<NodeId>] {
        &self.per_node
    }

    pub fn at(&self, inner_position: usize) -> &[NodeId] {
        &self.per_node[inner_position]
    }

    pub fn validate(&self, tree: &PureTree) -> Result<()> {
        let inner = tree.inner_nodes();
        if self.per_node.len() != inner.len() {
            return Err(Error::InvalidOrdering(format!(
                "{} node orders for {} inner nodes",
                self.per_node.len(),
                inner.len()
            )));
        }
        for (order, &x) in self.per_node.iter().zip(inner) {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != tree.children(x) {
                return Err(Error::InvalidOrdering(format!(
                    "order at `{}` is not a permutation of its children",
                    tree.label(x)
                )));
            }
        }
        Ok(())
    }

    /// Parses the `{ inner-id: [child-id, ...], ... }` mapping.
    pub fn from_json(tree: &PureTree, value: &Value) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::Syntax("local ordering must be an object".into()))?;
        let mut per_node = Vec::with_capacity(tree.inner_nodes().len());
        for &x in tree.inner_nodes() {
            let list = map
                .get(tree.label(x))
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    Error::InvalidOrdering(format!("missing order for `{}`", tree.label(x)))
                })?;
            let order = list
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| Error::Syntax("child ids must be strings".into()))
                        .and_then(|s| tree.node(s))
                })
                .collect::<Result<Vec<_>>>()?;
            per_node.push(order);
        }
        if map.len() != per_node.len() {
            return Err(Error::InvalidOrdering(
                "entries for nodes that are not inner nodes".into(),
            ));
        }
        LocalOrdering::new(tree, per_node)
    }

    pub fn to_json(&self, tree: &PureTree) -> Value {
        let mut map = Map::new();
        for (order, &x) in self.per_node.iter().zip(tree.inner_nodes()) {
            let children = order.iter().map(|&c| Value::from(tree.label(c))).collect();
            map.insert(tree.label(x).to_string(), Value::Array(children));
        }
        Value::Object(map)
    }

    /// Compact text form, e.g. `r:(u,v) u:(a,b) v:(c,d)`.
    pub fn display(&self, tree: &PureTree) -> String {
        let mut out = String::new();
        for (i, (order, &x)) in self.per_node.iter().zip(tree.inner_nodes()).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let names: Vec<&str> = order.iter().map(|&c| tree.label(c)).collect();
            let _ = write!(out, "{}:({})", tree.label(x), names.join(","));
        }
        out
    }
}

/// The child order stored in the tree at every inner node.
pub fn default_ordering(tree: &PureTree) -> LocalOrdering {
    LocalOrdering {
        per_node: tree
            .inner_nodes()
            .iter()
            .map(|&x| tree.children(x).to_vec())
            .collect(),
    }
}

/// Precomputed E-relatedness of every node for one leaf subset, so the move can be
/// applied to many orderings cheaply.
#[derive(Debug, Clone)]
pub struct MovePlan {
    related: Vec<bool>,
}

impl MovePlan {
    pub fn new(tree: &PureTree, subset: &LeafSubset) -> Self {
        MovePlan {
            related: (0..tree.node_count())
                .map(|x| tree.e_related(subset, x))
                .collect(),
        }
    }

    pub fn apply(&self, pi: &LocalOrdering) -> LocalOrdering {
        let per_node = pi
            .per_node
            .iter()
            .map(|order| {
                let front = order.iter().copied().filter(|&c| self.related[c]);
                let back = order.iter().copied().filter(|&c| !self.related[c]);
                front.chain(back).collect()
            })
            .collect();
        LocalOrdering { per_node }
    }
}

/// `E(pi)`: at every inner node the E-related children move to the front, keeping
/// their relative order, followed by the rest in their relative order.
pub fn apply_move(tree: &PureTree, pi: &LocalOrdering, subset: &LeafSubset) -> LocalOrdering {
    MovePlan::new(tree, subset).apply(pi)
}

fn state_count_within(tree: &PureTree, cap: u64) -> Result<usize> {
    let count = tree.stats().state_count;
    match count.to_u64() {
        Some(n) if n <= cap => Ok(n as usize),
        _ => Err(Error::CapExceeded {
            what: "state space",
            size: count.to_string(),
            cap,
        }),
    }
}

/// All local orderings in canonical order.
///
/// Inner nodes are mixed-radix digits in breadth-first order, the first being most
/// significant; each digit is the lexicographic rank of the node's permutation relative
/// to its input child order. Index 0 is [`default_ordering`].
pub fn enumerate_orderings(tree: &PureTree, cap: u64) -> Result<Vec<LocalOrdering>> {
    let count = state_count_within(tree, cap)?;
    let mut out = Vec::with_capacity(count);
    let mut ranks: Vec<Vec<usize>> = tree
        .inner_nodes()
        .iter()
        .map(|&x| (0..tree.children(x).len()).collect())
        .collect();
    loop {
        let per_node = ranks
            .iter()
            .zip(tree.inner_nodes())
            .map(|(perm, &x)| perm.iter().map(|&r| tree.children(x)[r]).collect())
            .collect();
        out.push(LocalOrdering { per_node });

        // Odometer step, least significant digit last.
        let mut advanced = false;
        for perm in ranks.iter_mut().rev() {
            if next_permutation(perm) {
                advanced = true;
                break;
            }
            perm.sort_unstable();
        }
        if !advanced {
            break;
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// Canonical index of `pi`, consistent with [`enumerate_orderings`].
pub fn ordering_index(tree: &PureTree, pi: &LocalOrdering) -> Result<usize> {
    pi.validate(tree)?;
    state_count_within(tree, usize::MAX as u64)?;
    let mut index = 0usize;
    for order in &pi.per_node {
        let perm: Vec<usize> = order.iter().map(|&c| tree.sibling_rank(c)).collect();
        let radix = factorial(order.len()).to_usize().unwrap();
        index = index * radix + permutation_rank(&perm);
    }
    Ok(index)
}

/// The ordering at canonical index `k`.
pub fn index_ordering(tree: &PureTree, mut k: usize) -> Result<LocalOrdering> {
    let count = state_count_within(tree, usize::MAX as u64)?;
    if k >= count {
        return Err(Error::IndexOutOfRange { index: k, count });
    }
    let inner = tree.inner_nodes();
    let mut per_node = vec![Vec::new(); inner.len()];
    for (slot, &x) in per_node.iter_mut().zip(inner).rev() {
        let n = tree.children(x).len();
        let radix = factorial(n).to_usize().unwrap();
        let perm = permutation_unrank(n, k % radix);
        k /= radix;
        *slot = perm.into_iter().map(|r| tree.children(x)[r]).collect();
    }
    Ok(LocalOrdering { per_node })
}
