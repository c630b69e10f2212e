//! The left regular band of ordered-partition families.
//!
//! An element assigns an ordered set partition of `C_x` to every inner node `x`.
//! Composition is componentwise: `X ∘ Y = ⟨X_i ∩ Y_j⟩` with nonempty intersections
//! listed in lexicographic order of `(i, j)`. Chambers (all blocks singletons) are the
//! local orderings, and `β^E ∘ π` is the random-to-front move `E(π)`.

use std::collections::{HashSet, VecDeque};

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::combinatorics::{next_permutation, set_partitions};
use crate::error::{Error, Result};
use crate::lattice::{PartitionFamily, SetPartition};
use crate::ordering::{default_ordering, LocalOrdering};
use crate::tree::{LeafSubset, NodeId, PureTree};

/// An ordered set partition. Each block is kept sorted so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut canonical = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !block.iter().all(|e| seen.insert(*e)) {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            block.sort_unstable();
            canonical.push(block);
        }
        Ok(OrderedPartition { blocks: canonical })
    }

    /// The one-block partition, the identity of composition.
    pub fn one_block(ground: &[usize]) -> Self {
        if ground.is_empty() {
            return OrderedPartition { blocks: Vec::new() };
        }
        let mut block = ground.to_vec();
        block.sort_unstable();
        OrderedPartition {
            blocks: vec![block],
        }
    }

    /// All-singleton partition listing `order` front to back.
    pub fn singletons(order: &[usize]) -> Self {
        OrderedPartition {
            blocks: order.iter().map(|&e| vec![e]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_set(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrderedPartition) -> Result<OrderedPartition> {
        if self.ground_set() != other.ground_set() {
            return Err(Error::GroundSetMismatch);
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &OrderedPartition) -> OrderedPartition {
        let mut blocks = Vec::new();
        for x in &self.blocks {
            for y in &other.blocks {
                let meet: Vec<usize> = x
                    .iter()
                    .copied()
                    .filter(|e| y.binary_search(e).is_ok())
                    .collect();
                if !meet.is_empty() {
                    blocks.push(meet);
                }
            }
        }
        OrderedPartition { blocks }
    }

    /// Forgets the block order.
    pub fn support(&self) -> SetPartition {
        SetPartition::from_blocks_unchecked(self.blocks.clone())
    }
}

/// One ordered partition of `C_x` per inner node, aligned with `tree.inner_nodes()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartitionFamily {
    per_node: Vec<OrderedPartition>,
}

impl OrderedPartitionFamily {
    pub fn new(tree: &PureTree, per_node: Vec<OrderedPartition>) -> Result<Self> {
        if per_node.len() != tree.inner_nodes().len() {
            return Err(Error::TreeMismatch);
        }
        for (part, &x) in per_node.iter().zip(tree.inner_nodes()) {
            if part.ground_set() != tree.children(x) {
                return Err(Error::GroundSetMismatch);
            }
        }
        Ok(OrderedPartitionFamily { per_node })
    }

    pub fn per_node(&self) -> &[OrderedPartition] {
        &self.per_node
    }

    pub fn to_json(&self, tree: &PureTree) -> Value {
        let mut map = Map::new();
        for (part, &x) in self.per_node.iter().zip(tree.inner_nodes()) {
            let blocks = part
                .blocks
                .iter()
                .map(|b| b.iter().map(|&c| Value::from(tree.label(c))).collect())
                .collect();
            map.insert(tree.label(x).to_string(), Value::Array(blocks));
        }
        Value::Object(map)
    }

    /// Compact text form, e.g. `r:⟨{u},{v}⟩ u:⟨{a,b}⟩`.
    pub fn display(&self, tree: &PureTree) -> String {
        self.per_node
            .iter()
            .zip(tree.inner_nodes())
            .map(|(part, &x)| {
                let blocks: Vec<String> = part
                    .blocks
                    .iter()
                    .map(|b| {
                        let names: Vec<&str> = b.iter().map(|&c| tree.label(c)).collect();
                        format!("{{{}}}", names.join(","))
                    })
                    .collect();
                format!("{}:⟨{}⟩", tree.label(x), blocks.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Componentwise composition `beta ∘ gamma`.
pub fn compose(
    beta: &OrderedPartitionFamily,
    gamma: &OrderedPartitionFamily,
) -> Result<OrderedPartitionFamily> {
    if beta.per_node.len() != gamma.per_node.len() {
        return Err(Error::TreeMismatch);
    }
    let per_node = beta
        .per_node
        .iter()
        .zip(&gamma.per_node)
        .map(|(x, y)| x.compose(y))
        .collect::<Result<_>>()?;
    Ok(OrderedPartitionFamily { per_node })
}

/// Composition for elements already known to live over the same tree.
pub(crate) fn compose_same_tree(
    beta: &OrderedPartitionFamily,
    gamma: &OrderedPartitionFamily,
) -> OrderedPartitionFamily {
    OrderedPartitionFamily {
        per_node: beta
            .per_node
            .iter()
            .zip(&gamma.per_node)
            .map(|(x, y)| x.compose_unchecked(y))
            .collect(),
    }
}

/// The one-block family, which is a two-sided identity.
pub fn identity(tree: &PureTree) -> OrderedPartitionFamily {
    OrderedPartitionFamily {
        per_node: tree
            .inner_nodes()
            .iter()
            .map(|&x| OrderedPartition::one_block(tree.children(x)))
            .collect(),
    }
}

/// `β^E`: at each inner node, the E-related children form the first block and the
/// rest the second; an empty block is dropped.
pub fn beta_from_subset(tree: &PureTree, subset: &LeafSubset) -> OrderedPartitionFamily {
    let per_node = tree
        .inner_nodes()
        .iter()
        .map(|&x| {
            let (front, back): (Vec<NodeId>, Vec<NodeId>) = tree
                .children(x)
                .iter()
                .partition(|&&c| tree.e_related(subset, c));
            OrderedPartition {
                blocks: [front, back]
                    .into_iter()
                    .filter(|b| !b.is_empty())
                    .collect(),
            }
        })
        .collect();
    OrderedPartitionFamily { per_node }
}

pub fn support(beta: &OrderedPartitionFamily) -> PartitionFamily {
    PartitionFamily::from_parts_unchecked(
        beta.per_node
            .iter()
            .map(OrderedPartition::support)
            .collect(),
    )
}

/// The chamber corresponding to a local ordering.
pub fn embed(pi: &LocalOrdering) -> OrderedPartitionFamily {
    OrderedPartitionFamily {
        per_node: pi
            .per_node()
            .iter()
            .map(|o| OrderedPartition::singletons(o))
            .collect(),
    }
}

pub fn is_chamber(beta: &OrderedPartitionFamily) -> bool {
    beta.per_node
        .iter()
        .all(OrderedPartition::is_all_singletons)
}

/// Reads a chamber back as a local ordering.
pub fn chamber_ordering(tree: &PureTree, beta: &OrderedPartitionFamily) -> Option<LocalOrdering> {
    if !is_chamber(beta) {
        return None;
    }
    let per_node = beta
        .per_node
        .iter()
        .map(|p| p.blocks.iter().map(|b| b[0]).collect())
        .collect();
    LocalOrdering::new(tree, per_node).ok()
}

/// Face order: `beta ≤ gamma` iff `beta ∘ gamma = gamma`.
pub fn face_le(beta: &OrderedPartitionFamily, gamma: &OrderedPartitionFamily) -> bool {
    compose_same_tree(beta, gamma) == *gamma
}

fn check_size(what: &'static str, size: num_bigint::BigUint, cap: u64) -> Result<usize> {
    match size.to_u64() {
        Some(n) if n <= cap => Ok(n as usize),
        _ => Err(Error::CapExceeded {
            what,
            size: size.to_string(),
            cap,
        }),
    }
}

/// Every ordered partition of `ground`, as set partitions with each block order.
fn ordered_partitions(ground: &[usize]) -> Vec<OrderedPartition> {
    let mut out = Vec::new();
    for partition in set_partitions(ground.len()) {
        let blocks: Vec<Vec<usize>> = partition
            .iter()
            .map(|b| b.iter().map(|&i| ground[i]).collect())
            .collect();
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        loop {
            out.push(OrderedPartition {
                blocks: order.iter().map(|&i| blocks[i].clone()).collect(),
            });
            if !next_permutation(&mut order) {
                break;
            }
        }
    }
    out
}

/// All of `Part^ord(T)`, in mixed-radix order over inner nodes.
pub fn enumerate_semigroup(tree: &PureTree, cap: u64) -> Result<Vec<OrderedPartitionFamily>> {
    check_size(
        "ordered-partition semigroup",
        tree.stats().semigroup_size,
        cap,
    )?;
    let factors: Vec<Vec<OrderedPartition>> = tree
        .inner_nodes()
        .iter()
        .map(|&x| ordered_partitions(tree.children(x)))
        .collect();
    let mut out = vec![Vec::new()];
    for factor in &factors {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<OrderedPartition>| {
                factor.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|per_node| OrderedPartitionFamily { per_node })
        .collect())
}

/// The subsemigroup generated by `generators`, in discovery order.
pub fn closure(
    generators: &[OrderedPartitionFamily],
    cap: u64,
) -> Result<Vec<OrderedPartitionFamily>> {
    let mut elements: Vec<OrderedPartitionFamily> = Vec::new();
    let mut seen: HashSet<OrderedPartitionFamily> = HashSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            queue.push_back(elements.len());
            elements.push(g.clone());
        }
    }
    let n_gen = elements.len();
    // Every product is a word in the generators, so right-multiplying new elements
    // by generators reaches the whole subsemigroup.
    while let Some(i) = queue.pop_front() {
        for g in 0..n_gen {
            let product = compose(&elements[i], &elements[g])?;
            if seen.insert(product.clone()) {
                if elements.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: "semigroup closure",
                        size: format!(">{cap}"),
                        cap,
                    });
                }
                queue.push_back(elements.len());
                elements.push(product);
            }
        }
    }
    Ok(elements)
}

/// Chambers reachable from `start` by repeatedly left-multiplying by generators.
pub fn chamber_orbit(
    generators: &[OrderedPartitionFamily],
    start: &LocalOrdering,
) -> Result<HashSet<OrderedPartitionFamily>> {
    let first = embed(start);
    let mut seen = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([first]);
    while let Some(c) = queue.pop_front() {
        for g in generators {
            let next = compose(g, &c)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Outcome of a generation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub closure_size: usize,
    pub semigroup_size: usize,
    pub is_full_semigroup: bool,
    /// Chambers reached from the default ordering by the generators' left action.
    pub chambers_reached: usize,
    pub state_count: usize,
    pub chamber_coverage: bool,
}

pub fn closure_generates(
    tree: &PureTree,
    generators: &[OrderedPartitionFamily],
    cap: u64,
) -> Result<ClosureReport> {
    let semigroup_size = check_size(
        "ordered-partition semigroup",
        tree.stats().semigroup_size,
        cap,
    )?;
    let state_count = check_size("state space", tree.stats().state_count, cap)?;
    let closed = closure(generators, cap)?;
    let orbit = chamber_orbit(generators, &default_ordering(tree))?;
    Ok(ClosureReport {
        closure_size: closed.len(),
        semigroup_size,
        is_full_semigroup: closed.len() == semigroup_size,
        chambers_reached: orbit.len(),
        state_count,
        chamber_coverage: orbit.len() == state_count,
    })
}
