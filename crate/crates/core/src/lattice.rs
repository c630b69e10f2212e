//! The support lattice `Part(T)` of partition families.
//!
//! Orientation: `alpha ≤ beta` iff every block of `alpha` is a union of blocks of
//! `beta`. The bottom `0̂` is the one-block family and the top `1̂` the all-singletons
//! family.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::{factorial, set_partitions};
use crate::error::{Error, Result};
use crate::ordering::enumerate_orderings;
use crate::semigroup::{compose_same_tree, embed, support, OrderedPartitionFamily};
use crate::tree::{LeafSubset, PureTree};

/// An unordered set partition, canonicalized: sorted blocks listed by smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !block.iter().all(|e| seen.insert(*e)) {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
        }
        Ok(Self::from_blocks_unchecked(blocks))
    }

    pub(crate) fn from_blocks_unchecked(mut blocks: Vec<Vec<usize>>) -> Self {
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable();
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_set(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Every block of `self` is a union of blocks of `finer`, i.e. every block of
    /// `finer` sits inside one block of `self`.
    fn is_coarsening_of(&self, finer: &SetPartition) -> bool {
        finer.blocks.iter().all(|fb| {
            self.blocks
                .iter()
                .any(|b| fb.iter().all(|e| b.binary_search(e).is_ok()))
        })
    }
}

/// One set partition of `C_x` per inner node, aligned with `tree.inner_nodes()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionFamily {
    per_node: Vec<SetPartition>,
}

impl PartitionFamily {
    pub fn new(tree: &PureTree, per_node: Vec<SetPartition>) -> Result<Self> {
        if per_node.len() != tree.inner_nodes().len() {
            return Err(Error::TreeMismatch);
        }
        for (part, &x) in per_node.iter().zip(tree.inner_nodes()) {
            if part.ground_set() != tree.children(x) {
                return Err(Error::InvalidPartition(format!(
                    "partition at `{}` does not cover its children",
                    tree.label(x)
                )));
            }
        }
        Ok(PartitionFamily { per_node })
    }

    pub(crate) fn from_parts_unchecked(per_node: Vec<SetPartition>) -> Self {
        PartitionFamily { per_node }
    }

    pub fn per_node(&self) -> &[SetPartition] {
        &self.per_node
    }

    /// `1̂`: all singletons.
    pub fn finest(tree: &PureTree) -> Self {
        PartitionFamily {
            per_node: tree
                .inner_nodes()
                .iter()
                .map(|&x| SetPartition {
                    blocks: tree.children(x).iter().map(|&c| vec![c]).collect(),
                })
                .collect(),
        }
    }

    /// `0̂`: one block per node.
    pub fn coarsest(tree: &PureTree) -> Self {
        PartitionFamily {
            per_node: tree
                .inner_nodes()
                .iter()
                .map(|&x| SetPartition {
                    blocks: vec![tree.children(x).to_vec()],
                })
                .collect(),
        }
    }

    pub fn block_count(&self) -> usize {
        self.per_node.iter().map(|p| p.blocks.len()).sum()
    }

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
                format!("{}:{{{}}}", tree.label(x), blocks.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self, tree: &PureTree) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (part, &x) in self.per_node.iter().zip(tree.inner_nodes()) {
            let blocks = part
                .blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&c| serde_json::Value::from(tree.label(c)))
                        .collect()
                })
                .collect();
            map.insert(tree.label(x).to_string(), serde_json::Value::Array(blocks));
        }
        serde_json::Value::Object(map)
    }
}

/// `alpha ≤ beta`: at every node each block of `alpha` is a union of blocks of `beta`.
pub fn refines(alpha: &PartitionFamily, beta: &PartitionFamily) -> Result<bool> {
    if alpha.per_node.len() != beta.per_node.len() {
        return Err(Error::TreeMismatch);
    }
    let mut all = true;
    for (a, b) in alpha.per_node.iter().zip(&beta.per_node) {
        if a.ground_set() != b.ground_set() {
            return Err(Error::TreeMismatch);
        }
        all &= a.is_coarsening_of(b);
    }
    Ok(all)
}

fn refines_same_tree(alpha: &PartitionFamily, beta: &PartitionFamily) -> bool {
    alpha
        .per_node
        .iter()
        .zip(&beta.per_node)
        .all(|(a, b)| a.is_coarsening_of(b))
}

/// `α^E`: E-related children versus the rest at each node, dropping an empty block.
pub fn induced_partition(tree: &PureTree, subset: &LeafSubset) -> PartitionFamily {
    let per_node = tree
        .inner_nodes()
        .iter()
        .map(|&x| {
            let (related, rest): (Vec<_>, Vec<_>) = tree
                .children(x)
                .iter()
                .partition(|&&c| tree.e_related(subset, c));
            SetPartition::from_blocks_unchecked(
                [related, rest]
                    .into_iter()
                    .filter(|b| !b.is_empty())
                    .collect(),
            )
        })
        .collect();
    PartitionFamily { per_node }
}

/// `E` is α-compatible iff at every node each block of `α_x` is entirely E-related or
/// entirely unrelated (so `α^E ≤ α`).
pub fn alpha_compatible(
    tree: &PureTree,
    alpha: &PartitionFamily,
    subset: &LeafSubset,
) -> Result<bool> {
    if alpha.per_node.len() != tree.inner_nodes().len() {
        return Err(Error::TreeMismatch);
    }
    Ok(compatible_unchecked(tree, alpha, subset))
}

pub(crate) fn compatible_unchecked(
    tree: &PureTree,
    alpha: &PartitionFamily,
    subset: &LeafSubset,
) -> bool {
    alpha.per_node.iter().all(|part| {
        part.blocks.iter().all(|block| {
            let first = tree.e_related(subset, block[0]);
            block[1..]
                .iter()
                .all(|&c| tree.e_related(subset, c) == first)
        })
    })
}

pub(crate) fn lattice_size_within(tree: &PureTree, cap: u64) -> Result<usize> {
    let size = tree.stats().lattice_size;
    match size.to_u64() {
        Some(n) if n <= cap => Ok(n as usize),
        _ => Err(Error::CapExceeded {
            what: "partition lattice",
            size: size.to_string(),
            cap,
        }),
    }
}

/// All of `Part(T)`: mixed radix over inner nodes, each factor in restricted-growth order.
pub fn enumerate_partition_families(tree: &PureTree, cap: u64) -> Result<Vec<PartitionFamily>> {
    lattice_size_within(tree, cap)?;
    let mut out = vec![Vec::new()];
    for &x in tree.inner_nodes() {
        let children = tree.children(x);
        let factor: Vec<SetPartition> = set_partitions(children.len())
            .into_iter()
            .map(|p| {
                SetPartition::from_blocks_unchecked(
                    p.into_iter()
                        .map(|b| b.into_iter().map(|i| children[i]).collect())
                        .collect(),
                )
            })
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<SetPartition>| {
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
        .map(|per_node| PartitionFamily { per_node })
        .collect())
}

/// `∏_x ∏_{B ∈ α_x} (|B| - 1)!`.
pub fn mobius_abs_product(alpha: &PartitionFamily) -> BigUint {
    alpha
        .per_node
        .iter()
        .flat_map(|p| p.blocks.iter())
        .fold(BigUint::one(), |acc, b| acc * factorial(b.len() - 1))
}

/// `μ(γ, 1̂)` for every `γ` in `lattice`, by the recursion
/// `μ(γ, 1̂) = -Σ_{γ < δ ≤ 1̂} μ(δ, 1̂)`.
///
/// Uses only the refinement order; no closed form.
pub fn mobius_to_top(lattice: &[PartitionFamily]) -> Vec<BigInt> {
    // A strictly finer family has strictly more blocks, so descending block count is
    // a linear extension of the reversed order.
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lattice[i].block_count()));
    let mut mu = vec![BigInt::zero(); lattice.len()];
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 {
            mu[i] = BigInt::one();
            continue;
        }
        let mut sum = BigInt::zero();
        for &j in &order[..pos] {
            if lattice[j].block_count() > lattice[i].block_count()
                && refines_same_tree(&lattice[i], &lattice[j])
            {
                sum += &mu[j];
            }
        }
        mu[i] = -sum;
    }
    mu
}

/// Exact `μ(alpha, 1̂)` computed over the enumerated interval `[alpha, 1̂]`.
pub fn mobius_recursive(tree: &PureTree, alpha: &PartitionFamily, cap: u64) -> Result<BigInt> {
    let lattice = enumerate_partition_families(tree, cap)?;
    if !lattice.contains(alpha) {
        return Err(Error::TreeMismatch);
    }
    let interval: Vec<PartitionFamily> = lattice
        .into_iter()
        .filter(|gamma| refines_same_tree(alpha, gamma))
        .collect();
    let mu = mobius_to_top(&interval);
    let at = interval.iter().position(|g| g == alpha).unwrap();
    Ok(mu[at].clone())
}

/// Number of chambers `c` with `beta ≤ c` in the face order, computed directly and as
/// `Σ_{α ≥ supp(β)} |μ(α, 1̂)|`. Returns the common value, or a verification error
/// when the two disagree.
pub fn count_chambers_above(
    tree: &PureTree,
    beta: &OrderedPartitionFamily,
    cap: u64,
) -> Result<BigUint> {
    let chambers = enumerate_orderings(tree, cap)?;
    let direct = chambers
        .iter()
        .map(embed)
        .filter(|c| compose_same_tree(beta, c) == *c)
        .count();
    let base = support(beta);
    let zaslavsky = enumerate_partition_families(tree, cap)?
        .iter()
        .filter(|alpha| refines_same_tree(&base, alpha))
        .map(mobius_abs_product)
        .sum::<BigUint>();
    if BigUint::from(direct) != zaslavsky {
        return Err(Error::Verification(format!(
            "chambers above {}: direct count {direct}, Möbius sum {zaslavsky}",
            beta.display(tree)
        )));
    }
    Ok(zaslavsky)
}

/// True when `|μ|` from the recursion equals the factorial product for every family.
pub fn mobius_values_agree(lattice: &[PartitionFamily]) -> Option<usize> {
    let mu = mobius_to_top(lattice);
    lattice
        .iter()
        .zip(&mu)
        .position(|(alpha, m)| m.abs().to_biguint() != Some(mobius_abs_product(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{beta_from_subset, enumerate_semigroup, identity};
    use crate::tree::NodeSpec;

    fn t1() -> PureTree {
        PureTree::from_spec(&NodeSpec::node(
            "r",
            vec![
                NodeSpec::leaf("a"),
                NodeSpec::leaf("b"),
                NodeSpec::leaf("c"),
            ],
        ))
        .unwrap()
    }

    fn t2() -> PureTree {
        PureTree::from_spec(&NodeSpec::node(
            "r",
            vec![
                NodeSpec::node("u", vec![NodeSpec::leaf("a"), NodeSpec::leaf("b")]),
                NodeSpec::node("v", vec![NodeSpec::leaf("c"), NodeSpec::leaf("d")]),
            ],
        ))
        .unwrap()
    }

    fn fam(tree: &PureTree, parts: &[&[&[&str]]]) -> PartitionFamily {
        let per_node = parts
            .iter()
            .map(|blocks| {
                SetPartition::new(
                    blocks
                        .iter()
                        .map(|b| b.iter().map(|l| tree.node(l).unwrap()).collect())
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        PartitionFamily::new(tree, per_node).unwrap()
    }

    #[test]
    fn refinement_examples() {
        let t = t1();
        let bottom = PartitionFamily::coarsest(&t);
        let top = PartitionFamily::finest(&t);
        let x = fam(&t, &[&[&["a"], &["b", "c"]]]);
        let y = fam(&t, &[&[&["b"], &["a", "c"]]]);
        assert!(refines(&bottom, &x).unwrap());
        assert!(refines(&x, &top).unwrap());
        assert!(!refines(&x, &y).unwrap());
        assert!(!refines(&y, &x).unwrap());
        assert!(!refines(&top, &x).unwrap());
        assert!(matches!(
            refines(&x, &PartitionFamily::finest(&t2())),
            Err(Error::TreeMismatch)
        ));
    }

    #[test]
    fn induced_partition_examples() {
        let t = t2();
        let a = t.leaf_subset(&["a"]).unwrap();
        assert_eq!(
            induced_partition(&t, &a),
            fam(&t, &[&[&["u"], &["v"]], &[&["a"], &["b"]], &[&["c", "d"]]])
        );
        assert_eq!(
            induced_partition(&t, &LeafSubset::empty()),
            PartitionFamily::coarsest(&t)
        );
        for e in t.all_leaf_subsets().unwrap() {
            assert_eq!(
                induced_partition(&t, &e),
                support(&beta_from_subset(&t, &e))
            );
        }
    }

    #[test]
    fn compatibility_examples() {
        let t = t1();
        let x = fam(&t, &[&[&["a"], &["b", "c"]]]);
        let sub = |l: &[&str]| t.leaf_subset(l).unwrap();
        assert!(alpha_compatible(&t, &x, &sub(&["a"])).unwrap());
        assert!(!alpha_compatible(&t, &x, &sub(&["b"])).unwrap());
        for e in t.all_leaf_subsets().unwrap() {
            assert!(alpha_compatible(&t, &PartitionFamily::finest(&t), &e).unwrap());
        }
        let bottom = PartitionFamily::coarsest(&t2());
        let t = t2();
        assert!(!alpha_compatible(&t, &bottom, &t.leaf_subset(&["a"]).unwrap()).unwrap());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_partition_families(&t1(), 100).unwrap().len(), 5);
        assert_eq!(enumerate_partition_families(&t2(), 100).unwrap().len(), 8);
        let single = PureTree::from_spec(&NodeSpec::leaf("r")).unwrap();
        assert_eq!(enumerate_partition_families(&single, 100).unwrap().len(), 1);
        assert!(enumerate_partition_families(&t1(), 4).is_err());
    }

    #[test]
    fn mobius_examples() {
        let t = t1();
        assert_eq!(
            mobius_abs_product(&PartitionFamily::finest(&t)),
            BigUint::one()
        );
        assert_eq!(
            mobius_abs_product(&PartitionFamily::coarsest(&t)),
            BigUint::from(2u32)
        );
        assert_eq!(
            mobius_recursive(&t, &PartitionFamily::finest(&t), 100).unwrap(),
            BigInt::one()
        );
        let x = fam(&t, &[&[&["a"], &["b", "c"]]]);
        assert_eq!(mobius_recursive(&t, &x, 100).unwrap(), BigInt::from(-1));
        assert_eq!(
            mobius_recursive(&t, &PartitionFamily::coarsest(&t), 100).unwrap(),
            BigInt::from(2)
        );
        for alpha in enumerate_partition_families(&t2(), 100).unwrap() {
            assert_eq!(mobius_abs_product(&alpha), BigUint::one());
        }
    }

    #[test]
    fn chamber_counts() {
        let t = t1();
        assert_eq!(
            count_chambers_above(&t, &identity(&t), 100).unwrap(),
            BigUint::from(6u32)
        );
        let beta_a = beta_from_subset(&t, &t.leaf_subset(&["a"]).unwrap());
        assert_eq!(
            count_chambers_above(&t, &beta_a, 100).unwrap(),
            BigUint::from(2u32)
        );
        for beta in enumerate_semigroup(&t, 100).unwrap() {
            let n = count_chambers_above(&t, &beta, 100).unwrap();
            if crate::semigroup::is_chamber(&beta) {
                assert_eq!(n, BigUint::one());
            }
        }
    }
}
