//! Probability distributions on leaf subsets with exact rational weights.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{LeafSubset, PureTree};

#[derive(Debug, Serialize, Deserialize)]
struct WeightFile {
    weights: Vec<WeightEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WeightEntry {
    subset: Vec<String>,
    weight: String,
}

/// Weights `w_E` keyed by leaf subset, summing to exactly 1.
///
/// Subsets absent from the map have weight 0. Entries iterate in the canonical subset
/// order (lexicographic on sorted leaf positions), which is also the sampling order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    entries: BTreeMap<LeafSubset, BigRational>,
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let invalid = || Error::InvalidWeight(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| invalid())?;
    let denom = BigInt::from_str(denom).map_err(|_| invalid())?;
    if denom.is_zero() {
        return Err(invalid());
    }
    Ok(BigRational::new(numer, denom))
}

impl WeightDistribution {
    pub fn new(tree: &PureTree, entries: Vec<(LeafSubset, BigRational)>) -> Result<Self> {
        let leaf_count = tree.leaves().len();
        let mut map = BTreeMap::new();
        let mut total = BigRational::zero();
        for (subset, weight) in entries {
            if subset.positions().any(|p| p >= leaf_count) {
                return Err(Error::TreeMismatch);
            }
            if weight.is_negative() {
                return Err(Error::NegativeWeight(weight.to_string()));
            }
            total += &weight;
            let label = tree.format_subset(&subset);
            if map.insert(subset, weight).is_some() {
                return Err(Error::DuplicateSubset(label));
            }
        }
        if !total.is_one() {
            return Err(Error::WeightSum(total.to_string()));
        }
        Ok(WeightDistribution { entries: map })
    }

    /// Parses the JSON distribution format.
    pub fn parse(tree: &PureTree, text: &str) -> Result<Self> {
        let file: WeightFile = serde_json::from_str(text)?;
        let entries = file
            .weights
            .iter()
            .map(|entry| {
                Ok((
                    tree.leaf_subset(&entry.subset)?,
                    parse_rational(&entry.weight)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(tree, entries)
    }

    pub fn to_json(&self, tree: &PureTree) -> String {
        let file = WeightFile {
            weights: self
                .entries
                .iter()
                .map(|(subset, weight)| WeightEntry {
                    subset: tree
                        .subset_labels(subset)
                        .into_iter()
                        .map(String::from)
                        .collect(),
                    weight: weight.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("distribution serializes")
    }

    /// Weight `1/|L|` on each singleton.
    pub fn uniform_singletons(tree: &PureTree) -> Self {
        let n = tree.leaves().len();
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        WeightDistribution {
            entries: (0..n)
                .map(|p| (LeafSubset::from_positions([p]), w.clone()))
                .collect(),
        }
    }

    /// Equal weight on each of the given (distinct) subsets.
    pub fn uniform_over(tree: &PureTree, subsets: &[LeafSubset]) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::WeightSum("0".into()));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(subsets.len()));
        Self::new(
            tree,
            subsets.iter().map(|s| (s.clone(), w.clone())).collect(),
        )
    }

    /// Point mass on one subset.
    pub fn point_mass(tree: &PureTree, subset: LeafSubset) -> Result<Self> {
        Self::new(tree, vec![(subset, BigRational::one())])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LeafSubset, &BigRational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, subset: &LeafSubset) -> BigRational {
        self.entries
            .get(subset)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Subsets carrying positive weight.
    pub fn support(&self) -> Vec<LeafSubset> {
        self.entries
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// True when every positive weight sits on a one-element subset.
    pub fn is_singleton_supported(&self) -> bool {
        self.entries
            .iter()
            .all(|(s, w)| w.is_zero() || s.len() == 1)
    }

    /// Least common multiple of the weight denominators.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.entries
            .values()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }
}
