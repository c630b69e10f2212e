//! Brute-force reference implementations used to cross-check the library.
//!
//! Only tree navigation (root, children, labels) is borrowed from the library; states,
//! moves, matrices, partition lattices, eigenvalues and Möbius values are rebuilt here
//! from first principles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use tree_shuffle::tree::NodeSpec;
use tree_shuffle::{NodeId, PureTree, WeightDistribution};

pub type State = Vec<Vec<NodeId>>;
/// A family of set partitions, one per inner node, each block a sorted list of children.
pub type Family = Vec<Vec<Vec<NodeId>>>;

pub fn leaf(id: &str) -> NodeSpec {
    NodeSpec::leaf(id)
}

pub fn node(id: &str, children: Vec<NodeSpec>) -> NodeSpec {
    NodeSpec::node(id, children)
}

pub fn tree(spec: NodeSpec) -> PureTree {
    PureTree::from_spec(&spec).expect("valid corpus tree")
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn dist(t: &PureTree, entries: &[(&[&str], BigRational)]) -> WeightDistribution {
    let entries = entries
        .iter()
        .map(|(labels, w)| (t.leaf_subset(labels).expect("leaf labels"), w.clone()))
        .collect();
    WeightDistribution::new(t, entries).expect("valid corpus distribution")
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn set_partitions(items: &[NodeId]) -> Vec<Vec<Vec<NodeId>>> {
    let Some((&last, init)) = items.split_last() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(init) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(last);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![last]);
        out.push(q);
    }
    out
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}

pub struct Oracle<'a> {
    pub tree: &'a PureTree,
    pub inner: Vec<NodeId>,
    below: HashMap<NodeId, BTreeSet<String>>,
    pub weights: Vec<(BTreeSet<String>, BigRational)>,
}

impl<'a> Oracle<'a> {
    pub fn new(tree: &'a PureTree, dist: &WeightDistribution) -> Self {
        let mut below = HashMap::new();
        fn walk(
            t: &PureTree,
            x: NodeId,
            below: &mut HashMap<NodeId, BTreeSet<String>>,
        ) -> BTreeSet<String> {
            let set = if t.children(x).is_empty() {
                BTreeSet::from([t.label(x).to_string()])
            } else {
                t.children(x)
                    .iter()
                    .flat_map(|&c| walk(t, c, below))
                    .collect()
            };
            below.insert(x, set.clone());
            set
        }
        walk(tree, tree.root(), &mut below);
        let weights = dist
            .entries()
            .map(|(e, w)| {
                let labels = tree
                    .subset_labels(e)
                    .into_iter()
                    .map(str::to_string)
                    .collect();
                (labels, w.clone())
            })
            .collect();
        Oracle {
            tree,
            inner: tree.inner_nodes().to_vec(),
            below,
            weights,
        }
    }

    pub fn related(&self, e: &BTreeSet<String>, x: NodeId) -> bool {
        !self.below[&x].is_disjoint(e)
    }

    pub fn states(&self) -> Vec<State> {
        let choices: Vec<Vec<Vec<NodeId>>> = self
            .inner
            .iter()
            .map(|&x| permutations(self.tree.children(x)))
            .collect();
        cartesian(&choices)
    }

    pub fn state_count(&self) -> BigUint {
        self.inner
            .iter()
            .map(|&x| factorial(self.tree.children(x).len()))
            .product()
    }

    pub fn apply_move(&self, state: &State, e: &BTreeSet<String>) -> State {
        state
            .iter()
            .map(|order| {
                let mut front: Vec<NodeId> = order
                    .iter()
                    .copied()
                    .filter(|&c| self.related(e, c))
                    .collect();
                front.extend(order.iter().copied().filter(|&c| !self.related(e, c)));
                front
            })
            .collect()
    }

    /// Sparse rows of the transition matrix over `states()`.
    pub fn matrix(&self) -> (Vec<State>, Vec<BTreeMap<usize, BigRational>>) {
        let states = self.states();
        let index: HashMap<&State, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let rows = states
            .iter()
            .map(|s| {
                let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (e, w) in &self.weights {
                    let j = index[&self.apply_move(s, e)];
                    *row.entry(j).or_insert_with(BigRational::zero) += w;
                }
                row
            })
            .collect();
        (states, rows)
    }

    pub fn lattice(&self) -> Vec<Family> {
        let choices: Vec<Vec<Vec<Vec<NodeId>>>> = self
            .inner
            .iter()
            .map(|&x| {
                set_partitions(self.tree.children(x))
                    .into_iter()
                    .map(|mut p| {
                        for b in &mut p {
                            b.sort_unstable();
                        }
                        p.sort();
                        p
                    })
                    .collect()
            })
            .collect();
        cartesian(&choices)
    }

    pub fn compatible(&self, alpha: &Family, e: &BTreeSet<String>) -> bool {
        alpha.iter().flatten().all(|block| {
            let first = self.related(e, block[0]);
            block.iter().all(|&c| self.related(e, c) == first)
        })
    }

    pub fn eigenvalue(&self, alpha: &Family) -> BigRational {
        self.weights
            .iter()
            .filter(|(e, _)| self.compatible(alpha, e))
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn multiplicity(alpha: &Family) -> BigUint {
        alpha
            .iter()
            .flatten()
            .map(|b| factorial(b.len() - 1))
            .product()
    }

    pub fn aggregated_spectrum(&self) -> BTreeMap<BigRational, BigUint> {
        let mut out = BTreeMap::new();
        for alpha in self.lattice() {
            *out.entry(self.eigenvalue(&alpha))
                .or_insert_with(BigUint::zero) += Self::multiplicity(&alpha);
        }
        out
    }

    pub fn separating(&self) -> bool {
        let support: Vec<&BTreeSet<String>> = self
            .weights
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(e, _)| e)
            .collect();
        self.inner.iter().all(|&x| {
            let ch = self.tree.children(x);
            (0..ch.len()).all(|i| {
                (i + 1..ch.len()).all(|j| {
                    support
                        .iter()
                        .any(|e| self.related(e, ch[i]) != self.related(e, ch[j]))
                })
            })
        })
    }
}

/// `alpha ≤ gamma`: every block of `gamma` lies inside a block of `alpha`.
pub fn below(alpha: &Family, gamma: &Family) -> bool {
    alpha.iter().zip(gamma).all(|(a, g)| {
        g.iter()
            .all(|gb| a.iter().any(|ab| gb.iter().all(|c| ab.contains(c))))
    })
}

/// `μ(α, 1̂)` for every family, by downward recursion from the top element.
pub fn mobius_to_top(lattice: &[Family]) -> Vec<BigInt> {
    let blocks = |f: &Family| f.iter().map(Vec::len).sum::<usize>();
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(blocks(&lattice[i])));
    let mut mu = vec![BigInt::zero(); lattice.len()];
    for (k, &i) in order.iter().enumerate() {
        if k == 0 {
            mu[i] = BigInt::one();
            continue;
        }
        let s: BigInt = order[..k]
            .iter()
            .filter(|&&j| below(&lattice[i], &lattice[j]) && lattice[i] != lattice[j])
            .map(|&j| mu[j].clone())
            .sum();
        mu[i] = -s;
    }
    mu
}

/// Least common multiple of all weight denominators.
pub fn denominator(weights: &[(BTreeSet<String>, BigRational)]) -> BigInt {
    weights.iter().fold(BigInt::one(), |acc, (_, w)| {
        num_integer::lcm(acc, w.denom().clone())
    })
}

fn scaled_rows(rows: &[BTreeMap<usize, BigRational>], d: &BigInt) -> Vec<Vec<(usize, BigInt)>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|(&j, p)| {
                    let v = p * BigRational::from_integer(d.clone());
                    assert!(v.is_integer());
                    (j, v.to_integer())
                })
                .collect()
        })
        .collect()
}

fn mul(v: &[BigInt], q: &[Vec<(usize, BigInt)>]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); v.len()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, qij) in &q[i] {
            out[*j] += vi * qij;
        }
    }
    out
}

/// `tr((dP)^k)` for `k = 0..=max_power`.
pub fn scaled_traces(
    rows: &[BTreeMap<usize, BigRational>],
    d: &BigInt,
    max_power: usize,
) -> Vec<BigInt> {
    let q = scaled_rows(rows, d);
    let n = q.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            let mut diag = vec![BigInt::one()];
            for _ in 0..max_power {
                v = mul(&v, &q);
                diag.push(v[i].clone());
            }
            diag
        })
        .reduce(
            || vec![BigInt::zero(); max_power + 1],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        )
}

/// `d^k Σ m ε^k` for `k = 0..=max_power`.
pub fn scaled_moments(
    spectrum: &BTreeMap<BigRational, BigUint>,
    d: &BigInt,
    max_power: usize,
) -> Vec<BigInt> {
    (0..=max_power)
        .map(|k| {
            let dk = BigRational::from_integer(num_traits::pow(d.clone(), k));
            let s: BigRational = spectrum
                .iter()
                .map(|(e, m)| {
                    num_traits::pow(e.clone(), k)
                        * BigRational::from_integer(BigInt::from(m.clone()))
                })
                .sum();
            let v = s * dk;
            assert!(v.is_integer());
            v.to_integer()
        })
        .collect()
}

/// True when `∏ (P − εI)` over the given eigenvalues is the zero matrix.
pub fn product_vanishes(
    rows: &[BTreeMap<usize, BigRational>],
    d: &BigInt,
    eigenvalues: &[BigRational],
) -> bool {
    let q = scaled_rows(rows, d);
    let n = q.len();
    (0..n).into_par_iter().all(|i| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        for e in eigenvalues {
            // denom(ε)·d·(P − εI) = denom(ε)·Q − numer(ε)·d·I, an integer matrix.
            let shift = e.numer() * d;
            let mut next: Vec<BigInt> = mul(&v, &q).into_iter().map(|x| x * e.denom()).collect();
            for (x, vi) in next.iter_mut().zip(&v) {
                *x -= vi * &shift;
            }
            v = next;
        }
        v.iter().all(Zero::is_zero)
    })
}
