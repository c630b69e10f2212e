//! Transition matrices of the tree shuffle and their closed-form spectra.
//!
//! The eigenvalues are indexed by partition families `α`: `ε_α` is the total weight
//! of the α-compatible subsets and its multiplicity is `∏_x ∏_{B ∈ α_x} (|B| - 1)!`.
//! Everything here is exact rational arithmetic.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::derangement;
use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::exact::{power_traces, product_of_shifts_witness, IntSparse};
use crate::lattice::{
    compatible_unchecked, enumerate_partition_families, mobius_abs_product, PartitionFamily,
};
use crate::ordering::{enumerate_orderings, ordering_index, LocalOrdering, MovePlan};
use crate::tree::{LeafSubset, NodeId, PureTree};
use crate::Limits;

/// The exact transition matrix `P_w`, rows and columns in canonical state order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    states: Vec<LocalOrdering>,
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl TransitionMatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn states(&self) -> &[LocalOrdering] {
        &self.states
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        match self.rows[i].binary_search_by_key(&j, |(col, _)| *col) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        (0..self.order())
            .map(|i| (0..self.order()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, w)| w.clone()).sum())
            .collect()
    }

    /// Every row sums to 1 and no entry is negative.
    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().flatten().all(|(_, w)| !w.is_negative())
            && self.row_sums().iter().all(One::is_one)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.order()).map(|i| self.get(i, i)).sum()
    }

    /// `v · P`.
    pub fn left_mul(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.order() {
            return Err(Error::LengthMismatch(v.len(), self.order()));
        }
        let mut out = vec![BigRational::zero(); self.order()];
        for (vi, row) in v.iter().zip(&self.rows) {
            if vi.is_zero() {
                continue;
            }
            for (j, w) in row {
                out[*j] += vi * w;
            }
        }
        Ok(out)
    }

    pub fn common_denominator(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()))
    }

    /// `scale · P` as an integer matrix; `scale` must clear every denominator.
    fn scaled(&self, scale: &BigInt) -> IntSparse {
        IntSparse::new(
            self.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(j, w)| {
                            (
                                *j,
                                (w * BigRational::from_integer(scale.clone())).to_integer(),
                            )
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Builds `P_w(π, π') = Σ_{E : E(π) = π'} w_E`.
pub fn transition_matrix(
    tree: &PureTree,
    dist: &WeightDistribution,
    max_states: u64,
) -> Result<TransitionMatrix> {
    let states = enumerate_orderings(tree, max_states)?;
    let moves: Vec<(MovePlan, &BigRational)> = dist
        .entries()
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| (MovePlan::new(tree, e), w))
        .collect();
    let rows = states
        .par_iter()
        .map(|pi| {
            let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (plan, w) in &moves {
                let j =
                    ordering_index(tree, &plan.apply(pi)).expect("moves stay in the state space");
                *row.entry(j).or_insert_with(BigRational::zero) += *w;
            }
            row.into_iter().collect()
        })
        .collect();
    Ok(TransitionMatrix { states, rows })
}

/// One eigenvalue of the closed form, attached to its partition family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumRow {
    pub alpha: PartitionFamily,
    pub eigenvalue: BigRational,
    pub multiplicity: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    rows: Vec<SpectrumRow>,
    aggregated: BTreeMap<BigRational, BigUint>,
}

impl SpectrumTable {
    fn from_rows(rows: Vec<SpectrumRow>) -> Self {
        let mut aggregated = BTreeMap::new();
        for row in &rows {
            *aggregated
                .entry(row.eigenvalue.clone())
                .or_insert_with(BigUint::zero) += &row.multiplicity;
        }
        SpectrumTable { rows, aggregated }
    }

    pub fn rows(&self) -> &[SpectrumRow] {
        &self.rows
    }

    /// Distinct eigenvalue → total multiplicity, ascending by value.
    pub fn aggregated(&self) -> &BTreeMap<BigRational, BigUint> {
        &self.aggregated
    }

    pub fn total_multiplicity(&self) -> BigUint {
        self.aggregated.values().sum()
    }

    pub fn multiplicity_of(&self, value: &BigRational) -> BigUint {
        self.aggregated
            .get(value)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }
}

/// `ε_α`: total weight of the α-compatible subsets.
pub fn eigenvalue_of(
    tree: &PureTree,
    dist: &WeightDistribution,
    alpha: &PartitionFamily,
) -> Result<BigRational> {
    if alpha.per_node().len() != tree.inner_nodes().len() {
        return Err(Error::TreeMismatch);
    }
    Ok(dist
        .entries()
        .filter(|(e, _)| compatible_unchecked(tree, alpha, e))
        .map(|(_, w)| w.clone())
        .sum())
}

/// The full closed-form spectrum, one row per partition family.
pub fn spectrum(
    tree: &PureTree,
    dist: &WeightDistribution,
    max_lattice: u64,
) -> Result<SpectrumTable> {
    let lattice = enumerate_partition_families(tree, max_lattice)?;
    let rows = lattice
        .into_par_iter()
        .map(|alpha| {
            let eigenvalue = eigenvalue_of(tree, dist, &alpha).expect("family from this tree");
            let multiplicity = mobius_abs_product(&alpha);
            SpectrumRow {
                alpha,
                eigenvalue,
                multiplicity,
            }
        })
        .collect();
    Ok(SpectrumTable::from_rows(rows))
}

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if passed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// No check failed (skipped checks do not count against the report).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Multiplicity census, trace identities `tr(P^k) = Σ m_α ε_α^k` for
/// `k = 0..=state_count`, and diagonalizability via `∏_{distinct ε} (P - εI) = 0`.
pub fn verify_spectral_identities(
    tree: &PureTree,
    dist: &WeightDistribution,
    limits: &Limits,
) -> Result<Report> {
    let matrix = transition_matrix(tree, dist, limits.max_states)?;
    let table = spectrum(tree, dist, limits.max_lattice)?;
    Ok(check_spectral_identities(&matrix, &table))
}

pub fn check_spectral_identities(matrix: &TransitionMatrix, table: &SpectrumTable) -> Report {
    let n = matrix.order();
    let mut checks = Vec::new();

    let total = table.total_multiplicity();
    checks.push(Check::new(
        "multiplicity census",
        total == BigUint::from(n),
        format!("Σ m_α = {total}, state count = {n}"),
    ));

    // Common scale clearing the denominators of P and of every eigenvalue.
    let scale = table
        .aggregated()
        .keys()
        .fold(matrix.common_denominator(), |acc, e| acc.lcm(e.denom()));
    let q = matrix.scaled(&scale);
    let scaled_eigs: Vec<(BigInt, BigInt)> = table
        .aggregated()
        .iter()
        .map(|(e, m)| {
            let value = (e * BigRational::from_integer(scale.clone())).to_integer();
            (value, BigInt::from(m.clone()))
        })
        .collect();

    let traces = power_traces(&q, n);
    let mismatch = traces.iter().enumerate().find(|(k, actual)| {
        let expected: BigInt = scaled_eigs.iter().map(|(e, m)| m * Pow::pow(e, *k)).sum();
        **actual != expected
    });
    checks.push(match mismatch {
        None => Check::new("trace identities", true, format!("k = 0..={n}")),
        Some((k, actual)) => {
            let scale_k = Pow::pow(&scale, k);
            Check::new(
                "trace identities",
                false,
                format!(
                    "k = {k}: tr(P^k) = {}, closed form gives {}",
                    BigRational::new(actual.clone(), scale_k.clone()),
                    BigRational::new(
                        scaled_eigs.iter().map(|(e, m)| m * Pow::pow(e, k)).sum(),
                        scale_k
                    )
                ),
            )
        }
    });

    let shifts: Vec<BigInt> = scaled_eigs.iter().map(|(e, _)| e.clone()).collect();
    checks.push(match product_of_shifts_witness(&q, &shifts) {
        None => Check::new(
            "diagonalizability",
            true,
            format!(
                "product over {} distinct eigenvalues vanishes",
                shifts.len()
            ),
        ),
        Some((i, j, v)) => Check::new(
            "diagonalizability",
            false,
            format!(
                "entry ({i}, {j}) of the product is {}",
                BigRational::new(v, Pow::pow(&scale, shifts.len()))
            ),
        ),
    });

    Report { checks }
}

/// One entry of the singleton-weight table, indexed by a choice of child subset per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonRow {
    /// `A_x ⊆ C_x` for each inner node, aligned with `tree.inner_nodes()`.
    pub active: Vec<Vec<NodeId>>,
    pub eigenvalue: BigRational,
    pub multiplicity: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonTable {
    pub rows: Vec<SingletonRow>,
    /// Distinct eigenvalue → total multiplicity, omitting zero multiplicities.
    pub aggregated: BTreeMap<BigRational, BigUint>,
}

/// Spectrum for singleton-supported weights, indexed by tuples `A = (A_x ⊆ C_x)`.
///
/// `λ_A` sums `w_{ℓ}` over leaves whose root path picks a child in `A_x` at every
/// inner ancestor `x`; the multiplicity is `∏_x d_{|C_x| - |A_x|}` with `d_m` the
/// derangement numbers.
pub fn singleton_spectrum(
    tree: &PureTree,
    dist: &WeightDistribution,
    cap: u64,
) -> Result<SingletonTable> {
    if let Some((e, _)) = dist.entries().find(|(e, w)| !w.is_zero() && e.len() != 1) {
        return Err(Error::NotSingletonSupported(tree.format_subset(e)));
    }
    let inner = tree.inner_nodes();
    let exponent: usize = inner.iter().map(|&x| tree.children(x).len()).sum();
    if exponent > 63 || (1u64 << exponent) > cap {
        return Err(Error::CapExceeded {
            what: "singleton index set",
            size: format!("2^{exponent}"),
            cap,
        });
    }
    let leaf_weights: Vec<(NodeId, BigRational)> = dist
        .entries()
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| (tree.leaves()[e.positions().next().unwrap()], w.clone()))
        .collect();
    let derangements: HashMap<usize, BigUint> = (0..=inner
        .iter()
        .map(|&x| tree.children(x).len())
        .max()
        .unwrap_or(0))
        .map(|m| (m, derangement(m)))
        .collect();

    let mut rows = Vec::with_capacity(1 << exponent);
    for mask in 0u64..(1u64 << exponent) {
        let mut active_flag = vec![false; tree.node_count()];
        let mut active = Vec::with_capacity(inner.len());
        let mut bit = 0;
        for &x in inner {
            let mut chosen = Vec::new();
            for &c in tree.children(x) {
                if mask >> bit & 1 == 1 {
                    active_flag[c] = true;
                    chosen.push(c);
                }
                bit += 1;
            }
            active.push(chosen);
        }
        let eigenvalue = leaf_weights
            .iter()
            .filter(|(leaf, _)| {
                std::iter::successors(Some(*leaf), |&n| tree.parent(n))
                    .take_while(|&n| tree.parent(n).is_some())
                    .all(|n| active_flag[n])
            })
            .map(|(_, w)| w.clone())
            .sum();
        let multiplicity = inner
            .iter()
            .zip(&active)
            .fold(BigUint::one(), |acc, (&x, a)| {
                acc * &derangements[&(tree.children(x).len() - a.len())]
            });
        rows.push(SingletonRow {
            active,
            eigenvalue,
            multiplicity,
        });
    }
    let mut aggregated = BTreeMap::new();
    for row in rows.iter().filter(|r| !r.multiplicity.is_zero()) {
        *aggregated
            .entry(row.eigenvalue.clone())
            .or_insert_with(BigUint::zero) += &row.multiplicity;
    }
    Ok(SingletonTable { rows, aggregated })
}

/// Two siblings that no subset in a support family tells apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiblingPair {
    pub parent: NodeId,
    pub left: NodeId,
    pub right: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub separating: bool,
    pub witness: Option<SiblingPair>,
}

/// A family is separating when every pair of distinct siblings is split by some member
/// (exactly one of the two is E-related).
pub fn is_separating(tree: &PureTree, support: &[LeafSubset]) -> Separation {
    for &x in tree.inner_nodes() {
        let children = tree.children(x);
        for (i, &y) in children.iter().enumerate() {
            for &z in &children[i + 1..] {
                let split = support
                    .iter()
                    .any(|e| tree.e_related(e, y) != tree.e_related(e, z));
                if !split {
                    return Separation {
                        separating: false,
                        witness: Some(SiblingPair {
                            parent: x,
                            left: y,
                            right: z,
                        }),
                    };
                }
            }
        }
    }
    Separation {
        separating: true,
        witness: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stationary {
    Unique(Vec<BigRational>),
    NotUnique {
        eigenvalue_one_multiplicity: BigUint,
    },
}

/// Exact stationary law when the positive-weight support is separating; otherwise the
/// total multiplicity of eigenvalue 1 from the closed form.
pub fn stationary_distribution(
    tree: &PureTree,
    dist: &WeightDistribution,
    limits: &Limits,
) -> Result<Stationary> {
    if !is_separating(tree, &dist.support()).separating {
        let table = spectrum(tree, dist, limits.max_lattice)?;
        return Ok(Stationary::NotUnique {
            eigenvalue_one_multiplicity: table.multiplicity_of(&BigRational::one()),
        });
    }
    let matrix = transition_matrix(tree, dist, limits.max_states)?;
    stationary_vector(&matrix).map(Stationary::Unique)
}

/// Solves `v · P = v`, `Σ v = 1` by exact Gauss–Jordan elimination, failing unless the
/// solution is unique.
pub fn stationary_vector(matrix: &TransitionMatrix) -> Result<Vec<BigRational>> {
    let n = matrix.order();
    // Rows 0..n: (P^T - I) v = 0; row n: Σ v = 1. Column n holds the right-hand side.
    let mut system = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for i in 0..n {
        for (j, w) in matrix.row(i) {
            system[*j][i] += w;
        }
    }
    for (i, row) in system.iter_mut().take(n).enumerate() {
        row[i] -= BigRational::one();
    }
    for slot in system[n].iter_mut() {
        *slot = BigRational::one();
    }

    let mut pivot_row = 0;
    for col in 0..n {
        let Some(p) = (pivot_row..=n).find(|&r| !system[r][col].is_zero()) else {
            return Err(Error::Verification(format!(
                "stationary vector is not unique (free column {col})"
            )));
        };
        system.swap(pivot_row, p);
        let inv = system[pivot_row][col].recip();
        for v in system[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = system[pivot_row].clone();
        for (r, row) in system.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot).skip(col) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivot_row += 1;
    }
    if !system[n][n].is_zero() {
        return Err(Error::Verification(
            "stationary system is inconsistent".into(),
        ));
    }
    Ok((0..n).map(|i| system[i][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::default_ordering;
    use crate::tree::NodeSpec;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

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

    fn agg(table: &SpectrumTable) -> Vec<(String, u64)> {
        table
            .aggregated()
            .iter()
            .rev()
            .map(|(e, m)| (e.to_string(), m.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn t1_matrix_entries() {
        let t = t1();
        let p = transition_matrix(&t, &WeightDistribution::uniform_singletons(&t), 100).unwrap();
        assert!(p.is_stochastic());
        for i in 0..6 {
            assert_eq!(p.get(i, i), q(1, 3));
        }
        let idx = |labels: &[&str]| {
            let order = labels.iter().map(|l| t.node(l).unwrap()).collect();
            ordering_index(&t, &LocalOrdering::new(&t, vec![order]).unwrap()).unwrap()
        };
        assert_eq!(p.get(0, idx(&["c", "a", "b"])), q(1, 3));
        assert_eq!(p.get(0, idx(&["b", "c", "a"])), q(0, 1));
        assert_eq!(p.trace(), q(2, 1));
    }

    #[test]
    fn empty_subset_gives_identity() {
        let t = t2();
        let d = WeightDistribution::point_mass(&t, LeafSubset::empty()).unwrap();
        let p = transition_matrix(&t, &d, 100).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(p.get(i, j), if i == j { q(1, 1) } else { q(0, 1) });
            }
        }
        let table = spectrum(&t, &d, 100).unwrap();
        assert!(table.rows().iter().all(|r| r.eigenvalue.is_one()));
        assert_eq!(agg(&table), [("1".to_string(), 8)]);
    }

    #[test]
    fn eigenvalue_examples() {
        let t = t1();
        let d = WeightDistribution::uniform_singletons(&t);
        assert_eq!(
            eigenvalue_of(&t, &d, &PartitionFamily::finest(&t)).unwrap(),
            q(1, 1)
        );
        let table = spectrum(&t, &d, 100).unwrap();
        let row = table
            .rows()
            .iter()
            .find(|r| r.alpha.display(&t) == "r:{{a},{b,c}}")
            .unwrap();
        assert_eq!(row.eigenvalue, q(1, 3));

        let t = t2();
        let d = WeightDistribution::uniform_singletons(&t);
        let row = spectrum(&t, &d, 100)
            .unwrap()
            .rows()
            .iter()
            .find(|r| r.alpha.display(&t) == "r:{{u},{v}} u:{{a},{b}} v:{{c,d}}")
            .cloned()
            .unwrap();
        assert_eq!(row.eigenvalue, q(1, 2));
    }

    #[test]
    fn spectrum_examples() {
        let t = t1();
        let table = spectrum(&t, &WeightDistribution::uniform_singletons(&t), 100).unwrap();
        assert_eq!(
            agg(&table),
            [("1".into(), 1), ("1/3".into(), 3), ("0".into(), 2)]
        );
        let t = t2();
        let table = spectrum(&t, &WeightDistribution::uniform_singletons(&t), 100).unwrap();
        assert_eq!(
            agg(&table),
            [("1".into(), 1), ("1/2".into(), 2), ("0".into(), 5)]
        );
    }

    #[test]
    fn spectral_identities_hold_on_small_trees() {
        let limits = Limits::default();
        for t in [t1(), t2()] {
            let report = verify_spectral_identities(
                &t,
                &WeightDistribution::uniform_singletons(&t),
                &limits,
            )
            .unwrap();
            assert!(report.all_passed(), "{report:?}");
        }
        let t = t1();
        let d = WeightDistribution::point_mass(&t, t.full_subset()).unwrap();
        assert!(verify_spectral_identities(&t, &d, &limits)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn wrong_spectrum_is_caught() {
        let t = t1();
        let d = WeightDistribution::uniform_singletons(&t);
        let matrix = transition_matrix(&t, &d, 100).unwrap();
        let mut rows = spectrum(&t, &d, 100).unwrap().rows().to_vec();
        rows[0].eigenvalue = q(1, 2);
        let report = check_spectral_identities(&matrix, &SpectrumTable::from_rows(rows));
        assert!(!report.all_passed());
        assert!(!report.get("trace identities").unwrap().passed());
    }

    #[test]
    fn singleton_table_examples() {
        let t = t1();
        let d = WeightDistribution::uniform_singletons(&t);
        let table = singleton_spectrum(&t, &d, 1 << 10).unwrap();
        for row in &table.rows {
            let k = row.active[0].len();
            let expected = [(q(0, 1), 2u32), (q(1, 3), 1), (q(2, 3), 0), (q(1, 1), 1)][k].clone();
            assert_eq!(
                (row.eigenvalue.clone(), row.multiplicity.clone()),
                (expected.0, BigUint::from(expected.1))
            );
        }
        assert_eq!(
            &table.aggregated,
            spectrum(&t, &d, 100).unwrap().aggregated()
        );

        let t = t2();
        let d = WeightDistribution::uniform_singletons(&t);
        let table = singleton_spectrum(&t, &d, 1 << 10).unwrap();
        let id = |l| t.node(l).unwrap();
        let row = table
            .rows
            .iter()
            .find(|r| r.active == vec![vec![id("u"), id("v")], vec![id("a"), id("b")], vec![]])
            .unwrap();
        assert_eq!(
            (row.eigenvalue.clone(), row.multiplicity.clone()),
            (q(1, 2), BigUint::one())
        );
        assert!(table
            .rows
            .iter()
            .filter(|r| r
                .active
                .iter()
                .zip(t.inner_nodes())
                .any(|(a, &x)| a.len() + 1 == t.children(x).len()))
            .all(|r| r.multiplicity.is_zero()));
    }

    #[test]
    fn singleton_table_rejects_other_weights() {
        let t = t1();
        let d = WeightDistribution::point_mass(&t, t.full_subset()).unwrap();
        assert!(matches!(
            singleton_spectrum(&t, &d, 1 << 10),
            Err(Error::NotSingletonSupported(_))
        ));
    }

    #[test]
    fn separating_examples() {
        let t = t1();
        let s = |l: &[&str]| t.leaf_subset(l).unwrap();
        let result = is_separating(&t, &[s(&["a"])]);
        assert!(!result.separating);
        let w = result.witness.unwrap();
        assert_eq!(
            (t.label(w.parent), t.label(w.left), t.label(w.right)),
            ("r", "b", "c")
        );
        assert!(is_separating(&t, &[s(&["a"]), s(&["b"])]).separating);
        let t = t2();
        let s = |l: &[&str]| t.leaf_subset(l).unwrap();
        assert!(is_separating(&t, &[s(&["a"]), s(&["c"])]).separating);
    }

    #[test]
    fn stationary_examples() {
        let limits = Limits::default();
        let t = t1();
        let Stationary::Unique(v) =
            stationary_distribution(&t, &WeightDistribution::uniform_singletons(&t), &limits)
                .unwrap()
        else {
            panic!("expected a unique stationary law");
        };
        assert!(v.iter().all(|x| *x == q(1, 6)));

        let skewed = WeightDistribution::new(
            &t,
            vec![
                (t.leaf_subset(&["a"]).unwrap(), q(1, 2)),
                (t.leaf_subset(&["b"]).unwrap(), q(1, 3)),
                (t.leaf_subset(&["c"]).unwrap(), q(1, 6)),
            ],
        )
        .unwrap();
        let Stationary::Unique(v) = stationary_distribution(&t, &skewed, &limits).unwrap() else {
            panic!("expected a unique stationary law");
        };
        let start = ordering_index(&t, &default_ordering(&t)).unwrap();
        assert_eq!(v[start], q(1, 3));

        let absorbing = WeightDistribution::point_mass(&t, t.leaf_subset(&["a"]).unwrap()).unwrap();
        assert_eq!(
            stationary_distribution(&t, &absorbing, &limits).unwrap(),
            Stationary::NotUnique {
                eigenvalue_one_multiplicity: BigUint::from(2u32)
            }
        );
    }

    #[test]
    fn stationary_vector_fails_for_reducible_chain() {
        let t = t1();
        let absorbing = WeightDistribution::point_mass(&t, t.leaf_subset(&["a"]).unwrap()).unwrap();
        let p = transition_matrix(&t, &absorbing, 100).unwrap();
        assert!(matches!(stationary_vector(&p), Err(Error::Verification(_))));
    }
}
