//! Seeded Monte Carlo simulation of the shuffle.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)` on stream `stream`.
//! Each step draws one `u64` value `u` and selects the first stored subset `E_k`
//! (canonical subset order) whose cumulative weight `c_k` satisfies
//! `u / 2^64 < c_k`. The comparison is exact: `u < ceil(c_k · 2^64)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde_json::{json, Value};

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::ordering::{
    default_ordering, enumerate_orderings, ordering_index, LocalOrdering, MovePlan,
};
use crate::tree::PureTree;

/// A fresh generator for `(seed, stream)`.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Inverse-CDF sampler over a distribution's stored subsets.
#[derive(Debug, Clone)]
pub struct Sampler {
    thresholds: Vec<u128>,
    plans: Vec<MovePlan>,
}

impl Sampler {
    pub fn new(tree: &PureTree, dist: &WeightDistribution) -> Self {
        let two_64 = BigInt::from(1u128 << 64);
        let mut cumulative = BigRational::zero();
        let mut thresholds = Vec::with_capacity(dist.len());
        let mut plans = Vec::with_capacity(dist.len());
        for (subset, weight) in dist.entries() {
            cumulative += weight;
            let scaled = &cumulative * BigRational::from_integer(two_64.clone());
            let (q, r) = scaled.numer().div_rem(scaled.denom());
            let ceil = if r.is_positive() { q + 1 } else { q };
            thresholds.push(ceil.to_u128().expect("cumulative weight is at most 1"));
            plans.push(MovePlan::new(tree, subset));
        }
        Sampler { thresholds, plans }
    }

    /// Index of the subset selected by the draw `u`.
    pub fn select(&self, u: u64) -> usize {
        let u = u as u128;
        self.thresholds.partition_point(|&t| t <= u)
    }

    pub fn step(&self, pi: &LocalOrdering, rng: &mut ChaCha8Rng) -> LocalOrdering {
        self.plans[self.select(rng.next_u64())].apply(pi)
    }
}

/// One step of the walk: sample `E` with probability `w_E` and return `E(pi)`.
pub fn step(
    tree: &PureTree,
    pi: &LocalOrdering,
    dist: &WeightDistribution,
    rng: &mut ChaCha8Rng,
) -> LocalOrdering {
    Sampler::new(tree, dist).step(pi, rng)
}

/// Simulation parameters. `steps` counts all moves; the states after moves
/// `burn_in + 1 ..= steps` are tallied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub seed: u64,
    pub stream: u64,
    pub steps: u64,
    pub burn_in: u64,
}

impl ChainConfig {
    pub fn new(seed: u64, steps: u64, burn_in: u64) -> Self {
        ChainConfig {
            seed,
            stream: 0,
            steps,
            burn_in,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRun {
    pub seed: u64,
    pub stream: u64,
    pub steps: u64,
    pub burn_in: u64,
    pub state_count: usize,
    /// Visit counts by canonical state index.
    pub counts: BTreeMap<usize, u64>,
    pub final_state: usize,
}

impl ChainRun {
    pub fn tallied(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Empirical frequencies over all states, as exact rationals.
    pub fn frequencies(&self) -> Vec<BigRational> {
        let total = BigInt::from(self.tallied());
        (0..self.state_count)
            .map(|i| {
                let c = self.counts.get(&i).copied().unwrap_or(0);
                BigRational::new(BigInt::from(c), total.clone())
            })
            .collect()
    }

    /// Report with counts keyed by serialized ordering, plus the TV distance to
    /// `exact` when provided.
    pub fn report(&self, tree: &PureTree, exact: Option<&[BigRational]>) -> Result<Value> {
        let mut counts = serde_json::Map::new();
        for (&i, &c) in &self.counts {
            let pi = crate::ordering::index_ordering(tree, i)?;
            counts.insert(
                i.to_string(),
                json!({ "ordering": pi.to_json(tree), "count": c }),
            );
        }
        let mut report = json!({
            "seed": self.seed,
            "stream": self.stream,
            "steps": self.steps,
            "burn_in": self.burn_in,
            "tallied": self.tallied(),
            "counts": Value::Object(counts),
        });
        if let Some(exact) = exact {
            let tv = tv_distance(&self.frequencies(), exact)?;
            report["tv_distance"] = Value::from(tv.to_string());
            report["tv_distance_approx"] = Value::from(tv.to_f64().unwrap_or(f64::NAN));
        }
        Ok(report)
    }
}

/// Runs the chain from the default ordering.
pub fn run_chain(
    tree: &PureTree,
    dist: &WeightDistribution,
    config: ChainConfig,
    max_states: u64,
) -> Result<ChainRun> {
    run_chain_from(tree, dist, &default_ordering(tree), config, max_states)
}

/// Runs the chain from `start`, tallying canonical state indices.
///
/// Moves are tabulated once per state (`next[state][subset]`), so each step costs
/// one draw and one table lookup.
pub fn run_chain_from(
    tree: &PureTree,
    dist: &WeightDistribution,
    start: &LocalOrdering,
    config: ChainConfig,
    max_states: u64,
) -> Result<ChainRun> {
    if config.steps <= config.burn_in {
        return Err(Error::InvalidCounts(format!(
            "steps ({}) must exceed burn_in ({})",
            config.steps, config.burn_in
        )));
    }
    let states = enumerate_orderings(tree, max_states)?;
    let sampler = Sampler::new(tree, dist);
    let moves = sampler.plans.len();
    let mut next = Vec::with_capacity(states.len() * moves);
    for pi in &states {
        for plan in &sampler.plans {
            next.push(ordering_index(tree, &plan.apply(pi))?);
        }
    }

    let mut rng = chain_rng(config.seed, config.stream);
    let mut state = ordering_index(tree, start)?;
    let mut counts = BTreeMap::new();
    for t in 1..=config.steps {
        state = next[state * moves + sampler.select(rng.next_u64())];
        if t > config.burn_in {
            *counts.entry(state).or_insert(0) += 1;
        }
    }
    Ok(ChainRun {
        seed: config.seed,
        stream: config.stream,
        steps: config.steps,
        burn_in: config.burn_in,
        state_count: states.len(),
        counts,
        final_state: state,
    })
}

/// Total variation distance `(1/2) Σ |p_i - q_i|`.
pub fn tv_distance(p: &[BigRational], q: &[BigRational]) -> Result<BigRational> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let sum: BigRational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(sum / BigRational::from_integer(BigInt::from(2)))
}

/// Target-state counts of `draws` independent single steps from `pi`.
pub fn one_step_counts(
    tree: &PureTree,
    dist: &WeightDistribution,
    pi: &LocalOrdering,
    draws: u64,
    seed: u64,
) -> Result<BTreeMap<usize, u64>> {
    let sampler = Sampler::new(tree, dist);
    let mut rng = chain_rng(seed, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..draws {
        let idx = ordering_index(tree, &sampler.step(pi, &mut rng))?;
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}
