//! Instance-level verification suite: the spectral identities plus the lattice and
//! semigroup invariants, evaluated on one tree and distribution.
//!
//! Each check is skipped (not failed) when the objects it enumerates exceed the limits.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::lattice::{
    alpha_compatible, count_chambers_above, enumerate_partition_families, mobius_values_agree,
    refines,
};
use crate::ordering::apply_move;
use crate::semigroup::{
    beta_from_subset, compose_same_tree, embed, enumerate_semigroup, support,
    OrderedPartitionFamily,
};
use crate::spectrum::{
    check_spectral_identities, is_separating, singleton_spectrum, spectrum, transition_matrix,
    Check, Report,
};
use crate::tree::{LeafSubset, PureTree};
use crate::Limits;

/// Budget for quadratic and cubic sweeps over the semigroup.
const PAIR_BUDGET: u64 = 1_000_000;

fn within(value: &BigUint, cap: u64) -> bool {
    value.to_u64().is_some_and(|v| v <= cap)
}

/// Subsets to sweep: the whole power set when small, else the distribution's entries.
fn test_subsets(tree: &PureTree, dist: &WeightDistribution) -> Vec<LeafSubset> {
    if tree.leaves().len() <= 10 {
        tree.all_leaf_subsets().expect("small power set")
    } else {
        dist.entries().map(|(e, _)| e.clone()).collect()
    }
}

/// Runs every check that fits within `limits`.
pub fn verify_instance(
    tree: &PureTree,
    dist: &WeightDistribution,
    limits: &Limits,
) -> Result<Report> {
    let stats = tree.stats();
    let mut checks = Vec::new();

    if !within(&stats.state_count, limits.max_states) {
        return Err(Error::CapExceeded {
            what: "state space",
            size: stats.state_count.to_string(),
            cap: limits.max_states,
        });
    }
    let matrix = transition_matrix(tree, dist, limits.max_states)?;
    checks.push(Check::new(
        "row-stochastic",
        matrix.is_stochastic(),
        "rows sum to 1, entries nonnegative",
    ));
    let table = spectrum(tree, dist, limits.max_lattice)?;
    checks.extend(check_spectral_identities(&matrix, &table).checks);

    let lattice = enumerate_partition_families(tree, limits.max_lattice)?;
    if lattice.len() as u64 <= 2000 {
        checks.push(match mobius_values_agree(&lattice) {
            None => Check::new(
                "möbius product formula",
                true,
                format!("{} families", lattice.len()),
            ),
            Some(i) => Check::new(
                "möbius product formula",
                false,
                format!("disagreement at {}", lattice[i].display(tree)),
            ),
        });
    } else {
        checks.push(Check::skipped(
            "möbius product formula",
            "lattice larger than 2000",
        ));
    }

    let subsets = test_subsets(tree, dist);
    if (lattice.len() as u64).saturating_mul(subsets.len() as u64) <= PAIR_BUDGET {
        let mut failure = None;
        'outer: for e in &subsets {
            let supp = support(&beta_from_subset(tree, e));
            for alpha in &lattice {
                if alpha_compatible(tree, alpha, e)? != refines(&supp, alpha)? {
                    failure = Some(format!(
                        "{} against {}",
                        tree.format_subset(e),
                        alpha.display(tree)
                    ));
                    break 'outer;
                }
            }
        }
        checks.push(Check::new(
            "compatibility is support order",
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{} subsets", subsets.len())),
        ));
    } else {
        checks.push(Check::skipped(
            "compatibility is support order",
            "sweep too large",
        ));
    }

    let states = matrix.states();
    if (states.len() as u64).saturating_mul(subsets.len() as u64) <= PAIR_BUDGET {
        let failure = subsets.iter().find_map(|e| {
            let beta = beta_from_subset(tree, e);
            states
                .iter()
                .find(|pi| compose_same_tree(&beta, &embed(pi)) != embed(&apply_move(tree, pi, e)))
                .map(|pi| format!("{} on {}", tree.format_subset(e), pi.display(tree)))
        });
        checks.push(Check::new(
            "action equals move",
            failure.is_none(),
            failure
                .unwrap_or_else(|| format!("{} subsets × {} states", subsets.len(), states.len())),
        ));
    } else {
        checks.push(Check::skipped("action equals move", "sweep too large"));
    }

    checks.extend(semigroup_checks(tree, limits)?);

    if dist.is_singleton_supported() {
        checks.push(match singleton_spectrum(tree, dist, limits.max_lattice) {
            Ok(singles) => Check::new(
                "singleton specialization",
                &singles.aggregated == table.aggregated(),
                "derangement table against the partition table",
            ),
            Err(Error::CapExceeded { .. }) => {
                Check::skipped("singleton specialization", "index set too large")
            }
            Err(e) => return Err(e),
        });
    }

    let separating = is_separating(tree, &dist.support()).separating;
    let fixed = table.multiplicity_of(&BigRational::one());
    checks.push(Check::new(
        "separating iff simple eigenvalue 1",
        separating == fixed.is_one(),
        format!("separating = {separating}, multiplicity of 1 = {fixed}"),
    ));

    Ok(Report { checks })
}

fn semigroup_checks(tree: &PureTree, limits: &Limits) -> Result<Vec<Check>> {
    let stats = tree.stats();
    let names = [
        "idempotence",
        "left regularity",
        "chambers left-absorbing",
        "chamber count",
    ];
    if !within(&stats.semigroup_size, limits.max_semigroup) {
        return Ok(names
            .iter()
            .map(|n| {
                Check::skipped(
                    *n,
                    format!("semigroup size {} over cap", stats.semigroup_size),
                )
            })
            .collect());
    }
    let elements = enumerate_semigroup(tree, limits.max_semigroup)?;
    let n = elements.len() as u64;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "idempotence",
        elements.iter().all(|b| compose_same_tree(b, b) == *b),
        format!("{n} elements"),
    ));

    if n * n <= PAIR_BUDGET {
        let bad = pairs(&elements).find(|(b, g)| {
            let bg = compose_same_tree(b, g);
            compose_same_tree(&bg, b) != bg
        });
        checks.push(Check::new(
            "left regularity",
            bad.is_none(),
            bad.map(|(b, g)| format!("β = {}, γ = {}", b.display(tree), g.display(tree)))
                .unwrap_or_else(|| format!("{} pairs", n * n)),
        ));
        let bad = pairs(&elements)
            .filter(|(c, _)| crate::semigroup::is_chamber(c))
            .find(|(c, b)| compose_same_tree(c, b) != **c);
        checks.push(Check::new(
            "chambers left-absorbing",
            bad.is_none(),
            bad.map(|(c, _)| c.display(tree)).unwrap_or_default(),
        ));
    } else {
        checks.push(Check::skipped("left regularity", "too many pairs"));
        checks.push(Check::skipped("chambers left-absorbing", "too many pairs"));
    }

    if within(&(BigUint::from(n) * &stats.state_count), PAIR_BUDGET) {
        let mut failure = None;
        for beta in &elements {
            match count_chambers_above(tree, beta, limits.max_states.max(limits.max_lattice)) {
                Ok(_) => {}
                Err(Error::Verification(msg)) => {
                    failure = Some(msg);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        checks.push(Check::new(
            "chamber count",
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{n} faces")),
        ));
    } else {
        checks.push(Check::skipped(
            "chamber count",
            "too many face/chamber pairs",
        ));
    }
    Ok(checks)
}

fn pairs(
    elements: &[OrderedPartitionFamily],
) -> impl Iterator<Item = (&OrderedPartitionFamily, &OrderedPartitionFamily)> {
    elements
        .iter()
        .flat_map(move |b| elements.iter().map(move |g| (b, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::NodeSpec;

    #[test]
    fn small_instances_pass() {
        let t = PureTree::from_spec(&NodeSpec::node(
            "r",
            vec![
                NodeSpec::node("u", vec![NodeSpec::leaf("a"), NodeSpec::leaf("b")]),
                NodeSpec::node("v", vec![NodeSpec::leaf("c"), NodeSpec::leaf("d")]),
            ],
        ))
        .unwrap();
        let report = verify_instance(
            &t,
            &WeightDistribution::uniform_singletons(&t),
            &Limits::default(),
        )
        .unwrap();
        assert!(report.all_passed(), "{report:#?}");
        assert!(report.checks.iter().all(|c| c.passed()), "{report:#?}");

        let absorbing = WeightDistribution::point_mass(&t, t.leaf_subset(&["a"]).unwrap()).unwrap();
        let report = verify_instance(&t, &absorbing, &Limits::default()).unwrap();
        assert!(report.all_passed(), "{report:#?}");
    }
}
