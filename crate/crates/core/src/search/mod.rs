//! Complete anytime solvers.
//!
//! [`ckk_solve`] searches the complete Karmarkar-Karp tree for the
//! unconstrained problem. [`cbldm_solve`] searches the complete BLDM tree,
//! whose first terminal is the BLDM solution, and tracks effective
//! cardinalities so that only partitions with the requested `|m|` are
//! accepted. Both search depth first, difference before sum, and report
//! every strict improvement as it is found.
//!
//! Node counting: the root counts as one node and every generated child as
//! one more, so the leftmost terminal is reached after exactly `n` nodes.

mod engine;
mod path;
mod prune;

pub use path::{extract_assignment, Branch, DecisionPath, TreeOrder};
pub use prune::{prune_cardinality, prune_value, NodeState, Phase};

use crate::assignment::CardinalityConstraint;
use crate::error::Result;
use crate::instance::Instance;
use crate::magnitude::Magnitude;
use crate::report::{ImprovementEvent, SearchLimits, SolveReport};

use engine::Engine;

/// Which pruning rules are active. Perfect-partition termination is always
/// on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PruningRules {
    pub value: bool,
    pub cardinality: bool,
}

impl Default for PruningRules {
    fn default() -> Self {
        PruningRules {
            value: true,
            cardinality: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: SearchLimits,
    pub pruning: PruningRules,
}

impl From<SearchLimits> for SolveOptions {
    fn from(limits: SearchLimits) -> Self {
        SolveOptions {
            limits,
            pruning: PruningRules::default(),
        }
    }
}

/// Complete Karmarkar-Karp search for the unconstrained problem.
pub fn ckk_solve<S>(instance: &Instance, limits: SearchLimits, sink: S) -> SolveReport
where
    S: FnMut(&ImprovementEvent),
{
    solve(
        instance,
        TreeOrder::Ckk,
        CardinalityConstraint::Unconstrained,
        &limits.into(),
        sink,
    )
    .expect("unconstrained search cannot fail")
}

/// Complete BLDM search under a cardinality constraint.
pub fn cbldm_solve<S>(
    instance: &Instance,
    constraint: CardinalityConstraint,
    limits: SearchLimits,
    sink: S,
) -> Result<SolveReport>
where
    S: FnMut(&ImprovementEvent),
{
    solve(
        instance,
        TreeOrder::CompleteBldm,
        constraint,
        &limits.into(),
        sink,
    )
}

/// General entry point: any tree order, any constraint, selectable pruning.
pub fn solve<S>(
    instance: &Instance,
    order: TreeOrder,
    constraint: CardinalityConstraint,
    options: &SolveOptions,
    sink: S,
) -> Result<SolveReport>
where
    S: FnMut(&ImprovementEvent),
{
    constraint.validate(instance.len())?;
    let target = constraint.target();
    let report = match instance.fast_weights() {
        Some(weights) => Engine::new(
            instance,
            &weights,
            order,
            target,
            options.pruning,
            options.limits,
            sink,
        )
        .run(),
        None => Engine::<Magnitude, S>::new(
            instance,
            instance.weights(),
            order,
            target,
            options.pruning,
            options.limits,
            sink,
        )
        .run(),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::heuristics::{bldm, ldm};
    use crate::report::SolveStatus;

    fn inst(w: &[u64]) -> Instance {
        Instance::from_u64s(w).unwrap()
    }

    fn delta(r: &SolveReport) -> u128 {
        r.best_delta().unwrap().to_u128().unwrap()
    }

    #[test]
    fn ckk_examples() {
        let r = ckk_solve(&inst(&[8, 7, 6, 5, 4]), SearchLimits::unbounded(), |_| {});
        assert_eq!(delta(&r), 0);
        assert_eq!(r.status, SolveStatus::PerfectFound);
        assert_eq!(r.trace[0].nodes_at_event, 5);
        assert_eq!(r.trace[0].delta, Magnitude::from(2u64));

        let r = ckk_solve(&inst(&[5]), SearchLimits::unbounded(), |_| {});
        assert_eq!(
            (delta(&r), r.status, r.nodes_generated),
            (5, SolveStatus::ProvenOptimal, 1)
        );

        let r = ckk_solve(&inst(&[1, 1, 1, 1]), SearchLimits::unbounded(), |_| {});
        assert_eq!(delta(&r), 0);
    }

    #[test]
    fn cbldm_examples() {
        let i = inst(&[8, 7, 6, 5, 4]);
        let r = cbldm_solve(
            &i,
            CardinalityConstraint::TargetAbs(1),
            SearchLimits::unbounded(),
            |_| {},
        )
        .unwrap();
        assert_eq!(delta(&r), 0);
        assert_eq!(r.best.as_ref().unwrap().card_diff().abs(), 1);
        assert_eq!(r.status, SolveStatus::PerfectFound);
        assert_eq!(r.trace[0].delta, *bldm(&i).delta());

        let r = cbldm_solve(
            &inst(&[10, 8, 7, 5]),
            CardinalityConstraint::TargetAbs(0),
            SearchLimits::unbounded(),
            |_| {},
        )
        .unwrap();
        assert_eq!(delta(&r), 0);

        let r = cbldm_solve(
            &inst(&[9, 4]),
            CardinalityConstraint::TargetAbs(0),
            SearchLimits::unbounded(),
            |_| {},
        )
        .unwrap();
        assert_eq!((delta(&r), r.status), (5, SolveStatus::ProvenOptimal));
    }

    #[test]
    fn full_cardinality_is_found_at_once() {
        for n in 1..12u64 {
            let w: Vec<u64> = (1..=n).map(|i| i * 37 % 101).collect();
            let i = inst(&w);
            let r = cbldm_solve(
                &i,
                CardinalityConstraint::TargetAbs(n),
                SearchLimits::unbounded(),
                |_| {},
            )
            .unwrap();
            assert_eq!(r.best_delta().unwrap(), &i.total());
            assert!(
                r.nodes_generated <= 2 * n,
                "n={n}: {} nodes",
                r.nodes_generated
            );
        }
    }

    #[test]
    fn single_element_cbldm() {
        let i = inst(&[7]);
        let r = cbldm_solve(
            &i,
            CardinalityConstraint::TargetAbs(1),
            SearchLimits::unbounded(),
            |_| {},
        )
        .unwrap();
        assert_eq!(delta(&r), 7);
        let r = cbldm_solve(
            &i,
            CardinalityConstraint::Unconstrained,
            SearchLimits::unbounded(),
            |_| {},
        )
        .unwrap();
        assert_eq!(delta(&r), 7);
        assert!(matches!(
            cbldm_solve(
                &i,
                CardinalityConstraint::TargetAbs(0),
                SearchLimits::unbounded(),
                |_| {}
            ),
            Err(Error::TargetParity { .. })
        ));
    }

    #[test]
    fn parity_violation_is_rejected() {
        let i = inst(&[1, 2, 3, 4, 5]);
        assert_eq!(
            cbldm_solve(
                &i,
                CardinalityConstraint::TargetAbs(2),
                SearchLimits::unbounded(),
                |_| {}
            )
            .unwrap_err(),
            Error::TargetParity { target: 2, n: 5 }
        );
    }

    #[test]
    fn node_budget_is_respected() {
        let w: Vec<u64> = (0..18)
            .map(|i| (i * 7919 + 13) % 100_003 * 1_000_003 + i)
            .collect();
        let i = inst(&w);
        for budget in [0, 1, 5, 17, 18, 19, 100, 1000] {
            let r = ckk_solve(&i, SearchLimits::nodes(budget), |_| {});
            assert!(r.nodes_generated <= budget + 1);
            if !r.status.is_optimal() {
                assert_eq!(r.status, SolveStatus::NodeBudgetExhausted);
            }
            assert_eq!(r.best.is_some(), budget >= 18, "budget {budget}");
            if budget == 18 {
                assert_eq!(r.best_delta(), Some(ldm(&i).delta()));
            }
        }
    }

    #[test]
    fn sink_sees_every_event() {
        let w: Vec<u64> = (0..14).map(|i| (i * 104729 + 7) % 65_521).collect();
        let mut seen = Vec::new();
        let r = ckk_solve(&inst(&w), SearchLimits::unbounded(), |e| {
            seen.push(e.delta.clone())
        });
        let trace: Vec<_> = r.trace.iter().map(|e| e.delta.clone()).collect();
        assert_eq!(seen, trace);
        assert!(trace.windows(2).all(|p| p[0] > p[1]));
        assert_eq!(trace.last(), r.best_delta());
    }
}
