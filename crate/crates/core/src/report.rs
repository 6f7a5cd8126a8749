use std::time::Duration;

use crate::assignment::PartitionAssignment;
use crate::magnitude::Magnitude;
use crate::search::DecisionPath;

/// Node and wall-clock budgets for a search. `None` means no limit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchLimits {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn time(max_time: Duration) -> Self {
        SearchLimits {
            max_nodes: None,
            max_time: Some(max_time),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.max_nodes.is_none() && self.max_time.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    /// The whole tree was searched (or pruned); the incumbent is optimal.
    ProvenOptimal,
    /// A terminal with difference at most one was accepted. Such a
    /// difference cannot be beaten, so this is also a proof of optimality.
    PerfectFound,
    NodeBudgetExhausted,
    TimeBudgetExhausted,
}

impl SolveStatus {
    pub fn is_optimal(self) -> bool {
        matches!(self, SolveStatus::ProvenOptimal | SolveStatus::PerfectFound)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::ProvenOptimal => "ProvenOptimal",
            SolveStatus::PerfectFound => "PerfectFound",
            SolveStatus::NodeBudgetExhausted => "NodeBudgetExhausted",
            SolveStatus::TimeBudgetExhausted => "TimeBudgetExhausted",
        }
    }
}

/// A strict improvement of the incumbent, reported as the search finds it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprovementEvent {
    pub delta: Magnitude,
    pub assignment: PartitionAssignment,
    /// Branch decisions from the root to the accepted terminal.
    pub path: DecisionPath,
    pub nodes_at_event: u64,
    pub elapsed_at_event: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// `None` only when the budget ran out before any terminal was accepted.
    pub best: Option<PartitionAssignment>,
    pub status: SolveStatus,
    pub nodes_generated: u64,
    pub elapsed: Duration,
    pub trace: Vec<ImprovementEvent>,
}

impl SolveReport {
    pub fn best_delta(&self) -> Option<&Magnitude> {
        self.best.as_ref().map(PartitionAssignment::delta)
    }

    pub fn is_proven_optimal(&self) -> bool {
        self.status.is_optimal()
    }
}
