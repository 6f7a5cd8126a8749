use crate::assignment::WeightedElement;
use crate::error::{Error, Result};
use crate::magnitude::{Magnitude, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Pdm,
    Ldm,
}

/// A search-tree node: the current element list plus the aggregates both
/// pruning rules read. In the LDM phase the list is kept in descending
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeState {
    elements: Vec<WeightedElement>,
    value_sum: Magnitude,
    value_max: Magnitude,
    card_abs_sum: u64,
    card_abs_max: u64,
    phase: Phase,
}

impl NodeState {
    pub fn new(mut elements: Vec<WeightedElement>, phase: Phase) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if phase == Phase::Ldm {
            elements.sort_by(|a, b| b.value.cmp(&a.value));
        }
        let value_sum = elements.iter().map(|e| &e.value).sum();
        let value_max = elements
            .iter()
            .map(|e| &e.value)
            .max()
            .cloned()
            .unwrap_or_default();
        let card_abs_sum = elements.iter().map(|e| e.card.unsigned_abs()).sum();
        let card_abs_max = elements
            .iter()
            .map(|e| e.card.unsigned_abs())
            .max()
            .unwrap_or(0);
        Ok(NodeState {
            elements,
            value_sum,
            value_max,
            card_abs_sum,
            card_abs_max,
            phase,
        })
    }

    pub fn elements(&self) -> &[WeightedElement] {
        &self.elements
    }
    pub fn value_sum(&self) -> &Magnitude {
        &self.value_sum
    }
    pub fn value_max(&self) -> &Magnitude {
        &self.value_max
    }
    pub fn card_abs_sum(&self) -> u64 {
        self.card_abs_sum
    }
    pub fn card_abs_max(&self) -> u64 {
        self.card_abs_max
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
}

/// True when no terminal below the node can beat `best`: every terminal
/// difference is at least `max - (sum - max)`.
pub fn prune_value(state: &NodeState, best: &Magnitude) -> bool {
    value_bound_prunes(&state.value_max, &state.value_sum, best)
}

/// True when `target` lies outside the reachable range
/// `[2 max|m_i| - sum|m_i|, sum|m_i|]` of final `|m|`.
pub fn prune_cardinality(state: &NodeState, target: u64) -> bool {
    card_bound_prunes(state.card_abs_max, state.card_abs_sum, target)
}

/// `2 max - sum >= best`, rearranged to stay unsigned.
#[inline]
pub(crate) fn value_bound_prunes<W: Weight>(max: &W, sum: &W, best: &W) -> bool {
    max.plus(max) >= sum.plus(best)
}

#[inline]
pub(crate) fn card_bound_prunes(card_max: u64, card_sum: u64, target: u64) -> bool {
    2 * card_max > card_sum + target || card_sum < target
}
