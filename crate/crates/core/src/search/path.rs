use std::fmt;

use crate::assignment::{evaluate, PartitionAssignment};
use crate::differencing::{combine, resolve_signs, sorted_items, Item};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::magnitude::Magnitude;

/// Which differencing tree is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeOrder {
    /// Always operate on the two largest elements.
    Ckk,
    /// Operate on the adjacent pairs of the sorted input while more than
    /// `ceil(n/2)` elements remain, then on the two largest elements.
    CompleteBldm,
}

impl TreeOrder {
    /// Number of leading pair-wise (PDM) steps on an instance of size `n`.
    pub fn pdm_steps(self, n: usize) -> usize {
        match self {
            TreeOrder::Ckk => 0,
            TreeOrder::CompleteBldm => n / 2,
        }
    }
}

/// Left child replaces the two chosen elements by their difference, right
/// child by their sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Difference,
    Sum,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionPath {
    pub order: TreeOrder,
    pub branches: Vec<Branch>,
}

impl DecisionPath {
    pub fn new(order: TreeOrder, branches: Vec<Branch>) -> Self {
        DecisionPath { order, branches }
    }

    /// The leftmost root-to-terminal path: the LDM solution under
    /// [`TreeOrder::Ckk`], the BLDM solution under
    /// [`TreeOrder::CompleteBldm`].
    pub fn leftmost(order: TreeOrder, n: usize) -> Self {
        DecisionPath {
            order,
            branches: vec![Branch::Difference; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

impl fmt::Display for DecisionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            f.write_str(match b {
                Branch::Difference => "L",
                Branch::Sum => "R",
            })?;
        }
        Ok(())
    }
}

/// Rebuilds the partition at the end of a decision path.
///
/// The replay works on a plain list the slow way: during the pair-wise
/// phase the front two elements are combined and the result is appended at
/// the back; afterwards the whole list is re-sorted before every step. The
/// ordering and tie-breaking are the same as the solvers use, so the result
/// is the partition the solver reached.
pub fn extract_assignment(instance: &Instance, path: &DecisionPath) -> Result<PartitionAssignment> {
    let n = instance.len();
    if path.len() != n - 1 {
        return Err(Error::PathNotTerminal {
            expected: n - 1,
            found: path.len(),
        });
    }
    let pdm_steps = path.order.pdm_steps(n);
    let mut list: Vec<Item<Magnitude>> = sorted_items(instance.weights());
    let mut merges = Vec::with_capacity(n - 1);
    for (step, branch) in path.branches.iter().enumerate() {
        if step >= pdm_steps {
            list.sort_by(|a, b| b.rank(a));
        }
        let larger = list.remove(0);
        let smaller = list.remove(0);
        let (item, merge) = combine(&larger, &smaller, *branch == Branch::Difference);
        merges.push(merge);
        list.push(item);
    }
    let last = &list[0];
    let signs = resolve_signs(n, last.tag, &merges);
    let assignment = evaluate(instance, &signs)?;
    debug_assert_eq!(assignment.delta(), &last.value);
    debug_assert_eq!(assignment.card_diff(), last.card);
    Ok(assignment)
}
