//! Depth-first branch and bound over the differencing tree.
//!
//! The recursion is unrolled onto an explicit frame stack. Each frame owns
//! the two elements taken from the list at its node plus what is needed to
//! undo its child, so the list is modified in place and memory stays
//! `O(n)`.
//!
//! The list has two representations. During the pair-wise phase nothing is
//! reordered: the untouched originals are the suffix `orig[front..]` of the
//! sorted input and combined elements are appended to `tail`. On entering
//! the LDM phase both are copied into `ldm`, sorted ascending so the two
//! largest elements sit at the end, and new elements are placed by binary
//! search from then on.

use std::cmp::Ordering;
use std::time::Instant;

use crate::assignment::{evaluate, PartitionAssignment};
use crate::differencing::{combine, resolve_signs, sorted_items, Item, Merge};
use crate::instance::Instance;
use crate::magnitude::Weight;
use crate::report::{ImprovementEvent, SearchLimits, SolveReport, SolveStatus};

use super::path::{Branch, DecisionPath, TreeOrder};
use super::prune::{card_bound_prunes, value_bound_prunes};
use super::PruningRules;

/// How often the wall clock is consulted, in generated nodes.
const CLOCK_INTERVAL: u64 = 1024;

enum Pair<W> {
    /// The pair is `orig[front - 2]`, `orig[front - 1]`.
    Pdm,
    Ldm(Item<W>, Item<W>),
}

struct Frame<W> {
    pair: Pair<W>,
    branch: Branch,
    /// Index of the child element in `ldm` (LDM phase only).
    pos: usize,
    saved_sum: W,
    saved_card_max: u64,
    /// This node moved the list into LDM form.
    switched: bool,
}

enum Step {
    Expand,
    Backtrack,
    Stop(SolveStatus),
}

pub(crate) struct Engine<'a, W: Weight, S> {
    instance: &'a Instance,
    n: usize,
    order: TreeOrder,
    pdm_steps: usize,
    target: Option<u64>,
    pruning: PruningRules,
    limits: SearchLimits,
    sink: S,
    start: Instant,

    orig: Vec<Item<W>>,
    front: usize,
    tail: Vec<Item<W>>,
    tail_argmax: Vec<usize>,
    ldm: Vec<Item<W>>,
    ldm_active: bool,

    sum: W,
    card_hist: Vec<u32>,
    card_sum: u64,
    card_max: u64,

    frames: Vec<Frame<W>>,
    merges: Vec<Merge>,
    branches: Vec<Branch>,

    nodes: u64,
    best: Option<W>,
    best_assignment: Option<PartitionAssignment>,
    trace: Vec<ImprovementEvent>,
}

impl<'a, W: Weight, S: FnMut(&ImprovementEvent)> Engine<'a, W, S> {
    pub fn new(
        instance: &'a Instance,
        weights: &[W],
        order: TreeOrder,
        target: Option<u64>,
        pruning: PruningRules,
        limits: SearchLimits,
        sink: S,
    ) -> Self {
        let n = weights.len();
        let orig = sorted_items(weights);
        let mut sum = W::zero();
        for w in weights {
            sum.add_in(w);
        }
        let mut card_hist = vec![0u32; n + 1];
        card_hist[1] = n as u32;
        Engine {
            instance,
            n,
            order,
            pdm_steps: order.pdm_steps(n),
            target,
            pruning,
            limits,
            sink,
            start: Instant::now(),
            orig,
            front: 0,
            tail: Vec::with_capacity(n),
            tail_argmax: Vec::with_capacity(n),
            ldm: Vec::with_capacity(n),
            ldm_active: false,
            sum,
            card_hist,
            card_sum: n as u64,
            card_max: 1,
            frames: Vec::with_capacity(n),
            merges: Vec::with_capacity(n),
            branches: Vec::with_capacity(n),
            nodes: 0,
            best: None,
            best_assignment: None,
            trace: Vec::new(),
        }
    }

    pub fn run(mut self) -> SolveReport {
        self.start = Instant::now();
        self.nodes = 1;
        let status = 'search: loop {
            match self.enter() {
                Step::Stop(status) => break status,
                Step::Expand => {
                    if let Some(status) = self.out_of_budget() {
                        break status;
                    }
                    self.open();
                    continue;
                }
                Step::Backtrack => {}
            }
            loop {
                let Some(frame) = self.frames.last() else {
                    break 'search SolveStatus::ProvenOptimal;
                };
                let branch = frame.branch;
                self.retract();
                if branch == Branch::Difference {
                    if let Some(status) = self.out_of_budget() {
                        break 'search status;
                    }
                    self.apply(Branch::Sum);
                    continue 'search;
                }
                self.close();
            }
        };
        SolveReport {
            best: self.best_assignment,
            status,
            nodes_generated: self.nodes,
            elapsed: self.start.elapsed(),
            trace: self.trace,
        }
    }

    fn out_of_budget(&self) -> Option<SolveStatus> {
        if self.limits.max_nodes.is_some_and(|max| self.nodes >= max) {
            return Some(SolveStatus::NodeBudgetExhausted);
        }
        if let Some(max) = self.limits.max_time {
            if self.nodes.is_multiple_of(CLOCK_INTERVAL) && self.start.elapsed() >= max {
                return Some(SolveStatus::TimeBudgetExhausted);
            }
        }
        None
    }

    fn max_value(&self) -> &W {
        if self.ldm_active {
            return &self.ldm.last().expect("non-empty list").value;
        }
        let original = self.orig.get(self.front).map(|i| &i.value);
        let combined = self.tail_argmax.last().map(|&i| &self.tail[i].value);
        match (original, combined) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("empty list"),
        }
    }

    fn single(&self) -> &Item<W> {
        if self.ldm_active {
            &self.ldm[0]
        } else if self.front < self.n {
            &self.orig[self.front]
        } else {
            &self.tail[0]
        }
    }

    fn enter(&mut self) -> Step {
        #[cfg(debug_assertions)]
        self.check_aggregates();

        if self.frames.len() + 1 == self.n {
            return self.terminal();
        }
        if self.pruning.value {
            if let Some(best) = &self.best {
                if value_bound_prunes(self.max_value(), &self.sum, best) {
                    return Step::Backtrack;
                }
            }
        }
        if self.pruning.cardinality {
            if let Some(target) = self.target {
                if card_bound_prunes(self.card_max, self.card_sum, target) {
                    return Step::Backtrack;
                }
            }
        }
        Step::Expand
    }

    fn terminal(&mut self) -> Step {
        let item = self.single();
        let admitted = self.target.is_none_or(|t| item.card.unsigned_abs() == t);
        if !admitted || self.best.as_ref().is_some_and(|b| item.value >= *b) {
            return Step::Backtrack;
        }
        let value = item.value.clone();
        let signs = resolve_signs(self.n, item.tag, &self.merges);
        let assignment =
            evaluate(self.instance, &signs).expect("resolved signs match the instance");
        debug_assert_eq!(assignment.delta(), &value.to_magnitude());
        debug_assert_eq!(assignment.card_diff(), item.card);

        let event = ImprovementEvent {
            delta: assignment.delta().clone(),
            assignment: assignment.clone(),
            path: DecisionPath::new(self.order, self.branches.clone()),
            nodes_at_event: self.nodes,
            elapsed_at_event: self.start.elapsed(),
        };
        (self.sink)(&event);
        self.trace.push(event);
        self.best_assignment = Some(assignment);
        let perfect = value.is_perfect();
        self.best = Some(value);
        if perfect {
            Step::Stop(SolveStatus::PerfectFound)
        } else {
            Step::Backtrack
        }
    }

    /// Takes the two elements this node operates on and generates its left
    /// child.
    fn open(&mut self) {
        let depth = self.frames.len();
        let switched = depth >= self.pdm_steps && !self.ldm_active;
        if switched {
            self.ldm.clear();
            self.ldm.extend(self.orig[self.front..].iter().cloned());
            self.ldm.extend(self.tail.iter().cloned());
            self.ldm.sort_by(|a, b| a.rank(b));
            self.ldm_active = true;
        }
        let pair = if depth < self.pdm_steps {
            self.front += 2;
            Pair::Pdm
        } else {
            let larger = self.ldm.pop().expect("two elements");
            let smaller = self.ldm.pop().expect("two elements");
            Pair::Ldm(larger, smaller)
        };
        self.frames.push(Frame {
            pair,
            branch: Branch::Difference,
            pos: 0,
            saved_sum: self.sum.clone(),
            saved_card_max: self.card_max,
            switched,
        });
        self.apply(Branch::Difference);
    }

    /// Generates the child of the top frame for `branch`.
    fn apply(&mut self, branch: Branch) {
        let frame = self.frames.last().expect("open frame");
        let (larger, smaller) = match &frame.pair {
            Pair::Pdm => (&self.orig[self.front - 2], &self.orig[self.front - 1]),
            Pair::Ldm(a, b) => (a, b),
        };
        let (item, merge) = combine(larger, smaller, branch == Branch::Difference);
        let removed = [larger.card.unsigned_abs(), smaller.card.unsigned_abs()];
        if branch == Branch::Difference {
            self.sum.sub_in(&smaller.value);
            self.sum.sub_in(&smaller.value);
        }

        for m in removed {
            self.card_hist[m as usize] -= 1;
            self.card_sum -= m;
        }
        let mut card_max = self.card_max;
        while card_max > 0 && self.card_hist[card_max as usize] == 0 {
            card_max -= 1;
        }
        let added = item.card.unsigned_abs();
        self.card_hist[added as usize] += 1;
        self.card_sum += added;
        self.card_max = card_max.max(added);

        let pos = if self.ldm_active {
            let pos = self
                .ldm
                .partition_point(|e| e.rank(&item) == Ordering::Less);
            self.ldm.insert(pos, item);
            pos
        } else {
            let argmax = match self.tail_argmax.last() {
                Some(&i) if self.tail[i].value >= item.value => i,
                _ => self.tail.len(),
            };
            self.tail.push(item);
            self.tail_argmax.push(argmax);
            0
        };

        let frame = self.frames.last_mut().expect("open frame");
        frame.branch = branch;
        frame.pos = pos;
        self.merges.push(merge);
        self.branches.push(branch);
        self.nodes += 1;
    }

    /// Undoes the current child of the top frame.
    fn retract(&mut self) {
        let frame = self.frames.last().expect("open frame");
        let item = if self.ldm_active {
            self.ldm.remove(frame.pos)
        } else {
            self.tail_argmax.pop();
            self.tail.pop().expect("child element")
        };
        let added = item.card.unsigned_abs();
        self.card_hist[added as usize] -= 1;
        self.card_sum -= added;
        let (larger, smaller) = match &frame.pair {
            Pair::Pdm => (&self.orig[self.front - 2], &self.orig[self.front - 1]),
            Pair::Ldm(a, b) => (a, b),
        };
        for m in [larger.card.unsigned_abs(), smaller.card.unsigned_abs()] {
            self.card_hist[m as usize] += 1;
            self.card_sum += m;
        }
        self.card_max = frame.saved_card_max;
        self.sum = frame.saved_sum.clone();
        self.merges.pop();
        self.branches.pop();
    }

    /// Puts the frame's pair back and pops the frame.
    fn close(&mut self) {
        let frame = self.frames.pop().expect("open frame");
        match frame.pair {
            Pair::Pdm => self.front -= 2,
            Pair::Ldm(larger, smaller) => {
                self.ldm.push(smaller);
                self.ldm.push(larger);
            }
        }
        if frame.switched {
            self.ldm.clear();
            self.ldm_active = false;
        }
    }

    #[cfg(debug_assertions)]
    fn check_aggregates(&self) {
        let elements: Vec<&Item<W>> = if self.ldm_active {
            assert!(
                self.ldm
                    .windows(2)
                    .all(|w| w[0].rank(&w[1]) == Ordering::Less),
                "LDM list out of order"
            );
            self.ldm.iter().collect()
        } else {
            self.orig[self.front..].iter().chain(&self.tail).collect()
        };
        assert_eq!(elements.len(), self.n - self.frames.len());
        let mut sum = W::zero();
        for e in &elements {
            sum.add_in(&e.value);
        }
        assert_eq!(sum, self.sum, "cached value sum");
        let max = elements.iter().map(|e| &e.value).max().expect("non-empty");
        assert_eq!(max, self.max_value(), "cached value max");
        let card_sum: u64 = elements.iter().map(|e| e.card.unsigned_abs()).sum();
        let card_max = elements
            .iter()
            .map(|e| e.card.unsigned_abs())
            .max()
            .unwrap_or(0);
        assert_eq!(card_sum, self.card_sum, "cached |m| sum");
        assert_eq!(card_max, self.card_max, "cached |m| max");
        assert_eq!(card_sum % 2, (self.n % 2) as u64, "|m| sum parity");
    }
}
