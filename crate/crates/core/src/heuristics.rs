//! Polynomial-time differencing heuristics.
//!
//! * LDM repeatedly replaces the two largest elements by their difference.
//! * PDM differences adjacent pairs of the sorted list, re-sorts the
//!   survivors and repeats.
//! * BLDM runs a single PDM pass and then LDM on what is left, which fixes
//!   `|m| = n mod 2` regardless of what LDM does afterwards.
//!
//! All three run in `O(n log n)` and return a full assignment.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::assignment::{evaluate, PartitionAssignment};
use crate::differencing::{combine, resolve_signs, sorted_items, Item, Merge, Ranked};
use crate::error::Error;
use crate::instance::Instance;
use crate::magnitude::{Magnitude, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    Pdm,
    Ldm,
    Bldm,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 3] =
        [HeuristicKind::Pdm, HeuristicKind::Ldm, HeuristicKind::Bldm];

    pub fn run(self, instance: &Instance) -> PartitionAssignment {
        match self {
            HeuristicKind::Pdm => pdm(instance),
            HeuristicKind::Ldm => ldm(instance),
            HeuristicKind::Bldm => bldm(instance),
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicKind::Pdm => "pdm",
            HeuristicKind::Ldm => "ldm",
            HeuristicKind::Bldm => "bldm",
        })
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "pdm" => Ok(HeuristicKind::Pdm),
            "ldm" => Ok(HeuristicKind::Ldm),
            "bldm" => Ok(HeuristicKind::Bldm),
            other => Err(Error::Config(format!("unknown heuristic {other:?}"))),
        }
    }
}

struct Outcome {
    value: Magnitude,
    root: u32,
    merges: Vec<Merge>,
}

fn finish(instance: &Instance, out: Outcome) -> PartitionAssignment {
    let signs = resolve_signs(instance.len(), out.root, &out.merges);
    let assignment = evaluate(instance, &signs).expect("resolved signs match the instance");
    debug_assert_eq!(assignment.delta(), &out.value);
    assignment
}

fn run(
    instance: &Instance,
    small: fn(&[u128]) -> Outcome,
    big: fn(&[Magnitude]) -> Outcome,
) -> PartitionAssignment {
    let out = match instance.fast_weights() {
        Some(w) => small(&w),
        None => big(instance.weights()),
    };
    finish(instance, out)
}

pub fn ldm(instance: &Instance) -> PartitionAssignment {
    run(instance, ldm_log::<u128>, ldm_log::<Magnitude>)
}

pub fn pdm(instance: &Instance) -> PartitionAssignment {
    run(instance, pdm_log::<u128>, pdm_log::<Magnitude>)
}

pub fn bldm(instance: &Instance) -> PartitionAssignment {
    run(instance, bldm_log::<u128>, bldm_log::<Magnitude>)
}

/// Differences the two highest-ranked elements until one remains.
fn ldm_from<W: Weight>(items: Vec<Item<W>>, merges: &mut Vec<Merge>) -> Item<W> {
    let mut heap: BinaryHeap<Ranked<W>> = items.into_iter().map(Ranked).collect();
    loop {
        let Ranked(larger) = heap.pop().expect("heap is never empty");
        let Some(Ranked(smaller)) = heap.pop() else {
            return larger;
        };
        let (item, merge) = combine(&larger, &smaller, true);
        merges.push(merge);
        heap.push(Ranked(item));
    }
}

/// One PDM pass over a descending list: differences (1st, 2nd), (3rd, 4th),
/// ... and carries an odd leftover through unpaired.
fn pdm_pass<W: Weight>(items: &[Item<W>], merges: &mut Vec<Merge>) -> Vec<Item<W>> {
    let mut out = Vec::with_capacity(items.len().div_ceil(2));
    let mut pairs = items.chunks_exact(2);
    for pair in &mut pairs {
        let (item, merge) = combine(&pair[0], &pair[1], true);
        merges.push(merge);
        out.push(item);
    }
    out.extend(pairs.remainder().iter().cloned());
    out
}

fn ldm_log<W: Weight>(weights: &[W]) -> Outcome {
    let mut merges = Vec::with_capacity(weights.len());
    let last = ldm_from(sorted_items(weights), &mut merges);
    Outcome {
        value: last.value.to_magnitude(),
        root: last.tag,
        merges,
    }
}

fn pdm_log<W: Weight>(weights: &[W]) -> Outcome {
    let mut merges = Vec::with_capacity(weights.len());
    let mut items = sorted_items(weights);
    while items.len() > 1 {
        items = pdm_pass(&items, &mut merges);
        items.sort_by(|a, b| b.rank(a));
    }
    let last = items.pop().expect("non-empty instance");
    Outcome {
        value: last.value.to_magnitude(),
        root: last.tag,
        merges,
    }
}

fn bldm_log<W: Weight>(weights: &[W]) -> Outcome {
    let mut merges = Vec::with_capacity(weights.len());
    let items = sorted_items(weights);
    let reduced = if items.len() > 1 {
        pdm_pass(&items, &mut merges)
    } else {
        items
    };
    let last = ldm_from(reduced, &mut merges);
    Outcome {
        value: last.value.to_magnitude(),
        root: last.tag,
        merges,
    }
}
