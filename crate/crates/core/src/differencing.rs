//! Shared bookkeeping for differencing and summing list elements.
//!
//! Every list element is tagged with the original index that represents it.
//! Combining two elements keeps the larger one's tag and logs a [`Merge`];
//! replaying the log backwards from the final element recovers one sign per
//! original index. Elements are totally ordered by value and then by tag
//! (smaller tag ranks higher on ties), so every consumer of this module
//! makes the same choices.

use std::cmp::Ordering;

use crate::magnitude::Weight;

#[derive(Clone, Debug)]
pub(crate) struct Item<W> {
    pub value: W,
    pub card: i64,
    pub tag: u32,
}

impl<W: Weight> Item<W> {
    /// Ascending rank: larger values rank higher, and among equal values the
    /// smaller original index ranks higher.
    #[inline]
    pub fn rank(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| other.tag.cmp(&self.tag))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Merge {
    pub keep: u32,
    pub absorbed: u32,
    /// The absorbed element goes to the opposite subset (differencing).
    pub opposite: bool,
}

/// Differences (`opposite`) or sums two elements, `larger` ranking at least
/// as high as `smaller`.
#[inline]
pub(crate) fn combine<W: Weight>(
    larger: &Item<W>,
    smaller: &Item<W>,
    opposite: bool,
) -> (Item<W>, Merge) {
    let (value, card) = if opposite {
        (
            larger.value.minus(&smaller.value),
            larger.card - smaller.card,
        )
    } else {
        (
            larger.value.plus(&smaller.value),
            larger.card + smaller.card,
        )
    };
    let merge = Merge {
        keep: larger.tag,
        absorbed: smaller.tag,
        opposite,
    };
    (
        Item {
            value,
            card,
            tag: larger.tag,
        },
        merge,
    )
}

/// Signs for all `n` indices given the final element's tag and the complete
/// merge log. The final element's own index gets `+1`, so the signed sum
/// equals the (non-negative) final value.
pub(crate) fn resolve_signs(n: usize, root: u32, merges: &[Merge]) -> Vec<i8> {
    debug_assert_eq!(merges.len() + 1, n);
    let mut signs = vec![0i8; n];
    signs[root as usize] = 1;
    for m in merges.iter().rev() {
        let s = signs[m.keep as usize];
        debug_assert_ne!(s, 0, "merge log out of order");
        signs[m.absorbed as usize] = if m.opposite { -s } else { s };
    }
    debug_assert!(signs.iter().all(|&s| s != 0));
    signs
}

/// The starting elements in descending rank order.
pub(crate) fn sorted_items<W: Weight>(weights: &[W]) -> Vec<Item<W>> {
    let mut items: Vec<Item<W>> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| Item {
            value: w.clone(),
            card: 1,
            tag: i as u32,
        })
        .collect();
    items.sort_by(|a, b| b.rank(a));
    items
}

/// Heap adaptor ordering by [`Item::rank`].
pub(crate) struct Ranked<W>(pub Item<W>);

impl<W: Weight> PartialEq for Ranked<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: Weight> Eq for Ranked<W> {}

impl<W: Weight> PartialOrd for Ranked<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Weight> Ord for Ranked<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_prefer_smaller_index() {
        let items = sorted_items(&[5u128, 7, 5, 7]);
        let tags: Vec<u32> = items.iter().map(|i| i.tag).collect();
        assert_eq!(tags, vec![1, 3, 0, 2]);
    }

    #[test]
    fn resolve_follows_log() {
        // (8,7) diff -> tag 0; (6,5) diff -> tag 2; (4, 1@0) diff -> tag 4;
        // (3@4, 1@2) diff -> final tag 4.
        let merges = [
            Merge {
                keep: 0,
                absorbed: 1,
                opposite: true,
            },
            Merge {
                keep: 2,
                absorbed: 3,
                opposite: true,
            },
            Merge {
                keep: 4,
                absorbed: 0,
                opposite: true,
            },
            Merge {
                keep: 4,
                absorbed: 2,
                opposite: true,
            },
        ];
        let signs = resolve_signs(5, 4, &merges);
        assert_eq!(signs, vec![-1, 1, -1, 1, 1]);
        // -8 + 7 - 6 + 5 + 4 = 2
        let signed: i64 = signs
            .iter()
            .zip([8i64, 7, 6, 5, 4])
            .map(|(&s, x)| s as i64 * x)
            .sum();
        assert_eq!(signed, 2);
    }
}
