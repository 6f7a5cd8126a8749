//! Exhaustive reference solvers for small instances.
//!
//! Nothing here shares code with the differencing machinery: the sign
//! enumeration walks all `2^(n-1)` sign vectors directly, and the tree
//! enumeration expands the unpruned differencing tree on plain sorted
//! lists.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};

use crate::assignment::{evaluate, CardinalityConstraint, PartitionAssignment};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::Instance;
use crate::magnitude::Magnitude;

/// Largest instance [`exhaustive_best`] accepts.
pub const ORACLE_MAX_N: usize = 30;
/// Largest instance [`enumerate_tree_terminals`] accepts.
pub const TREE_MAX_N: usize = 20;

/// Number of leading free signs fixed per parallel block.
const BLOCK_BITS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBest {
    pub delta: Magnitude,
    pub card_diff: i64,
    pub assignment: PartitionAssignment,
}

/// Best partition under `constraint` by enumerating every sign vector with
/// the first sign fixed to `+1`.
///
/// Ties on the difference go to the smaller `|m|`, then to the
/// lexicographically smallest sign vector with `-1 < +1`.
pub fn exhaustive_best(
    instance: &Instance,
    constraint: CardinalityConstraint,
) -> Result<OracleBest> {
    exhaustive_best_with(instance, constraint, Exec::Sequential)
}

pub fn exhaustive_best_with(
    instance: &Instance,
    constraint: CardinalityConstraint,
    exec: Exec,
) -> Result<OracleBest> {
    constraint.validate(instance.len())?;
    let table = best_by_cardinality_with(instance, exec)?;
    let pick = match constraint {
        CardinalityConstraint::TargetAbs(t) => table[t as usize].clone(),
        CardinalityConstraint::Unconstrained => table.into_iter().flatten().min_by(|a, b| {
            a.delta
                .cmp(&b.delta)
                .then(a.card_diff.abs().cmp(&b.card_diff.abs()))
        }),
    };
    Ok(pick.expect("a parity-valid target is always reachable"))
}

/// For each `|m|` in `0..=n`, the best partition with that cardinality
/// difference (`None` where `|m|` has the wrong parity).
pub fn best_by_cardinality(instance: &Instance) -> Result<Vec<Option<OracleBest>>> {
    best_by_cardinality_with(instance, Exec::Sequential)
}

pub fn best_by_cardinality_with(
    instance: &Instance,
    exec: Exec,
) -> Result<Vec<Option<OracleBest>>> {
    let n = instance.len();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLargeForOracle {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    let masks: Vec<Option<u32>> = match instance.fast_weights() {
        Some(w) => {
            let w: Vec<i128> = w.into_iter().map(|x| x as i128).collect();
            winners(enumerate::<i128>(&w, exec))
        }
        None => {
            let w: Vec<BigInt> = instance
                .weights()
                .iter()
                .map(|m| BigInt::from_biguint(Sign::Plus, m.as_biguint().clone()))
                .collect();
            winners(enumerate::<BigInt>(&w, exec))
        }
    };
    masks
        .into_iter()
        .map(|slot| {
            slot.map(|plus_mask| {
                let signs = mask_to_signs(plus_mask, n);
                let assignment = evaluate(instance, &signs)?;
                Ok(OracleBest {
                    delta: assignment.delta().clone(),
                    card_diff: assignment.card_diff(),
                    assignment,
                })
            })
            .transpose()
        })
        .collect()
}

/// Bit `n - 1 - i` set means index `i` carries `+1`, so numeric order on
/// masks is lexicographic order on sign vectors.
fn mask_to_signs(mask: u32, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 })
        .collect()
}

trait Signed: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn add_in(&mut self, other: &Self);
    fn sub_in(&mut self, other: &Self);
    fn doubled(&self) -> Self;
    fn abs(&self) -> Self;
}

impl Signed for i128 {
    fn zero() -> Self {
        0
    }
    fn add_in(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_in(&mut self, other: &Self) {
        *self -= other;
    }
    fn doubled(&self) -> Self {
        self * 2
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
}

impl Signed for BigInt {
    fn zero() -> Self {
        BigInt::ZERO
    }
    fn add_in(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_in(&mut self, other: &Self) {
        *self -= other;
    }
    fn doubled(&self) -> Self {
        self * 2
    }
    fn abs(&self) -> Self {
        num_traits::Signed::abs(self)
    }
}

type Buckets<T> = Vec<Option<(T, u32)>>;

fn winners<T>(buckets: Buckets<T>) -> Vec<Option<u32>> {
    buckets
        .into_iter()
        .map(|slot| slot.map(|(_, mask)| mask))
        .collect()
}

fn offer<T: Signed>(buckets: &mut Buckets<T>, card: i64, sum: &T, mask: u32) {
    let slot = &mut buckets[card.unsigned_abs() as usize];
    let delta = sum.abs();
    let better = match slot {
        None => true,
        Some((d, m)) => match delta.cmp(d) {
            Ordering::Less => true,
            Ordering::Equal => mask < *m,
            Ordering::Greater => false,
        },
    };
    if better {
        *slot = Some((delta, mask));
    }
}

fn enumerate<T: Signed>(weights: &[T], exec: Exec) -> Buckets<T> {
    let n = weights.len();
    let free = n - 1;
    let high = free.min(BLOCK_BITS);
    let low = free - high;
    let doubled: Vec<T> = weights.iter().map(Signed::doubled).collect();
    let all_plus: T = weights.iter().fold(T::zero(), |mut acc, w| {
        acc.add_in(w);
        acc
    });

    let blocks: Vec<u32> = (0..1u32 << high).collect();
    let partials = exec.map(&blocks, |&block| {
        let mut buckets: Buckets<T> = vec![None; n + 1];
        // Indices 1..=high take their signs from the block number: bit
        // (high - i) of `block` set means index i is -1.
        let mut sum = all_plus.clone();
        let mut card = n as i64;
        let mut mask: u32 = (1u32 << n) - 1;
        for (i, d) in doubled.iter().enumerate().take(high + 1).skip(1) {
            if block >> (high - i) & 1 == 1 {
                sum.sub_in(d);
                card -= 2;
                mask &= !(1 << (n - 1 - i));
            }
        }
        offer(&mut buckets, card, &sum, mask);
        // Gray-code walk over the low indices high+1..n-1; bit p of the
        // code toggles index n-1-p.
        for step in 1u64..(1u64 << low) {
            let p = step.trailing_zeros() as usize;
            let i = n - 1 - p;
            let bit = 1u32 << p;
            if mask & bit != 0 {
                sum.sub_in(&doubled[i]);
                card -= 2;
            } else {
                sum.add_in(&doubled[i]);
                card += 2;
            }
            mask ^= bit;
            offer(&mut buckets, card, &sum, mask);
        }
        buckets
    });

    let mut merged: Buckets<T> = vec![None; n + 1];
    for part in partials {
        for (card, slot) in part.into_iter().enumerate() {
            if let Some((delta, mask)) = slot {
                let target = &mut merged[card];
                let better = match target {
                    None => true,
                    Some((d, m)) => (&delta, mask) < (&*d, *m),
                };
                if better {
                    *target = Some((delta, mask));
                }
            }
        }
    }
    merged
}

/// Every terminal `(difference, cardinality difference)` of the unpruned
/// tree in which each node replaces its two largest elements by their
/// difference (left) or sum (right). There are `2^(n-1)` of them.
pub fn enumerate_tree_terminals(instance: &Instance) -> Result<Vec<(Magnitude, i64)>> {
    let n = instance.len();
    if n > TREE_MAX_N {
        return Err(Error::TooLargeForOracle {
            n,
            limit: TREE_MAX_N,
        });
    }
    let list: Vec<(Magnitude, i64)> = instance.weights().iter().map(|w| (w.clone(), 1)).collect();
    let mut out = Vec::with_capacity(1 << (n - 1));
    expand(list, &mut out);
    Ok(out)
}

fn expand(mut list: Vec<(Magnitude, i64)>, out: &mut Vec<(Magnitude, i64)>) {
    if list.len() == 1 {
        out.push(list.pop().expect("one element"));
        return;
    }
    list.sort_by(|a, b| b.0.cmp(&a.0));
    let rest = list.split_off(2);
    let (x1, m1) = &list[0];
    let (x2, m2) = &list[1];

    let mut left = rest.clone();
    left.push((x1.abs_diff(x2), m1 - m2));
    expand(left, out);

    let mut right = rest;
    right.push((x1 + x2, m1 + m2));
    expand(right, out);
}
