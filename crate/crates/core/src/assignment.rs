use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::magnitude::Magnitude;

/// A two-way partition of an instance, one sign per original index
/// (`+1` for the first subset, `-1` for the second), with its partition
/// difference and cardinality difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionAssignment {
    signs: Vec<i8>,
    delta: Magnitude,
    card_diff: i64,
}

impl PartitionAssignment {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `|sum_i signs_i * x_i|`.
    pub fn delta(&self) -> &Magnitude {
        &self.delta
    }

    /// `sum_i signs_i`, i.e. `2|A| - n`.
    pub fn card_diff(&self) -> i64 {
        self.card_diff
    }

    /// Signs rendered as a string of `+` and `-`.
    pub fn sign_string(&self) -> String {
        self.signs
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect()
    }
}

/// Evaluates a sign vector against an instance exactly.
pub fn evaluate(instance: &Instance, signs: &[i8]) -> Result<PartitionAssignment> {
    if signs.len() != instance.len() {
        return Err(Error::LengthMismatch {
            expected: instance.len(),
            found: signs.len(),
        });
    }
    let mut plus = Magnitude::zero();
    let mut minus = Magnitude::zero();
    let mut card_diff = 0i64;
    for (index, (&s, w)) in signs.iter().zip(instance.weights()).enumerate() {
        match s {
            1 => plus += w,
            -1 => minus += w,
            value => return Err(Error::InvalidSign { index, value }),
        }
        card_diff += s as i64;
    }
    Ok(PartitionAssignment {
        signs: signs.to_vec(),
        delta: plus.abs_diff(&minus),
        card_diff,
    })
}

/// A list element carrying an effective cardinality: the net number of
/// original elements it represents, counted with sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedElement {
    pub value: Magnitude,
    pub card: i64,
}

impl WeightedElement {
    pub fn new(value: Magnitude, card: i64) -> Self {
        WeightedElement { value, card }
    }

    /// The starting list for an instance: every element has cardinality 1.
    pub fn from_instance(instance: &Instance) -> Vec<WeightedElement> {
        instance
            .weights()
            .iter()
            .map(|w| WeightedElement::new(w.clone(), 1))
            .collect()
    }
}

/// Constraint on `|m|`, the absolute cardinality difference of the final
/// partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CardinalityConstraint {
    Unconstrained,
    TargetAbs(u64),
}

impl CardinalityConstraint {
    /// `|m| = target`, checked against the instance size. Since `m` always
    /// has the parity of `n`, a target of the other parity is unreachable.
    pub fn target_abs(target: u64, n: usize) -> Result<Self> {
        let c = CardinalityConstraint::TargetAbs(target);
        c.validate(n)?;
        Ok(c)
    }

    /// The balanced problem, `|m| <= 1`, which for a given `n` means
    /// `|m| = n mod 2`.
    pub fn balanced(n: usize) -> Self {
        CardinalityConstraint::TargetAbs((n % 2) as u64)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            CardinalityConstraint::Unconstrained => Ok(()),
            CardinalityConstraint::TargetAbs(target) => {
                if target > n as u64 {
                    Err(Error::TargetTooLarge { target, n })
                } else if target % 2 != (n % 2) as u64 {
                    Err(Error::TargetParity { target, n })
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn target(&self) -> Option<u64> {
        match *self {
            CardinalityConstraint::Unconstrained => None,
            CardinalityConstraint::TargetAbs(t) => Some(t),
        }
    }

    pub fn admits(&self, card_diff: i64) -> bool {
        match *self {
            CardinalityConstraint::Unconstrained => true,
            CardinalityConstraint::TargetAbs(t) => card_diff.unsigned_abs() == t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(w: &[u64]) -> Instance {
        Instance::from_u64s(w).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let a = evaluate(&inst(&[8, 7, 6, 5, 4]), &[1, 1, -1, -1, -1]).unwrap();
        assert_eq!(a.delta(), &Magnitude::zero());
        assert_eq!(a.card_diff(), -1);
        assert_eq!(a.sign_string(), "++---");

        let a = evaluate(&inst(&[5]), &[1]).unwrap();
        assert_eq!(
            (a.delta().clone(), a.card_diff()),
            (Magnitude::from(5u64), 1)
        );

        let a = evaluate(&inst(&[3, 3]), &[1, -1]).unwrap();
        assert_eq!((a.delta().clone(), a.card_diff()), (Magnitude::zero(), 0));
    }

    #[test]
    fn evaluate_errors() {
        assert_eq!(
            evaluate(&inst(&[1, 2]), &[1]),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            evaluate(&inst(&[1, 2]), &[1, 0]),
            Err(Error::InvalidSign { index: 1, value: 0 })
        );
    }

    #[test]
    fn constraint_validation() {
        assert_eq!(
            CardinalityConstraint::balanced(5),
            CardinalityConstraint::TargetAbs(1)
        );
        assert_eq!(
            CardinalityConstraint::balanced(4),
            CardinalityConstraint::TargetAbs(0)
        );
        assert!(CardinalityConstraint::target_abs(5, 5).is_ok());
        assert_eq!(
            CardinalityConstraint::target_abs(2, 5),
            Err(Error::TargetParity { target: 2, n: 5 })
        );
        assert_eq!(
            CardinalityConstraint::target_abs(7, 5),
            Err(Error::TargetTooLarge { target: 7, n: 5 })
        );
        assert!(CardinalityConstraint::TargetAbs(1).admits(-1));
        assert!(!CardinalityConstraint::TargetAbs(1).admits(3));
    }

    fn instance_and_signs() -> impl Strategy<Value = (Vec<u64>, Vec<i8>)> {
        (1usize..24).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<u64>(), n),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n),
            )
        })
    }

    proptest! {
        #[test]
        fn parity_and_flip_symmetry((weights, signs) in instance_and_signs()) {
            let instance = inst(&weights);
            let a = evaluate(&instance, &signs).unwrap();
            prop_assert_eq!(a.delta().is_odd(), instance.total().is_odd());
            prop_assert_eq!(a.card_diff().rem_euclid(2), (weights.len() % 2) as i64);

            let flipped: Vec<i8> = signs.iter().map(|s| -s).collect();
            let b = evaluate(&instance, &flipped).unwrap();
            prop_assert_eq!(b.delta(), a.delta());
            prop_assert_eq!(b.card_diff(), -a.card_diff());
        }
    }
}
