use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

/// Exact non-negative integer used for weights, subset sums and partition
/// differences.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Magnitude(BigUint);

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude(BigUint::zero())
    }

    pub fn from_biguint(value: BigUint) -> Self {
        Magnitude(value)
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.0.bit(0)
    }

    /// Number of significant bits; zero has zero bits.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Magnitude) -> Magnitude {
        match self.cmp(other) {
            Ordering::Less => Magnitude(&other.0 - &self.0),
            _ => Magnitude(&self.0 - &other.0),
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    /// `self / 2^shift` as a double, correct to within one unit in the last
    /// place regardless of how many bits `self` has.
    pub fn to_f64_scaled(&self, shift: u64) -> f64 {
        let bits = self.bits();
        if bits == 0 {
            return 0.0;
        }
        let drop = bits.saturating_sub(64);
        let top = (&self.0 >> drop).to_u64().expect("at most 64 bits remain");
        ldexp(top as f64, drop as i64 - shift as i64)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_scaled(0)
    }

    /// `self / other` as a double. Returns infinity when `other` is zero and
    /// `self` is not, NaN when both are zero.
    pub fn ratio_f64(&self, other: &Magnitude) -> f64 {
        if other.is_zero() {
            return if self.is_zero() {
                f64::NAN
            } else {
                f64::INFINITY
            };
        }
        if self.is_zero() {
            return 0.0;
        }
        // Keep ~64 significant bits in the integer quotient.
        let shift = 64 + other.bits() as i64 - self.bits() as i64;
        let quotient = if shift >= 0 {
            (&self.0 << shift as u64) / &other.0
        } else {
            &self.0 / (&other.0 << (-shift) as u64)
        };
        ldexp(quotient.to_f64().unwrap_or(f64::INFINITY), -shift)
    }
}

fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    // powi on a huge exponent underflows to zero before the product is taken,
    // so step in chunks that stay inside the normal range.
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

impl From<u64> for Magnitude {
    fn from(v: u64) -> Self {
        Magnitude(BigUint::from(v))
    }
}

impl From<u128> for Magnitude {
    fn from(v: u128) -> Self {
        Magnitude(BigUint::from(v))
    }
}

impl From<u32> for Magnitude {
    fn from(v: u32) -> Self {
        Magnitude(BigUint::from(v))
    }
}

impl From<BigUint> for Magnitude {
    fn from(v: BigUint) -> Self {
        Magnitude(v)
    }
}

impl FromStr for Magnitude {
    type Err = Error;

    /// Plain decimal digits only: no sign, no separators, no whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidMagnitude(s.to_string()));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Magnitude)
            .ok_or_else(|| Error::InvalidMagnitude(s.to_string()))
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add<&Magnitude> for &Magnitude {
    type Output = Magnitude;
    fn add(self, rhs: &Magnitude) -> Magnitude {
        Magnitude(&self.0 + &rhs.0)
    }
}

impl Add for Magnitude {
    type Output = Magnitude;
    fn add(self, rhs: Magnitude) -> Magnitude {
        Magnitude(self.0 + rhs.0)
    }
}

impl AddAssign<&Magnitude> for Magnitude {
    fn add_assign(&mut self, rhs: &Magnitude) {
        self.0 += &rhs.0;
    }
}

impl<'a> Sum<&'a Magnitude> for Magnitude {
    fn sum<I: Iterator<Item = &'a Magnitude>>(iter: I) -> Self {
        iter.fold(Magnitude::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Arithmetic needed by the differencing machinery. Implemented for `u128`
/// (used whenever twice the instance total fits) and for [`Magnitude`];
/// both paths must produce identical results.
pub(crate) trait Weight: Clone + Ord + Send + Sync + fmt::Debug {
    fn to_magnitude(&self) -> Magnitude;
    fn zero() -> Self;
    /// `self - smaller`, requires `self >= smaller`.
    fn minus(&self, smaller: &Self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn add_in(&mut self, other: &Self);
    fn sub_in(&mut self, other: &Self);
    /// `<= 1`, i.e. a perfect partition difference.
    fn is_perfect(&self) -> bool;
}

impl Weight for u128 {
    fn to_magnitude(&self) -> Magnitude {
        Magnitude::from(*self)
    }
    fn zero() -> Self {
        0
    }
    #[inline]
    fn minus(&self, smaller: &Self) -> Self {
        self - smaller
    }
    #[inline]
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    #[inline]
    fn add_in(&mut self, other: &Self) {
        *self += *other;
    }
    #[inline]
    fn sub_in(&mut self, other: &Self) {
        *self -= *other;
    }
    #[inline]
    fn is_perfect(&self) -> bool {
        *self <= 1
    }
}

impl Weight for Magnitude {
    fn to_magnitude(&self) -> Magnitude {
        self.clone()
    }
    fn zero() -> Self {
        Magnitude::zero()
    }
    fn minus(&self, smaller: &Self) -> Self {
        Magnitude(&self.0 - &smaller.0)
    }
    fn plus(&self, other: &Self) -> Self {
        Magnitude(&self.0 + &other.0)
    }
    fn add_in(&mut self, other: &Self) {
        self.0 += &other.0;
    }
    fn sub_in(&mut self, other: &Self) {
        self.0 -= &other.0;
    }
    fn is_perfect(&self) -> bool {
        self.bits() <= 1
    }
}

/// Largest total for which the `u128` path is used. Value pruning compares
/// `2 * max` against `sum + best`, both bounded by twice the total.
pub(crate) const FAST_PATH_TOTAL_BITS: u64 = 126;
