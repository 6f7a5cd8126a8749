use num_bigint::BigUint;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};

use crate::error::{Error, Result};
use crate::instance::{Instance, InstanceMeta};
use crate::magnitude::Magnitude;

/// Identifies the generator below. Changing how instances are drawn must
/// change this string.
///
/// xoshiro256** seeded through SplitMix64 from the 64-bit seed. Each weight
/// takes `ceil(b / 64)` consecutive outputs as little-endian 64-bit limbs;
/// the most significant limb is masked to the remaining `b mod 64` bits.
/// Every output bit is uniform, so the masked value is exactly uniform on
/// `0..2^b` with no rejection step.
pub const GENERATOR_ID: &str = "xoshiro256starstar-splitmix64-v1";

/// `n` independent uniform `b`-bit weights.
pub fn gen_instance(bits: u32, n: usize, seed: u64) -> Result<Instance> {
    if bits == 0 {
        return Err(Error::Config("bit width must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let limbs = bits.div_ceil(64) as usize;
    let top_bits = bits - 64 * (limbs as u32 - 1);
    let top_mask = if top_bits == 64 {
        u64::MAX
    } else {
        (1u64 << top_bits) - 1
    };
    let weights = (0..n)
        .map(|_| {
            let mut digits = Vec::with_capacity(2 * limbs);
            for limb in 0..limbs {
                let mut word = rng.next_u64();
                if limb + 1 == limbs {
                    word &= top_mask;
                }
                digits.push(word as u32);
                digits.push((word >> 32) as u32);
            }
            Magnitude::from(BigUint::new(digits))
        })
        .collect();
    Ok(Instance::new(weights)?.with_meta(InstanceMeta {
        bit_width: bits,
        seed,
        source: GENERATOR_ID.to_string(),
    }))
}

fn mix(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

/// Seed for instance `index` of size `n` in an experiment seeded with
/// `base`. Rows and instances get unrelated streams.
pub fn derive_seed(base: u64, n: u64, index: u64) -> u64 {
    mix(mix(mix(base) ^ n) ^ index)
}
