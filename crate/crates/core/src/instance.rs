//! Problem instances and the line-oriented text format used to exchange them.
//!
//! The format is one non-negative decimal integer per line. Lines starting
//! with `#` are comments, blank lines are ignored, and there is no size
//! header. Writers emit LF line endings.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::magnitude::{Magnitude, FAST_PATH_TOTAL_BITS};

/// Where an instance came from, when it was generated rather than read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceMeta {
    pub bit_width: u32,
    pub seed: u64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    weights: Vec<Magnitude>,
    meta: Option<InstanceMeta>,
}

/// Parity of an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Instance {
    pub fn new(weights: Vec<Magnitude>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInstance);
        }
        Ok(Instance {
            weights,
            meta: None,
        })
    }

    pub fn from_u64s(weights: &[u64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| Magnitude::from(w)).collect())
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn weights(&self) -> &[Magnitude] {
        &self.weights
    }

    pub fn meta(&self) -> Option<&InstanceMeta> {
        self.meta.as_ref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false; instances hold at least one weight.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Magnitude {
        self.weights.iter().sum()
    }

    /// The weights as `u128` when the total is small enough for the
    /// fixed-width search path.
    pub(crate) fn fast_weights(&self) -> Option<Vec<u128>> {
        if self.total().bits() > FAST_PATH_TOTAL_BITS {
            return None;
        }
        self.weights.iter().map(Magnitude::to_u128).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w = line.parse::<Magnitude>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("expected a non-negative decimal integer, found {line:?}"),
            })?;
            weights.push(w);
        }
        Self::new(weights)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.meta {
            let _ = writeln!(
                out,
                "# source={} bits={} seed={} n={}",
                meta.source,
                meta.bit_width,
                meta.seed,
                self.len()
            );
        }
        for w in &self.weights {
            let _ = writeln!(out, "{w}");
        }
        out
    }
}

/// Sum of the weights and its parity. Every achievable partition difference
/// has this parity, so a difference of `parity as u8` is the best possible.
pub fn total_and_parity(instance: &Instance) -> (Magnitude, Parity) {
    let total = instance.total();
    let parity = if total.is_odd() {
        Parity::Odd
    } else {
        Parity::Even
    };
    (total, parity)
}
