use serde::{Serialize, Serializer};

use crate::assignment::CardinalityConstraint;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::heuristics::bldm;
use crate::magnitude::Magnitude;
use crate::report::{SearchLimits, SolveReport};
use crate::search::{cbldm_solve, ckk_solve};

use super::format_sig;
use super::generator::{derive_seed, gen_instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverMode {
    Ckk,
    Cbldm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetRule {
    /// `|m| = n mod 2`.
    Balanced,
    Fixed(u64),
}

impl TargetRule {
    pub fn constraint(self, n: usize) -> Result<CardinalityConstraint> {
        match self {
            TargetRule::Balanced => Ok(CardinalityConstraint::balanced(n)),
            TargetRule::Fixed(t) => CardinalityConstraint::target_abs(t, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub bits: u32,
    pub n_values: Vec<usize>,
    pub instances_per_n: usize,
    pub mode: SolverMode,
    /// Ignored in [`SolverMode::Ckk`].
    pub target: TargetRule,
    pub limits: SearchLimits,
    pub base_seed: u64,
    pub exec: Exec,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 {
            return Err(Error::Config("bit width must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::Config("no instance sizes given".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::Config("instance sizes must be at least 1".into()));
        }
        if self.instances_per_n == 0 {
            return Err(Error::Config("need at least one instance per size".into()));
        }
        if self.mode == SolverMode::Cbldm {
            for &n in &self.n_values {
                self.target.constraint(n)?;
            }
        }
        Ok(())
    }
}

/// Aggregate over the instances of one size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub mean_nodes: f64,
    pub median_nodes: f64,
    /// Fraction of instances whose best difference is at most one.
    pub fraction_perfect: f64,
    /// Mean best difference over instances that produced a solution,
    /// 12 significant digits.
    pub mean_delta: String,
}

/// Outcome of one solver run inside a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSample {
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    pub nodes: u64,
    pub delta: Option<Magnitude>,
    pub proven: bool,
}

impl SweepSample {
    pub fn is_perfect(&self) -> bool {
        self.delta.as_ref().is_some_and(|d| d.bits() <= 1)
    }
}

/// Solves `instances_per_n` seeded instances for every size and returns
/// the individual runs in (n, index) order.
pub fn phase_samples(config: &SweepConfig) -> Result<Vec<SweepSample>> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.instances_per_n).map(move |i| (n, i)))
        .collect();
    config
        .exec
        .map(&jobs, |&(n, index)| run_one(config, n, index))
        .into_iter()
        .collect()
}

fn run_one(config: &SweepConfig, n: usize, index: usize) -> Result<SweepSample> {
    let seed = derive_seed(config.base_seed, n as u64, index as u64);
    let instance = gen_instance(config.bits, n, seed)?;
    let report: SolveReport = match config.mode {
        SolverMode::Ckk => ckk_solve(&instance, config.limits, |_| {}),
        SolverMode::Cbldm => cbldm_solve(
            &instance,
            config.target.constraint(n)?,
            config.limits,
            |_| {},
        )?,
    };
    Ok(SweepSample {
        n,
        index,
        seed,
        nodes: report.nodes_generated,
        delta: report.best_delta().cloned(),
        proven: report.is_proven_optimal(),
    })
}

/// Node counts and perfect-partition fraction per instance size.
pub fn phase_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let samples = phase_samples(config)?;
    Ok(config
        .n_values
        .iter()
        .map(|&n| {
            let group: Vec<&SweepSample> = samples.iter().filter(|s| s.n == n).collect();
            summarize(n, &group)
        })
        .collect())
}

fn summarize(n: usize, group: &[&SweepSample]) -> SweepRow {
    let count = group.len() as f64;
    let mut nodes: Vec<u64> = group.iter().map(|s| s.nodes).collect();
    nodes.sort_unstable();
    let mean_nodes = nodes.iter().map(|&x| x as f64).sum::<f64>() / count;
    let mid = nodes.len() / 2;
    let median_nodes = if nodes.len() % 2 == 1 {
        nodes[mid] as f64
    } else {
        (nodes[mid - 1] as f64 + nodes[mid] as f64) / 2.0
    };
    let perfect = group.iter().filter(|s| s.is_perfect()).count() as f64;
    let solved: Vec<&Magnitude> = group.iter().filter_map(|s| s.delta.as_ref()).collect();
    let mean_delta = if solved.is_empty() {
        String::new()
    } else {
        let total: Magnitude = solved.iter().copied().sum();
        format_sig(total.ratio_f64(&Magnitude::from(solved.len() as u64)))
    };
    SweepRow {
        n,
        mean_nodes,
        median_nodes,
        fraction_perfect: perfect / count,
        mean_delta,
    }
}

fn serialize_sig<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_sig(*x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub trials: usize,
    /// Mean BLDM difference divided by `2^(2n)`.
    #[serde(serialize_with = "serialize_sig")]
    pub mean_normalized_delta: f64,
}

/// BLDM on `2n`-bit weights, difference scaled by `2^(-2n)` to mimic
/// weights drawn from `[0, 1)` with unbounded precision.
pub fn bldm_scaling(
    n_values: &[usize],
    trials: usize,
    base_seed: u64,
    exec: Exec,
) -> Result<Vec<ScalingRow>> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    if let Some(&n) = n_values.iter().find(|&&n| n < 4) {
        return Err(Error::Config(format!(
            "scaling sizes must be at least 4, got {n}"
        )));
    }
    let jobs: Vec<(usize, usize)> = n_values
        .iter()
        .flat_map(|&n| (0..trials).map(move |i| (n, i)))
        .collect();
    let values = exec
        .map(&jobs, |&(n, i)| -> Result<f64> {
            let bits = 2 * n as u32;
            let instance = gen_instance(bits, n, derive_seed(base_seed, n as u64, i as u64))?;
            Ok(bldm(&instance).delta().to_f64_scaled(bits as u64))
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(n_values
        .iter()
        .enumerate()
        .map(|(row, &n)| {
            let chunk = &values[row * trials..(row + 1) * trials];
            ScalingRow {
                n,
                trials,
                mean_normalized_delta: chunk.iter().sum::<f64>() / trials as f64,
            }
        })
        .collect())
}
