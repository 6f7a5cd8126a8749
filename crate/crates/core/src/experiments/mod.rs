//! Seeded instance generation and the experiment pipelines: phase
//! transition sweeps, BLDM scaling and anytime progress traces.

mod anytime;
mod fit;
mod generator;
mod sweep;

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub use anytime::{anytime_trace, trace_points, TracePoint};
pub use fit::{fit_power_law, PowerLawFit};
pub use generator::{derive_seed, gen_instance, GENERATOR_ID};
pub use sweep::{
    bldm_scaling, phase_samples, phase_sweep, ScalingRow, SolverMode, SweepConfig, SweepRow,
    SweepSample, TargetRule,
};

/// Twelve significant digits in scientific notation.
pub fn format_sig(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

/// Writes `rows` as CSV with a header row taken from the field names.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    writer
        .flush()
        .map_err(|e| Error::Config(format!("csv: {e}")))
}
