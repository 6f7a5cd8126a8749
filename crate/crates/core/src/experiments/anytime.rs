use serde::Serialize;

use crate::assignment::CardinalityConstraint;
use crate::error::Result;
use crate::instance::Instance;
use crate::magnitude::Magnitude;
use crate::report::{ImprovementEvent, SearchLimits, SolveReport};
use crate::search::cbldm_solve;

/// One improvement of the incumbent: the first solution's difference
/// divided by the current one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub nodes: u64,
    pub ratio: f64,
}

/// Converts an improvement trace into ratio points. A zero current
/// difference gives an infinite ratio, except on the first point.
pub fn trace_points(trace: &[ImprovementEvent]) -> Vec<TracePoint> {
    let Some(first) = trace.first() else {
        return Vec::new();
    };
    let initial: &Magnitude = &first.delta;
    trace
        .iter()
        .enumerate()
        .map(|(i, event)| TracePoint {
            nodes: event.nodes_at_event,
            ratio: if i == 0 {
                1.0
            } else {
                initial.ratio_f64(&event.delta)
            },
        })
        .collect()
}

/// Runs the complete BLDM search and returns its ratio trace together with
/// the full report.
pub fn anytime_trace(
    instance: &Instance,
    constraint: CardinalityConstraint,
    limits: SearchLimits,
) -> Result<(Vec<TracePoint>, SolveReport)> {
    let report = cbldm_solve(instance, constraint, limits, |_| {})?;
    Ok((trace_points(&report.trace), report))
}
