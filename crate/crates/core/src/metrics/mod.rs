//! Aggregation of event logs into mobility metrics, plus CSV and SVG export.

mod export;
mod svg;

pub use export::{events_csv, sirmap_csv, sweep_csv, trace_csv, SWEEP_HEADER};
pub use svg::{sir_percentile_svg, sweep_metric_svg, trace_svg, SWEEP_SVG_METRICS};

use crate::error::{Result, SimError};
use crate::mobility::{EventKind, EventRecord};

/// HOF counts per cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HofByCause {
    pub rlf_in_state2: u64,
    pub t310_at_command: u64,
    pub pdcch_state3: u64,
}

impl HofByCause {
    pub fn total(&self) -> u64 {
        self.rlf_in_state2 + self.t310_at_command + self.pdcch_state3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobilityMetrics {
    /// Attempted handovers (successes and failures) per UE-minute.
    pub ho_rate: f64,
    /// Radio link failures outside handover per UE-minute.
    pub rlf_rate: f64,
    pub hof_ratio: f64,
    pub pp_ratio: f64,
    pub hof_by_cause: HofByCause,
    pub ho_success: u64,
    pub rlf_count: u64,
    pub pingpong_count: u64,
    pub sir_p10: f64,
    pub sir_p50: f64,
    pub sir_p90: f64,
    pub outage_fraction: f64,
    pub resource_utilization: f64,
    pub ue_time: f64,
}

impl MobilityMetrics {
    /// HOF count per UE-minute.
    pub fn hof_rate(&self) -> f64 {
        self.hof_by_cause.total() as f64 / (self.ue_time / 60.0)
    }
}

/// Nearest-rank percentile: the smallest sample with at least `p`% of the
/// samples at or below it. NaN for an empty set.
pub fn percentile(samples: &[f64], p: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    percentile_sorted(&sorted, p)
}

fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let n = sorted.len();
    let rank = ((p / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Aggregates one or more drops' worth of records.
///
/// `loads` are per-cell resource utilizations; their mean is reported.
pub fn aggregate(
    events: &[EventRecord],
    ue_time: f64,
    sir_samples: &[f64],
    loads: &[f64],
    outage_time: f64,
) -> Result<MobilityMetrics> {
    if !(ue_time > 0.0) {
        return Err(SimError::EmptyMeasurement);
    }
    let mut hof = HofByCause::default();
    let (mut success, mut rlf, mut pingpong) = (0u64, 0u64, 0u64);
    for e in events {
        match e.kind {
            EventKind::HoSuccess => success += 1,
            EventKind::HofRlfInState2 => hof.rlf_in_state2 += 1,
            EventKind::HofT310AtCommand => hof.t310_at_command += 1,
            EventKind::HofPdcchState3 => hof.pdcch_state3 += 1,
            EventKind::Rlf => rlf += 1,
            EventKind::PingPong => pingpong += 1,
            EventKind::Reestablish => {}
        }
    }
    let minutes = ue_time / 60.0;
    let failed = hof.total();
    let attempted = success + failed;
    let mut sorted = sir_samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(MobilityMetrics {
        ho_rate: attempted as f64 / minutes,
        rlf_rate: rlf as f64 / minutes,
        hof_ratio: if attempted > 0 { failed as f64 / attempted as f64 } else { 0.0 },
        pp_ratio: if success > 0 { pingpong as f64 / success as f64 } else { 0.0 },
        hof_by_cause: hof,
        ho_success: success,
        rlf_count: rlf,
        pingpong_count: pingpong,
        sir_p10: percentile_sorted(&sorted, 10.0),
        sir_p50: percentile_sorted(&sorted, 50.0),
        sir_p90: percentile_sorted(&sorted, 90.0),
        outage_fraction: outage_time / ue_time,
        resource_utilization: if loads.is_empty() { 0.0 } else { loads.iter().sum::<f64>() / loads.len() as f64 },
        ue_time,
    })
}
