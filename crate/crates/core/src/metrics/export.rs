//! CSV writers. Every writer returns the full document so callers decide
//! where it goes; output bytes depend only on the input.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::engine::{SirMap, SweepResult, Trace};
use crate::mobility::EventRecord;

pub const SWEEP_HEADER: &str = "height_m,speed_kmh,ho_rate_per_ue_min,rlf_rate_per_ue_min,hof_ratio,pp_ratio,\
hof_state2_rlf,hof_t310_cmd,hof_state3_pdcch,sir_p10_db,sir_p50_db,sir_p90_db,outage_fraction,\
resource_utilization,drops,seed_base";

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.6}")
    }
}

fn cell(c: Option<usize>) -> String {
    c.map_or_else(String::new, |c| c.to_string())
}

pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &sweep.points {
        let m = &p.metrics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            num(p.height),
            num(p.speed),
            num(m.ho_rate),
            num(m.rlf_rate),
            num(m.hof_ratio),
            num(m.pp_ratio),
            m.hof_by_cause.rlf_in_state2,
            m.hof_by_cause.t310_at_command,
            m.hof_by_cause.pdcch_state3,
            num(m.sir_p10),
            num(m.sir_p50),
            num(m.sir_p90),
            num(m.outage_fraction),
            num(m.resource_utilization),
            p.drops.len(),
            p.seed_base,
        );
    }
    out
}

pub fn events_csv(events: &[EventRecord]) -> String {
    let mut out = String::from("time_s,ue_id,kind,from_cell,to_cell\n");
    for e in events {
        let _ = writeln!(out, "{},{},{},{},{}", num(e.time), e.ue_id, e.kind, e.from_cell, cell(e.to_cell));
    }
    out
}

/// Cells that served the UE or were a handover target during the trace.
pub(crate) fn tracked_cells(trace: &Trace) -> Vec<usize> {
    let mut cells: BTreeSet<usize> = trace.rows.iter().filter_map(|r| r.serving_cell).collect();
    for e in &trace.events {
        cells.insert(e.from_cell);
        cells.extend(e.to_cell);
    }
    cells.into_iter().collect()
}

/// One row per step: serving cell, serving SINR, L3 RSRP of the tracked
/// cells and the events logged at that step.
pub fn trace_csv(trace: &Trace) -> String {
    let cells = tracked_cells(trace);
    let mut out = String::from("time_s,ue_id,serving_cell,sinr_db");
    for c in &cells {
        let _ = write!(out, ",rsrp_cell{c}_dbm");
    }
    out.push_str(",events\n");
    let mut events = trace.events.iter().peekable();
    for row in &trace.rows {
        let _ = write!(out, "{},{},{},{}", num(row.time), trace.ue_id, cell(row.serving_cell), num(row.sinr_db));
        for &c in &cells {
            let _ = write!(out, ",{}", num(row.rsrp_db[c]));
        }
        let mut kinds = Vec::new();
        while let Some(e) = events.next_if(|e| e.time <= row.time + 1e-9) {
            kinds.push(e.kind.as_str());
        }
        let _ = writeln!(out, ",{}", kinds.join(";"));
    }
    out
}

pub fn sirmap_csv(map: &SirMap) -> String {
    let mut out = String::from("x_m,y_m,serving_cell,sir_db\n");
    for p in &map.points {
        let _ = writeln!(out, "{},{},{},{}", num(p.x), num(p.y), p.serving_cell, num(p.sir_db));
    }
    out
}
