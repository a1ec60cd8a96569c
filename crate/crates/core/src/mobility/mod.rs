//! Radio link monitoring, the three-phase handover process, failure
//! classification and ping-pong detection.
//!
//! Failures are classified once per incident: a radio link failure while a
//! handover is being prepared counts as a handover failure and never also as
//! an RLF.

mod controller;
mod handover;
mod rlm;

pub use controller::{reestablish, UeMobility};
pub use handover::{a3_step, conditional_ho_step, ho_progress, HoPhase, HoRecord, HoState};
pub use rlm::{rlm_step, RlmState};

use std::fmt;
use std::str::FromStr;

use crate::error::FieldIssue;

/// Slack for comparing accumulated float time against thresholds.
pub(crate) const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MobilityConfig {
    pub a3_offset: f64,
    pub ttt: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub n310: u32,
    pub n311: u32,
    pub t310: f64,
    pub indication_period: f64,
    pub prep_delay: f64,
    pub exec_time: f64,
    pub pp_window: f64,
    pub reestablish_delay: f64,
    pub conditional_ho: bool,
    pub cho_prepare_offset: f64,
    pub cho_execute_offset: f64,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        Self {
            a3_offset: 2.0,
            ttt: 0.160,
            q_in: -6.0,
            q_out: -8.0,
            n310: 10,
            n311: 2,
            t310: 1.0,
            indication_period: 0.010,
            prep_delay: 0.050,
            exec_time: 0.040,
            pp_window: 1.0,
            reestablish_delay: 0.200,
            conditional_ho: false,
            cho_prepare_offset: 0.0,
            cho_execute_offset: 2.0,
        }
    }
}

impl MobilityConfig {
    pub fn validate(&self, issues: &mut Vec<FieldIssue>) {
        if !(self.q_in > self.q_out) {
            issues.push(FieldIssue::new("mobility.q_in", "must be greater than mobility.q_out"));
        }
        if !(self.ttt >= 0.0) {
            issues.push(FieldIssue::new("mobility.ttt", "must be non-negative"));
        }
        if !(self.pp_window > 0.0) {
            issues.push(FieldIssue::new("mobility.pp_window", "must be positive"));
        }
        if self.n310 == 0 {
            issues.push(FieldIssue::new("mobility.n310", "must be at least 1"));
        }
        if self.n311 == 0 {
            issues.push(FieldIssue::new("mobility.n311", "must be at least 1"));
        }
        for (name, v) in [
            ("mobility.t310", self.t310),
            ("mobility.prep_delay", self.prep_delay),
            ("mobility.exec_time", self.exec_time),
            ("mobility.reestablish_delay", self.reestablish_delay),
        ] {
            if !(v >= 0.0) {
                issues.push(FieldIssue::new(name, "must be non-negative"));
            }
        }
        if !(self.indication_period > 0.0) {
            issues.push(FieldIssue::new("mobility.indication_period", "must be positive"));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    HoSuccess,
    HofRlfInState2,
    HofT310AtCommand,
    HofPdcchState3,
    Rlf,
    PingPong,
    Reestablish,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::HoSuccess,
        EventKind::HofRlfInState2,
        EventKind::HofT310AtCommand,
        EventKind::HofPdcchState3,
        EventKind::Rlf,
        EventKind::PingPong,
        EventKind::Reestablish,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::HoSuccess => "HO_SUCCESS",
            EventKind::HofRlfInState2 => "HOF_RLF_IN_STATE2",
            EventKind::HofT310AtCommand => "HOF_T310_AT_COMMAND",
            EventKind::HofPdcchState3 => "HOF_PDCCH_STATE3",
            EventKind::Rlf => "RLF",
            EventKind::PingPong => "PINGPONG",
            EventKind::Reestablish => "REESTABLISH",
        }
    }

    pub fn is_hof(self) -> bool {
        matches!(
            self,
            EventKind::HofRlfInState2 | EventKind::HofT310AtCommand | EventKind::HofPdcchState3
        )
    }

    /// Kinds that end a connection and start re-establishment.
    pub fn is_failure(self) -> bool {
        self.is_hof() || self == EventKind::Rlf
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown event kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub ue_id: usize,
    pub kind: EventKind,
    pub from_cell: usize,
    pub to_cell: Option<usize>,
}

/// A handover back to the cell just left, within the ping-pong window.
pub fn detect_pingpong(last: Option<HoRecord>, new: HoRecord, cfg: &MobilityConfig) -> bool {
    match last {
        Some(last) => new.to == last.from && new.from == last.to && new.time - last.time < cfg.pp_window,
        None => false,
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn strongest_cell(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ho(from: usize, to: usize, time: f64) -> HoRecord {
        HoRecord { from, to, time }
    }

    #[test]
    fn pingpong_examples() {
        let cfg = MobilityConfig::default();
        assert!(detect_pingpong(Some(ho(0, 1, 10.0)), ho(1, 0, 10.9), &cfg));
        assert!(!detect_pingpong(Some(ho(0, 1, 10.0)), ho(1, 0, 11.1), &cfg));
        assert!(!detect_pingpong(Some(ho(0, 1, 10.0)), ho(1, 2, 10.5), &cfg));
        assert!(!detect_pingpong(None, ho(1, 0, 10.5), &cfg));
    }

    #[test]
    fn strongest_ties_to_lowest() {
        assert_eq!(strongest_cell(&[-80.0, -80.0, -80.0]), 0);
        assert_eq!(strongest_cell(&[-90.0, -70.0, -70.0]), 1);
        assert_eq!(strongest_cell(&[f64::NEG_INFINITY, -100.0]), 1);
    }

    #[test]
    fn event_kind_names_round_trip() {
        for k in EventKind::ALL {
            assert_eq!(k.as_str().parse::<EventKind>().unwrap(), k);
        }
        assert_eq!(EventKind::ALL.iter().filter(|k| k.is_hof()).count(), 3);
    }

    #[test]
    fn validate_rejects_inverted_thresholds() {
        let mut issues = Vec::new();
        MobilityConfig { q_in: -9.0, q_out: -8.0, ..Default::default() }.validate(&mut issues);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].field, "mobility.q_in");
    }
}
