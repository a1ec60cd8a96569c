//! A3 triggering with time-to-trigger, the preparation/execution phases and
//! conditional handover.

use super::{EventKind, MobilityConfig, RlmState, TIME_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoPhase {
    /// No handover in progress.
    State1,
    /// Report sent, waiting for the command from the source cell.
    State2,
    /// Command received, executing toward the target.
    State3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoRecord {
    pub from: usize,
    pub to: usize,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoState {
    pub phase: HoPhase,
    /// Per-cell time the entering condition has held.
    pub ttt_elapsed: Vec<f64>,
    pub target_cell: Option<usize>,
    pub command_due_at: f64,
    pub exec_done_at: f64,
    pub last_ho: Option<HoRecord>,
    /// Conditional handover: target whose command is already held.
    pub prepared_cell: Option<usize>,
    target_sinr_sum: f64,
    target_sinr_samples: u32,
}

impl HoState {
    pub fn new(n_cells: usize) -> Self {
        Self {
            phase: HoPhase::State1,
            ttt_elapsed: vec![0.0; n_cells],
            target_cell: None,
            command_due_at: f64::INFINITY,
            exec_done_at: f64::INFINITY,
            last_ho: None,
            prepared_cell: None,
            target_sinr_sum: 0.0,
            target_sinr_samples: 0,
        }
    }

    /// Back to State 1 with every timer cleared. History is kept.
    pub fn reset(&mut self) {
        self.phase = HoPhase::State1;
        self.ttt_elapsed.iter_mut().for_each(|t| *t = 0.0);
        self.target_cell = None;
        self.command_due_at = f64::INFINITY;
        self.exec_done_at = f64::INFINITY;
        self.prepared_cell = None;
        self.target_sinr_sum = 0.0;
        self.target_sinr_samples = 0;
    }

    fn enter_state3(&mut self, target: usize, now: f64, cfg: &MobilityConfig) {
        self.phase = HoPhase::State3;
        self.target_cell = Some(target);
        self.exec_done_at = now + cfg.exec_time;
        self.target_sinr_sum = 0.0;
        self.target_sinr_samples = 0;
    }

    /// Accumulates target-link quality seen during execution.
    pub fn record_target_sinr(&mut self, sinr: f64) {
        self.target_sinr_sum += sinr;
        self.target_sinr_samples += 1;
    }

    pub fn target_sinr_mean(&self) -> Option<f64> {
        (self.target_sinr_samples > 0).then(|| self.target_sinr_sum / self.target_sinr_samples as f64)
    }
}

/// Advances TTT timers for `rsrp[n] > rsrp[serving] + offset` and returns
/// the neighbor reaching the TTT, if any. Ties go to the higher RSRP, then
/// the lower cell id.
fn advance_ttt(ttt_elapsed: &mut [f64], rsrp: &[f64], serving: usize, offset: f64, ttt: f64, dt: f64) -> Option<usize> {
    let threshold = rsrp[serving] + offset;
    let mut best: Option<usize> = None;
    for (cell, elapsed) in ttt_elapsed.iter_mut().enumerate() {
        if cell == serving || !(rsrp[cell] > threshold) {
            *elapsed = 0.0;
            continue;
        }
        *elapsed += dt;
        if *elapsed + TIME_EPS >= ttt && best.map_or(true, |b| rsrp[cell] > rsrp[b]) {
            best = Some(cell);
        }
    }
    best
}

/// State 1 A3 evaluation. On a trigger the report is sent: the UE enters
/// State 2 and the command is due after the preparation delay.
pub fn a3_step(ho: &mut HoState, l3_rsrp: &[f64], serving: usize, cfg: &MobilityConfig, dt: f64, now: f64) -> Option<usize> {
    debug_assert_eq!(ho.phase, HoPhase::State1);
    let target = advance_ttt(&mut ho.ttt_elapsed, l3_rsrp, serving, cfg.a3_offset, cfg.ttt, dt)?;
    ho.ttt_elapsed.iter_mut().for_each(|t| *t = 0.0);
    ho.phase = HoPhase::State2;
    ho.target_cell = Some(target);
    ho.command_due_at = now + cfg.prep_delay;
    Some(target)
}

/// Conditional handover in State 1: a neighbor holding the prepare condition
/// for the TTT gets its command pre-delivered; once the prepared target
/// clears the execute offset the UE goes straight to State 3. Returns the
/// target when execution starts.
pub fn conditional_ho_step(
    ho: &mut HoState,
    l3_rsrp: &[f64],
    serving: usize,
    cfg: &MobilityConfig,
    dt: f64,
    now: f64,
) -> Option<usize> {
    debug_assert_eq!(ho.phase, HoPhase::State1);
    if let Some(cell) = advance_ttt(&mut ho.ttt_elapsed, l3_rsrp, serving, cfg.cho_prepare_offset, cfg.ttt, dt) {
        ho.prepared_cell = Some(cell);
    }
    let prepared = ho.prepared_cell?;
    if l3_rsrp[prepared] > l3_rsrp[serving] + cfg.cho_execute_offset {
        ho.ttt_elapsed.iter_mut().for_each(|t| *t = 0.0);
        ho.prepared_cell = None;
        ho.enter_state3(prepared, now, cfg);
        return Some(prepared);
    }
    None
}

/// Drives States 2 and 3. `rlf_declared` is this period's RLM outcome (only
/// meaningful in State 2); `target_sinr` is the target link quality over the
/// execution. Returns the incident kind when the handover ends; on failure
/// the state is reset, on success the caller performs the cell switch.
pub fn ho_progress(
    ho: &mut HoState,
    rlm: &RlmState,
    rlf_declared: bool,
    target_sinr: f64,
    cfg: &MobilityConfig,
    now: f64,
) -> Option<EventKind> {
    match ho.phase {
        HoPhase::State1 => None,
        HoPhase::State2 => {
            if rlf_declared {
                ho.reset();
                return Some(EventKind::HofRlfInState2);
            }
            if now + TIME_EPS >= ho.command_due_at {
                if rlm.t310_running() {
                    ho.reset();
                    return Some(EventKind::HofT310AtCommand);
                }
                let target = ho.target_cell.expect("State 2 has a target");
                ho.enter_state3(target, now, cfg);
            }
            None
        }
        HoPhase::State3 => {
            if now + TIME_EPS < ho.exec_done_at {
                return None;
            }
            if target_sinr < cfg.q_out {
                ho.reset();
                Some(EventKind::HofPdcchState3)
            } else {
                Some(EventKind::HoSuccess)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT: f64 = 0.01;

    fn run_a3(trace: &[[f64; 2]], cfg: &MobilityConfig) -> Option<usize> {
        let mut ho = HoState::new(2);
        for (i, r) in trace.iter().enumerate() {
            if a3_step(&mut ho, r, 0, cfg, DT, (i + 1) as f64 * DT).is_some() {
                return Some(i);
            }
        }
        None
    }

    #[test]
    fn entering_condition_is_strict() {
        let cfg = MobilityConfig::default();
        assert_eq!(run_a3(&vec![[-80.0, -78.0]; 100], &cfg), None);
    }

    #[test]
    fn report_after_ttt() {
        let cfg = MobilityConfig::default();
        assert_eq!(run_a3(&vec![[-80.0, -77.0]; 16], &cfg), Some(15));
        let mut trace = vec![[-80.0, -77.0]; 15];
        trace.push([-80.0, -85.0]);
        trace.extend(vec![[-80.0, -77.0]; 15]);
        assert_eq!(run_a3(&trace, &cfg), None);
    }

    #[test]
    fn report_enters_state2_with_command_due() {
        let cfg = MobilityConfig::default();
        let mut ho = HoState::new(3);
        let r = [-80.0, -70.0, -70.0];
        let mut hit = None;
        for i in 0..16 {
            hit = a3_step(&mut ho, &r, 0, &cfg, DT, (i + 1) as f64 * DT);
        }
        assert_eq!(hit, Some(1), "tie broken toward lower id");
        assert_eq!(ho.phase, HoPhase::State2);
        assert!((ho.command_due_at - 0.21).abs() < 1e-9);
    }

    fn state2(cfg: &MobilityConfig) -> HoState {
        let mut ho = HoState::new(2);
        let r = [-80.0, -70.0];
        for i in 0..16 {
            a3_step(&mut ho, &r, 0, cfg, DT, i as f64 * DT);
        }
        assert_eq!(ho.phase, HoPhase::State2);
        ho
    }

    #[test]
    fn t310_running_at_command_fails() {
        let cfg = MobilityConfig::default();
        let mut ho = state2(&cfg);
        let rlm = RlmState { oos_count: 10, is_count: 0, t310_elapsed: Some(0.02) };
        let due = ho.command_due_at;
        assert_eq!(ho_progress(&mut ho, &rlm, false, 0.0, &cfg, due), Some(EventKind::HofT310AtCommand));
        assert_eq!(ho.phase, HoPhase::State1);
    }

    #[test]
    fn rlf_in_state2_is_a_hof() {
        let cfg = MobilityConfig::default();
        let mut ho = state2(&cfg);
        let rlm = RlmState::default();
        assert_eq!(ho_progress(&mut ho, &rlm, true, 0.0, &cfg, 0.16), Some(EventKind::HofRlfInState2));
    }

    #[test]
    fn weak_target_fails_in_state3() {
        let cfg = MobilityConfig::default();
        let mut ho = state2(&cfg);
        let rlm = RlmState::default();
        let due = ho.command_due_at;
        assert_eq!(ho_progress(&mut ho, &rlm, false, 0.0, &cfg, due), None);
        assert_eq!(ho.phase, HoPhase::State3);
        let done = ho.exec_done_at;
        assert_eq!(ho_progress(&mut ho, &rlm, false, -9.0, &cfg, done - 0.01), None);
        assert_eq!(ho_progress(&mut ho, &rlm, false, -9.0, &cfg, done), Some(EventKind::HofPdcchState3));
    }

    #[test]
    fn healthy_handover_succeeds() {
        let cfg = MobilityConfig::default();
        let mut ho = state2(&cfg);
        let rlm = RlmState::default();
        let due = ho.command_due_at;
        ho_progress(&mut ho, &rlm, false, 5.0, &cfg, due);
        let done = ho.exec_done_at;
        assert_eq!(ho_progress(&mut ho, &rlm, false, 5.0, &cfg, done), Some(EventKind::HoSuccess));
    }

    #[test]
    fn conditional_prepare_then_execute() {
        let cfg = MobilityConfig { conditional_ho: true, ..Default::default() };
        let mut ho = HoState::new(2);
        // Prepare: neighbor 1 dB better for the TTT.
        for i in 0..16 {
            assert_eq!(conditional_ho_step(&mut ho, &[-80.0, -79.0], 0, &cfg, DT, i as f64 * DT), None);
        }
        assert_eq!(ho.prepared_cell, Some(1));
        assert_eq!(ho.phase, HoPhase::State1);
        // Execute as soon as it clears the execute offset, no preparation delay.
        let now = 0.5;
        assert_eq!(conditional_ho_step(&mut ho, &[-80.0, -77.5], 0, &cfg, DT, now), Some(1));
        assert_eq!(ho.phase, HoPhase::State3);
        assert!((ho.exec_done_at - (now + cfg.exec_time)).abs() < 1e-12);
    }
}
