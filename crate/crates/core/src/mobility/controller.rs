//! Per-UE composition of RLM, handover and re-establishment.

use super::{
    a3_step, conditional_ho_step, detect_pingpong, ho_progress, rlm_step, strongest_cell, EventKind,
    EventRecord, HoPhase, HoRecord, HoState, MobilityConfig, RlmState, TIME_EPS,
};
use crate::linklevel::SlidingMean;

/// Cell chosen after an outage: strongest filtered RSRP, lowest id on ties.
pub fn reestablish(l3_rsrp: &[f64]) -> usize {
    strongest_cell(l3_rsrp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Outage {
    until: f64,
    from: usize,
}

#[derive(Debug, Clone)]
pub struct UeMobility {
    pub ue_id: usize,
    serving: Option<usize>,
    rlm: RlmState,
    ho: HoState,
    sinr_l1: SlidingMean,
    outage: Option<Outage>,
    /// Accumulated time without a connection.
    pub outage_time: f64,
}

impl UeMobility {
    pub fn new(ue_id: usize, n_cells: usize, l1_window: usize) -> Self {
        Self {
            ue_id,
            serving: None,
            rlm: RlmState::default(),
            ho: HoState::new(n_cells),
            sinr_l1: SlidingMean::new(l1_window),
            outage: None,
            outage_time: 0.0,
        }
    }

    /// Initial cell selection or reconnection.
    pub fn connect(&mut self, cell: usize) {
        self.serving = Some(cell);
        self.outage = None;
        self.rlm = RlmState::default();
        self.ho.reset();
        self.sinr_l1.clear();
    }

    pub fn serving(&self) -> Option<usize> {
        self.serving
    }

    pub fn phase(&self) -> HoPhase {
        self.ho.phase
    }

    pub fn rlm(&self) -> &RlmState {
        &self.rlm
    }

    pub fn ho(&self) -> &HoState {
        &self.ho
    }

    pub fn in_outage(&self) -> bool {
        self.outage.is_some()
    }

    /// Advances one indication period.
    ///
    /// `l3_rsrp` holds the latest filtered RSRP per cell; `sinr_of(c)` is the
    /// instantaneous SINR this UE would see with `c` as its server.
    pub fn step<F: FnMut(usize) -> f64>(
        &mut self,
        now: f64,
        dt: f64,
        l3_rsrp: &[f64],
        mut sinr_of: F,
        cfg: &MobilityConfig,
        events: &mut Vec<EventRecord>,
    ) {
        if let Some(outage) = self.outage {
            self.outage_time += dt;
            if now + TIME_EPS >= outage.until {
                let cell = reestablish(l3_rsrp);
                events.push(self.event(now, EventKind::Reestablish, outage.from, Some(cell)));
                self.connect(cell);
            }
            return;
        }
        let Some(serving) = self.serving else {
            return;
        };

        self.sinr_l1.push(sinr_of(serving));
        let quality = self.sinr_l1.mean().unwrap_or(f64::NEG_INFINITY);

        match self.ho.phase {
            HoPhase::State1 => {
                if rlm_step(&mut self.rlm, quality, cfg, dt) {
                    self.fail(now, EventKind::Rlf, serving, None, cfg, events);
                } else if cfg.conditional_ho {
                    conditional_ho_step(&mut self.ho, l3_rsrp, serving, cfg, dt, now);
                } else {
                    a3_step(&mut self.ho, l3_rsrp, serving, cfg, dt, now);
                }
            }
            HoPhase::State2 => {
                let target = self.ho.target_cell;
                let rlf = rlm_step(&mut self.rlm, quality, cfg, dt);
                if let Some(kind) = ho_progress(&mut self.ho, &self.rlm, rlf, f64::NAN, cfg, now) {
                    self.fail(now, kind, serving, target, cfg, events);
                }
            }
            HoPhase::State3 => {
                let target = self.ho.target_cell.expect("State 3 has a target");
                self.ho.record_target_sinr(sinr_of(target));
                let target_quality = self.ho.target_sinr_mean().unwrap_or(f64::NEG_INFINITY);
                match ho_progress(&mut self.ho, &self.rlm, false, target_quality, cfg, now) {
                    Some(EventKind::HoSuccess) => self.complete(now, serving, target, cfg, events),
                    Some(kind) => self.fail(now, kind, serving, Some(target), cfg, events),
                    None => {}
                }
            }
        }
    }

    fn event(&self, time: f64, kind: EventKind, from_cell: usize, to_cell: Option<usize>) -> EventRecord {
        EventRecord {
            time,
            ue_id: self.ue_id,
            kind,
            from_cell,
            to_cell,
        }
    }

    fn complete(&mut self, now: f64, from: usize, to: usize, cfg: &MobilityConfig, events: &mut Vec<EventRecord>) {
        events.push(self.event(now, EventKind::HoSuccess, from, Some(to)));
        let record = HoRecord { from, to, time: now };
        if detect_pingpong(self.ho.last_ho, record, cfg) {
            events.push(self.event(now, EventKind::PingPong, from, Some(to)));
        }
        self.connect(to);
        self.ho.last_ho = Some(record);
    }

    fn fail(
        &mut self,
        now: f64,
        kind: EventKind,
        from: usize,
        to: Option<usize>,
        cfg: &MobilityConfig,
        events: &mut Vec<EventRecord>,
    ) {
        debug_assert!(kind.is_failure());
        events.push(self.event(now, kind, from, to));
        self.serving = None;
        self.rlm = RlmState::default();
        self.ho.reset();
        self.sinr_l1.clear();
        self.outage = Some(Outage {
            until: now + cfg.reestablish_delay,
            from,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT: f64 = 0.01;

    fn drive(
        ue: &mut UeMobility,
        steps: usize,
        start: usize,
        cfg: &MobilityConfig,
        mut rsrp: impl FnMut(usize) -> Vec<f64>,
        mut sinr: impl FnMut(usize, usize) -> f64,
    ) -> Vec<EventRecord> {
        let mut events = Vec::new();
        for k in start..start + steps {
            let r = rsrp(k);
            ue.step((k + 1) as f64 * DT, DT, &r, |c| sinr(k, c), cfg, &mut events);
        }
        events
    }

    #[test]
    fn static_good_link_is_quiet() {
        let cfg = MobilityConfig::default();
        let mut ue = UeMobility::new(0, 3, 5);
        ue.connect(0);
        let ev = drive(&mut ue, 6000, 0, &cfg, |_| vec![-70.0, -80.0, -85.0], |_, _| 10.0);
        assert!(ev.is_empty());
        assert_eq!(ue.outage_time, 0.0);
    }

    #[test]
    fn handover_success_switches_serving() {
        let cfg = MobilityConfig::default();
        let mut ue = UeMobility::new(3, 2, 5);
        ue.connect(0);
        let ev = drive(&mut ue, 100, 0, &cfg, |_| vec![-80.0, -70.0], |_, _| 5.0);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, EventKind::HoSuccess);
        assert_eq!((ev[0].from_cell, ev[0].to_cell), (0, Some(1)));
        // 16 steps of TTT, 5 of preparation, 4 of execution.
        assert!((ev[0].time - 0.25).abs() < 1e-9, "{}", ev[0].time);
        assert_eq!(ue.serving(), Some(1));
    }

    #[test]
    fn collapse_after_report_is_t310_hof() {
        let cfg = MobilityConfig { prep_delay: 0.2, ..Default::default() };
        let mut ue = UeMobility::new(0, 2, 1);
        ue.connect(0);
        // The serving link collapses once the A3 condition starts to hold.
        let ev = drive(&mut ue, 400, 0, &cfg, |_| vec![-80.0, -70.0], |_, c| if c == 0 { -30.0 } else { 5.0 });
        assert_eq!(ev[0].kind, EventKind::HofT310AtCommand);
        assert_eq!(ev[0].to_cell, Some(1));
        assert_eq!(ev[1].kind, EventKind::Reestablish);
        assert!((ev[1].time - ev[0].time - cfg.reestablish_delay).abs() < 1e-9);
        assert_eq!(ev[1].to_cell, Some(1));
    }

    #[test]
    fn rlf_then_reestablish_to_same_cell() {
        let cfg = MobilityConfig::default();
        let mut ue = UeMobility::new(0, 2, 5);
        ue.connect(0);
        let ev = drive(&mut ue, 200, 0, &cfg, |_| vec![-80.0, -81.0], |_, _| -20.0);
        assert_eq!(ev[0].kind, EventKind::Rlf);
        assert_eq!(ev[1].kind, EventKind::Reestablish);
        assert_eq!(ev[1].to_cell, Some(0));
        assert!((ue.outage_time - cfg.reestablish_delay).abs() < 1e-9);
    }

    #[test]
    fn equal_rsrp_reestablishes_to_lowest_id() {
        assert_eq!(reestablish(&[-90.0, -90.0, -90.0]), 0);
    }

    #[test]
    fn quick_return_is_pingpong() {
        let cfg = MobilityConfig::default();
        let mut ue = UeMobility::new(0, 2, 5);
        ue.connect(0);
        let ev = drive(
            &mut ue,
            80,
            0,
            &cfg,
            |k| if k < 40 { vec![-80.0, -70.0] } else { vec![-70.0, -80.0] },
            |_, _| 5.0,
        );
        let kinds: Vec<_> = ev.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EventKind::HoSuccess, EventKind::HoSuccess, EventKind::PingPong]);
    }

    #[test]
    fn conditional_ho_never_fails_at_command() {
        let cfg = MobilityConfig { conditional_ho: true, ..Default::default() };
        let mut ue = UeMobility::new(0, 2, 1);
        ue.connect(0);
        // Prepared at +1 dB, serving collapses before the +2 dB execute condition.
        let ev = drive(
            &mut ue,
            400,
            0,
            &cfg,
            |k| if k < 100 { vec![-80.0, -79.0] } else { vec![-80.0, -77.0] },
            |k, c| if c == 0 && k >= 30 { -30.0 } else { 5.0 },
        );
        assert!(ev.iter().all(|e| e.kind != EventKind::HofT310AtCommand));
        assert_eq!(ev[0].kind, EventKind::HoSuccess);
    }
}
