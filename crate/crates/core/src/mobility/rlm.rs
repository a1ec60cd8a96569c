use super::{MobilityConfig, TIME_EPS};

/// Out-of-sync / in-sync counters and the T310 timer.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RlmState {
    pub oos_count: u32,
    pub is_count: u32,
    /// Time T310 has been running; `None` when stopped.
    pub t310_elapsed: Option<f64>,
}

impl RlmState {
    pub fn t310_running(&self) -> bool {
        self.t310_elapsed.is_some()
    }
}

/// Processes one indication period of PDCCH quality. Returns true when T310
/// expires, in which case the state is left as it was at expiry.
///
/// Values inside `[q_out, q_in]` produce no indication and leave both
/// counters untouched.
pub fn rlm_step(rlm: &mut RlmState, sinr: f64, cfg: &MobilityConfig, dt: f64) -> bool {
    let was_running = rlm.t310_running();
    if sinr < cfg.q_out {
        rlm.oos_count += 1;
        rlm.is_count = 0;
        if !was_running && rlm.oos_count >= cfg.n310 {
            rlm.t310_elapsed = Some(0.0);
            return false;
        }
    } else if sinr > cfg.q_in {
        rlm.is_count += 1;
        rlm.oos_count = 0;
        if was_running && rlm.is_count >= cfg.n311 {
            *rlm = RlmState::default();
            return false;
        }
    }
    if let Some(elapsed) = rlm.t310_elapsed.as_mut() {
        *elapsed += dt;
        if *elapsed + TIME_EPS >= cfg.t310 {
            return true;
        }
    }
    false
}
