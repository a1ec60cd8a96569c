//! Per-step received power and SINR, measurement filtering, and the
//! load model that couples interference to resource utilization.

mod filter;
mod load;

pub use filter::{l3_coefficient, l3_filter, FilterState, SlidingMean};
pub use load::{
    draw_activity, solve_coupled_load, spectral_efficiency, LoadProblem, LoadSolution, TrafficKind,
    TrafficModel, MAX_LOAD_ITERATIONS, LOAD_TOLERANCE,
};

use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    pub tx_power: f64,
    pub noise_power: f64,
}

/// Wideband received-power proxy of one cell.
#[inline]
pub fn rsrp_dbm(budget: &LinkBudget, coupling_loss: f64) -> f64 {
    budget.tx_power - coupling_loss
}

/// `S / (Σ aᵢ·Iᵢ + N)` evaluated in milliwatts. With no interferers this is
/// the SNR; `noise` may be `-inf`.
pub fn sinr_db(serving_rsrp: f64, interferer_rsrp: &[f64], activity: &[f64], noise: f64) -> f64 {
    assert_eq!(interferer_rsrp.len(), activity.len(), "one activity per interferer");
    let interference: f64 = interferer_rsrp
        .iter()
        .zip(activity)
        .map(|(&i, &a)| a * db_to_linear(i))
        .sum();
    linear_to_db(db_to_linear(serving_rsrp) / (interference + db_to_linear(noise)))
}

/// Per-step record of what one UE measured.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSnapshot {
    pub timestamp: f64,
    pub serving_cell: Option<usize>,
    pub serving_sinr: f64,
    /// Filtered RSRP per cell, dBm.
    pub rsrp: Vec<f64>,
}
