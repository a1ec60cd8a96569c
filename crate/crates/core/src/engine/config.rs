use crate::antenna::AntennaConfig;
use crate::error::{FieldIssue, Result, SimError};
use crate::linklevel::{LinkBudget, TrafficModel};
use crate::mobility::MobilityConfig;
use crate::propagation::PropagationConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentConfig {
    pub isd: f64,
    pub bs_height: f64,
    /// Radius of the disc confining UEs, in multiples of the ISD.
    pub bound_radius_factor: f64,
}

impl DeploymentConfig {
    pub fn bound_radius(&self) -> f64 {
        self.bound_radius_factor * self.isd
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub tx_power: f64,
    /// L1 sliding window length in samples.
    pub l1_window: usize,
    pub l3_k: u32,
    pub l3_period: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            tx_power: 46.0,
            l1_window: 5,
            l3_k: 4,
            l3_period: 0.040,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub ue_per_cell: usize,
    pub ue_height: f64,
    pub ue_speed_kmh: f64,
    pub duration: f64,
    pub warmup: f64,
    pub time_step: f64,
    pub seed: u64,
    pub sir_sample_period: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            ue_per_cell: 15,
            ue_height: 0.0,
            ue_speed_kmh: 30.0,
            duration: 60.0,
            warmup: 1.0,
            time_step: 0.010,
            seed: 1,
            sir_sample_period: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub deployment: DeploymentConfig,
    pub antenna: AntennaConfig,
    pub propagation: PropagationConfig,
    pub link: LinkConfig,
    pub traffic: TrafficModel,
    pub mobility: MobilityConfig,
    pub sim: SimConfig,
}

/// `Some(n)` when `period` is a positive integer multiple `n` of `step`.
pub(crate) fn steps_per(period: f64, step: f64) -> Option<usize> {
    let ratio = period / step;
    let n = ratio.round();
    (n >= 1.0 && (ratio - n).abs() < 1e-6).then_some(n as usize)
}

impl ScenarioConfig {
    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            tx_power: self.link.tx_power,
            noise_power: self.propagation.noise_dbm(),
        }
    }

    pub fn n_ues(&self) -> usize {
        crate::geometry::N_SITES * crate::geometry::SECTORS_PER_SITE * self.sim.ue_per_cell
    }

    pub fn issues(&self) -> Vec<FieldIssue> {
        let mut issues = Vec::new();
        let d = &self.deployment;
        if !(d.isd > 0.0) {
            issues.push(FieldIssue::new("deployment.isd", "must be positive"));
        }
        if !(d.bs_height >= 0.0) {
            issues.push(FieldIssue::new("deployment.bs_height", "must be non-negative"));
        }
        if !(d.bound_radius_factor > 0.0) {
            issues.push(FieldIssue::new("deployment.bound_radius_factor", "must be positive"));
        }
        self.antenna.validate(&mut issues);
        self.propagation.validate(&mut issues);
        self.traffic.validate(&mut issues);
        self.mobility.validate(&mut issues);
        if !self.link.tx_power.is_finite() {
            issues.push(FieldIssue::new("link.tx_power", "must be finite"));
        }
        if self.link.l1_window == 0 {
            issues.push(FieldIssue::new("link.l1_window", "must be at least 1"));
        }

        let s = &self.sim;
        if s.ue_per_cell == 0 {
            issues.push(FieldIssue::new("sim.ue_per_cell", "must be at least 1"));
        }
        if !(s.ue_height >= 0.0) {
            issues.push(FieldIssue::new("sim.ue_height", "must be non-negative"));
        }
        if !(s.ue_speed_kmh >= 0.0) {
            issues.push(FieldIssue::new("sim.ue_speed_kmh", "must be non-negative"));
        }
        if !(s.warmup >= 0.0) {
            issues.push(FieldIssue::new("sim.warmup", "must be non-negative"));
        }
        if !(s.duration >= s.warmup) {
            issues.push(FieldIssue::new("sim.duration", "must not be shorter than sim.warmup"));
        }
        if !(s.time_step > 0.0) {
            issues.push(FieldIssue::new("sim.time_step", "must be positive"));
        } else {
            for (name, period) in [
                ("mobility.indication_period", self.mobility.indication_period),
                ("link.l3_period", self.link.l3_period),
                ("sim.sir_sample_period", s.sir_sample_period),
                ("sim.warmup", s.warmup.max(s.time_step)),
            ] {
                if steps_per(period, s.time_step).is_none() {
                    issues.push(FieldIssue::new(name, "must be a whole multiple of sim.time_step"));
                }
            }
        }
        issues
    }

    pub fn validate(&self) -> Result<()> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(issues))
        }
    }
}
