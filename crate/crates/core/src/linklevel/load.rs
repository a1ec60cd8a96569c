//! Traffic model and the load/SINR fixed point.
//!
//! Under FTP traffic each UE alternates between downloading an object and
//! reading. A UE needs `s = bits / (B·SE)` seconds of its cell's full
//! bandwidth per object, so it occupies `s / (s + reading_time)` of the cell.
//! Spectral efficiency depends on neighbor loads through interference, which
//! makes per-cell load a fixed point. The map is monotone, so iterating from
//! zero load climbs to the least fixed point.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::FieldIssue;

pub const MAX_LOAD_ITERATIONS: usize = 100;
pub const LOAD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficKind {
    FullBuffer,
    Ftp,
}

impl fmt::Display for TrafficKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrafficKind::FullBuffer => "full_buffer",
            TrafficKind::Ftp => "ftp",
        })
    }
}

impl FromStr for TrafficKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "full_buffer" => Ok(TrafficKind::FullBuffer),
            "ftp" => Ok(TrafficKind::Ftp),
            other => Err(format!("expected `full_buffer` or `ftp`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficModel {
    pub kind: TrafficKind,
    pub ftp_object_bits: f64,
    pub ftp_reading_time: f64,
    /// Attenuation applied to Shannon capacity.
    pub se_factor: f64,
    /// bits/s/Hz cap.
    pub se_max: f64,
}

impl TrafficModel {
    pub fn full_buffer() -> Self {
        Self {
            kind: TrafficKind::FullBuffer,
            ..Self::ftp()
        }
    }

    pub fn ftp() -> Self {
        Self {
            kind: TrafficKind::Ftp,
            ftp_object_bits: 1.25e6,
            ftp_reading_time: 5.0,
            se_factor: 0.75,
            se_max: 6.0,
        }
    }

    pub fn validate(&self, issues: &mut Vec<FieldIssue>) {
        if !(self.ftp_object_bits >= 0.0) {
            issues.push(FieldIssue::new("traffic.ftp_object_bits", "must be non-negative"));
        }
        if !(self.ftp_reading_time > 0.0) {
            issues.push(FieldIssue::new("traffic.ftp_reading_time", "must be positive"));
        }
        if !(self.se_factor > 0.0) || !(self.se_max > 0.0) {
            issues.push(FieldIssue::new("traffic.se_factor", "spectral efficiency terms must be positive"));
        }
    }
}

/// Link abstraction: attenuated Shannon bound with a cap, bits/s/Hz.
pub fn spectral_efficiency(traffic: &TrafficModel, sinr_linear: f64) -> f64 {
    (traffic.se_factor * (1.0 + sinr_linear).log2()).min(traffic.se_max)
}

/// Static snapshot of who is served by whom and at what received power.
#[derive(Debug, Clone)]
pub struct LoadProblem<'a> {
    pub n_cells: usize,
    /// Serving cell per UE.
    pub serving: &'a [usize],
    /// Received power in mW, row-major UE × cell.
    pub rx_mw: &'a [f64],
    pub noise_mw: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadSolution {
    pub loads: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `max |F(ρ) - ρ|` at the returned loads.
    pub residual: f64,
}

impl LoadProblem<'_> {
    fn sinr(&self, ue: usize, loads: &[f64]) -> f64 {
        let row = &self.rx_mw[ue * self.n_cells..(ue + 1) * self.n_cells];
        let serving = self.serving[ue];
        let interference: f64 = row
            .iter()
            .zip(loads)
            .enumerate()
            .filter(|&(c, _)| c != serving)
            .map(|(_, (p, l))| p * l)
            .sum();
        row[serving] / (interference + self.noise_mw)
    }

    /// One application of the load map.
    pub fn apply<F: Fn(f64) -> f64>(&self, traffic: &TrafficModel, se: &F, loads: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.n_cells];
        if traffic.ftp_object_bits <= 0.0 {
            return next;
        }
        for ue in 0..self.serving.len() {
            let eff = se(self.sinr(ue, loads));
            let share = if eff > 0.0 {
                let service = traffic.ftp_object_bits / (self.bandwidth_hz * eff);
                service / (service + traffic.ftp_reading_time)
            } else {
                1.0
            };
            next[self.serving[ue]] += share;
        }
        next.iter_mut().for_each(|l| *l = l.min(1.0));
        next
    }
}

pub fn solve_coupled_load<F: Fn(f64) -> f64>(problem: &LoadProblem<'_>, traffic: &TrafficModel, se: F) -> LoadSolution {
    if traffic.kind == TrafficKind::FullBuffer {
        return LoadSolution {
            loads: vec![1.0; problem.n_cells],
            iterations: 0,
            converged: true,
            residual: 0.0,
        };
    }
    let mut loads = vec![0.0; problem.n_cells];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_LOAD_ITERATIONS {
        let next = problem.apply(traffic, &se, &loads);
        iterations += 1;
        let change = max_abs_diff(&next, &loads);
        loads = next;
        if change < LOAD_TOLERANCE {
            converged = true;
            break;
        }
    }
    let residual = max_abs_diff(&problem.apply(traffic, &se, &loads), &loads);
    LoadSolution {
        loads,
        iterations,
        converged,
        residual,
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Independent Bernoulli activity per cell for one step.
pub fn draw_activity<R: Rng + ?Sized>(loads: &[f64], rng: &mut R, out: &mut [f64]) {
    for (a, &l) in out.iter_mut().zip(loads) {
        *a = if l >= 1.0 {
            1.0
        } else if l <= 0.0 {
            0.0
        } else if rng.gen::<f64>() < l {
            1.0
        } else {
            0.0
        };
    }
}
