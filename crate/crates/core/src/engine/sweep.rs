use rayon::prelude::*;

use super::config::ScenarioConfig;
use super::drop::{run_drop, DropResult};
use crate::error::{Result, SimError};
use crate::metrics::{aggregate, MobilityMetrics};
use crate::seeding::mix64;

/// Seed of drop `index` at a grid point.
pub fn drop_seed(seed_base: u64, index: usize) -> u64 {
    mix64(seed_base ^ mix64(index as u64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub height: f64,
    pub speed: f64,
    /// `seed + point_index`.
    pub seed_base: u64,
    pub metrics: MobilityMetrics,
    pub drops: Vec<DropResult>,
}

impl SweepPoint {
    pub fn load_converged(&self) -> bool {
        self.drops.iter().all(|d| d.load_converged)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Height-major, speed-minor order.
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn point(&self, height: f64, speed: f64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.height == height && p.speed == speed)
    }

    pub fn load_converged(&self) -> bool {
        self.points.iter().all(SweepPoint::load_converged)
    }
}

/// Pools the drops of one grid point.
pub fn aggregate_drops(drops: &[DropResult]) -> Result<MobilityMetrics> {
    let events: Vec<_> = drops.iter().flat_map(|d| d.events.iter().copied()).collect();
    let sir: Vec<f64> = drops.iter().flat_map(|d| d.sir_samples.iter().copied()).collect();
    // Cells without users carry no traffic and are left out of the utilization.
    let loads: Vec<f64> = drops
        .iter()
        .flat_map(|d| d.loads.iter().zip(&d.cell_users).filter(|(_, &n)| n > 0).map(|(&l, _)| l))
        .collect();
    let ue_time = drops.iter().map(|d| d.ue_time).sum();
    let outage = drops.iter().map(|d| d.outage_time).sum();
    aggregate(&events, ue_time, &sir, &loads, outage)
}

/// Runs `drops_per_point` drops at every (height, speed) pair.
pub fn run_sweep(base: &ScenarioConfig, heights: &[f64], speeds: &[f64], drops_per_point: usize) -> Result<SweepResult> {
    if heights.is_empty() || speeds.is_empty() {
        return Err(SimError::invalid("sweep", "height and speed lists must be non-empty"));
    }
    if drops_per_point == 0 {
        return Err(SimError::invalid("sweep.drops", "must be at least 1"));
    }
    base.validate()?;
    let grid: Vec<(f64, f64, u64)> = heights
        .iter()
        .flat_map(|&h| speeds.iter().map(move |&s| (h, s)))
        .enumerate()
        .map(|(i, (h, s))| (h, s, base.sim.seed.wrapping_add(i as u64)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|p| (0..drops_per_point).map(move |d| (p, d)))
        .collect();
    let results: Vec<Result<DropResult>> = jobs
        .par_iter()
        .map(|&(p, d)| {
            let (height, speed, seed_base) = grid[p];
            let mut cfg = base.clone();
            cfg.sim.ue_height = height;
            cfg.sim.ue_speed_kmh = speed;
            cfg.sim.seed = drop_seed(seed_base, d);
            run_drop(&cfg)
        })
        .collect();
    let mut results = results.into_iter();
    let mut points = Vec::with_capacity(grid.len());
    for &(height, speed, seed_base) in &grid {
        let drops = results.by_ref().take(drops_per_point).collect::<Result<Vec<_>>>()?;
        let metrics = aggregate_drops(&drops)?;
        points.push(SweepPoint {
            height,
            speed,
            seed_base,
            metrics,
            drops,
        });
    }
    Ok(SweepResult { points })
}
