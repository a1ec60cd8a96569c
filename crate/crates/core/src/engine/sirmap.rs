//! Downlink SIR sampled on a square grid over the confinement disc.
//!
//! Shadowing is off and LOS enters through its probability, so the map is a
//! deterministic function of the layout.

use super::config::ScenarioConfig;
use super::drop::SIR_CLAMP_DB;
use super::radio::RadioModel;
use crate::error::{Result, SimError};
use crate::geometry::{build_layout, Deployment, Point2};
use crate::metrics::percentile;
use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirPoint {
    pub x: f64,
    pub y: f64,
    pub serving_cell: usize,
    pub sir_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SirMap {
    pub height: f64,
    pub resolution: f64,
    pub points: Vec<SirPoint>,
}

impl SirMap {
    pub fn samples(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.sir_db).collect()
    }

    pub fn percentile(&self, p: f64) -> f64 {
        percentile(&self.samples(), p)
    }
}

/// SIR evaluator for one deployment and height.
pub struct SirMapper {
    radio: RadioModel,
    tx_power: Vec<f64>,
    loss: Vec<f64>,
}

impl SirMapper {
    pub fn new(deployment: &Deployment, config: &ScenarioConfig, height: f64) -> Self {
        let radio = RadioModel::new(
            deployment,
            &config.antenna,
            &config.propagation,
            height,
            config.deployment.bound_radius(),
            config.sim.seed,
            false,
        );
        Self {
            radio,
            tx_power: deployment.cells.iter().map(|c| c.tx_power).collect(),
            loss: vec![0.0; deployment.n_cells()],
        }
    }

    /// Serving cell and clamped SIR at `pos`.
    pub fn evaluate(&mut self, pos: Point2) -> (usize, f64) {
        self.radio.expected_coupling_losses(pos, &mut self.loss);
        let rx: Vec<f64> = self
            .loss
            .iter()
            .zip(&self.tx_power)
            .map(|(&cl, &tx)| db_to_linear(tx - cl))
            .collect();
        let mut serving = 0;
        for c in 1..rx.len() {
            if rx[c] > rx[serving] {
                serving = c;
            }
        }
        let interference: f64 = rx.iter().enumerate().filter(|&(c, _)| c != serving).map(|(_, &p)| p).sum();
        let sir = if interference > 0.0 {
            linear_to_db(rx[serving] / interference).clamp(-SIR_CLAMP_DB, SIR_CLAMP_DB)
        } else {
            SIR_CLAMP_DB
        };
        (serving, sir)
    }
}

/// Grid points `(i·r, j·r)` inside the disc of the given radius.
fn grid_points(radius: f64, resolution: f64) -> Vec<Point2> {
    let n = (radius / resolution).floor() as i64;
    let mut out = Vec::new();
    for j in -n..=n {
        for i in -n..=n {
            let p = Point2::new(i as f64 * resolution, j as f64 * resolution);
            if p.norm() <= radius {
                out.push(p);
            }
        }
    }
    out
}

pub(crate) fn sir_map_on(deployment: &Deployment, config: &ScenarioConfig, height: f64, resolution: f64) -> Result<SirMap> {
    if !(resolution > 0.0) {
        return Err(SimError::invalid("sirmap.resolution", "must be positive"));
    }
    let mut mapper = SirMapper::new(deployment, config, height);
    let points = grid_points(config.deployment.bound_radius(), resolution)
        .into_iter()
        .map(|p| {
            let (serving_cell, sir_db) = mapper.evaluate(p);
            SirPoint { x: p.x, y: p.y, serving_cell, sir_db }
        })
        .collect();
    Ok(SirMap { height, resolution, points })
}

/// SIR map of the configured deployment at `height`.
pub fn sir_map(config: &ScenarioConfig, height: f64, resolution: f64) -> Result<SirMap> {
    config.validate()?;
    let mut deployment = build_layout(config.deployment.isd, config.deployment.bs_height)?;
    deployment.set_tx_power(config.link.tx_power);
    sir_map_on(&deployment, config, height, resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::presets;

    fn rma() -> ScenarioConfig {
        presets::rma_ftp()
    }

    fn deployment(cfg: &ScenarioConfig) -> Deployment {
        let mut d = build_layout(cfg.deployment.isd, cfg.deployment.bs_height).unwrap();
        d.set_tx_power(cfg.link.tx_power);
        d
    }

    #[test]
    fn invariant_under_120_degree_rotation() {
        let cfg = rma();
        let d = deployment(&cfg);
        let mut mapper = SirMapper::new(&d, &cfg, 100.0);
        for &(x, y) in &[(100.0, 40.0), (-350.0, 610.0), (820.0, -275.0), (0.0, 1200.0)] {
            let p = Point2::new(x, y);
            let (_, s0) = mapper.evaluate(p);
            for turn in [120.0, 240.0] {
                let (_, s1) = mapper.evaluate(p.rotated(turn));
                assert!((s1 - s0).abs() < 0.1, "{p:?} turned {turn}: {s0} vs {s1}");
            }
        }
    }

    #[test]
    fn single_cell_clamps_to_ceiling() {
        let cfg = rma();
        let mut d = deployment(&cfg);
        d.n_sites = 1;
        d.site_positions.truncate(1);
        d.cells.truncate(1);
        let map = sir_map_on(&d, &cfg, 50.0, 200.0).unwrap();
        assert!(!map.points.is_empty());
        assert!(map.points.iter().all(|p| p.serving_cell == 0 && p.sir_db == SIR_CLAMP_DB));
    }

    #[test]
    fn grid_covers_disc_and_percentiles_are_ordered() {
        let cfg = rma();
        let map = sir_map(&cfg, 300.0, 250.0).unwrap();
        let r = cfg.deployment.bound_radius();
        assert!(map.points.iter().all(|p| p.x.hypot(p.y) <= r));
        assert!(map.points.iter().any(|p| p.x == 0.0 && p.y == 0.0));
        let (p10, p50, p90) = (map.percentile(10.0), map.percentile(50.0), map.percentile(90.0));
        assert!(p10 <= p50 && p50 <= p90);
        assert!(map.points.iter().all(|p| p.sir_db.abs() <= SIR_CLAMP_DB));
    }

    #[test]
    fn rejects_non_positive_resolution() {
        assert!(sir_map(&rma(), 100.0, 0.0).is_err());
        assert!(sir_map(&rma(), 100.0, -5.0).is_err());
    }
}
