//! Height-dependent LOS probability, log-distance path loss and shadowing.

mod shadowing;

pub use shadowing::{shadow_sigma, shadowing_db, GridWeights, ShadowField, ShadowGrid, DEFAULT_COMPONENTS};

use std::fmt;
use std::str::FromStr;

use crate::antenna::{composite_gain, AntennaConfig};
use crate::error::{FieldIssue, Result};
use crate::geometry::{angles_to, Deployment, Point2, UePose};
use crate::seeding::{hash_words, unit_interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Uma,
    Rma,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Uma => "uma",
            Scenario::Rma => "rma",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "uma" => Ok(Scenario::Uma),
            "rma" => Ok(Scenario::Rma),
            other => Err(format!("expected `uma` or `rma`, got `{other}`")),
        }
    }
}

/// Log-distance coefficients: `a + b·log10(d3d) + c·log10(fc_GHz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationConfig {
    pub scenario: Scenario,
    pub carrier_ghz: f64,
    /// UE height from which every link is LOS.
    pub los_full_height: f64,
    pub pl_los: PathLossCoefficients,
    pub pl_nlos: PathLossCoefficients,
    /// NLOS gain per meter of UE height above 1.5 m.
    pub pl_nlos_height_term: f64,
    pub sf_sigma_los: f64,
    pub sf_sigma_nlos: f64,
    pub sf_sigma_floor: f64,
    pub sf_height_scale: f64,
    pub sf_corr_distance: f64,
    /// Side of the square regions over which a link's LOS state is frozen.
    pub los_grid: f64,
    pub noise_figure: f64,
    pub bandwidth_mhz: f64,
}

impl PropagationConfig {
    pub fn uma() -> Self {
        Self {
            scenario: Scenario::Uma,
            carrier_ghz: 2.0,
            los_full_height: 100.0,
            pl_los: PathLossCoefficients { a: 28.0, b: 22.0, c: 20.0 },
            pl_nlos: PathLossCoefficients { a: 13.54, b: 39.08, c: 20.0 },
            pl_nlos_height_term: 0.6,
            sf_sigma_los: 4.0,
            sf_sigma_nlos: 6.0,
            sf_sigma_floor: 1.0,
            sf_height_scale: 100.0,
            sf_corr_distance: 50.0,
            los_grid: 50.0,
            noise_figure: 9.0,
            bandwidth_mhz: 10.0,
        }
    }

    pub fn rma() -> Self {
        Self {
            scenario: Scenario::Rma,
            carrier_ghz: 0.7,
            ..Self::uma()
        }
    }

    pub fn validate(&self, issues: &mut Vec<FieldIssue>) {
        if !(self.carrier_ghz > 0.0) {
            issues.push(FieldIssue::new("propagation.carrier_ghz", "must be positive"));
        }
        for (name, v) in [
            ("propagation.sf_sigma_los", self.sf_sigma_los),
            ("propagation.sf_sigma_nlos", self.sf_sigma_nlos),
            ("propagation.sf_sigma_floor", self.sf_sigma_floor),
        ] {
            if !(v >= 0.0) {
                issues.push(FieldIssue::new(name, "must be non-negative"));
            }
        }
        for (name, v) in [
            ("propagation.sf_corr_distance", self.sf_corr_distance),
            ("propagation.sf_height_scale", self.sf_height_scale),
            ("propagation.los_grid", self.los_grid),
            ("propagation.bandwidth_mhz", self.bandwidth_mhz),
        ] {
            if !(v > 0.0) {
                issues.push(FieldIssue::new(name, "must be positive"));
            }
        }
        if !(self.los_full_height >= 0.0) {
            issues.push(FieldIssue::new("propagation.los_full_height", "must be non-negative"));
        }
    }

    /// Thermal noise over the system bandwidth, dBm.
    pub fn noise_dbm(&self) -> f64 {
        -174.0 + 10.0 * (self.bandwidth_mhz * 1e6).log10() + self.noise_figure
    }
}

/// Terrestrial LOS probability at zero height.
fn ground_los_probability(scenario: Scenario, d2d: f64) -> f64 {
    match scenario {
        Scenario::Uma => {
            if d2d <= 18.0 {
                1.0
            } else {
                let e = (-d2d / 63.0).exp();
                (18.0 / d2d) * (1.0 - e) + e
            }
        }
        Scenario::Rma => {
            if d2d <= 10.0 {
                1.0
            } else {
                (-(d2d - 10.0) / 1000.0).exp()
            }
        }
    }
}

/// Interpolates linearly in height from the terrestrial value to certainty
/// at `los_full_height`.
pub fn los_probability(cfg: &PropagationConfig, d2d: f64, ue_height: f64) -> f64 {
    if ue_height >= cfg.los_full_height {
        return 1.0;
    }
    let ground = ground_los_probability(cfg.scenario, d2d);
    let w = (ue_height / cfg.los_full_height).clamp(0.0, 1.0);
    ground + (1.0 - ground) * w
}

pub fn los_path_loss_db(cfg: &PropagationConfig, log_d3d: f64) -> f64 {
    let k = &cfg.pl_los;
    k.a + k.b * log_d3d + k.c * cfg.carrier_ghz.log10()
}

pub fn nlos_path_loss_db(cfg: &PropagationConfig, log_d3d: f64, ue_height: f64) -> f64 {
    let k = &cfg.pl_nlos;
    let nlos = k.a + k.b * log_d3d + k.c * cfg.carrier_ghz.log10()
        - cfg.pl_nlos_height_term * (ue_height - 1.5);
    nlos.max(los_path_loss_db(cfg, log_d3d))
}

/// Distances under 1 m are clamped to 1 m.
pub fn path_loss_db(cfg: &PropagationConfig, d3d: f64, ue_height: f64, los: bool) -> f64 {
    let log_d = d3d.max(1.0).log10();
    if los {
        los_path_loss_db(cfg, log_d)
    } else {
        nlos_path_loss_db(cfg, log_d, ue_height)
    }
}

/// Path loss for a link that is LOS with weight `los_weight` in [0, 1],
/// blended in dB.
pub fn blended_path_loss_db(cfg: &PropagationConfig, d3d: f64, ue_height: f64, los_weight: f64) -> f64 {
    let log_d = d3d.max(1.0).log10();
    let los = los_path_loss_db(cfg, log_d);
    if los_weight >= 1.0 {
        return los;
    }
    los_weight * los + (1.0 - los_weight) * nlos_path_loss_db(cfg, log_d, ue_height)
}

/// LOS grid cell containing `p`; its lower-left node is `(gx, gy)·los_grid`.
#[inline]
pub fn los_region(cfg: &PropagationConfig, p: Point2) -> (i64, i64) {
    ((p.x / cfg.los_grid).floor() as i64, (p.y / cfg.los_grid).floor() as i64)
}

/// Frozen LOS draw of one (drop, cell, UE) link at grid node `(gx, gy)`,
/// with the probability evaluated at the node.
pub fn los_node_state(
    cfg: &PropagationConfig,
    drop_seed: u64,
    cell: usize,
    site: Point2,
    ue_id: usize,
    (gx, gy): (i64, i64),
    ue_height: f64,
) -> bool {
    if ue_height >= cfg.los_full_height {
        return true;
    }
    let node = Point2::new(gx as f64 * cfg.los_grid, gy as f64 * cfg.los_grid);
    let p = los_probability(cfg, node.distance(site), ue_height);
    let u = unit_interval(hash_words(&[
        drop_seed,
        0x4c4f53,
        cell as u64,
        ue_id as u64,
        gx as u64,
        gy as u64,
    ]));
    u < p
}

/// Bilinear weights of the four nodes around `p`, ordered
/// `(gx, gy), (gx+1, gy), (gx, gy+1), (gx+1, gy+1)`.
#[inline]
pub fn los_node_weights(cfg: &PropagationConfig, p: Point2, (gx, gy): (i64, i64)) -> [f64; 4] {
    let fx = p.x / cfg.los_grid - gx as f64;
    let fy = p.y / cfg.los_grid - gy as f64;
    [(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy]
}

/// LOS weight of a link at `ue`: the frozen node states around it,
/// interpolated bilinearly. 1 at LOS nodes, 0 at NLOS nodes, continuous in
/// between.
pub fn los_weight(
    cfg: &PropagationConfig,
    drop_seed: u64,
    cell: usize,
    site: Point2,
    ue_id: usize,
    ue: Point2,
    ue_height: f64,
) -> f64 {
    if ue_height >= cfg.los_full_height {
        return 1.0;
    }
    let (gx, gy) = los_region(cfg, ue);
    let w = los_node_weights(cfg, ue, (gx, gy));
    let nodes = [(gx, gy), (gx + 1, gy), (gx, gy + 1), (gx + 1, gy + 1)];
    nodes
        .iter()
        .zip(w)
        .filter(|(&n, _)| los_node_state(cfg, drop_seed, cell, site, ue_id, n, ue_height))
        .map(|(_, w)| w)
        .sum()
}

/// Path loss plus shadowing minus composite antenna gain.
pub fn coupling_loss_db(
    deployment: &Deployment,
    antenna: &AntennaConfig,
    propagation: &PropagationConfig,
    cell: usize,
    ue: &UePose,
    los_weight: f64,
    shadow_db: f64,
) -> Result<f64> {
    let a = angles_to(&deployment.cells[cell], deployment.bs_height, ue)?;
    let pl = blended_path_loss_db(propagation, a.d3d, ue.position.z, los_weight);
    Ok(pl + shadow_db - composite_gain(antenna, a.zenith, a.azimuth_offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_layout, Point3};

    #[test]
    fn los_probability_examples() {
        let uma = PropagationConfig::uma();
        let rma = PropagationConfig::rma();
        assert_eq!(los_probability(&uma, 1234.0, 300.0), 1.0);
        assert_eq!(los_probability(&uma, 10.0, 0.0), 1.0);
        assert_eq!(los_probability(&rma, 10.0, 0.0), 1.0);
        let p = los_probability(&uma, 500.0, 0.0);
        let e = (-500.0f64 / 63.0).exp();
        assert!((p - (18.0 / 500.0 * (1.0 - e) + e)).abs() < 1e-12);
    }

    #[test]
    fn los_probability_monotone_in_height() {
        for cfg in [PropagationConfig::uma(), PropagationConfig::rma()] {
            for d in [5.0, 50.0, 300.0, 1500.0, 5000.0] {
                let mut last = 0.0;
                for h in (0..=400).step_by(5) {
                    let p = los_probability(&cfg, d, h as f64);
                    assert!(p >= last - 1e-15);
                    last = p;
                }
                assert_eq!(los_probability(&cfg, d, cfg.los_full_height), 1.0);
            }
        }
    }

    #[test]
    fn path_loss_examples() {
        let uma = PropagationConfig::uma();
        let rma = PropagationConfig::rma();
        assert!((path_loss_db(&uma, 1000.0, 300.0, true) - 100.0206).abs() < 1e-3);
        assert!((path_loss_db(&rma, 1000.0, 300.0, true) - 90.9020).abs() < 1e-3);
        for d in [1.0, 10.0, 100.0, 1000.0, 5000.0] {
            for h in [0.0, 50.0, 300.0] {
                assert!(path_loss_db(&uma, d, h, false) >= path_loss_db(&uma, d, h, true));
            }
        }
        assert_eq!(path_loss_db(&uma, 0.2, 0.0, true), path_loss_db(&uma, 1.0, 0.0, true));
    }

    #[test]
    fn path_loss_slopes_by_finite_difference() {
        let cfg = PropagationConfig::uma();
        let h = 1e-4;
        for d in [200.0, 800.0, 3000.0] {
            let slope = |los| {
                let lo = path_loss_db(&cfg, d, 1.5, los);
                let hi = path_loss_db(&cfg, d * 10f64.powf(h), 1.5, los);
                (hi - lo) / h
            };
            assert!((slope(true) - 22.0).abs() < 1e-6);
            assert!((slope(false) - 39.08).abs() < 1e-6);
        }
    }

    #[test]
    fn noise_power() {
        assert!((PropagationConfig::uma().noise_dbm() - (-95.0)).abs() < 1e-9);
    }

    #[test]
    fn coupling_loss_composition() {
        let dep = build_layout(500.0, 25.0).unwrap();
        let ant = AntennaConfig { downtilt: 0.0, ..AntennaConfig::default() };
        let prop = PropagationConfig::uma();
        let cell = &dep.cells[0];
        let (s, c) = cell.azimuth.to_radians().sin_cos();
        let ue = UePose {
            position: Point3::new(1000.0 * c, 1000.0 * s, 25.0),
            heading: 0.0,
            speed: 0.0,
        };
        let cl = coupling_loss_db(&dep, &ant, &prop, 0, &ue, 1.0, 0.0).unwrap();
        assert!((cl - 82.99).abs() < 0.01, "{cl}");
        let shifted = coupling_loss_db(&dep, &ant, &prop, 0, &ue, 1.0, 3.5).unwrap();
        assert!((shifted - cl - 3.5).abs() < 1e-9);
    }

    #[test]
    fn coupling_loss_in_array_null() {
        let dep = build_layout(500.0, 25.0).unwrap();
        let ant = AntennaConfig::default();
        let prop = PropagationConfig::uma();
        let cell = &dep.cells[0];
        let (s, c) = cell.azimuth.to_radians().sin_cos();
        // Cut through the first null above the beam at a fixed 3D distance.
        let null_zenith = (ant.steer_zenith().to_radians().cos() + 1.0 / (8.0 * ant.dv_over_lambda)).acos();
        let d = 400.0;
        let at = |zenith: f64| {
            let d2d = d * zenith.sin();
            let dz = d * zenith.cos();
            let ue = UePose {
                position: Point3::new(d2d * c, d2d * s, 25.0 + dz),
                heading: 0.0,
                speed: 0.0,
            };
            coupling_loss_db(&dep, &ant, &prop, 0, &ue, 1.0, 0.0).unwrap()
        };
        let boresight = at(ant.steer_zenith().to_radians());
        assert!(at(null_zenith) >= boresight + 20.0);
    }

    #[test]
    fn los_weight_is_frozen_at_nodes_and_continuous() {
        let cfg = PropagationConfig::uma();
        let site = Point2::new(0.0, 0.0);
        let mut mixed = 0;
        for ue_id in 0..200 {
            let w = |x: f64, y: f64| los_weight(&cfg, 9, 3, site, ue_id, Point2::new(x, y), 0.0);
            let node = w(300.0, 100.0);
            assert!(node == 0.0 || node == 1.0);
            assert_eq!(node, los_node_state(&cfg, 9, 3, site, ue_id, (6, 2), 0.0) as u8 as f64);
            assert!((w(349.999, 120.0) - w(350.001, 120.0)).abs() < 1e-3);
            assert!((w(320.0, 149.999) - w(320.0, 150.001)).abs() < 1e-3);
            let mid = w(325.0, 125.0);
            assert!((0.0..=1.0).contains(&mid));
            mixed += (mid > 0.0 && mid < 1.0) as usize;
        }
        assert!(mixed > 0);
        assert_eq!(los_weight(&cfg, 9, 3, site, 0, Point2::new(3000.0, 0.0), 150.0), 1.0);
    }

    #[test]
    fn blended_path_loss_interpolates() {
        let cfg = PropagationConfig::uma();
        let los = path_loss_db(&cfg, 300.0, 0.0, true);
        let nlos = path_loss_db(&cfg, 300.0, 0.0, false);
        assert_eq!(blended_path_loss_db(&cfg, 300.0, 0.0, 1.0), los);
        assert!((blended_path_loss_db(&cfg, 300.0, 0.0, 0.0) - nlos).abs() < 1e-12);
        assert!((blended_path_loss_db(&cfg, 300.0, 0.0, 0.25) - (0.25 * los + 0.75 * nlos)).abs() < 1e-9);
    }
}
