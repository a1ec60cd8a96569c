//! Sectorized BS antenna: element pattern plus an M-row vertical array with
//! electrical downtilt.
//!
//! Both polarizations are folded into a single effective port. Gains are in
//! dBi; angles in degrees using the zenith convention of [`crate::geometry`].

use std::f64::consts::PI;
use std::fmt::Write as _;

/// Array-factor power is floored this many dB under its peak.
pub const ARRAY_FLOOR_DB: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaConfig {
    pub g_max: f64,
    pub theta_3db: f64,
    pub phi_3db: f64,
    pub sla_v: f64,
    pub a_m: f64,
    pub m_rows: usize,
    pub n_cols: usize,
    pub dv_over_lambda: f64,
    pub dh_over_lambda: f64,
    /// Electrical downtilt, degrees below the horizon.
    pub downtilt: f64,
}

impl Default for AntennaConfig {
    fn default() -> Self {
        Self {
            g_max: 8.0,
            theta_3db: 65.0,
            phi_3db: 65.0,
            sla_v: 30.0,
            a_m: 30.0,
            m_rows: 8,
            n_cols: 1,
            dv_over_lambda: 0.7,
            dh_over_lambda: 0.5,
            downtilt: 10.0,
        }
    }
}

impl AntennaConfig {
    pub fn validate(&self, issues: &mut Vec<crate::error::FieldIssue>) {
        use crate::error::FieldIssue;
        if self.m_rows < 1 {
            issues.push(FieldIssue::new("antenna.m_rows", "must be at least 1"));
        }
        if self.n_cols < 1 {
            issues.push(FieldIssue::new("antenna.n_cols", "must be at least 1"));
        }
        if !(self.dv_over_lambda > 0.0) {
            issues.push(FieldIssue::new("antenna.dv_over_lambda", "must be positive"));
        }
        if !(self.dh_over_lambda > 0.0) {
            issues.push(FieldIssue::new("antenna.dh_over_lambda", "must be positive"));
        }
        if !(0.0..90.0).contains(&self.downtilt) {
            issues.push(FieldIssue::new("antenna.downtilt", "must be in [0, 90)"));
        }
        if !(self.theta_3db > 0.0) || !(self.phi_3db > 0.0) {
            issues.push(FieldIssue::new("antenna.theta_3db", "beamwidths must be positive"));
        }
    }

    /// Zenith angle of the steered main beam.
    pub fn steer_zenith(&self) -> f64 {
        90.0 + self.downtilt
    }

    pub fn peak_gain_bound(&self) -> f64 {
        self.g_max + 10.0 * ((self.m_rows * self.n_cols) as f64).log10()
    }

    /// Vertical cut of the element pattern (attenuation, ≤ 0 dB).
    pub fn vertical_attenuation(&self, zenith: f64) -> f64 {
        let r = (zenith - 90.0) / self.theta_3db;
        -(12.0 * r * r).min(self.sla_v)
    }

    pub fn horizontal_attenuation(&self, azimuth_offset: f64) -> f64 {
        let r = azimuth_offset / self.phi_3db;
        -(12.0 * r * r).min(self.a_m)
    }
}

pub fn element_gain(cfg: &AntennaConfig, zenith: f64, azimuth_offset: f64) -> f64 {
    combine_element(cfg, cfg.vertical_attenuation(zenith), cfg.horizontal_attenuation(azimuth_offset))
}

#[inline]
pub(crate) fn combine_element(cfg: &AntennaConfig, a_v: f64, a_h: f64) -> f64 {
    cfg.g_max - (-(a_v + a_h)).min(cfg.a_m)
}

/// Power of a uniformly weighted `n`-element linear array with progressive
/// phase `psi` between elements, normalized so the peak is `n`.
#[inline]
fn uniform_array_power(n: usize, psi: f64) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let half = 0.5 * psi;
    let den = half.sin();
    if den.abs() < 1e-12 {
        return n as f64;
    }
    let num = (n as f64 * half).sin();
    num * num / (n as f64 * den * den)
}

/// Vertical array factor in dB; peaks at 10·log10(M) toward the steered zenith.
pub fn array_factor(cfg: &AntennaConfig, zenith: f64) -> f64 {
    let steer_cos = cfg.steer_zenith().to_radians().cos();
    array_factor_from_cos(cfg, zenith.to_radians().cos(), steer_cos)
}

#[inline]
pub(crate) fn array_factor_from_cos(cfg: &AntennaConfig, cos_zenith: f64, steer_cos: f64) -> f64 {
    if cfg.m_rows == 1 {
        return 0.0;
    }
    // 10^(-ARRAY_FLOOR_DB / 10)
    const FLOOR: f64 = 1e-6;
    let m = cfg.m_rows as f64;
    let psi = 2.0 * PI * cfg.dv_over_lambda * (cos_zenith - steer_cos);
    let power = uniform_array_power(cfg.m_rows, psi).max(m * FLOOR);
    10.0 * power.log10()
}

/// Horizontal (unsteered) array factor in dB; 0 dB for a single column.
pub fn column_factor(cfg: &AntennaConfig, zenith: f64, azimuth_offset: f64) -> f64 {
    if cfg.n_cols == 1 {
        return 0.0;
    }
    let n = cfg.n_cols as f64;
    let psi = 2.0 * PI
        * cfg.dh_over_lambda
        * zenith.to_radians().sin()
        * azimuth_offset.to_radians().sin();
    let power = uniform_array_power(cfg.n_cols, psi).max(n * 10f64.powf(-ARRAY_FLOOR_DB / 10.0));
    10.0 * power.log10()
}

pub fn composite_gain(cfg: &AntennaConfig, zenith: f64, azimuth_offset: f64) -> f64 {
    element_gain(cfg, zenith, azimuth_offset)
        + array_factor(cfg, zenith)
        + column_factor(cfg, zenith, azimuth_offset)
}

/// Gain over a regular (zenith, azimuth) grid as CSV text.
pub fn pattern_csv(cfg: &AntennaConfig, zenith_step: f64, azimuth_step: f64) -> String {
    let mut out = String::from("zenith_deg,azimuth_deg,gain_dbi\n");
    let nz = (180.0 / zenith_step).round() as usize;
    let na = (360.0 / azimuth_step).round() as usize;
    for i in 0..=nz {
        let zenith = i as f64 * zenith_step;
        for j in 0..na {
            let az = -180.0 + azimuth_step + j as f64 * azimuth_step;
            let _ = writeln!(out, "{zenith:.3},{az:.3},{:.4}", composite_gain(cfg, zenith, az));
        }
    }
    out
}
