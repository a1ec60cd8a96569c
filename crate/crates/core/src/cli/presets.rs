//! Named scenario presets.

use crate::antenna::AntennaConfig;
use crate::engine::{DeploymentConfig, LinkConfig, ScenarioConfig, SimConfig};
use crate::error::{Result, SimError};
use crate::linklevel::TrafficModel;
use crate::mobility::MobilityConfig;
use crate::propagation::PropagationConfig;

pub const PRESET_NAMES: [&str; 3] = ["uma-fullbuffer", "rma-ftp", "rma-ftp-lowq"];

/// Urban macro, 500 m ISD, full-buffer interference.
pub fn uma_fullbuffer() -> ScenarioConfig {
    ScenarioConfig {
        deployment: DeploymentConfig {
            isd: 500.0,
            bs_height: 25.0,
            bound_radius_factor: 1.5,
        },
        antenna: AntennaConfig {
            downtilt: 10.0,
            ..AntennaConfig::default()
        },
        propagation: PropagationConfig::uma(),
        link: LinkConfig::default(),
        traffic: TrafficModel::full_buffer(),
        mobility: MobilityConfig::default(),
        sim: SimConfig::default(),
    }
}

/// Rural macro, 1732 m ISD, 700 MHz, FTP traffic.
pub fn rma_ftp() -> ScenarioConfig {
    ScenarioConfig {
        deployment: DeploymentConfig {
            isd: 1732.0,
            bs_height: 35.0,
            bound_radius_factor: 1.0,
        },
        antenna: AntennaConfig {
            downtilt: 6.0,
            ..AntennaConfig::default()
        },
        propagation: PropagationConfig::rma(),
        link: LinkConfig::default(),
        traffic: TrafficModel::ftp(),
        mobility: MobilityConfig::default(),
        sim: SimConfig::default(),
    }
}

/// [`rma_ftp`] with RLM thresholds lowered by 4 dB.
pub fn rma_ftp_lowq() -> ScenarioConfig {
    let mut cfg = rma_ftp();
    cfg.mobility.q_in = -10.0;
    cfg.mobility.q_out = -12.0;
    cfg
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    match name {
        "uma-fullbuffer" => Ok(uma_fullbuffer()),
        "rma-ftp" => Ok(rma_ftp()),
        "rma-ftp-lowq" => Ok(rma_ftp_lowq()),
        other => Err(SimError::UnknownPreset(other.to_string())),
    }
}
