//! Scenario files: one `section.key = value` assignment per line.
//!
//! ```text
//! # Start from a preset; every other line overrides one field of it.
//! preset = rma-ftp
//!
//! sim.ue_height = 100        # meters
//! sim.ue_speed_kmh = 30
//! mobility.q_in = -10        # dB
//! mobility.q_out = -12
//! traffic.kind = ftp         # ftp | full_buffer
//! mobility.conditional_ho = false
//! ```
//!
//! `#` starts a comment. Keys are case-sensitive. A bare field name such as
//! `ue_height` is accepted when it names exactly one field. Each key may be
//! assigned once, unknown keys are rejected, and without a `preset` line the
//! caller's base configuration is used. [`dump_config`] writes every field,
//! so its output reloads to an identical configuration.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use super::presets::preset;
use crate::engine::ScenarioConfig;
use crate::error::{Result, SimError};

struct Field {
    key: &'static str,
    get: fn(&ScenarioConfig) -> String,
    set: fn(&mut ScenarioConfig, &str) -> std::result::Result<(), String>,
}

fn parse_value<T: FromStr>(raw: &str) -> std::result::Result<T, String>
where
    T::Err: Display,
{
    raw.parse::<T>().map_err(|e| format!("invalid value `{raw}`: {e}"))
}

macro_rules! fields {
    ($($key:literal => $($path:ident).+ ;)*) => {
        &[$(Field {
            key: $key,
            get: |c| c.$($path).+.to_string(),
            set: |c, raw| {
                c.$($path).+ = parse_value(raw)?;
                Ok(())
            },
        },)*]
    };
}

const FIELDS: &[Field] = fields! {
    "deployment.isd" => deployment.isd;
    "deployment.bs_height" => deployment.bs_height;
    "deployment.bound_radius_factor" => deployment.bound_radius_factor;
    "antenna.g_max" => antenna.g_max;
    "antenna.theta_3db" => antenna.theta_3db;
    "antenna.phi_3db" => antenna.phi_3db;
    "antenna.sla_v" => antenna.sla_v;
    "antenna.a_m" => antenna.a_m;
    "antenna.m_rows" => antenna.m_rows;
    "antenna.n_cols" => antenna.n_cols;
    "antenna.dv_over_lambda" => antenna.dv_over_lambda;
    "antenna.dh_over_lambda" => antenna.dh_over_lambda;
    "antenna.downtilt" => antenna.downtilt;
    "propagation.scenario" => propagation.scenario;
    "propagation.carrier_ghz" => propagation.carrier_ghz;
    "propagation.los_full_height" => propagation.los_full_height;
    "propagation.pl_los_a" => propagation.pl_los.a;
    "propagation.pl_los_b" => propagation.pl_los.b;
    "propagation.pl_los_c" => propagation.pl_los.c;
    "propagation.pl_nlos_a" => propagation.pl_nlos.a;
    "propagation.pl_nlos_b" => propagation.pl_nlos.b;
    "propagation.pl_nlos_c" => propagation.pl_nlos.c;
    "propagation.pl_nlos_height_term" => propagation.pl_nlos_height_term;
    "propagation.sf_sigma_los" => propagation.sf_sigma_los;
    "propagation.sf_sigma_nlos" => propagation.sf_sigma_nlos;
    "propagation.sf_sigma_floor" => propagation.sf_sigma_floor;
    "propagation.sf_height_scale" => propagation.sf_height_scale;
    "propagation.sf_corr_distance" => propagation.sf_corr_distance;
    "propagation.los_grid" => propagation.los_grid;
    "propagation.noise_figure" => propagation.noise_figure;
    "propagation.bandwidth_mhz" => propagation.bandwidth_mhz;
    "link.tx_power" => link.tx_power;
    "link.l1_window" => link.l1_window;
    "link.l3_k" => link.l3_k;
    "link.l3_period" => link.l3_period;
    "traffic.kind" => traffic.kind;
    "traffic.ftp_object_bits" => traffic.ftp_object_bits;
    "traffic.ftp_reading_time" => traffic.ftp_reading_time;
    "traffic.se_factor" => traffic.se_factor;
    "traffic.se_max" => traffic.se_max;
    "mobility.a3_offset" => mobility.a3_offset;
    "mobility.ttt" => mobility.ttt;
    "mobility.q_in" => mobility.q_in;
    "mobility.q_out" => mobility.q_out;
    "mobility.n310" => mobility.n310;
    "mobility.n311" => mobility.n311;
    "mobility.t310" => mobility.t310;
    "mobility.indication_period" => mobility.indication_period;
    "mobility.prep_delay" => mobility.prep_delay;
    "mobility.exec_time" => mobility.exec_time;
    "mobility.pp_window" => mobility.pp_window;
    "mobility.reestablish_delay" => mobility.reestablish_delay;
    "mobility.conditional_ho" => mobility.conditional_ho;
    "mobility.cho_prepare_offset" => mobility.cho_prepare_offset;
    "mobility.cho_execute_offset" => mobility.cho_execute_offset;
    "sim.ue_per_cell" => sim.ue_per_cell;
    "sim.ue_height" => sim.ue_height;
    "sim.ue_speed_kmh" => sim.ue_speed_kmh;
    "sim.duration" => sim.duration;
    "sim.warmup" => sim.warmup;
    "sim.time_step" => sim.time_step;
    "sim.seed" => sim.seed;
    "sim.sir_sample_period" => sim.sir_sample_period;
};

/// Every accepted fully qualified key, in dump order.
pub fn config_keys() -> impl Iterator<Item = &'static str> {
    FIELDS.iter().map(|f| f.key)
}

fn resolve(key: &str) -> Option<&'static Field> {
    if let Some(f) = FIELDS.iter().find(|f| f.key == key) {
        return Some(f);
    }
    if key.contains('.') {
        return None;
    }
    let mut matches = FIELDS.iter().filter(|f| f.key.rsplit('.').next() == Some(key));
    match (matches.next(), matches.next()) {
        (Some(f), None) => Some(f),
        _ => None,
    }
}

fn suggest(key: &str) -> Option<String> {
    let score = |candidate: &str| {
        let bare = candidate.rsplit('.').next().unwrap_or(candidate);
        strsim::jaro_winkler(key, candidate).max(strsim::jaro_winkler(key, bare))
    };
    FIELDS
        .iter()
        .map(|f| (score(f.key), f.key))
        .filter(|(s, _)| *s > 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, k)| k.to_string())
}

/// A parsed scenario file before it is merged onto a base configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigDocument {
    pub preset: Option<String>,
    /// `(line, qualified key, raw value)` in file order.
    pub assignments: Vec<(usize, &'static str, String)>,
}

pub fn parse_document(text: &str) -> Result<ConfigDocument> {
    let mut doc = ConfigDocument::default();
    let mut preset_line = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(SimError::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(SimError::Parse { line, message: "empty key or value".into() });
        }
        if key == "preset" {
            if let Some(first) = preset_line {
                return Err(SimError::Parse { line, message: format!("duplicate key `preset` (first set on line {first})") });
            }
            preset_line = Some(line);
            doc.preset = Some(value.to_string());
            continue;
        }
        let Some(field) = resolve(key) else {
            return Err(SimError::UnknownKey { line, key: key.to_string(), suggestion: suggest(key) });
        };
        if let Some((first, _, _)) = doc.assignments.iter().find(|(_, k, _)| *k == field.key) {
            return Err(SimError::Parse { line, message: format!("duplicate key `{}` (first set on line {first})", field.key) });
        }
        doc.assignments.push((line, field.key, value.to_string()));
    }
    Ok(doc)
}

impl ConfigDocument {
    /// The document's preset (or `base` when it names none) with every
    /// assignment applied on top.
    pub fn apply(&self, base: &ScenarioConfig) -> Result<ScenarioConfig> {
        let mut cfg = match &self.preset {
            Some(name) => preset(name)?,
            None => base.clone(),
        };
        for (line, key, value) in &self.assignments {
            let field = resolve(key).expect("keys are resolved while parsing");
            (field.set)(&mut cfg, value).map_err(|message| SimError::Parse { line: *line, message: format!("{key}: {message}") })?;
        }
        Ok(cfg)
    }
}

pub fn parse_config(text: &str, base: &ScenarioConfig) -> Result<ScenarioConfig> {
    parse_document(text)?.apply(base)
}

pub fn load_config(path: &Path, base: &ScenarioConfig) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    parse_config(&text, base)
}

/// Every field of `cfg` as a scenario file.
pub fn dump_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let mut section = "";
    for f in FIELDS {
        let this = f.key.split('.').next().unwrap_or("");
        if this != section {
            if !section.is_empty() {
                out.push('\n');
            }
            section = this;
        }
        out.push_str(f.key);
        out.push_str(" = ");
        out.push_str(&(f.get)(cfg));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::presets::{rma_ftp, uma_fullbuffer, PRESET_NAMES};

    #[test]
    fn empty_document_is_identity() {
        assert_eq!(parse_config("", &rma_ftp()).unwrap(), rma_ftp());
        assert_eq!(parse_config("# nothing\n\n", &uma_fullbuffer()).unwrap(), uma_fullbuffer());
        assert_eq!(parse_config("preset = rma-ftp\n", &uma_fullbuffer()).unwrap(), rma_ftp());
    }

    #[test]
    fn single_override_changes_one_field() {
        let cfg = parse_config("ue_height = 300", &uma_fullbuffer()).unwrap();
        let mut expected = uma_fullbuffer();
        expected.sim.ue_height = 300.0;
        assert_eq!(cfg, expected);
        let qualified = parse_config("sim.ue_height=300  # comment", &uma_fullbuffer()).unwrap();
        assert_eq!(qualified, expected);
    }

    #[test]
    fn duplicates_are_rejected_with_line() {
        let err = parse_config("sim.seed = 1\n\nsim.seed = 2\n", &uma_fullbuffer()).unwrap_err();
        assert!(matches!(err, SimError::Parse { line: 3, .. }), "{err}");
        let err = parse_config("seed = 1\nsim.seed = 2\n", &uma_fullbuffer()).unwrap_err();
        assert!(matches!(err, SimError::Parse { line: 2, .. }), "{err}");
        let err = parse_config("preset = rma-ftp\npreset = rma-ftp\n", &uma_fullbuffer()).unwrap_err();
        assert!(matches!(err, SimError::Parse { line: 2, .. }));
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        match parse_config("\nzzz = 1\n", &uma_fullbuffer()).unwrap_err() {
            SimError::UnknownKey { line: 2, suggestion: None, .. } => {}
            other => panic!("{other:?}"),
        }
        match parse_config("sim.ue_hieght = 3\n", &uma_fullbuffer()).unwrap_err() {
            SimError::UnknownKey { line, suggestion, .. } => {
                assert_eq!(line, 1);
                assert_eq!(suggestion.as_deref(), Some("sim.ue_height"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines_are_parse_errors() {
        for text in ["sim.seed", "= 3", "sim.seed =", "sim.seed = abc", "traffic.kind = bursty"] {
            let err = parse_config(text, &uma_fullbuffer()).unwrap_err();
            assert!(matches!(err, SimError::Parse { line: 1, .. }), "{text}: {err}");
        }
        assert!(matches!(parse_config("preset = nope", &uma_fullbuffer()), Err(SimError::UnknownPreset(_))));
    }

    #[test]
    fn dump_round_trips() {
        for name in PRESET_NAMES {
            let mut cfg = preset(name).unwrap();
            cfg.sim.time_step = 0.1 + 0.2;
            cfg.mobility.conditional_ho = true;
            let text = dump_config(&cfg);
            assert_eq!(parse_config(&text, &uma_fullbuffer()).unwrap(), cfg);
            assert_eq!(text.lines().filter(|l| l.contains('=')).count(), FIELDS.len());
        }
    }

    #[test]
    fn keys_are_unique() {
        let mut keys: Vec<_> = config_keys().collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), FIELDS.len());
    }
}
