//! Drop execution, parameter sweeps and the altitude SIR map.

mod config;
mod drop;
mod radio;
mod sirmap;
mod sweep;

pub use config::{DeploymentConfig, LinkConfig, ScenarioConfig, SimConfig};
pub use drop::{run_drop, run_drop_with, DropOptions, DropResult, Trace, TraceRow, SIR_CLAMP_DB};
pub use radio::{shadow_field_seed, LosCache, RadioModel};
pub use sirmap::{sir_map, SirMap, SirMapper, SirPoint};
pub use sweep::{aggregate_drops, drop_seed, run_sweep, SweepPoint, SweepResult};
