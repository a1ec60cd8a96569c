//! Drop-based system-level simulator of downlink mobility for aerial UEs in
//! a hexagonal macro-cell network.
//!
//! A drop places UEs at a common height and speed, moves them on random
//! straight-line paths, evaluates coupling losses to every cell and runs
//! each UE through radio link monitoring and the handover procedure. Sweeps
//! over heights and speeds aggregate the resulting event logs into handover,
//! failure and ping-pong statistics.

pub mod antenna;
pub mod cli;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod linklevel;
pub mod metrics;
pub mod mobility;
pub mod propagation;
pub mod seeding;
pub mod units;

pub use error::{Result, SimError};
