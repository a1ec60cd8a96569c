//! One drop: UE placement, time stepping and event collection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{steps_per, ScenarioConfig};
use super::radio::{LosCache, RadioModel};
use crate::error::{Result, SimError};
use crate::geometry::{build_layout, kmh_to_mps, step_pose, uniform_in_disc, Point3, UePose};
use crate::linklevel::{
    draw_activity, rsrp_dbm, solve_coupled_load, spectral_efficiency, FilterState, LoadProblem, TrafficKind,
};
use crate::mobility::{strongest_cell, EventRecord, UeMobility};
use crate::seeding::hash_words;
use crate::units::{db_to_linear, linear_to_db};

/// SIR values are clamped to ±this many dB.
pub const SIR_CLAMP_DB: f64 = 60.0;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DropOptions {
    /// Record a per-step trace for this UE.
    pub trace_ue: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub time: f64,
    pub serving_cell: Option<usize>,
    /// Instantaneous SINR toward the serving cell (NaN during outage).
    pub sinr_db: f64,
    /// L3-filtered RSRP per cell.
    pub rsrp_db: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub ue_id: usize,
    pub rows: Vec<TraceRow>,
    pub events: Vec<EventRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropResult {
    pub seed: u64,
    pub events: Vec<EventRecord>,
    /// UE-seconds inside the measurement window.
    pub ue_time: f64,
    pub outage_time: f64,
    pub sir_samples: Vec<f64>,
    pub trace: Option<Trace>,
    pub loads: Vec<f64>,
    /// UEs attached to each cell in the snapshot the loads were solved on.
    pub cell_users: Vec<usize>,
    pub load_converged: bool,
    pub load_residual: f64,
    pub load_iterations: usize,
}

struct Ue {
    pose: UePose,
    rng: ChaCha8Rng,
    los: LosCache,
    filter: FilterState,
    mobility: UeMobility,
}

pub fn run_drop(config: &ScenarioConfig) -> Result<DropResult> {
    run_drop_with(config, &DropOptions::default())
}

pub fn run_drop_with(config: &ScenarioConfig, options: &DropOptions) -> Result<DropResult> {
    config.validate()?;
    let sim = &config.sim;
    let n_ues = config.n_ues();
    if let Some(t) = options.trace_ue {
        if t >= n_ues {
            return Err(SimError::invalid("trace_ue", format!("must be below the UE count {n_ues}")));
        }
    }
    let mut deployment = build_layout(config.deployment.isd, config.deployment.bs_height)?;
    deployment.set_tx_power(config.link.tx_power);
    let n_cells = deployment.n_cells();
    let bound = config.deployment.bound_radius();
    let seed = sim.seed;
    let radio = RadioModel::new(
        &deployment,
        &config.antenna,
        &config.propagation,
        sim.ue_height,
        bound,
        seed,
        true,
    );
    let budget = config.link_budget();
    let noise_mw = db_to_linear(budget.noise_power);
    let dt = sim.time_step;
    let indication_every = steps_per(config.mobility.indication_period, dt).expect("validated");
    let indication_dt = indication_every as f64 * dt;
    let l3_every = steps_per(config.link.l3_period, dt).expect("validated");
    let sir_every = steps_per(sim.sir_sample_period, dt).expect("validated");
    let warmup_steps = (sim.warmup / dt).round() as usize;
    let total_steps = (sim.duration / dt).round() as usize;

    let speed = kmh_to_mps(sim.ue_speed_kmh);
    let mut ues: Vec<Ue> = (0..n_ues)
        .map(|id| {
            let mut rng = ChaCha8Rng::seed_from_u64(hash_words(&[seed, 0x5545, id as u64]));
            let p = uniform_in_disc(bound, &mut rng);
            let heading = rng.gen_range(0.0..360.0);
            Ue {
                pose: UePose {
                    position: Point3::new(p.x, p.y, sim.ue_height),
                    heading,
                    speed,
                },
                rng,
                los: LosCache::new(n_cells),
                filter: FilterState::new(n_cells, config.link.l1_window, config.link.l3_k),
                mobility: UeMobility::new(id, n_cells, config.link.l1_window),
            }
        })
        .collect();

    let mut loss = vec![0.0; n_cells];
    let mut rsrp = vec![0.0; n_cells];
    let mut rx_mw = vec![0.0; n_cells];

    // Static load from the initial snapshot.
    let mut snapshot_rx = vec![0.0; n_ues * n_cells];
    let mut snapshot_serving = vec![0; n_ues];
    for (id, ue) in ues.iter_mut().enumerate() {
        let pos = ue.pose.position.xy();
        radio.update_los(&mut ue.los, id, pos);
        radio.coupling_losses(pos, ue.los.weights(), &mut loss);
        for c in 0..n_cells {
            rsrp[c] = rsrp_dbm(&budget, loss[c]);
            snapshot_rx[id * n_cells + c] = db_to_linear(rsrp[c]);
        }
        snapshot_serving[id] = strongest_cell(&rsrp);
        ue.filter.push_l1(&rsrp);
        ue.filter.update_l3();
    }
    let problem = LoadProblem {
        n_cells,
        serving: &snapshot_serving,
        rx_mw: &snapshot_rx,
        noise_mw,
        bandwidth_hz: config.propagation.bandwidth_mhz * 1e6,
    };
    let traffic = &config.traffic;
    let load = solve_coupled_load(&problem, traffic, |x| spectral_efficiency(traffic, x));
    drop(snapshot_rx);
    let mut cell_users = vec![0; n_cells];
    for &c in &snapshot_serving {
        cell_users[c] += 1;
    }

    if warmup_steps == 0 {
        for ue in &mut ues {
            let cell = strongest_cell(ue.filter.l3_values());
            ue.mobility.connect(cell);
        }
    }

    let mut activity_rng = ChaCha8Rng::seed_from_u64(hash_words(&[seed, 0x4143]));
    let mut activity = vec![1.0; n_cells];
    let full_buffer = traffic.kind == TrafficKind::FullBuffer;
    let mut events = Vec::new();
    let mut sir_samples = Vec::new();
    let mut trace = options.trace_ue.map(|ue_id| Trace {
        ue_id,
        rows: Vec::new(),
        events: Vec::new(),
    });

    for k in 1..=total_steps {
        let now = k as f64 * dt;
        if !full_buffer {
            draw_activity(&load.loads, &mut activity_rng, &mut activity);
        }
        let measuring = k > warmup_steps;
        let mobility_step = measuring && (k - warmup_steps) % indication_every == 0;
        for (id, ue) in ues.iter_mut().enumerate() {
            ue.pose = step_pose(ue.pose, dt, bound, &mut ue.rng);
            let pos = ue.pose.position.xy();
            radio.update_los(&mut ue.los, id, pos);
            radio.coupling_losses(pos, ue.los.weights(), &mut loss);
            let mut total = noise_mw;
            for c in 0..n_cells {
                rsrp[c] = rsrp_dbm(&budget, loss[c]);
                rx_mw[c] = db_to_linear(rsrp[c]);
                total += activity[c] * rx_mw[c];
            }
            ue.filter.push_l1(&rsrp);
            if k % l3_every == 0 {
                ue.filter.update_l3();
            }
            if k == warmup_steps {
                let cell = strongest_cell(ue.filter.l3_values());
                ue.mobility.connect(cell);
            }

            let sinr_of = |c: usize| linear_to_db(rx_mw[c] / (total - activity[c] * rx_mw[c]).max(noise_mw));
            let first_event = events.len();
            if mobility_step {
                ue.mobility
                    .step(now, indication_dt, ue.filter.l3_values(), sinr_of, &config.mobility, &mut events);
            }

            if measuring && k % sir_every == 0 {
                if let Some(s) = ue.mobility.serving() {
                    let interference: f64 = (0..n_cells)
                        .filter(|&c| c != s)
                        .map(|c| load.loads[c] * rx_mw[c])
                        .sum();
                    let sir = if interference > 0.0 {
                        linear_to_db(rx_mw[s] / interference).clamp(-SIR_CLAMP_DB, SIR_CLAMP_DB)
                    } else {
                        SIR_CLAMP_DB
                    };
                    sir_samples.push(sir);
                }
            }

            if let Some(tr) = trace.as_mut().filter(|t| t.ue_id == id && measuring) {
                let serving = ue.mobility.serving();
                tr.rows.push(TraceRow {
                    time: now,
                    serving_cell: serving,
                    sinr_db: serving.map_or(f64::NAN, sinr_of),
                    rsrp_db: ue.filter.l3_values().to_vec(),
                });
                tr.events.extend_from_slice(&events[first_event..]);
            }
        }
    }

    let measured = (total_steps.saturating_sub(warmup_steps)) as f64 * dt;
    let outage_time = ues.iter().map(|u| u.mobility.outage_time).sum();
    Ok(DropResult {
        seed,
        events,
        ue_time: n_ues as f64 * measured,
        outage_time,
        sir_samples,
        trace,
        loads: load.loads,
        cell_users,
        load_converged: load.converged,
        load_residual: load.residual,
        load_iterations: load.iterations,
    })
}
