//! Spatially correlated lognormal shadowing.
//!
//! Each cell owns an isotropic unit-variance Gaussian field built as a sum of
//! random plane waves. Wave numbers are drawn from the spectral density of an
//! exponential covariance `exp(-r / d_corr)`, so the ensemble autocorrelation
//! at lag `r` is exactly `exp(-r / d_corr)`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PropagationConfig;
use crate::geometry::Point2;
use crate::seeding::hash_words;

pub const DEFAULT_COMPONENTS: usize = 64;

#[derive(Debug, Clone)]
pub struct ShadowField {
    kx: Vec<f64>,
    ky: Vec<f64>,
    phase: Vec<f64>,
    scale: f64,
}

impl ShadowField {
    pub fn new(field_seed: u64, cell_id: usize, corr_distance: f64, components: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(hash_words(&[field_seed, 0x5348_4144, cell_id as u64]));
        let mut kx = Vec::with_capacity(components);
        let mut ky = Vec::with_capacity(components);
        let mut phase = Vec::with_capacity(components);
        for _ in 0..components {
            // Inverse CDF of the radial wave number: F(k) = 1 - (1 + (k d)²)^(-1/2).
            let u: f64 = rng.gen();
            let tail = 1.0 - u;
            let k = ((1.0 / (tail * tail)) - 1.0).max(0.0).sqrt() / corr_distance;
            let dir = rng.gen_range(0.0..TAU);
            kx.push(k * dir.cos());
            ky.push(k * dir.sin());
            phase.push(rng.gen_range(0.0..TAU));
        }
        Self {
            kx,
            ky,
            phase,
            scale: (2.0 / components as f64).sqrt(),
        }
    }

    /// Unit-variance field value at `p`.
    pub fn unit(&self, p: Point2) -> f64 {
        let s: f64 = (0..self.kx.len())
            .map(|i| (self.kx[i] * p.x + self.ky[i] * p.y + self.phase[i]).cos())
            .sum();
        self.scale * s
    }
}

/// Shadowing standard deviation, shrinking with UE height down to a floor.
pub fn shadow_sigma(cfg: &PropagationConfig, ue_height: f64, los: bool) -> f64 {
    let base = if los { cfg.sf_sigma_los } else { cfg.sf_sigma_nlos };
    cfg.sf_sigma_floor.max(base * (-ue_height / cfg.sf_height_scale).exp())
}

/// Shadowing of one cell's link at `ue_position`, dB.
pub fn shadowing_db(
    cfg: &PropagationConfig,
    field_seed: u64,
    cell_id: usize,
    ue_position: Point2,
    ue_height: f64,
    los: bool,
) -> f64 {
    let field = ShadowField::new(field_seed, cell_id, cfg.sf_corr_distance, DEFAULT_COMPONENTS);
    shadow_sigma(cfg, ue_height, los) * field.unit(ue_position)
}

/// The unit fields of all cells sampled on a square lattice, interleaved by
/// cell so the four corners of a lookup are contiguous per node.
///
/// Lookups bilinearly interpolate between exact field values at the nodes.
#[derive(Debug, Clone)]
pub struct ShadowGrid {
    origin: f64,
    spacing: f64,
    nodes: usize,
    n_cells: usize,
    values: Vec<f32>,
}

/// Bilinear lookup weights computed once per position and reused per cell.
#[derive(Debug, Clone, Copy)]
pub struct GridWeights {
    i00: usize,
    i10: usize,
    i01: usize,
    i11: usize,
    w00: f32,
    w10: f32,
    w01: f32,
    w11: f32,
}

impl ShadowGrid {
    /// Covers the square `[-half_extent, half_extent]²`.
    pub fn build(
        field_seed: u64,
        n_cells: usize,
        corr_distance: f64,
        components: usize,
        half_extent: f64,
        spacing: f64,
    ) -> Self {
        let nodes = (2.0 * half_extent / spacing).ceil() as usize + 2;
        let origin = -half_extent;
        let mut values = vec![0f32; nodes * nodes * n_cells];
        let mut plane = vec![0f64; nodes * nodes];
        for cell in 0..n_cells {
            let field = ShadowField::new(field_seed, cell, corr_distance, components);
            plane.iter_mut().for_each(|v| *v = 0.0);
            for c in 0..components {
                let (kx, ky, ph) = (field.kx[c], field.ky[c], field.phase[c]);
                let (step_s, step_c) = (kx * spacing).sin_cos();
                for iy in 0..nodes {
                    let y = origin + iy as f64 * spacing;
                    let (mut s, mut co) = (kx * origin + ky * y + ph).sin_cos();
                    let row = &mut plane[iy * nodes..(iy + 1) * nodes];
                    for v in row.iter_mut() {
                        *v += co;
                        let next_c = co * step_c - s * step_s;
                        s = s * step_c + co * step_s;
                        co = next_c;
                    }
                }
            }
            for (node, v) in plane.iter().enumerate() {
                values[node * n_cells + cell] = (field.scale * v) as f32;
            }
        }
        Self {
            origin,
            spacing,
            nodes,
            n_cells,
            values,
        }
    }

    pub fn weights(&self, p: Point2) -> GridWeights {
        let max = (self.nodes - 2) as f64;
        let fx = ((p.x - self.origin) / self.spacing).clamp(0.0, max);
        let fy = ((p.y - self.origin) / self.spacing).clamp(0.0, max);
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        let (tx, ty) = ((fx - ix as f64) as f32, (fy - iy as f64) as f32);
        let base = iy * self.nodes + ix;
        let n = self.n_cells;
        GridWeights {
            i00: base * n,
            i10: (base + 1) * n,
            i01: (base + self.nodes) * n,
            i11: (base + self.nodes + 1) * n,
            w00: (1.0 - tx) * (1.0 - ty),
            w10: tx * (1.0 - ty),
            w01: (1.0 - tx) * ty,
            w11: tx * ty,
        }
    }

    #[inline]
    pub fn unit(&self, w: &GridWeights, cell: usize) -> f64 {
        let v = &self.values;
        (w.w00 * v[w.i00 + cell] + w.w10 * v[w.i10 + cell] + w.w01 * v[w.i01 + cell] + w.w11 * v[w.i11 + cell])
            as f64
    }

    pub fn unit_at(&self, p: Point2, cell: usize) -> f64 {
        self.unit(&self.weights(p), cell)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}
