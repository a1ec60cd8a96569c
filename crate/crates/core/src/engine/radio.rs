//! Per-drop evaluation of all UE→cell coupling losses.
//!
//! Three sectors of a site share distance, zenith and array factor, so those
//! are computed once per site; only the horizontal element term and the
//! shadowing differ per cell. Heights are fixed within a drop, so path loss
//! is tabulated over horizontal distance and the vertical antenna terms over
//! the cosine of the zenith angle, both with linear interpolation.

use crate::antenna::{array_factor_from_cos, column_factor, combine_element, AntennaConfig};
use crate::geometry::{wrap_degrees, Deployment, Point2};
use crate::propagation::{
    los_node_state, los_node_weights, los_path_loss_db, los_probability, los_region, nlos_path_loss_db, shadow_sigma,
    GridWeights, PropagationConfig, ShadowGrid, DEFAULT_COMPONENTS,
};
use crate::seeding::hash_words;

/// Path-loss table spacing in horizontal distance, meters.
const DISTANCE_STEP: f64 = 0.1;
/// Antenna table spacing in cosine of the zenith angle.
const COS_STEP: f64 = 1e-4;

#[inline]
fn lerp2(table: &[[f64; 2]], f: f64) -> Option<[f64; 2]> {
    let i = f as usize;
    let (a, b) = (table.get(i)?, table.get(i + 1)?);
    let t = f - i as f64;
    Some([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])
}

/// Odd minimax polynomial for atan on [0, 1], error below 1e-8 rad.
const ATAN_COEFFS: [f64; 9] = [
    0.9999998711529506,
    -0.33332523944380266,
    0.1998488378860105,
    -0.14154799891194708,
    0.10477516987897267,
    -0.07194339313291492,
    0.039344891272943314,
    -0.014152029940975763,
    0.002398059488716115,
];

/// `atan2(y, x)` in degrees via [`ATAN_COEFFS`]; 0 at the origin.
#[inline]
fn fast_atan2_degrees(y: f64, x: f64) -> f64 {
    let (ax, ay) = (x.abs(), y.abs());
    let (num, den) = if ay > ax { (ax, ay) } else { (ay, ax) };
    if den == 0.0 {
        return 0.0;
    }
    let t = num / den;
    let t2 = t * t;
    let mut poly = ATAN_COEFFS[8];
    for &c in ATAN_COEFFS[..8].iter().rev() {
        poly = poly * t2 + c;
    }
    let mut a = (t * poly).to_degrees();
    if ay > ax {
        a = 90.0 - a;
    }
    if x < 0.0 {
        a = 180.0 - a;
    }
    if y < 0.0 {
        -a
    } else {
        a
    }
}

#[derive(Debug, Clone)]
pub struct RadioModel {
    sites: Vec<Point2>,
    cell_site: Vec<usize>,
    cell_azimuth: Vec<f64>,
    antenna: AntennaConfig,
    propagation: PropagationConfig,
    steer_cos: f64,
    bs_height: f64,
    ue_height: f64,
    sigma_los: f64,
    sigma_nlos: f64,
    shadow: Option<ShadowGrid>,
    drop_seed: u64,
    all_los: bool,
    /// `[los, nlos]` path loss by horizontal distance.
    path_loss_table: Vec<[f64; 2]>,
    /// `[vertical element attenuation, array factor]` by cos(zenith) + 1.
    antenna_table: Vec<[f64; 2]>,
}

/// LOS node states of one UE's current grid cell and the resulting
/// per-cell LOS weights at its latest position.
#[derive(Debug, Clone)]
pub struct LosCache {
    region: Option<(i64, i64)>,
    nodes: Vec<[bool; 4]>,
    weights: Vec<f64>,
}

impl LosCache {
    pub fn new(n_cells: usize) -> Self {
        Self {
            region: None,
            nodes: vec![[true; 4]; n_cells],
            weights: vec![1.0; n_cells],
        }
    }

    /// Per-cell LOS weight in [0, 1].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn shadow_field_seed(drop_seed: u64) -> u64 {
    hash_words(&[drop_seed, 0x5346])
}

impl RadioModel {
    pub fn new(
        deployment: &Deployment,
        antenna: &AntennaConfig,
        propagation: &PropagationConfig,
        ue_height: f64,
        bound_radius: f64,
        drop_seed: u64,
        with_shadowing: bool,
    ) -> Self {
        let sigma_los = shadow_sigma(propagation, ue_height, true);
        let sigma_nlos = shadow_sigma(propagation, ue_height, false);
        let shadow = (with_shadowing && (sigma_los > 0.0 || sigma_nlos > 0.0)).then(|| {
            let spacing = propagation.sf_corr_distance / 5.0;
            ShadowGrid::build(
                shadow_field_seed(drop_seed),
                deployment.n_cells(),
                propagation.sf_corr_distance,
                DEFAULT_COMPONENTS,
                bound_radius + spacing,
                spacing,
            )
        });
        let mut model = Self {
            sites: deployment.site_positions.clone(),
            cell_site: deployment.cells.iter().map(|c| c.site_index).collect(),
            cell_azimuth: deployment.cells.iter().map(|c| c.azimuth).collect(),
            antenna: antenna.clone(),
            propagation: propagation.clone(),
            steer_cos: antenna.steer_zenith().to_radians().cos(),
            bs_height: deployment.bs_height,
            ue_height,
            sigma_los,
            sigma_nlos,
            shadow,
            drop_seed,
            all_los: ue_height >= propagation.los_full_height,
            path_loss_table: Vec::new(),
            antenna_table: Vec::new(),
        };
        let reach = deployment.site_positions.iter().map(|p| p.norm()).fold(0.0, f64::max) + bound_radius;
        let n = (reach / DISTANCE_STEP).ceil() as usize + 16;
        model.path_loss_table = (0..n).map(|i| model.path_loss_exact(i as f64 * DISTANCE_STEP)).collect();
        let n = (2.0 / COS_STEP).round() as usize + 1;
        model.antenna_table = (0..n).map(|i| model.antenna_exact(i as f64 * COS_STEP - 1.0)).collect();
        model
    }

    fn path_loss_exact(&self, d2d: f64) -> [f64; 2] {
        let d3d = d2d.hypot(self.ue_height - self.bs_height);
        let log_d = d3d.max(1.0).log10();
        [
            los_path_loss_db(&self.propagation, log_d),
            nlos_path_loss_db(&self.propagation, log_d, self.ue_height),
        ]
    }

    fn antenna_exact(&self, cos_z: f64) -> [f64; 2] {
        let cos_z = cos_z.clamp(-1.0, 1.0);
        let zenith = cos_z.acos().to_degrees();
        [
            self.antenna.vertical_attenuation(zenith),
            array_factor_from_cos(&self.antenna, cos_z, self.steer_cos),
        ]
    }

    pub fn n_cells(&self) -> usize {
        self.cell_site.len()
    }

    /// Recomputes LOS weights at `pos`, redrawing node states only when the
    /// UE has entered a new grid cell.
    pub fn update_los(&self, cache: &mut LosCache, ue_id: usize, pos: Point2) {
        if self.all_los {
            return;
        }
        let (gx, gy) = los_region(&self.propagation, pos);
        if cache.region != Some((gx, gy)) {
            cache.region = Some((gx, gy));
            let corners = [(gx, gy), (gx + 1, gy), (gx, gy + 1), (gx + 1, gy + 1)];
            for (cell, nodes) in cache.nodes.iter_mut().enumerate() {
                let site = self.sites[self.cell_site[cell]];
                for (state, &node) in nodes.iter_mut().zip(&corners) {
                    *state = los_node_state(&self.propagation, self.drop_seed, cell, site, ue_id, node, self.ue_height);
                }
            }
        }
        let w = los_node_weights(&self.propagation, pos, (gx, gy));
        for (weight, nodes) in cache.weights.iter_mut().zip(&cache.nodes) {
            *weight = (0..4).filter(|&i| nodes[i]).map(|i| w[i]).sum();
        }
    }

    /// Coupling loss (dB) to every cell from a UE at `pos`, given per-cell
    /// LOS weights.
    pub fn coupling_losses(&self, pos: Point2, los: &[f64], out: &mut [f64]) {
        self.evaluate(pos, los, self.shadow.is_some(), false, out);
    }

    /// As [`Self::coupling_losses`] without the distance table.
    pub fn coupling_losses_exact(&self, pos: Point2, los: &[f64], out: &mut [f64]) {
        self.evaluate(pos, los, self.shadow.is_some(), true, out);
    }

    fn evaluate(&self, pos: Point2, los: &[f64], shadowing: bool, exact: bool, out: &mut [f64]) {
        let grid = self.shadow.as_ref().filter(|_| shadowing);
        let weights: Option<GridWeights> = grid.map(|g| g.weights(pos));
        let n_sectors = self.n_cells() / self.sites.len();
        for (site_idx, site) in self.sites.iter().enumerate() {
            let dx = pos.x - site.x;
            let dy = pos.y - site.y;
            let d2d = (dx * dx + dy * dy).sqrt();
            let dz = self.ue_height - self.bs_height;
            let cos_z = dz / (d2d * d2d + dz * dz).sqrt().max(1e-9);
            let (pl, ant) = if exact {
                (self.path_loss_exact(d2d), self.antenna_exact(cos_z))
            } else {
                (
                    lerp2(&self.path_loss_table, d2d / DISTANCE_STEP).unwrap_or_else(|| self.path_loss_exact(d2d)),
                    lerp2(&self.antenna_table, (cos_z + 1.0) / COS_STEP).unwrap_or_else(|| self.antenna_exact(cos_z)),
                )
            };
            let [pl_los, pl_nlos] = pl;
            let [vertical, array] = ant;
            let azimuth = if exact { dy.atan2(dx).to_degrees() } else { fast_atan2_degrees(dy, dx) };
            for sector in 0..n_sectors {
                let cell = site_idx * n_sectors + sector;
                let offset = wrap_degrees(azimuth - self.cell_azimuth[cell]);
                let mut gain = combine_element(&self.antenna, vertical, self.antenna.horizontal_attenuation(offset)) + array;
                if self.antenna.n_cols > 1 {
                    let zenith = cos_z.clamp(-1.0, 1.0).acos().to_degrees();
                    gain += column_factor(&self.antenna, zenith, offset);
                }
                let w_los = los[cell];
                let mut loss = w_los * pl_los + (1.0 - w_los) * pl_nlos - gain;
                if let (Some(grid), Some(w)) = (grid, &weights) {
                    let sigma = w_los * self.sigma_los + (1.0 - w_los) * self.sigma_nlos;
                    loss += sigma * grid.unit(w, cell);
                }
                out[cell] = loss;
            }
        }
    }

    /// Coupling loss with LOS-probability weighting in linear power and no
    /// shadowing, used by the SIR map.
    pub fn expected_coupling_losses(&self, pos: Point2, out: &mut [f64]) {
        let n = self.n_cells();
        let mut with_los = vec![0.0; n];
        let mut without = vec![0.0; n];
        self.evaluate(pos, &vec![1.0; n], false, true, &mut with_los);
        if self.all_los {
            out.copy_from_slice(&with_los);
            return;
        }
        self.evaluate(pos, &vec![0.0; n], false, true, &mut without);
        for cell in 0..n {
            let p = los_probability(&self.propagation, self.sites[self.cell_site[cell]].distance(pos), self.ue_height);
            let lin = p * 10f64.powf(-with_los[cell] / 10.0) + (1.0 - p) * 10f64.powf(-without[cell] / 10.0);
            out[cell] = -10.0 * lin.log10();
        }
    }
}
