//! Hexagonal 19-site deployment, sector cells, UE motion and BS→UE angles.
//!
//! Coordinates are meters in a local x-y plane with the center site at the
//! origin. Headings and azimuths are degrees counter-clockwise from +x.
//! Zenith angles run from 0° (straight up) through 90° (horizontal) to 180°
//! (straight down).

use rand::Rng;

use crate::error::{Result, SimError};

pub const N_SITES: usize = 19;
pub const SECTORS_PER_SITE: usize = 3;
/// Sector boresight azimuths, identical at every site.
pub const SECTOR_AZIMUTHS_DEG: [f64; SECTORS_PER_SITE] = [30.0, 150.0, 270.0];
pub const DEFAULT_TX_POWER_DBM: f64 = 46.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Rotate counter-clockwise about the origin.
    pub fn rotated(self, degrees: f64) -> Point2 {
        let (s, c) = degrees.to_radians().sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub site_index: usize,
    pub position: Point2,
    /// Sector boresight azimuth in degrees.
    pub azimuth: f64,
    pub tx_power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub isd: f64,
    pub n_sites: usize,
    pub sectors_per_site: usize,
    pub bs_height: f64,
    pub site_positions: Vec<Point2>,
    pub cells: Vec<Cell>,
}

/// Builds the center site plus two hexagonal rings (1 + 6 + 12 sites), three
/// sectors per site. Cell ids are `site * 3 + sector`.
pub fn build_layout(isd: f64, bs_height: f64) -> Result<Deployment> {
    if !(isd > 0.0) || !isd.is_finite() {
        return Err(SimError::invalid("deployment.isd", "must be positive"));
    }
    if !bs_height.is_finite() || bs_height < 0.0 {
        return Err(SimError::invalid("deployment.bs_height", "must be non-negative"));
    }

    let mut sites = vec![Point2::ORIGIN];
    // First ring: corners of the hexagon at distance isd.
    for k in 0..6 {
        sites.push(Point2::new(isd, 0.0).rotated(60.0 * k as f64));
    }
    // Second ring: corners at 2·isd plus edge midpoints at √3·isd.
    for k in 0..6 {
        sites.push(Point2::new(2.0 * isd, 0.0).rotated(60.0 * k as f64));
        sites.push(Point2::new(3f64.sqrt() * isd, 0.0).rotated(30.0 + 60.0 * k as f64));
    }

    let cells = sites
        .iter()
        .enumerate()
        .flat_map(|(site_index, &position)| {
            SECTOR_AZIMUTHS_DEG
                .iter()
                .enumerate()
                .map(move |(sector, &azimuth)| Cell {
                    id: site_index * SECTORS_PER_SITE + sector,
                    site_index,
                    position,
                    azimuth,
                    tx_power: DEFAULT_TX_POWER_DBM,
                })
        })
        .collect();

    Ok(Deployment {
        isd,
        n_sites: N_SITES,
        sectors_per_site: SECTORS_PER_SITE,
        bs_height,
        site_positions: sites,
        cells,
    })
}

impl Deployment {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn set_tx_power(&mut self, dbm: f64) {
        for c in &mut self.cells {
            c.tx_power = dbm;
        }
    }

    pub fn angles_to(&self, cell: usize, ue: &UePose) -> Result<LinkAngles> {
        angles_to(&self.cells[cell], self.bs_height, ue)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UePose {
    /// z is the height above ground.
    pub position: Point3,
    /// Degrees counter-clockwise from +x.
    pub heading: f64,
    /// Meters per second.
    pub speed: f64,
}

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

/// Straight-line motion confined to a disc about the origin.
///
/// A step that would leave the disc is rejected: the UE keeps its position,
/// draws a uniformly random heading pointing into the disc and retries the
/// move once along the new heading.
pub fn step_pose<R: Rng + ?Sized>(pose: UePose, dt: f64, bound_radius: f64, rng: &mut R) -> UePose {
    let advance = |p: Point3, heading: f64| {
        let (s, c) = heading.to_radians().sin_cos();
        Point3::new(p.x + pose.speed * dt * c, p.y + pose.speed * dt * s, p.z)
    };
    let inside = |p: Point3| p.x * p.x + p.y * p.y <= bound_radius * bound_radius;

    let next = advance(pose.position, pose.heading);
    if inside(next) {
        return UePose { position: next, ..pose };
    }

    let here = pose.position;
    let inward = if here.x == 0.0 && here.y == 0.0 {
        rng.gen_range(0.0..360.0)
    } else {
        (-here.y).atan2(-here.x).to_degrees()
    };
    let heading = wrap_degrees(inward + rng.gen_range(-90.0..90.0));
    let retry = advance(here, heading);
    UePose {
        position: if inside(retry) { retry } else { here },
        heading,
        speed: pose.speed,
    }
}

/// Wraps an angle into (-180°, 180°].
#[inline]
pub fn wrap_degrees(a: f64) -> f64 {
    let mut w = if a > -540.0 && a <= 540.0 { a } else { a % 360.0 };
    if w > 180.0 {
        w -= 360.0;
    } else if w <= -180.0 {
        w += 360.0;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkAngles {
    pub zenith: f64,
    /// Offset from the sector boresight, in (-180°, 180°].
    pub azimuth_offset: f64,
    pub d2d: f64,
    pub d3d: f64,
}

pub fn angles_to(cell: &Cell, bs_height: f64, ue: &UePose) -> Result<LinkAngles> {
    let dx = ue.position.x - cell.position.x;
    let dy = ue.position.y - cell.position.y;
    let dz = ue.position.z - bs_height;
    let d2d = dx.hypot(dy);
    let d3d = d2d.hypot(dz);
    if d3d < 1e-9 {
        return Err(SimError::DegenerateGeometry);
    }
    let zenith = d2d.atan2(dz).to_degrees();
    let azimuth = dy.atan2(dx).to_degrees();
    Ok(LinkAngles {
        zenith,
        azimuth_offset: wrap_degrees(azimuth - cell.azimuth),
        d2d,
        d3d,
    })
}

/// Uniform point in a disc of the given radius.
pub fn uniform_in_disc<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point2 {
    let r = radius * rng.gen::<f64>().sqrt();
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    Point2::new(r * a.cos(), r * a.sin())
}
