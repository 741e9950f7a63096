//! 2.5-D terrain: vertical prisms standing on flat ground.
//!
//! A link between a ground user and an airborne point is blocked by a
//! building when the open 3-D segment passes through the interior of the
//! building's prism. Grazing contact (touching a wall or a roof edge at a
//! single point, or running along a wall) never blocks.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for planar intersection tests, in meters.
pub const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn on_ground(self) -> Point3 {
        Point3::new(self.x, self.y, 0.0)
    }

    pub fn at(self, z: f64) -> Point3 {
        Point3::new(self.x, self.y, z)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Cartesian point in meters; `z` is the altitude above ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn dist(self, other: Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Axis-aligned rectangle on the ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Area {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        let area = Self {
            x_min,
            y_min,
            x_max,
            y_max,
        };
        area.validate()?;
        Ok(area)
    }

    /// `[0, width] x [0, height]`.
    pub fn square(side: f64) -> Self {
        Self {
            x_min: 0.0,
            y_min: 0.0,
            x_max: side,
            y_max: side,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.y_min, self.x_max, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::InvalidTerrain(format!(
                "area must be a non-empty finite rectangle, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn size(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        Point2::new(
            rng.random_range(self.x_min..=self.x_max),
            rng.random_range(self.y_min..=self.y_max),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Building {
    pub footprint: Vec<Point2>,
    pub height: f64,
}

impl Building {
    pub fn new(footprint: Vec<Point2>, height: f64) -> Self {
        Self { footprint, height }
    }

    /// Axis-aligned rectangular building.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64, height: f64) -> Self {
        Self::new(
            vec![
                Point2::new(x0, y0),
                Point2::new(x1, y0),
                Point2::new(x1, y1),
                Point2::new(x0, y1),
            ],
            height,
        )
    }
}

/// Validated building with cached geometry.
#[derive(Debug, Clone)]
struct Prism {
    /// Counter-clockwise vertices.
    ring: Vec<Point2>,
    height: f64,
    lo: Point2,
    hi: Point2,
    convex: bool,
}

impl Prism {
    fn from_building(idx: usize, b: &Building) -> Result<Self> {
        let bad = |why: &str| Error::InvalidTerrain(format!("building {idx}: {why}"));
        if b.footprint.len() < 3 {
            return Err(bad("footprint needs at least 3 vertices"));
        }
        if !(b.height.is_finite() && b.height > 0.0) {
            return Err(bad("height must be finite and positive"));
        }
        if b.footprint.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(bad("non-finite vertex"));
        }
        let area2 = signed_area2(&b.footprint);
        if area2.abs() <= GEOM_EPS {
            return Err(bad("degenerate footprint (zero area)"));
        }
        if !is_simple(&b.footprint) {
            return Err(bad("footprint is not a simple polygon"));
        }
        let mut ring = b.footprint.clone();
        if area2 < 0.0 {
            ring.reverse();
        }
        let (mut lo, mut hi) = (ring[0], ring[0]);
        for p in &ring {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let n = ring.len();
        let convex = (0..n).all(|i| {
            let (a, b, c) = (ring[i], ring[(i + 1) % n], ring[(i + 2) % n]);
            cross(sub(b, a), sub(c, b)) >= -GEOM_EPS
        });
        Ok(Self {
            ring,
            height: b.height,
            lo,
            hi,
            convex,
        })
    }

    fn bbox_misses(&self, p: Point2, q: Point2) -> bool {
        p.x.max(q.x) < self.lo.x - GEOM_EPS
            || p.x.min(q.x) > self.hi.x + GEOM_EPS
            || p.y.max(q.y) < self.lo.y - GEOM_EPS
            || p.y.min(q.y) > self.hi.y + GEOM_EPS
    }

    /// Parameter intervals `(t0, t1)` of the planar segment `p + t (q - p)`
    /// lying strictly inside the footprint, in increasing order. Calls
    /// `visit` once per interval; stops early when it returns `true`.
    fn for_each_interior(&self, p: Point2, q: Point2, mut visit: impl FnMut(f64, f64) -> bool) {
        if self.bbox_misses(p, q) {
            return;
        }
        if self.convex {
            if let Some((t0, t1)) = self.clip_convex(p, q) {
                visit(t0, t1);
            }
        } else {
            self.clip_general(p, q, visit);
        }
    }

    /// Cyrus-Beck clipping against the open convex footprint.
    fn clip_convex(&self, p: Point2, q: Point2) -> Option<(f64, f64)> {
        let d = sub(q, p);
        let len = norm(d);
        let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
        let n = self.ring.len();
        for i in 0..n {
            let a = self.ring[i];
            let e = sub(self.ring[(i + 1) % n], a);
            let elen = norm(e);
            if elen <= GEOM_EPS {
                continue;
            }
            // Inward normal of a CCW edge is (-e.y, e.x); inside means dot > 0.
            let nrm = Point2::new(-e.y / elen, e.x / elen);
            let num = dot(nrm, sub(p, a));
            let den = dot(nrm, d);
            if den.abs() * len.max(1.0) <= GEOM_EPS * 1e-3 {
                if num <= GEOM_EPS {
                    return None;
                }
                continue;
            }
            let t = -num / den;
            if den > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 >= t1 {
                return None;
            }
        }
        if (t1 - t0) * len.max(1.0) <= GEOM_EPS {
            return None;
        }
        Some((t0, t1))
    }

    fn clip_general(&self, p: Point2, q: Point2, mut visit: impl FnMut(f64, f64) -> bool) {
        let d = sub(q, p);
        let len = norm(d);
        let mut ts = vec![0.0, 1.0];
        let n = self.ring.len();
        for i in 0..n {
            let a = self.ring[i];
            let b = self.ring[(i + 1) % n];
            let e = sub(b, a);
            let den = cross(d, e);
            let ap = sub(a, p);
            if den.abs() > GEOM_EPS * 1e-6 {
                let t = cross(ap, e) / den;
                let s = cross(ap, d) / den;
                if (-1e-12..=1.0 + 1e-12).contains(&s) && (0.0..=1.0).contains(&t) {
                    ts.push(t);
                }
            } else if len > 0.0 {
                // Parallel edge: its endpoints split the segment when collinear.
                for v in [a, b] {
                    if point_segment_dist(v, p, q) <= GEOM_EPS {
                        ts.push((dot(sub(v, p), d) / (len * len)).clamp(0.0, 1.0));
                    }
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|b, a| (*b - *a) * len.max(1.0) <= GEOM_EPS);
        let mut open: Option<(f64, f64)> = None;
        for w in ts.windows(2) {
            let (ta, tb) = (w[0], w[1]);
            let mid = Point2::new(p.x + 0.5 * (ta + tb) * d.x, p.y + 0.5 * (ta + tb) * d.y);
            if self.strictly_contains(mid) {
                open = Some(match open {
                    Some((s, _)) => (s, tb),
                    None => (ta, tb),
                });
            } else if let Some((s, e)) = open.take() {
                if visit(s, e) {
                    return;
                }
            }
        }
        if let Some((s, e)) = open {
            visit(s, e);
        }
    }

    fn strictly_contains(&self, pt: Point2) -> bool {
        let n = self.ring.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.ring[i];
            let b = self.ring[(i + 1) % n];
            if point_segment_dist(pt, a, b) <= GEOM_EPS {
                return false;
            }
            if (a.y > pt.y) != (b.y > pt.y) {
                let x = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if pt.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Whether the 3-D segment `p -> q` passes through the prism interior.
    fn blocks(&self, p: Point3, q: Point3) -> bool {
        let mut hit = false;
        self.for_each_interior(p.xy(), q.xy(), |t0, t1| {
            let z0 = p.z + t0 * (q.z - p.z);
            let z1 = p.z + t1 * (q.z - p.z);
            hit = z0.min(z1) < self.height;
            hit
        });
        hit
    }

    /// Lowest UAV altitude at which a ground user at `user` sees `uav_xy`
    /// over this building; `0.0` when the building is not in the way.
    fn clearance_altitude(&self, user: Point2, uav_xy: Point2) -> f64 {
        let mut first = None;
        self.for_each_interior(user, uav_xy, |t0, _| {
            first = Some(t0);
            true
        });
        match first {
            None => 0.0,
            Some(t0) if t0 <= 0.0 => f64::INFINITY,
            Some(t0) => self.height / t0,
        }
    }
}

/// Immutable collection of prism buildings inside a rectangular area.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawTerrain", into = "RawTerrain")]
pub struct TerrainMap {
    area: Area,
    buildings: Vec<Building>,
    #[serde(skip)]
    prisms: Vec<Prism>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerrain {
    area: Area,
    buildings: Vec<Building>,
}

impl TryFrom<RawTerrain> for TerrainMap {
    type Error = Error;

    fn try_from(raw: RawTerrain) -> Result<Self> {
        TerrainMap::new(raw.area, raw.buildings)
    }
}

impl From<TerrainMap> for RawTerrain {
    fn from(map: TerrainMap) -> Self {
        RawTerrain {
            area: map.area,
            buildings: map.buildings,
        }
    }
}

impl PartialEq for TerrainMap {
    fn eq(&self, other: &Self) -> bool {
        self.area == other.area && self.buildings == other.buildings
    }
}

impl TerrainMap {
    pub fn new(area: Area, buildings: Vec<Building>) -> Result<Self> {
        area.validate()?;
        let prisms = buildings
            .iter()
            .enumerate()
            .map(|(i, b)| Prism::from_building(i, b))
            .collect::<Result<Vec<_>>>()?;
        for (i, b) in buildings.iter().enumerate() {
            if b.footprint.iter().any(|&v| !area.contains(v)) {
                return Err(Error::InvalidTerrain(format!(
                    "building {i}: footprint leaves the area"
                )));
            }
        }
        Ok(Self {
            area,
            buildings,
            prisms,
        })
    }

    pub fn empty(area: Area) -> Self {
        Self {
            area,
            buildings: Vec::new(),
            prisms: Vec::new(),
        }
    }

    pub fn area(&self) -> &Area {
        &self.area
    }

    pub fn buildings(&self) -> &[Building] {
        &self.buildings
    }

    pub fn max_height(&self) -> f64 {
        self.buildings.iter().map(|b| b.height).fold(0.0, f64::max)
    }

    /// Default minimum flight altitude: one meter above the tallest roof.
    pub fn default_h_min(&self) -> f64 {
        self.max_height() + 1.0
    }

    /// Map without building `idx`.
    pub fn without(&self, idx: usize) -> Self {
        let mut out = self.clone();
        out.buildings.remove(idx);
        out.prisms.remove(idx);
        out
    }

    /// Whether the ground point lies strictly inside some footprint.
    pub fn is_indoor(&self, p: Point2) -> bool {
        self.prisms
            .iter()
            .any(|b| p.x >= b.lo.x && p.x <= b.hi.x && p.y >= b.lo.y && p.y <= b.hi.y && b.strictly_contains(p))
    }

    /// Number of distinct buildings whose interior meets the open segment
    /// between `user` and `uav`.
    pub fn blockage_count(&self, user: Point3, uav: Point3) -> usize {
        self.prisms.iter().filter(|b| b.blocks(user, uav)).count()
    }

    pub fn is_los(&self, user: Point3, uav: Point3) -> bool {
        !self.prisms.iter().any(|b| b.blocks(user, uav))
    }

    /// Per building in the way, the UAV altitude above which that building no
    /// longer blocks the link from ground point `user` to a UAV hovering over
    /// `uav_xy`. At altitude `z`, the blockage count equals the number of
    /// returned values strictly greater than `z`.
    pub fn clearance_altitudes(&self, user: Point2, uav_xy: Point2, out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.prisms
                .iter()
                .map(|b| b.clearance_altitude(user, uav_xy))
                .filter(|&c| c > 0.0),
        );
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize::<_, TerrainMap>(de).map_err(|e| Error::Parse {
            path: "<json>".into(),
            message: format!("at `{}`: {}", e.path(), e.inner()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("terrain serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

/// Side-length range for generated rectangular footprints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FootprintSpec {
    pub min_side: f64,
    pub max_side: f64,
}

impl Default for FootprintSpec {
    fn default() -> Self {
        Self {
            min_side: 8.0,
            max_side: 15.0,
        }
    }
}

const PLACEMENT_ATTEMPTS: usize = 1000;

/// Draws a random suburban-like map: Poisson building centers, uniform
/// rectangle sides, Rayleigh heights. Footprints may overlap.
pub fn sample_buildings<R: Rng + ?Sized>(
    area: Area,
    density: f64,
    rayleigh_scale: f64,
    footprint: FootprintSpec,
    rng: &mut R,
) -> Result<TerrainMap> {
    area.validate()?;
    if !(density >= 0.0 && density.is_finite()) {
        return Err(Error::config(format!("building density must be >= 0, got {density}")));
    }
    if !(rayleigh_scale > 0.0 && rayleigh_scale.is_finite()) {
        return Err(Error::config(format!(
            "Rayleigh scale must be > 0, got {rayleigh_scale}"
        )));
    }
    if !(footprint.min_side > 0.0 && footprint.min_side <= footprint.max_side) {
        return Err(Error::config(format!("invalid footprint spec {footprint:?}")));
    }
    let mean = density * area.size();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::config(e.to_string()))?
            .sample(rng) as usize
    } else {
        0
    };
    let mut buildings = Vec::with_capacity(count);
    for i in 0..count {
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let c = area.sample_point(rng);
            let w = rng.random_range(footprint.min_side..=footprint.max_side);
            let l = rng.random_range(footprint.min_side..=footprint.max_side);
            let (x0, x1, y0, y1) = (c.x - 0.5 * w, c.x + 0.5 * w, c.y - 0.5 * l, c.y + 0.5 * l);
            if x0 >= area.x_min && x1 <= area.x_max && y0 >= area.y_min && y1 <= area.y_max {
                placed = Some((x0, y0, x1, y1));
                break;
            }
        }
        let Some((x0, y0, x1, y1)) = placed else {
            return Err(Error::Generation(format!(
                "could not place building {i} inside the area after {PLACEMENT_ATTEMPTS} attempts"
            )));
        };
        buildings.push(Building::rect(x0, y0, x1, y1, sample_rayleigh(rayleigh_scale, rng)));
    }
    TerrainMap::new(area, buildings)
}

pub(crate) fn sample_rayleigh<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    // Inverse CDF on (0, 1] so the height is strictly positive.
    let u: f64 = 1.0 - rng.random::<f64>();
    let h = scale * (-2.0 * u.ln()).sqrt();
    h.max(f64::MIN_POSITIVE)
}

fn sub(a: Point2, b: Point2) -> Point2 {
    Point2::new(a.x - b.x, a.y - b.y)
}

fn dot(a: Point2, b: Point2) -> f64 {
    a.x * b.x + a.y * b.y
}

fn cross(a: Point2, b: Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn norm(a: Point2) -> f64 {
    a.x.hypot(a.y)
}

fn point_segment_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = sub(b, a);
    let l2 = dot(ab, ab);
    let t = if l2 > 0.0 {
        (dot(sub(p, a), ab) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm(sub(p, Point2::new(a.x + t * ab.x, a.y + t * ab.y)))
}

fn signed_area2(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| cross(ring[i], ring[(i + 1) % n])).sum()
}

fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = cross(sub(b, a), sub(c, a));
    let d2 = cross(sub(b, a), sub(d, a));
    let d3 = cross(sub(d, c), sub(a, c));
    let d4 = cross(sub(d, c), sub(b, c));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    point_segment_dist(c, a, b) <= GEOM_EPS
        || point_segment_dist(d, a, b) <= GEOM_EPS
        || point_segment_dist(a, c, d) <= GEOM_EPS
        || point_segment_dist(b, c, d) <= GEOM_EPS
}

fn is_simple(ring: &[Point2]) -> bool {
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if a.dist(b) <= GEOM_EPS {
            return false;
        }
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_touch(a, b, ring[j], ring[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn unit_map() -> TerrainMap {
        TerrainMap::new(
            Area::new(-50.0, -50.0, 50.0, 50.0).unwrap(),
            vec![Building::rect(10.0, -1.0, 12.0, 1.0, 30.0)],
        )
        .unwrap()
    }

    #[test]
    fn empty_map_never_blocks() {
        let map = TerrainMap::empty(Area::square(100.0));
        assert_eq!(map.blockage_count(Point3::new(1.0, 1.0, 0.0), Point3::new(90.0, 90.0, 5.0)), 0);
    }

    #[test]
    fn vertical_link_misses_footprint() {
        let map = unit_map();
        let user = Point3::new(0.0, 0.0, 0.0);
        assert_eq!(map.blockage_count(user, Point3::new(0.0, 0.0, 50.0)), 0);
    }

    #[test]
    fn low_link_through_building_is_blocked() {
        let map = unit_map();
        let user = Point3::new(0.0, 0.0, 0.0);
        let uav = Point3::new(20.0, 0.0, 20.0);
        assert_eq!(map.blockage_count(user, uav), 1);
        assert!(!map.is_los(user, uav));
    }

    #[test]
    fn grazing_contacts_do_not_block() {
        let map = TerrainMap::new(
            Area::square(100.0),
            vec![Building::rect(40.0, 40.0, 60.0, 60.0, 20.0)],
        )
        .unwrap();
        // Runs exactly along the bottom wall.
        assert!(map.is_los(Point3::new(10.0, 40.0, 0.0), Point3::new(90.0, 40.0, 5.0)));
        // Touches the corner (40, 40) only.
        assert!(map.is_los(Point3::new(30.0, 50.0, 0.0), Point3::new(50.0, 30.0, 1.0)));
        // Enters the footprint exactly at roof height.
        let user = Point3::new(0.0, 50.0, 0.0);
        let uav = Point3::new(80.0, 50.0, 40.0);
        assert!(map.is_los(user, uav));
        let uav_lower = Point3::new(80.0, 50.0, 39.999);
        assert!(!map.is_los(user, uav_lower));
    }

    #[test]
    fn concave_footprint_uses_first_entry() {
        // U-shaped building open to the north.
        let u = Building::new(
            vec![
                Point2::new(20.0, 20.0),
                Point2::new(50.0, 20.0),
                Point2::new(50.0, 50.0),
                Point2::new(40.0, 50.0),
                Point2::new(40.0, 30.0),
                Point2::new(30.0, 30.0),
                Point2::new(30.0, 50.0),
                Point2::new(20.0, 50.0),
            ],
            10.0,
        );
        let map = TerrainMap::new(Area::square(100.0), vec![u]).unwrap();
        let user = Point3::new(35.0, 90.0, 0.0);
        // Drops into the notch without touching walls.
        assert!(map.is_los(user, Point3::new(35.0, 35.0, 3.0)));
        // Crosses the left arm, then the notch, then the right arm.
        let user = Point3::new(0.0, 40.0, 0.0);
        assert_eq!(map.blockage_count(user, Point3::new(100.0, 40.0, 25.0)), 1);
        let mut c = Vec::new();
        map.clearance_altitudes(user.xy(), Point2::new(100.0, 40.0), &mut c);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 10.0 / 0.2).abs() < 1e-9);
    }

    #[test]
    fn clearance_matches_count() {
        let map = unit_map();
        let mut c = Vec::new();
        map.clearance_altitudes(Point2::new(0.0, 0.0), Point2::new(20.0, 0.0), &mut c);
        assert_eq!(c, vec![60.0]);
        assert!(!map.is_los(Point3::new(0.0, 0.0, 0.0), Point3::new(20.0, 0.0, 59.9)));
        assert!(map.is_los(Point3::new(0.0, 0.0, 0.0), Point3::new(20.0, 0.0, 60.0)));
    }

    #[test]
    fn rejects_malformed_polygons() {
        let area = Area::square(100.0);
        let bowtie = Building::new(
            vec![
                Point2::new(10.0, 10.0),
                Point2::new(20.0, 20.0),
                Point2::new(20.0, 10.0),
                Point2::new(10.0, 20.0),
            ],
            5.0,
        );
        assert!(matches!(TerrainMap::new(area, vec![bowtie]), Err(Error::InvalidTerrain(_))));
        let two = Building::new(vec![Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)], 5.0);
        assert!(TerrainMap::new(area, vec![two]).is_err());
        let flat = Building::rect(1.0, 1.0, 2.0, 2.0, 0.0);
        assert!(TerrainMap::new(area, vec![flat]).is_err());
        let outside = Building::rect(90.0, 90.0, 120.0, 95.0, 5.0);
        assert!(TerrainMap::new(area, vec![outside]).is_err());
    }

    #[test]
    fn zero_density_gives_empty_map() {
        let mut r = rng::from_seed(1);
        let map = sample_buildings(Area::square(300.0), 0.0, 15.0, FootprintSpec::default(), &mut r)
            .unwrap();
        assert!(map.buildings().is_empty());
    }

    #[test]
    fn generation_is_deterministic() {
        let gen = |seed| {
            let mut r = rng::from_seed(seed);
            sample_buildings(Area::square(300.0), 1e-4, 15.0, FootprintSpec::default(), &mut r)
                .unwrap()
        };
        assert_eq!(gen(11), gen(11));
        assert_ne!(gen(11), gen(12));
    }

    #[test]
    fn generation_fails_when_footprints_cannot_fit() {
        let mut r = rng::from_seed(3);
        let spec = FootprintSpec {
            min_side: 200.0,
            max_side: 250.0,
        };
        let err = sample_buildings(Area::square(100.0), 1e-2, 15.0, spec, &mut r).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut r = rng::from_seed(5);
        let map =
            sample_buildings(Area::square(300.0), 2e-4, 15.0, FootprintSpec::default(), &mut r)
                .unwrap();
        let back = TerrainMap::from_json(&map.to_json()).unwrap();
        assert_eq!(map, back);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let text = r#"{"area": {"x_min": 0, "y_min": 0, "x_max": 10, "y_max": 10},
            "buildings": [{"footprint": [[1,1],[2,1],[2,2]], "hieght": 3}]}"#;
        let msg = TerrainMap::from_json(text).unwrap_err().to_string();
        assert!(msg.contains("buildings[0]"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }
}
