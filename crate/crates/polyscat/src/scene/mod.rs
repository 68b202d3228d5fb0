//! Polygonal scatterers and their admissible-class machinery.
//!
//! A scatterer is a finite union of pairwise disjoint simple polygons, stored
//! counterclockwise. Its boundary decomposes into cells (edges) carrying unit
//! outward normals. Class membership is quantified by three constants:
//! `h` (minimum cell length), `L` (slope bound: each vertex wedge must be a
//! Lipschitz graph with constant `L`), and `R` (all vertices inside the closed
//! disc of radius `R` about the origin).

mod connect;
mod distance;
mod perturb;
mod symmetry;

pub use connect::{exterior_connectedness, ConnectednessProfile, ConnectednessSample};
pub use distance::{
    direct_boundary_gap, distance_triple, hausdorff_boundary, hausdorff_sets, DistanceTriple,
};
pub use perturb::{perturb, PerturbMode};
pub use symmetry::{direction_independence, symmetry_lines, DirectionIndependence};

use crate::geom::{orient, HyperplaneLine, Point, Segment};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("polygon {index}: fewer than 3 vertices")]
    TooFewVertices { index: usize },
    #[error("polygon {index}: non-finite coordinate")]
    NonFinite { index: usize },
    #[error("polygon {index}: zero signed area, cannot orient")]
    ZeroArea { index: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("scatterer is empty")]
    EmptyScatterer,
    #[error("perturbation failed after {attempts} attempts: {reason}")]
    PerturbationFailed { attempts: usize, reason: String },
    #[error("scene file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Boundary condition carried by the scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// Homogeneous Neumann condition (grad u . nu = 0).
    #[serde(rename = "hard")]
    SoundHard,
    /// Homogeneous Dirichlet condition (u = 0).
    #[serde(rename = "soft")]
    SoundSoft,
}

/// Simple closed polygon, counterclockwise, at least 3 vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds a polygon, enforcing counterclockwise orientation. Rejects
    /// fewer than 3 vertices, non-finite coordinates and zero signed area.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, SceneError> {
        Self::new_indexed(vertices, 0)
    }

    fn new_indexed(mut vertices: Vec<Point>, index: usize) -> Result<Polygon, SceneError> {
        if vertices.len() < 3 {
            return Err(SceneError::TooFewVertices { index });
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(SceneError::NonFinite { index });
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(SceneError::ZeroArea { index });
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least 3 vertices by construction
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point {
        // Area-weighted centroid of the polygon interior.
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        let n = self.vertices.len();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            a += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    /// Point-in-polygon by crossing parity. Boundary points count as inside
    /// up to the robustness of the parity test; callers needing a closed-set
    /// test should combine with `distance_to_boundary`.
    pub fn contains(&self, p: Point) -> bool {
        if self.distance_to_boundary(p) == 0.0 {
            return true;
        }
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[j];
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|e| e.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// True when no two non-adjacent edges intersect and no adjacent pair
    /// overlaps beyond the shared vertex.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let ei = self.edge(i);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let ej = self.edge(j);
                if adjacent {
                    // Shared endpoint only; anything more is an overlap.
                    let shared = if j == i + 1 { ei.b } else { ei.a };
                    let (ti, tj) = if j == i + 1 { (ei.a, ej.b) } else { (ej.a, ei.b) };
                    if ei.distance_to_point(tj) == 0.0 && tj.dist(shared) > 0.0
                        || ej.distance_to_point(ti) == 0.0 && ti.dist(shared) > 0.0
                    {
                        return false;
                    }
                } else if ei.intersects(&ej) {
                    return false;
                }
            }
        }
        true
    }

    pub fn reflected(&self, pi: &HyperplaneLine) -> Polygon {
        // Reflection reverses orientation; the constructor restores CCW.
        let verts = self.vertices.iter().map(|&p| pi.reflect_point(p)).collect();
        Polygon::new(verts).expect("reflection preserves non-degeneracy")
    }

    pub fn translated(&self, by: Point) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| p + by).collect(),
        }
    }

    pub fn rotated(&self, angle: f64) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| p.rotated(angle)).collect(),
        }
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut a = 0.0;
    for i in 0..n {
        a += vertices[i].cross(vertices[(i + 1) % n]);
    }
    0.5 * a
}

/// One flat boundary cell: an edge with its unit outward normal.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub segment: Segment,
    pub normal: Point,
    pub polygon: usize,
    pub edge: usize,
}

/// Admissible-class constants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassParams {
    /// Minimum cell (edge) length.
    pub h: f64,
    /// Lipschitz slope bound for the boundary as a local graph.
    #[serde(rename = "L")]
    pub l: f64,
    /// All vertices lie in the closed disc of this radius about the origin.
    #[serde(rename = "R")]
    pub r: f64,
}

/// One violated admissibility condition, with the offending feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClassViolation {
    TooFewVertices { polygon: usize },
    DegenerateVertex { polygon: usize, vertex: usize },
    SelfIntersection { polygon: usize },
    NotDisjoint { a: usize, b: usize },
    EdgeTooShort { polygon: usize, edge: usize, length: f64 },
    SlopeExceeded { polygon: usize, vertex: usize, slope: f64 },
    OutsideRadius { polygon: usize, vertex: usize, distance: f64 },
    ExteriorDisconnected,
    Empty,
}

/// Result of a class-membership check: pass/fail per condition plus the
/// measured constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassReport {
    pub pass: bool,
    /// Minimum edge length actually present.
    pub h_actual: f64,
    /// Smallest slope bound under which every vertex wedge is a graph.
    pub l_actual: f64,
    /// Largest vertex distance from the origin.
    pub r_actual: f64,
    pub violations: Vec<ClassViolation>,
}

/// A sound-hard or sound-soft union of disjoint simple polygons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scatterer2D {
    polygons: Vec<Polygon>,
    kind: BoundaryKind,
}

impl Scatterer2D {
    pub fn new(polygons: Vec<Polygon>, kind: BoundaryKind) -> Scatterer2D {
        Scatterer2D { polygons, kind }
    }

    /// The empty scatterer: no obstacle at all. Solves reduce to the
    /// incident field.
    pub fn empty(kind: BoundaryKind) -> Scatterer2D {
        Scatterer2D { polygons: Vec::new(), kind }
    }

    pub fn from_vertex_loops(
        loops: &[Vec<(f64, f64)>],
        kind: BoundaryKind,
    ) -> Result<Scatterer2D, SceneError> {
        let polygons = loops
            .iter()
            .enumerate()
            .map(|(i, l)| {
                Polygon::new_indexed(l.iter().map(|&(x, y)| Point::new(x, y)).collect(), i)
            })
            .collect::<Result<_, _>>()?;
        Ok(Scatterer2D::new(polygons, kind))
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: BoundaryKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    /// All cells with outward normals. For a CCW polygon the outward normal
    /// of edge a->b is the tangent rotated by -90 degrees.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (pi, poly) in self.polygons.iter().enumerate() {
            for (ei, seg) in poly.edges().enumerate() {
                if let Some(t) = seg.tangent() {
                    out.push(Cell {
                        segment: seg,
                        normal: Point::new(t.y, -t.x),
                        polygon: pi,
                        edge: ei,
                    });
                }
            }
        }
        out
    }

    pub fn contains(&self, p: Point) -> bool {
        self.polygons.iter().any(|poly| poly.contains(p))
    }

    /// Distance from `p` to the boundary; `inf` for the empty scatterer.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.polygons
            .iter()
            .map(|poly| poly.distance_to_boundary(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive outside, negative inside, zero on the boundary.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = self.boundary_distance(p);
        if d == f64::INFINITY {
            return f64::INFINITY;
        }
        if self.contains(p) {
            -d
        } else {
            d
        }
    }

    pub fn bounding_radius(&self) -> f64 {
        self.polygons
            .iter()
            .flat_map(|p| p.vertices())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn total_vertices(&self) -> usize {
        self.polygons.iter().map(|p| p.len()).sum()
    }

    pub fn reflected(&self, pi: &HyperplaneLine) -> Scatterer2D {
        Scatterer2D {
            polygons: self.polygons.iter().map(|p| p.reflected(pi)).collect(),
            kind: self.kind,
        }
    }

    pub fn translated(&self, by: Point) -> Scatterer2D {
        Scatterer2D {
            polygons: self.polygons.iter().map(|p| p.translated(by)).collect(),
            kind: self.kind,
        }
    }

    pub fn rotated(&self, angle: f64) -> Scatterer2D {
        Scatterer2D {
            polygons: self.polygons.iter().map(|p| p.rotated(angle)).collect(),
            kind: self.kind,
        }
    }

    /// Class-membership check against `(h, L, R)`. Returns a report listing
    /// every violated condition; degeneracies are reported, never panics.
    pub fn validate(&self, class: &ClassParams) -> ClassReport {
        let mut violations = Vec::new();
        let mut h_actual = f64::INFINITY;
        let mut l_actual: f64 = 0.0;
        let mut r_actual: f64 = 0.0;

        if self.polygons.is_empty() {
            violations.push(ClassViolation::Empty);
        }

        for (pi, poly) in self.polygons.iter().enumerate() {
            let n = poly.len();
            if n < 3 {
                violations.push(ClassViolation::TooFewVertices { polygon: pi });
                continue;
            }
            // Repeated or collinear-collapsing vertices.
            let mut degenerate = false;
            for vi in 0..n {
                let prev = poly.vertices()[(vi + n - 1) % n];
                let cur = poly.vertices()[vi];
                let next = poly.vertices()[(vi + 1) % n];
                let e1 = cur - prev;
                let e2 = next - cur;
                let l1 = e1.norm();
                let l2 = e2.norm();
                if l1 == 0.0 || l2 == 0.0 || orient(prev, cur, next).abs() < 1e-12 * l1 * l2 {
                    violations.push(ClassViolation::DegenerateVertex { polygon: pi, vertex: vi });
                    degenerate = true;
                }
            }
            if !degenerate && !poly.is_simple() {
                violations.push(ClassViolation::SelfIntersection { polygon: pi });
            }
            for (ei, seg) in poly.edges().enumerate() {
                let len = seg.length();
                h_actual = h_actual.min(len);
                if len < class.h {
                    violations.push(ClassViolation::EdgeTooShort { polygon: pi, edge: ei, length: len });
                }
            }
            for vi in 0..n {
                let a = poly.vertices()[(vi + n - 1) % n];
                let b = poly.vertices()[vi];
                let c = poly.vertices()[(vi + 1) % n];
                if let Some(slope) = wedge_slope(a, b, c) {
                    l_actual = l_actual.max(slope);
                    if slope > class.l {
                        violations.push(ClassViolation::SlopeExceeded { polygon: pi, vertex: vi, slope });
                    }
                }
                let dist = b.norm();
                r_actual = r_actual.max(dist);
                if dist > class.r {
                    violations.push(ClassViolation::OutsideRadius { polygon: pi, vertex: vi, distance: dist });
                }
            }
        }

        // Pairwise disjointness: positive boundary gap, no containment.
        for i in 0..self.polygons.len() {
            for j in (i + 1)..self.polygons.len() {
                if !disjoint(&self.polygons[i], &self.polygons[j]) {
                    violations.push(ClassViolation::NotDisjoint { a: i, b: j });
                }
            }
        }

        // Quantitative exterior-connectedness probe on a coarse grid. Skipped
        // when structural checks already failed (grid would be meaningless).
        if violations.is_empty() && !self.polygons.is_empty() {
            let span = class.r + 1.0;
            let probe_t = (class.h * 0.5).min(span * 0.5);
            if let Ok(sample) = exterior_connectedness(self, probe_t, span) {
                if sample.delta_est <= 0.0 {
                    violations.push(ClassViolation::ExteriorDisconnected);
                }
            }
        }

        ClassReport {
            pass: violations.is_empty(),
            h_actual: if h_actual.is_finite() { h_actual } else { 0.0 },
            l_actual,
            r_actual,
            violations,
        }
    }
}

/// Smallest slope bound L such that the wedge a-b-c is the graph of an
/// L-Lipschitz function near b. Straight (collinear) wedges give 0; wedges
/// folded past a right angle give `None` (not a graph for any L).
fn wedge_slope(a: Point, b: Point, c: Point) -> Option<f64> {
    let e1 = (b - a).normalized()?;
    let e2 = (c - b).normalized()?;
    // Turn angle of the path a->b->c; a graph requires each ray within
    // atan(L) of the through direction, i.e. |turn|/2 <= atan(L) < pi/2.
    let turn = e1.cross(e2).atan2(e1.dot(e2)).abs();
    if turn >= std::f64::consts::PI - 1e-12 {
        return None;
    }
    Some((0.5 * turn).tan())
}

fn disjoint(a: &Polygon, b: &Polygon) -> bool {
    for ea in a.edges() {
        for eb in b.edges() {
            if ea.distance_to_segment(&eb) <= 0.0 {
                return false;
            }
        }
    }
    // Positive boundary gap established; rule out containment.
    !a.contains(b.vertices()[0]) && !b.contains(a.vertices()[0])
}

/// On-disk scene description.
#[derive(Debug, Serialize, Deserialize)]
pub struct SceneFile {
    pub polygons: Vec<Vec<[f64; 2]>>,
    pub bc: BoundaryKind,
    pub class: ClassParams,
}

/// Loads a scene file, normalizing polygon orientation.
pub fn load_scene(path: &Path) -> Result<(Scatterer2D, ClassParams), SceneError> {
    let text = std::fs::read_to_string(path)?;
    let file: SceneFile =
        serde_json::from_str(&text).map_err(|e| SceneError::Format(e.to_string()))?;
    scene_from_file(file)
}

pub fn scene_from_file(file: SceneFile) -> Result<(Scatterer2D, ClassParams), SceneError> {
    let loops: Vec<Vec<(f64, f64)>> = file
        .polygons
        .iter()
        .map(|l| l.iter().map(|&[x, y]| (x, y)).collect())
        .collect();
    let scatterer = Scatterer2D::from_vertex_loops(&loops, file.bc)?;
    Ok((scatterer, file.class))
}

pub fn save_scene(path: &Path, s: &Scatterer2D, class: &ClassParams) -> Result<(), SceneError> {
    let file = SceneFile {
        polygons: s
            .polygons()
            .iter()
            .map(|p| p.vertices().iter().map(|v| [v.x, v.y]).collect())
            .collect(),
        bc: s.kind(),
        class: *class,
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| SceneError::Format(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Axis-aligned square of side `side` centered at `center`.
pub fn square(center: Point, side: f64, kind: BoundaryKind) -> Scatterer2D {
    let s = side / 2.0;
    Scatterer2D::from_vertex_loops(
        &[vec![
            (center.x - s, center.y - s),
            (center.x + s, center.y - s),
            (center.x + s, center.y + s),
            (center.x - s, center.y + s),
        ]],
        kind,
    )
    .expect("square is a valid polygon")
}

/// Regular n-gon inscribed in the circle of radius `radius` about `center`,
/// with a vertex at angle `phase`.
pub fn regular_polygon(
    center: Point,
    radius: f64,
    n: usize,
    phase: f64,
    kind: BoundaryKind,
) -> Scatterer2D {
    let verts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let th = phase + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (center.x + radius * th.cos(), center.y + radius * th.sin())
        })
        .collect();
    Scatterer2D::from_vertex_loops(&[verts], kind).expect("regular polygon is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Scatterer2D {
        square(Point::ZERO, 1.0, BoundaryKind::SoundHard)
    }

    #[test]
    fn square_passes_class_check() {
        let s = unit_square();
        let report = s.validate(&ClassParams { h: 0.5, l: 10.0, r: 2.0 });
        assert!(report.pass, "{:?}", report.violations);
        assert!((report.h_actual - 1.0).abs() < 1e-15);
        assert!((report.l_actual - 1.0).abs() < 1e-12); // right angles
    }

    #[test]
    fn collinear_midpoint_vertex_fails_as_degenerate() {
        let s = Scatterer2D::from_vertex_loops(
            &[vec![(-0.5, -0.5), (0.0, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]],
            BoundaryKind::SoundHard,
        )
        .unwrap();
        let report = s.validate(&ClassParams { h: 0.1, l: 10.0, r: 2.0 });
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ClassViolation::DegenerateVertex { vertex: 1, .. })));
    }

    #[test]
    fn short_edge_fails_h() {
        // L-shaped hexagon with shortest edge 0.2.
        let s = Scatterer2D::from_vertex_loops(
            &[vec![(0.0, 0.0), (1.0, 0.0), (1.0, 0.2), (0.2, 0.2), (0.2, 1.0), (0.0, 1.0)]],
            BoundaryKind::SoundHard,
        )
        .unwrap();
        let report = s.validate(&ClassParams { h: 0.25, l: 10.0, r: 2.0 });
        assert!(!report.pass);
        assert!((report.h_actual - 0.2).abs() < 1e-15);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ClassViolation::EdgeTooShort { .. })));
    }

    #[test]
    fn orientation_normalized_on_construction() {
        let cw = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(cw.area() > 0.0);
    }

    #[test]
    fn outward_normals_point_away() {
        let s = unit_square();
        for cell in s.cells() {
            let m = cell.segment.midpoint();
            let probe = m + cell.normal * 0.1;
            assert!(!s.contains(probe), "normal must leave the square");
            assert!((cell.normal.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn signed_distance_signs() {
        let s = unit_square();
        assert!(s.signed_distance(Point::ZERO) < 0.0);
        assert!((s.signed_distance(Point::new(1.5, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(s.signed_distance(Point::new(0.5, 0.0)), 0.0);
    }

    #[test]
    fn overlapping_polygons_flagged() {
        let a = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let b = vec![(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)];
        let s = Scatterer2D::from_vertex_loops(&[a, b], BoundaryKind::SoundHard).unwrap();
        let report = s.validate(&ClassParams { h: 0.1, l: 10.0, r: 4.0 });
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ClassViolation::NotDisjoint { a: 0, b: 1 })));
    }

    #[test]
    fn scene_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("polyscat-scene-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("square.json");
        let s = unit_square();
        let class = ClassParams { h: 0.5, l: 10.0, r: 2.0 };
        save_scene(&path, &s, &class).unwrap();
        let (loaded, loaded_class) = load_scene(&path).unwrap();
        assert_eq!(loaded, s);
        assert_eq!(loaded_class.h, class.h);
        std::fs::remove_dir_all(&dir).ok();
    }
}
