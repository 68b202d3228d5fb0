//! Panel meshes on polygon boundaries.
//!
//! Every edge is split into panels graded toward both endpoints (corners
//! carry the density singularities), each panel carrying a fixed-order
//! Gauss-Legendre rule. The node budget per polygon decides the panel order:
//! tiny budgets fall back to low-order panels so a 64-node mesh on a 64-gon
//! is still representable (one midpoint panel per edge).

use crate::geom::{Point, Segment};
use crate::quad::{barycentric_weights, differentiation_matrix, gauss_legendre, GaussRule};
use crate::scene::Scatterer2D;

/// One straight panel: a sub-segment of a boundary cell.
#[derive(Debug, Clone)]
pub struct Panel {
    pub seg: Segment,
    pub len: f64,
    pub tangent: Point,
    pub normal: Point,
    /// Index of the parent cell in `Scatterer2D::cells()`.
    pub cell: usize,
    /// Index of this panel's first node in the global node arrays.
    pub first: usize,
}

impl Panel {
    #[inline]
    pub fn midpoint(&self) -> Point {
        self.seg.midpoint()
    }

    /// Maps a reference coordinate t in [-1, 1] to a boundary point.
    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.seg.midpoint() + self.tangent * (0.5 * self.len * t)
    }

    /// Reference coordinate of the orthogonal projection of `x`, clamped.
    #[inline]
    pub fn project(&self, x: Point) -> f64 {
        let t = (x - self.seg.midpoint()).dot(self.tangent) / (0.5 * self.len);
        t.clamp(-1.0, 1.0)
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        self.seg.distance_to_point(x)
    }
}

/// Composite graded Gauss mesh over all cells of a scatterer.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    /// Nodes per panel.
    pub order: usize,
    pub rule: GaussRule,
    pub bary: Vec<f64>,
    /// Spectral differentiation matrix on the reference panel.
    pub diff: Vec<Vec<f64>>,
    pub panels: Vec<Panel>,
    pub nodes: Vec<Point>,
    pub normals: Vec<Point>,
    pub tangents: Vec<Point>,
    /// Arclength quadrature weights.
    pub weights: Vec<f64>,
    /// Panel index of each node.
    pub node_panel: Vec<usize>,
}

impl BoundaryMesh {
    /// Builds the mesh with roughly `nodes_per_polygon` nodes on each polygon
    /// and panels graded toward corners with exponent `grading`.
    pub fn build(s: &Scatterer2D, nodes_per_polygon: usize, grading: f64) -> BoundaryMesh {
        // Panel order: spend at least one panel per edge, capping the order
        // at 4 and falling back to low order under tiny budgets.
        let max_edges = s
            .polygons()
            .iter()
            .map(|p| p.len())
            .max()
            .unwrap_or(1)
            .max(1);
        let order = (nodes_per_polygon / max_edges).clamp(1, 4);
        let rule = gauss_legendre(order);
        let bary = barycentric_weights(&rule.nodes);
        let diff = differentiation_matrix(&rule.nodes, &bary);

        let mut panels: Vec<Panel> = Vec::new();
        let mut nodes = Vec::new();
        let mut normals = Vec::new();
        let mut tangents = Vec::new();
        let mut weights = Vec::new();
        let mut node_panel = Vec::new();

        let mut cell_index = 0usize;
        for poly in s.polygons() {
            let perimeter: f64 = poly.edges().map(|e| e.length()).sum();
            let total_panels = (nodes_per_polygon as f64 / order as f64).round().max(1.0);
            for (ei, seg) in poly.edges().enumerate() {
                let len = seg.length();
                let share = (total_panels * len / perimeter).round().max(1.0) as usize;
                let breaks = graded_breakpoints(share, grading);
                let tangent = seg.tangent().expect("non-degenerate edge");
                let normal = Point::new(tangent.y, -tangent.x);
                for w in breaks.windows(2) {
                    let a = seg.point_at(w[0]);
                    let b = seg.point_at(w[1]);
                    let plen = a.dist(b);
                    let first = nodes.len();
                    let panel = Panel {
                        seg: Segment::new(a, b),
                        len: plen,
                        tangent,
                        normal,
                        cell: cell_index + ei,
                        first,
                    };
                    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                        nodes.push(panel.point_at(*t));
                        normals.push(normal);
                        tangents.push(tangent);
                        weights.push(0.5 * plen * w);
                        node_panel.push(panels.len());
                    }
                    panels.push(panel);
                }
            }
            cell_index += poly.len();
        }
        BoundaryMesh { order, rule, bary, diff, panels, nodes, normals, tangents, weights, node_panel }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Smallest distance from `x` to the mesh, together with the nearest
    /// panel index.
    pub fn nearest_panel(&self, x: Point) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (i, p) in self.panels.iter().enumerate() {
            let d = p.distance_to(x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Nodes of panel `idx` as a slice range.
    pub fn panel_nodes(&self, idx: usize) -> std::ops::Range<usize> {
        let first = self.panels[idx].first;
        first..first + self.order
    }
}

/// Breakpoints of an edge split into `n` panels graded toward both ends:
/// positions (i/m)^q * 1/2 from each end, in edge parameter [0, 1].
fn graded_breakpoints(n: usize, q: f64) -> Vec<f64> {
    if n <= 1 {
        return vec![0.0, 1.0];
    }
    let m_left = n / 2;
    let m_right = n - m_left;
    let mut breaks = Vec::with_capacity(n + 1);
    for i in 0..=m_left {
        breaks.push(0.5 * (i as f64 / m_left as f64).powf(q));
    }
    for i in (0..m_right).rev() {
        breaks.push(1.0 - 0.5 * (i as f64 / m_right as f64).powf(q));
    }
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{square, regular_polygon, BoundaryKind};

    #[test]
    fn node_budget_roughly_respected() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        for target in [64usize, 128, 512] {
            let mesh = BoundaryMesh::build(&s, target, 3.0);
            let n = mesh.num_nodes();
            assert!(
                n >= target * 9 / 10 && n <= target * 11 / 10,
                "target {target}, got {n}"
            );
        }
    }

    #[test]
    fn weights_sum_to_perimeter() {
        let s = square(Point::ZERO, 2.0, BoundaryKind::SoundHard);
        let mesh = BoundaryMesh::build(&s, 256, 3.0);
        let total: f64 = mesh.weights.iter().sum();
        assert!((total - 8.0).abs() < 1e-12, "sum {total}");
    }

    #[test]
    fn sixtyfour_gon_with_64_nodes_is_one_node_per_edge() {
        let s = regular_polygon(Point::ZERO, 1.0, 64, 0.0, BoundaryKind::SoundHard);
        let mesh = BoundaryMesh::build(&s, 64, 3.0);
        assert_eq!(mesh.order, 1);
        assert_eq!(mesh.num_nodes(), 64);
    }

    #[test]
    fn grading_shrinks_corner_panels() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        let mesh = BoundaryMesh::build(&s, 512, 3.0);
        let lens: Vec<f64> = mesh.panels.iter().map(|p| p.len).collect();
        let min = lens.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = lens.iter().cloned().fold(0.0, f64::max);
        assert!(min < max / 50.0, "grading expected: min {min} max {max}");
    }

    #[test]
    fn graded_breakpoints_are_monotone() {
        for n in 1..12 {
            let b = graded_breakpoints(n, 3.0);
            assert_eq!(b.len(), n + 1);
            assert_eq!(b[0], 0.0);
            assert_eq!(*b.last().unwrap(), 1.0);
            for w in b.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }
}
