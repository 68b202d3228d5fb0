//! Mirror-symmetry detection and the direction-independence constant.

use super::{hausdorff_sets, Scatterer2D};
use crate::geom::{HyperplaneLine, Point};

/// Lines with normal orthogonal to `v` across which the scatterer maps to
/// itself within Hausdorff distance `tol`.
///
/// With the normal pinned to `v.perp()`, only the offset varies; candidate
/// offsets come from midpoints of vertex pairs and of edge-midpoint pairs,
/// which is a complete candidate set for polygon mirror symmetries.
pub fn symmetry_lines(s: &Scatterer2D, v: Point, tol: f64) -> Vec<HyperplaneLine> {
    let normal = match v.perp().normalized() {
        Some(n) => n,
        None => return Vec::new(),
    };
    let mut feature_offsets: Vec<f64> = Vec::new();
    for poly in s.polygons() {
        for &p in poly.vertices() {
            feature_offsets.push(normal.dot(p));
        }
        for e in poly.edges() {
            feature_offsets.push(normal.dot(e.midpoint()));
        }
    }
    if feature_offsets.is_empty() {
        return Vec::new();
    }
    let mut candidates: Vec<f64> = Vec::new();
    for i in 0..feature_offsets.len() {
        for j in i..feature_offsets.len() {
            candidates.push(0.5 * (feature_offsets[i] + feature_offsets[j]));
        }
    }
    candidates.sort_by(|a, b| a.total_cmp(b));
    let dedup_tol = (tol * 0.25).max(1e-12);
    candidates.dedup_by(|a, b| (*a - *b).abs() <= dedup_tol);

    let mut lines = Vec::new();
    for c in candidates {
        let line = HyperplaneLine { point: normal * c, normal };
        let mirrored = s.reflected(&line);
        if hausdorff_sets(s, &mirrored) <= tol {
            lines.push(line);
        }
    }
    lines
}

/// Direction-independence constant for a set of unit directions:
/// `a0 = min over unit nu of max_j |v_j . nu|`.
#[derive(Debug, Clone, Copy)]
pub struct DirectionIndependence {
    pub a0: f64,
    /// False when the directions fail to span the plane (a0 = 0); the
    /// annihilating normal is then reported.
    pub spans: bool,
    pub worst_normal: Point,
}

/// Computes `a0` analytically. Fold each direction to an angle mod pi; the
/// worst normal sits at the center of the largest empty arc among the
/// perpendiculars, giving `a0 = sin((pi - gap)/2)`.
pub fn direction_independence(dirs: &[Point]) -> DirectionIndependence {
    assert!(!dirs.is_empty(), "need at least one direction");
    let pi = std::f64::consts::PI;
    // Angles of the annihilating normals (perpendiculars), mod pi.
    let mut zs: Vec<f64> = dirs
        .iter()
        .map(|d| {
            let a = d.angle() + 0.5 * pi;
            a.rem_euclid(pi)
        })
        .collect();
    zs.sort_by(|a, b| a.total_cmp(b));
    let mut max_gap = zs[0] + pi - zs[zs.len() - 1];
    let mut gap_at = zs[zs.len() - 1] + 0.5 * max_gap;
    for w in zs.windows(2) {
        let g = w[1] - w[0];
        if g > max_gap {
            max_gap = g;
            gap_at = w[0] + 0.5 * g;
        }
    }
    let a0 = (0.5 * (pi - max_gap)).max(0.0).sin();
    let spans = a0 > 1e-12;
    DirectionIndependence {
        a0: if spans { a0 } else { 0.0 },
        spans,
        worst_normal: Point::from_angle(gap_at),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{square, BoundaryKind, Scatterer2D};

    #[test]
    fn centered_square_has_horizontal_mirror() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        let lines = symmetry_lines(&s, Point::new(1.0, 0.0), 1e-9);
        assert_eq!(lines.len(), 1);
        let line = lines[0];
        assert!(line.normal.dot(Point::new(1.0, 0.0)).abs() < 1e-12);
        assert!(line.offset().abs() < 1e-12, "expected y = 0");
    }

    #[test]
    fn clipped_corner_breaks_symmetry() {
        let s = Scatterer2D::from_vertex_loops(
            &[vec![(-0.5, -0.5), (0.5, -0.5), (0.5, 0.3), (0.3, 0.5), (-0.5, 0.5)]],
            BoundaryKind::SoundHard,
        )
        .unwrap();
        assert!(symmetry_lines(&s, Point::new(1.0, 0.0), 1e-9).is_empty());
    }

    #[test]
    fn mirror_pair_of_squares_detected() {
        let a = square(Point::new(0.0, 1.0), 0.8, BoundaryKind::SoundHard);
        let b = square(Point::new(0.0, -1.0), 0.8, BoundaryKind::SoundHard);
        let mut polys = a.polygons().to_vec();
        polys.extend_from_slice(b.polygons());
        let s = Scatterer2D::new(polys, BoundaryKind::SoundHard);
        let lines = symmetry_lines(&s, Point::new(1.0, 0.0), 1e-9);
        assert!(lines.iter().any(|l| l.offset().abs() < 1e-12));
    }

    #[test]
    fn orthogonal_pair_gives_inv_sqrt2() {
        let di = direction_independence(&[Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
        assert!((di.a0 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(di.spans);
    }

    #[test]
    fn single_direction_does_not_span() {
        let di = direction_independence(&[Point::new(1.0, 0.0)]);
        assert_eq!(di.a0, 0.0);
        assert!(!di.spans);
        assert!(di.worst_normal.dot(Point::new(1.0, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn sixty_degrees_matches_brute_force() {
        let th = 60f64.to_radians();
        let dirs = [Point::new(1.0, 0.0), Point::new(th.cos(), th.sin())];
        let di = direction_independence(&dirs);
        assert!((di.a0 - 0.5).abs() < 1e-14, "analytic a0 = {}", di.a0);
        // Brute-force oracle over a million normals.
        let mut brute = f64::INFINITY;
        let n = 1_000_000;
        for i in 0..n {
            let nu = Point::from_angle(std::f64::consts::PI * i as f64 / n as f64);
            let m = dirs.iter().map(|d| d.dot(nu).abs()).fold(0.0, f64::max);
            brute = brute.min(m);
        }
        assert!((di.a0 - brute).abs() < 1e-5, "brute = {brute}");
    }
}
