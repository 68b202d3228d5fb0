//! Deterministic scatterer perturbations used by the stability sweeps.
//!
//! Three families, each preserving class membership with relaxed constants:
//! vertex jitter (generic boundary motion), notch (carves a rectangular
//! recess, creating hidden boundary that stresses d against dhat), and bump
//! (an outward rectangular protrusion, breaking convexity).

use super::{distance_triple, ClassParams, Polygon, Scatterer2D, SceneError};
use crate::geom::Point;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbMode {
    VertexJitter,
    Notch,
    Bump,
}

impl std::fmt::Display for PerturbMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PerturbMode::VertexJitter => write!(f, "vertex-jitter"),
            PerturbMode::Notch => write!(f, "notch"),
            PerturbMode::Bump => write!(f, "bump"),
        }
    }
}

const MAX_ATTEMPTS: usize = 100;

/// Perturbs a scatterer by `magnitude` with the given mode and seed.
///
/// Deterministic for a fixed seed. The output passes the class check with
/// relaxed constants (`h/2` for jitter, `min(h, magnitude)/2` for notch and
/// bump since those introduce magnitude-sized cells, `2L`, `R + magnitude`)
/// and its boundary Hausdorff distance from the input lies in
/// `[magnitude/4, 4 magnitude]`. Retries internally; failing to produce a
/// valid scatterer within 100 attempts is an error.
pub fn perturb(
    s: &Scatterer2D,
    class: &ClassParams,
    magnitude: f64,
    mode: PerturbMode,
    seed: u64,
) -> Result<Scatterer2D, SceneError> {
    if magnitude == 0.0 {
        return Ok(s.clone());
    }
    if !(magnitude > 0.0) {
        return Err(SceneError::Parameter(format!("magnitude must be >= 0, got {magnitude}")));
    }
    if mode == PerturbMode::VertexJitter && magnitude >= class.h / 4.0 {
        return Err(SceneError::Parameter(format!(
            "vertex jitter magnitude {magnitude} must stay below h/4 = {}",
            class.h / 4.0
        )));
    }
    if s.is_empty() {
        return Err(SceneError::EmptyScatterer);
    }

    let relaxed_h = match mode {
        PerturbMode::VertexJitter => class.h / 2.0,
        PerturbMode::Notch | PerturbMode::Bump => class.h.min(magnitude) / 2.0,
    };
    let relaxed = ClassParams { h: relaxed_h, l: 2.0 * class.l, r: class.r + magnitude };

    let mut last_reason = String::from("no attempt made");
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let candidate = match mode {
            PerturbMode::VertexJitter => jitter(s, magnitude, &mut rng),
            PerturbMode::Notch => carve(s, magnitude, true, &mut rng),
            PerturbMode::Bump => carve(s, magnitude, false, &mut rng),
        };
        let candidate = match candidate {
            Ok(c) => c,
            Err(e) => {
                last_reason = e.to_string();
                continue;
            }
        };
        let report = candidate.validate(&relaxed);
        if !report.pass {
            last_reason = format!("class check failed: {:?}", report.violations[0]);
            continue;
        }
        let triple = distance_triple(s, &candidate, magnitude / 8.0)?;
        if triple.dhat < magnitude / 4.0 || triple.dhat > 4.0 * magnitude {
            last_reason = format!("dhat {} outside [m/4, 4m]", triple.dhat);
            continue;
        }
        return Ok(candidate);
    }
    Err(SceneError::PerturbationFailed { attempts: MAX_ATTEMPTS, reason: last_reason })
}

/// Moves every vertex by a displacement with norm in [m/2, m]; the lower
/// bound keeps the boundary Hausdorff distance from collapsing below m/4.
fn jitter(s: &Scatterer2D, m: f64, rng: &mut ChaCha8Rng) -> Result<Scatterer2D, SceneError> {
    let polygons = s
        .polygons()
        .iter()
        .map(|poly| {
            let verts = poly
                .vertices()
                .iter()
                .map(|&v| {
                    let r = rng.gen_range(0.5 * m..=m);
                    let th = rng.gen_range(0.0..std::f64::consts::TAU);
                    v + Point::from_angle(th) * r
                })
                .collect();
            Polygon::new(verts)
        })
        .collect::<Result<_, _>>()?;
    Ok(Scatterer2D::new(polygons, s.kind()))
}

/// Carves a rectangular notch (inward = true) or attaches a bump (inward =
/// false) of depth `m` and width `2m` into a randomly chosen long-enough edge.
fn carve(s: &Scatterer2D, m: f64, inward: bool, rng: &mut ChaCha8Rng) -> Result<Scatterer2D, SceneError> {
    let width = 2.0 * m;
    let margin = m.max(width * 0.5);
    let candidates: Vec<(usize, usize, f64)> = s
        .polygons()
        .iter()
        .enumerate()
        .flat_map(|(pi, poly)| {
            poly.edges()
                .enumerate()
                .map(move |(ei, e)| (pi, ei, e.length()))
        })
        .filter(|&(_, _, len)| len >= width + 2.0 * margin)
        .collect();
    if candidates.is_empty() {
        return Err(SceneError::Parameter("no edge long enough to carve".into()));
    }
    let (pi, ei, len) = candidates[rng.gen_range(0..candidates.len())];

    let poly = &s.polygons()[pi];
    let seg = poly.edge(ei);
    let tangent = seg.tangent().expect("non-degenerate edge");
    let normal = Point::new(tangent.y, -tangent.x); // outward
    let offset = if inward { -m } else { m };
    let start = rng.gen_range(margin..=(len - width - margin));
    let p1 = seg.a + tangent * start;
    let p2 = p1 + tangent * width;
    let q1 = p1 + normal * offset;
    let q2 = p2 + normal * offset;

    let mut verts: Vec<Point> = Vec::with_capacity(poly.len() + 4);
    for (vi, &v) in poly.vertices().iter().enumerate() {
        verts.push(v);
        if vi == ei {
            verts.extend_from_slice(&[p1, q1, q2, p2]);
        }
    }
    let mut polygons = s.polygons().to_vec();
    polygons[pi] = Polygon::new(verts)?;
    Ok(Scatterer2D::new(polygons, s.kind()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{square, BoundaryKind};

    fn sq() -> (Scatterer2D, ClassParams) {
        (
            square(Point::ZERO, 1.0, BoundaryKind::SoundHard),
            ClassParams { h: 1.0, l: 2.0, r: 2.0 },
        )
    }

    #[test]
    fn zero_magnitude_is_identity() {
        let (s, class) = sq();
        let p = perturb(&s, &class, 0.0, PerturbMode::VertexJitter, 3).unwrap();
        assert_eq!(p, s);
    }

    #[test]
    fn jitter_dhat_in_expected_band() {
        let (s, class) = sq();
        let m = 0.01;
        let p = perturb(&s, &class, m, PerturbMode::VertexJitter, 7).unwrap();
        let t = distance_triple(&s, &p, m / 8.0).unwrap();
        assert!(t.dhat >= m / 4.0 && t.dhat <= 4.0 * m, "dhat = {}", t.dhat);
        // Determinism.
        let p2 = perturb(&s, &class, m, PerturbMode::VertexJitter, 7).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn notch_adds_vertices() {
        let (s, class) = sq();
        let p = perturb(&s, &class, 0.1, PerturbMode::Notch, 1).unwrap();
        assert!(p.total_vertices() >= s.total_vertices() + 2);
        // The notch is carved inward: the perturbed solid is a subset.
        assert!(p.polygons()[0].area() < s.polygons()[0].area());
    }

    #[test]
    fn bump_grows_area() {
        let (s, class) = sq();
        let p = perturb(&s, &class, 0.1, PerturbMode::Bump, 5).unwrap();
        assert!(p.polygons()[0].area() > s.polygons()[0].area());
    }

    #[test]
    fn oversized_jitter_rejected() {
        let (s, class) = sq();
        assert!(perturb(&s, &class, 0.3, PerturbMode::VertexJitter, 1).is_err());
    }
}
