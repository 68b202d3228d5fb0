//! Quantitative exterior connectedness on a grid.
//!
//! For an erosion scale `t`, `delta_est(t)` is the largest corridor width `s`
//! (searched on a grid of pitch `t/64`) such that every grid cell at distance
//! >= `t` from the scatterer lies in a single connected component of the
//! `s`-eroded exterior inside the span disc. The spatial grid pitch is tied
//! to `t`; the estimate carries both pitches so downstream consumers see the
//! discretization error.

use super::{Scatterer2D, SceneError};
use crate::geom::Point;
use crate::par;

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ConnectednessSample {
    pub t: f64,
    pub delta_est: f64,
    /// Spatial grid pitch used for the flood fill.
    pub grid_pitch: f64,
    /// Resolution of the corridor-width search.
    pub s_pitch: f64,
}

/// Monotone profile of `delta_est` samples over increasing `t`.
#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct ConnectednessProfile {
    pub samples: Vec<ConnectednessSample>,
}

impl ConnectednessProfile {
    /// Collects samples at the given scales (sorted internally).
    pub fn collect(
        s: &Scatterer2D,
        scales: &[f64],
        span: f64,
    ) -> Result<ConnectednessProfile, SceneError> {
        let mut ts: Vec<f64> = scales.to_vec();
        ts.sort_by(|a, b| a.total_cmp(b));
        let samples = ts
            .into_iter()
            .map(|t| exterior_connectedness(s, t, span))
            .collect::<Result<_, _>>()?;
        Ok(ConnectednessProfile { samples })
    }
}

/// Number of spatial grid cells per erosion scale `t`.
const CELLS_PER_T: f64 = 8.0;
/// Corridor-width search resolution, as a fraction of `t`.
const S_STEPS: usize = 64;

pub fn exterior_connectedness(
    s: &Scatterer2D,
    t: f64,
    span: f64,
) -> Result<ConnectednessSample, SceneError> {
    if !(t > 0.0) {
        return Err(SceneError::Parameter(format!("t must be positive, got {t}")));
    }
    if t > span {
        return Err(SceneError::Parameter(format!(
            "erosion scale t = {t} exceeds the span radius {span}"
        )));
    }
    let pitch = t / CELLS_PER_T;
    let n = (2.0 * span / pitch).ceil() as usize + 1;
    // Signed distance to the scatterer at each cell center (positive outside).
    let origin = Point::new(-span, -span);
    let dist = par::map_collect(n * n, |idx| {
        let i = idx % n;
        let j = idx / n;
        let p = origin + Point::new(i as f64 * pitch, j as f64 * pitch);
        if p.norm() > span {
            f64::NEG_INFINITY // outside the span disc: never part of the fill
        } else {
            s.signed_distance(p)
        }
    });

    let must_connect: Vec<usize> = (0..n * n).filter(|&i| dist[i] >= t).collect();
    if must_connect.is_empty() {
        return Ok(ConnectednessSample { t, delta_est: t, grid_pitch: pitch, s_pitch: t / S_STEPS as f64 });
    }

    let connected_at = |s_level: f64| -> bool {
        // Flood from one mandatory cell through cells with dist >= s_level.
        let mut seen = vec![false; n * n];
        let start = must_connect[0];
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            let (i, j) = (idx % n, idx / n);
            let mut push = |ni: usize, nj: usize| {
                let nidx = nj * n + ni;
                if !seen[nidx] && dist[nidx] >= s_level {
                    seen[nidx] = true;
                    queue.push_back(nidx);
                }
            };
            if i > 0 {
                push(i - 1, j);
            }
            if i + 1 < n {
                push(i + 1, j);
            }
            if j > 0 {
                push(i, j - 1);
            }
            if j + 1 < n {
                push(i, j + 1);
            }
        }
        must_connect.iter().all(|&idx| seen[idx])
    };

    // Binary search the largest admissible s on the grid {0, t/64, ..., t}.
    let s_pitch = t / S_STEPS as f64;
    let (mut lo, mut hi) = (0usize, S_STEPS);
    if !connected_at(0.0) {
        return Ok(ConnectednessSample { t, delta_est: 0.0, grid_pitch: pitch, s_pitch });
    }
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if connected_at(mid as f64 * s_pitch) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(ConnectednessSample { t, delta_est: lo as f64 * s_pitch, grid_pitch: pitch, s_pitch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{square, BoundaryKind, Scatterer2D};

    #[test]
    fn convex_obstacle_never_pinches() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        for t in [0.25, 0.5, 1.0] {
            let sample = exterior_connectedness(&s, t, 4.0).unwrap();
            assert!(
                sample.delta_est >= t - 2.0 * sample.s_pitch,
                "t={t}: delta_est={}",
                sample.delta_est
            );
            assert!(sample.delta_est <= t + 1e-12);
        }
    }

    #[test]
    fn empty_scatterer_gives_t() {
        let s = Scatterer2D::empty(BoundaryKind::SoundHard);
        let sample = exterior_connectedness(&s, 0.5, 3.0).unwrap();
        assert_eq!(sample.delta_est, 0.5);
    }

    #[test]
    fn gap_between_squares_routes_around() {
        // Two unit squares with gap 0.2; for t > gap the mandatory cells
        // route around the pair, so delta stays well above gap/2.
        let a = square(Point::new(-0.6, 0.0), 1.0, BoundaryKind::SoundHard);
        let b = square(Point::new(0.6, 0.0), 1.0, BoundaryKind::SoundHard);
        let mut polys = a.polygons().to_vec();
        polys.extend_from_slice(b.polygons());
        let s = Scatterer2D::new(polys, BoundaryKind::SoundHard);
        let t = 0.5;
        let sample = exterior_connectedness(&s, t, 5.0).unwrap();
        assert!(
            sample.delta_est >= 0.1 - sample.grid_pitch,
            "delta_est = {}",
            sample.delta_est
        );
    }

    #[test]
    fn profile_is_monotone_in_t() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        let profile = ConnectednessProfile::collect(&s, &[0.2, 0.4, 0.8], 4.0).unwrap();
        for w in profile.samples.windows(2) {
            assert!(w[0].delta_est <= w[1].delta_est + 1e-12);
            assert!(w[0].delta_est <= w[0].t + 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = square(Point::ZERO, 1.0, BoundaryKind::SoundHard);
        assert!(exterior_connectedness(&s, 0.0, 4.0).is_err());
        assert!(exterior_connectedness(&s, 5.0, 4.0).is_err());
    }
}
