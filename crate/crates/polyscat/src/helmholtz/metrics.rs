//! Error metrics between two solved fields and the optical-theorem
//! self-check.

use super::{FarFieldPattern, Field, HelmholtzError, ScatterConfig, WaveField};
use crate::geom::Point;
use num_complex::Complex64;

/// Sampled sup-norm discrepancy with the grid pitch that produced it.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SampledSup {
    pub value: f64,
    pub pitch: f64,
    pub samples: usize,
}

fn ball_grid(center: Point, radius: f64, n_side: usize) -> Vec<Point> {
    let mut pts = Vec::new();
    for i in 0..n_side {
        for j in 0..n_side {
            let p = Point::new(
                center.x - radius + 2.0 * radius * (i as f64 + 0.5) / n_side as f64,
                center.y - radius + 2.0 * radius * (j as f64 + 0.5) / n_side as f64,
            );
            if p.dist(center) <= radius {
                pts.push(p);
            }
        }
    }
    pts
}

/// Near-field error with limited aperture: sup over a deterministic grid
/// (>= 32 x 32 cells) of `|u - u'|` on the ball `B_radius(center)`.
pub fn near_field_error(
    u: &WaveField,
    u2: &WaveField,
    center: Point,
    radius: f64,
) -> Result<SampledSup, HelmholtzError> {
    if !(radius > 0.0) {
        return Err(HelmholtzError::Parameter(format!("radius must be positive, got {radius}")));
    }
    for f in [u, u2] {
        if f.scatterer.signed_distance(center) <= radius {
            return Err(HelmholtzError::Domain(format!(
                "probe ball B_{radius}(({:.3},{:.3})) intersects a scatterer",
                center.x, center.y
            )));
        }
    }
    let n_side = 32;
    let pts = ball_grid(center, radius, n_side);
    let value = crate::par::max_over(pts.len(), |i| {
        let p = pts[i];
        (u.incident().value(p) + u.scattered(p) - u2.incident().value(p) - u2.scattered(p)).norm()
    });
    Ok(SampledSup { value, pitch: 2.0 * radius / n_side as f64, samples: pts.len() })
}

/// Near-field error on the full annulus
/// `B_{|x0|+rho} \ B_{|x0|-rho}`. The probe-ball grid points are included
/// in the sample set, so the annulus error always dominates the ball error.
pub fn annulus_error(
    u: &WaveField,
    u2: &WaveField,
    cfg: &ScatterConfig,
) -> Result<SampledSup, HelmholtzError> {
    let x0 = cfg.x0_point();
    let rho = cfg.rho_tilde;
    let r_in = x0.norm() - rho;
    let r_out = x0.norm() + rho;
    for f in [u, u2] {
        if f.scatterer.bounding_radius() >= r_in {
            return Err(HelmholtzError::Domain(format!(
                "annulus [{r_in}, {r_out}] intersects a scatterer"
            )));
        }
    }
    let mut pts = ball_grid(x0, rho, 32);
    let n_theta = 256;
    let n_r = 8;
    for ir in 0..n_r {
        let r = r_in + (r_out - r_in) * (ir as f64 + 0.5) / n_r as f64;
        for it in 0..n_theta {
            pts.push(Point::from_angle(2.0 * std::f64::consts::PI * it as f64 / n_theta as f64) * r);
        }
    }
    let value = crate::par::max_over(pts.len(), |i| {
        let p = pts[i];
        (u.incident().value(p) + u.scattered(p) - u2.incident().value(p) - u2.scattered(p)).norm()
    });
    let pitch = (2.0 * std::f64::consts::PI * r_out / n_theta as f64).max((r_out - r_in) / n_r as f64);
    Ok(SampledSup { value, pitch, samples: pts.len() })
}

/// L2(S^1) distance between two far-field patterns on the same grid.
pub fn far_field_error(f: &FarFieldPattern, g: &FarFieldPattern) -> Result<f64, HelmholtzError> {
    if f.len() != g.len() {
        return Err(HelmholtzError::Parameter(format!(
            "far-field grids differ: {} vs {}",
            f.len(),
            g.len()
        )));
    }
    let dt = 2.0 * std::f64::consts::PI / f.len() as f64;
    Ok((f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        * dt)
        .sqrt())
}

#[derive(Debug, Clone, Copy)]
pub struct OpticalDefect {
    /// Relative defect of the lossless-scatterer identity.
    pub defect: f64,
    /// True when the far field vanishes (nothing to check).
    pub degenerate: bool,
}

/// Optical-theorem defect under this crate's far-field normalization:
/// for a lossless boundary condition,
/// `int |u_inf|^2 dtheta = sqrt(8 pi / k) Im(e^{-i pi/4} u_inf(v))`.
/// Both supported boundary conditions are lossless, so the relative defect
/// measures solver (or quadrature) error.
pub fn optical_theorem_defect(u: &WaveField) -> OpticalDefect {
    let n = 1024;
    let dt = 2.0 * std::f64::consts::PI / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let xhat = Point::from_angle(dt * i as f64);
        total += u.far_field_at(xhat).norm_sqr() * dt;
    }
    if total < 1e-280 {
        return OpticalDefect { defect: 0.0, degenerate: true };
    }
    let forward = u.far_field_at(u.direction);
    let c_k = (8.0 * std::f64::consts::PI / u.k).sqrt();
    let gamma = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let rhs = c_k * (gamma * forward).im;
    OpticalDefect { defect: (total - rhs).abs() / total, degenerate: false }
}
