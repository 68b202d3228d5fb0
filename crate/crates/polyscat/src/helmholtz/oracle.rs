//! Independent oracles: the cylindrical-harmonics series for a sound-hard or
//! sound-soft disc, and a method-of-fundamental-solutions solver. Both
//! produce ordinary `WaveField`s and are used by tests and the acceptance
//! suite to cross-check the Nystrom path.

use super::mesh::BoundaryMesh;
use super::Field;
use super::{
    diagnostics_for, empty_field, FieldDiagnostics, FieldRepr, HelmholtzError, PlaneWave,
    ScatterConfig, WaveField,
};
use crate::geom::Point;
use crate::helmholtz::kernels::{far_coeff_single, green, green_grad_x};
use crate::scene::{regular_polygon, BoundaryKind, Scatterer2D};
use crate::special::{bessel_jn_all, bessel_yn_all, hankel1_all};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Scattering series for the disc of radius `a` centered at the origin.
///
/// In the frame where the incident direction is the positive x axis:
/// `u^s(r, theta) = c_0 H_0(kr) + 2 sum_n i^n c_n H_n(kr) cos(n theta)`
/// with `c_n = -J_n(ka)/H_n(ka)` (soft) or `-J_n'(ka)/H_n'(ka)` (hard).
pub(crate) struct DiscSeries {
    pub k: f64,
    pub a: f64,
    pub direction: Point,
    pub kind: BoundaryKind,
    pub coeffs: Vec<Complex64>,
}

/// Builds the disc-series oracle field. The polygon stored for domain checks
/// is a circumscribed 256-gon (it contains the disc, so checked evaluations
/// never enter the series' divergence region r < a).
pub fn disc_series(
    a: f64,
    cfg: &ScatterConfig,
    kind: BoundaryKind,
    j: usize,
) -> Result<WaveField, HelmholtzError> {
    cfg.validate()?;
    if !(a > 0.0) {
        return Err(HelmholtzError::Parameter(format!("disc radius must be positive, got {a}")));
    }
    let direction = cfg.direction(j)?;
    let k = cfg.k;
    let ka = k * a;

    // Truncate once coefficients drop below 1e-14 (they decay factorially
    // past n ~ ka).
    let n_probe = (ka as usize + 40).max(24);
    let jn = bessel_jn_all(n_probe + 1, ka);
    let yn = bessel_yn_all(n_probe + 1, ka);
    let hn: Vec<Complex64> = jn.iter().zip(&yn).map(|(j, y)| Complex64::new(*j, *y)).collect();
    let mut coeffs = Vec::new();
    for n in 0..=n_probe {
        let c = match kind {
            BoundaryKind::SoundSoft => -Complex64::new(jn[n], 0.0) / hn[n],
            BoundaryKind::SoundHard => {
                let jp = if n == 0 { -jn[1] } else { jn[n - 1] - (n as f64 / ka) * jn[n] };
                let hp = if n == 0 { -hn[1] } else { hn[n - 1] - hn[n] * (n as f64 / ka) };
                -Complex64::new(jp, 0.0) / hp
            }
        };
        coeffs.push(c);
        if n > ka as usize + 4 && c.norm() < 1e-14 {
            break;
        }
    }

    let stand_in = regular_polygon(
        Point::ZERO,
        a / (std::f64::consts::PI / 256.0).cos(),
        256,
        0.0,
        kind,
    );
    let series = DiscSeries { k, a, direction, kind, coeffs };
    let mut field = WaveField {
        k,
        direction,
        scatterer: stand_in,
        diagnostics: FieldDiagnostics {
            sup_total: 0.0,
            decay_constant: 0.0,
            bc_residual: 0.0,
            bc_scale: k,
            linear_residual: 0.0,
            nodes: 0,
        },
        repr: FieldRepr::DiscSeries(series),
    };
    field.diagnostics = diagnostics_for(&field, cfg.r, 0.0, k, 0);
    Ok(field)
}

impl DiscSeries {
    /// Hankel functions H_n(kr) for all series orders.
    fn hankel_at(&self, r: f64) -> Vec<Complex64> {
        hankel1_all(self.coeffs.len() - 1, self.k * r)
    }

    /// Rotates `p` into the frame where the incident direction is +x.
    fn frame(&self, p: Point) -> (f64, f64) {
        let rotated = p.rotated(-self.direction.angle());
        (rotated.norm(), rotated.angle())
    }

    pub fn scattered(&self, p: Point) -> Complex64 {
        let (r, theta) = self.frame(p);
        let hn = self.hankel_at(r);
        let mut acc = self.coeffs[0] * hn[0];
        let mut i_pow = Complex64::new(0.0, 1.0);
        for n in 1..self.coeffs.len() {
            acc += 2.0 * i_pow * self.coeffs[n] * hn[n] * (n as f64 * theta).cos();
            i_pow *= Complex64::new(0.0, 1.0);
        }
        acc
    }

    pub fn scattered_gradient(&self, p: Point) -> [Complex64; 2] {
        let (r, theta) = self.frame(p);
        let kr = self.k * r;
        let hn = self.hankel_at(r);
        // d/dr and (1/r) d/dtheta in the rotated polar frame.
        let mut dr = self.coeffs[0] * (-hn[1]) * self.k;
        let mut dt = ZERO;
        let mut i_pow = Complex64::new(0.0, 1.0);
        for n in 1..self.coeffs.len() {
            let hp = hn[n - 1] - hn[n] * (n as f64 / kr);
            let c2 = 2.0 * i_pow * self.coeffs[n];
            dr += c2 * hp * self.k * (n as f64 * theta).cos();
            dt += c2 * hn[n] * (-(n as f64) * (n as f64 * theta).sin()) / r;
            i_pow *= Complex64::new(0.0, 1.0);
        }
        // Unit vectors of the rotated frame expressed globally.
        let phi = p.angle();
        let rhat = Point::from_angle(phi);
        let that = rhat.perp();
        [dr * rhat.x + dt * that.x, dr * rhat.y + dt * that.y]
    }

    pub fn far_field_at(&self, xhat: Point) -> Complex64 {
        let theta = xhat.rotated(-self.direction.angle()).angle();
        let mut acc = self.coeffs[0];
        for n in 1..self.coeffs.len() {
            acc += 2.0 * self.coeffs[n] * (n as f64 * theta).cos();
        }
        let amp = (2.0 / (std::f64::consts::PI * self.k)).sqrt();
        acc * amp * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)
    }

    /// Boundary-condition residual on the true circle: the sample point is
    /// projected radially onto r = a.
    pub fn bc_residual_at(&self, x: Point, _nu: Point) -> f64 {
        let xhat = match x.normalized() {
            Some(v) => v,
            None => return 0.0,
        };
        let on_circle = xhat * self.a;
        match self.kind {
            BoundaryKind::SoundHard => {
                let gi = PlaneWave::new(self.k, self.direction).gradient(on_circle);
                let gs = self.scattered_gradient(on_circle);
                ((gi[0] + gs[0]) * xhat.x + (gi[1] + gs[1]) * xhat.y).norm()
            }
            BoundaryKind::SoundSoft => {
                (PlaneWave::new(self.k, self.direction).value(on_circle) + self.scattered(on_circle))
                    .norm()
            }
        }
    }
}

/// Method-of-fundamental-solutions field: outgoing monopoles at interior
/// charge points.
pub(crate) struct MfsField {
    pub k: f64,
    pub kind: BoundaryKind,
    pub charges: Vec<Point>,
    pub coeffs: Vec<Complex64>,
}

/// Solves by MFS: collocation at graded boundary nodes, charges on a
/// contracted copy of each polygon, truncated-SVD least squares. Fails with
/// an oracle error when the least-squares boundary residual indicates
/// ill-conditioning beyond use.
pub fn mfs_solve(
    s: &Scatterer2D,
    cfg: &ScatterConfig,
    j: usize,
) -> Result<WaveField, HelmholtzError> {
    cfg.validate()?;
    let direction = cfg.direction(j)?;
    if s.is_empty() {
        return Ok(empty_field(s, cfg.k, direction));
    }
    let k = cfg.k;
    let incident = PlaneWave::new(k, direction);
    let mesh = BoundaryMesh::build(s, cfg.quad_order, cfg.grading);

    // Charges: every other collocation node pulled toward its polygon
    // centroid.
    let gamma = 0.75;
    let mut charges = Vec::new();
    {
        let cells = s.cells();
        let centroids: Vec<Point> = s.polygons().iter().map(|p| p.centroid()).collect();
        for (q, node) in mesh.nodes.iter().enumerate().step_by(2) {
            let cell = mesh.panels[mesh.node_panel[q]].cell;
            let poly = cells[cell].polygon;
            charges.push(centroids[poly] + (*node - centroids[poly]) * gamma);
        }
    }
    let m = charges.len();
    let n = mesh.num_nodes();

    let hard = s.kind() == BoundaryKind::SoundHard;
    let mut a = DMatrix::<Complex64>::zeros(n, m);
    let mut b = DVector::<Complex64>::zeros(n);
    for i in 0..n {
        let x = mesh.nodes[i];
        let w = mesh.weights[i].sqrt();
        for (c, &q) in charges.iter().enumerate() {
            let v = if hard {
                let g = green_grad_x(k, x, q);
                g[0] * mesh.normals[i].x + g[1] * mesh.normals[i].y
            } else {
                green(k, x, q)
            };
            a[(i, c)] = v * w;
        }
        b[i] = if hard {
            let gi = incident.gradient(x);
            -(gi[0] * mesh.normals[i].x + gi[1] * mesh.normals[i].y) * w
        } else {
            -incident.value(x) * w
        };
    }

    let svd = a.clone().svd(true, true);
    let coeffs = svd
        .solve(&b, 1e-12)
        .map_err(|e| HelmholtzError::Oracle(format!("MFS SVD solve failed: {e}")))?;
    let resid_vec = &a * &coeffs - &b;
    let resid = resid_vec.iter().map(|z| z.norm()).fold(0.0, f64::max)
        / b.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    if resid > 0.05 {
        return Err(HelmholtzError::Oracle(format!(
            "MFS boundary residual {resid:.3e} too large (ill-conditioned charge layout)"
        )));
    }

    let mfs = MfsField { k, kind: s.kind(), charges, coeffs: coeffs.iter().cloned().collect() };
    let mut field = WaveField {
        k,
        direction,
        scatterer: s.clone(),
        diagnostics: FieldDiagnostics {
            sup_total: 0.0,
            decay_constant: 0.0,
            bc_residual: 0.0,
            bc_scale: k,
            linear_residual: resid,
            nodes: m,
        },
        repr: FieldRepr::Mfs(mfs),
    };
    field.diagnostics = diagnostics_for(&field, cfg.r, resid, k, m);
    Ok(field)
}

impl MfsField {
    pub fn scattered(&self, x: Point) -> Complex64 {
        self.charges
            .iter()
            .zip(&self.coeffs)
            .map(|(&q, c)| green(self.k, x, q) * c)
            .sum()
    }

    pub fn scattered_gradient(&self, x: Point) -> [Complex64; 2] {
        let mut gx = ZERO;
        let mut gy = ZERO;
        for (&q, c) in self.charges.iter().zip(&self.coeffs) {
            let g = green_grad_x(self.k, x, q);
            gx += g[0] * c;
            gy += g[1] * c;
        }
        [gx, gy]
    }

    pub fn far_field_at(&self, xhat: Point) -> Complex64 {
        let cs = far_coeff_single(self.k);
        self.charges
            .iter()
            .zip(&self.coeffs)
            .map(|(&q, c)| cs * Complex64::from_polar(1.0, -self.k * xhat.dot(q)) * c)
            .sum()
    }

    pub fn bc_residual_at(&self, x: Point, nu: Point, incident: PlaneWave) -> f64 {
        // Charges are interior, so the field is smooth up to the boundary and
        // plain evaluation at boundary points is exact.
        match self.kind {
            BoundaryKind::SoundHard => {
                let gi = incident.gradient(x);
                let gs = self.scattered_gradient(x);
                ((gi[0] + gs[0]) * nu.x + (gi[1] + gs[1]) * nu.y).norm()
            }
            BoundaryKind::SoundSoft => (incident.value(x) + self.scattered(x)).norm(),
        }
    }
}
