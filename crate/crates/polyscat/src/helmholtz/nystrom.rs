//! Nystrom discretization of the boundary integral equations.
//!
//! Unknowns are density values at the panel Gauss nodes. Far panel-target
//! interactions use the plain Nystrom rule; near ones replace the panel's
//! contribution by product integration against the panel's Lagrange basis
//! (dyadic refinement toward the closest point, which absorbs the log
//! singularities). On straight panels the double-layer kernels vanish
//! identically, so the only genuinely singular self-interactions are the
//! single-layer type operators and the Cauchy-type tangential kernel of the
//! regularized hypersingular operator, whose principal value on the panel
//! containing the target has the closed form
//! `-(i/4) (H0(k d_b) - H0(k d_a))`.
//!
//! Sound-soft: combined field `(I/2 + K - i eta S) phi = -u^i`, `eta = k`,
//! which is injective for every wavenumber. The scattered field is
//! `D[phi] - i eta S[phi]`.
//!
//! Sound-hard: direct Burton-Miller on the total boundary trace `phi = u`:
//! `(I/2 - K) phi + alpha T phi = u^i - alpha du^i/dnu`, `alpha = i/k`,
//! with `T` realized through the tangential (Maue) regularization
//! `T phi = d/ds_x S[phi'] + k^2 S_{nu.nu}[phi]`. The scattered field is
//! `D[phi]`.

use super::kernels::{
    double_layer, double_layer_grad_x, far_coeff_double, far_coeff_single, green, green_grad_x,
    single_layer_tangential,
};
use super::mesh::{BoundaryMesh, Panel};
use super::{
    diagnostics_for, empty_field, Field, FieldRepr, HelmholtzError, PlaneWave, ScatterConfig,
    WaveField,
};
use crate::geom::Point;
use crate::par;
use crate::quad::lagrange_basis_at;
use crate::scene::{BoundaryKind, Scatterer2D};
use crate::special::hankel1_0;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Panels closer than this many panel lengths get product integration.
const NEAR_FACTOR: f64 = 2.0;

/// Dyadic refinement depth for product integration.
const MAX_DEPTH: usize = 48;

pub(crate) struct NystromField {
    pub mesh: BoundaryMesh,
    pub kind: BoundaryKind,
    pub k: f64,
    /// Combined-field coupling (sound-soft) or Burton-Miller coupling weight
    /// magnitude (sound-hard uses alpha = i/k internally).
    pub eta: f64,
    /// Density values at the nodes. Sound-hard: the total boundary trace u.
    pub density: Vec<Complex64>,
    /// Tangential derivative of the density (sound-hard only).
    pub density_deriv: Vec<Complex64>,
}

/// Integrates `coeff * kernel(y(t)) * basis_j(t)` over a panel with dyadic
/// refinement toward `t_near`, accumulating into `out[j]`. When
/// `subtract_at` is set, `basis_j(t) - basis_j(t_sub)` is used instead (the
/// principal-value regularization).
fn panel_product(
    mesh: &BoundaryMesh,
    panel: &Panel,
    t_near: f64,
    subtract_at: Option<f64>,
    kernel: &dyn Fn(Point) -> Complex64,
    coeff: Complex64,
    out: &mut [Complex64],
) {
    let p = mesh.order;
    let jac = 0.5 * panel.len;
    let gauss = crate::quad::cached_gauss8();
    let mut base_at_sub = vec![0.0; p];
    if let Some(ts) = subtract_at {
        lagrange_basis_at(&mesh.rule.nodes, &mesh.bary, ts, &mut base_at_sub);
    }
    let mut basis = vec![0.0; p];
    let mut acc = vec![ZERO; p];
    let mut total_mag = 0.0_f64;
    let ts = t_near.clamp(-1.0, 1.0);
    for dir in [-1.0 - ts, 1.0 - ts] {
        if dir.abs() < 1e-15 {
            continue;
        }
        let mut outer = 1.0_f64;
        for _ in 0..MAX_DEPTH {
            let inner = 0.5 * outer;
            let u0 = ts + dir * inner;
            let u1 = ts + dir * outer;
            let half = 0.5 * (u1 - u0);
            let mid = 0.5 * (u1 + u0);
            let mut piece_mag = 0.0_f64;
            for (xq, wq) in gauss.nodes.iter().zip(&gauss.weights) {
                let t = mid + half * xq;
                let kv = kernel(panel.point_at(t)) * (jac * wq * half * dir.signum());
                lagrange_basis_at(&mesh.rule.nodes, &mesh.bary, t, &mut basis);
                for j in 0..p {
                    let b = if subtract_at.is_some() { basis[j] - base_at_sub[j] } else { basis[j] };
                    acc[j] += kv * b;
                }
                piece_mag = piece_mag.max(kv.norm());
            }
            total_mag = total_mag.max(piece_mag);
            if piece_mag < 1e-15 * total_mag.max(1e-300) && inner < 1e-4 {
                break;
            }
            outer = inner;
        }
    }
    for j in 0..p {
        out[j] += coeff * acc[j];
    }
}

/// Accumulates one smooth/weakly-singular operator row: plain rule on far
/// panels, product integration on near ones. `skip_cell` suppresses panels
/// of a cell on which the kernel vanishes identically (double layers on the
/// target's own edge).
fn operator_row(
    mesh: &BoundaryMesh,
    x: Point,
    skip_cell: Option<usize>,
    kernel: &dyn Fn(Point, Point, Point) -> Complex64,
    coeff: Complex64,
    row: &mut [Complex64],
) {
    for (pi, panel) in mesh.panels.iter().enumerate() {
        if skip_cell == Some(panel.cell) {
            continue;
        }
        let d = panel.distance_to(x);
        let rng = mesh.panel_nodes(pi);
        if d > NEAR_FACTOR * panel.len {
            for q in rng {
                row[q] += coeff
                    * kernel(mesh.nodes[q], mesh.normals[q], mesh.tangents[q])
                    * mesh.weights[q];
            }
        } else {
            let t_near = panel.project(x);
            let nu = panel.normal;
            let tau = panel.tangent;
            panel_product(
                mesh,
                panel,
                t_near,
                None,
                &|y| kernel(y, nu, tau),
                coeff,
                &mut row[rng],
            );
        }
    }
}

/// Principal value of the tangential single-layer kernel over the panel
/// holding the target: -(i/4) (H0(k d_b) - H0(k d_a)).
fn tangential_pv(k: f64, panel: &Panel, x: Point) -> Complex64 {
    let da = x.dist(panel.seg.a).max(1e-14 * panel.len);
    let db = x.dist(panel.seg.b).max(1e-14 * panel.len);
    -I * 0.25 * (hankel1_0(k * db) - hankel1_0(k * da))
}

/// Accumulates the row of the tangential derivative of the single layer
/// evaluated at a boundary target `x` with tangent `tau_x`, acting on a
/// node-valued density. `on_panel` names the panel containing `x` (its
/// contribution is the principal value).
fn tangential_row(
    mesh: &BoundaryMesh,
    k: f64,
    x: Point,
    tau_x: Point,
    on_panel: Option<usize>,
    coeff: Complex64,
    row: &mut [Complex64],
) {
    let p = mesh.order;
    for (pi, panel) in mesh.panels.iter().enumerate() {
        let rng = mesh.panel_nodes(pi);
        if Some(pi) == on_panel {
            // Regularized part: kernel times (basis - basis(t_x)).
            let t_x = panel.project(x).clamp(-1.0 + 1e-9, 1.0 - 1e-9);
            panel_product(
                mesh,
                panel,
                t_x,
                Some(t_x),
                &|y| single_layer_tangential(k, x, y, tau_x),
                coeff,
                &mut row[rng.clone()],
            );
            // Principal value times the basis at t_x.
            let pv = tangential_pv(k, panel, x);
            let mut basis = vec![0.0; p];
            lagrange_basis_at(&mesh.rule.nodes, &mesh.bary, t_x, &mut basis);
            for (j, q) in rng.enumerate() {
                row[q] += coeff * pv * basis[j];
            }
        } else {
            let d = panel.distance_to(x);
            if d > NEAR_FACTOR * panel.len {
                for q in rng {
                    row[q] += coeff
                        * single_layer_tangential(k, x, mesh.nodes[q], tau_x)
                        * mesh.weights[q];
                }
            } else {
                let t_near = panel.project(x);
                panel_product(
                    mesh,
                    panel,
                    t_near,
                    None,
                    &|y| single_layer_tangential(k, x, y, tau_x),
                    coeff,
                    &mut row[rng],
                );
            }
        }
    }
}

/// Converts a row acting on the tangential derivative of the density into a
/// row acting on the density itself, using the per-panel spectral
/// differentiation matrix (d/ds = (2/len) d/dt).
fn fold_derivative(mesh: &BoundaryMesh, row_on_deriv: &[Complex64], row_out: &mut [Complex64]) {
    let p = mesh.order;
    for (pi, panel) in mesh.panels.iter().enumerate() {
        let first = panel.first;
        let scale = 2.0 / panel.len;
        for j in 0..p {
            let v = row_on_deriv[first + j];
            if v == ZERO {
                continue;
            }
            for m in 0..p {
                row_out[first + m] += v * (mesh.diff[j][m] * scale);
            }
        }
    }
}

/// Row of the full sound-hard Burton-Miller operator at boundary target
/// `x` (excluding the identity term), i.e. -K + alpha (d/ds S d/ds + k^2
/// S_{nu nu}).
fn hard_row(
    mesh: &BoundaryMesh,
    k: f64,
    alpha: Complex64,
    x: Point,
    nu_x: Point,
    tau_x: Point,
    cell: usize,
    on_panel: Option<usize>,
    row: &mut [Complex64],
) {
    let n = mesh.num_nodes();
    // -K phi.
    operator_row(
        mesh,
        x,
        Some(cell),
        &|y, nu_y, _| double_layer(k, x, y, nu_y),
        -Complex64::new(1.0, 0.0),
        row,
    );
    // alpha k^2 S_{nu nu} phi.
    operator_row(
        mesh,
        x,
        None,
        &|y, nu_y, _| green(k, x, y) * nu_x.dot(nu_y),
        alpha * (k * k),
        row,
    );
    // alpha d/ds_x S[phi'].
    let mut vt = vec![ZERO; n];
    tangential_row(mesh, k, x, tau_x, on_panel, alpha, &mut vt);
    fold_derivative(mesh, &vt, row);
}

/// Row of the sound-soft combined-field operator at boundary target `x`
/// (excluding the identity term): K - i eta S.
fn soft_row(mesh: &BoundaryMesh, k: f64, eta: f64, x: Point, cell: usize, row: &mut [Complex64]) {
    operator_row(
        mesh,
        x,
        Some(cell),
        &|y, nu_y, _| double_layer(k, x, y, nu_y),
        Complex64::new(1.0, 0.0),
        row,
    );
    operator_row(mesh, x, None, &|y, _, _| green(k, x, y), -I * eta, row);
}

/// Solves the exterior scattering problem for incident direction `j`.
pub fn solve(
    s: &Scatterer2D,
    cfg: &ScatterConfig,
    j: usize,
) -> Result<WaveField, HelmholtzError> {
    cfg.validate()?;
    let direction = cfg.direction(j)?;
    if s.is_empty() {
        return Ok(empty_field(s, cfg.k, direction));
    }
    if cfg.quad_order < 64 {
        return Err(HelmholtzError::Parameter(format!(
            "quadrature order {} below the minimum of 64 per polygon",
            cfg.quad_order
        )));
    }
    let permissive = crate::scene::ClassParams { h: 0.0, l: f64::INFINITY, r: f64::INFINITY };
    let report = s.validate(&permissive);
    if !report.pass {
        return Err(HelmholtzError::Validation(format!("{:?}", report.violations[0])));
    }

    let k = cfg.k;
    let mesh = BoundaryMesh::build(s, cfg.quad_order, cfg.grading);
    let n = mesh.num_nodes();
    let incident = PlaneWave::new(k, direction);
    let kind = s.kind();
    let eta = k;
    let alpha = I / k;

    // Row-parallel assembly.
    let mut rows: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    par::for_each_mut(&mut rows, |i, row| {
        let mut r = vec![ZERO; n];
        let x = mesh.nodes[i];
        let panel_idx = mesh.node_panel[i];
        let cell = mesh.panels[panel_idx].cell;
        match kind {
            BoundaryKind::SoundHard => hard_row(
                &mesh,
                k,
                alpha,
                x,
                mesh.normals[i],
                mesh.tangents[i],
                cell,
                Some(panel_idx),
                &mut r,
            ),
            BoundaryKind::SoundSoft => soft_row(&mesh, k, eta, x, cell, &mut r),
        }
        r[i] += Complex64::new(0.5, 0.0);
        *row = r;
    });

    let a = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    let b = DVector::from_fn(n, |i, _| {
        let ui = incident.value(mesh.nodes[i]);
        match kind {
            BoundaryKind::SoundHard => {
                let dui = I * k * direction.dot(mesh.normals[i]) * ui;
                ui - alpha * dui
            }
            BoundaryKind::SoundSoft => -ui,
        }
    });

    let lu = a.clone().lu();
    let phi = lu
        .solve(&b)
        .ok_or_else(|| HelmholtzError::Conditioning { detail: "LU factorization singular".into() })?;
    let max_norm = |v: &DVector<Complex64>| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let resid = max_norm(&(&a * &phi - &b)) / max_norm(&b).max(1e-300);
    if resid > cfg.tolerances.linear {
        return Err(HelmholtzError::Conditioning {
            detail: format!("relative linear residual {resid:.3e} exceeds {:.3e}", cfg.tolerances.linear),
        });
    }

    let density: Vec<Complex64> = phi.iter().cloned().collect();
    let mut density_deriv = vec![ZERO; n];
    if kind == BoundaryKind::SoundHard {
        for panel in &mesh.panels {
            let scale = 2.0 / panel.len;
            for q in 0..mesh.order {
                let mut acc = ZERO;
                for m in 0..mesh.order {
                    acc += density[panel.first + m] * (mesh.diff[q][m] * scale);
                }
                density_deriv[panel.first + q] = acc;
            }
        }
    }

    let bc_scale = match kind {
        BoundaryKind::SoundHard => {
            k * density.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300)
        }
        BoundaryKind::SoundSoft => 1.0,
    };

    let nystrom = NystromField { mesh, kind, k, eta, density, density_deriv };
    let mut field = WaveField {
        k,
        direction,
        scatterer: s.clone(),
        diagnostics: super::FieldDiagnostics {
            sup_total: 0.0,
            decay_constant: 0.0,
            bc_residual: 0.0,
            bc_scale,
            linear_residual: resid,
            nodes: n,
        },
        repr: FieldRepr::Nystrom(nystrom),
    };
    field.diagnostics = diagnostics_for(&field, cfg.r, resid, bc_scale, n);
    Ok(field)
}

impl NystromField {
    /// Scattered field value at an exterior point (plain quadrature; callers
    /// use the `WaveField` wrapper for the near-boundary flag).
    pub fn scattered(&self, x: Point) -> Complex64 {
        let mesh = &self.mesh;
        let mut acc = ZERO;
        match self.kind {
            BoundaryKind::SoundHard => {
                for q in 0..mesh.num_nodes() {
                    acc += double_layer(self.k, x, mesh.nodes[q], mesh.normals[q])
                        * self.density[q]
                        * mesh.weights[q];
                }
            }
            BoundaryKind::SoundSoft => {
                let ie = I * self.eta;
                for q in 0..mesh.num_nodes() {
                    let kv = double_layer(self.k, x, mesh.nodes[q], mesh.normals[q])
                        - ie * green(self.k, x, mesh.nodes[q]);
                    acc += kv * self.density[q] * mesh.weights[q];
                }
            }
        }
        acc
    }

    pub fn scattered_gradient(&self, x: Point) -> [Complex64; 2] {
        let mesh = &self.mesh;
        let mut gx = ZERO;
        let mut gy = ZERO;
        match self.kind {
            BoundaryKind::SoundHard => {
                for q in 0..mesh.num_nodes() {
                    let g = double_layer_grad_x(self.k, x, mesh.nodes[q], mesh.normals[q]);
                    let c = self.density[q] * mesh.weights[q];
                    gx += g[0] * c;
                    gy += g[1] * c;
                }
            }
            BoundaryKind::SoundSoft => {
                let ie = I * self.eta;
                for q in 0..mesh.num_nodes() {
                    let gd = double_layer_grad_x(self.k, x, mesh.nodes[q], mesh.normals[q]);
                    let gs = green_grad_x(self.k, x, mesh.nodes[q]);
                    let c = self.density[q] * mesh.weights[q];
                    gx += (gd[0] - ie * gs[0]) * c;
                    gy += (gd[1] - ie * gs[1]) * c;
                }
            }
        }
        [gx, gy]
    }

    /// Far-field amplitude in direction `xhat` under the crate normalization.
    pub fn far_field_at(&self, xhat: Point) -> Complex64 {
        let mesh = &self.mesh;
        let cd = far_coeff_double(self.k);
        let cs = far_coeff_single(self.k);
        let mut acc = ZERO;
        match self.kind {
            BoundaryKind::SoundHard => {
                for q in 0..mesh.num_nodes() {
                    let phase = Complex64::from_polar(1.0, -self.k * xhat.dot(mesh.nodes[q]));
                    acc += cd * xhat.dot(mesh.normals[q]) * phase * self.density[q] * mesh.weights[q];
                }
            }
            BoundaryKind::SoundSoft => {
                let ie = I * self.eta;
                for q in 0..mesh.num_nodes() {
                    let phase = Complex64::from_polar(1.0, -self.k * xhat.dot(mesh.nodes[q]));
                    let kv = cd * xhat.dot(mesh.normals[q]) - ie * cs;
                    acc += kv * phase * self.density[q] * mesh.weights[q];
                }
            }
        }
        acc
    }

    /// Boundary-condition residual at a boundary point `x` with outward
    /// normal `nu` (evaluated through the boundary trace formulas, not by
    /// naive near-boundary quadrature).
    pub fn bc_residual_at(&self, x: Point, nu: Point, incident: PlaneWave) -> f64 {
        let mesh = &self.mesh;
        let n = mesh.num_nodes();
        let (pidx, pdist) = mesh.nearest_panel(x);
        let on_panel = if pdist <= 1e-9 * mesh.panels[pidx].len.max(1e-300) {
            Some(pidx)
        } else {
            None
        };
        match self.kind {
            BoundaryKind::SoundHard => {
                // du/dnu = du^i/dnu + T[phi], T via the Maue split.
                let tau = Point::new(-nu.y, nu.x);
                let mut row = vec![ZERO; n];
                tangential_row(mesh, self.k, x, tau, on_panel, Complex64::new(1.0, 0.0), &mut row);
                let mut t_val: Complex64 =
                    row.iter().zip(&self.density_deriv).map(|(r, d)| r * d).sum();
                let mut snn = vec![ZERO; n];
                operator_row(
                    mesh,
                    x,
                    None,
                    &|y, nu_y, _| green(self.k, x, y) * nu.dot(nu_y),
                    Complex64::new(self.k * self.k, 0.0),
                    &mut snn,
                );
                t_val += snn.iter().zip(&self.density).map(|(r, d)| r * d).sum::<Complex64>();
                let gi = incident.gradient(x);
                let dnu_i = gi[0] * nu.x + gi[1] * nu.y;
                (dnu_i + t_val).norm()
            }
            BoundaryKind::SoundSoft => {
                // u = u^i + phi/2 + K[phi] - i eta S[phi] on the boundary.
                let cell = on_panel.map(|pi| mesh.panels[pi].cell);
                let mut row = vec![ZERO; n];
                soft_row(mesh, self.k, self.eta, x, cell.unwrap_or(usize::MAX), &mut row);
                let mut val: Complex64 =
                    row.iter().zip(&self.density).map(|(r, d)| r * d).sum();
                // Jump term: interpolate phi at x on its panel.
                if let Some(pi) = on_panel {
                    let panel = &mesh.panels[pi];
                    let t = panel.project(x);
                    let mut basis = vec![0.0; mesh.order];
                    lagrange_basis_at(&mesh.rule.nodes, &mesh.bary, t, &mut basis);
                    let mut phi_x = ZERO;
                    for (j, q) in mesh.panel_nodes(pi).enumerate() {
                        phi_x += self.density[q] * basis[j];
                    }
                    val += 0.5 * phi_x;
                }
                (incident.value(x) + val).norm()
            }
        }
    }
}
