//! Forward exterior Helmholtz solver for polygonal scatterers.
//!
//! The production path is a Nystrom boundary-integral solver on graded
//! panel meshes ([`solve`]): sound-soft boundaries use the combined field
//! (double plus coupled single layer) equation, sound-hard boundaries a
//! Burton-Miller combination of the value and normal-derivative traces of
//! the double-layer representation, with the hypersingular part regularized
//! through tangential derivatives. Two independent oracles live alongside:
//! a cylindrical-harmonics series for the disc ([`disc_series`]) and a
//! method-of-fundamental-solutions solver ([`mfs_solve`]).
//!
//! Far-field patterns follow the normalization
//! `u_s(x) = e^{ik|x|} |x|^{-1/2} (u_inf(xhat) + O(1/|x|))`
//! with no extra constant factor; textbook conventions differ, every far
//! field and optical-theorem constant in this crate is pinned to this one.

mod kernels;
mod mesh;
mod metrics;
mod nystrom;
mod oracle;

pub use kernels::{far_coeff_double, far_coeff_single, green, green_grad_x};
pub use mesh::{BoundaryMesh, Panel};
pub use metrics::{
    annulus_error, far_field_error, near_field_error, optical_theorem_defect, OpticalDefect,
};
pub use nystrom::solve;
pub use oracle::{disc_series, mfs_solve};

use crate::geom::Point;
use crate::scene::{BoundaryKind, Scatterer2D};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HelmholtzError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("scatterer validation failed: {0}")]
    Validation(String),
    #[error("linear system ill-conditioned ({detail}); suspected spurious resonance or mesh deficiency")]
    Conditioning { detail: String },
    #[error("evaluation point ({:.6}, {:.6}) lies inside the scatterer", .0.x, .0.y)]
    InsideScatterer(Point),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Boundary-condition residual bound (scaled; see `FieldDiagnostics`).
    pub bc: f64,
    /// Helmholtz finite-difference residual bound at probe points.
    pub pde: f64,
    /// Maximum acceptable relative residual of the linear solve.
    pub linear: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { bc: 1e-3, pde: 1e-4, linear: 1e-9 }
    }
}

fn default_k_low() -> f64 {
    0.05
}
fn default_k_high() -> f64 {
    50.0
}
fn default_grading() -> f64 {
    3.0
}
fn default_quad() -> usize {
    512
}

/// Geometry and discretization parameters of one scattering experiment.
///
/// The radii satisfy `R + 1 + rho_tilde <= R1`, the observation center obeys
/// `R + 1 + rho_tilde <= |x0| <= R1`, and `R2 >= max(2 R1, 4R)`. The
/// wavenumber is kept away from zero (the two-dimensional theory needs it):
/// `k_low <= k <= k_high`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub k: f64,
    #[serde(default = "default_k_low")]
    pub k_low: f64,
    #[serde(default = "default_k_high")]
    pub k_high: f64,
    /// Incident directions (unit vectors).
    pub directions: Vec<[f64; 2]>,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    pub rho_tilde: f64,
    pub x0: [f64; 2],
    #[serde(rename = "R2")]
    pub r2: f64,
    /// Quadrature nodes per polygon.
    #[serde(default = "default_quad")]
    pub quad_order: usize,
    /// Corner-grading exponent of the panel mesh.
    #[serde(default = "default_grading")]
    pub grading: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ScatterConfig {
    /// Reference configuration for scatterers within radius `r`.
    pub fn reference(r: f64) -> ScatterConfig {
        let r1 = r + 1.5;
        ScatterConfig {
            k: 1.0,
            k_low: default_k_low(),
            k_high: default_k_high(),
            directions: vec![[1.0, 0.0], [0.0, 1.0]],
            r,
            r1,
            rho_tilde: 0.5,
            x0: [r1, 0.0],
            r2: (2.0 * r1).max(4.0 * r),
            quad_order: default_quad(),
            grading: default_grading(),
            tolerances: Tolerances::default(),
        }
    }

    pub fn x0_point(&self) -> Point {
        Point::new(self.x0[0], self.x0[1])
    }

    pub fn direction(&self, j: usize) -> Result<Point, HelmholtzError> {
        let d = self
            .directions
            .get(j)
            .ok_or_else(|| HelmholtzError::Parameter(format!("direction index {j} out of range")))?;
        Ok(Point::new(d[0], d[1]))
    }

    pub fn validate(&self) -> Result<(), HelmholtzError> {
        let fail = |msg: String| Err(HelmholtzError::Config(msg));
        if !(self.k_low > 0.0) {
            return fail(format!("k_low must be positive, got {}", self.k_low));
        }
        if !(self.k >= self.k_low && self.k <= self.k_high) {
            return fail(format!("k = {} outside [{}, {}]", self.k, self.k_low, self.k_high));
        }
        if self.directions.is_empty() {
            return fail("at least one incident direction required".into());
        }
        for (j, d) in self.directions.iter().enumerate() {
            let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if (n - 1.0).abs() > 1e-9 {
                return fail(format!("direction {j} is not a unit vector (norm {n})"));
            }
        }
        let lower = self.r + 1.0 + self.rho_tilde;
        if lower > self.r1 {
            return fail(format!("need R + 1 + rho_tilde <= R1, got {lower} > {}", self.r1));
        }
        let x0n = self.x0_point().norm();
        if x0n < lower - 1e-12 || x0n > self.r1 + 1e-12 {
            return fail(format!(
                "|x0| = {x0n} violates R + 1 + rho_tilde <= |x0| <= R1 = {}",
                self.r1
            ));
        }
        if self.r2 < (2.0 * self.r1).max(4.0 * self.r) - 1e-12 {
            return fail(format!(
                "R2 = {} below max(2 R1, 4R) = {}",
                self.r2,
                (2.0 * self.r1).max(4.0 * self.r)
            ));
        }
        if self.grading < 1.0 {
            return fail(format!("grading exponent must be >= 1, got {}", self.grading));
        }
        Ok(())
    }
}

/// Loads a config file (JSON).
pub fn load_config(path: &Path) -> Result<ScatterConfig, HelmholtzError> {
    let text = std::fs::read_to_string(path)?;
    let cfg: ScatterConfig =
        serde_json::from_str(&text).map_err(|e| HelmholtzError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// A time-harmonic field: total value and gradient at exterior points.
///
/// Implementations do not check domain membership; callers keep evaluation
/// points inside the field's Helmholtz domain (use `WaveField::eval` for the
/// checked interface).
pub trait Field {
    fn value(&self, p: Point) -> Complex64;
    fn gradient(&self, p: Point) -> [Complex64; 2];
}

/// Incident plane wave `u^i(x) = e^{ik x.v}` with `|u^i| = 1` everywhere.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave {
    pub k: f64,
    pub direction: Point,
}

impl PlaneWave {
    pub fn new(k: f64, direction: Point) -> PlaneWave {
        PlaneWave { k, direction }
    }
}

impl Field for PlaneWave {
    fn value(&self, p: Point) -> Complex64 {
        Complex64::from_polar(1.0, self.k * p.dot(self.direction))
    }

    fn gradient(&self, p: Point) -> [Complex64; 2] {
        let v = self.value(p) * Complex64::new(0.0, self.k);
        [v * self.direction.x, v * self.direction.y]
    }
}

/// Field evaluator for the incident wave of configured direction `j`.
pub fn incident_field(cfg: &ScatterConfig, j: usize) -> Result<PlaneWave, HelmholtzError> {
    Ok(PlaneWave::new(cfg.k, cfg.direction(j)?))
}

/// Solver diagnostics recorded with every field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDiagnostics {
    /// Sup of |u| over the probe grid (the empirical uniform bound E).
    pub sup_total: f64,
    /// Sup of |u_s(x)| |x|^{1/2} for |x| in [R+2, 8R] (the decay constant E1).
    pub decay_constant: f64,
    /// Max boundary-condition residual over cell-midportion samples.
    pub bc_residual: f64,
    /// Scale for the boundary residual (k times the boundary sup of |u|).
    pub bc_scale: f64,
    /// Relative residual of the linear solve (0 for oracle fields).
    pub linear_residual: f64,
    /// Unknown count of the discretization (0 for series fields).
    pub nodes: usize,
}

/// One evaluation with its near-boundary flag: evaluations closer to the
/// boundary than one local panel length are flagged rather than corrected.
#[derive(Debug, Clone, Copy)]
pub struct Eval<T> {
    pub value: T,
    pub near_boundary: bool,
}

pub(crate) enum FieldRepr {
    /// No scatterer; the total field is the incident wave.
    Empty,
    Nystrom(nystrom::NystromField),
    DiscSeries(oracle::DiscSeries),
    Mfs(oracle::MfsField),
}

/// A solved scattering problem: boundary density (or series coefficients)
/// plus evaluators for the total field, its gradient and the far field.
/// Immutable; safe to evaluate concurrently.
pub struct WaveField {
    pub k: f64,
    pub direction: Point,
    pub scatterer: Scatterer2D,
    pub diagnostics: FieldDiagnostics,
    pub(crate) repr: FieldRepr,
}

impl WaveField {
    pub fn kind(&self) -> BoundaryKind {
        self.scatterer.kind()
    }

    pub(crate) fn incident(&self) -> PlaneWave {
        PlaneWave::new(self.k, self.direction)
    }

    /// Unchecked scattered-field value.
    pub fn scattered(&self, p: Point) -> Complex64 {
        match &self.repr {
            FieldRepr::Empty => Complex64::new(0.0, 0.0),
            FieldRepr::Nystrom(f) => f.scattered(p),
            FieldRepr::DiscSeries(f) => f.scattered(p),
            FieldRepr::Mfs(f) => f.scattered(p),
        }
    }

    fn scattered_gradient(&self, p: Point) -> [Complex64; 2] {
        match &self.repr {
            FieldRepr::Empty => [Complex64::new(0.0, 0.0); 2],
            FieldRepr::Nystrom(f) => f.scattered_gradient(p),
            FieldRepr::DiscSeries(f) => f.scattered_gradient(p),
            FieldRepr::Mfs(f) => f.scattered_gradient(p),
        }
    }

    /// Distance below which an evaluation is flagged as near-boundary.
    fn near_threshold(&self, p: Point) -> f64 {
        match &self.repr {
            FieldRepr::Empty => 0.0,
            FieldRepr::Nystrom(f) => {
                let (idx, _) = f.mesh.nearest_panel(p);
                f.mesh.panels[idx].len
            }
            _ => 0.05 * self.scatterer.bounding_radius().max(1e-300),
        }
    }

    /// Checked total-field evaluation.
    pub fn eval(&self, p: Point) -> Result<Eval<Complex64>, HelmholtzError> {
        let sd = self.scatterer.signed_distance(p);
        if sd <= 0.0 {
            return Err(HelmholtzError::InsideScatterer(p));
        }
        let value = self.incident().value(p) + self.scattered(p);
        Ok(Eval { value, near_boundary: sd < self.near_threshold(p) })
    }

    /// Checked total-field gradient.
    pub fn eval_grad(&self, p: Point) -> Result<Eval<[Complex64; 2]>, HelmholtzError> {
        let sd = self.scatterer.signed_distance(p);
        if sd <= 0.0 {
            return Err(HelmholtzError::InsideScatterer(p));
        }
        let gi = self.incident().gradient(p);
        let gs = self.scattered_gradient(p);
        Ok(Eval {
            value: [gi[0] + gs[0], gi[1] + gs[1]],
            near_boundary: sd < self.near_threshold(p),
        })
    }

    /// Far-field pattern on a uniform direction grid.
    pub fn far_field(&self, n_dirs: usize) -> Result<FarFieldPattern, HelmholtzError> {
        if n_dirs < 64 {
            return Err(HelmholtzError::Parameter(format!(
                "need at least 64 far-field directions, got {n_dirs}"
            )));
        }
        let values = (0..n_dirs)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n_dirs as f64;
                self.far_field_at(Point::from_angle(theta))
            })
            .collect();
        Ok(FarFieldPattern { k: self.k, values })
    }

    /// Far-field amplitude in one exact direction.
    pub fn far_field_at(&self, xhat: Point) -> Complex64 {
        match &self.repr {
            FieldRepr::Empty => Complex64::new(0.0, 0.0),
            FieldRepr::Nystrom(f) => f.far_field_at(xhat),
            FieldRepr::DiscSeries(f) => f.far_field_at(xhat),
            FieldRepr::Mfs(f) => f.far_field_at(xhat),
        }
    }

    /// Max Helmholtz finite-difference residual |lap u + k^2 u| over probes.
    pub fn helmholtz_residual(&self, probes: &[Point]) -> f64 {
        let h = 1e-3;
        let k2 = self.k * self.k;
        probes
            .iter()
            .map(|&p| {
                let u = |q: Point| self.incident().value(q) + self.scattered(q);
                let lap = (u(Point::new(p.x + h, p.y))
                    + u(Point::new(p.x - h, p.y))
                    + u(Point::new(p.x, p.y + h))
                    + u(Point::new(p.x, p.y - h))
                    - u(p) * 4.0)
                    / (h * h);
                (lap + u(p) * k2).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Max boundary-condition residual over `samples_per_cell` midportion
    /// samples of every cell (edge parameters within [0.3, 0.7]).
    pub fn bc_residual(&self, samples_per_cell: usize) -> f64 {
        let cells = self.scatterer.cells();
        let mut worst: f64 = 0.0;
        for cell in &cells {
            for i in 0..samples_per_cell {
                let t = 0.3 + 0.4 * (i as f64 + 0.5) / samples_per_cell as f64;
                let x = cell.segment.point_at(t);
                let r = match &self.repr {
                    FieldRepr::Empty => 0.0,
                    FieldRepr::Nystrom(f) => f.bc_residual_at(x, cell.normal, self.incident()),
                    FieldRepr::DiscSeries(f) => f.bc_residual_at(x, cell.normal),
                    FieldRepr::Mfs(f) => f.bc_residual_at(x, cell.normal, self.incident()),
                };
                worst = worst.max(r);
            }
        }
        worst
    }
}

impl Field for WaveField {
    fn value(&self, p: Point) -> Complex64 {
        self.incident().value(p) + self.scattered(p)
    }

    fn gradient(&self, p: Point) -> [Complex64; 2] {
        let gi = self.incident().gradient(p);
        let gs = self.scattered_gradient(p);
        [gi[0] + gs[0], gi[1] + gs[1]]
    }
}

/// Sampled far-field pattern on the uniform grid `theta_i = 2 pi i / n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FarFieldPattern {
    pub k: f64,
    pub values: Vec<Complex64>,
}

impl FarFieldPattern {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn theta(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * i as f64 / self.values.len() as f64
    }

    /// L2 norm over the unit circle (periodic trapezoid = rectangle rule).
    pub fn l2_norm(&self) -> f64 {
        let dt = 2.0 * std::f64::consts::PI / self.values.len() as f64;
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dt).sqrt()
    }

    /// Writes the pattern as CSV rows `theta,re,im` in full precision.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "theta,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", self.theta(i), v.re, v.im)?;
        }
        Ok(())
    }
}

/// Fills the probe-grid diagnostics of a freshly built field.
pub(crate) fn diagnostics_for(
    field: &WaveField,
    config_r: f64,
    linear_residual: f64,
    bc_scale: f64,
    nodes: usize,
) -> FieldDiagnostics {
    let r = config_r.max(field.scatterer.bounding_radius());
    let n_angles = 48;
    let radii: Vec<f64> = (0..8)
        .map(|i| (r + 1.0) + (8.0 * r - (r + 1.0)) * i as f64 / 7.0)
        .collect();
    let mut sup_total: f64 = 0.0;
    let mut decay: f64 = 0.0;
    for &rad in &radii {
        for a in 0..n_angles {
            let p =
                Point::from_angle(2.0 * std::f64::consts::PI * a as f64 / n_angles as f64) * rad;
            let us = field.scattered(p);
            let u = field.incident().value(p) + us;
            sup_total = sup_total.max(u.norm());
            if rad >= r + 2.0 {
                decay = decay.max(us.norm() * rad.sqrt());
            }
        }
    }
    FieldDiagnostics {
        sup_total,
        decay_constant: decay,
        bc_residual: field.bc_residual(3),
        bc_scale,
        linear_residual,
        nodes,
    }
}

/// The trivial field of an empty scatterer: `u = u^i`, `u^s = 0` exactly.
pub(crate) fn empty_field(s: &Scatterer2D, k: f64, direction: Point) -> WaveField {
    WaveField {
        k,
        direction,
        scatterer: s.clone(),
        diagnostics: FieldDiagnostics {
            sup_total: 1.0,
            decay_constant: 0.0,
            bc_residual: 0.0,
            bc_scale: k,
            linear_residual: 0.0,
            nodes: 0,
        },
        repr: FieldRepr::Empty,
    }
}
