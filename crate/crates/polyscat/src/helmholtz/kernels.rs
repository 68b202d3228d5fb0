//! Layer-potential kernels built on the outgoing 2D fundamental solution
//! `G(x,y) = (i/4) H^(1)_0(k|x-y|)`.
//!
//! On a straight panel the double-layer kernel and its adjoint vanish
//! identically ((x-y) is orthogonal to the normal), which the assembly
//! exploits; the guards below zero them explicitly so rounding noise in
//! (x-y).nu cannot be amplified by the 1/r factor of H1.

use crate::geom::Point;
use crate::special::{hankel1_0, hankel1_1};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fundamental solution G(x, y).
#[inline]
pub fn green(k: f64, x: Point, y: Point) -> Complex64 {
    let r = x.dist(y);
    I * 0.25 * hankel1_0(k * r)
}

/// Gradient of G with respect to x.
#[inline]
pub fn green_grad_x(k: f64, x: Point, y: Point) -> [Complex64; 2] {
    let e = x - y;
    let r = e.norm();
    let c = -I * 0.25 * k * hankel1_1(k * r) / r;
    [c * e.x, c * e.y]
}

/// Double-layer kernel dG/dnu(y).
#[inline]
pub fn double_layer(k: f64, x: Point, y: Point, nu_y: Point) -> Complex64 {
    let e = x - y;
    let r = e.norm();
    let dot = e.dot(nu_y);
    if dot.abs() <= 1e-12 * r {
        return Complex64::new(0.0, 0.0);
    }
    I * 0.25 * k * hankel1_1(k * r) * (dot / r)
}

/// Adjoint double-layer kernel dG/dnu(x).
#[inline]
pub fn adjoint_double_layer(k: f64, x: Point, y: Point, nu_x: Point) -> Complex64 {
    double_layer(k, y, x, nu_x)
}

/// Tangential derivative of the single-layer kernel at the target:
/// grad_x G . tau(x). On the target's own edge this is the Cauchy kernel
/// -1/(2 pi (s_y - s_x)) plus smooth terms.
#[inline]
pub fn single_layer_tangential(k: f64, x: Point, y: Point, tau_x: Point) -> Complex64 {
    let e = x - y;
    let r = e.norm();
    -I * 0.25 * k * hankel1_1(k * r) * (e.dot(tau_x) / r)
}

/// Gradient with respect to x of the double-layer kernel.
#[inline]
pub fn double_layer_grad_x(k: f64, x: Point, y: Point, nu_y: Point) -> [Complex64; 2] {
    let e = x - y;
    let r = e.norm();
    let z = k * r;
    let h1 = hankel1_1(z);
    let h0 = hankel1_0(z);
    // H1'(z) = H0(z) - H1(z)/z
    let h1p = h0 - h1 / z;
    let dot = e.dot(nu_y);
    let c = I * 0.25 * k;
    let radial = c * k * h1p * (dot / (r * r));
    let rest = c * h1 / r;
    [
        radial * e.x + rest * (nu_y.x - dot * e.x / (r * r)),
        radial * e.y + rest * (nu_y.y - dot * e.y / (r * r)),
    ]
}

/// Plane-wave far-field coefficient of the single layer: the scattered field
/// of S[psi] behaves as e^{ik|x|} |x|^{-1/2} u_inf with
/// u_inf = C_S integral e^{-ik xhat.y} psi ds.
#[inline]
pub fn far_coeff_single(k: f64) -> Complex64 {
    let amp = 0.25 * (2.0 / (std::f64::consts::PI * k)).sqrt();
    amp * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)
}

/// Far-field coefficient of the double layer: u_inf = C_D integral
/// e^{-ik xhat.y} (xhat.nu(y)) phi ds.
#[inline]
pub fn far_coeff_double(k: f64) -> Complex64 {
    let amp = 0.25 * k * (2.0 / (std::f64::consts::PI * k)).sqrt();
    amp * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_satisfies_helmholtz_away_from_source() {
        // Five-point stencil check of (lap + k^2) G = 0.
        let k = 1.3;
        let y = Point::new(0.2, -0.1);
        let x = Point::new(1.5, 0.7);
        let h = 1e-4;
        let lap = (green(k, Point::new(x.x + h, x.y), y)
            + green(k, Point::new(x.x - h, x.y), y)
            + green(k, Point::new(x.x, x.y + h), y)
            + green(k, Point::new(x.x, x.y - h), y)
            - green(k, x, y) * 4.0)
            / (h * h);
        let resid = lap + green(k, x, y) * k * k;
        assert!(resid.norm() < 1e-5, "residual {resid}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let k = 2.0;
        let y = Point::new(-0.3, 0.4);
        let x = Point::new(0.9, -1.2);
        let h = 1e-6;
        let g = green_grad_x(k, x, y);
        let fdx = (green(k, Point::new(x.x + h, x.y), y) - green(k, Point::new(x.x - h, x.y), y))
            / (2.0 * h);
        let fdy = (green(k, Point::new(x.x, x.y + h), y) - green(k, Point::new(x.x, x.y - h), y))
            / (2.0 * h);
        assert!((g[0] - fdx).norm() < 1e-8);
        assert!((g[1] - fdy).norm() < 1e-8);

        let nu = Point::new(0.6, 0.8);
        let dl = double_layer_grad_x(k, x, y, nu);
        let f = |p: Point| double_layer(k, p, y, nu);
        let fdx = (f(Point::new(x.x + h, x.y)) - f(Point::new(x.x - h, x.y))) / (2.0 * h);
        let fdy = (f(Point::new(x.x, x.y + h)) - f(Point::new(x.x, x.y - h))) / (2.0 * h);
        assert!((dl[0] - fdx).norm() < 1e-7);
        assert!((dl[1] - fdy).norm() < 1e-7);
    }

    #[test]
    fn double_layer_vanishes_on_flat_panel() {
        let k = 1.0;
        let y = Point::new(0.3, 0.0);
        let x = Point::new(0.7, 0.0);
        let nu = Point::new(0.0, -1.0);
        assert_eq!(double_layer(k, x, y, nu).norm(), 0.0);
    }

    #[test]
    fn far_field_coefficients_match_asymptotics() {
        // Compare G(x, y) against C_S e^{ik|x|} |x|^{-1/2} e^{-ik xhat.y}.
        let k = 1.7;
        let y = Point::new(0.3, -0.2);
        for r in [500.0, 2000.0] {
            let xhat = Point::from_angle(0.83);
            let x = xhat * r;
            let exact = green(k, x, y);
            let asym = far_coeff_single(k)
                * Complex64::from_polar(1.0, k * r)
                * (1.0 / r.sqrt())
                * Complex64::from_polar(1.0, -k * xhat.dot(y));
            assert!(
                (exact - asym).norm() < 2.0 / (r * r.sqrt()),
                "r={r}: {exact} vs {asym}"
            );
        }
    }
}
