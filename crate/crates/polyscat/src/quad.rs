//! Quadrature building blocks: Gauss-Legendre rules, barycentric Lagrange
//! interpolation and spectral differentiation on a panel, and adaptive
//! product integration for (near-)singular kernels.

use num_complex::Complex64;

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Computes the n-point Gauss-Legendre rule by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    GaussRule { nodes, weights }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric weights for Lagrange interpolation through `nodes`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i] /= nodes[i] - nodes[j];
            }
        }
    }
    w
}

/// Values of all Lagrange basis functions at `t` (barycentric formula).
pub fn lagrange_basis_at(nodes: &[f64], bary: &[f64], t: f64, out: &mut [f64]) {
    let n = nodes.len();
    debug_assert_eq!(out.len(), n);
    for i in 0..n {
        if (t - nodes[i]).abs() < 1e-300 {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[i] = 1.0;
            return;
        }
    }
    let mut denom = 0.0;
    for i in 0..n {
        out[i] = bary[i] / (t - nodes[i]);
        denom += out[i];
    }
    for v in out.iter_mut() {
        *v /= denom;
    }
}

/// Spectral differentiation matrix for the interpolation nodes: row i holds
/// the derivative of each Lagrange basis function at node i. Applied to node
/// values it returns derivative values (with respect to the same variable).
pub fn differentiation_matrix(nodes: &[f64], bary: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                d[i][j] = v;
                row_sum += v;
            }
        }
        d[i][i] = -row_sum;
    }
    d
}

/// Adaptive integral of a complex kernel over [t0, t1] with a singular or
/// near-singular point at parameter `t_near` (clamped to the interval
/// endpoints if outside). Subdivides dyadically toward `t_near`, integrating
/// each subinterval with a fixed Gauss rule; handles integrable endpoint
/// singularities up to log strength.
pub fn integrate_near_singular<F>(t0: f64, t1: f64, t_near: f64, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let rule = cached_gauss8();
    let ts = t_near.clamp(t0, t1);
    let mut total = Complex64::new(0.0, 0.0);
    // Each side of the split point, dyadically refined toward it. `dir` is
    // the signed length from the split point to the far end of the side.
    for dir in [t0 - ts, t1 - ts] {
        if dir.abs() < 1e-300 {
            continue;
        }
        let mut outer = 1.0_f64;
        for _ in 0..52 {
            let inner = 0.5 * outer;
            let (u0, u1) = (ts + dir * inner, ts + dir * outer);
            let half = 0.5 * (u1 - u0);
            let mid = 0.5 * (u1 + u0);
            let mut piece = Complex64::new(0.0, 0.0);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                piece += f(mid + half * x) * *w;
            }
            // `half` is signed; multiplying by the side direction restores
            // positive orientation on the left side.
            piece *= half;
            total += piece * dir.signum();
            if piece.norm() < 1e-16 * total.norm().max(1e-30) && inner < 1e-6 {
                break;
            }
            outer = inner;
        }
    }
    total
}

/// Shared 8-point rule used by the adaptive panel integrators.
pub fn cached_gauss8() -> &'static GaussRule {
    use std::sync::OnceLock;
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials_exactly() {
        for n in [1usize, 2, 4, 8, 16] {
            let rule = gauss_legendre(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            // Exact for degree 2n-1.
            let deg = 2 * n - 1;
            let val: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            assert!(val.abs() < 1e-13, "odd power integrates to zero");
            let even = 2 * n - 2;
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(even as i32))
                .sum();
            let want = 2.0 / (even as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn barycentric_interpolation_reproduces_polynomials() {
        let rule = gauss_legendre(5);
        let bary = barycentric_weights(&rule.nodes);
        let f = |x: f64| 3.0 * x.powi(4) - x.powi(2) + 0.5;
        let values: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        let mut basis = vec![0.0; 5];
        for &t in &[-0.9, -0.3, 0.1, 0.77] {
            lagrange_basis_at(&rule.nodes, &bary, t, &mut basis);
            let got: f64 = basis.iter().zip(&values).map(|(b, v)| b * v).sum();
            assert!((got - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn differentiation_matrix_differentiates_polynomials() {
        let rule = gauss_legendre(6);
        let bary = barycentric_weights(&rule.nodes);
        let d = differentiation_matrix(&rule.nodes, &bary);
        let f = |x: f64| x.powi(3) - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let values: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        for i in 0..6 {
            let got: f64 = d[i].iter().zip(&values).map(|(a, v)| a * v).sum();
            assert!((got - df(rule.nodes[i])).abs() < 1e-11);
        }
    }

    #[test]
    fn near_singular_integration_handles_log() {
        // integral of ln|t| over [-1, 1] = -2.
        let got = integrate_near_singular(-1.0, 1.0, 0.0, |t| {
            Complex64::new(t.abs().max(1e-300).ln(), 0.0)
        });
        assert!((got.re + 2.0).abs() < 1e-10, "got {got}");
        // Smooth integrand sanity: cos over [0, pi/2] with fake near point.
        let got = integrate_near_singular(0.0, std::f64::consts::FRAC_PI_2, 0.3, |t| {
            Complex64::new(t.cos(), 0.0)
        });
        assert!((got.re - 1.0).abs() < 1e-12);
    }
}
