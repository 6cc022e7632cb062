//! Gauss–Legendre quadrature and a direct disk integral for Bergman norms.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n−1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(α+1) ∬_Δ |φ|² (1−|z|²)^α dA/π` by a tensor rule: trapezoid in the angle,
/// Gauss–Legendre in `t = |z|²`. Exact for polynomial `φ` of degree `d` when
/// `angular > 2d` and `α` is a nonnegative integer with `2·radial > d + α`.
pub fn disk_bergman_norm_sq(
    phi: impl Fn(Complex64) -> Complex64,
    alpha: f64,
    radial: usize,
    angular: usize,
) -> f64 {
    let (x, w) = gauss_legendre(radial);
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let t = 0.5 * (xi + 1.0);
        let r = t.sqrt();
        let mean: f64 = (0..angular)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / angular as f64;
                phi(Complex64::from_polar(r, theta)).norm_sqr()
            })
            .sum::<f64>()
            / angular as f64;
        total += 0.5 * wi * mean * (1.0 - t).powf(alpha);
    }
    (alpha + 1.0) * total
}
