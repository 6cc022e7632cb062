//! Two-sided bounds for multiplier norms `‖g‖` from `A²_α` to `A²_β`.
//!
//! Lower bounds maximize `‖g_r φ‖_β / ‖φ‖_α` over polynomials `φ` by power
//! iteration, where `g_r(z) = g(rz)`. Since dilation never increases the norm,
//! any such quotient bounds `‖g‖` from below. The numerator only keeps output
//! coefficients up to degree `K`, which can only shrink it and needs just
//! `g_0, …, g_K`; no tail estimate is involved. For Koebe Schwarzians the upper
//! bound is exact: `|S_κ^{[p,q]}| ≤ (p+q−1)!|g₀|` with `g₀ = (1−z²)^{−(p+q)}`.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exactcore::{format_rational, g0_mult_norm_sq, int, to_f64, ExactScalar};
use crate::norms::{bergman_weights_f64, test_family_series, TestFamilyParams};
use crate::schwarzian::KoebeClosedForm;
use crate::series::UniSeries;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Koebe(KoebeClosedForm),
    /// A polynomial symbol, taken to be exactly the given coefficients.
    Series(UniSeries<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierProblem {
    pub symbol: Symbol,
    pub alpha: f64,
    pub beta: f64,
    /// Set for `S_κ^{[p,q]}` with `β = α + 2p + 2q` and rational `α`.
    pub koebe: Option<(usize, usize, ExactScalar)>,
}

impl MultiplierProblem {
    /// `S_κ^{[p,q]}` from `A²_α` to `A²_{α+2p+2q}`.
    pub fn koebe(p: usize, q: usize, alpha: &ExactScalar) -> Result<Self> {
        if *alpha <= int(-1) {
            return domain(format!("alpha must exceed -1 (got {})", format_rational(alpha)));
        }
        let closed = KoebeClosedForm::new(p, q)?;
        let a = to_f64(alpha);
        Ok(Self {
            symbol: Symbol::Koebe(closed),
            alpha: a,
            beta: a + 2.0 * (p + q) as f64,
            koebe: Some((p, q, alpha.clone())),
        })
    }

    pub fn general(symbol: UniSeries<Complex64>, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > alpha) {
            return domain(format!("need beta > alpha > -1 (got alpha={alpha}, beta={beta})"));
        }
        Ok(Self {
            symbol: Symbol::Series(symbol),
            alpha,
            beta,
            koebe: None,
        })
    }

    /// Coefficients `g_k r^k` for `k ≤ degree`.
    pub fn dilated_coefficients(&self, r: f64, degree: usize) -> Vec<Complex64> {
        match &self.symbol {
            Symbol::Koebe(c) => koebe_coefficients_f64(c, degree)
                .into_iter()
                .enumerate()
                .map(|(k, g)| Complex64::new(g * r.powi(k as i32), 0.0))
                .collect(),
            Symbol::Series(s) => (0..=degree)
                .map(|k| {
                    if k <= s.order() {
                        s.coeffs()[k] * r.powi(k as i32)
                    } else {
                        Complex64::zero()
                    }
                })
                .collect(),
        }
    }
}

/// Floating Taylor coefficients of `S_κ^{[p,q]}` through `z^degree`.
pub fn koebe_coefficients_f64(c: &KoebeClosedForm, degree: usize) -> Vec<f64> {
    let m = c.pole_order as f64;
    let pre = c.prefactor.to_f64().expect("p! fits in f64");
    let cd: Vec<f64> = c.cd.iter().map(to_f64).collect();
    let half = degree.saturating_sub(c.monomial_power) / 2;
    let mut pole = Vec::with_capacity(half + 1);
    let mut b = 1.0;
    for n in 0..=half {
        pole.push(b);
        b *= (n as f64 + m) / (n as f64 + 1.0);
    }
    let mut out = vec![0.0; degree + 1];
    for n in 0..=half {
        let k = c.monomial_power + 2 * n;
        if k > degree {
            break;
        }
        let t: f64 = cd.iter().enumerate().take(n + 1).map(|(d, cd)| cd * pole[n - d]).sum();
        out[k] = pre * t;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighOutcome {
    /// `‖g_r φ‖_β / ‖φ‖_α` at the final iterate.
    pub value: f64,
    /// `‖Av − λv‖ / λ` for the symmetrized operator `A`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Stop once the relative eigenvalue change drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub deadline: Option<Instant>,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100_000,
            deadline: None,
        }
    }
}

/// The operator `A = W_α^{−1/2} T* W_β T W_α^{−1/2}` on `C^{N+1}`, where `T`
/// multiplies by the dilated symbol and keeps degrees `≤ K`.
struct Operator {
    g: Vec<Complex64>,
    inv_sqrt_wa: Vec<f64>,
    wb: Vec<f64>,
    n: usize,
    k: usize,
}

impl Operator {
    fn new(problem: &MultiplierProblem, n: usize, k: usize, r: f64) -> Result<Self> {
        let wa = bergman_weights_f64(problem.alpha, n)?;
        let wb = bergman_weights_f64(problem.beta, k)?;
        Ok(Self {
            g: problem.dilated_coefficients(r, k),
            inv_sqrt_wa: wa.iter().map(|w| 1.0 / w.sqrt()).collect(),
            wb,
            n,
            k,
        })
    }

    /// `y = T W_α^{−1/2} v`, degrees `0..=K`.
    fn forward(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x: Vec<Complex64> = v.iter().zip(&self.inv_sqrt_wa).map(|(v, s)| v * s).collect();
        (0..=self.k)
            .into_par_iter()
            .map(|m| {
                let mut acc = Complex64::zero();
                for j in 0..=m.min(self.n) {
                    acc += self.g[m - j] * x[j];
                }
                acc
            })
            .collect()
    }

    /// `W_α^{−1/2} T* W_β y`.
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let z: Vec<Complex64> = y.iter().zip(&self.wb).map(|(y, w)| y * w).collect();
        (0..=self.n)
            .into_par_iter()
            .map(|j| {
                let mut acc = Complex64::zero();
                for m in j..=self.k {
                    acc += self.g[m - j].conj() * z[m];
                }
                acc * self.inv_sqrt_wa[j]
            })
            .collect()
    }

    fn quadratic(&self, y: &[Complex64]) -> f64 {
        let mut s = CompensatedSum::default();
        for (y, w) in y.iter().zip(&self.wb) {
            s.add(w * y.norm_sqr());
        }
        s.value()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    let mut s = CompensatedSum::default();
    for x in v {
        s.add(x.norm_sqr());
    }
    s.value().sqrt()
}

/// Start vector: coefficients of `(1+z)(1−r z²)^{−λ}` at `λ = α/2 + 1.05`,
/// expressed in the symmetrized coordinates `v = W_α^{1/2} φ`.
fn seed(problem: &MultiplierProblem, n: usize, r: f64) -> Result<Vec<Complex64>> {
    let lambda = problem.alpha / 2.0 + 1.05;
    let wa = bergman_weights_f64(problem.alpha, n)?;
    let mut v = vec![Complex64::zero(); n + 1];
    let mut c = 1.0;
    let mut j = 0;
    while 2 * j <= n {
        v[2 * j] = Complex64::new(c * wa[2 * j].sqrt(), 0.0);
        if 2 * j < n {
            v[2 * j + 1] = Complex64::new(c * wa[2 * j + 1].sqrt(), 0.0);
        }
        c *= (j as f64 + lambda) / (j as f64 + 1.0) * r;
        j += 1;
    }
    let s = norm(&v);
    if !(s > 0.0 && s.is_finite()) {
        return domain("degenerate start vector");
    }
    Ok(v.into_iter().map(|x| x / s).collect())
}

fn iterate(op: &Operator, mut v: Vec<Complex64>, cfg: &PowerIteration) -> RayleighOutcome {
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut best = 0.0_f64;
    for it in 1..=cfg.max_iterations {
        let y = op.forward(&v);
        let rayleigh = op.quadratic(&y);
        best = best.max(rayleigh);
        let av = op.adjoint(&y);
        let res: Vec<Complex64> = av.iter().zip(&v).map(|(a, v)| a - v * rayleigh).collect();
        residual = if rayleigh > 0.0 { norm(&res) / rayleigh } else { 0.0 };
        let change = (rayleigh - lambda).abs() / rayleigh.max(f64::MIN_POSITIVE);
        lambda = rayleigh;
        let s = norm(&av);
        if change < cfg.tolerance || s == 0.0 {
            return RayleighOutcome {
                value: best.sqrt(),
                residual,
                iterations: it,
                converged: true,
            };
        }
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            return RayleighOutcome {
                value: best.sqrt(),
                residual,
                iterations: it,
                converged: false,
            };
        }
        v = av.into_iter().map(|x| x / s).collect();
    }
    RayleighOutcome {
        value: best.sqrt(),
        residual,
        iterations: cfg.max_iterations,
        converged: false,
    }
}

/// Power-iteration estimate of `sup ‖P_K(g_r φ)‖_β / ‖φ‖_α` over `deg φ ≤ N`.
/// Without convergence the best quotient seen is still reported, as
/// `ConvergenceFailure`, and remains a valid lower bound.
pub fn rayleigh_lower_bound(
    problem: &MultiplierProblem,
    n: usize,
    k: usize,
    r: f64,
    cfg: &PowerIteration,
) -> Result<RayleighOutcome> {
    if !(0.0..=1.0).contains(&r) {
        return domain(format!("dilation must lie in [0, 1] (got {r})"));
    }
    let k = k.max(n);
    let op = Operator::new(problem, n, k, r)?;
    let mut out = iterate(&op, seed(problem, n, r)?, cfg);
    if !out.converged && cfg.deadline.is_none_or(|d| Instant::now() < d) {
        // stagnation fallback: restart from the flat vector
        let flat = vec![Complex64::new(1.0 / ((n + 1) as f64).sqrt(), 0.0); n + 1];
        let retry = iterate(&op, flat, cfg);
        if retry.value > out.value {
            out = retry;
        }
    }
    if out.converged {
        Ok(out)
    } else {
        Err(Error::ConvergenceFailure {
            best: out.value,
            residual: out.residual,
        })
    }
}

/// Certified lower bound for `‖g‖`: the Rayleigh value for `g_r`, accepting
/// unconverged iterates since every quotient is attained by some `φ`.
pub fn certified_lower_bound(
    problem: &MultiplierProblem,
    r: f64,
    n: usize,
    k: usize,
    cfg: &PowerIteration,
) -> Result<RayleighOutcome> {
    if !(0.0..1.0).contains(&r) {
        return domain(format!("dilation must lie in [0, 1) (got {r})"));
    }
    match rayleigh_lower_bound(problem, n, k, r, cfg) {
        Ok(o) => Ok(o),
        Err(Error::ConvergenceFailure { best, residual }) => Ok(RayleighOutcome {
            value: best,
            residual,
            iterations: cfg.max_iterations,
            converged: false,
        }),
        Err(e) => Err(e),
    }
}

/// `‖S_κ^{[p,q]}(√r z)(1−r z²)^{−λ}‖²_{α+2p+2q} / ‖(1−r z²)^{−λ}‖²_α`.
///
/// Both norms are summed until the remainder is below `1e−12` relative; the
/// numerator keeps its partial sum and the denominator its upper bound, so the
/// result is a certified lower bound for the squared multiplier norm.
pub fn test_family_quotient(p: usize, q: usize, alpha: f64, lambda: f64, r: f64) -> Result<f64> {
    if !(alpha + 2.0 < 2.0 * lambda && 2.0 * lambda < alpha + 3.0) {
        return domain(format!(
            "lambda must satisfy alpha+2 < 2 lambda < alpha+3 (got lambda={lambda}, alpha={alpha})"
        ));
    }
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("need 0 < r < 1 (got {r})"));
    }
    let c = KoebeClosedForm::new(p, q)?;
    let den = test_family_series(&TestFamilyParams::new(r, lambda, 0, alpha)?, 1e-14)?;
    let num = test_family_numerator(&c, alpha, lambda, r, 1e-12 * den.partial)?;
    Ok(num / den.upper())
}

const MAX_NUMERATOR_TERMS: usize = 50_000_000;

/// Partial sum (lower bound) of the numerator in [`test_family_quotient`],
/// continued until the certified remainder is below `tol`.
fn test_family_numerator(c: &KoebeClosedForm, alpha: f64, lambda: f64, r: f64, tol: f64) -> Result<f64> {
    // coefficient of z^{p−q+2n}: −p! r^{(p−q)/2} r^n Σ_d C_d (μ)_{n−d}/(n−d)!
    let mu = c.pole_order as f64 + lambda;
    let beta = alpha + 2.0 * c.pole_order as f64;
    let shift = c.monomial_power;
    let cd: Vec<f64> = c.cd.iter().map(to_f64).collect();
    let t_one: f64 = cd.iter().sum();
    let pre = c.prefactor.to_f64().expect("p! fits in f64");
    let pre_sq = pre * pre * r.powi(shift as i32);
    let r2 = r * r;

    // w^{(β)}_{shift}
    let mut w = bergman_weights_f64(beta, shift)?[shift];
    let mut pole: Vec<f64> = Vec::with_capacity(cd.len());
    let mut b = 1.0;
    let mut rpow = 1.0;
    let mut acc = CompensatedSum::default();
    for n in 0..MAX_NUMERATOR_TERMS {
        if pole.len() == cd.len() {
            pole.remove(0);
        }
        pole.push(b);
        // pole holds b_{n−len+1..=n}; C_d pairs with b_{n−d}
        let cn: f64 = cd
            .iter()
            .enumerate()
            .take(pole.len())
            .map(|(d, cd)| cd * pole[pole.len() - 1 - d])
            .sum();
        let term = w * pre_sq * cn * cn * rpow;
        acc.add(term);

        // majorant e_n = w_m p!² r^{p−q} T(1)² b_n² r^{2n}, whose ratios are
        // at most q_n = r²((n+μ)/(n+1))², nonincreasing in n
        let g = (n as f64 + mu) / (n as f64 + 1.0);
        let qn = r2 * g * g;
        if qn < 1.0 {
            let major = w * pre_sq * t_one * t_one * b * b * rpow;
            if major * qn / (1.0 - qn) < tol {
                return Ok(acc.value());
            }
        }
        let m = (shift + 2 * n) as f64;
        w *= (m + 1.0) * (m + 2.0) / ((m + beta + 2.0) * (m + beta + 3.0));
        b *= (n as f64 + mu) / (n as f64 + 1.0);
        rpow *= r2;
    }
    Err(Error::ToleranceUnachievable(format!(
        "test-family numerator did not reach {tol:e}"
    )))
}

/// `[(p+q−1)!]² · ‖g₀‖²` for `g₀ = (1−z²)^{−(p+q)}` from `A²_α` to `A²_{α+2p+2q}`.
pub fn domination_upper_bound(p: usize, q: usize, alpha: &ExactScalar) -> Result<ExactScalar> {
    let c = KoebeClosedForm::new(p, q)?;
    let beta = alpha + int(2 * (p + q) as i64);
    let g0 = g0_mult_norm_sq(alpha, &beta)?;
    let f = ExactScalar::from_integer(c.domination_constant());
    Ok(&f * &f * g0)
}

/// Checks `|S_κ^{[p,q]}(z)| |1−z²|^{p+q} ≤ (p+q−1)! + 1e−12` at every point.
pub fn pointwise_domination_check(p: usize, q: usize, points: &[Complex64]) -> Result<bool> {
    let c = KoebeClosedForm::new(p, q)?;
    let bound = c.domination_constant().to_f64().expect("finite");
    let t = c.tq();
    let pre = c.prefactor.to_f64().expect("finite").abs();
    Ok(points.iter().all(|&z| {
        let z2 = z * z;
        // the pole factor cancels analytically
        let v = pre * z.norm().powi(c.monomial_power as i32) * t.eval_complex(z2).norm();
        v <= bound + 1e-12
    }))
}

/// Polar grid with radii `i/radial` for `i < radial` and `angular` angles.
pub fn polar_points(radial: usize, angular: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(radial * angular);
    for i in 0..radial {
        let r = i as f64 / radial as f64;
        for j in 0..angular {
            out.push(Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / angular as f64));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Budget {
    pub time: Duration,
    /// `(r, N)` points for the Rayleigh maximizer, tried in order; `K = 2N`.
    pub rayleigh: Vec<(f64, usize)>,
    /// `(λ − (α/2 + 1), r)` points for the test family.
    pub test_family: Vec<(f64, f64)>,
    pub max_iterations: usize,
}

impl Budget {
    pub fn standard(time: Duration) -> Self {
        Self {
            time,
            rayleigh: vec![(0.9, 250), (0.99, 1000), (0.995, 2000), (0.999, 4000)],
            test_family: vec![(0.05, 0.9999), (0.025, 0.9999), (0.01, 0.99999)],
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum TraceEntry {
    Rayleigh {
        r: f64,
        n: usize,
        k: usize,
        value: f64,
        iterations: usize,
        residual: f64,
        converged: bool,
    },
    TestFamily {
        lambda: f64,
        r: f64,
        value: f64,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundParameters {
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub iterations: usize,
    pub residual: f64,
    /// Always zero: the projected quotient needs no symbol-tail correction.
    pub tail_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: usize,
    pub q: usize,
    pub alpha: String,
    pub lower: f64,
    pub upper: f64,
    /// `√𝒩`; equals `upper` for Koebe problems.
    pub target: Option<f64>,
    /// `𝒩` as `num/den`.
    pub target_sq_exact: Option<String>,
    pub gap: f64,
    pub lower_source: String,
    pub parameters: Option<BoundParameters>,
    pub budget_exhausted: bool,
    pub trace: Vec<TraceEntry>,
}

/// Exact upper bound and the best certified lower bound found within `budget`.
pub fn sandwich(problem: &MultiplierProblem, budget: &Budget) -> Result<BoundReport> {
    let Some((p, q, alpha_exact)) = problem.koebe.clone() else {
        return domain("sandwich needs a Koebe Schwarzian problem");
    };
    let start = Instant::now();
    let deadline = start + budget.time;
    let upper_sq = domination_upper_bound(p, q, &alpha_exact)?;
    let upper = to_f64(&upper_sq).sqrt();

    let mut trace = Vec::new();
    let mut lower = 0.0_f64;
    let mut lower_source = String::from("none");
    let mut parameters = None;
    let mut exhausted = false;

    for &(shift, r) in &budget.test_family {
        let lambda = problem.alpha / 2.0 + 1.0 + shift;
        match test_family_quotient(p, q, problem.alpha, lambda, r) {
            Ok(v) => {
                let value = v.sqrt();
                trace.push(TraceEntry::TestFamily { lambda, r, value });
                if value > lower {
                    lower = value;
                    lower_source = "test_family".into();
                }
            }
            Err(e) => trace.push(TraceEntry::Skipped {
                reason: format!("test family lambda={lambda} r={r}: {e}"),
            }),
        }
    }

    for &(r, n) in &budget.rayleigh {
        if Instant::now() >= deadline {
            exhausted = true;
            trace.push(TraceEntry::Skipped {
                reason: format!("rayleigh r={r} N={n}: time budget exhausted"),
            });
            continue;
        }
        let cfg = PowerIteration {
            tolerance: 1e-12,
            max_iterations: budget.max_iterations,
            deadline: Some(deadline),
        };
        let k = 2 * n;
        let out = certified_lower_bound(problem, r, n, k, &cfg)?;
        if !out.converged && Instant::now() >= deadline {
            exhausted = true;
        }
        trace.push(TraceEntry::Rayleigh {
            r,
            n,
            k,
            value: out.value,
            iterations: out.iterations,
            residual: out.residual,
            converged: out.converged,
        });
        if out.value > lower {
            lower = out.value;
            lower_source = "rayleigh".into();
            parameters = Some(BoundParameters {
                r,
                n,
                k,
                iterations: out.iterations,
                residual: out.residual,
                tail_slack: 0.0,
            });
        }
    }

    Ok(BoundReport {
        p,
        q,
        alpha: format_rational(&alpha_exact),
        lower,
        upper,
        target: Some(upper),
        target_sq_exact: Some(format_rational(&upper_sq)),
        gap: (upper - lower) / upper,
        lower_source,
        parameters,
        budget_exhausted: exhausted,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{ratio, sharp_constant};
    use proptest::prelude::*;

    fn quick() -> PowerIteration {
        PowerIteration {
            tolerance: 1e-13,
            max_iterations: 5_000,
            deadline: None,
        }
    }

    fn series(c: &[f64]) -> UniSeries<Complex64> {
        UniSeries::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn constant_symbol_has_norm_one() {
        let pr = MultiplierProblem::general(series(&[1.0]), 0.0, 3.0).unwrap();
        for n in [0, 1, 5, 40] {
            let v = rayleigh_lower_bound(&pr, n, n, 1.0, &quick()).unwrap().value;
            assert!((v - 1.0).abs() < 1e-12, "N={n}: {v}");
        }
    }

    #[test]
    fn monomial_symbol_single_coefficient() {
        // ‖z‖_2 / ‖1‖_0 = √(w^{(2)}_1) = √(1/4)
        let pr = MultiplierProblem::general(series(&[0.0, 1.0]), 0.0, 2.0).unwrap();
        let v = rayleigh_lower_bound(&pr, 0, 1, 1.0, &quick()).unwrap().value;
        let w = bergman_weights_f64(2.0, 1).unwrap()[1];
        assert_eq!(w, 0.25);
        assert!((v - w.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn projected_quotient_matches_dense_eigenvalue() {
        // small case against a dense Gram matrix and Jacobi eigenvalues
        let g = [0.3, -1.2, 0.7, 0.25];
        let (alpha, beta, n, k) = (0.5, 3.0, 4usize, 6usize);
        let pr = MultiplierProblem::general(series(&g), alpha, beta).unwrap();
        let v = rayleigh_lower_bound(&pr, n, k, 1.0, &quick()).unwrap().value;
        let wa = bergman_weights_f64(alpha, n).unwrap();
        let wb = bergman_weights_f64(beta, k).unwrap();
        let coef = |m: usize, j: usize| if m >= j && m - j < g.len() { g[m - j] } else { 0.0 };
        let mut a = vec![vec![0.0; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let s: f64 = (0..=k).map(|m| coef(m, i) * coef(m, j) * wb[m]).sum();
                a[i][j] = s / (wa[i] * wa[j]).sqrt();
            }
        }
        let top = jacobi_max_eigenvalue(a);
        assert!((v * v - top).abs() < 1e-10 * top, "{} vs {top}", v * v);
    }

    fn jacobi_max_eigenvalue(mut a: Vec<Vec<f64>>) -> f64 {
        let n = a.len();
        for _ in 0..100 {
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for row in a.iter_mut() {
                        let (x, y) = (row[p], row[q]);
                        row[p] = c * x - s * y;
                        row[q] = s * x + c * y;
                    }
                    for j in 0..n {
                        let (x, y) = (a[p][j], a[q][j]);
                        a[p][j] = c * x - s * y;
                        a[q][j] = s * x + c * y;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).fold(f64::MIN, f64::max)
    }

    #[test]
    fn koebe_float_coefficients_match_exact_series() {
        for (p, q) in [(1, 1), (2, 1), (3, 2), (4, 4)] {
            let c = KoebeClosedForm::new(p, q).unwrap();
            let exact = c.to_series(40);
            let float = koebe_coefficients_f64(&c, 40);
            for (e, f) in exact.coeffs().iter().zip(&float) {
                let e = to_f64(e);
                assert!((e - f).abs() <= 1e-12 * e.abs().max(1.0));
            }
        }
    }

    #[test]
    fn zero_dilation_gives_constant_term() {
        let pr = MultiplierProblem::koebe(1, 1, &int(0)).unwrap();
        let v = certified_lower_bound(&pr, 0.0, 10, 20, &quick()).unwrap().value;
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn koebe_lower_bounds_stay_below_target_and_grow() {
        let pr = MultiplierProblem::koebe(1, 1, &int(0)).unwrap();
        let target = 1.875f64.sqrt();
        let a = certified_lower_bound(&pr, 0.9, 120, 240, &quick()).unwrap().value;
        let b = certified_lower_bound(&pr, 0.99, 120, 240, &quick()).unwrap().value;
        let c = certified_lower_bound(&pr, 0.99, 240, 480, &quick()).unwrap().value;
        assert!(a <= b + 1e-9 && b <= c + 1e-9, "{a} {b} {c}");
        assert!(c <= target + 1e-9 && c > 1.15);
    }

    #[test]
    fn rayleigh_is_nondecreasing_in_degree() {
        let pr = MultiplierProblem::koebe(2, 1, &ratio(1, 2)).unwrap();
        let mut last = 0.0;
        for n in [4, 16, 64, 128] {
            let v = rayleigh_lower_bound(&pr, n, 2 * n, 0.95, &quick()).unwrap().value;
            assert!(v >= last - 1e-9, "N={n}");
            last = v;
        }
        assert!(last <= to_f64(&sharp_constant(&ratio(1, 2), 2, 1).unwrap()).sqrt() + 1e-9);
    }

    #[test]
    fn lower_bounds_never_exceed_sharp_constant() {
        for alpha in [0, 1, 2] {
            for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
                let a = int(alpha);
                let pr = MultiplierProblem::koebe(p, q, &a).unwrap();
                let v = certified_lower_bound(&pr, 0.97, 150, 300, &quick()).unwrap().value;
                let s = to_f64(&sharp_constant(&a, p, q).unwrap()).sqrt();
                assert!(v <= s + 1e-9, "({alpha},{p},{q}): {v} > {s}");
            }
        }
    }

    #[test]
    fn test_family_window_and_values() {
        assert!(matches!(test_family_quotient(1, 1, 0.0, 1.0, 0.9), Err(Error::Domain(_))));
        assert!(matches!(test_family_quotient(1, 1, 0.0, 1.5, 0.9), Err(Error::Domain(_))));
        assert!(test_family_quotient(1, 1, 0.0, 1.05, 0.1).unwrap() > 0.0);
        // finite-r values approach the limit 7.5/(λ(λ+1))² slowly, like (1−r)^{2λ−2}
        let v = test_family_quotient(1, 1, 0.0, 1.05, 0.9999).unwrap();
        assert!(v < 1.875 && v > 0.75 * 1.875, "{v}");
        let mut last = 0.0;
        for r in [0.9, 0.99, 0.999] {
            let v = test_family_quotient(1, 1, 0.0, 1.025, r).unwrap();
            assert!(v >= last - 1e-3);
            last = v;
        }
    }

    #[test]
    fn test_family_limit_away_from_window_edge() {
        // for p = q = 1, α = 0 the quotient of the two leading asymptotics is
        // [Γ(6)/(2⁵Γ(λ+2)²)] / [Γ(2)/(2Γ(λ)²)] = 7.5 / (λ(λ+1))²
        let lambda: f64 = 1.45;
        let limit = 7.5 / (lambda * (lambda + 1.0)).powi(2);
        let v = test_family_quotient(1, 1, 0.0, lambda, 0.99999).unwrap();
        assert!((v / limit - 1.0).abs() < 0.01, "{v} vs {limit}");
    }

    #[test]
    fn domination_examples() {
        assert_eq!(domination_upper_bound(1, 1, &int(0)).unwrap(), ratio(15, 8));
        assert_eq!(domination_upper_bound(2, 1, &int(0)).unwrap(), ratio(35, 4));
        for alpha in 0..=2 {
            for p in 1..=4 {
                for q in 1..=4 {
                    let a = int(alpha);
                    assert_eq!(
                        domination_upper_bound(p, q, &a).unwrap(),
                        sharp_constant(&a, p, q).unwrap()
                    );
                }
            }
        }
        for alpha in [int(0), ratio(1, 2), int(1), int(2)] {
            // 36 𝒩_{α,1,1} = 36(α+3)(α+5)/((α+2)(α+4))
            let lhs = domination_upper_bound(1, 1, &alpha).unwrap() * int(36);
            let rhs = int(36) * (&alpha + int(3)) * (&alpha + int(5))
                / ((&alpha + int(2)) * (&alpha + int(4)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pointwise_domination_examples() {
        assert!(pointwise_domination_check(1, 1, &[Complex64::new(0.0, 0.0)]).unwrap());
        assert!(pointwise_domination_check(1, 1, &[Complex64::new(0.0, 0.9)]).unwrap());
        for p in 1..=3 {
            for q in 1..=3 {
                assert!(pointwise_domination_check(p, q, &polar_points(100, 100)).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn domination_holds_at_random_points(p in 1usize..=3, q in 1usize..=3, r in 0.0f64..1.0, t in 0.0f64..6.3) {
            prop_assert!(pointwise_domination_check(p, q, &[Complex64::from_polar(r, t)]).unwrap());
        }
    }

    #[test]
    fn degenerate_budget_keeps_order() {
        let pr = MultiplierProblem::koebe(1, 1, &int(0)).unwrap();
        let budget = Budget {
            time: Duration::from_secs(30),
            rayleigh: vec![(0.5, 8)],
            test_family: vec![],
            max_iterations: 1000,
        };
        let rep = sandwich(&pr, &budget).unwrap();
        assert!(rep.lower <= rep.upper + 1e-9);
        assert!(rep.gap > 0.1);
        assert_eq!(rep.target_sq_exact.as_deref(), Some("15/8"));
        assert_eq!(rep.target, Some(rep.upper));
    }

    #[test]
    fn sandwich_rejects_general_symbols() {
        let pr = MultiplierProblem::general(series(&[1.0]), 0.0, 1.0).unwrap();
        assert!(sandwich(&pr, &Budget::standard(Duration::from_secs(1))).is_err());
        assert!(MultiplierProblem::koebe(1, 1, &int(-1)).is_err());
        assert!(MultiplierProblem::general(series(&[1.0]), 1.0, 1.0).is_err());
    }
}
