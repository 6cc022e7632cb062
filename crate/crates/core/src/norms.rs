//! Weighted Bergman norms through the Taylor-coefficient formula
//! `‖φ‖²_α = Σ n!Γ(α+2)/Γ(n+α+2) |a_n|²`, the norm series of the test family
//! `(√r z)^Θ (1 − r z²)^{−λ}` with its `r → 1⁻` asymptotics, and grid
//! estimates of growth-space norms `sup |φ(z)| (1−|z|²)^γ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exactcore::{factorial, int, ExactScalar};
use crate::gamma::ln_gamma;
use crate::schwarzian::{higher_schwarzian, CatalogId, FunctionSpec, KoebeClosedForm};
use crate::series::{Coeff, UniSeries};
use crate::sum::CompensatedSum;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("alpha must exceed -1 (got {alpha})"));
    }
    Ok(())
}

/// `w_m = m!Γ(α+2)/Γ(m+α+2) = Π_{k=1}^m k/(k+α+1)` for `m ≤ order`.
pub fn bergman_weights_f64(alpha: f64, order: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut w = Vec::with_capacity(order + 1);
    let mut acc = 1.0;
    w.push(acc);
    for k in 1..=order {
        acc *= k as f64 / (k as f64 + alpha + 1.0);
        w.push(acc);
    }
    Ok(w)
}

pub fn bergman_weights_exact(alpha: &ExactScalar, order: usize) -> Result<Vec<ExactScalar>> {
    if *alpha <= -int(1) {
        return domain("alpha must exceed -1");
    }
    let mut w = Vec::with_capacity(order + 1);
    let mut acc = BigRational::one();
    w.push(acc.clone());
    for k in 1..=order {
        let kq = int(k as i64);
        acc = acc * &kq / (&kq + alpha + int(1));
        w.push(acc.clone());
    }
    Ok(w)
}

/// Bergman weights for one `α`, exact when `α` is rational.
#[derive(Debug, Clone)]
pub struct BergmanWeightTable {
    pub alpha: f64,
    pub weights: Vec<f64>,
    pub exact: Option<Vec<ExactScalar>>,
}

impl BergmanWeightTable {
    pub fn float(alpha: f64, order: usize) -> Result<Self> {
        Ok(Self {
            alpha,
            weights: bergman_weights_f64(alpha, order)?,
            exact: None,
        })
    }

    pub fn exact(alpha: &ExactScalar, order: usize) -> Result<Self> {
        let exact = bergman_weights_exact(alpha, order)?;
        Ok(Self {
            alpha: crate::exactcore::to_f64(alpha),
            weights: exact.iter().map(crate::exactcore::to_f64).collect(),
            exact: Some(exact),
        })
    }
}

/// Coefficient-growth certificate `|a_n| ≤ C (n+1)^s ρ^n` with `ρ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayCertificate {
    pub c: f64,
    pub s: f64,
    pub rho: f64,
}

impl DecayCertificate {
    /// Upper bound for `Σ_{n>N} w_n C² (n+1)^{2s} ρ^{2n}`, using `w_n ≤ w_{N+1}`.
    pub fn tail_bound(&self, order: usize, weight_next: f64) -> Result<f64> {
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::ToleranceUnachievable(format!(
                "decay certificate needs rho < 1 (got {})",
                self.rho
            )));
        }
        let rho2 = self.rho * self.rho;
        let term = |n: usize| ((n + 1) as f64).powf(2.0 * self.s) * rho2.powi(n as i32);
        let ratio = |n: usize| ((n + 2) as f64 / (n + 1) as f64).powf(2.0 * self.s) * rho2;
        // The term ratio decreases to ρ² for s ≥ 0 and is at most ρ² for s < 0;
        // sum explicitly until it drops below a fixed q < 1.
        let target = 0.5 * (1.0 + rho2);
        let mut sum = CompensatedSum::default();
        let mut n = order + 1;
        while ratio(n) > target {
            sum.add(term(n));
            n += 1;
        }
        let q = ratio(n).max(rho2);
        sum.add(term(n) / (1.0 - q));
        Ok(weight_next * self.c * self.c * sum.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BergmanNormSq {
    /// `Σ_{n≤N} w_n |a_n|²`, always a lower bound for `‖φ‖²_α`.
    pub partial: f64,
    /// Upper bound on the omitted tail, when a decay certificate was supplied.
    pub certified_tail: Option<f64>,
}

pub fn bergman_norm_sq<T: Coeff>(
    phi: &UniSeries<T>,
    alpha: f64,
    certificate: Option<&DecayCertificate>,
) -> Result<BergmanNormSq> {
    let n = phi.order();
    let w = bergman_weights_f64(alpha, n + 1)?;
    let mut acc = CompensatedSum::default();
    for (c, wt) in phi.coeffs().iter().zip(&w) {
        acc.add(wt * c.abs_sq());
    }
    let certified_tail = certificate.map(|c| c.tail_bound(n, w[n + 1])).transpose()?;
    Ok(BergmanNormSq {
        partial: acc.value(),
        certified_tail,
    })
}

/// Exact `Σ_{n≤N} w_n a_n²` for a real rational series and rational `α`.
pub fn bergman_norm_sq_exact(phi: &UniSeries<ExactScalar>, alpha: &ExactScalar) -> Result<ExactScalar> {
    let w = bergman_weights_exact(alpha, phi.order())?;
    Ok(phi
        .coeffs()
        .iter()
        .zip(&w)
        .fold(BigRational::from_integer(0.into()), |acc, (c, wt)| acc + wt * c * c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `2λ < α + 2`: the norm stays bounded as `r → 1⁻`.
    Subcritical,
    /// `2λ = α + 2`: neither asymptotic case applies.
    Critical,
    /// `2λ > α + 2`: the norm grows like `(1−r²)^{−(2λ−α−2)}`.
    Supercritical,
}

/// Parameters of `(√r z)^Θ (1 − r z²)^{−λ}` measured in `A²_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFamilyParams {
    pub r: f64,
    pub lambda: f64,
    pub theta_exp: usize,
    pub alpha: f64,
}

impl TestFamilyParams {
    pub fn new(r: f64, lambda: f64, theta_exp: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(lambda > 0.0) {
            return domain(format!("lambda must be positive (got {lambda})"));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::ToleranceUnachievable(format!("need 0 ≤ r < 1 (got {r})")));
        }
        Ok(Self {
            r,
            lambda,
            theta_exp,
            alpha,
        })
    }

    pub fn branch(&self) -> Branch {
        let two_lambda = 2.0 * self.lambda;
        let edge = self.alpha + 2.0;
        if two_lambda < edge {
            Branch::Subcritical
        } else if two_lambda == edge {
            Branch::Critical
        } else {
            Branch::Supercritical
        }
    }
}

/// Value of a positive series together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub partial: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl SeriesValue {
    pub fn upper(&self) -> f64 {
        self.partial + self.tail_bound
    }
}

/// Sums `Σ u_n` with `u_0` given and `u_{n+1} = u_n · ratio(n)`, stopping once
/// `u_n · q_n/(1 − q_n) < tol`, where `q_n ≥ sup_{m≥n} ratio(m)` is supplied.
pub(crate) fn sum_ratio_series(
    first: f64,
    ratio: impl Fn(usize) -> f64,
    ratio_sup: impl Fn(usize) -> f64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesValue> {
    let mut acc = CompensatedSum::default();
    let mut u = first;
    for n in 0..max_terms {
        acc.add(u);
        let q = ratio_sup(n);
        if q < 1.0 {
            let tail = u * q / (1.0 - q);
            if tail < tol {
                return Ok(SeriesValue {
                    partial: acc.value(),
                    tail_bound: tail,
                    terms: n + 1,
                });
            }
        }
        u *= ratio(n);
    }
    Err(Error::ToleranceUnachievable(format!(
        "series did not reach tolerance {tol:e} within {max_terms} terms"
    )))
}

const MAX_SERIES_TERMS: usize = 50_000_000;

/// `‖(√r z)^Θ (1 − r z²)^{−λ}‖²_α` with a certified remainder.
///
/// The terms are `u_n = r^Θ w^{(α)}_{2n+Θ} [Γ(n+λ)/(n!Γ(λ))]² r^{2n}`, generated
/// by their ratio so no Gamma function is evaluated.
pub fn test_family_series(params: &TestFamilyParams, tol: f64) -> Result<SeriesValue> {
    let TestFamilyParams {
        r,
        lambda,
        theta_exp,
        alpha,
    } = *params;
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    let th = theta_exp as f64;
    let w_theta = bergman_weights_f64(alpha, theta_exp)?[theta_exp];
    let first = r.powi(theta_exp as i32) * w_theta;
    let r2 = r * r;
    let ratio = |n: usize| {
        let m = 2.0 * n as f64 + th;
        let weight = (m + 1.0) * (m + 2.0) / ((m + alpha + 2.0) * (m + alpha + 3.0));
        let g = (n as f64 + lambda) / (n as f64 + 1.0);
        weight * g * g * r2
    };
    // The weight factor is below 1 for α > −1, and ((n+λ)/(n+1))² is monotone
    // toward 1, so this is a nonincreasing majorant of the ratio beyond n.
    let ratio_sup = |n: usize| {
        let g = (n as f64 + lambda) / (n as f64 + 1.0);
        r2 * (g * g).max(1.0)
    };
    sum_ratio_series(first, ratio, ratio_sup, tol, MAX_SERIES_TERMS)
}

pub fn test_family_norm_sq(params: &TestFamilyParams, tol: f64) -> Result<f64> {
    Ok(test_family_series(params, tol)?.partial)
}

/// `Γ(α+2)Γ(2λ−α−2) / (2^{α+1} Γ(λ)²)`: as `r → 1⁻`,
/// `‖(√r z)^Θ (1 − r z²)^{−λ}‖²_α ≈ constant / (1−r²)^{2λ−α−2}`.
pub fn asymptotic_constant(alpha: f64, lambda: f64, _theta_exp: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let excess = 2.0 * lambda - alpha - 2.0;
    if !(excess > 0.0) {
        return domain(format!("asymptotics need 2λ > α + 2 (got λ={lambda}, α={alpha})"));
    }
    let ln = ln_gamma(alpha + 2.0) + ln_gamma(excess)
        - (alpha + 1.0) * std::f64::consts::LN_2
        - 2.0 * ln_gamma(lambda);
    Ok(ln.exp())
}

/// `test_family_norm_sq · (1−r²)^{2λ−α−2} / asymptotic_constant`, with `Θ = 0`.
pub fn asymptotic_ratio(alpha: f64, lambda: f64, r: f64) -> Result<f64> {
    let params = TestFamilyParams::new(r, lambda, 0, alpha)?;
    let value = test_family_norm_sq(&params, 1e-12)?;
    let excess = 2.0 * lambda - alpha - 2.0;
    Ok(value * (1.0 - r * r).powf(excess) / asymptotic_constant(alpha, lambda, 0)?)
}

pub const BOUNDEDNESS_GRID: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// In the subcritical branch the `Θ = 0` norms stay bounded in `r`: returns
/// whether `max/min < 10` over the grid, and the maximum as an empirical `M`.
pub fn subcritical_bounded_check(alpha: f64, lambda: f64, r_grid: &[f64]) -> Result<(bool, f64)> {
    if r_grid.is_empty() {
        return domain("empty r grid");
    }
    let probe = TestFamilyParams::new(r_grid[0], lambda, 0, alpha)?;
    if probe.branch() != Branch::Subcritical {
        return domain(format!(
            "boundedness needs 2λ < α + 2 (got λ={lambda}, α={alpha})"
        ));
    }
    let values = r_grid
        .iter()
        .map(|&r| test_family_norm_sq(&TestFamilyParams::new(r, lambda, 0, alpha)?, 1e-12))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    Ok((max.is_finite() && max / min < 10.0, max))
}

/// Polar evaluation grid: `angular` equally spaced angles from 0, and `radial`
/// radii from 0 whose distances `1 − r` shrink geometrically from 1 to `outer_gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub outer_gap: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial: 160,
            angular: 64,
            outer_gap: 1e-7,
        }
    }
}

impl GridSpec {
    fn gap(&self, i: f64) -> f64 {
        self.outer_gap.powf(i / (self.radial - 1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthNormEstimate {
    pub gamma: f64,
    /// Largest `|φ(z)|(1−|z|²)^γ` seen; a lower bound for the growth norm.
    pub lower_estimate: f64,
    pub argmax: (f64, f64),
    pub grid: GridSpec,
    /// Estimate after the base grid and after each refinement round.
    pub history: Vec<f64>,
    /// Set when the outermost ring dominates and keeps growing toward the circle.
    pub diverging: bool,
}

#[derive(Clone, Copy)]
struct Sample {
    value: f64,
    gap_index: f64,
    theta: f64,
}

fn better(a: Sample, b: Sample) -> Sample {
    // ties go to the smaller (gap_index, theta) so the result does not depend on
    // evaluation order
    if b.value > a.value
        || (b.value == a.value && (b.gap_index, b.theta) < (a.gap_index, a.theta))
    {
        b
    } else {
        a
    }
}

/// Grid estimate of `‖φ‖_{B_γ} = sup |φ(z)|(1−|z|²)^γ`. `modulus` returns `|φ(z)|`.
pub fn growth_norm(
    modulus: &(dyn Fn(Complex64) -> f64 + Sync),
    gamma: f64,
    grid: &GridSpec,
) -> GrowthNormEstimate {
    assert!(grid.radial >= 2 && grid.angular >= 1, "grid too small");
    let eval = |gap_index: f64, theta: f64| -> Sample {
        let r = 1.0 - grid.gap(gap_index);
        let gap = 1.0 - r;
        let weight = (gap * (1.0 + r)).powf(gamma);
        let v = modulus(Complex64::from_polar(r, theta)) * weight;
        Sample {
            value: if v.is_nan() { f64::NEG_INFINITY } else { v },
            gap_index,
            theta,
        }
    };
    let start = Sample {
        value: f64::NEG_INFINITY,
        gap_index: 0.0,
        theta: 0.0,
    };

    let ring_max = |i: usize| -> Sample {
        (0..grid.angular)
            .map(|j| eval(i as f64, 2.0 * PI * j as f64 / grid.angular as f64))
            .fold(start, better)
    };
    let rings: Vec<Sample> = (0..grid.radial).into_par_iter().map(ring_max).collect();
    let mut best = rings.iter().copied().fold(start, better);
    let mut history = vec![best.value];

    let mut di = 1.0;
    let mut dt = 2.0 * PI / grid.angular as f64;
    for _ in 0..2 {
        let center = best;
        let local: Vec<Sample> = (0..=8)
            .into_par_iter()
            .map(|a| {
                let gi = (center.gap_index + di * (a as f64 - 4.0) / 4.0).clamp(0.0, (grid.radial - 1) as f64);
                (0..=8)
                    .map(|b| eval(gi, center.theta + dt * (b as f64 - 4.0) / 4.0))
                    .fold(start, better)
            })
            .collect();
        // refinements only move the argmax on strict improvement
        let candidate = local.into_iter().fold(start, better);
        if candidate.value > best.value {
            best = candidate;
        }
        history.push(best.value);
        di /= 4.0;
        dt /= 4.0;
    }

    let outer = rings[grid.radial - 1].value;
    let middle = rings[grid.radial / 2].value;
    let diverging = best.gap_index >= (grid.radial - 1) as f64 - 1.0 && outer > 1.5 * middle;

    GrowthNormEstimate {
        gamma,
        lower_estimate: best.value,
        argmax: (1.0 - grid.gap(best.gap_index), best.theta),
        grid: *grid,
        history,
        diverging,
    }
}

/// Growth-norm estimate of a Koebe Schwarzian in `B_{p+q}`.
pub fn koebe_growth_estimate(p: usize, q: usize, grid: &GridSpec) -> Result<GrowthNormEstimate> {
    let c = KoebeClosedForm::new(p, q)?;
    Ok(growth_norm(&|z| c.evaluate(z).norm(), (p + q) as f64, grid))
}

/// Series order used for catalog functions without a closed form.
pub const BLOCH_SERIES_ORDER: usize = 160;
const BLOCH_TRUNCATION: f64 = 1e-7;

/// Largest radius at which the truncated series is trusted to `BLOCH_TRUNCATION`,
/// extrapolating the last coefficients as `|c_k| ≲ c*(k/M)^s`.
fn trusted_radius(series: &UniSeries<Complex64>, s: usize) -> f64 {
    let m = series.order();
    let c_star = series.coeffs()[m.saturating_sub(8)..]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if c_star == 0.0 {
        return 1.0;
    }
    let fact_s = (1..=s).map(|k| k as f64).product::<f64>();
    let err = |r: f64| c_star * r.powi(m as i32 + 1) * fact_s / (1.0 - r).powi(s as i32 + 1);
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if err(mid) <= BLOCH_TRUNCATION {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochCheck {
    pub estimate: GrowthNormEstimate,
    /// `√((2p−1)!(2q−1)!)`.
    pub bound: f64,
    /// Largest radius sampled, below 1 when the function is evaluated by series.
    pub radius_cap: f64,
}

impl BlochCheck {
    pub fn holds(&self) -> bool {
        self.estimate.lower_estimate <= self.bound + 1e-9
    }
}

/// Growth-norm estimate of `S_f^{[p,q]}` in `B_{p+q}` against `√((2p−1)!(2q−1)!)`.
/// Koebe rotations use the closed form; other catalog entries are evaluated by
/// series on a radially capped grid.
pub fn bloch_bound_check(f: &FunctionSpec, p: usize, q: usize, grid: &GridSpec) -> Result<BlochCheck> {
    if p == 0 || q == 0 {
        return domain("p and q must be at least 1");
    }
    let bound = (factorial(2 * p - 1) * factorial(2 * q - 1))
        .to_f64()
        .expect("finite")
        .sqrt();
    let gamma = (p + q) as f64;
    let (estimate, radius_cap) = match f.catalog_id() {
        Some(CatalogId::Koebe) => (koebe_growth_estimate(p, q, grid)?, 1.0 - grid.outer_gap),
        Some(CatalogId::RotatedKoebe(theta)) => {
            let c = KoebeClosedForm::new(p, q)?;
            let rot = Complex64::from_polar(1.0, theta);
            // |S_{κ_θ}(z)| = |S_κ(e^{iθ} z)|
            (growth_norm(&|z| c.evaluate(rot * z).norm(), gamma, grid), 1.0 - grid.outer_gap)
        }
        _ => {
            let series = higher_schwarzian::<Complex64>(f, p, q, BLOCH_SERIES_ORDER)?;
            let cap = trusted_radius(&series, p + q);
            let capped = GridSpec {
                outer_gap: (1.0 - cap).max(grid.outer_gap),
                ..*grid
            };
            let modulus = |z: Complex64| series.eval(z).norm();
            (growth_norm(&modulus, gamma, &capped), 1.0 - capped.outer_gap)
        }
    };
    Ok(BlochCheck {
        estimate,
        bound,
        radius_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::ratio;
    use crate::quad::disk_bergman_norm_sq;

    #[test]
    fn weights_start_at_one_and_decrease() {
        for alpha in [-0.5, 0.0, 1.0, 4.0, 7.3] {
            let w = bergman_weights_f64(alpha, 200).unwrap();
            assert_eq!(w[0], 1.0);
            assert!(w.windows(2).all(|p| p[1] < p[0]));
        }
        let w = bergman_weights_exact(&int(2), 3).unwrap();
        // m! Γ(4)/Γ(m+4)
        assert_eq!(w, vec![int(1), ratio(1, 4), ratio(1, 10), ratio(1, 20)]);
        assert!(bergman_weights_f64(-1.0, 3).is_err());
    }

    #[test]
    fn norm_examples() {
        let one = UniSeries::<ExactScalar>::one(0);
        assert_eq!(bergman_norm_sq(&one, 0.3, None).unwrap().partial, 1.0);
        let z = UniSeries::monomial(1, 1, int(1));
        assert_eq!(bergman_norm_sq_exact(&z, &int(0)).unwrap(), ratio(1, 2));
        assert!(bergman_norm_sq(&z, -1.0, None).is_err());
    }

    #[test]
    fn norm_of_inverse_square_grows_monotonically() {
        // (1−z²)^{−2} = Σ (n+1) z^{2n}; weight at α = 4 is 120 (2n)!/(2n+5)!
        let exact_term = |n: usize| {
            let m = 2.0 * n as f64;
            let n1 = n as f64 + 1.0;
            120.0 * n1 * n1 / ((m + 1.0) * (m + 2.0) * (m + 3.0) * (m + 4.0) * (m + 5.0))
        };
        let mut last = 0.0;
        for order in [2, 6, 10, 20, 40] {
            let s = UniSeries::from_fn(order, |k| if k % 2 == 0 { int((k / 2 + 1) as i64) } else { int(0) });
            let v = bergman_norm_sq(&s, 4.0, None).unwrap().partial;
            let direct: f64 = (0..=order / 2).map(exact_term).sum();
            assert!((v - direct).abs() < 1e-14);
            assert!(v > last);
            last = v;
        }
        let s10 = UniSeries::from_fn(10, |k| if k % 2 == 0 { int((k / 2 + 1) as i64) } else { int(0) });
        let v = bergman_norm_sq(&s10, 4.0, None).unwrap().partial;
        assert!((v - 1.33).abs() < 0.01, "{v}");
        let full: f64 = (0..200_000).map(exact_term).sum();
        assert!((full - 1.3629).abs() < 1e-4, "{full}");
    }

    #[test]
    fn certified_tail_brackets_the_geometric_series() {
        // φ = Σ ρ^n z^n, |a_n| ≤ 1 · (n+1)^0 ρ^n
        let rho: f64 = 0.7;
        let order = 30;
        let s = UniSeries::from_fn(order, |n| Complex64::new(rho.powi(n as i32), 0.0));
        let cert = DecayCertificate { c: 1.0, s: 0.0, rho };
        let v = bergman_norm_sq(&s, 0.0, Some(&cert)).unwrap();
        // α = 0: w_n = 1/(n+1); exact norm² = −log(1−ρ²)/ρ²
        let exact = -(1.0 - rho * rho).ln() / (rho * rho);
        let tail = v.certified_tail.unwrap();
        assert!(v.partial < exact && exact <= v.partial + tail + 1e-15);
        let cert_poly = DecayCertificate { c: 1.0, s: 2.0, rho: 0.99 };
        assert!(cert_poly.tail_bound(10, 1.0).unwrap().is_finite());
        assert!(DecayCertificate { c: 1.0, s: 0.0, rho: 1.0 }.tail_bound(3, 1.0).is_err());
    }

    #[test]
    fn test_family_matches_artanh() {
        for r in [0.1, 0.5, 0.9] {
            let p = TestFamilyParams::new(r, 1.0, 0, 0.0).unwrap();
            let v = test_family_norm_sq(&p, 1e-13).unwrap();
            let exact = r.atanh() / r;
            assert!((v - exact).abs() < 1e-12, "r={r}: {v} vs {exact}");
        }
        let p = TestFamilyParams::new(0.5, 1.0, 0, 0.0).unwrap();
        assert!((test_family_norm_sq(&p, 1e-13).unwrap() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn test_family_small_r_and_errors() {
        let p = TestFamilyParams::new(0.0, 2.5, 0, 1.5).unwrap();
        assert_eq!(test_family_norm_sq(&p, 1e-12).unwrap(), 1.0);
        assert!(matches!(
            TestFamilyParams::new(1.0, 1.0, 0, 0.0),
            Err(Error::ToleranceUnachievable(_))
        ));
        assert_eq!(TestFamilyParams::new(0.5, 1.0, 0, 0.0).unwrap().branch(), Branch::Critical);
        assert_eq!(TestFamilyParams::new(0.5, 0.9, 0, 0.0).unwrap().branch(), Branch::Subcritical);
    }

    #[test]
    fn test_family_with_theta_matches_coefficient_norm() {
        // (√r z)^Θ (1 − r z²)^{−λ} built coefficientwise then measured directly
        let (r, lambda, theta, alpha) = (0.6_f64, 1.7_f64, 3usize, 0.5_f64);
        let order = 400;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        let mut c = r.powf(theta as f64 / 2.0);
        let mut n = 0;
        while 2 * n + theta <= order {
            coeffs[2 * n + theta] = Complex64::new(c, 0.0);
            c *= (n as f64 + lambda) / (n as f64 + 1.0) * r;
            n += 1;
        }
        let direct = bergman_norm_sq(&UniSeries::new(coeffs), alpha, None).unwrap().partial;
        let p = TestFamilyParams::new(r, lambda, theta, alpha).unwrap();
        assert!((test_family_norm_sq(&p, 1e-14).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_constant_examples() {
        assert!((asymptotic_constant(0.0, 1.5, 0).unwrap() - 2.0 / PI).abs() < 1e-13);
        assert!((asymptotic_constant(0.0, 2.0, 0).unwrap() - 0.5).abs() < 1e-13);
        assert!(asymptotic_constant(0.0, 1.0, 0).is_err());
        let p = TestFamilyParams::new(0.999, 1.5, 0, 0.0).unwrap();
        let v = test_family_norm_sq(&p, 1e-12).unwrap() * (1.0 - 0.999 * 0.999);
        assert!((v / (2.0 / PI) - 1.0).abs() < 0.05);
    }

    #[test]
    fn subcritical_examples() {
        assert!(subcritical_bounded_check(4.0, 1.0, &BOUNDEDNESS_GRID).unwrap().0);
        assert!(subcritical_bounded_check(0.0, 0.9, &BOUNDEDNESS_GRID).unwrap().0);
        assert!(matches!(
            subcritical_bounded_check(0.0, 1.5, &BOUNDEDNESS_GRID),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn growth_norm_examples() {
        let grid = GridSpec { radial: 40, angular: 16, outer_gap: 1e-6 };
        let e = growth_norm(&|_| 1.0, 1.0, &grid);
        assert_eq!(e.lower_estimate, 1.0);
        assert_eq!(e.argmax, (0.0, 0.0));
        assert!(!e.diverging);

        let e = koebe_growth_estimate(1, 1, &GridSpec::default()).unwrap();
        assert!(e.lower_estimate <= 1.0 + 1e-12 && e.lower_estimate > 0.999, "{e:?}");
        let e = koebe_growth_estimate(2, 1, &GridSpec::default()).unwrap();
        assert!(e.lower_estimate <= 2.0 * (1.0 + 1e-12) && e.lower_estimate > 1.998, "{e:?}");

        // (1−z)^{−3} is not in B_1
        let e = growth_norm(&|z| (1.0 - z).powi(-3).norm(), 1.0, &grid);
        assert!(e.diverging);
    }

    #[test]
    fn growth_norm_is_deterministic() {
        let c = KoebeClosedForm::new(3, 2).unwrap();
        let grid = GridSpec { radial: 60, angular: 24, outer_gap: 1e-5 };
        let a = growth_norm(&|z| c.evaluate(z).norm(), 5.0, &grid);
        let b = growth_norm(&|z| c.evaluate(z).norm(), 5.0, &grid);
        assert_eq!(a, b);
    }

    #[test]
    fn bloch_examples() {
        let grid = GridSpec { radial: 80, angular: 32, outer_gap: 1e-6 };
        let cay = bloch_bound_check(&FunctionSpec::catalog(CatalogId::CayleyHalfplane), 2, 1, &grid).unwrap();
        assert_eq!(cay.estimate.lower_estimate, 0.0);
        let k = bloch_bound_check(&FunctionSpec::koebe(), 2, 2, &GridSpec::default()).unwrap();
        assert!((k.bound - 6.0).abs() < 1e-12);
        assert!(k.holds() && k.estimate.lower_estimate > 5.99);
        let k = bloch_bound_check(&FunctionSpec::koebe(), 2, 1, &GridSpec::default()).unwrap();
        assert!((k.bound - 6f64.sqrt()).abs() < 1e-12);
        assert!(k.holds() && k.estimate.lower_estimate > 1.99 && k.estimate.lower_estimate <= 2.0 * (1.0 + 1e-12));
        let s = bloch_bound_check(&FunctionSpec::catalog(CatalogId::Strip), 1, 1, &grid).unwrap();
        assert!(s.holds());
        assert!(s.radius_cap < 1.0 && s.estimate.lower_estimate > 0.3, "{s:?}");
    }

    #[test]
    fn coefficient_formula_matches_disk_quadrature() {
        let phi = UniSeries::new(vec![
            Complex64::new(0.5, -1.0),
            Complex64::new(2.0, 0.25),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.5, 0.75),
        ]);
        for alpha in [0.0, 1.0, 4.0] {
            let a = bergman_norm_sq(&phi, alpha, None).unwrap().partial;
            let b = disk_bergman_norm_sq(|z| phi.eval(z), alpha, 16, 16);
            assert!((a - b).abs() < 1e-12, "alpha={alpha}: {a} vs {b}");
        }
    }
}
