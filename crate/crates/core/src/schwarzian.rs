//! The function catalog and every Schwarzian object built from it: the
//! bivariate kernel `F(z,w)`, Grunsky coefficients, `G_f^{[p,q]}`, the
//! higher-order Schwarzians `S_f^{[p,q]}`, the classical `N_f` and `S_f`, and
//! the closed form of the Koebe Schwarzians.
//!
//! All series routines are generic over the coefficient backend; ask for
//! `BigRational` to stay exact, `Complex64` for float work. Requesting the
//! exact backend for a float-only function is a [`Error::BackendMismatch`].

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactcore::{
    factorial, format_rational, int, koebe_cd, parse_rational, ratio, tq_polynomial, ExactScalar,
    RationalPoly,
};
use crate::norms::bergman_weights_f64;
use crate::series::{divided_difference, BiSeries, Coeff, UniSeries};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogId {
    /// `z/(1−z)²`, `a_n = n`.
    Koebe,
    /// `z`.
    Identity,
    /// `z/(1−z)`, a Möbius map onto a half-plane.
    CayleyHalfplane,
    /// `½ log((1+z)/(1−z))`, onto a strip.
    Strip,
    /// `z − z²/2`, onto a parabola-bounded region.
    Parabola,
    /// `z/(1 − e^{iθ}z)²`.
    RotatedKoebe(f64),
}

impl CatalogId {
    pub const FIXED: [CatalogId; 5] = [
        CatalogId::Koebe,
        CatalogId::Identity,
        CatalogId::CayleyHalfplane,
        CatalogId::Strip,
        CatalogId::Parabola,
    ];

    pub fn name(&self) -> String {
        match self {
            CatalogId::Koebe => "koebe".into(),
            CatalogId::Identity => "identity".into(),
            CatalogId::CayleyHalfplane => "cayley_halfplane".into(),
            CatalogId::Strip => "strip".into(),
            CatalogId::Parabola => "parabola".into(),
            CatalogId::RotatedKoebe(t) => format!("rotated_koebe:{t}"),
        }
    }

    /// Accepts the names produced by [`CatalogId::name`].
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "koebe" => CatalogId::Koebe,
            "identity" => CatalogId::Identity,
            "cayley_halfplane" => CatalogId::CayleyHalfplane,
            "strip" => CatalogId::Strip,
            "parabola" => CatalogId::Parabola,
            other => {
                let theta = other
                    .strip_prefix("rotated_koebe:")
                    .and_then(|t| t.parse::<f64>().ok())
                    .filter(|t| t.is_finite())
                    .ok_or_else(|| Error::Parse(format!("unknown catalog function {other:?}")))?;
                CatalogId::RotatedKoebe(theta)
            }
        })
    }

    fn exact_rotation_sign(theta: f64) -> Option<i64> {
        let turns = theta / PI;
        if turns.rem_euclid(2.0) == 0.0 {
            Some(1)
        } else if (turns - 1.0).rem_euclid(2.0) == 0.0 {
            Some(-1)
        } else {
            None
        }
    }

    fn exact_coeff(&self, n: usize) -> Option<ExactScalar> {
        Some(match self {
            CatalogId::Koebe => int(n as i64),
            CatalogId::Identity => int((n == 1) as i64),
            CatalogId::CayleyHalfplane => int((n >= 1) as i64),
            CatalogId::Strip => {
                if n % 2 == 1 {
                    ratio(1, n as i64)
                } else {
                    int(0)
                }
            }
            CatalogId::Parabola => match n {
                1 => int(1),
                2 => ratio(-1, 2),
                _ => int(0),
            },
            CatalogId::RotatedKoebe(theta) => {
                let s = Self::exact_rotation_sign(*theta)?;
                let sign = if n >= 1 && (n - 1) % 2 == 1 { s } else { 1 };
                int(sign * n as i64)
            }
        })
    }

    fn float_coeff(&self, n: usize) -> Complex64 {
        match self {
            CatalogId::RotatedKoebe(_) if n == 0 => Complex64::new(0.0, 0.0),
            CatalogId::RotatedKoebe(theta) => Complex64::from_polar(n as f64, (n - 1) as f64 * theta),
            _ => self.exact_coeff(n).expect("fixed catalog entries are exact").to_complex(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A catalog entry known to be univalent.
    Catalog,
    /// User-supplied coefficients; univalence is not checked.
    Unverified,
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Catalog(CatalogId),
    Custom(Vec<ExactScalar>),
}

/// A normalized analytic function `f(z) = z + a_2 z² + …` on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    source: Source,
    label: String,
}

#[derive(Deserialize)]
struct CustomDoc {
    label: String,
    coefficients: Vec<serde_json::Value>,
}

impl FunctionSpec {
    pub fn catalog(id: CatalogId) -> Self {
        Self {
            label: id.name(),
            source: Source::Catalog(id),
        }
    }

    pub fn koebe() -> Self {
        Self::catalog(CatalogId::Koebe)
    }

    /// Custom function from `a_1, a_2, …`; `a_1` must be exactly 1.
    pub fn custom(label: impl Into<String>, coefficients: Vec<ExactScalar>) -> Result<Self> {
        if coefficients.first().is_none_or(|a1| !a1.is_one()) {
            return Err(Error::NotNormalized);
        }
        Ok(Self {
            label: label.into(),
            source: Source::Custom(coefficients),
        })
    }

    /// Parse `{"label": text, "coefficients": [a_1, a_2, ...]}` with each
    /// coefficient a `"num/den"` string or a JSON number.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CustomDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("coefficient file: {e}")))?;
        let coeffs = doc
            .coefficients
            .iter()
            .map(json_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::custom(doc.label, coeffs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn catalog_id(&self) -> Option<CatalogId> {
        match self.source {
            Source::Catalog(id) => Some(id),
            Source::Custom(_) => None,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self.source {
            Source::Catalog(_) => Provenance::Catalog,
            Source::Custom(_) => Provenance::Unverified,
        }
    }

    /// Whether the exact backend can represent this function.
    pub fn is_exact(&self) -> bool {
        match &self.source {
            Source::Catalog(id) => id.exact_coeff(1).is_some(),
            Source::Custom(_) => true,
        }
    }

    /// Highest available Taylor index, `None` when unlimited.
    pub fn max_order(&self) -> Option<usize> {
        match &self.source {
            Source::Catalog(_) => None,
            Source::Custom(c) => Some(c.len()),
        }
    }

    /// Taylor series `a_0 + a_1 z + … + a_L z^L` in the requested backend.
    pub fn taylor<T: Coeff>(&self, order: usize) -> Result<UniSeries<T>> {
        if let Some(max) = self.max_order() {
            if order > max {
                return domain(format!(
                    "{} supplies coefficients through z^{max}, but z^{order} is needed",
                    self.label
                ));
            }
        }
        let mut out = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let c = match &self.source {
                Source::Custom(c) => {
                    if n == 0 {
                        T::zero()
                    } else {
                        T::from_exact(&c[n - 1])
                    }
                }
                Source::Catalog(id) => match id.exact_coeff(n) {
                    Some(q) => T::from_exact(&q),
                    None => T::try_from_complex(id.float_coeff(n)).ok_or_else(|| {
                        Error::BackendMismatch(format!("{} has irrational coefficients", self.label))
                    })?,
                },
            };
            out.push(c);
        }
        Ok(UniSeries::new(out))
    }
}

fn json_rational(v: &serde_json::Value) -> Result<ExactScalar> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()).or_else(|_| {
            n.as_f64()
                .and_then(BigRational::from_float)
                .ok_or_else(|| Error::Parse(format!("bad coefficient {n}")))
        }),
        other => Err(Error::Parse(format!("coefficient must be a string or number, got {other}"))),
    }
}

/// `F(z,w) = log[(f(z)−f(w))/(z−w) · z/f(z) · w/f(w)]` through total degree `order`.
pub fn build_f<T: Coeff>(f: &FunctionSpec, order: usize) -> Result<BiSeries<T>> {
    let taylor = f.taylor::<T>(order + 1)?;
    kernel_from_taylor(&taylor)
}

/// The kernel `F` from a Taylor series of order `L`; the result has order `L − 1`.
pub fn kernel_from_taylor<T: Coeff>(taylor: &UniSeries<T>) -> Result<BiSeries<T>> {
    let dd = divided_difference(taylor)?;
    // f(t)/t = a_1 + a_2 t + …
    let f_over_t = UniSeries::new(taylor.coeffs()[1..].to_vec());
    let u = f_over_t.reciprocal()?;
    dd.mul(&BiSeries::outer(&u, &u)).log()
}

fn check_pq(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return domain(format!("p and q must be at least 1 (got p={p}, q={q})"));
    }
    Ok(())
}

/// `G_f^{[p,q]} = ∂^{p+q}F/∂z^p∂w^q` through total degree `order`.
pub fn g_pq<T: Coeff>(f: &FunctionSpec, p: usize, q: usize, order: usize) -> Result<BiSeries<T>> {
    check_pq(p, q)?;
    build_f::<T>(f, order + p + q)?.partial(p, q)
}

/// `S_f^{[p,q]}(z) = G_f^{[p,q]}(z,z)` through `z^order`.
pub fn higher_schwarzian<T: Coeff>(
    f: &FunctionSpec,
    p: usize,
    q: usize,
    order: usize,
) -> Result<UniSeries<T>> {
    Ok(g_pq::<T>(f, p, q, order)?.diagonal())
}

/// Every `S_f^{[p,q]}` with `p, q ≤ max_pq` from a single kernel build.
/// Entry `[p−1][q−1]` is `S_f^{[p,q]}` through `z^order`.
pub fn higher_schwarzian_grid<T: Coeff>(
    f: &FunctionSpec,
    max_pq: usize,
    order: usize,
) -> Result<Vec<Vec<UniSeries<T>>>> {
    let kernel = build_f::<T>(f, order + 2 * max_pq)?;
    (1..=max_pq)
        .map(|p| {
            (1..=max_pq)
                .map(|q| Ok(kernel.partial(p, q)?.diagonal().truncate(order)))
                .collect()
        })
        .collect()
}

/// Pre-Schwarzian `N_f = f″/f′` and Schwarzian `S_f = N_f′ − N_f²/2`.
pub fn classical_schwarzian<T: Coeff>(
    f: &FunctionSpec,
    order: usize,
) -> Result<(UniSeries<T>, UniSeries<T>)> {
    let taylor = f.taylor::<T>(order + 3)?;
    let d1 = taylor.derivative();
    let d2 = d1.derivative();
    let pre = d2.mul(&d1.truncate(order + 1).reciprocal()?);
    let half = T::one() / T::from_i64(2);
    let schwarz = pre.derivative().sub(&pre.truncate(order).mul(&pre.truncate(order)).scale(&half));
    Ok((pre.truncate(order), schwarz))
}

/// Grunsky coefficients `γ_{n,k}`: `F(z,w) = Σ γ_{n,k} z^k w^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrunskyTable<T> {
    order: usize,
    /// `entries[n−1][k−1] = γ_{n,k}`.
    entries: Vec<Vec<T>>,
}

impl<T: Coeff> GrunskyTable<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `γ_{n,k}` for `1 ≤ n, k ≤ N`.
    pub fn get(&self, n: usize, k: usize) -> &T {
        &self.entries[n - 1][k - 1]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.entries
    }
}

pub fn grunsky<T: Coeff>(f: &FunctionSpec, order: usize) -> Result<GrunskyTable<T>> {
    let kernel = build_f::<T>(f, 2 * order)?;
    let entries = (1..=order)
        .map(|n| (1..=order).map(|k| kernel.get(k, n).clone()).collect())
        .collect();
    Ok(GrunskyTable { order, entries })
}

/// Both sides of the Grunsky inequality
/// `|Σ γ_{n,k} x_k x_n|² ≤ (Σ |x_k|²/k)(Σ |x_n|²/n)`; `x[0]` is `x_1`.
pub fn grunsky_quadratic<T: Coeff>(table: &GrunskyTable<T>, x: &[Complex64]) -> Result<(f64, f64)> {
    if x.len() > table.order {
        return Err(Error::SupportExceedsOrder {
            support: x.len(),
            order: table.order,
        });
    }
    let mut form = Complex64::new(0.0, 0.0);
    for (n, xn) in x.iter().enumerate() {
        for (k, xk) in x.iter().enumerate() {
            form += table.entries[n][k].to_complex() * xk * xn;
        }
    }
    let weighted: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm_sqr() / (i + 1) as f64)
        .sum();
    Ok((form.norm_sqr(), weighted * weighted))
}

/// Closed form `S_κ^{[p,q]}(z) = −p! z^{p−q} (1−z²)^{−(p+q)} Σ_{d<q} C_d z^{2d}`,
/// stored with `p ≥ q`.
#[derive(Debug, Clone, PartialEq)]
pub struct KoebeClosedForm {
    pub p: usize,
    pub q: usize,
    /// `−p!`.
    pub prefactor: BigInt,
    /// `p − q`.
    pub monomial_power: usize,
    /// `p + q`.
    pub pole_order: usize,
    /// `C_0, …, C_{q−1}`.
    pub cd: Vec<ExactScalar>,
}

impl KoebeClosedForm {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        check_pq(p, q)?;
        let (p, q) = if p >= q { (p, q) } else { (q, p) };
        let cd = (0..q).map(|d| koebe_cd(p, q, d)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            p,
            q,
            prefactor: -factorial(p),
            monomial_power: p - q,
            pole_order: p + q,
            cd,
        })
    }

    pub fn tq(&self) -> RationalPoly {
        tq_polynomial(self.p, self.q).expect("validated on construction")
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        let t = self.tq().eval_complex(z2);
        let pre = self.prefactor.to_f64().expect("p! fits in f64");
        // (1−z)(1+z) keeps precision near z = ±1
        let pole = (1.0 - z) * (1.0 + z);
        pre * z.powu(self.monomial_power as u32) * t / pole.powu(self.pole_order as u32)
    }

    /// `|S_κ^{[p,q]}(z)| (1−|z|²)^{p+q}`, arranged to stay finite near the circle.
    pub fn growth_weighted_abs(&self, z: Complex64) -> f64 {
        let z2 = z * z;
        let t = self.tq().eval_complex(z2);
        let pre = self.prefactor.to_f64().expect("p! fits in f64").abs();
        let ratio = (1.0 - z.norm_sqr()) / (1.0 - z2).norm();
        pre * z.norm().powi(self.monomial_power as i32) * t.norm() * ratio.powi(self.pole_order as i32)
    }

    /// Exact Taylor series through `z^order`.
    pub fn to_series(&self, order: usize) -> UniSeries<ExactScalar> {
        // (1−t)^{−m} = Σ_n C(n+m−1, n) t^n, then multiply by T_q(t).
        let m = self.pole_order;
        let half = order / 2;
        let mut pole = Vec::with_capacity(half + 1);
        let mut c = BigRational::one();
        for n in 0..=half {
            pole.push(c.clone());
            c = c * int((n + m) as i64) / int(n as i64 + 1);
        }
        let mut in_t = vec![BigRational::zero(); half + 1];
        for (d, cd) in self.cd.iter().enumerate() {
            for n in d..=half {
                in_t[n] += cd * &pole[n - d];
            }
        }
        let pre = BigRational::from_integer(self.prefactor.clone());
        UniSeries::from_fn(order, |k| {
            if k < self.monomial_power || (k - self.monomial_power) % 2 == 1 {
                return BigRational::zero();
            }
            let n = (k - self.monomial_power) / 2;
            if n <= half {
                &pre * &in_t[n]
            } else {
                BigRational::zero()
            }
        })
    }

    /// `(p+q−1)!`: the constant in `|S_κ^{[p,q]}(z)| ≤ (p+q−1)!/|1−z²|^{p+q}`.
    pub fn domination_constant(&self) -> BigInt {
        factorial(self.p + self.q - 1)
    }
}

impl fmt::Display for KoebeClosedForm {
    /// Reduced display such as `-12 z (1 + z^2) / (1 - z^2)^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // pull the rational content out of the C_d list
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.cd {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let content = BigRational::new(num_gcd.clone(), den_lcm.clone());
        let lead = BigRational::from_integer(self.prefactor.clone()) * &content;
        let mut out = format_rational(&lead);
        match self.monomial_power {
            0 => {}
            1 => out.push_str(" z"),
            k => out.push_str(&format!(" z^{k}")),
        }
        if self.cd.len() > 1 {
            let terms: Vec<String> = self
                .cd
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| {
                    let c = c / &content;
                    let coef = if c.is_one() && d > 0 {
                        String::new()
                    } else {
                        format_rational(&c)
                    };
                    match d {
                        0 => coef,
                        1 => format!("{coef}{}z^2", if coef.is_empty() { "" } else { " " }),
                        d => format!("{coef}{}z^{}", if coef.is_empty() { "" } else { " " }, 2 * d),
                    }
                })
                .collect();
            out.push_str(&format!(" ({})", terms.join(" + ")));
        }
        out.push_str(&format!(" / (1 - z^2)^{}", self.pole_order));
        write!(f, "{out}")
    }
}

/// `P_q(w) = (1−w)^{2q} Σ_{n≥q} [n!/(n−q)!]²/n · w^{n−q}` through `w^order`.
pub fn pq_function(q: usize, order: usize) -> Result<UniSeries<ExactScalar>> {
    if q == 0 {
        return domain("q must be at least 1");
    }
    let inner = UniSeries::from_fn(order, |m| {
        let n = m + q;
        let ff = BigRational::from_integer(factorial(n) / factorial(m));
        &ff * &ff / int(n as i64)
    });
    Ok(inner.mul(&one_minus_power(order, 1, 2 * q)))
}

/// `(1 − z^step)^power` through `z^order`.
fn one_minus_power(order: usize, step: usize, power: usize) -> UniSeries<ExactScalar> {
    let mut base = UniSeries::one(order);
    if step <= order {
        base = base.sub(&UniSeries::monomial(order, step, int(1)));
    }
    (0..power).fold(UniSeries::one(order), |acc, _| acc.mul(&base))
}

/// Checks `P_q(w²) = −(1−w²)^{2q} S_κ^{[q,q]}(w)` coefficientwise through
/// `w^order`, with `S_κ^{[q,q]}` taken from the kernel pipeline.
pub fn pq_identity_check(q: usize, order: usize) -> Result<bool> {
    let lhs = pq_function(q, order)?.substitute_square();
    let s = higher_schwarzian::<ExactScalar>(&FunctionSpec::koebe(), q, q, order)?;
    let rhs = one_minus_power(order, 2, 2 * q).mul(&s).neg();
    Ok(lhs == rhs)
}

/// Truncated `‖G_f^{[p,q]}(·, w)‖²_{2p}` and the bound
/// `(2p−1)!(2q−1)!/(1−|w|²)^{2q}`.
pub fn donaire_slice_check(
    f: &FunctionSpec,
    p: usize,
    q: usize,
    w: Complex64,
    order: usize,
) -> Result<(f64, f64)> {
    if w.norm() >= 1.0 {
        return domain("w must lie in the open unit disk");
    }
    let g = if f.is_exact() {
        g_pq::<ExactScalar>(f, p, q, order)?.slice_w(w)
    } else {
        g_pq::<Complex64>(f, p, q, order)?.slice_w(w)
    };
    let weights = bergman_weights_f64((2 * p) as f64, order)?;
    let mut acc = CompensatedSum::default();
    for (c, wt) in g.coeffs().iter().zip(&weights) {
        acc.add(wt * c.norm_sqr());
    }
    let bloch = (factorial(2 * p - 1) * factorial(2 * q - 1)).to_f64().expect("finite");
    let bound = bloch / (1.0 - w.norm_sqr()).powi(2 * q as i32);
    Ok((acc.value(), bound))
}
