//! Exact rational combinatorics and the closed-form constants attached to
//! the Koebe Schwarzians.
//!
//! Everything here runs in arbitrary precision; ratios of Gamma values whose
//! arguments differ by an integer are reduced to Pochhammer products so that
//! no floating Gamma is ever evaluated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactScalar = BigRational;

pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn factorial_q(n: usize) -> ExactScalar {
    BigRational::from_integer(factorial(n))
}

/// Parse `"num/den"`, `"num"`, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = BigRational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Render as `"num/den"`, or `"num"` for integers.
pub fn format_rational(v: &ExactScalar) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &ExactScalar) -> f64 {
    // Scale big operands down before dividing so huge numerators/denominators
    // do not overflow to inf/inf.
    if let (Some(n), Some(d)) = (v.numer().to_f64(), v.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (v.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (v.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Shifted factorial `(a)_n = a(a+1)⋯(a+n−1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &ExactScalar, n: usize) -> ExactScalar {
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

/// Both sides of the terminating Chu–Vandermonde evaluation
/// `₂F₁(−n, a; c; 1) = (c−a)_n / (c)_n`: the left side by direct summation,
/// the right side from the product formula.
pub fn chu_vandermonde(
    n: usize,
    a: &ExactScalar,
    c: &ExactScalar,
) -> Result<(ExactScalar, ExactScalar)> {
    let minus_n = -int(n as i64);
    let mut c_m = BigRational::one();
    for m in 0..=n {
        if c_m.is_zero() {
            return Err(Error::ZeroPochhammerInDenominator(m));
        }
        if m < n {
            c_m *= c + int(m as i64);
        }
    }

    let mut lhs = BigRational::zero();
    // term_m = (−n)_m (a)_m / (m! (c)_m), advanced by its ratio.
    let mut term = BigRational::one();
    for m in 0..=n {
        lhs += &term;
        if m == n {
            break;
        }
        let k = int(m as i64);
        term = term * (&minus_n + &k) * (a + &k) / ((&k + int(1)) * (c + &k));
    }
    let rhs = pochhammer(&(c - a), n) / pochhammer(c, n);
    Ok((lhs, rhs))
}

/// Polynomial with exact rational coefficients, indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<ExactScalar>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &ExactScalar) -> ExactScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_complex(&self, t: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
                acc * t + to_f64(c)
            })
    }
}

fn check_pq(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return domain(format!("p and q must be at least 1 (got p={p}, q={q})"));
    }
    Ok(())
}

/// Coefficient `C_d` of `t^d` in `T_q`, for `p ≥ q ≥ 1` and `0 ≤ d < q`:
///
/// `C_d = (p−1)!/(p−q)! · (−q)_d (1−q)_d / (d! (p−q+1)_d)`.
pub fn koebe_cd(p: usize, q: usize, d: usize) -> Result<ExactScalar> {
    check_pq(p, q)?;
    if q > p {
        return domain(format!("koebe_cd needs p ≥ q (got p={p}, q={q})"));
    }
    if d >= q {
        return domain(format!("koebe_cd needs d < q (got d={d}, q={q})"));
    }
    let lead = factorial_q(p - 1) / factorial_q(p - q);
    let qq = int(q as i64);
    let num = pochhammer(&-&qq, d) * pochhammer(&(int(1) - &qq), d);
    let den = factorial_q(d) * pochhammer(&int((p - q + 1) as i64), d);
    Ok(lead * num / den)
}

/// `T_q(t) = Σ_{d<q} C_d t^d`, of degree exactly `q − 1`.
pub fn tq_polynomial(p: usize, q: usize) -> Result<RationalPoly> {
    check_pq(p, q)?;
    if q > p {
        return domain(format!("tq_polynomial needs p ≥ q (got p={p}, q={q})"));
    }
    let coeffs = (0..q).map(|d| koebe_cd(p, q, d)).collect::<Result<Vec<_>>>()?;
    Ok(RationalPoly::new(coeffs))
}

fn check_alpha(alpha: &ExactScalar) -> Result<()> {
    if *alpha <= -int(1) {
        return domain(format!("alpha must exceed -1 (got {})", format_rational(alpha)));
    }
    Ok(())
}

/// Squared multiplier norm of `g₀(z) = (1−z²)^{−(β−α)/2}` from `A²_α` to `A²_β`:
///
/// `2^{−(β−α)} · Γ(β+2)/Γ(α+2) · [Γ(1+α/2)/Γ(1+β/2)]²`,
///
/// evaluated exactly; `β − α` must be a positive even integer.
pub fn g0_mult_norm_sq(alpha: &ExactScalar, beta: &ExactScalar) -> Result<ExactScalar> {
    check_alpha(alpha)?;
    let gap = beta - alpha;
    if !gap.is_integer() || !gap.is_positive() || gap.numer().is_odd() {
        return domain(format!(
            "beta - alpha must be a positive even integer (got {})",
            format_rational(&gap)
        ));
    }
    let m = gap.to_integer().to_usize().expect("gap fits in usize");
    let half = alpha / int(2) + int(1);
    let denom_root = pochhammer(&half, m / 2);
    let two_m = BigRational::from_integer(num_traits::pow(BigInt::from(2), m));
    Ok(pochhammer(&(alpha + int(2)), m) / (two_m * &denom_root * &denom_root))
}

/// The squared sharp multiplier norm `𝒩_{α,p,q}` of `S_κ^{[p,q]}` from
/// `A²_α` to `A²_{α+2p+2q}`:
///
/// `[(p+q−1)!]² / 2^{2p+2q} · (α+2)_{2p+2q} / [(α/2+1)_{p+q}]²`.
pub fn sharp_constant(alpha: &ExactScalar, p: usize, q: usize) -> Result<ExactScalar> {
    check_pq(p, q)?;
    check_alpha(alpha)?;
    let s = p + q;
    let fact = factorial_q(s - 1);
    let two = BigRational::from_integer(num_traits::pow(BigInt::from(2), 2 * s));
    let root = pochhammer(&(alpha / int(2) + int(1)), s);
    Ok(&fact * &fact * pochhammer(&(alpha + int(2)), 2 * s) / (two * &root * &root))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBounds {
    /// `(2p−1)!(2q−1)!(α+2min{p,q}+1)/(α+1)`, valid for every `f ∈ 𝒮`.
    pub donaire_sq: ExactScalar,
    /// `36(α+3)/(α+1)`, the `p = q = 1` bound for `S_f` itself.
    pub shimorin_sq: ExactScalar,
    /// `(2p−1)!(2q−1)!`, the square of the growth-space bound.
    pub bloch_sq: BigInt,
}

pub fn classical_bounds(alpha: &ExactScalar, p: usize, q: usize) -> Result<ClassicalBounds> {
    check_pq(p, q)?;
    check_alpha(alpha)?;
    let bloch_sq = factorial(2 * p - 1) * factorial(2 * q - 1);
    let m = int(2 * p.min(q) as i64);
    let donaire_sq =
        BigRational::from_integer(bloch_sq.clone()) * (alpha + m + int(1)) / (alpha + int(1));
    let shimorin_sq = int(36) * (alpha + int(3)) / (alpha + int(1));
    Ok(ClassicalBounds {
        donaire_sq,
        shimorin_sq,
        bloch_sq,
    })
}

/// `(2p−1)!(2q−1)! − [(p+q−1)!]²`; zero exactly when `p = q`.
pub fn factorial_gap(p: usize, q: usize) -> Result<ExactScalar> {
    check_pq(p, q)?;
    let s = factorial(p + q - 1);
    Ok(BigRational::from_integer(
        factorial(2 * p - 1) * factorial(2 * q - 1) - &s * &s,
    ))
}

/// `(p+q−1)!`, the growth-space norm of `S_κ^{[p,q]}` in `B_{p+q}`.
pub fn koebe_growth_norm(p: usize, q: usize) -> Result<BigInt> {
    check_pq(p, q)?;
    Ok(factorial(p + q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> ExactScalar {
        if k > n {
            return int(0);
        }
        factorial_q(n) / (factorial_q(k) * factorial_q(n - k))
    }

    // Coefficient of t^d in Σ_a C(q,a) (p+q−a−1)!/(p−a)! t^{q−a} (1−t)^a,
    // expanded binomially without any hypergeometric summation.
    fn cd_by_binomial_expansion(p: usize, q: usize, d: usize) -> ExactScalar {
        let mut acc = int(0);
        for a in 0..=q {
            if d + a < q {
                continue;
            }
            let b = d + a - q;
            let sign = if b % 2 == 0 { int(1) } else { int(-1) };
            acc += binom(q, a) * factorial_q(p + q - a - 1) / factorial_q(p - a) * binom(a, b)
                * sign;
        }
        acc
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&ratio(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(-2), 1), int(-2));
        assert_eq!(pochhammer(&int(3), 4), int(360));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
    }

    #[test]
    fn chu_vandermonde_examples() {
        let (l, r) = chu_vandermonde(0, &ratio(5, 7), &ratio(-3, 2)).unwrap();
        assert_eq!((l, r), (int(1), int(1)));
        let (l, r) = chu_vandermonde(2, &int(1), &int(3)).unwrap();
        assert_eq!(l, ratio(1, 2));
        assert_eq!(r, ratio(1, 2));
        let (l, r) = chu_vandermonde(5, &ratio(7, 2), &ratio(9, 2)).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn chu_vandermonde_rejects_vanishing_denominator() {
        assert_eq!(
            chu_vandermonde(4, &int(1), &int(-2)),
            Err(Error::ZeroPochhammerInDenominator(3))
        );
        assert!(chu_vandermonde(2, &int(1), &int(-2)).is_ok());
    }

    #[test]
    fn koebe_cd_examples() {
        assert_eq!(koebe_cd(1, 1, 0).unwrap(), int(1));
        assert_eq!(koebe_cd(3, 2, 0).unwrap(), int(2));
        assert_eq!(koebe_cd(3, 2, 1).unwrap(), int(2));
        assert_eq!(koebe_cd(2, 1, 0).unwrap(), int(1));
        assert!(matches!(koebe_cd(2, 3, 0), Err(Error::Domain(_))));
        assert!(matches!(koebe_cd(3, 2, 2), Err(Error::Domain(_))));
        assert!(matches!(koebe_cd(0, 0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn koebe_cd_matches_binomial_expansion() {
        for p in 1..=9 {
            for q in 1..=p {
                for d in 0..q {
                    assert_eq!(koebe_cd(p, q, d).unwrap(), cd_by_binomial_expansion(p, q, d));
                }
                // the expansion has no t^q term
                assert_eq!(cd_by_binomial_expansion(p, q, q), int(0), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn tq_examples() {
        assert_eq!(tq_polynomial(1, 1).unwrap().coeffs(), &[int(1)]);
        assert_eq!(tq_polynomial(2, 2).unwrap().eval(&int(1)), int(3));
        assert_eq!(tq_polynomial(3, 2).unwrap().coeffs(), &[int(2), int(2)]);
        assert!(tq_polynomial(1, 2).is_err());
    }

    #[test]
    fn tq_at_one_and_positivity() {
        for p in 1..=12 {
            for q in 1..=p {
                let t = tq_polynomial(p, q).unwrap();
                assert_eq!(t.degree(), Some(q - 1));
                assert!(t.coeffs().iter().all(|c| c.is_positive()));
                assert_eq!(t.eval(&int(1)), factorial_q(p + q - 1) / factorial_q(p));
            }
        }
    }

    #[test]
    fn sharp_constant_examples() {
        assert_eq!(sharp_constant(&int(0), 1, 1).unwrap(), ratio(15, 8));
        assert_eq!(sharp_constant(&int(0), 2, 1).unwrap(), ratio(35, 4));
        for alpha in [int(0), ratio(1, 2), int(1), int(2)] {
            let lhs = int(36) * sharp_constant(&alpha, 1, 1).unwrap();
            let rhs = int(36) * (&alpha + int(3)) * (&alpha + int(5))
                / ((&alpha + int(2)) * (&alpha + int(4)));
            assert_eq!(lhs, rhs);
        }
        assert!(sharp_constant(&int(-1), 1, 1).is_err());
        assert!(sharp_constant(&ratio(-1, 2), 1, 1).is_ok());
    }

    #[test]
    fn g0_examples() {
        assert_eq!(g0_mult_norm_sq(&int(0), &int(4)).unwrap(), ratio(15, 8));
        // (p,q) = (2,1) at α = 0 lands in A²_6 with prefactor [(2+1−1)!]² = 4
        assert_eq!(int(4) * g0_mult_norm_sq(&int(0), &int(6)).unwrap(), ratio(35, 4));
        // (4)_2 / (4 · 4) = 20/16
        assert_eq!(g0_mult_norm_sq(&int(2), &int(4)).unwrap(), ratio(5, 4));
        assert!(g0_mult_norm_sq(&int(0), &int(3)).is_err());
        assert!(g0_mult_norm_sq(&int(0), &int(0)).is_err());
        assert!(g0_mult_norm_sq(&int(0), &ratio(5, 2)).is_err());
    }

    #[test]
    fn sharp_constant_factors_through_g0() {
        for a in 0..=4 {
            let alpha = int(a);
            for p in 1..=4 {
                for q in 1..=4 {
                    let beta = &alpha + int(2 * (p + q) as i64);
                    let f = factorial_q(p + q - 1);
                    assert_eq!(
                        sharp_constant(&alpha, p, q).unwrap(),
                        &f * &f * g0_mult_norm_sq(&alpha, &beta).unwrap()
                    );
                    assert_eq!(
                        sharp_constant(&alpha, p, q).unwrap(),
                        sharp_constant(&alpha, q, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn classical_bounds_examples() {
        let b = classical_bounds(&int(0), 1, 1).unwrap();
        assert_eq!(b.donaire_sq, int(3));
        assert_eq!(b.shimorin_sq, int(108));
        assert_eq!(classical_bounds(&int(1), 2, 3).unwrap().donaire_sq, int(2160));
        assert_eq!(classical_bounds(&int(0), 2, 2).unwrap().bloch_sq, BigInt::from(36));
        for alpha in [int(0), ratio(1, 3), int(5)] {
            let b = classical_bounds(&alpha, 1, 1).unwrap();
            assert_eq!(b.donaire_sq * int(36), b.shimorin_sq);
        }
    }

    #[test]
    fn factorial_gap_examples() {
        assert_eq!(factorial_gap(2, 2).unwrap(), int(0));
        assert_eq!(factorial_gap(2, 1).unwrap(), int(2));
        assert_eq!(factorial_gap(3, 1).unwrap(), int(84));
        for p in 1..=10 {
            for q in 1..=10 {
                let g = factorial_gap(p, q).unwrap();
                assert_eq!(g.is_positive(), p != q);
                assert_eq!(g.is_zero(), p == q);
            }
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("15/8").unwrap(), ratio(15, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(30, 16)), "15/8");
        assert_eq!(format_rational(&int(-3)), "-3");
    }

    #[test]
    fn to_f64_survives_huge_operands() {
        let n = factorial(400) + BigInt::one();
        let big = BigRational::new(n.clone(), n * BigInt::from(2) + BigInt::one());
        assert!(big.numer().bits() > 1024);
        assert!((to_f64(&big) - 0.5).abs() < 1e-15);
    }
}
