//! Truncated Taylor series in one variable ([`UniSeries`]) and two
//! variables ([`BiSeries`]), generic over an exact ([`BigRational`]) or a
//! floating ([`Complex64`]) coefficient type.
//!
//! A `UniSeries` of order `N` holds `c_0..=c_N`. A `BiSeries` of order `N`
//! holds every `c_{i,j}` with `i + j ≤ N`. Truncation by total degree is an
//! ideal, so every stored coefficient of a product, reciprocal or logarithm is
//! exact, and the diagonal `A(z, z)` is exact through `z^N`. Binary operations
//! truncate to the smaller operand order.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::exactcore::to_f64;

/// Scalar usable as a series coefficient.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + Num + Neg<Output = Self> {
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_exact(v: &BigRational) -> Self;

    /// `None` when the value has no representation in this backend.
    fn try_from_complex(v: Complex64) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    /// The exact value, for exact backends.
    fn as_exact(&self) -> Option<&BigRational> {
        None
    }

    fn abs_sq(&self) -> f64 {
        self.to_complex().norm_sqr()
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn from_exact(v: &BigRational) -> Self {
        v.clone()
    }

    fn try_from_complex(_: Complex64) -> Option<Self> {
        None
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }

    fn as_exact(&self) -> Option<&BigRational> {
        Some(self)
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_exact(v: &BigRational) -> Self {
        Complex64::new(to_f64(v), 0.0)
    }

    fn try_from_complex(v: Complex64) -> Option<Self> {
        Some(v)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> UniSeries<T> {
    /// Series whose order is `coeffs.len() − 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| T::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, T::one())
    }

    /// `c · z^k`, truncated.
    pub fn monomial(order: usize, k: usize, c: T) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k].clone() + other.coeffs[k].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k].clone() - other.coeffs[k].clone())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::new(out)
    }

    /// Multiply by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |n| {
            if n >= k {
                self.coeffs[n - k].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = T::one() / a0.clone();
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = T::zero();
            for k in 1..=m {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc = acc + a.clone() * out[m - k].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self::new(out))
    }

    /// Formal logarithm; the constant term must be exactly one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        // n b_n = n a_n − Σ_{m=1}^{n−1} m b_m a_{n−m}
        for k in 1..=n {
            let mut acc = T::from_i64(k as i64) * self.coeffs[k].clone();
            for m in 1..k {
                if !out[m].is_zero() && !self.coeffs[k - m].is_zero() {
                    acc = acc - T::from_i64(m as i64) * out[m].clone() * self.coeffs[k - m].clone();
                }
            }
            out[k] = acc / T::from_i64(k as i64);
        }
        Ok(Self::new(out))
    }

    /// Formal derivative; the order drops by one (a constant stays order 0).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self::from_fn(n - 1, |k| T::from_i64(k as i64 + 1) * self.coeffs[k + 1].clone())
    }

    /// `g(z) ↦ g(factor · z)`.
    pub fn dilate(&self, factor: &T) -> Self {
        let mut pow = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * pow.clone());
            pow = pow * factor.clone();
        }
        Self::new(out)
    }

    /// `g(z) ↦ g(z²)`, keeping the order.
    pub fn substitute_square(&self) -> Self {
        let n = self.order();
        Self::from_fn(n, |k| {
            if k % 2 == 0 {
                self.coeffs[k / 2].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn to_complex(&self) -> UniSeries<Complex64> {
        UniSeries::new(self.coeffs.iter().map(Coeff::to_complex).collect())
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }
}

/// Truncated series in `z` and `w`, holding `c_{i,j}` for `i + j ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeries<T> {
    order: usize,
    /// `rows[i][j]` is the coefficient of `z^i w^j`; row `i` has `N − i + 1` entries.
    rows: Vec<Vec<T>>,
}

impl<T: Coeff> BiSeries<T> {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let rows = (0..=order)
            .map(|i| (0..=order - i).map(|j| f(i, j)).collect())
            .collect();
        Self { order, rows }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_, _| T::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == 0 && j == 0 { T::one() } else { T::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `z^i w^j`; zero outside the stored triangle is not
    /// assumed, so this panics when `i + j > N`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    /// The coefficient of `z^i` as a series in `w` of order `N − i`.
    pub fn row(&self, i: usize) -> UniSeries<T> {
        UniSeries::new(self.rows[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.rows[j][i].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..=self.order).all(|i| (i + 1..=self.order - i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot extend a truncated series");
        Self::from_fn(order, |i, j| self.rows[i][j].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        Self::from_fn(n, |i, j| self.rows[i][j].clone() + other.rows[i][j].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.order, |i, j| self.rows[i][j].clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let mut out = Self::zero(n);
        for i in 0..=n {
            for a in 0..=i {
                let (left, right) = (&self.rows[a], &other.rows[i - a]);
                // out[i][j] += Σ_b left[b] right[j−b] with j ≤ n − i
                for (b, l) in left.iter().enumerate().take(n - i + 1) {
                    if l.is_zero() {
                        continue;
                    }
                    for (c, r) in right.iter().enumerate().take(n - i + 1 - b) {
                        if !r.is_zero() {
                            let cell = &mut out.rows[i][b + c];
                            *cell = cell.clone() + l.clone() * r.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// `u(z) · v(w)` as a bivariate series of the smaller order.
    pub fn outer(u: &UniSeries<T>, v: &UniSeries<T>) -> Self {
        let n = u.order().min(v.order());
        Self::from_fn(n, |i, j| u.coeff(i).clone() * v.coeff(j).clone())
    }

    /// Formal logarithm; requires `c_{0,0} = 1` exactly.
    ///
    /// Writing `A = Σ_i A_i(w) z^i` and `B = log A`, the identity
    /// `z ∂_z B · A = z ∂_z A` gives, row by row,
    /// `i A_0 B_i = i A_i − Σ_{m=1}^{i−1} m B_m A_{i−m}`, and `B_0 = log A_0`.
    pub fn log(&self) -> Result<Self> {
        if !self.rows[0][0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order;
        let a0 = self.row(0);
        let a0_inv = a0.reciprocal()?;
        let mut out: Vec<UniSeries<T>> = Vec::with_capacity(n + 1);
        out.push(a0.log()?);
        for i in 1..=n {
            let len = n - i;
            let mut acc = self.row(i).scale(&T::from_i64(i as i64));
            for m in 1..i {
                let term = out[m].truncate(len).mul(&self.row(i - m).truncate(len));
                acc = acc.sub(&term.scale(&T::from_i64(m as i64)));
            }
            let bi = acc.mul(&a0_inv.truncate(len)).scale(&(T::one() / T::from_i64(i as i64)));
            out.push(bi);
        }
        Ok(Self {
            order: n,
            rows: out.into_iter().map(UniSeries::into_coeffs).collect(),
        })
    }

    /// `∂^{p+q} / ∂z^p ∂w^q`; the order drops to `N − p − q`.
    pub fn partial(&self, p: usize, q: usize) -> Result<Self> {
        if p + q > self.order {
            return Err(Error::OrderExhausted {
                needed: p + q,
                order: self.order,
            });
        }
        let falling = |top: usize, k: usize| -> T {
            (top + 1 - k..=top).fold(T::one(), |acc, v| acc * T::from_i64(v as i64))
        };
        Ok(Self::from_fn(self.order - p - q, |i, j| {
            self.rows[i + p][j + q].clone() * falling(i + p, p) * falling(j + q, q)
        }))
    }

    /// `A(z, z)`, exact through `z^N`.
    pub fn diagonal(&self) -> UniSeries<T> {
        UniSeries::from_fn(self.order, |m| {
            (0..=m).fold(T::zero(), |acc, i| acc + self.rows[i][m - i].clone())
        })
    }

    /// `z ↦ A(z, w₀)` as a series in `z`, with the `w`-sums truncated at the
    /// stored triangle.
    pub fn slice_w(&self, w: Complex64) -> UniSeries<Complex64> {
        UniSeries::from_fn(self.order, |i| {
            self.rows[i]
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c.to_complex())
        })
    }

    pub fn to_complex(&self) -> BiSeries<Complex64> {
        BiSeries {
            order: self.order,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(Coeff::to_complex).collect())
                .collect(),
        }
    }
}

/// `(f(z) − f(w)) / (z − w) = Σ_{n≥1} a_n Σ_{i+j=n−1} z^i w^j` for a normalized
/// `f` (`a_0 = 0`, `a_1 = 1`). A series of order `L` yields order `L − 1`.
pub fn divided_difference<T: Coeff>(f: &UniSeries<T>) -> Result<BiSeries<T>> {
    if f.order() < 1 || !f.coeff(0).is_zero() || !f.coeff(1).is_one() {
        return Err(Error::NotNormalized);
    }
    Ok(BiSeries::from_fn(f.order() - 1, |i, j| f.coeff(i + j + 1).clone()))
}
