//! Truncated formal power series with exact rational coefficients.
//!
//! A series of order `n` knows the coefficients of `z^0 ..= z^n`; everything
//! above is unknown rather than zero. Binary operations therefore produce the
//! minimum order of their operands, so two series can only ever compare equal
//! on coefficients that are actually known.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Lossy conversion for reporting. Handles numerators and denominators far
/// outside the `f64` range by comparing bit lengths first.
pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.numer().sign() == Sign::Minus {
        -1.0
    } else {
        1.0
    };
    let n = x.numer().abs();
    let d = x.denom().clone();
    // Scale so both fit in roughly 60 significant bits.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let nn = (&n >> shift_n as usize)
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::NAN);
    let dd = (&d >> shift_d as usize)
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::NAN);
    let exp = (shift_n - shift_d) as i32;
    sign * (nn / dd) * 2f64.powi(exp)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series from explicit coefficients `c_0 ..= c_n`; the order is `n`.
    ///
    /// Panics on an empty vector: a series always knows its constant term.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a power series needs at least one coefficient"
        );
        Self { coeffs }
    }

    /// Exact polynomial, zero-padded or cut to the given order.
    pub fn from_poly(poly: &[Rational], order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|k| poly.get(k).cloned().unwrap_or_else(Rational::zero))
            .collect();
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * z^k` known to the given order.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity series `z`.
    pub fn var(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^k`. Panics if `k` exceeds the known order.
    pub fn coeff(&self, k: usize) -> &Rational {
        assert!(
            k <= self.order(),
            "coefficient z^{k} is beyond order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, value: Rational) {
        self.coeffs[k] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend order {} to {order}",
            self.order()
        );
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Index of the first nonzero coefficient, `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// First index where the two series differ, compared up to the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    /// Equality on the coefficients both series know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplication by `z^k`; the order grows by `k`.
    pub fn shift_mul(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Exact division by `z^k`. The low `k` coefficients must be zero.
    pub fn shift_div(&self, k: usize) -> Result<Self> {
        assert!(
            k <= self.order(),
            "cannot divide order {} series by z^{k}",
            self.order()
        );
        if let Some(index) = (0..k).find(|&i| !self.coeffs[i].is_zero()) {
            return Err(Error::InexactCancellation {
                index,
                value: self.coeffs[index].clone(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigInt::from(k + 1))
            .collect();
        Self { coeffs }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Quotient `q` with `q * divisor = self` to the common order.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let b0 = &divisor.coeffs[0];
        if b0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order().min(divisor.order());
        let inv = b0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for (i, qi) in q.iter().enumerate() {
                acc -= qi * &divisor.coeffs[k - i];
            }
            q.push(acc * &inv);
        }
        Ok(Self { coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    /// Square root with positive constant term, by Newton iteration
    /// `s <- (s + a / s) / 2` with doubling precision.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        let s0 = rational_sqrt(a0).ok_or_else(|| Error::NonSquareConstant(a0.clone()))?;
        if s0.is_zero() {
            // a(0) = 0 would need a half-integer valuation in general.
            return Err(Error::NonSquareConstant(a0.clone()));
        }
        let order = self.order();
        let half = rat(1, 2);
        let mut s = Self::constant(s0, 0);
        let mut prec = 0usize;
        while prec < order {
            prec = (2 * prec + 1).min(order);
            let widened = Self::from_poly(&s.coeffs, prec);
            let quotient = self.truncate(prec).div(&widened)?;
            s = (&widened + &quotient).scale(&half);
        }
        Ok(s)
    }

    /// `self(inner(z))`. Requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion:
    /// `[z^n] b = (1/n) [w^(n-1)] (w / a(w))^n`.
    pub fn revert(&self) -> Result<Self> {
        let order = self.order();
        if order == 0 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NotRevertible);
        }
        let phi = self.shift_div(1)?.recip()?;
        let mut out = Self::zero(order);
        let mut power = Self::one(phi.order());
        for n in 1..=order {
            power = &power * &phi;
            out.coeffs[n] = power.coeffs[n - 1].clone() / BigInt::from(n);
        }
        Ok(out)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let lo_a = self.valuation().unwrap_or(n + 1);
        let lo_b = rhs.valuation().unwrap_or(n + 1);
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in lo_a..=n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in lo_b..=(n - i) {
                let b = &rhs.coeffs[j];
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<PowerSeries> for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: PowerSeries) -> PowerSeries { (&self).$m(&rhs) }
        }
        impl $tr<&PowerSeries> for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: &PowerSeries) -> PowerSeries { (&self).$m(rhs) }
        }
        impl $tr<PowerSeries> for &PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: PowerSeries) -> PowerSeries { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        -&self
    }
}

/// Polynomial in the catalytic variable `u` with power-series coefficients,
/// truncated in both `u`-degree and `z`-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    ucoeffs: Vec<PowerSeries>,
}

impl UPoly {
    /// All members are cut to their minimum order.
    pub fn new(ucoeffs: Vec<PowerSeries>) -> Self {
        assert!(!ucoeffs.is_empty());
        let order = ucoeffs.iter().map(PowerSeries::order).min().unwrap();
        let ucoeffs = ucoeffs.into_iter().map(|s| s.truncate(order)).collect();
        Self { ucoeffs }
    }

    pub fn zero(udeg: usize, order: usize) -> Self {
        Self {
            ucoeffs: vec![PowerSeries::zero(order); udeg + 1],
        }
    }

    /// Sparse constructor: `(u-degree, coefficient)` pairs, padded to `udeg`.
    pub fn from_terms(terms: &[(usize, PowerSeries)], udeg: usize, order: usize) -> Self {
        let mut p = Self::zero(udeg, order);
        for (j, s) in terms {
            if *j <= udeg {
                p.ucoeffs[*j] = &p.ucoeffs[*j] + s;
            }
        }
        Self::new(p.ucoeffs)
    }

    pub fn udeg(&self) -> usize {
        self.ucoeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.ucoeffs[0].order()
    }

    pub fn coeff(&self, j: usize) -> &PowerSeries {
        &self.ucoeffs[j]
    }

    pub fn coeffs(&self) -> &[PowerSeries] {
        &self.ucoeffs
    }

    pub fn truncate(&self, udeg: usize, order: usize) -> Self {
        Self {
            ucoeffs: self.ucoeffs[..=udeg]
                .iter()
                .map(|s| s.truncate(order))
                .collect(),
        }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&PowerSeries, &PowerSeries) -> PowerSeries) -> Self {
        let d = self.udeg().min(rhs.udeg());
        Self::new(
            (0..=d)
                .map(|j| f(&self.ucoeffs[j], &rhs.ucoeffs[j]))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.udeg().min(rhs.udeg());
        let order = self.order().min(rhs.order());
        let mut out = vec![PowerSeries::zero(order); d + 1];
        for i in 0..=d {
            if self.ucoeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(d - i) {
                if !rhs.ucoeffs[j].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.ucoeffs[i] * &rhs.ucoeffs[j]);
                }
            }
        }
        Self::new(out)
    }

    pub fn mul_series(&self, s: &PowerSeries) -> Self {
        Self::new(self.ucoeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `u^k`; the tracked degree grows by `k`.
    pub fn mul_u(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = vec![PowerSeries::zero(order); k];
        out.extend(self.ucoeffs.iter().cloned());
        Self { ucoeffs: out }
    }

    /// Exact division by `u^k`; the low `u`-coefficients must vanish.
    pub fn div_u(&self, k: usize) -> Result<Self> {
        for j in 0..k {
            if let Some(index) = self.ucoeffs[j].valuation() {
                return Err(Error::InexactCancellation {
                    index,
                    value: self.ucoeffs[j].coeff(index).clone(),
                });
            }
        }
        Ok(Self {
            ucoeffs: self.ucoeffs[k..].to_vec(),
        })
    }

    /// `sum_j c_j x^j` for a series `x` with `x(0) = 0`.
    pub fn eval(&self, x: &PowerSeries) -> PowerSeries {
        let mut acc = self.ucoeffs[self.udeg()].clone();
        for j in (0..self.udeg()).rev() {
            acc = &(&acc * x) + &self.ucoeffs[j];
        }
        acc
    }

    /// `sum_k c_{2k} x^k`: evaluation of an even polynomial at `u^2 := x`.
    pub fn eval_even(&self, x: &PowerSeries) -> PowerSeries {
        let evens = Self::new(self.ucoeffs.iter().step_by(2).cloned().collect());
        evens.eval(x)
    }

    pub fn is_even(&self) -> bool {
        self.ucoeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(PowerSeries::is_zero)
    }

    pub fn is_odd(&self) -> bool {
        self.ucoeffs.iter().step_by(2).all(PowerSeries::is_zero)
    }

    /// First `(u-degree, z-exponent)` where the two differ on the common window.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let d = self.udeg().min(other.udeg());
        (0..=d).find_map(|j| {
            self.ucoeffs[j]
                .first_difference(&other.ucoeffs[j])
                .map(|k| (j, k))
        })
    }
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self(coeffs);
        p.normalize();
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * v^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `a + b v`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    fn normalize(&mut self) {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(Rational::zero());
        }
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_series(&self, order: usize) -> PowerSeries {
        PowerSeries::from_poly(&self.0, order)
    }
}
