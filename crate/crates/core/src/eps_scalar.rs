//! Finite formal Laurent polynomials in a single positive infinitesimal `ε`.
//!
//! A scalar is `Σ c_k ε^k` with exact rational coefficients and integer
//! exponents. The order is the one induced by `ε` being smaller than every
//! positive rational: the sign of a nonzero scalar is the sign of its
//! lowest-order coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default exponent window enforced at the input boundary and by the checked operations.
pub const MIN_EXPONENT: i32 = -16;
pub const MAX_EXPONENT: i32 = 32;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer exponent window `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentWindow {
    pub min: i32,
    pub max: i32,
}

impl Default for ExponentWindow {
    fn default() -> Self {
        ExponentWindow {
            min: MIN_EXPONENT,
            max: MAX_EXPONENT,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsScalar {
    // canonical: no zero coefficients
    terms: BTreeMap<i32, Rational>,
}

impl EpsScalar {
    pub fn zero() -> Self {
        EpsScalar::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `ε`
    pub fn eps() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, exponent: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        EpsScalar { terms }
    }

    /// Builds a scalar from `(exponent, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, Rational)>,
    {
        let mut terms: BTreeMap<i32, Rational> = BTreeMap::new();
        for (k, c) in iter {
            let slot = terms.entry(k).or_insert_with(Rational::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        EpsScalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a nonzero coefficient; `None` stands for `+∞` (the zero scalar).
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next()
    }

    pub fn coefficient(&self, exponent: i32) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_limited(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 1)
    }

    pub fn is_appreciable(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.leading_coefficient() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplication by `ε^k`.
    pub fn shift(&self, k: i32) -> Self {
        EpsScalar {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        EpsScalar {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Keeps the terms with exponent strictly below `threshold`.
    pub fn truncate_below(&self, threshold: i32) -> Self {
        EpsScalar {
            terms: self
                .terms
                .range(..threshold)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn check_window(&self, window: ExponentWindow) -> Result<()> {
        for &k in self.terms.keys() {
            if k < window.min || k > window.max {
                return Err(Error::ExponentOverflow {
                    exponent: k as i64,
                    min: window.min,
                    max: window.max,
                });
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self, window: ExponentWindow) -> Result<Self> {
        let r = self + other;
        r.check_window(window)?;
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Self, window: ExponentWindow) -> Result<Self> {
        if let (Some(a), Some(b), Some(c), Some(d)) = (
            self.valuation(),
            other.valuation(),
            self.max_exponent(),
            other.max_exponent(),
        ) {
            for e in [a as i64 + b as i64, c as i64 + d as i64] {
                if e < window.min as i64 || e > window.max as i64 {
                    return Err(Error::ExponentOverflow {
                        exponent: e,
                        min: window.min,
                        max: window.max,
                    });
                }
            }
        }
        Ok(self * other)
    }

    /// Laurent-series inverse truncated at `order`.
    ///
    /// With `v = valuation(x)`, the residual `x·inverse(x, order) − 1` only has
    /// exponents above `order − 2v`. Monomials invert exactly.
    pub fn inverse(&self, order: i32) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroInverse)?;
        let unit: Vec<(i32, &Rational)> = self.terms.iter().map(|(e, c)| (e - v, c)).collect();
        let u0 = unit[0].1.clone();
        if unit.len() == 1 {
            return Ok(Self::monomial(u0.recip(), -v));
        }
        let depth = if v < 0 { order - 2 * v } else { order }.max(0) as usize;
        let inv_u0 = u0.recip();
        let mut w: Vec<Rational> = Vec::with_capacity(depth + 1);
        w.push(inv_u0.clone());
        for k in 1..=depth {
            let mut acc = Rational::zero();
            for &(j, uj) in unit.iter().skip(1) {
                let j = j as usize;
                if j > k {
                    break;
                }
                acc += uj * &w[k - j];
            }
            w.push(-(acc * &inv_u0));
        }
        Ok(Self::from_terms(
            w.into_iter().enumerate().map(|(k, c)| (k as i32 - v, c)),
        ))
    }

    /// Compares `|self|` with `|other|` for `ε` a positive infinitesimal.
    pub fn compare_abs(&self, other: &Self) -> Ordering {
        (self.abs() - other.abs()).signum().cmp(&0)
    }

    /// Exact evaluation at a positive rational `ε`.
    pub fn eval_at(&self, eps_value: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (k, c)| {
            acc + c * pow_rational(eps_value, *k)
        })
    }

    pub fn eval_f64(&self, eps_value: f64) -> f64 {
        self.terms.iter().fold(0.0, |acc, (k, c)| {
            acc + c.to_f64().unwrap_or(f64::NAN) * eps_value.powi(*k)
        })
    }
}

pub(crate) fn pow_rational(base: &Rational, exponent: i32) -> Rational {
    if exponent >= 0 {
        num_traits::pow(base.clone(), exponent as usize)
    } else {
        num_traits::pow(base.recip(), (-exponent) as usize)
    }
}

impl From<Rational> for EpsScalar {
    fn from(c: Rational) -> Self {
        EpsScalar::constant(c)
    }
}

impl From<i64> for EpsScalar {
    fn from(c: i64) -> Self {
        EpsScalar::constant(int(c))
    }
}

impl<'a> Add<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn add(self, rhs: &'a EpsScalar) -> EpsScalar {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            let slot = terms.entry(*k).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(k);
            }
        }
        EpsScalar { terms }
    }
}

impl<'a> Sub<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn sub(self, rhs: &'a EpsScalar) -> EpsScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn mul(self, rhs: &'a EpsScalar) -> EpsScalar {
        let mut terms: BTreeMap<i32, Rational> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let slot = terms.entry(a + b).or_insert_with(Rational::zero);
                *slot += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        EpsScalar { terms }
    }
}

impl Neg for &EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        EpsScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, EpsScalar);
forward_owned!(Sub, sub, EpsScalar);
forward_owned!(Mul, mul, EpsScalar);

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, k: i32, c: &Rational) -> fmt::Result {
    let negative = c.is_negative();
    if !first {
        f.write_str(if negative { "-" } else { "+" })?;
    } else if negative {
        f.write_str("-")?;
    }
    let mag = c.abs();
    if k == 0 {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        write!(f, "{mag}*")?;
    }
    f.write_str("eps")?;
    if k != 1 {
        write!(f, "^{k}")?;
    }
    Ok(())
}

impl fmt::Display for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            write_term(f, i == 0, *k, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsScalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps_pow(k: i32) -> EpsScalar {
        EpsScalar::monomial(int(1), k)
    }

    #[test]
    fn valuation_examples() {
        let x = EpsScalar::from(3) - EpsScalar::eps();
        assert_eq!(x.valuation(), Some(0));
        let y = eps_pow(-1) + EpsScalar::one();
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(EpsScalar::zero().valuation(), None);
        assert!(x.is_appreciable() && x.is_limited() && !x.is_infinitesimal());
        assert!(!y.is_limited());
        assert!(EpsScalar::zero().is_infinitesimal());
    }

    #[test]
    fn ring_examples() {
        let one_minus = EpsScalar::one() - EpsScalar::eps();
        assert_eq!(one_minus + EpsScalar::eps(), EpsScalar::one());
        assert_eq!(eps_pow(-1) * EpsScalar::eps(), EpsScalar::one());
        let x = EpsScalar::from(2) - EpsScalar::monomial(int(2), 1);
        let half = EpsScalar::constant(rat(1, 2));
        assert_eq!(x * half, EpsScalar::one() - EpsScalar::eps());
    }

    #[test]
    fn inverse_examples() {
        let c = EpsScalar::constant(rat(-3, 2));
        assert_eq!(c.inverse(0).unwrap(), EpsScalar::constant(rat(-2, 3)));
        assert_eq!(EpsScalar::eps().inverse(5).unwrap(), eps_pow(-1));

        let x = EpsScalar::from(2) - EpsScalar::monomial(int(2), 1);
        let inv = x.inverse(3).unwrap();
        let expected =
            EpsScalar::from_terms((0..=3).map(|k| (k, rat(1, 2))));
        assert_eq!(inv, expected);
        let residual = &x * &inv - EpsScalar::one();
        assert!(residual.valuation().unwrap() >= 4);

        assert!(matches!(EpsScalar::zero().inverse(3), Err(Error::ZeroInverse)));
    }

    #[test]
    fn inverse_of_unlimited_scalar_meets_residual_bound() {
        // x = 1/ε + 2, v = -1: residual exponents must exceed W + 2
        let x = eps_pow(-1) + EpsScalar::from(2);
        for w in 0..5 {
            let r = &x * &x.inverse(w).unwrap() - EpsScalar::one();
            assert!(r.valuation().unwrap() > w + 2, "w={w} r={r}");
        }
    }

    #[test]
    fn compare_abs_examples() {
        assert_eq!(
            EpsScalar::eps().compare_abs(&EpsScalar::constant(rat(1, 2))),
            Ordering::Less
        );
        assert_eq!(
            EpsScalar::constant(rat(-3, 2)).compare_abs(&EpsScalar::one()),
            Ordering::Greater
        );
        let a = EpsScalar::constant(rat(1, 2)) + EpsScalar::monomial(int(2), 2);
        let b = EpsScalar::constant(rat(1, 2)) + eps_pow(2);
        assert_eq!(a.compare_abs(&b), Ordering::Greater);
        assert_eq!(a.compare_abs(&-&a), Ordering::Equal);
    }

    #[test]
    fn eval_examples() {
        let e = rat(1, 100);
        let x = EpsScalar::one() - EpsScalar::monomial(int(3), 1);
        assert_eq!(x.eval_at(&e), rat(97, 100));
        assert_eq!(EpsScalar::constant(rat(397, 100)).eval_at(&e), rat(397, 100));
        let y = eps_pow(-1) + EpsScalar::one();
        assert_eq!(y.eval_at(&e), int(101));
        assert!((y.eval_f64(0.01) - 101.0).abs() < 1e-12);
    }

    #[test]
    fn window_is_enforced_by_checked_ops() {
        let w = ExponentWindow::default();
        let big = eps_pow(20);
        assert!(big.checked_mul(&big, w).is_err());
        assert!(big.checked_mul(&eps_pow(2), w).is_ok());
        assert!(eps_pow(-17).check_window(w).is_err());
    }

    #[test]
    fn rendering() {
        let x = eps_pow(-1) + EpsScalar::one() - EpsScalar::monomial(rat(1, 2), 2);
        assert_eq!(x.to_string(), "eps^-1+1-1/2*eps^2");
        assert_eq!(EpsScalar::zero().to_string(), "0");
        assert_eq!((-EpsScalar::eps()).to_string(), "-eps");
    }
}
