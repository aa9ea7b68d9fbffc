//! Exact rational functions of `ε`, used as representatives.
//!
//! Canonical form is `num / den` with `den(0) = 1`, `num` and `den` coprime.
//! Most values have `den = 1`, in which case this is just an [`EpsScalar`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::eps_scalar::{forward_owned, EpsScalar, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsRational {
    num: EpsScalar,
    den: EpsScalar,
}

// Dense coefficient vector of an ordinary polynomial, lowest degree first.
type Dense = Vec<Rational>;

fn to_dense(p: &EpsScalar) -> Dense {
    let v = p.valuation().unwrap_or(0);
    debug_assert!(v >= 0);
    let top = p.max_exponent().unwrap_or(0);
    let mut out = vec![Rational::zero(); (top + 1) as usize];
    for (k, c) in p.terms() {
        out[k as usize] = c.clone();
    }
    out
}

fn from_dense(p: &[Rational]) -> EpsScalar {
    EpsScalar::from_terms(p.iter().enumerate().map(|(k, c)| (k as i32, c.clone())))
}

fn trim(p: &mut Dense) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn is_zero_poly(p: &Dense) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Polynomial division with remainder.
fn div_rem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut rem = a.clone();
    trim(&mut rem);
    let mut b = b.clone();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn gcd(a: &Dense, b: &Dense) -> Dense {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !is_zero_poly(&y) {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    trim(&mut x);
    x
}

impl EpsRational {
    pub fn zero() -> Self {
        EpsRational {
            num: EpsScalar::zero(),
            den: EpsScalar::one(),
        }
    }

    pub fn one() -> Self {
        EpsRational::from(EpsScalar::one())
    }

    pub fn eps() -> Self {
        EpsRational::from(EpsScalar::eps())
    }

    pub fn constant(c: Rational) -> Self {
        EpsRational::from(EpsScalar::constant(c))
    }

    pub fn monomial(c: Rational, exponent: i32) -> Self {
        EpsRational::from(EpsScalar::monomial(c, exponent))
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: EpsScalar, den: EpsScalar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: EpsScalar, den: EpsScalar) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let vd = den.valuation().expect("nonzero denominator");
        let den = den.shift(-vd);
        let num = num.shift(-vd);
        if den.is_monomial() {
            let c = den.leading_coefficient().unwrap().recip();
            return EpsRational {
                num: num.scale(&c),
                den: EpsScalar::one(),
            };
        }
        let vn = num.valuation().unwrap();
        let mut p = to_dense(&num.shift(-vn));
        let mut q = to_dense(&den);
        let g = gcd(&p, &q);
        if g.len() > 1 {
            p = div_rem(&p, &g).0;
            q = div_rem(&q, &g).0;
        }
        let c = q[0].recip();
        for x in p.iter_mut().chain(q.iter_mut()) {
            *x *= &c;
        }
        EpsRational {
            num: from_dense(&p).shift(vn),
            den: from_dense(&q),
        }
    }

    pub fn numerator(&self) -> &EpsScalar {
        &self.num
    }

    pub fn denominator(&self) -> &EpsScalar {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&EpsScalar> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_polynomial() && self.num.is_one()
    }

    pub fn valuation(&self) -> Option<i32> {
        self.num.valuation()
    }

    pub fn is_limited(&self) -> bool {
        self.num.is_limited()
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.num.is_infinitesimal()
    }

    pub fn is_appreciable(&self) -> bool {
        self.num.is_appreciable()
    }

    /// Sign for `ε` a positive infinitesimal (the denominator is positive near 0).
    pub fn signum(&self) -> i32 {
        self.num.signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn compare_abs(&self, other: &Self) -> Ordering {
        (self.abs() - other.abs()).signum().cmp(&0)
    }

    /// Laurent expansion keeping exactly the terms with exponent below `threshold`.
    pub fn expand_below(&self, threshold: i32) -> EpsScalar {
        if self.is_polynomial() {
            return self.num.truncate_below(threshold);
        }
        let vn = self.num.valuation().unwrap();
        if vn >= threshold {
            return EpsScalar::zero();
        }
        let inv = self
            .den
            .inverse(threshold - 1 - vn)
            .expect("denominator is nonzero");
        (&self.num * &inv).truncate_below(threshold)
    }

    /// Exact value at a positive rational `ε`; `None` if the denominator vanishes there.
    pub fn eval_at(&self, eps_value: &Rational) -> Option<Rational> {
        let d = self.den.eval_at(eps_value);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_at(eps_value) / d)
    }

    pub fn eval_f64(&self, eps_value: f64) -> f64 {
        self.num.eval_f64(eps_value) / self.den.eval_f64(eps_value)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        EpsRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn shift(&self, k: i32) -> Self {
        EpsRational {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }
}

impl Default for EpsRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<EpsScalar> for EpsRational {
    fn from(num: EpsScalar) -> Self {
        EpsRational {
            num,
            den: EpsScalar::one(),
        }
    }
}

impl From<Rational> for EpsRational {
    fn from(c: Rational) -> Self {
        EpsRational::constant(c)
    }
}

impl From<i64> for EpsRational {
    fn from(c: i64) -> Self {
        EpsRational::from(EpsScalar::from(c))
    }
}

impl<'a> Add<&'a EpsRational> for &'a EpsRational {
    type Output = EpsRational;
    fn add(self, rhs: &'a EpsRational) -> EpsRational {
        if self.den == rhs.den {
            if self.is_polynomial() {
                return EpsRational::from(&self.num + &rhs.num);
            }
            return EpsRational::canonical(&self.num + &rhs.num, self.den.clone());
        }
        EpsRational::canonical(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a EpsRational> for &'a EpsRational {
    type Output = EpsRational;
    fn sub(self, rhs: &'a EpsRational) -> EpsRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a EpsRational> for &'a EpsRational {
    type Output = EpsRational;
    fn mul(self, rhs: &'a EpsRational) -> EpsRational {
        if self.is_polynomial() && rhs.is_polynomial() {
            return EpsRational::from(&self.num * &rhs.num);
        }
        EpsRational::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &EpsRational {
    type Output = EpsRational;
    fn neg(self) -> EpsRational {
        EpsRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for EpsRational {
    type Output = EpsRational;
    fn neg(self) -> EpsRational {
        -&self
    }
}

forward_owned!(Add, add, EpsRational);
forward_owned!(Sub, sub, EpsRational);
forward_owned!(Mul, mul, EpsRational);

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsRational({self})")
    }
}

impl One for EpsRational {
    fn one() -> Self {
        EpsRational::one()
    }
}

impl Zero for EpsRational {
    fn zero() -> Self {
        EpsRational::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps_scalar::{int, rat};

    fn p(terms: &[(i32, i64)]) -> EpsScalar {
        EpsScalar::from_terms(terms.iter().map(|&(k, c)| (k, int(c))))
    }

    #[test]
    fn canonical_form_cancels_common_factors() {
        // (1 - ε²) / (1 - ε) = 1 + ε
        let x = EpsRational::new(p(&[(0, 1), (2, -1)]), p(&[(0, 1), (1, -1)])).unwrap();
        assert!(x.is_polynomial());
        assert_eq!(x, EpsRational::from(p(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn denominator_is_normalised_at_zero() {
        // ε / (2ε - 4ε²) = (1/2) / (1 - 2ε)
        let x = EpsRational::new(p(&[(1, 1)]), p(&[(1, 2), (2, -4)])).unwrap();
        assert_eq!(x.denominator(), &p(&[(0, 1), (1, -2)]));
        assert_eq!(x.numerator(), &EpsScalar::constant(rat(1, 2)));
        assert_eq!(x.valuation(), Some(0));
    }

    #[test]
    fn field_operations_round_trip() {
        let a = EpsRational::from(p(&[(0, 2), (1, -2)]));
        let inv = a.recip().unwrap();
        assert_eq!(&a * &inv, EpsRational::one());
        let b = EpsRational::from(p(&[(-1, 1), (0, 3)]));
        let s = &(&a + &inv) - &inv;
        assert_eq!(s, a);
        let q = b.div(&a).unwrap();
        assert_eq!(&q * &a, b);
    }

    #[test]
    fn expansion_matches_series_inverse() {
        let a = EpsRational::from(p(&[(0, 2), (1, -2)]));
        let inv = a.recip().unwrap();
        let expected = EpsScalar::from_terms((0..=3).map(|k| (k, rat(1, 2))));
        assert_eq!(inv.expand_below(4), expected);
        let shifted = inv.shift(-1);
        assert_eq!(shifted.expand_below(1).len(), 2);
    }

    #[test]
    fn sign_and_magnitude() {
        let a = EpsRational::from(p(&[(1, -1)])).recip().unwrap();
        assert_eq!(a.signum(), -1);
        assert_eq!(a.valuation(), Some(-1));
        assert_eq!(a.compare_abs(&EpsRational::from(1000)), Ordering::Greater);
        assert_eq!(
            EpsRational::from(p(&[(0, 1), (1, -1)])).recip().unwrap().eval_at(&rat(1, 2)),
            Some(int(2))
        );
    }

    #[test]
    fn rendering() {
        let a = EpsRational::from(p(&[(0, 1), (1, -1)])).recip().unwrap();
        assert_eq!(a.to_string(), "(1)/(1-eps)");
        assert_eq!(EpsRational::from(p(&[(1, 3)])).to_string(), "3*eps");
    }
}
