//! External numbers `a + A`: a real representative plus a neutrix.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::eps_rational::EpsRational;
use crate::eps_scalar::forward_owned;
use crate::error::{Error, Result};
use crate::neutrix::{Class, MagnitudeClass, Neutrix};

/// Normalized: no monomial of the representative lies in the neutrix, and a
/// `Full` neutrix forces the representative to zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExternalNumber {
    rep: EpsRational,
    neutrix: Neutrix,
}

impl ExternalNumber {
    pub fn new(rep: EpsRational, neutrix: Neutrix) -> Self {
        let rep = match (neutrix, neutrix.absorption_threshold()) {
            (Neutrix::Full, _) => EpsRational::zero(),
            (_, Some(t)) => EpsRational::from(rep.expand_below(t)),
            _ => rep,
        };
        ExternalNumber { rep, neutrix }
    }

    pub fn real(rep: impl Into<EpsRational>) -> Self {
        ExternalNumber {
            rep: rep.into(),
            neutrix: Neutrix::Zero,
        }
    }

    pub fn neutricial(neutrix: Neutrix) -> Self {
        ExternalNumber {
            rep: EpsRational::zero(),
            neutrix,
        }
    }

    pub fn zero() -> Self {
        Self::real(EpsRational::zero())
    }

    pub fn one() -> Self {
        Self::real(EpsRational::one())
    }

    pub fn rep(&self) -> &EpsRational {
        &self.rep
    }

    pub fn neutrix(&self) -> Neutrix {
        self.neutrix
    }

    pub fn is_real(&self) -> bool {
        self.neutrix.is_zero()
    }

    pub fn is_zeroless(&self) -> bool {
        !self.rep.is_zero() && self.neutrix != Neutrix::Full
    }

    pub fn is_neutricial(&self) -> bool {
        self.rep.is_zero()
    }

    /// `α ⊆ £`.
    pub fn is_limited(&self) -> bool {
        self.rep.is_limited() && self.neutrix <= Neutrix::POUNDS
    }

    pub fn contains(&self, x: &EpsRational) -> bool {
        self.neutrix.contains(&(x - &self.rep))
    }

    /// `α ⊆ β`.
    pub fn is_subset(&self, other: &ExternalNumber) -> bool {
        self.neutrix <= other.neutrix && other.neutrix.contains(&(&self.rep - &other.rep))
    }

    pub fn abs(&self) -> Self {
        ExternalNumber {
            rep: self.rep.abs(),
            neutrix: self.neutrix,
        }
    }

    /// Multiplication by a real scalar.
    pub fn scale(&self, c: &EpsRational) -> Self {
        Self::new(&self.rep * c, self.neutrix.scalar_mul(c))
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.is_zeroless() {
            return Err(Error::DivisionByNonZeroless(self.to_string()));
        }
        let inv = self.rep.recip()?;
        let neutrix = self.neutrix.scalar_mul(&(&inv * &inv));
        Ok(Self::new(inv, neutrix))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Order of external numbers: every element of `self` is bounded by some element of `other`.
    pub fn leq(&self, other: &Self) -> bool {
        let c = &self.rep - &other.rep;
        let n = self.neutrix.max(other.neutrix);
        if n.contains(&c) {
            self.neutrix <= other.neutrix
        } else {
            c.signum() < 0
        }
    }

    pub fn geq(&self, other: &Self) -> bool {
        (-self).leq(&-other)
    }

    /// Disjoint and below.
    pub fn lt(&self, other: &Self) -> bool {
        let c = &self.rep - &other.rep;
        let n = self.neutrix.max(other.neutrix);
        !n.contains(&c) && c.signum() < 0
    }

    pub fn gt(&self, other: &Self) -> bool {
        other.lt(self)
    }

    /// `R(α) = A/α` for zeroless `α`, else everything.
    pub fn relative_uncertainty(&self) -> MagnitudeClass {
        if !self.is_zeroless() {
            return Neutrix::Full.into();
        }
        self.neutrix
            .scalar_div(&self.rep)
            .expect("zeroless representative")
            .into()
    }

    /// `⊘α`, the group of numbers infinitesimal relative to `α`.
    pub fn oslash_times(&self) -> Neutrix {
        match self.rep.valuation() {
            Some(v) if self.neutrix != Neutrix::Full => Neutrix::Scale(v, Class::Oslash),
            _ => Neutrix::OSLASH.mul(self.neutrix),
        }
    }

    /// Larger of two values under the order.
    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a.leq(b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn pretty(&self) -> String {
        if self.neutrix.is_zero() {
            return self.rep.to_string();
        }
        if self.rep.is_zero() {
            return self.neutrix.pretty();
        }
        format!("{}+{}", self.rep, self.neutrix.pretty())
    }
}

impl From<EpsRational> for ExternalNumber {
    fn from(rep: EpsRational) -> Self {
        Self::real(rep)
    }
}

impl From<Neutrix> for ExternalNumber {
    fn from(n: Neutrix) -> Self {
        Self::neutricial(n)
    }
}

impl<'a> Add<&'a ExternalNumber> for &'a ExternalNumber {
    type Output = ExternalNumber;
    fn add(self, rhs: &'a ExternalNumber) -> ExternalNumber {
        ExternalNumber::new(&self.rep + &rhs.rep, self.neutrix.add(rhs.neutrix))
    }
}

impl<'a> Sub<&'a ExternalNumber> for &'a ExternalNumber {
    type Output = ExternalNumber;
    fn sub(self, rhs: &'a ExternalNumber) -> ExternalNumber {
        ExternalNumber::new(&self.rep - &rhs.rep, self.neutrix.add(rhs.neutrix))
    }
}

impl<'a> Mul<&'a ExternalNumber> for &'a ExternalNumber {
    type Output = ExternalNumber;
    fn mul(self, rhs: &'a ExternalNumber) -> ExternalNumber {
        let mut n = rhs
            .neutrix
            .scalar_mul(&self.rep)
            .add(self.neutrix.scalar_mul(&rhs.rep));
        if !self.is_zeroless() && !rhs.is_zeroless() {
            n = n.add(self.neutrix.mul(rhs.neutrix));
        }
        ExternalNumber::new(&self.rep * &rhs.rep, n)
    }
}

impl Neg for &ExternalNumber {
    type Output = ExternalNumber;
    fn neg(self) -> ExternalNumber {
        ExternalNumber {
            rep: -&self.rep,
            neutrix: self.neutrix,
        }
    }
}

impl Neg for ExternalNumber {
    type Output = ExternalNumber;
    fn neg(self) -> ExternalNumber {
        -&self
    }
}

forward_owned!(Add, add, ExternalNumber);
forward_owned!(Sub, sub, ExternalNumber);
forward_owned!(Mul, mul, ExternalNumber);

/// Text-grammar rendering: `<scalar>+<neutrix>`, or either part alone.
impl fmt::Display for ExternalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.neutrix.is_zero() {
            return write!(f, "{}", self.rep);
        }
        if self.rep.is_zero() {
            return write!(f, "{}", self.neutrix);
        }
        write!(f, "{}+{}", self.rep, self.neutrix)
    }
}

impl fmt::Debug for ExternalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExternalNumber({self})")
    }
}
