//! The representable lattice of neutrices.
//!
//! From smallest to largest: `Zero`, the microhalos `Micro(ℓ)` (larger level
//! is smaller), the scaled groups `ε^k⊘ ⊂ ε^k£ ⊂ ε^(k-1)⊘`, and `Full`.

use std::cmp::Ordering;
use std::fmt;

use crate::eps_rational::EpsRational;
use crate::error::{Error, Result};

/// `⊘` (infinitesimals) or `£` (limited numbers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Oslash,
    Pounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neutrix {
    Zero,
    /// `£ ε_ℓ^∞` with `ε_1 = ε` and `ε_(ℓ+1) = ε_ℓ^ω`.
    Micro(u32),
    /// `ε^k ⊘` or `ε^k £`.
    Scale(i32, Class),
    Full,
}

impl Neutrix {
    pub const OSLASH: Neutrix = Neutrix::Scale(0, Class::Oslash);
    pub const POUNDS: Neutrix = Neutrix::Scale(0, Class::Pounds);

    pub fn oslash(k: i32) -> Self {
        Neutrix::Scale(k, Class::Oslash)
    }

    pub fn pounds(k: i32) -> Self {
        Neutrix::Scale(k, Class::Pounds)
    }

    fn key(&self) -> (u8, i64, u8) {
        match *self {
            Neutrix::Zero => (0, 0, 0),
            Neutrix::Micro(l) => (1, -(l as i64), 0),
            Neutrix::Scale(k, c) => (2, -(k as i64), c as u8),
            Neutrix::Full => (4, 0, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Neutrix::Zero)
    }

    pub fn is_subset(&self, other: &Neutrix) -> bool {
        self <= other
    }

    /// Sum of groups: the larger one.
    pub fn add(self, other: Neutrix) -> Neutrix {
        self.max(other)
    }

    /// Minkowski product of two groups.
    pub fn mul(self, other: Neutrix) -> Neutrix {
        use Neutrix::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (Full, _) | (_, Full) => Full,
            (Micro(a), Micro(b)) => Micro(a.max(b)),
            (Micro(a), Scale(..)) | (Scale(..), Micro(a)) => Micro(a),
            (Scale(j, c1), Scale(k, c2)) => {
                let c = if c1 == Class::Oslash || c2 == Class::Oslash {
                    Class::Oslash
                } else {
                    Class::Pounds
                };
                Scale(j + k, c)
            }
        }
    }

    /// `a·N` for a real scalar `a`.
    pub fn scalar_mul(self, a: &EpsRational) -> Neutrix {
        let Some(v) = a.valuation() else {
            return Neutrix::Zero;
        };
        match self {
            Neutrix::Scale(k, c) => Neutrix::Scale(k + v, c),
            other => other,
        }
    }

    /// `N/a`.
    pub fn scalar_div(self, a: &EpsRational) -> Result<Neutrix> {
        let v = a.valuation().ok_or(Error::ZeroInverse)?;
        Ok(match self {
            Neutrix::Scale(k, c) => Neutrix::Scale(k - v, c),
            other => other,
        })
    }

    /// Whether the scalar `x` lies in this group.
    pub fn contains(&self, x: &EpsRational) -> bool {
        let Some(v) = x.valuation() else {
            return true;
        };
        match *self {
            Neutrix::Zero | Neutrix::Micro(_) => false,
            Neutrix::Scale(k, Class::Pounds) => v >= k,
            Neutrix::Scale(k, Class::Oslash) => v > k,
            Neutrix::Full => true,
        }
    }

    /// Smallest exponent absorbed by this group, `None` if no monomial is absorbed.
    pub fn absorption_threshold(&self) -> Option<i32> {
        match *self {
            Neutrix::Scale(k, Class::Pounds) => Some(k),
            Neutrix::Scale(k, Class::Oslash) => Some(k + 1),
            _ => None,
        }
    }

    /// Whether `a` is an absorber of this group, i.e. `aN ⊂ N` strictly.
    pub fn is_absorbed_by(&self, a: &EpsRational) -> bool {
        match self {
            Neutrix::Scale(..) => a.valuation().is_some_and(|v| v >= 1),
            _ => false,
        }
    }

    /// Group quotient `A:B = {c | cB ⊆ A}`.
    pub fn quotient(self, divisor: Neutrix) -> Result<MagnitudeClass> {
        use Neutrix::*;
        Ok(match (self, divisor) {
            (_, Zero) => return Err(Error::DivisionByZeroGroup),
            (Full, _) => MagnitudeClass::Neutrix(Full),
            (Zero, _) => MagnitudeClass::Neutrix(Zero),
            (_, Full) => MagnitudeClass::Neutrix(Zero),
            (Scale(j, c1), Scale(k, c2)) => {
                let c = if (c1, c2) == (Class::Oslash, Class::Pounds) {
                    Class::Oslash
                } else {
                    Class::Pounds
                };
                MagnitudeClass::Neutrix(Scale(j - k, c))
            }
            (Micro(a), Micro(b)) if a == b => MagnitudeClass::AllFinitePowers,
            (Micro(a), Micro(b)) => {
                return Err(Error::UnsupportedQuotient(format!(
                    "{}:{}",
                    Micro(a),
                    Micro(b)
                )))
            }
            // every finite power maps a microhalo into a Scale group
            (Scale(..), Micro(_)) => MagnitudeClass::AllFinitePowers,
            (Micro(a), Scale(..)) => MagnitudeClass::Neutrix(Micro(a)),
        })
    }

    pub fn pretty(&self) -> String {
        match *self {
            Neutrix::Zero => "0".into(),
            Neutrix::Micro(l) => format!("M{}", subscript(l)),
            Neutrix::Full => "ℝ".into(),
            Neutrix::Scale(k, c) => {
                let sym = if c == Class::Oslash { "⊘" } else { "£" };
                match k {
                    0 => sym.into(),
                    1 => format!("ε{sym}"),
                    _ => format!("ε{}{sym}", superscript(k)),
                }
            }
        }
    }
}

fn subscript(n: u32) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

fn superscript(n: i32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

impl Ord for Neutrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Neutrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Text-grammar rendering: `0`, `o`, `L`, `o[eps^k]`, `L[eps^k]`, `M[l]`, `R`.
impl fmt::Display for Neutrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Neutrix::Zero => f.write_str("0"),
            Neutrix::Micro(l) => write!(f, "M[{l}]"),
            Neutrix::Full => f.write_str("R"),
            Neutrix::Scale(k, c) => {
                let sym = if c == Class::Oslash { "o" } else { "L" };
                match k {
                    0 => f.write_str(sym),
                    1 => write!(f, "{sym}[eps]"),
                    _ => write!(f, "{sym}[eps^{k}]"),
                }
            }
        }
    }
}

/// A neutrix, or the class of all finite powers of `ε` (a quotient that is not
/// itself a representable neutrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MagnitudeClass {
    Neutrix(Neutrix),
    AllFinitePowers,
}

impl MagnitudeClass {
    fn key(&self) -> (u8, i64, u8) {
        match self {
            MagnitudeClass::Neutrix(n) => n.key(),
            MagnitudeClass::AllFinitePowers => (3, 0, 0),
        }
    }

    pub fn is_subset(&self, other: &MagnitudeClass) -> bool {
        self <= other
    }

    pub fn as_neutrix(&self) -> Option<Neutrix> {
        match self {
            MagnitudeClass::Neutrix(n) => Some(*n),
            MagnitudeClass::AllFinitePowers => None,
        }
    }

    pub fn pretty(&self) -> String {
        match self {
            MagnitudeClass::Neutrix(n) => n.pretty(),
            MagnitudeClass::AllFinitePowers => "£ε⁻∞".into(),
        }
    }
}

impl From<Neutrix> for MagnitudeClass {
    fn from(n: Neutrix) -> Self {
        MagnitudeClass::Neutrix(n)
    }
}

impl Ord for MagnitudeClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for MagnitudeClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MagnitudeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagnitudeClass::Neutrix(n) => write!(f, "{n}"),
            MagnitudeClass::AllFinitePowers => f.write_str("L[eps^-inf]"),
        }
    }
}
