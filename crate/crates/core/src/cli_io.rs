//! Plain-text documents for flexible systems.
//!
//! ```text
//! name = example
//! 1+o[eps^2], 1, 1+L[eps^3] | 1+o[eps]
//! 1+L[eps^3], -1/2+o[eps^2], -1/2 | -2+o[eps]
//! 1/2*eps+o[eps^3], 1/2, 1+o[eps^2] | eps+o[eps]
//!
//! [profile]
//! eps = 1/100
//! ```
//!
//! Header lines are `key = value`; rows are separated by newlines or `;`,
//! entries by `,`, and the right-hand member follows `|`. Lines starting with
//! `#` are comments. A scalar is a sum of monomials `c`, `c*eps^k`, `eps^k`,
//! or a quotient `(sum)/(sum)`; decimals such as `0.99` are read exactly.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::eps_rational::EpsRational;
use crate::eps_scalar::{EpsScalar, Rational, MAX_EXPONENT, MIN_EXPONENT};
use crate::error::{Error, Result};
use crate::external_number::ExternalNumber;
use crate::flex_matrix::{ExtMatrix, ExtVector};
use crate::neutrix::Neutrix;
use crate::numeric_harness::NumericProfile;
use crate::solver::FlexSystem;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(src: &str, line: usize, column: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            column,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column + self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let end = self.pos + w.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(w.chars()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.chars.len()
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let negative = self.eat('-');
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return Err(self.error("expected an integer"));
        }
        let v: i64 = d.parse().map_err(|_| self.error("integer out of range"))?;
        Ok(if negative { -v } else { v })
    }

    /// `digits ('.' digits)? ('/' digits)?`
    fn number(&mut self) -> Result<Rational> {
        self.skip_ws();
        let whole = self.digits();
        if whole.is_empty() {
            return Err(self.error("expected a number"));
        }
        let mut value = Rational::from_integer(whole.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.error("expected digits after '.'"));
            }
            let den = BigInt::from(10).pow(frac.len() as u32);
            value += Rational::new(frac.parse::<BigInt>().expect("digits"), den);
        }
        if self.peek() == Some('/') && self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let d = self.digits();
            let den: BigInt = d.parse().expect("digits");
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<i32> {
        if !self.eat('^') {
            return Ok(1);
        }
        let k = self.integer()?;
        if k < MIN_EXPONENT as i64 || k > MAX_EXPONENT as i64 {
            return Err(self.error(format!(
                "exponent {k} outside the window [{MIN_EXPONENT}, {MAX_EXPONENT}]"
            )));
        }
        Ok(k as i32)
    }

    /// `c`, `c*eps^k`, `eps^k`.
    fn monomial(&mut self) -> Result<EpsScalar> {
        if self.eat_word("eps") {
            let k = self.exponent()?;
            return Ok(EpsScalar::monomial(Rational::one(), k));
        }
        let c = self.number()?;
        if self.eat('*') {
            if !self.eat_word("eps") {
                return Err(self.error("expected 'eps' after '*'"));
            }
            let k = self.exponent()?;
            return Ok(EpsScalar::monomial(c, k));
        }
        Ok(EpsScalar::constant(c))
    }

    fn polynomial(&mut self) -> Result<EpsScalar> {
        let mut negative = self.eat('-');
        let mut total = EpsScalar::zero();
        loop {
            let m = self.monomial()?;
            total = if negative { &total - &m } else { &total + &m };
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                return Ok(total);
            }
        }
    }

    fn neutrix(&mut self) -> Result<Option<Neutrix>> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let n = match c {
            'o' | 'L' => {
                self.pos += 1;
                let base = if c == 'o' { Neutrix::OSLASH } else { Neutrix::POUNDS };
                if self.eat('[') {
                    let s = self.polynomial()?;
                    self.expect(']')?;
                    base.scalar_mul(&EpsRational::from(s))
                } else {
                    base
                }
            }
            'M' => {
                self.pos += 1;
                self.expect('[')?;
                let l = self.integer()?;
                self.expect(']')?;
                if l < 1 || l > u32::MAX as i64 {
                    return Err(self.error("microhalo level must be at least 1"));
                }
                Neutrix::Micro(l as u32)
            }
            'R' => {
                self.pos += 1;
                Neutrix::Full
            }
            _ => return Ok(None),
        };
        Ok(Some(n))
    }

    fn quotient(&mut self) -> Result<EpsRational> {
        let num = self.polynomial()?;
        self.expect(')')?;
        self.expect('/')?;
        self.expect('(')?;
        let den = self.polynomial()?;
        self.expect(')')?;
        if den.is_zero() {
            return Err(self.error("zero denominator"));
        }
        EpsRational::new(num, den)
    }

    /// A signed sum of monomials, quotients and neutrices.
    fn external(&mut self) -> Result<ExternalNumber> {
        let mut rep = EpsRational::zero();
        let mut neutrix = Neutrix::Zero;
        let mut negative = self.eat('-');
        loop {
            if let Some(n) = self.neutrix()? {
                neutrix = neutrix.add(n);
            } else if self.eat('(') {
                let q = self.quotient()?;
                rep = if negative { &rep - &q } else { &rep + &q };
            } else {
                let m = EpsRational::from(self.monomial()?);
                rep = if negative { &rep - &m } else { &rep + &m };
            }
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        if !self.at_end() {
            return Err(self.error(format!("unexpected '{}'", self.peek().unwrap_or(' '))));
        }
        Ok(ExternalNumber::new(rep, neutrix))
    }
}

fn parse_external_at(s: &str, line: usize, column: usize) -> Result<ExternalNumber> {
    let mut c = Cursor::new(s, line, column);
    if c.at_end() {
        return Err(c.error("empty entry"));
    }
    c.external()
}

pub fn parse_external(s: &str) -> Result<ExternalNumber> {
    parse_external_at(s, 1, 1)
}

/// A real scalar: an external number with zero neutrix.
pub fn parse_scalar(s: &str) -> Result<EpsRational> {
    let x = parse_external(s)?;
    if !x.neutrix().is_zero() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected a scalar, found neutrix {}", x.neutrix()),
        });
    }
    Ok(x.rep().clone())
}

fn parse_rational_at(s: &str, line: usize, column: usize) -> Result<Rational> {
    let mut c = Cursor::new(s, line, column);
    let negative = c.eat('-');
    let v = c.number()?;
    if !c.at_end() {
        return Err(c.error("expected a rational number"));
    }
    Ok(if negative { -v } else { v })
}

/// A parsed `.flex` document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDocument {
    pub header: Vec<(String, String)>,
    pub a: ExtMatrix,
    pub b: ExtVector,
    pub profile: Option<NumericProfile>,
}

impl SystemDocument {
    pub fn from_system(sys: &FlexSystem) -> Self {
        SystemDocument {
            header: Vec::new(),
            a: sys.a.clone(),
            b: sys.b.clone(),
            profile: None,
        }
    }

    pub fn system(&self) -> Result<FlexSystem> {
        FlexSystem::new(self.a.clone(), self.b.clone())
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Canonical text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k} = {v}");
        }
        out.push_str(&render_rows(&self.a, &self.b));
        if let Some(p) = &self.profile {
            out.push('\n');
            out.push_str("[profile]\n");
            out.push_str(&render_profile(p));
        }
        out
    }
}

pub fn render_rows(a: &ExtMatrix, b: &ExtVector) -> String {
    let mut out = String::new();
    for (row, rhs) in a.rows().iter().zip(b.entries()) {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{} | {rhs}", cells.join(", "));
    }
    out
}

pub fn render_profile(p: &NumericProfile) -> String {
    format!(
        "eps = {}\noslash = {}\npounds = {}\nmicro = {}\n",
        p.eps_value, p.oslash_radius, p.pounds_radius, p.micro_radius
    )
}

fn header_line(line: &str) -> Option<(String, String)> {
    if line.contains('|') {
        return None;
    }
    let (k, v) = line.split_once('=')?;
    let k = k.trim();
    if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return None;
    }
    Some((k.to_string(), v.trim().to_string()))
}

fn apply_profile_key(p: &mut NumericProfile, key: &str, value: &str, line: usize, column: usize) -> Result<()> {
    let v = parse_rational_at(value, line, column)?;
    match key {
        "eps" => p.eps_value = v,
        "oslash" => p.oslash_radius = v,
        "pounds" => p.pounds_radius = v,
        "micro" => p.micro_radius = v,
        _ => {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("unknown profile key '{key}'"),
            })
        }
    }
    Ok(())
}

/// Standalone `.profile` text: `key = value` lines, optionally under `[profile]`.
pub fn parse_profile(text: &str) -> Result<NumericProfile> {
    let mut p = NumericProfile::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "[profile]" {
            continue;
        }
        let (k, v) = header_line(line).ok_or_else(|| Error::Parse {
            line: idx + 1,
            column: 1,
            message: "expected 'key = value'".into(),
        })?;
        let col = raw.find('=').map_or(1, |c| c + 2);
        apply_profile_key(&mut p, &k, &v, idx + 1, col)?;
    }
    p.validate()?;
    Ok(p)
}

type Row = (Vec<ExternalNumber>, ExternalNumber);

fn parse_row(seg: &str, line: usize, column: usize) -> Result<Row> {
    let bar = seg.find('|');
    let lhs = &seg[..bar.unwrap_or(seg.len())];
    let mut entries = Vec::new();
    let mut offset = 0;
    for cell in lhs.split(',') {
        let col = column + lhs[..offset].chars().count();
        entries.push(parse_external_at(cell, line, col)?);
        offset += cell.len() + 1;
    }
    let Some(bar) = bar else {
        return Err(Error::Parse {
            line,
            column: column + seg.trim_end().chars().count(),
            message: "row has no right-hand member ('|' missing)".into(),
        });
    };
    let rhs = &seg[bar + 1..];
    let rcol = column + seg[..bar + 1].chars().count();
    if rhs.contains('|') {
        return Err(Error::Parse {
            line,
            column: rcol,
            message: "more than one '|' in a row".into(),
        });
    }
    Ok((entries, parse_external_at(rhs, line, rcol)?))
}

pub fn parse_document(text: &str) -> Result<SystemDocument> {
    let mut header = Vec::new();
    let mut rows: Vec<(usize, Row)> = Vec::new();
    let mut profile: Option<NumericProfile> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == "[profile]" {
            profile = Some(NumericProfile::default());
            continue;
        }
        if let Some(p) = profile.as_mut() {
            let (k, v) = header_line(trimmed).ok_or_else(|| Error::Parse {
                line: line_no,
                column: 1,
                message: "expected 'key = value' in the profile block".into(),
            })?;
            let col = raw.find('=').map_or(1, |c| c + 2);
            apply_profile_key(p, &k, &v, line_no, col)?;
            continue;
        }
        if rows.is_empty() {
            if let Some(kv) = header_line(trimmed) {
                header.push(kv);
                continue;
            }
        }
        let mut offset = 0;
        for seg in raw.split(';') {
            let col = raw[..offset].chars().count() + 1;
            offset += seg.len() + 1;
            if seg.trim().is_empty() {
                continue;
            }
            rows.push((line_no, parse_row(seg, line_no, col)?));
        }
    }
    if let Some(p) = &profile {
        p.validate()?;
    }
    if rows.is_empty() {
        return Err(Error::DimensionMismatch("document has no rows".into()));
    }
    let n = rows.len();
    for (line, (entries, _)) in &rows {
        if entries.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "line {line}: {} coefficients in a system of {n} rows",
                entries.len()
            )));
        }
    }
    if let Some((_, v)) = header.iter().find(|(k, _)| k == "n") {
        if v.parse::<usize>().ok() != Some(n) {
            return Err(Error::DimensionMismatch(format!("header says n = {v} but there are {n} rows")));
        }
    }
    let (matrix, rhs): (Vec<_>, Vec<_>) = rows.into_iter().map(|(_, r)| r).unzip();
    Ok(SystemDocument {
        header,
        a: ExtMatrix::new(matrix)?,
        b: ExtVector::new(rhs)?,
        profile,
    })
}

pub fn parse_system(text: &str) -> Result<FlexSystem> {
    parse_document(text)?.system()
}
