//! Numeric instantiation: `ε` becomes a number, neutrices become intervals,
//! and concrete floating systems are solved and compared with predictions.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::eps_rational::EpsRational;
use crate::eps_scalar::{pow_rational, rat, Rational};
use crate::error::{Error, Result};
use crate::external_number::ExternalNumber;
use crate::flex_matrix::ExtVector;
use crate::neutrix::{Class, Neutrix};
use crate::solver::FlexSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericProfile {
    pub eps_value: Rational,
    pub oslash_radius: Rational,
    pub pounds_radius: Rational,
    /// Radius used for every microhalo. Zero maps `M[l]` to `{0}`.
    pub micro_radius: Rational,
}

impl Default for NumericProfile {
    fn default() -> Self {
        NumericProfile {
            eps_value: rat(1, 100),
            oslash_radius: rat(1, 10),
            pounds_radius: rat(2, 1),
            micro_radius: rat(0, 1),
        }
    }
}

impl NumericProfile {
    pub fn validate(&self) -> Result<()> {
        if !self.eps_value.is_positive() {
            return Err(Error::BadProfile("eps must be positive".into()));
        }
        for (name, r) in [
            ("oslash", &self.oslash_radius),
            ("pounds", &self.pounds_radius),
            ("micro", &self.micro_radius),
        ] {
            if r.is_negative() {
                return Err(Error::BadProfile(format!("{name} radius is negative")));
            }
        }
        Ok(())
    }

    /// Exact half-width of the interval standing for `n`.
    pub fn radius(&self, n: Neutrix) -> Result<Rational> {
        match n {
            Neutrix::Zero => Ok(Rational::zero()),
            Neutrix::Micro(_) => Ok(self.micro_radius.clone()),
            Neutrix::Scale(k, class) => {
                let base = match class {
                    Class::Oslash => &self.oslash_radius,
                    Class::Pounds => &self.pounds_radius,
                };
                Ok(base * pow_rational(&self.eps_value, k))
            }
            Neutrix::Full => Err(Error::UnboundedNeutrix),
        }
    }

    pub fn eval(&self, x: &EpsRational) -> Result<Rational> {
        x.eval_at(&self.eps_value).ok_or_else(|| Error::PoleAtEps(x.to_string()))
    }

    pub fn eps_f64(&self) -> f64 {
        to_f64(&self.eps_value)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn center(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn radius(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// `[c - r, c + r]` with `c` the representative at `ε` and `r` the neutrix radius.
pub fn instantiate(x: &ExternalNumber, prof: &NumericProfile) -> Result<Interval> {
    let r = prof.radius(x.neutrix())?;
    let c = prof.eval(x.rep())?;
    Ok(Interval {
        lo: to_f64(&(&c - &r)),
        hi: to_f64(&(&c + &r)),
    })
}

pub fn instantiate_vector(v: &ExtVector, prof: &NumericProfile) -> Result<Vec<Interval>> {
    v.entries().iter().map(|x| instantiate(x, prof)).collect()
}

/// Gauss-Jordan with partial pivoting; ties go to the smallest row index.
pub fn float_gj_solve(m: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("numeric system is not square".into()));
    }
    let scale = m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let mut a: Vec<Vec<f64>> = m.iter().zip(b).map(|(r, &bi)| {
        let mut row = r.clone();
        row.push(bi);
        row
    }).collect();
    for k in 0..n {
        let mut best = k;
        for i in k + 1..n {
            if a[i][k].abs() > a[best][k].abs() {
                best = i;
            }
        }
        if a[best][k].abs() <= f64::EPSILON * scale * n as f64 {
            return Err(Error::NumericSingular(k + 1));
        }
        a.swap(k, best);
        let piv = a[k][k];
        for x in a[k].iter_mut() {
            *x /= piv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k] == 0.0 {
                continue;
            }
            let f = row[k];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n]).collect())
}

/// Exact rational solution of `m x = b`.
pub fn exact_solve(m: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("system is not square".into()));
    }
    let mut a: Vec<Vec<Rational>> = m.iter().zip(b).map(|(r, bi)| {
        let mut row = r.clone();
        row.push(bi.clone());
        row
    }).collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
        a.swap(k, p);
        let piv = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = &*x / &piv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &f * p;
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// Representative matrix and right-hand side evaluated at `ε`, exactly.
pub fn center_system(sys: &FlexSystem, prof: &NumericProfile) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let m = sys
        .a
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| prof.eval(e.rep())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let b = sys.b.entries().iter().map(|e| prof.eval(e.rep())).collect::<Result<Vec<_>>>()?;
    Ok((m, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationRow {
    pub fixture: String,
    /// 1-based.
    pub coordinate: usize,
    pub value: f64,
    pub center: f64,
    pub deviation: f64,
    pub radius: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeviationReport {
    pub rows: Vec<DeviationRow>,
}

impl DeviationReport {
    /// Solve `m x = b` in floating point and compare with `center` coordinatewise.
    pub fn add_fixture(&mut self, name: &str, m: &[Vec<f64>], b: &[f64], center: &[f64], radii: &[f64]) -> Result<()> {
        let x = float_gj_solve(m, b)?;
        if center.len() != x.len() || radii.len() != x.len() {
            return Err(Error::DimensionMismatch(format!("fixture {name}: prediction length differs")));
        }
        for (i, ((&v, &c), &r)) in x.iter().zip(center).zip(radii).enumerate() {
            let deviation = (v - c).abs();
            self.rows.push(DeviationRow {
                fixture: name.to_string(),
                coordinate: i + 1,
                value: v,
                center: c,
                deviation,
                radius: r,
                within: deviation <= r,
            });
        }
        Ok(())
    }

    pub fn fixture_rows(&self, name: &str) -> Vec<&DeviationRow> {
        self.rows.iter().filter(|r| r.fixture == name).collect()
    }

    /// Largest deviation of a fixture, with its coordinate.
    pub fn max_deviation(&self, name: &str) -> Option<(usize, f64)> {
        self.fixture_rows(name)
            .into_iter()
            .map(|r| (r.coordinate, r.deviation))
            .fold(None, |best, cur| match best {
                Some((_, d)) if d >= cur.1 => best,
                _ => Some(cur),
            })
    }

    pub fn values(&self, name: &str) -> Vec<f64> {
        self.fixture_rows(name).into_iter().map(|r| r.value).collect()
    }

    pub fn all_within(&self) -> bool {
        self.rows.iter().all(|r| r.within)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["fixture", "coordinate", "value", "center", "deviation", "radius", "verdict"])
            .expect("writing to memory");
        for r in &self.rows {
            w.write_record([
                r.fixture.clone(),
                r.coordinate.to_string(),
                format!("{:.9}", r.value),
                format!("{:.9}", r.center),
                format!("{:.9}", r.deviation),
                format!("{:.9}", r.radius),
                if r.within { "within" } else { "outside" }.to_string(),
            ])
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>5} {:>14} {:>14} {:>12} {:>10}  verdict",
            "fixture", "coord", "value", "center", "deviation", "radius"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>5} {:>14.7} {:>14.7} {:>12.7} {:>10.5}  {}",
                r.fixture,
                r.coordinate,
                r.value,
                r.center,
                r.deviation,
                r.radius,
                if r.within { "within" } else { "outside" }
            );
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    json!({
                        "fixture": r.fixture,
                        "coordinate": r.coordinate,
                        "value": r.value,
                        "center": r.center,
                        "deviation": r.deviation,
                        "radius": r.radius,
                        "within": r.within,
                    })
                })
                .collect(),
        )
    }
}

/// Deviation of the float solution of the centered system from a predicted solution.
pub fn deviation_report(
    sys: &FlexSystem,
    solution: &ExtVector,
    prof: &NumericProfile,
    fixtures: &[(&str, Vec<Vec<f64>>, Vec<f64>)],
) -> Result<DeviationReport> {
    let intervals = instantiate_vector(solution, prof)?;
    let center: Vec<f64> = intervals.iter().map(Interval::center).collect();
    let radii: Vec<f64> = intervals.iter().map(Interval::radius).collect();
    let mut report = DeviationReport::default();
    let (m, b) = center_system(sys, prof)?;
    let m: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let b: Vec<f64> = b.iter().map(to_f64).collect();
    report.add_fixture("center", &m, &b, &center, &radii)?;
    for (name, fm, fb) in fixtures {
        report.add_fixture(name, fm, fb, &center, &radii)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Coefficients drawn from their intervals, right-hand side at its center.
    MatrixOnly,
    /// Coefficients and right-hand side both drawn.
    Full,
}

/// One representative system drawn uniformly from the instantiated intervals.
pub fn sample_system(
    sys: &FlexSystem,
    prof: &NumericProfile,
    rng: &mut impl Rng,
    mode: SampleMode,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut draw = |x: &ExternalNumber, random: bool| -> Result<f64> {
        let iv = instantiate(x, prof)?;
        Ok(if random && iv.hi > iv.lo {
            rng.gen_range(iv.lo..=iv.hi)
        } else {
            iv.center()
        })
    };
    let m = sys
        .a
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| draw(e, true)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let b = sys
        .b
        .entries()
        .iter()
        .map(|e| draw(e, mode == SampleMode::Full))
        .collect::<Result<Vec<_>>>()?;
    Ok((m, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    pub samples: usize,
    pub inside: usize,
    /// Per coordinate, over all samples.
    pub max_deviation: Vec<f64>,
    pub radii: Vec<f64>,
}

impl SampleSummary {
    pub fn fraction_inside(&self) -> f64 {
        if self.samples == 0 {
            1.0
        } else {
            self.inside as f64 / self.samples as f64
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "samples": self.samples,
            "inside": self.inside,
            "fraction_inside": self.fraction_inside(),
            "max_deviation": self.max_deviation,
            "radii": self.radii,
        })
    }
}

/// Float solutions of seeded samples, checked against the instantiated solution.
pub fn sample_validation(
    sys: &FlexSystem,
    solution: &ExtVector,
    prof: &NumericProfile,
    samples: usize,
    seed: u64,
    mode: SampleMode,
) -> Result<SampleSummary> {
    let intervals = instantiate_vector(solution, prof)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = solution.len();
    let mut summary = SampleSummary {
        samples,
        inside: 0,
        max_deviation: vec![0.0; n],
        radii: intervals.iter().map(Interval::radius).collect(),
    };
    for _ in 0..samples {
        let (m, b) = sample_system(sys, prof, &mut rng, mode)?;
        let x = float_gj_solve(&m, &b)?;
        let mut ok = true;
        for (i, (v, iv)) in x.iter().zip(&intervals).enumerate() {
            summary.max_deviation[i] = summary.max_deviation[i].max((v - iv.center()).abs());
            ok &= iv.contains(*v);
        }
        if ok {
            summary.inside += 1;
        }
    }
    Ok(summary)
}
