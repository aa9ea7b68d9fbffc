//! Solving flexible systems `A·x ⊆ B`: stability, Gauss-Jordan and Cramer
//! solutions, admissibility probes and equivalent simplified systems.

use std::fmt;

use serde_json::{json, Value};

use crate::eps_rational::EpsRational;
use crate::eps_scalar::rat;
use crate::error::{Error, Result};
use crate::external_number::ExternalNumber;
use crate::flex_matrix::{
    is_properly_arranged, is_reduced_representative, properly_arrange, ExtMatrix, ExtVector, RealMatrix,
};
use crate::gauss_jordan::{run_procedure, GjOptions, GjTrace};
use crate::neutrix::{MagnitudeClass, Neutrix};

/// A system of inclusions `A·x ⊆ B` together with a chosen representative matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexSystem {
    pub a: ExtMatrix,
    pub b: ExtVector,
    pub p: RealMatrix,
    /// Set by [`uniformize`]; solutions are then feasible for the original system.
    pub uniformized: bool,
}

impl FlexSystem {
    pub fn new(a: ExtMatrix, b: ExtVector) -> Result<Self> {
        if a.n() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix of order {} with {} right-hand entries",
                a.n(),
                b.len()
            )));
        }
        let p = a.representative();
        Ok(FlexSystem {
            a,
            b,
            p,
            uniformized: false,
        })
    }

    /// Replace the canonical representative matrix by another valid one.
    pub fn with_representative(mut self, p: RealMatrix) -> Result<Self> {
        if !self.a.has_representative(&p) {
            return Err(Error::NotReduced(
                "the given matrix is not a representative matrix of A".into(),
            ));
        }
        self.p = p;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn is_uniform(&self) -> bool {
        self.b.is_uniform()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b.is_homogeneous()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub r_a: MagnitudeClass,
    pub r_b: MagnitudeClass,
    pub delta: ExternalNumber,
    /// `B̲`.
    pub b_min: Neutrix,
    /// `R(A) ⊆ ⊘`.
    pub cond1: bool,
    /// `R(A) ⊆ R(B)`.
    pub cond2: bool,
    /// `Δ` is not an absorber of `B̲`.
    pub cond3: bool,
    pub stable: bool,
    /// All entries of `A` limited. Informational.
    pub limited: bool,
    pub diagnostics: Vec<String>,
}

impl StabilityReport {
    pub fn summary(&self) -> String {
        if self.stable {
            "stable".into()
        } else {
            self.diagnostics.join("; ")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.delta.to_string(),
            "r_a": self.r_a.to_string(),
            "r_b": self.r_b.to_string(),
            "b_min": self.b_min.to_string(),
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "limited": self.limited,
            "stable": self.stable,
            "diagnostics": self.diagnostics,
        })
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "violated" };
        writeln!(f, "Delta = {}", self.delta.pretty())?;
        writeln!(f, "R(A) = {}, R(B) = {}, min B = {}", self.r_a.pretty(), self.r_b.pretty(), self.b_min.pretty())?;
        writeln!(f, "cond1 R(A) in o: {}", mark(self.cond1))?;
        writeln!(f, "cond2 R(A) in R(B): {}", mark(self.cond2))?;
        writeln!(f, "cond3 Delta not an absorber of min B: {}", mark(self.cond3))?;
        for d in &self.diagnostics {
            writeln!(f, "{d}")?;
        }
        write!(f, "{}", if self.stable { "stable" } else { "not stable" })
    }
}

/// The three stability conditions.
pub fn analyze_stability(sys: &FlexSystem) -> Result<StabilityReport> {
    let delta = sys.a.det()?;
    stability_with_delta(&sys.a, &sys.b, &delta)
}

/// Stability conditions with a precomputed determinant.
pub fn stability_with_delta(a: &ExtMatrix, b: &ExtVector, delta: &ExternalNumber) -> Result<StabilityReport> {
    if !delta.is_zeroless() {
        return Err(Error::Singular);
    }
    let r_a: MagnitudeClass = a.max_neutrix().scalar_div(delta.rep())?.into();
    let r_b = b.relative_uncertainty()?;
    let b_min = b.min_neutrix();
    let oslash = MagnitudeClass::from(Neutrix::OSLASH);
    let cond1 = r_a.is_subset(&oslash);
    let cond2 = r_a.is_subset(&r_b);
    let cond3 = !b_min.is_absorbed_by(delta.rep());
    let mut diagnostics = Vec::new();
    if !cond1 {
        diagnostics.push(format!("cond1 violated: R(A) = {} ⊄ ⊘", r_a.pretty()));
    }
    if !cond2 {
        diagnostics.push(format!(
            "cond2 violated: R(A) = {} ⊄ R(B) = {}",
            r_a.pretty(),
            r_b.pretty()
        ));
    }
    if !cond3 {
        diagnostics.push(format!(
            "cond3 violated: Δ = {} is an absorber of B̲ = {}",
            delta.pretty(),
            b_min.pretty()
        ));
    }
    Ok(StabilityReport {
        stable: cond1 && cond2 && cond3,
        r_a,
        r_b,
        delta: delta.clone(),
        b_min,
        cond1,
        cond2,
        cond3,
        limited: a.is_limited(),
        diagnostics,
    })
}

/// Replace every right-hand neutrix by the smallest one.
pub fn uniformize(sys: &FlexSystem) -> FlexSystem {
    if sys.is_uniform() {
        return sys.clone();
    }
    FlexSystem {
        b: sys.b.with_neutrix(sys.b.min_neutrix()),
        uniformized: true,
        ..sys.clone()
    }
}

/// A system brought into the form the procedure expects.
#[derive(Debug, Clone)]
pub struct PreparedSystem {
    pub a: ExtMatrix,
    pub b: ExtVector,
    pub p: RealMatrix,
    pub row_perm: Vec<usize>,
    /// Unknown `i` of the prepared system is original unknown `col_perm[i]`.
    pub col_perm: Vec<usize>,
    /// Both sides were multiplied by this factor.
    pub scale: EpsRational,
}

/// Properly arrange and reduce. A representative matrix that is already
/// arranged and reduced is kept in its given order.
pub fn prepare(sys: &FlexSystem) -> Result<PreparedSystem> {
    let n = sys.n();
    let identity: Vec<usize> = (0..n).collect();
    let already = is_properly_arranged(&sys.p).is_ok() && is_reduced_representative(&sys.p).is_ok();
    let (row_perm, col_perm) = if already {
        (identity.clone(), identity)
    } else {
        let arr = properly_arrange(&sys.p)?;
        (arr.row_perm, arr.col_perm)
    };
    let mut a = sys.a.permuted(&row_perm, &col_perm);
    let mut b = sys.b.permuted(&row_perm);
    let mut p = sys.p.permuted(&row_perm, &col_perm);
    let p11 = p.get(0, 0).clone();
    if p11.is_zero() {
        return Err(Error::Singular);
    }
    let scale = p11.recip()?;
    if !scale.is_one() {
        a = a.scaled(&scale);
        b = b.scaled(&scale);
        p = p.scaled(&scale);
    }
    a.is_reduced().map_err(|v| Error::NotReduced(v.to_string()))?;
    Ok(PreparedSystem {
        a,
        b,
        p,
        row_perm,
        col_perm,
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gj,
    Cramer,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gj => "gj",
            Method::Cramer => "cramer",
            Method::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// `A·S = B`.
    Exact,
    /// `A·S ⊆ B` only.
    Inclusion,
    /// Neither could be shown.
    Unknown,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::Inclusion => "inclusion",
            Exactness::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub vector: ExtVector,
    pub method: Method,
    pub exactness: Exactness,
    /// False when solving was forced on an unstable system.
    pub verified: bool,
    pub stability: StabilityReport,
    pub trace: Option<GjTrace>,
}

impl Solution {
    pub fn to_json(&self) -> Value {
        json!({
            "solution": self.vector.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "method": self.method.to_string(),
            "exactness": self.exactness.to_string(),
            "verified": self.verified,
            "stability": self.stability.to_json(),
        })
    }
}

fn exactness(sys: &FlexSystem, x: &ExtVector) -> Result<Exactness> {
    let image = sys.a.mul_vec(x)?;
    Ok(if image == sys.b {
        Exactness::Exact
    } else if image.is_subset(&sys.b) {
        Exactness::Inclusion
    } else {
        Exactness::Unknown
    })
}

fn checked_stability(sys: &FlexSystem, force: bool) -> Result<StabilityReport> {
    if !sys.is_uniform() {
        return Err(Error::NotUniform);
    }
    let report = analyze_stability(sys)?;
    if !report.stable && !force {
        return Err(Error::Unstable(Box::new(report)));
    }
    Ok(report)
}

/// Gauss-Jordan solution `G^P(B)`, in the original order of unknowns.
pub fn solve_gj(sys: &FlexSystem, force: bool) -> Result<Solution> {
    let stability = checked_stability(sys, force)?;
    let prep = prepare(sys)?;
    let trace = run_procedure(
        &prep.a,
        &prep.b,
        &prep.p,
        GjOptions {
            rearrange_on_zero_pivot: true,
            skip_stability_audit: false,
        },
    )?;
    let combined: Vec<usize> = trace.col_perm.iter().map(|&c| prep.col_perm[c]).collect();
    let vector = trace.final_rhs().unpermuted(&combined);
    Ok(Solution {
        exactness: exactness(sys, &vector)?,
        vector,
        method: Method::Gj,
        verified: stability.stable,
        stability,
        trace: Some(trace),
    })
}

/// Cramer vector `det(M_i)/Δ` alone.
pub fn cramer_vector(a: &ExtMatrix, b: &ExtVector) -> Result<ExtVector> {
    let delta = a.det()?;
    if !delta.is_zeroless() {
        return Err(Error::Singular);
    }
    let entries = (0..a.n())
        .map(|i| a.with_column(i, b)?.det()?.div(&delta))
        .collect::<Result<Vec<_>>>()?;
    ExtVector::new(entries)
}

/// Cramer solution. Stability is reported but not required.
pub fn solve_cramer(sys: &FlexSystem) -> Result<Solution> {
    let stability = analyze_stability(sys)?;
    let vector = cramer_vector(&sys.a, &sys.b)?;
    Ok(Solution {
        exactness: exactness(sys, &vector)?,
        vector,
        method: Method::Cramer,
        verified: stability.stable,
        stability,
        trace: None,
    })
}

/// Both methods, concurrently; their results must agree exactly.
pub fn solve(sys: &FlexSystem, force: bool) -> Result<Solution> {
    checked_stability(sys, force)?;
    let (gj, cramer) = std::thread::scope(|s| {
        let gj = s.spawn(|| solve_gj(sys, force));
        let cramer = s.spawn(|| solve_cramer(sys));
        (
            gj.join().expect("gauss-jordan thread panicked"),
            cramer.join().expect("cramer thread panicked"),
        )
    });
    let (gj, cramer) = (gj?, cramer?);
    if gj.vector != cramer.vector {
        return Err(Error::MethodMismatch {
            gj: gj.vector.to_string(),
            cramer: cramer.vector.to_string(),
        });
    }
    Ok(Solution {
        method: Method::Both,
        ..gj
    })
}

/// Solve with a chosen method.
pub fn solve_with(sys: &FlexSystem, method: Method, force: bool) -> Result<Solution> {
    match method {
        Method::Gj => solve_gj(sys, force),
        Method::Cramer => {
            checked_stability(sys, force)?;
            solve_cramer(sys)
        }
        Method::Both => solve(sys, force),
    }
}

/// Solution of a near-identity system: the right-hand side itself.
pub fn near_identity_solve(sys: &FlexSystem) -> Result<Solution> {
    sys.a
        .is_near_identity()
        .map_err(|v| Error::NotNearIdentity(v.to_string()))?;
    let stability = checked_stability(sys, false)?;
    Ok(Solution {
        exactness: exactness(sys, &sys.b)?,
        vector: sys.b.clone(),
        method: Method::Cramer,
        verified: true,
        stability,
        trace: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    /// 1-based.
    pub row: usize,
    pub lhs: ExternalNumber,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub rows: Vec<RowCheck>,
}

impl Admissibility {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failing_rows(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.ok).map(|r| r.row).collect()
    }
}

/// Whether the real vector `x` satisfies every inclusion `Σ α_ij x_j ⊆ β_i`.
pub fn admissible_check(x: &[EpsRational], a: &ExtMatrix, b: &ExtVector) -> Result<Admissibility> {
    if x.len() != a.n() || b.len() != a.n() {
        return Err(Error::DimensionMismatch("candidate length differs from system order".into()));
    }
    let rows = (0..a.n())
        .map(|i| {
            let lhs = x
                .iter()
                .enumerate()
                .fold(ExternalNumber::zero(), |acc, (j, xj)| &acc + &a.get(i, j).scale(xj));
            let ok = lhs.is_subset(b.get(i));
            RowCheck { row: i + 1, lhs, ok }
        })
        .collect();
    Ok(Admissibility { rows })
}

/// Offsets that stay inside `neutrix`, placed at its boundary scale.
pub fn probe_offsets(neutrix: Neutrix) -> Vec<EpsRational> {
    match neutrix {
        Neutrix::Zero | Neutrix::Micro(_) => Vec::new(),
        Neutrix::Scale(k, crate::neutrix::Class::Pounds) => [(1, 1), (-1, 1), (1, 2), (-1, 2)]
            .iter()
            .map(|&(p, q)| EpsRational::monomial(rat(p, q), k))
            .collect(),
        Neutrix::Scale(k, crate::neutrix::Class::Oslash) => [1, -1, 2, -2]
            .iter()
            .map(|&c| EpsRational::monomial(rat(c, 1), k + 1))
            .collect(),
        Neutrix::Full => vec![
            EpsRational::one(),
            -EpsRational::one(),
            EpsRational::monomial(rat(1, 1), -4),
            EpsRational::monomial(rat(-1, 1), -4),
        ],
    }
}

/// Center, one-coordinate shifts, and two all-coordinate shifts.
pub fn probe_points(s: &ExtVector) -> Vec<Vec<EpsRational>> {
    let center = s.representative();
    let mut out = vec![center.clone()];
    let offsets: Vec<Vec<EpsRational>> = s.neutrices().into_iter().map(probe_offsets).collect();
    for (j, offs) in offsets.iter().enumerate() {
        for o in offs {
            let mut x = center.clone();
            x[j] = &x[j] + o;
            out.push(x);
        }
    }
    for pick in [0, 1] {
        if offsets.iter().any(|o| o.len() > pick) {
            let x = center
                .iter()
                .zip(&offsets)
                .map(|(c, o)| o.get(pick).map_or_else(|| c.clone(), |d| c + d))
                .collect();
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Verification {
    /// `A·S ⊆ B`.
    pub inclusion: bool,
    pub exact: bool,
    pub probes: usize,
    pub failures: Vec<(Vec<EpsRational>, Admissibility)>,
}

impl Verification {
    pub fn all_probes_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact inclusion plus admissibility of every probe representative of `s`.
pub fn verify_solution(sys: &FlexSystem, s: &ExtVector) -> Result<Verification> {
    let image = sys.a.mul_vec(s)?;
    let points = probe_points(s);
    let probes = points.len();
    let mut failures = Vec::new();
    for x in points {
        let adm = admissible_check(&x, &sys.a, &sys.b)?;
        if !adm.ok() {
            failures.push((x, adm));
        }
    }
    Ok(Verification {
        inclusion: image.is_subset(&sys.b),
        exact: image == sys.b,
        probes,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplifyMode {
    /// Truncate representatives and widen every neutrix to `Ā`.
    Widen,
    /// Keep only the truncated real matrix.
    Collapse,
}

#[derive(Debug, Clone)]
pub struct EquivalenceCertificate {
    pub original: StabilityReport,
    pub simplified: StabilityReport,
    /// Every simplified representative differs from the original one by an element of `Ā`.
    pub within_max_neutrix: bool,
    pub original_solution: ExtVector,
    pub simplified_solution: ExtVector,
}

impl EquivalenceCertificate {
    pub fn holds(&self) -> bool {
        self.original.stable
            && self.simplified.stable
            && self.within_max_neutrix
            && self.original_solution == self.simplified_solution
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds(),
            "within_max_neutrix": self.within_max_neutrix,
            "original": self.original.to_json(),
            "simplified": self.simplified.to_json(),
            "original_solution": self.original_solution.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "simplified_solution": self.simplified_solution.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn truncate_by(x: &EpsRational, n: Neutrix) -> EpsRational {
    match n.absorption_threshold() {
        Some(t) => EpsRational::from(x.expand_below(t)),
        None => x.clone(),
    }
}

/// An equivalent system with simpler coefficients, and the evidence for it.
pub fn simplify(sys: &FlexSystem, mode: SimplifyMode) -> Result<(FlexSystem, EquivalenceCertificate)> {
    let original = checked_stability(sys, false)?;
    let top = sys.a.max_neutrix();
    let n = sys.n();
    let mut within = true;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let rep = sys.a.get(i, j).rep();
                    let q = truncate_by(rep, top);
                    within &= top.contains(&(rep - &q));
                    match mode {
                        SimplifyMode::Widen => ExternalNumber::new(q, top),
                        SimplifyMode::Collapse => ExternalNumber::real(q),
                    }
                })
                .collect()
        })
        .collect();
    let simplified = FlexSystem::new(ExtMatrix::new(rows)?, sys.b.clone())?;
    let simplified_report = checked_stability(&simplified, false)?;
    let original_solution = solve(sys, false)?.vector;
    let simplified_solution = solve(&simplified, false)?.vector;
    Ok((
        simplified,
        EquivalenceCertificate {
            original,
            simplified: simplified_report,
            within_max_neutrix: within,
            original_solution,
            simplified_solution,
        },
    ))
}

/// Determinants of representative matrices of `a`: the canonical one and
/// each single-entry probe shift of it. All lie in `det(a)`, which may be larger.
pub fn representative_determinants(a: &ExtMatrix) -> Vec<EpsRational> {
    let p = a.representative();
    let mut dets = vec![p.det()];
    for i in 0..a.n() {
        for j in 0..a.n() {
            for d in probe_offsets(a.get(i, j).neutrix()) {
                let mut q = p.clone();
                q.set(i, j, p.get(i, j) + &d);
                dets.push(q.det());
            }
        }
    }
    dets
}
