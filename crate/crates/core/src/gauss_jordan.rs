//! The Gauss-Jordan procedure on external systems.
//!
//! Operation matrices are built from a real representative matrix that is
//! tracked exactly alongside the external intermediate systems. The closed
//! forms in terms of minors of the original representative are provided as an
//! independent path.

use std::fmt::Write as _;

use serde::Serialize;

use crate::eps_rational::EpsRational;
use crate::error::{Error, Result};
use crate::external_number::ExternalNumber;
use crate::flex_matrix::{real_mul, real_mul_vec, ExtMatrix, ExtVector, RealMatrix};
use crate::neutrix::Neutrix;
use crate::solver::{stability_with_delta, StabilityReport};

/// Evidence recomputed from each intermediate system.
#[derive(Debug, Clone)]
pub struct StepAudit {
    /// `Δ^(q)`, by full Leibniz expansion.
    pub delta: ExternalNumber,
    /// `Ā^(q)`.
    pub max_neutrix: Neutrix,
    /// `[B]^(q)`, the neutricial right-hand side pushed through the same operations.
    pub bracket: ExtVector,
    pub bracket_preserved: bool,
    pub delta_zeroless: bool,
    /// `⊘Δ < |Δ^(q)|` and `Δ^(q) ⊂ £`, with `Δ` the original determinant.
    pub delta_bounds: bool,
    /// `Ā^(q) ⊆ ⊘Δ^(q) ⊆ ⊘`.
    pub neutrix_bound: bool,
    pub entries_limited: bool,
    pub stability: Option<StabilityReport>,
    pub stability_ok: bool,
    pub bounds_ok: bool,
}

#[derive(Debug, Clone)]
pub struct GjStep {
    pub q: usize,
    pub operation: RealMatrix,
    pub matrix: ExtMatrix,
    pub rhs: ExtVector,
    /// `P^(q)`, the exact image of the representative matrix.
    pub representative: RealMatrix,
    pub pivot: EpsRational,
    pub minor_ratio: EpsRational,
    /// Trailing-block swap applied before this step, if a zero pivot forced one.
    pub swap: Option<PivotSwap>,
    pub audit: StepAudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PivotSwap {
    pub position: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct GjTrace {
    pub initial_matrix: ExtMatrix,
    pub initial_rhs: ExtVector,
    pub initial_representative: RealMatrix,
    pub delta: ExternalNumber,
    pub steps: Vec<GjStep>,
    /// Unknown `i` of the final system is original unknown `col_perm[i]`.
    pub col_perm: Vec<usize>,
}

impl GjTrace {
    pub fn final_matrix(&self) -> &ExtMatrix {
        self.steps.last().map(|s| &s.matrix).unwrap_or(&self.initial_matrix)
    }

    pub fn final_rhs(&self) -> &ExtVector {
        self.steps.last().map(|s| &s.rhs).unwrap_or(&self.initial_rhs)
    }

    /// `G^P(B)` in the original order of unknowns.
    pub fn solution(&self) -> ExtVector {
        self.final_rhs().unpermuted(&self.col_perm)
    }

    pub fn operations(&self) -> Vec<RealMatrix> {
        self.steps.iter().map(|s| s.operation.clone()).collect()
    }

    pub fn all_audits_ok(&self) -> bool {
        self.steps.iter().all(|s| s.audit.stability_ok && s.audit.bounds_ok)
    }

    pub fn had_swaps(&self) -> bool {
        self.steps.iter().any(|s| s.swap.is_some())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GjOptions {
    /// On a zero pivot, swap in the largest entry of the trailing block instead of failing.
    pub rearrange_on_zero_pivot: bool,
    /// Skip the per-step stability audit (the other audits still run).
    pub skip_stability_audit: bool,
}

/// Operation matrix `G_q` from the current representative `P^(q-1)`.
pub fn build_step_iterative(p_prev: &RealMatrix, q: usize) -> Result<RealMatrix> {
    let n = p_prev.n();
    check_step(n, q)?;
    let k = (q - 1) / 2;
    let mut g = RealMatrix::identity(n);
    if q % 2 == 1 {
        let pivot = p_prev.get(k, k);
        if pivot.is_zero() {
            return Err(Error::ZeroPivot { step: q });
        }
        g.set(k, k, pivot.recip()?);
    } else {
        for i in (0..n).filter(|&i| i != k) {
            g.set(i, k, -p_prev.get(i, k));
        }
    }
    Ok(g)
}

fn check_step(n: usize, q: usize) -> Result<()> {
    if q == 0 || q > 2 * n {
        return Err(Error::BadIndices(format!("step {q} outside 1..={}", 2 * n)));
    }
    Ok(())
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

fn sign(e: usize) -> EpsRational {
    if e % 2 == 0 {
        EpsRational::one()
    } else {
        -EpsRational::one()
    }
}

fn leading_minors(p: &RealMatrix, upto: usize) -> Result<Vec<EpsRational>> {
    (0..=upto)
        .map(|k| {
            let m = p.leading_minor(k);
            if m.is_zero() {
                Err(Error::ZeroPivot { step: 2 * k - 1 })
            } else {
                Ok(m)
            }
        })
        .collect()
}

/// `G_q` computed from minors of the original matrix only.
pub fn build_step_explicit(p: &RealMatrix, q: usize) -> Result<RealMatrix> {
    let n = p.n();
    check_step(n, q)?;
    let k = (q - 1) / 2;
    let mut g = RealMatrix::identity(n);
    if q % 2 == 1 {
        let m = leading_minors(p, k + 1)?;
        g.set(k, k, m[k].div(&m[k + 1])?);
        return Ok(g);
    }
    let m_k = if k == 0 { EpsRational::one() } else { leading_minors(p, k)?[k].clone() };
    for i in 0..k {
        // row i of the processed block: delete column i from 0..=k
        let cols: Vec<usize> = (0..=k).filter(|&c| c != i).collect();
        let minor = p.minor(&range(0, k), &cols)?;
        let v = &sign(k + i + 1) * &minor.div(&m_k)?;
        g.set(i, k, -v);
    }
    for i in k + 1..n {
        let mut rows = range(0, k);
        rows.push(i);
        let mut cols = range(0, k);
        cols.push(k);
        let minor = p.minor(&rows, &cols)?;
        g.set(i, k, -minor.div(&m_k)?);
    }
    Ok(g)
}

/// `P^(2k)` from minors of `P`: unit columns left of `k`, signed minor quotients elsewhere.
pub fn explicit_intermediate(p: &RealMatrix, k: usize) -> Result<RealMatrix> {
    let n = p.n();
    if k > n {
        return Err(Error::BadIndices(format!("k = {k} exceeds order {n}")));
    }
    let m = leading_minors(p, k)?;
    let m_k = &m[k];
    let mut out = RealMatrix::identity(n);
    for i in 0..n {
        for j in k..n {
            let v = if i < k {
                let mut cols: Vec<usize> = (0..k).filter(|&c| c != i).collect();
                cols.push(j);
                cols.sort_unstable();
                // (-1)^{k+i} with 1-based i
                &sign(k + i + 1) * &p.minor(&range(0, k), &cols)?.div(m_k)?
            } else {
                let mut rows = range(0, k);
                rows.push(i);
                let mut cols = range(0, k);
                cols.push(j);
                p.minor(&rows, &cols)?.div(m_k)?
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Inverse operation matrices `G_q⁻¹`, `q = 1..=2n`, in closed form.
pub fn inverse_steps(p: &RealMatrix) -> Result<Vec<RealMatrix>> {
    let n = p.n();
    let m = leading_minors(p, n)?;
    let mut out = Vec::with_capacity(2 * n);
    for q in 1..=2 * n {
        let k = (q - 1) / 2;
        if q % 2 == 1 {
            let mut g = RealMatrix::identity(n);
            g.set(k, k, m[k + 1].div(&m[k])?);
            out.push(g);
        } else {
            let mut g = build_step_explicit(p, q)?;
            for i in (0..n).filter(|&i| i != k) {
                let v = -g.get(i, k);
                g.set(i, k, v);
            }
            out.push(g);
        }
    }
    Ok(out)
}

/// `(G^P)⁻¹ v`: the inverse operations applied from the last step back to the first.
pub fn run_inverse(inverses: &[RealMatrix], v: &ExtVector) -> Result<ExtVector> {
    inverses.iter().rev().try_fold(v.clone(), |acc, g| real_mul_vec(g, &acc))
}

/// Apply the operation matrices of a trace, in order, to another vector.
pub fn apply_operations(ops: &[RealMatrix], v: &ExtVector) -> Result<ExtVector> {
    ops.iter().try_fold(v.clone(), |acc, g| real_mul_vec(g, &acc))
}

/// Runs the `2n` steps on `A|B` with representative matrix `p`.
pub fn run_procedure(a: &ExtMatrix, b: &ExtVector, p: &RealMatrix, opts: GjOptions) -> Result<GjTrace> {
    let n = a.n();
    if b.len() != n || p.n() != n {
        return Err(Error::ShapeMismatch("system dimensions differ".into()));
    }
    if !b.is_uniform() {
        return Err(Error::NotUniform);
    }
    if !a.has_representative(p) {
        return Err(Error::NotReduced(
            "the given matrix is not a representative matrix of A".into(),
        ));
    }
    crate::flex_matrix::is_reduced_representative(p).map_err(|v| Error::NotReduced(v.to_string()))?;
    let delta = a.det()?;
    let bracket0 = b.neutricial_part();
    let mut cur_a = a.clone();
    let mut cur_b = b.clone();
    let mut cur_p = p.clone();
    let mut bracket = bracket0.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut steps = Vec::with_capacity(2 * n);
    for q in 1..=2 * n {
        let k = (q - 1) / 2;
        let mut swap = None;
        if q % 2 == 1 && cur_p.get(k, k).is_zero() {
            if !opts.rearrange_on_zero_pivot {
                return Err(Error::ZeroPivot { step: q });
            }
            let s = trailing_pivot(&cur_p, k).ok_or(Error::ZeroPivot { step: q })?;
            let mut rp: Vec<usize> = (0..n).collect();
            let mut cp: Vec<usize> = (0..n).collect();
            rp.swap(k, s.row);
            cp.swap(k, s.col);
            cur_p = cur_p.permuted(&rp, &cp);
            cur_a = cur_a.permuted(&rp, &cp);
            cur_b = cur_b.permuted(&rp);
            bracket = bracket.permuted(&rp);
            col_perm.swap(k, s.col);
            swap = Some(PivotSwap {
                position: k + 1,
                row: s.row + 1,
                col: s.col + 1,
            });
        }
        let pivot = cur_p.get(k, k).clone();
        let g = build_step_iterative(&cur_p, q)?;
        let next_p = g.mul(&cur_p)?;
        let next_a = real_mul(&g, &cur_a)?;
        let next_b = real_mul_vec(&g, &cur_b)?;
        bracket = real_mul_vec(&g, &bracket)?;
        let minor_ratio = if q % 2 == 1 { g.get(k, k).clone() } else { pivot.clone() };
        let audit = audit_step(&next_a, &next_b, &bracket, &bracket0, &delta, opts)?;
        steps.push(GjStep {
            q,
            operation: g,
            matrix: next_a.clone(),
            rhs: next_b.clone(),
            representative: next_p.clone(),
            pivot,
            minor_ratio,
            swap,
            audit,
        });
        cur_a = next_a;
        cur_b = next_b;
        cur_p = next_p;
    }
    Ok(GjTrace {
        initial_matrix: a.clone(),
        initial_rhs: b.clone(),
        initial_representative: p.clone(),
        delta,
        steps,
        col_perm,
    })
}

struct Position {
    row: usize,
    col: usize,
}

fn trailing_pivot(p: &RealMatrix, k: usize) -> Option<Position> {
    let n = p.n();
    let mut best: Option<Position> = None;
    for i in k..n {
        for j in k..n {
            let x = p.get(i, j);
            if x.is_zero() {
                continue;
            }
            let better = best
                .as_ref()
                .is_none_or(|b| x.compare_abs(p.get(b.row, b.col)) == std::cmp::Ordering::Greater);
            if better {
                best = Some(Position { row: i, col: j });
            }
        }
    }
    best
}

fn audit_step(
    a: &ExtMatrix,
    b: &ExtVector,
    bracket: &ExtVector,
    bracket0: &ExtVector,
    delta0: &ExternalNumber,
    opts: GjOptions,
) -> Result<StepAudit> {
    let delta = a.det()?;
    let max_neutrix = a.max_neutrix();
    let delta_zeroless = delta.is_zeroless();
    let pounds = ExternalNumber::neutricial(Neutrix::POUNDS);
    let lower = ExternalNumber::neutricial(delta0.oslash_times());
    let delta_bounds = delta_zeroless
        && lower.lt(&delta.abs())
        && delta.is_subset(&pounds)
        && delta != pounds;
    let neutrix_bound = delta_zeroless
        && max_neutrix <= delta.oslash_times()
        && delta.oslash_times() <= Neutrix::OSLASH;
    let entries_limited = a.is_limited();
    let stability = if opts.skip_stability_audit || !delta_zeroless {
        None
    } else {
        Some(stability_with_delta(a, b, &delta)?)
    };
    let stability_ok = stability.as_ref().is_some_and(|s| s.stable);
    Ok(StepAudit {
        bracket_preserved: bracket == bracket0,
        bracket: bracket.clone(),
        delta,
        max_neutrix,
        delta_zeroless,
        delta_bounds,
        neutrix_bound,
        entries_limited,
        stability,
        stability_ok: stability_ok || opts.skip_stability_audit,
        bounds_ok: delta_bounds && neutrix_bound && entries_limited,
    })
}

/// Row operations of `G_q` in the `L_i` notation.
pub fn describe_operation(g: &RealMatrix, q: usize) -> String {
    let n = g.n();
    let k = (q - 1) / 2;
    if q % 2 == 1 {
        let c = g.get(k, k);
        if c.is_one() {
            return "identity".into();
        }
        return format!("L{} <- ({c})*L{}", k + 1, k + 1);
    }
    let ops: Vec<String> = (0..n)
        .filter(|&i| i != k && !g.get(i, k).is_zero())
        .map(|i| format!("L{} <- L{} + ({})*L{}", i + 1, i + 1, g.get(i, k), k + 1))
        .collect();
    if ops.is_empty() {
        "identity".into()
    } else {
        ops.join("; ")
    }
}

#[derive(Serialize)]
struct AuditJson {
    delta: String,
    max_neutrix: String,
    bracket_preserved: bool,
    delta_zeroless: bool,
    delta_bounds: bool,
    neutrix_bound: bool,
    entries_limited: bool,
    stable: Option<bool>,
    stability_ok: bool,
    bounds_ok: bool,
}

#[derive(Serialize)]
struct StepJson {
    q: usize,
    description: String,
    swap: Option<PivotSwap>,
    operation: Vec<Vec<String>>,
    matrix: Vec<Vec<String>>,
    rhs: Vec<String>,
    pivot: String,
    minor_ratio: String,
    audit: AuditJson,
}

#[derive(Serialize)]
struct TraceJson {
    n: usize,
    delta: String,
    initial_matrix: Vec<Vec<String>>,
    initial_rhs: Vec<String>,
    representative: Vec<Vec<String>>,
    steps: Vec<StepJson>,
    solution: Vec<String>,
    column_order: Vec<usize>,
}

fn grid<T: ToString>(rows: &[Vec<T>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn list<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

impl GjTrace {
    pub fn to_json(&self) -> serde_json::Value {
        let steps = self
            .steps
            .iter()
            .map(|s| StepJson {
                q: s.q,
                description: describe_operation(&s.operation, s.q),
                swap: s.swap,
                operation: grid(s.operation.rows()),
                matrix: grid(s.matrix.rows()),
                rhs: list(s.rhs.entries()),
                pivot: s.pivot.to_string(),
                minor_ratio: s.minor_ratio.to_string(),
                audit: AuditJson {
                    delta: s.audit.delta.to_string(),
                    max_neutrix: s.audit.max_neutrix.to_string(),
                    bracket_preserved: s.audit.bracket_preserved,
                    delta_zeroless: s.audit.delta_zeroless,
                    delta_bounds: s.audit.delta_bounds,
                    neutrix_bound: s.audit.neutrix_bound,
                    entries_limited: s.audit.entries_limited,
                    stable: s.audit.stability.as_ref().map(|r| r.stable),
                    stability_ok: s.audit.stability_ok,
                    bounds_ok: s.audit.bounds_ok,
                },
            })
            .collect();
        let json = TraceJson {
            n: self.initial_matrix.n(),
            delta: self.delta.to_string(),
            initial_matrix: grid(self.initial_matrix.rows()),
            initial_rhs: list(self.initial_rhs.entries()),
            representative: grid(self.initial_representative.rows()),
            steps,
            solution: list(self.solution().entries()),
            column_order: self.col_perm.iter().map(|c| c + 1).collect(),
        };
        serde_json::to_value(json).expect("trace serializes")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Delta = {}", self.delta.pretty());
        let _ = writeln!(out, "A|B =");
        render_system(&mut out, &self.initial_matrix, &self.initial_rhs);
        for s in &self.steps {
            let _ = writeln!(out);
            if let Some(sw) = s.swap {
                let _ = writeln!(
                    out,
                    "swap: row {} and column {} moved to position {}",
                    sw.row, sw.col, sw.position
                );
            }
            let _ = writeln!(out, "step {}: {}", s.q, describe_operation(&s.operation, s.q));
            render_system(&mut out, &s.matrix, &s.rhs);
            let a = &s.audit;
            let _ = writeln!(
                out,
                "  audit: Delta^(q) = {}, max neutrix = {}, [B] preserved = {}, bounds = {}, stable = {}",
                a.delta.pretty(),
                a.max_neutrix.pretty(),
                a.bracket_preserved,
                a.bounds_ok,
                a.stability_ok
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "solution = {}", self.solution());
        out
    }
}

fn render_system(out: &mut String, a: &ExtMatrix, b: &ExtVector) {
    for i in 0..a.n() {
        let cells: Vec<String> = a.rows()[i].iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  [ {} | {} ]", cells.join(", "), b.get(i));
    }
}
