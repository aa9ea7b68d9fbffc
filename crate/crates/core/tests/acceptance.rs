//! Acceptance criteria. Each criterion prints one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use flexsys::cli_io::{parse_external, parse_scalar};
use flexsys::eps_scalar::rat;
use flexsys::fixtures::{self, grid};
use flexsys::gauss_jordan::{
    build_step_explicit, build_step_iterative, explicit_intermediate, inverse_steps, run_inverse,
};
use flexsys::numeric_harness::{
    float_gj_solve, sample_validation, DeviationReport, NumericProfile, SampleMode,
};
use flexsys::random::{diagonally_eliminable, stable_system, RandomSystem};
use flexsys::solver::{
    analyze_stability, prepare, simplify, solve, solve_cramer, solve_gj, verify_solution, SimplifyMode,
};
use flexsys::{EpsRational, ExtMatrix, ExtVector, ExternalNumber, FlexSystem, MagnitudeClass, Neutrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn vector(entries: &[&str]) -> ExtVector {
    ExtVector::new(entries.iter().map(|s| parse_external(s).expect("valid entry")).collect()).expect("nonempty")
}

fn matrix(rows: &[&[&str]]) -> ExtMatrix {
    ExtMatrix::new(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_external(s).expect("valid entry")).collect())
            .collect(),
    )
    .expect("square")
}

fn sys(text: &str) -> FlexSystem {
    fixtures::system(text).expect("fixture parses")
}

fn criterion_1() -> Outcome {
    let s = sys(fixtures::WORKED);
    let report = analyze_stability(&s).map_err(err)?;
    ensure!(report.cond1 && report.cond2 && report.cond3 && report.stable, "stability: {}", report.summary());
    ensure!(
        report.delta == parse_external("-3/4+o[eps^2]").unwrap(),
        "Delta = {}",
        report.delta
    );
    let expected = vector(&["-1+o[eps]", "4-3*eps+o[eps]", "-2+3*eps+o[eps]"]);
    let gj = solve_gj(&s, false).map_err(err)?;
    let cramer = solve_cramer(&s).map_err(err)?;
    ensure!(gj.vector == expected, "GJ solution {}", gj.vector);
    ensure!(cramer.vector == expected, "Cramer solution {}", cramer.vector);
    let trace = gj.trace.expect("trace");
    ensure!(!trace.had_swaps(), "unexpected pivot swap");
    let printed: [(usize, &[&[&str]], &[&str]); 5] = [
        (
            2,
            &[
                &["1+o[eps^2]", "1", "1+L[eps^3]"],
                &["o[eps^2]", "-3/2+o[eps^2]", "-3/2+L[eps^3]"],
                &["o[eps^3]", "1/2-1/2*eps", "1-1/2*eps+o[eps^2]"],
            ],
            &["1+o[eps]", "-3+o[eps]", "1/2*eps+o[eps]"],
        ),
        (
            3,
            &[
                &["1+o[eps^2]", "1", "1+L[eps^3]"],
                &["o[eps^2]", "1+o[eps^2]", "1+L[eps^3]"],
                &["o[eps^3]", "1/2-1/2*eps", "1-1/2*eps+o[eps^2]"],
            ],
            &["1+o[eps]", "2+o[eps]", "1/2*eps+o[eps]"],
        ),
        (
            4,
            &[
                &["1+o[eps^2]", "o[eps^2]", "L[eps^3]"],
                &["o[eps^2]", "1+o[eps^2]", "1+L[eps^3]"],
                &["o[eps^2]", "o[eps^2]", "1/2+o[eps^2]"],
            ],
            &["-1+o[eps]", "2+o[eps]", "-1+3/2*eps+o[eps]"],
        ),
        (
            5,
            &[
                &["1+o[eps^2]", "o[eps^2]", "L[eps^3]"],
                &["o[eps^2]", "1+o[eps^2]", "1+L[eps^3]"],
                &["o[eps^2]", "o[eps^2]", "1+o[eps^2]"],
            ],
            &["-1+o[eps]", "2+o[eps]", "-2+3*eps+o[eps]"],
        ),
        (
            6,
            &[
                &["1+o[eps^2]", "o[eps^2]", "L[eps^3]"],
                &["o[eps^2]", "1+o[eps^2]", "o[eps^2]"],
                &["o[eps^2]", "o[eps^2]", "1+o[eps^2]"],
            ],
            &["-1+o[eps]", "4-3*eps+o[eps]", "-2+3*eps+o[eps]"],
        ),
    ];
    ensure!(trace.steps[0].operation.is_identity(), "step 1 is not the identity");
    for (q, rows, rhs) in printed {
        let step = &trace.steps[q - 1];
        ensure!(step.matrix == matrix(rows), "A^({q}) = {}", step.matrix);
        ensure!(step.rhs == vector(rhs), "B^({q}) = {}", step.rhs);
    }
    ensure!(trace.all_audits_ok(), "a step audit failed");
    Ok(format!("S = {expected}; 5 printed intermediate systems matched"))
}

fn criterion_2() -> Outcome {
    let s = sys(fixtures::MICROHALO);
    let report = analyze_stability(&s).map_err(err)?;
    ensure!(report.stable, "stability: {}", report.summary());
    let delta = parse_external("-eps+M[1]").unwrap();
    ensure!(report.delta == delta && delta.is_zeroless(), "Delta = {}", report.delta);
    let expected = vector(&["eps^-1+1+M[1]", "-eps^-1+M[1]"]);
    let both = solve(&s, false).map_err(err)?;
    ensure!(both.vector == expected, "solution {}", both.vector);
    Ok(format!("Delta = {delta}, S = {expected}"))
}

fn criterion_3() -> Outcome {
    let r5 = analyze_stability(&sys(fixtures::INFEASIBLE)).map_err(err)?;
    ensure!(!r5.cond2 && !r5.stable, "infeasible system: {}", r5.summary());

    let s6 = sys(fixtures::ABSORBED_BLOWUP);
    let r6 = analyze_stability(&s6).map_err(err)?;
    ensure!(!r6.cond3, "absorbed system cond3 not reported: {}", r6.summary());
    let forced6 = solve_gj(&s6, true).map_err(err)?;
    ensure!(!forced6.verified, "forced result not marked unverified");
    ensure!(forced6.vector == vector(&["o[eps^-1]", "o[eps^-1]"]), "absorbed system forced {}", forced6.vector);
    let v6 = verify_solution(&s6, &forced6.vector).map_err(err)?;
    ensure!(!v6.all_probes_pass(), "absorbed system representatives all admissible");
    ensure!(
        v6.failures.iter().any(|(x, _)| *x == forced6.vector.representative()),
        "center representative admissible in absorbed system"
    );

    let s7 = sys(fixtures::ABSORBED_SOLVABLE);
    let r7 = analyze_stability(&s7).map_err(err)?;
    ensure!(!r7.cond3, "solvable absorbed system cond3 not reported: {}", r7.summary());
    let forced7 = solve_gj(&s7, true).map_err(err)?;
    ensure!(forced7.vector == vector(&["1+o", "o[eps^-1]"]), "solvable absorbed system forced {}", forced7.vector);
    let v7 = verify_solution(&s7, &forced7.vector).map_err(err)?;
    ensure!(v7.all_probes_pass() && v7.inclusion, "solvable absorbed system probe failures: {}", v7.failures.len());
    Ok(format!(
        "infeasible: {}; absorbed: {} with {}/{} probes failing; solvable absorbed: cond3 violated, {} probes admissible",
        r5.summary(),
        r6.summary(),
        v6.failures.len(),
        v6.probes,
        v7.probes
    ))
}

fn criterion_4() -> Outcome {
    let q_sys = sys(fixtures::FOUR_UNKNOWNS_REAL);
    let expected = vector(&["-1/2+L[eps]", "-13/8+L[eps]", "3/4+L[eps]", "3/2+L[eps]"]);
    let gj_q = solve_gj(&q_sys, false).map_err(err)?;
    ensure!(gj_q.vector == expected, "G^Q(B) = {}", gj_q.vector);

    let p_sys = sys(fixtures::FOUR_UNKNOWNS);
    let q = q_sys.a.representative();
    let det_q = q.det();
    ensure!(det_q == EpsRational::from(-3), "det Q = {det_q}");
    ensure!(q.leading_minor(2) == EpsRational::from(2), "m2(Q) = {}", q.leading_minor(2));
    ensure!(q.leading_minor(3) == EpsRational::from(-2), "m3(Q) = {}", q.leading_minor(3));
    let p = p_sys.a.representative();
    let det_p = p.det();
    ensure!(det_p == p.minor_leibniz(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), "Bareiss and Leibniz differ");
    ensure!(Neutrix::pounds(1).contains(&(&det_p - &det_q)), "det P = {det_p} not in -3+L[eps]");
    let m2 = parse_scalar("2-4*eps+3*eps^2").unwrap();
    let m3 = parse_scalar("-2+7/2*eps-9/2*eps^2+6*eps^3").unwrap();
    ensure!(p.leading_minor(2) == m2, "m2(P) = {}", p.leading_minor(2));
    ensure!(p.leading_minor(3) == m3, "m3(P) = {}", p.leading_minor(3));

    let (simplified, cert) = simplify(&p_sys, SimplifyMode::Collapse).map_err(err)?;
    ensure!(simplified.a == q_sys.a, "collapsed matrix {}", simplified.a);
    ensure!(cert.holds(), "certificate does not hold");
    ensure!(cert.original_solution == expected, "G^P(B) = {}", cert.original_solution);
    let delta_p = analyze_stability(&p_sys).map_err(err)?.delta;
    ensure!(delta_p == parse_external("-3+L[eps]").unwrap(), "Delta(P|B) = {delta_p}");
    for (text, det) in [(fixtures::FOUR_UNKNOWNS, &delta_p), (fixtures::FOUR_UNKNOWNS_REAL, &ExternalNumber::real(det_q.clone()))] {
        let doc = flexsys::cli_io::parse_document(text).map_err(err)?;
        let recorded = parse_external(doc.header_value("det").unwrap_or("")).map_err(err)?;
        ensure!(recorded == *det, "fixture records det = {recorded}, computed {det}");
    }
    Ok(format!("X = {expected}; det P = {det_p} in -3+L[eps], det Q = -3"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = 0;
    for n in [2usize, 3, 4, 5] {
        for i in 0..50 {
            let p = diagonally_eliminable(&mut rng, n, i % 2 == 1);
            let mut cur = p.clone();
            for q in 1..=2 * n {
                let it = build_step_iterative(&cur, q).map_err(err)?;
                let ex = build_step_explicit(&p, q).map_err(err)?;
                ensure!(it == ex, "n = {n}, q = {q}: operation matrices differ for\n{p}");
                cur = it.mul(&cur).map_err(err)?;
                if q % 2 == 0 {
                    let inter = explicit_intermediate(&p, q / 2).map_err(err)?;
                    ensure!(inter == cur, "n = {n}, k = {}: intermediate differs for\n{p}", q / 2);
                }
            }
            ensure!(cur.is_identity(), "final matrix is not the identity");
            cases += 1;
        }
    }
    Ok(format!("{cases} matrices, every step equal"))
}

fn stable_family() -> Vec<RandomSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..100).map(|i| stable_system(&mut rng, 2 + i % 3)).collect()
}

fn criterion_6(family: &[RandomSystem]) -> Outcome {
    let mut steps = 0;
    for (idx, r) in family.iter().enumerate() {
        let s = &r.system;
        let gj = solve_gj(s, false).map_err(err)?;
        let trace = gj.trace.as_ref().expect("trace");
        ensure!(!trace.had_swaps(), "system {idx}: pivot swap in an arranged system");
        for st in &trace.steps {
            let a = &st.audit;
            ensure!(a.bracket_preserved, "system {idx}, q = {}: [B] changed", st.q);
            ensure!(a.delta_zeroless, "system {idx}, q = {}: Delta^(q) = {}", st.q, a.delta);
            ensure!(a.delta_bounds, "system {idx}, q = {}: Delta^(q) = {} out of bounds", st.q, a.delta);
            ensure!(a.neutrix_bound, "system {idx}, q = {}: max neutrix {}", st.q, a.max_neutrix);
            ensure!(a.entries_limited, "system {idx}, q = {}: unlimited entry", st.q);
            ensure!(a.stability_ok, "system {idx}, q = {}: intermediate system unstable", st.q);
            steps += 1;
        }
        ensure!(trace.final_matrix().is_near_identity().is_ok(), "system {idx}: final matrix {}", trace.final_matrix());
        let prep = prepare(s).map_err(err)?;
        let inv = inverse_steps(&prep.p).map_err(err)?;
        let back = run_inverse(&inv, trace.final_rhs()).map_err(err)?;
        ensure!(back == prep.b, "system {idx}: inverse procedure gives {} for {}", back, prep.b);
    }
    Ok(format!("{} systems, {steps} audited steps", family.len()))
}

fn criterion_7(family: &[RandomSystem]) -> Outcome {
    for (idx, r) in family.iter().enumerate() {
        let s = &r.system;
        let gj = solve_gj(s, false).map_err(err)?;
        let cramer = solve_cramer(s).map_err(err)?;
        ensure!(gj.vector == cramer.vector, "system {idx}: GJ {} vs Cramer {}", gj.vector, cramer.vector);
        let alt = s.clone().with_representative(r.alternative.clone()).map_err(err)?;
        let gj_alt = solve_gj(&alt, false).map_err(err)?;
        ensure!(gj_alt.vector == gj.vector, "system {idx}: P' gives {} vs {}", gj_alt.vector, gj.vector);
    }
    Ok(format!("{} systems, GJ = Cramer and independent of P", family.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut distributive_cases = 0;
    for case in 0..10_000 {
        let (alpha, beta, gamma) = (common::external(&mut rng), common::external(&mut rng), common::external(&mut rng));
        let lhs = &(&alpha + &beta) * &gamma;
        let rhs = &(&alpha * &gamma) + &(&beta * &gamma);
        ensure!(lhs.is_subset(&rhs), "case {case}: ({alpha}+{beta})({gamma}) = {lhs} not in {rhs}");
        let c = ExternalNumber::neutricial(gamma.neutrix());
        let corrected = &(&lhs + &(&c * &alpha)) + &(&c * &beta);
        ensure!(rhs == corrected, "case {case}: correction identity {rhs} vs {corrected} for {alpha}, {beta}, {gamma}");
        let ra = alpha.relative_uncertainty();
        let rb = beta.relative_uncertainty();
        if gamma.relative_uncertainty() <= ra.max(rb) {
            ensure!(lhs == rhs, "case {case}: distributivity fails for {alpha}, {beta}, {gamma}");
            distributive_cases += 1;
        }

        let z = common::zeroless(&mut rng);
        let b = common::bounded_neutrix(&mut rng);
        let nb = ExternalNumber::neutricial(b);
        let scaled = &z * &nb;
        ensure!(scaled.neutrix() == b.scalar_mul(z.rep()), "case {case}: {z}*{b} = {scaled}");
        if z.is_limited() && !b.is_absorbed_by(z.rep()) {
            let quotient = nb.div(&z).map_err(err)?;
            ensure!(scaled == nb && quotient == nb, "case {case}: {z} and {b}: {scaled}, {quotient}");
        }
        let inv = z.recip().map_err(err)?;
        let expected = z.neutrix().scalar_div(&(z.rep() * z.rep())).map_err(err)?;
        ensure!(inv.neutrix() == expected, "case {case}: N(1/{z}) = {} vs {expected}", inv.neutrix());
        let k = 2 + (case % 4) as u32;
        let power = z.pow(k);
        let expected = z.neutrix().scalar_mul(&pow(z.rep(), k - 1));
        ensure!(power.neutrix() == expected, "case {case}: N({z}^{k}) = {} vs {expected}", power.neutrix());
        let r = z.relative_uncertainty();
        ensure!(
            r <= MagnitudeClass::from(Neutrix::OSLASH) && inv.relative_uncertainty() <= MagnitudeClass::from(Neutrix::OSLASH),
            "case {case}: R({z}) = {r}"
        );
        ensure!(!z.oslash_times().contains(z.rep()), "case {case}: {z} meets o*{z}");
    }
    Ok(format!("10000 cases, {distributive_cases} under the relative-uncertainty condition"))
}

fn pow(x: &EpsRational, k: u32) -> EpsRational {
    (0..k).fold(EpsRational::one(), |acc, _| &acc * x)
}

/// Agreement with a value printed to `decimals` places, within one unit of the last place.
fn matches_printed(x: f64, printed: f64, decimals: i32) -> bool {
    let unit = 10f64.powi(-decimals);
    ((x / unit).round() * unit - printed).abs() <= unit * 1.000001
}

fn criterion_9() -> Outcome {
    let b3 = fixtures::B3.to_vec();
    let center = fixtures::X3_EXACT.to_vec();
    let radius = vec![0.001; 3];
    let p = sys(fixtures::WORKED);
    let prof = NumericProfile::default();
    let (m, b) = flexsys::numeric_harness::center_system(&p, &prof).map_err(err)?;
    let exact = flexsys::numeric_harness::exact_solve(&m, &b).map_err(err)?;
    ensure!(
        exact == vec![rat(-1, 1), rat(397, 100), rat(-197, 100)],
        "exact center solution {exact:?}"
    );
    let mut report = DeviationReport::default();
    report.add_fixture("A'", &grid(&fixtures::A_PRIME), &b3, &center, &radius).map_err(err)?;
    report.add_fixture("A''", &grid(&fixtures::A_SECOND), &b3, &center, &radius).map_err(err)?;
    report
        .add_fixture("P'", &grid(&fixtures::P_PRIME), &fixtures::B4, &fixtures::X4_EXACT, &[0.02; 4])
        .map_err(err)?;
    let printed: [(&str, &[f64], &[i32]); 3] = [
        ("A'", &fixtures::X_PRIME_PRINTED, &[6, 6, 6]),
        ("A''", &fixtures::X_SECOND_PRINTED, &[6, 6, 6]),
        ("P'", &fixtures::X_P_PRIME_PRINTED, &[7, 6, 7, 6]),
    ];
    for (name, values, decimals) in printed {
        for ((x, p), d) in report.values(name).iter().zip(values).zip(decimals) {
            ensure!(matches_printed(*x, *p, *d), "{name}: {x} vs printed {p}");
        }
    }
    let (c1, d1) = report.max_deviation("A'").expect("rows");
    ensure!(c1 == 2 && (d1 - 0.000071).abs() <= 0.000001 && d1 <= 0.001, "A' max deviation {d1} at {c1}");
    let (c2, d2) = report.max_deviation("A''").expect("rows");
    ensure!(c2 == 3 && (d2 - 0.000085).abs() <= 0.000001 && d2 <= 0.001, "A'' max deviation {d2} at {c2}");
    let (c3, d3) = report.max_deviation("P'").expect("rows");
    ensure!(
        c3 == 2 && (d3 - 0.007).abs() <= 0.001 && d3 <= 0.02,
        "P' max deviation is {d3:.7} at coordinate {c3}, not about 0.007 at coordinate 2 \
         (coordinate 2 deviates by {:.7}); the printed solution itself has coordinate 1 at -0.5159373",
        report.fixture_rows("P'")[1].deviation
    );
    Ok(format!("A' {d1:.7} at 2, A'' {d2:.7} at 3, P' {d3:.7} at {c3}"))
}

fn criterion_10() -> Outcome {
    let s = sys(fixtures::WORKED);
    let sol = solve(&s, false).map_err(err)?;
    let summary = sample_validation(&s, &sol.vector, &NumericProfile::default(), 1000, 10, SampleMode::MatrixOnly)
        .map_err(err)?;
    ensure!(summary.inside == summary.samples, "{} of {} inside", summary.inside, summary.samples);
    let x = float_gj_solve(&grid(&fixtures::A_PRIME), &fixtures::B3).map_err(err)?;
    ensure!(x.len() == 3, "solver output length");
    Ok(format!(
        "{}/{} inside; max deviation {:?}",
        summary.inside, summary.samples, summary.max_deviation
    ))
}

fn run(number: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:?}, budget {budget:?}")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {number:>2} {} {name} ({:.2?}): {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed
    );
    ok
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= run(1, "worked 3x3 system end to end", secs(1), criterion_1);
    ok &= run(2, "microhalo system", secs(1), criterion_2);
    ok &= run(3, "negative controls", secs(1), criterion_3);
    ok &= run(4, "four-unknown system and its real simplification", secs(1), criterion_4);
    ok &= run(5, "explicit operation matrices", secs(30), criterion_5);
    let start = Instant::now();
    let family = stable_family();
    let generation = start.elapsed();
    ok &= run(6, "procedure invariants", secs(60) - generation, || criterion_6(&family));
    ok &= run(7, "Gauss-Jordan equals Cramer, independent of P", secs(60), || criterion_7(&family));
    ok &= run(8, "external-number algebra", secs(30), criterion_8);
    ok &= run(9, "numeric fixtures", secs(1), criterion_9);
    ok &= run(10, "sampled representative systems", secs(30), criterion_10);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
