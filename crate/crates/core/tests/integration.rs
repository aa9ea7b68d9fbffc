//! Worked systems, error paths and the command-line surface.

use clap::Parser;
use flexsys::cli_io::{parse_external, parse_scalar, parse_system};
use flexsys::commands::{run, Cli};
use flexsys::fixtures;
use flexsys::numeric_harness::{sample_validation, NumericProfile, SampleMode};
use flexsys::random::stable_system;
use flexsys::solver::{
    admissible_check, analyze_stability, cramer_vector, prepare, solve, solve_gj, uniformize,
};
use flexsys::{Error, ExtVector, ExternalNumber, Neutrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cli(args: &[&str]) -> flexsys::commands::Output {
    let mut full = vec!["flexsys"];
    full.extend_from_slice(args);
    run(Cli::try_parse_from(full).unwrap()).unwrap()
}

#[test]
fn non_uniform_system_is_rejected_until_uniformized() {
    let sys = fixtures::system(fixtures::NONUNIFORM).unwrap();
    assert!(!sys.is_uniform());
    let err = solve(&sys, false).unwrap_err();
    assert!(matches!(err, Error::NotUniform), "{err}");
    assert!(err.to_string().contains("uniform"));

    let uni = uniformize(&sys);
    assert!(uni.is_uniform());
    assert_eq!(uni.b, ExtVector::uniform_neutrix(2, Neutrix::pounds(1)));
    let s = solve(&uni, false).unwrap();
    assert_eq!(s.vector, ExtVector::uniform_neutrix(2, Neutrix::pounds(1)));
}

#[test]
fn member_of_the_original_solution_family_fails_the_second_equation() {
    let sys = fixtures::system(fixtures::NONUNIFORM).unwrap();
    // x = (0, ε^m) with m = 0
    let x = [parse_scalar("0").unwrap(), parse_scalar("1").unwrap()];
    let check = admissible_check(&x, &sys.a, &sys.b).unwrap();
    assert!(check.failing_rows().contains(&2));
    // for m >= 1 the same family is admissible
    let x = [parse_scalar("0").unwrap(), parse_scalar("eps").unwrap()];
    assert!(admissible_check(&x, &sys.a, &sys.b).unwrap().ok());
}

#[test]
fn parse_errors_carry_positions() {
    match parse_system("1+q") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_system("n = 3\n1 | o"), Err(Error::DimensionMismatch { .. })));
    let one = parse_system("1 | o").unwrap();
    assert!(one.is_homogeneous());
}

#[test]
fn every_fixture_document_renders_canonically() {
    for (name, text) in fixtures::ALL {
        let doc = flexsys::cli_io::parse_document(text).unwrap();
        assert_eq!(doc.render(), text, "{name}");
        let again = flexsys::cli_io::parse_document(&doc.render()).unwrap();
        assert_eq!(again.system().unwrap().a, doc.system().unwrap().a);
    }
}

#[test]
fn widened_system_keeps_its_solution() {
    let narrow = solve(&fixtures::system(fixtures::WORKED).unwrap(), false).unwrap();
    let wide = solve(&fixtures::system(fixtures::WORKED_WIDE).unwrap(), false).unwrap();
    assert_eq!(narrow.vector, wide.vector);
}

#[test]
fn homogeneous_stable_systems_solve_to_the_rhs_neutrix() {
    let sys = parse_system("1, 1/2+o[eps] | L[eps]\n1/2, 1+o[eps^2] | L[eps]").unwrap();
    assert!(analyze_stability(&sys).unwrap().stable);
    let s = solve(&sys, false).unwrap();
    assert_eq!(s.vector, ExtVector::uniform_neutrix(2, Neutrix::pounds(1)));
}

#[test]
fn cramer_numerators_have_the_rhs_neutrix_and_are_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..30 {
        let r = stable_system(&mut rng, 2 + i % 3);
        let prep = prepare(&r.system).unwrap();
        let n = prep.a.n();
        let b_min = prep.b.min_neutrix();
        let x = cramer_vector(&prep.a, &prep.b).unwrap();
        assert!(x.entries().iter().all(|e| e.neutrix() == b_min), "system {i}: {x}");
        let factorial: i64 = (1..=n as i64).product();
        let bound = prep.b.max_abs().scale(&flexsys::EpsRational::from(2 * factorial));
        for j in 0..n {
            let d = prep.a.with_column(j, &prep.b).unwrap().det().unwrap();
            assert!(d.abs().leq(&bound), "system {i}, column {j}: {d} vs {bound}");
        }
    }
}

#[test]
fn unstable_system_blows_up_numerically() {
    let sys = fixtures::system(fixtures::ABSORBED_BLOWUP).unwrap();
    let prof = NumericProfile::default();
    let forced = solve_gj(&sys, true).unwrap().vector;
    let naive = ExtVector::new(vec![
        parse_external("1+o").unwrap(),
        parse_external("o").unwrap(),
    ])
    .unwrap();
    let summary = sample_validation(&sys, &naive, &prof, 500, 3, SampleMode::Full).unwrap();
    assert!(summary.fraction_inside() < 0.5, "{}", summary.fraction_inside());
    assert!(summary.max_deviation[1] > 0.1);
    let radius = flexsys::numeric_harness::instantiate(forced.get(1), &prof).unwrap().radius();
    assert!(summary.max_deviation[1] <= radius + 1e-9, "{} vs {radius}", summary.max_deviation[1]);
}

#[test]
fn unbounded_neutrix_has_no_interval() {
    let x = ExternalNumber::neutricial(Neutrix::Full);
    assert!(matches!(
        flexsys::numeric_harness::instantiate(&x, &NumericProfile::default()),
        Err(Error::UnboundedNeutrix)
    ));
}

#[test]
fn cli_solve_prints_the_solution() {
    let out = cli(&["solve", "@worked"]);
    assert_eq!(out.code, 0);
    assert!(out.text.contains("x1 = -1+o[eps]"));
    assert!(out.text.contains("x2 = 4-3*eps+o[eps]"));
    assert!(out.text.contains("x3 = -2+3*eps+o[eps]"));
}

#[test]
fn cli_check_reports_the_failed_condition() {
    let out = cli(&["check", "@infeasible"]);
    assert_eq!(out.code, 2);
    assert!(out.text.contains("cond2 violated: R(A) = ⊘ ⊄ R(B) = ε£"), "{}", out.text);
}

#[test]
fn cli_trace_has_six_steps() {
    let out = cli(&["trace", "@worked", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    let human = cli(&["trace", "@worked"]);
    assert!(human.text.contains("L2 <- L2 + (-1)*L1"));
}

#[test]
fn cli_unstable_solve_needs_force() {
    let args = Cli::try_parse_from(["flexsys", "solve", "@absorbed_blowup"]).unwrap();
    let err = run(args).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let out = cli(&["solve", "@absorbed_blowup", "--force", "--method", "gj"]);
    assert!(out.text.starts_with("UNVERIFIED"));
}

#[test]
fn cli_structured_solution_and_simplify() {
    let out = cli(&["solve", "@four_unknowns_real", "--format", "structured", "--method", "cramer"]);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["solution"][1], "-13/8+L[eps]");
    let out = cli(&["simplify", "@four_unknowns"]);
    assert_eq!(out.code, 0);
    assert!(out.text.contains("-1, 1, 1/2, 1/2 | L[eps]"));
    assert!(out.text.contains("# equivalent: true"));
}

#[test]
fn cli_numeric_reports_and_writes_csv() {
    let dir = std::env::temp_dir().join(format!("flexsys-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("dev.csv");
    let out = cli(&["numeric", "@worked", "--samples", "100", "--seed", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.text);
    assert!(out.text.contains("samples inside: 100/100"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().count() >= 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn representative_determinants_lie_in_the_external_determinant() {
    for name in ["worked", "nonuniform", "worked_wide", "four_unknowns"] {
        let sys = fixtures::system(fixtures::by_name(name).unwrap()).unwrap();
        let det = sys.a.det().unwrap();
        let dets = flexsys::solver::representative_determinants(&sys.a);
        assert!(dets.len() > 1, "{name}");
        assert!(dets.iter().all(|d| det.contains(d)), "{name}: {det}");
    }
}
