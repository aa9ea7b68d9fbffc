//! Command-line surface: argument definitions and command dispatch.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cli_io::{parse_document, parse_profile, SystemDocument};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::numeric_harness::{deviation_report, sample_validation, SampleMode};
use crate::solver::{self, analyze_stability, uniformize, Method, SimplifyMode};

#[derive(Debug, Parser)]
#[command(name = "flexsys", version, about = "Solve flexible linear systems over external numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Gj,
    Cramer,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Gj => Method::Gj,
            MethodArg::Cramer => Method::Cramer,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Widen,
    Collapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleArg {
    Matrix,
    Full,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// System document: a path, `-` for stdin, or `@name` for a built-in fixture.
    pub input: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Replace the right-hand side by its smallest neutrix before solving.
    #[arg(long)]
    pub uniformize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the system and report stability.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Solve even when the stability conditions fail; output is marked unverified.
        #[arg(long)]
        force: bool,
    },
    /// Report the stability conditions only.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Print every Gauss-Jordan step with its audit.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        force: bool,
    },
    /// Replace coefficients by simpler ones and certify the systems are equivalent.
    Simplify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::Collapse)]
        mode: ModeArg,
    },
    /// Compare float solutions of representative systems with the predicted intervals.
    Numeric {
        #[command(flatten)]
        common: Common,
        /// Numeric profile file; overrides a profile block in the document.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = SampleArg::Matrix)]
        sample_mode: SampleArg,
        /// Write the deviation table as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Text written to stdout and the exit code of a finished command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn read_input(input: &str) -> Result<String> {
    if let Some(name) = input.strip_prefix('@') {
        return fixtures::by_name(name)
            .map(str::to_string)
            .ok_or_else(|| Error::Io(format!("no built-in fixture named {name}")));
    }
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    Ok(fs::read_to_string(input)?)
}

fn load(common: &Common) -> Result<SystemDocument> {
    let doc = parse_document(&read_input(&common.input)?)?;
    if !common.uniformize {
        return Ok(doc);
    }
    let sys = uniformize(&doc.system()?);
    let mut out = SystemDocument::from_system(&sys);
    out.header = doc.header;
    out.profile = doc.profile;
    Ok(out)
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize")
}

pub fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Solve { common, method, force } => {
            let sys = load(&common)?.system()?;
            let sol = solver::solve_with(&sys, method.into(), force)?;
            let text = match common.format {
                Format::Structured => pretty(sol.to_json()),
                Format::Human => {
                    let mut s = String::new();
                    if !sol.verified {
                        s.push_str("UNVERIFIED: solved despite failed stability conditions\n");
                    }
                    for (i, x) in sol.vector.entries().iter().enumerate() {
                        s.push_str(&format!("x{} = {}\n", i + 1, x));
                    }
                    s.push_str(&format!(
                        "method: {}, {}\nstability: {}\n",
                        sol.method,
                        sol.exactness,
                        sol.stability.summary()
                    ));
                    s
                }
            };
            Ok(Output::ok(text))
        }
        Command::Check { common } => {
            let report = analyze_stability(&load(&common)?.system()?)?;
            let text = match common.format {
                Format::Structured => pretty(report.to_json()),
                Format::Human => format!("{report}\n"),
            };
            Ok(Output {
                text,
                code: if report.stable { 0 } else { 2 },
            })
        }
        Command::Trace { common, force } => {
            let sys = load(&common)?.system()?;
            let sol = solver::solve_gj(&sys, force)?;
            let trace = sol.trace.expect("Gauss-Jordan solutions carry a trace");
            let text = match common.format {
                Format::Structured => pretty(trace.to_json()),
                Format::Human => trace.render_human(),
            };
            Ok(Output::ok(text))
        }
        Command::Simplify { common, mode } => {
            let doc = load(&common)?;
            let mode = match mode {
                ModeArg::Widen => SimplifyMode::Widen,
                ModeArg::Collapse => SimplifyMode::Collapse,
            };
            let (simplified, cert) = solver::simplify(&doc.system()?, mode)?;
            let mut out = SystemDocument::from_system(&simplified);
            out.header = doc.header.into_iter().filter(|(k, _)| k == "name").collect();
            let text = match common.format {
                Format::Structured => pretty(json!({
                    "system": out.render(),
                    "certificate": cert.to_json(),
                })),
                Format::Human => format!(
                    "{}# equivalent: {}\n# solution: {}\n",
                    out.render(),
                    cert.holds(),
                    cert.simplified_solution
                ),
            };
            Ok(Output {
                text,
                code: if cert.holds() { 0 } else { 1 },
            })
        }
        Command::Numeric {
            common,
            profile,
            seed,
            samples,
            sample_mode,
            csv,
        } => {
            let doc = load(&common)?;
            let prof = match profile {
                Some(path) => parse_profile(&fs::read_to_string(path)?)?,
                None => doc.profile.clone().unwrap_or_default(),
            };
            prof.validate()?;
            let sys = doc.system()?;
            let sol = solver::solve(&sys, false)?;
            let report = deviation_report(&sys, &sol.vector, &prof, &[])?;
            let mode = match sample_mode {
                SampleArg::Matrix => SampleMode::MatrixOnly,
                SampleArg::Full => SampleMode::Full,
            };
            let summary = sample_validation(&sys, &sol.vector, &prof, samples, seed, mode)?;
            if let Some(path) = csv {
                fs::write(path, report.to_csv())?;
            }
            let text = match common.format {
                Format::Structured => pretty(json!({
                    "deviations": report.to_json(),
                    "samples": summary.to_json(),
                })),
                Format::Human => format!(
                    "{}samples inside: {}/{} ({:.2}%)\n",
                    report.render_human(),
                    summary.inside,
                    summary.samples,
                    100.0 * summary.fraction_inside()
                ),
            };
            let ok = report.all_within() && summary.inside == summary.samples;
            Ok(Output {
                text,
                code: if ok { 0 } else { 1 },
            })
        }
    }
}
