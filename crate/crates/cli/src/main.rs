//! Command-line surface: solve, decompose, verify, oracle, and gen over
//! DIMACS instances.
//!
//! Exit codes: 0 success, 1 audit violation, 2 failed class preconditions
//! under --check, 3 structural evidence that the instance is outside the
//! class, 64 usage errors, 65 file or dump parse errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use evensep::dimacs::{parse_dimacs, parse_weights, render_dimacs, SeparatorDump};
use evensep::generate;
use evensep::recognition::{check_preconditions, BergeStatus, StructureWitness};
use evensep::separator::{tame_separator, verify_separator, SeparatorBranch};
use evensep::solver::{brute_force_mwis, solve, SolveConfig, SolveError, SolverResult};
use evensep::weights::{parse_ratio, Weights};
use evensep::Graph;
use num::BigRational;
use serde::Serialize;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

const EXIT_VIOLATION: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_OUTSIDE_CLASS: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Parser)]
#[command(
    name = "evensep",
    version,
    about = "Maximum-weight independent sets via even-set separators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve maximum-weight independent set on a DIMACS instance.
    Solve(SolveArgs),
    /// Build a tame separator under uniform weights and dump it as JSON.
    Decompose(DecomposeArgs),
    /// Audit a separator dump or the class preconditions.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Brute-force reference solver, at most 30 vertices.
    Oracle(OracleArgs),
    /// Emit a generated instance as DIMACS, with its generation parameters
    /// recorded as comments.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS edge-format instance; stdin when omitted or "-".
    #[arg(long)]
    graph: Option<String>,
    /// Weight file, one nonnegative integer per line; unit weights if absent.
    #[arg(long)]
    weights: Option<String>,
    /// Balance parameter as an exact fraction in (1/2, 1).
    #[arg(long, default_value = "3/5")]
    c: String,
    /// Check the class preconditions before solving.
    #[arg(long)]
    check: bool,
    /// Emit the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    /// DIMACS edge-format instance; stdin when omitted or "-".
    #[arg(long)]
    graph: Option<String>,
    #[arg(long, default_value = "3/5")]
    c: String,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Re-run the polynomial separator audits against a dump.
    Separator(VerifySeparatorArgs),
    /// Report connectivity, degree, C4, prism, and Berge evidence.
    Class(VerifyClassArgs),
}

#[derive(Args)]
struct VerifySeparatorArgs {
    /// DIMACS edge-format instance; stdin when omitted or "-".
    #[arg(long)]
    graph: Option<String>,
    /// Separator dump as produced by decompose.
    #[arg(long)]
    sep: String,
    /// Additionally check evenness of every in-layer pair (exponential).
    #[arg(long)]
    full_evenness: bool,
}

#[derive(Args)]
struct VerifyClassArgs {
    /// DIMACS edge-format instance; stdin when omitted or "-".
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    /// DIMACS edge-format instance; stdin when omitted or "-".
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// Even cycle of the given length.
    Cycle,
    /// Path on the given number of vertices.
    Path,
    /// Random d-regular base with every edge subdivided once.
    Subdivided,
    /// Random graph filtered until it certifies as a class member.
    FilteredRandom,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Length for cycle and path.
    #[arg(long)]
    len: Option<usize>,
    /// Base vertex count for subdivided and filtered-random.
    #[arg(long)]
    n: Option<usize>,
    /// Base degree for subdivided.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Edge probability for filtered-random, as a fraction.
    #[arg(long, default_value = "1/4")]
    p: String,
    /// Rejection budget for filtered-random.
    #[arg(long, default_value_t = 20000)]
    budget: usize,
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe closes, like other line tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(VerifyCommand::Separator(a)) => cmd_verify_separator(a),
        Command::Verify(VerifyCommand::Class(a)) => cmd_verify_class(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Gen(a) => cmd_gen(a),
    };
    ExitCode::from(code)
}

fn load_graph(path: Option<&str>) -> Result<Graph, u8> {
    let (text, name) = match path {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| {
                eprintln!("cannot read stdin: {e}");
                EXIT_PARSE
            })?;
            (buf, "<stdin>")
        }
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                eprintln!("cannot read {p}: {e}");
                EXIT_PARSE
            })?;
            (text, p)
        }
    };
    parse_dimacs(&text).map_err(|e| {
        eprintln!("{name}: {e}");
        EXIT_PARSE
    })
}

fn load_weights(path: Option<&str>, n: usize) -> Result<Weights, u8> {
    match path {
        None => Ok(Weights::from_integers(&vec![1; n])),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                eprintln!("cannot read {p}: {e}");
                EXIT_PARSE
            })?;
            let ints = parse_weights(&text, n).map_err(|e| {
                eprintln!("{p}: {e}");
                EXIT_PARSE
            })?;
            Ok(Weights::from_integers(&ints))
        }
    }
}

fn load_balance(text: &str) -> Result<BigRational, u8> {
    parse_ratio(text).ok_or_else(|| {
        eprintln!("balance '{text}' is not a fraction like 3/5");
        EXIT_USAGE
    })
}

#[derive(Serialize)]
struct StatsDump {
    branch: Option<String>,
    max_depth: usize,
    sfm_calls: u64,
    sfm_oracle_calls: u64,
    brute_calls: u64,
    z: Option<u32>,
}

#[derive(Serialize)]
struct ResultDump {
    weight: i64,
    solution: Vec<usize>,
    stats: StatsDump,
}

fn branch_name(b: SeparatorBranch) -> &'static str {
    match b {
        SeparatorBranch::Ball => "ball",
        SeparatorBranch::Core => "core",
    }
}

fn print_result(r: &SolverResult, json: bool) {
    let solution: Vec<usize> = r.solution.iter().map(|v| v + 1).collect();
    if json {
        let dump = ResultDump {
            weight: r.weight,
            solution,
            stats: StatsDump {
                branch: r.stats.branch.map(|b| branch_name(b).to_string()),
                max_depth: r.stats.max_depth,
                sfm_calls: r.stats.sfm_calls,
                sfm_oracle_calls: r.stats.sfm_oracle_calls,
                brute_calls: r.stats.brute_calls,
                z: r.stats.z,
            },
        };
        println!("{}", serde_json::to_string_pretty(&dump).expect("plain data"));
    } else {
        println!("weight {}", r.weight);
        let ids: Vec<String> = solution.iter().map(|v| v.to_string()).collect();
        println!("solution {}", ids.join(" "));
        println!(
            "stats branch={} depth={} sfm={} sfm-evals={} brute={} z={}",
            r.stats.branch.map_or("none", branch_name),
            r.stats.max_depth,
            r.stats.sfm_calls,
            r.stats.sfm_oracle_calls,
            r.stats.brute_calls,
            r.stats
                .z
                .map_or_else(|| "none".to_string(), |z| z.to_string()),
        );
    }
}

fn solve_error_code(e: &SolveError) -> u8 {
    match e {
        SolveError::Precondition(_) => EXIT_PRECONDITION,
        SolveError::NotPawFriendlyEvidence { .. } => EXIT_OUTSIDE_CLASS,
        SolveError::InvalidBalance { .. } => EXIT_USAGE,
        _ => EXIT_PARSE,
    }
}

fn cmd_solve(a: SolveArgs) -> u8 {
    let g = match load_graph(a.graph.as_deref()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let w = match load_weights(a.weights.as_deref(), g.n()) {
        Ok(w) => w,
        Err(code) => return code,
    };
    let c = match load_balance(&a.c) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let config = SolveConfig {
        c,
        check_class: a.check,
        ..SolveConfig::default()
    };
    match solve(&g, &w, &config) {
        Ok(r) => {
            print_result(&r, a.json);
            0
        }
        Err(SolveError::Precondition(report)) => {
            eprintln!("class preconditions failed:");
            print_precondition_report(&report, true);
            EXIT_PRECONDITION
        }
        Err(e) => {
            eprintln!("{e}");
            solve_error_code(&e)
        }
    }
}

fn cmd_decompose(a: DecomposeArgs) -> u8 {
    let g = match load_graph(a.graph.as_deref()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let c = match load_balance(&a.c) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match tame_separator(&g, &Weights::uniform(g.n()), &c) {
        Ok(sep) => {
            let dump = SeparatorDump::from_separator(&g, &sep);
            println!(
                "{}",
                serde_json::to_string_pretty(&dump).expect("plain data")
            );
            0
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_OUTSIDE_CLASS
        }
    }
}

fn cmd_verify_separator(a: VerifySeparatorArgs) -> u8 {
    let g = match load_graph(a.graph.as_deref()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let text = match fs::read_to_string(&a.sep) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", a.sep);
            return EXIT_PARSE;
        }
    };
    let dump: SeparatorDump = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{}: {e}", a.sep);
            return EXIT_PARSE;
        }
    };
    let sep = match dump.to_separator(g.n()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_PARSE;
        }
    };
    let report = verify_separator(&g, &sep, a.full_evenness);
    for v in &report.violations {
        println!("violation: {v}");
    }
    if report.truncated {
        println!("note: evenness audit truncated by the size cap");
    }
    if report.violations.is_empty() {
        println!("separator audits passed");
        0
    } else {
        EXIT_VIOLATION
    }
}

fn witness_ids(w: &StructureWitness) -> String {
    let ids: Vec<usize> = match w {
        StructureWitness::C4(vs) => vs.to_vec(),
        StructureWitness::Paw(vs) => vs.to_vec(),
        StructureWitness::Prism { tri_a, tri_b, .. } => {
            tri_a.iter().chain(tri_b.iter()).copied().collect()
        }
        StructureWitness::OddHole(vs) | StructureWitness::OddAntihole(vs) => vs.clone(),
    };
    ids.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_precondition_report(report: &evensep::recognition::PreconditionReport, stderr: bool) {
    let mut lines = Vec::new();
    lines.push(format!("connected {}", report.connected));
    lines.push(format!("max-degree {}", report.max_degree));
    match &report.c4 {
        None => lines.push("c4 none".to_string()),
        Some(w) => lines.push(format!("c4 {}", witness_ids(w))),
    }
    match &report.prism {
        None => lines.push("prism none".to_string()),
        Some(w) => lines.push(format!("prism {}", witness_ids(w))),
    }
    match &report.berge {
        BergeStatus::Berge => lines.push("berge verified".to_string()),
        BergeStatus::NotBerge(w) => lines.push(format!("berge violated by {}", witness_ids(w))),
        BergeStatus::Unchecked => lines.push("berge unchecked (over the cap)".to_string()),
    }
    lines.push(format!("admissible {}", report.admissible()));
    for line in lines {
        if stderr {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

fn cmd_verify_class(a: VerifyClassArgs) -> u8 {
    let g = match load_graph(a.graph.as_deref()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let report = check_preconditions(&g);
    print_precondition_report(&report, false);
    if report.admissible() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_oracle(a: OracleArgs) -> u8 {
    let g = match load_graph(a.graph.as_deref()) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let w = match load_weights(a.weights.as_deref(), g.n()) {
        Ok(w) => w,
        Err(code) => return code,
    };
    match brute_force_mwis(&g, &w) {
        Ok(r) => {
            print_result(&r, a.json);
            0
        }
        Err(e) => {
            eprintln!("{e}");
            solve_error_code(&e)
        }
    }
}

fn cmd_gen(a: GenArgs) -> u8 {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| {
            eprintln!("--{flag} is required for this kind");
            EXIT_USAGE
        })
    };
    let built: Result<(Graph, Vec<String>), u8> = match a.kind {
        GenKind::Cycle => need(a.len, "len").and_then(|len| {
            let g = generate::cycle(len).map_err(gen_usage)?;
            Ok((
                g,
                vec![
                    format!("generator: cycle len={len}"),
                    "class: even cycle; bipartite perfect, C4-free, prism-free".to_string(),
                ],
            ))
        }),
        GenKind::Path => need(a.len, "len").and_then(|len| {
            let g = generate::path(len).map_err(gen_usage)?;
            Ok((
                g,
                vec![
                    format!("generator: path len={len}"),
                    "class: path; bipartite perfect, C4-free, prism-free".to_string(),
                ],
            ))
        }),
        GenKind::Subdivided => need(a.n, "n").and_then(|n| {
            let g = generate::subdivided_regular(n, a.d, a.seed).map_err(gen_usage)?;
            Ok((
                g,
                vec![
                    format!("generator: subdivided base-n={n} d={} seed={}", a.d, a.seed),
                    "class: one-subdivision of a simple base; bipartite perfect, C4-free, prism-free"
                        .to_string(),
                ],
            ))
        }),
        GenKind::FilteredRandom => need(a.n, "n").and_then(|n| {
            let p = load_balance_loose(&a.p)?;
            let g = generate::filtered_random(n, &p, a.seed, a.budget).map_err(gen_usage)?;
            Ok((
                g,
                vec![
                    format!(
                        "generator: filtered-random n={n} p={} seed={} budget={}",
                        a.p, a.seed, a.budget
                    ),
                    "class: certified C4-free and prism-free, Berge within the test cap"
                        .to_string(),
                ],
            ))
        }),
    };
    match built {
        Ok((g, notes)) => {
            for note in notes {
                println!("c {note}");
            }
            print!("{}", render_dimacs(&g));
            0
        }
        Err(code) => code,
    }
}

fn gen_usage(e: generate::GenError) -> u8 {
    eprintln!("{e}");
    EXIT_USAGE
}

/// Probability fractions live in [0, 1], unlike the balance parameter.
fn load_balance_loose(text: &str) -> Result<BigRational, u8> {
    parse_ratio(text).ok_or_else(|| {
        eprintln!("probability '{text}' is not a fraction like 1/4");
        EXIT_USAGE
    })
}
