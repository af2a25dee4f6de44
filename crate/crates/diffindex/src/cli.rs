//! Command-line front end: parse a system file, run the analyses, render
//! text or JSON reports.

use crate::index::{self, AnalysisError, IndexReport};
use crate::jacobi;
use crate::membership::{self, Verdict};
use crate::parser::{self, ParseError, SystemFile};
use crate::poly::System;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;

/// Version tag of the structured output schema.
const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "diffindex",
    version,
    about = "Difference index, order and membership analysis for difference algebraic systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// alias for json
    #[value(name = "json-like")]
    JsonLike,
}

impl Format {
    fn structured(self) -> bool {
        !matches!(self, Format::Text)
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the system file
    #[arg(long)]
    system: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Assert that the system is quasi-regular with a reflexive prime
    /// difference ideal; without this flag, results are labeled conditional
    #[arg(long)]
    assume_quasi_regular: bool,
    /// Recompute coranks at this index (must be at least e-1; default e-1)
    #[arg(long)]
    i: Option<u32>,
    /// Level cap for `check` / row cap for `mu`
    #[arg(long)]
    kmax: Option<usize>,
    /// Print the parsed system before the analysis
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: coranks, omega, order, Jacobi bound, regularity
    Index(CommonArgs),
    /// Corank table with per-level ranks and structural bounds
    Mu(CommonArgs),
    /// Jacobi number of the order matrix with a maximizing injection
    Jacobi(CommonArgs),
    /// Order of the difference ideal
    Order(CommonArgs),
    /// Membership test with explicit cofactor certificate
    Member {
        #[command(flatten)]
        common: CommonArgs,
        /// Query polynomial; file queries (q1:, q2:, ...) are used when absent
        #[arg(long)]
        poly: Option<String>,
    },
    /// Verify the quasi-regularity rank conditions up to a level cap
    Check(CommonArgs),
    /// Hilbert-Levin regularity table
    Regularity(CommonArgs),
    /// Run the built-in worked example and diff against the stored report
    Example {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Parses `std::env::args`, runs the requested analysis, prints the report
/// and returns the process exit code (0 ok, 1 analysis failure, 2 usage or
/// parse error).
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Analysis(AnalysisError),
    #[error("{0}")]
    Usage(String),
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            // a bad --i override is an invocation problem, not a failed run
            AnalysisError::IndexTooSmall { .. } => CliError::Usage(e.to_string()),
            other => CliError::Analysis(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Analysis(_) => EXIT_ANALYSIS,
        }
    }
}

struct Loaded {
    file: SystemFile,
    system: System,
}

fn load(common: &CommonArgs) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(&common.system)?;
    let file = parser::parse_system_file(&text)?;
    let system = file.system().map_err(ParseError::from)?;
    if common.verbose {
        eprintln!(
            "parsed system: {} equations, {} variables, e = {}",
            system.num_equations(),
            system.num_vars(),
            system.max_order()
        );
        for (idx, f) in system.equations().iter().enumerate() {
            eprintln!("  f{}: {}", idx + 1, file.render(f));
        }
    }
    Ok(Loaded { file, system })
}

fn assumption_label(asserted: bool) -> &'static str {
    if asserted {
        "quasi-regularity asserted by the user"
    } else {
        "conditional: results assume quasi-regularity (pass --assume-quasi-regular to assert it)"
    }
}

fn emit(format: Format, text: String, value: Value) -> String {
    if format.structured() {
        serde_json::to_string_pretty(&value).expect("report serializes")
    } else {
        text
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Index(common) => {
            let loaded = load(&common)?;
            let report = index::index_report(&loaded.system, common.i)?;
            let (text, value) = render_index(&loaded, &report, common.assume_quasi_regular);
            println!("{}", emit(common.format, text, value));
            let ok = report.bound_satisfied && report.cross_check_agrees;
            Ok(if ok { EXIT_OK } else { EXIT_ANALYSIS })
        }
        Command::Mu(common) => {
            let loaded = load(&common)?;
            let sys = &loaded.system;
            let i = common.i.unwrap_or(sys.max_order() - 1);
            let rows = match common.kmax {
                Some(k_max) => index::mu_table(sys, k_max, i, 0)?,
                None => {
                    let profile = index::mu_sequence_with(sys, i, 0)?;
                    index::mu_table(sys, profile.omega() + 1, i, 0)?
                }
            };
            let mut text = String::from("k  rank  mu  lower  upper\n");
            for row in &rows {
                text.push_str(&format!(
                    "{:<2} {:<5} {:<3} {:<6} {:<5}\n",
                    row.k, row.rank, row.mu, row.lower, row.upper
                ));
            }
            text.pop();
            let value = json!({
                "version": SCHEMA_VERSION,
                "command": "mu",
                "rows": rows.iter().map(|r| json!({
                    "k": r.k, "rank": r.rank, "mu": r.mu,
                    "lower": r.lower, "upper": r.upper,
                })).collect::<Vec<_>>(),
            });
            println!("{}", emit(common.format, text, value));
            Ok(EXIT_OK)
        }
        Command::Jacobi(common) => {
            let loaded = load(&common)?;
            let sys = &loaded.system;
            let assignment = jacobi::jacobi_number(sys.order_matrix())
                .expect("system metadata guarantees r <= n");
            let bound = jacobi::jacobi_bound(sys);
            let witness: Vec<String> = assignment
                .witness
                .iter()
                .enumerate()
                .map(|(i, &c)| format!("f{} -> {}", i + 1, loaded.file.name_of(c as u32 + 1)))
                .collect();
            let text = format!(
                "jacobi_number: {}\nwitness: {}\njacobi_bound: {}  (J + e - min entry = {} + {} - {})",
                assignment.value,
                witness.join(", "),
                bound,
                assignment.value,
                sys.max_order(),
                sys.min_order_entry()
            );
            let value = json!({
                "version": SCHEMA_VERSION,
                "command": "jacobi",
                "jacobi_number": assignment.value,
                "witness": assignment.witness.iter().map(|&c| c + 1).collect::<Vec<_>>(),
                "jacobi_bound": bound,
            });
            println!("{}", emit(common.format, text, value));
            Ok(EXIT_OK)
        }
        Command::Order(common) => {
            let loaded = load(&common)?;
            let sys = &loaded.system;
            let i = common.i.unwrap_or(sys.max_order() - 1);
            let profile = index::mu_sequence_with(sys, i, 0)?;
            let order = index::order_of_ideal(&profile, sys);
            let text = format!(
                "omega: {}\norder: {}  (e*r - mu_omega = {}*{} - {})",
                profile.omega(),
                order,
                sys.max_order(),
                sys.num_equations(),
                profile.mu_omega()
            );
            let value = json!({
                "version": SCHEMA_VERSION,
                "command": "order",
                "omega": profile.omega(),
                "order": order,
            });
            println!("{}", emit(common.format, text, value));
            Ok(EXIT_OK)
        }
        Command::Member { common, poly } => {
            let loaded = load(&common)?;
            let queries = collect_queries(&loaded, poly.as_deref())?;
            let profile = index::mu_sequence(&loaded.system)?;
            let mut texts = Vec::new();
            let mut values = Vec::new();
            for (label, query) in &queries {
                let (t, v) =
                    render_member(&loaded, &profile, label, query, common.assume_quasi_regular);
                texts.push(t);
                values.push(v);
            }
            let text = texts.join("\n\n");
            let value = json!({
                "version": SCHEMA_VERSION,
                "command": "member",
                "queries": values,
                "assumption": assumption_label(common.assume_quasi_regular),
            });
            println!("{}", emit(common.format, text, value));
            Ok(EXIT_OK)
        }
        Command::Check(common) => {
            let loaded = load(&common)?;
            let sys = &loaded.system;
            let k_max = match common.kmax {
                Some(k) => k,
                None => match index::mu_sequence(sys) {
                    Ok(profile) => profile.omega() + 2,
                    Err(_) => sys.mu_cap(),
                },
            };
            let report = index::quasi_regularity_check(sys, k_max)?;
            let mut text = String::new();
            for row in &report.rows {
                text.push_str(&format!(
                    "k = {}: rank {} of {} -> {}\n",
                    row.k,
                    row.rank,
                    row.expected,
                    if row.full { "full" } else { "RANK DEFICIENT" }
                ));
            }
            text.push_str(&match report.first_failure {
                None => format!(
                    "quasi-regularity verified up to k = {}",
                    report.verified_up_to
                ),
                Some(k) => format!(
                    "quasi-regularity FAILS at k = {}; all index outputs are invalid",
                    k
                ),
            });
            let value = json!({
                "version": SCHEMA_VERSION,
                "command": "check",
                "rows": report.rows.iter().map(|r| json!({
                    "k": r.k, "rank": r.rank, "expected": r.expected, "full": r.full,
                })).collect::<Vec<_>>(),
                "verified_up_to": report.verified_up_to,
                "first_failure": report.first_failure,
            });
            println!("{}", emit(common.format, text, value));
            Ok(match report.first_failure {
                None => EXIT_OK,
                Some(_) => EXIT_ANALYSIS,
            })
        }
        Command::Regularity(common) => {
            let loaded = load(&common)?;
            let report = index::regularity_report(&loaded.system)?;
            let (text, value) = render_regularity(&report);
            println!("{}", emit(common.format, text, value));
            Ok(EXIT_OK)
        }
        Command::Example { format } => run_example(format),
    }
}

fn collect_queries(
    loaded: &Loaded,
    poly: Option<&str>,
) -> Result<Vec<(String, crate::poly::Polynomial)>, CliError> {
    match poly {
        Some(text) => {
            let p = parser::parse_polynomial(text, &loaded.file.var_names)?;
            Ok(vec![("query".to_string(), p)])
        }
        None => {
            if loaded.file.queries.is_empty() {
                return Err(CliError::Usage(
                    "no query polynomial: pass --poly or add q<k>: lines to the system file".into(),
                ));
            }
            Ok(loaded.file.queries.clone())
        }
    }
}

fn render_member(
    loaded: &Loaded,
    profile: &index::MuProfile,
    label: &str,
    query: &crate::poly::Polynomial,
    asserted: bool,
) -> (String, Value) {
    let sys = &loaded.system;
    let n = membership::order_bound_with(profile, sys, query);
    let coarse = membership::coarse_order_bound(sys, query);
    let verdict = membership::certify(sys, query, n);
    match verdict {
        Verdict::Member(cert) => {
            let mut text = format!(
                "{}: {}\nN: {} (coarse bound {})\nverdict: member\ncofactors:",
                label,
                loaded.file.render(query),
                n,
                coarse
            );
            for ((i, j), g) in &cert.cofactors {
                text.push_str(&format!("\n  g[{},{}] = {}", i, j, loaded.file.render(g)));
            }
            text.push_str(&format!(
                "\ndegree audit: max term degree {} <= bound {} : {}",
                cert.audit.max_term_degree,
                cert.audit.bound,
                if cert.audit.within_bound {
                    "ok"
                } else {
                    "VIOLATED"
                }
            ));
            let value = json!({
                "label": label,
                "query": loaded.file.render(query),
                "n": n,
                "coarse_n": coarse,
                "member": true,
                "cofactors": cert.cofactors.iter().map(|((i, j), g)| json!({
                    "i": i, "j": j, "g": loaded.file.render(g),
                })).collect::<Vec<_>>(),
                "degree_audit": {
                    "degree_base": cert.audit.degree_base,
                    "bound": cert.audit.bound.to_string(),
                    "max_term_degree": cert.audit.max_term_degree,
                    "within_bound": cert.audit.within_bound,
                },
            });
            (text, value)
        }
        Verdict::NotMember { order_cap } => {
            let conclusion = if asserted {
                "not a member of the difference ideal"
            } else {
                "not reducible at this level (conditional: not a member if the system is quasi-regular)"
            };
            let text = format!(
                "{}: {}\nN: {} (coarse bound {})\nverdict: {}",
                label,
                loaded.file.render(query),
                order_cap,
                coarse,
                conclusion
            );
            let value = json!({
                "label": label,
                "query": loaded.file.render(query),
                "n": order_cap,
                "coarse_n": coarse,
                "member": false,
                "conclusion": conclusion,
            });
            (text, value)
        }
    }
}

fn render_regularity(report: &index::RegularityReport) -> (String, Value) {
    let mut text = String::from("i  level  trdeg  phi  match\n");
    for row in &report.rows {
        text.push_str(&format!(
            "{:<2} {:<6} {:<6} {:<4} {}\n",
            row.i,
            row.level,
            row.trdeg,
            row.phi,
            if row.matches { "yes" } else { "no" }
        ));
    }
    text.push_str(&format!(
        "regularity bound: e - 1 = {}\nobserved regularity: {}",
        report.regularity_bound, report.observed_regularity
    ));
    let value = json!({
        "version": SCHEMA_VERSION,
        "command": "regularity",
        "regularity_table": regularity_rows_json(report),
        "regularity_bound": report.regularity_bound,
        "observed_regularity": report.observed_regularity,
    });
    (text, value)
}

fn regularity_rows_json(report: &index::RegularityReport) -> Vec<Value> {
    report
        .rows
        .iter()
        .map(|r| {
            json!({
                "i": r.i, "level": r.level, "trdeg": r.trdeg,
                "phi": r.phi, "matches": r.matches,
            })
        })
        .collect()
}

fn render_index(loaded: &Loaded, report: &IndexReport, asserted: bool) -> (String, Value) {
    let sys = &loaded.system;
    let witness: Vec<String> = report
        .jacobi
        .witness
        .iter()
        .enumerate()
        .map(|(i, &c)| format!("f{} -> {}", i + 1, loaded.file.name_of(c as u32 + 1)))
        .collect();
    let omega = report.mu.omega();
    let mut text = format!(
        "system: {} equations, {} variables, e = {}\n",
        sys.num_equations(),
        sys.num_vars(),
        sys.max_order()
    );
    text.push_str(&format!(
        "mu: {:?}   ranks: {:?}\n",
        report.mu.values(),
        report.mu.ranks()
    ));
    text.push_str(&format!("omega: {}\n", omega));
    text.push_str(&format!("order: {}\n", report.order));
    text.push_str(&format!(
        "jacobi_number: {}   witness: {}\n",
        report.jacobi.value,
        witness.join(", ")
    ));
    text.push_str(&format!(
        "jacobi_bound: {}   omega + order = {}   bound holds: {}\n",
        report.jacobi_bound,
        omega + report.order,
        if report.bound_satisfied { "yes" } else { "NO" }
    ));
    text.push_str(&format!(
        "constraint-chain omega: {}   agrees: {}\n",
        report.omega_constraints,
        if report.cross_check_agrees {
            "yes"
        } else {
            "NO"
        }
    ));
    text.push_str(&format!(
        "regularity bound: e - 1 = {}   observed: {}\n",
        report.regularity.regularity_bound, report.regularity.observed_regularity
    ));
    text.push_str("regularity table:\n  i  level  trdeg  phi  match\n");
    for row in &report.regularity.rows {
        text.push_str(&format!(
            "  {:<2} {:<6} {:<6} {:<4} {}\n",
            row.i,
            row.level,
            row.trdeg,
            row.phi,
            if row.matches { "yes" } else { "no" }
        ));
    }
    text.push_str(assumption_label(asserted));

    let value = json!({
        "version": SCHEMA_VERSION,
        "command": "index",
        "mu": report.mu.values(),
        "ranks": report.mu.ranks(),
        "omega": omega,
        "order": report.order,
        "jacobi_number": report.jacobi.value,
        "jacobi_witness": report.jacobi.witness.iter().map(|&c| c + 1).collect::<Vec<_>>(),
        "jacobi_bound": report.jacobi_bound,
        "bound_holds": report.bound_satisfied,
        "omega_constraints": report.omega_constraints,
        "cross_check_agrees": report.cross_check_agrees,
        "regularity_table": regularity_rows_json(&report.regularity),
        "regularity_bound": report.regularity.regularity_bound,
        "observed_regularity": report.regularity.observed_regularity,
        "assumption": assumption_label(asserted),
    });
    (text, value)
}

/// The worked example shipped with the tool.
pub const EXAMPLE_SYSTEM: &str = "\
# worked example: two multiplicative recurrences tied by a linear constraint
vars: y1 y2 y3
f1: y1^(1) - y1*y3
f2: y2^(1) - y2*y3
f3: y1 + y2 - 1
q1: y3 - 1
q2: y1
";

/// Frozen report for the worked example; `diffindex example` recomputes the
/// analysis and diffs against this text.
const EXAMPLE_REPORT: &str = include_str!("../testdata/example_report.txt");

/// Builds the canonical report text for the worked example.
pub fn example_report_text() -> Result<String, String> {
    example_report_inner().map_err(|e| e.to_string())
}

fn example_report_inner() -> Result<String, CliError> {
    let file = parser::parse_system_file(EXAMPLE_SYSTEM)?;
    let system = file.system().map_err(ParseError::from)?;
    let loaded = Loaded { file, system };
    let report = index::index_report(&loaded.system, None)?;
    let (index_text, _) = render_index(&loaded, &report, true);
    let profile = index::mu_sequence(&loaded.system)?;
    let mut out = index_text;
    out.push('\n');
    for (label, query) in loaded.file.queries.clone() {
        let (t, _) = render_member(&loaded, &profile, &label, &query, true);
        out.push('\n');
        out.push_str(&t);
        out.push('\n');
    }
    Ok(out)
}

fn run_example(format: Format) -> Result<i32, CliError> {
    let actual = example_report_inner()?;
    let expected = EXAMPLE_REPORT;
    let matches = actual.trim_end() == expected.trim_end();
    if format.structured() {
        let value = json!({
            "version": SCHEMA_VERSION,
            "command": "example",
            "matches_stored_report": matches,
            "report": actual,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("{actual}");
        if matches {
            println!("example report matches the stored golden output");
        } else {
            println!("example report DIFFERS from the stored golden output:");
            for (a, b) in actual.trim_end().lines().zip(expected.trim_end().lines()) {
                if a != b {
                    println!("  expected: {b}");
                    println!("  actual:   {a}");
                }
            }
        }
    }
    Ok(if matches { EXIT_OK } else { EXIT_ANALYSIS })
}
