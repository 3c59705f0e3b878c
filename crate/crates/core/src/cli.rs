//! Command-line front end.
//!
//! Exit codes: 0 when the query was answered (including "unsatisfiable"
//! and "false" answers), 2 on a syntax error in the knowledge base, the
//! query or the arguments, 3 when the knowledge base or the query is
//! semantically invalid, 4 on internal or I/O errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::parser::{Document, ParseError, ParseOptions};
use crate::rational::{fmt_short, parse_rat, to_f64, Rat};
use crate::reasoner::{AltMode, Answer, Axiom, Query, QueryResult, QueryStats, Reasoner, ReasonerError, ReasonerOptions};
use crate::semantics::Semantics;
use crate::tableau::TableauOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Zadeh,
    Luk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AltArg {
    I,
    Ii,
}

#[derive(Debug, Parser)]
#[command(name = "fuzzy-alcd", version, about = "Fuzzy ALC(D) reasoner with exact rational answers")]
pub struct Cli {
    /// Connective family.
    #[arg(long, value_enum, default_value = "zadeh", global = true)]
    pub semantics: SemanticsArg,
    /// Ramp width of crisp predicates (default: 1/1000 of each domain).
    #[arg(long, value_parser = parse_degree_arg, global = true)]
    pub epsilon: Option<Rat>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: FormatArg,
    /// Write the completion and the MIP of the query to this file.
    #[arg(long, global = true)]
    pub dump_constraints: Option<PathBuf>,
    /// Read an unweighted ABox with every assertion at degree 1 (i) or at
    /// the queried degree itself (ii).
    #[arg(long, value_enum, global = true)]
    pub alt_bdb: Option<AltArg>,
    /// Encode crisp predicates through their ε-ramps only.
    #[arg(long, global = true)]
    pub ramp_crisp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is the knowledge base satisfiable?
    Sat { kb: PathBuf },
    /// Best degree bound of an axiom.
    Glb {
        kb: PathBuf,
        /// `<a> : <concept>`
        #[arg(long, group = "axiom")]
        assertion: Option<String>,
        /// `<A> <: <B>` between concept names.
        #[arg(long, group = "axiom")]
        subsumes: Option<String>,
        /// `(<a>,<b>) : <R>`
        #[arg(long, group = "axiom")]
        role: Option<String>,
    },
    /// Does the knowledge base entail the axiom to the given degree?
    Entails {
        kb: PathBuf,
        /// An assertion, role assertion or subsumption.
        #[arg(long)]
        axiom: String,
        #[arg(long, value_parser = parse_degree_arg)]
        degree: Rat,
    },
}

fn parse_degree_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct JsonStats {
    rule_applications: usize,
    merges: usize,
    variables: usize,
    binaries: usize,
    constraints: usize,
    nodes: usize,
    pivots: usize,
}

impl From<QueryStats> for JsonStats {
    fn from(s: QueryStats) -> Self {
        JsonStats {
            rule_applications: s.rule_applications,
            merges: s.merges,
            variables: s.variables,
            binaries: s.binaries,
            constraints: s.constraints,
            nodes: s.nodes,
            pivots: s.pivots,
        }
    }
}

#[derive(Serialize)]
struct JsonResult {
    query: String,
    status: &'static str,
    glb: Option<String>,
    decimal: Option<f64>,
    semantics: &'static str,
    stats: JsonStats,
}

/// Shortest decimal rendering of the nearest double.
pub fn decimal(r: &Rat) -> String {
    format!("{}", to_f64(r))
}

enum Failure {
    Parse(String),
    Invalid(String),
    Internal(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<ReasonerError> for Failure {
    fn from(e: ReasonerError) -> Self {
        match e {
            ReasonerError::Solver(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn status(result: &QueryResult) -> &'static str {
    match &result.answer {
        Answer::Satisfiable(true) => "satisfiable",
        Answer::Satisfiable(false) => "unsatisfiable",
        Answer::Degree(_) if !result.kb_satisfiable => "kb-unsatisfiable",
        Answer::Degree(_) => "optimal",
        Answer::Entailed { holds: true, .. } => "entailed",
        Answer::Entailed { holds: false, .. } => "not-entailed",
    }
}

fn render_text(result: &QueryResult) -> String {
    let mut out = match &result.answer {
        Answer::Satisfiable(true) => "satisfiable".to_string(),
        Answer::Satisfiable(false) => "unsatisfiable".to_string(),
        Answer::Degree(d) => format!("glb = {} ({})", fmt_short(d), decimal(d)),
        Answer::Entailed { holds, glb } => format!("{holds} (glb = {} ({}))", fmt_short(glb), decimal(glb)),
    };
    out.push('\n');
    if !result.kb_satisfiable && !matches!(result.answer, Answer::Satisfiable(_)) {
        out.push_str("note: the knowledge base is unsatisfiable, so every axiom holds to degree 1\n");
    }
    out
}

fn render_json(query: &Query, semantics: Semantics, result: &QueryResult) -> String {
    let glb = result.degree();
    let j = JsonResult {
        query: query.to_string(),
        status: status(result),
        glb: glb.map(fmt_short),
        decimal: glb.map(to_f64),
        semantics: semantics.name(),
        stats: result.stats.into(),
    };
    let mut s = serde_json::to_string(&j).expect("serialisable");
    s.push('\n');
    s
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let path = match &cli.command {
        Command::Sat { kb } | Command::Glb { kb, .. } | Command::Entails { kb, .. } => kb,
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Internal(format!("cannot read {}: {e}", path.display())))?;
    let mut doc = Document::parse(
        &text,
        ParseOptions {
            epsilon: cli.epsilon.clone(),
        },
    )
    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let query = match &cli.command {
        Command::Sat { .. } => Query::Sat,
        Command::Glb {
            assertion,
            subsumes,
            role,
            ..
        } => match (assertion, subsumes, role) {
            (Some(a), _, _) => {
                let a = doc.parse_assertion(a)?;
                match (cli.alt_bdb, a) {
                    (Some(mode), crate::kb::Assertion::Concept { individual, concept }) => Query::GlbAlternate {
                        mode: match mode {
                            AltArg::I => AltMode::I,
                            AltArg::Ii => AltMode::II,
                        },
                        individual,
                        concept,
                    },
                    (_, a) => Query::glb(Axiom::Assertion(a)),
                }
            }
            (_, Some(s), _) => {
                let (a, b) = doc.parse_subsumption(s)?;
                Query::GlbSubsumption { sub: a, sup: b }
            }
            (_, _, Some(r)) => {
                let a = doc.parse_assertion(r)?;
                if !matches!(a, crate::kb::Assertion::Role { .. }) {
                    return Err(Failure::Parse("--role expects `(<a>,<b>) : <R>`".into()));
                }
                Query::glb(Axiom::Assertion(a))
            }
            _ => return Err(Failure::Parse("glb needs one of --assertion, --subsumes or --role".into())),
        },
        Command::Entails { axiom, degree, .. } => Query::Entails {
            axiom: doc.parse_axiom(axiom)?,
            degree: degree.clone(),
        },
    };
    let kb = doc.build().map_err(|errs| {
        Failure::Invalid(
            errs.iter()
                .map(|e| format!("{}: {e}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })?;
    let semantics = match cli.semantics {
        SemanticsArg::Zadeh => Semantics::Zadeh,
        SemanticsArg::Luk => Semantics::Lukasiewicz,
    };
    let options = ReasonerOptions {
        tableau: TableauOptions {
            exact_crisp: !cli.ramp_crisp,
        },
        record_dump: cli.dump_constraints.is_some(),
    };
    let reasoner = Reasoner::with_options(kb, semantics, options);
    let result = reasoner.run(&query)?;
    if let Some(p) = &cli.dump_constraints {
        let dump = result
            .dump
            .clone()
            .unwrap_or_else(|| "# answered without a constraint set\n".to_string());
        std::fs::write(p, dump).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", p.display())))?;
    }
    let rendered = match cli.format {
        FormatArg::Text => render_text(&result),
        FormatArg::Json => render_json(&query, semantics, &result),
    };
    out.write_all(rendered.as_bytes())
        .map_err(|e| Failure::Internal(e.to_string()))
}

/// Runs the command line `args` (including the program name), writing the
/// answer to `out` and diagnostics to `err`; returns the exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_PARSE
        }
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INVALID
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
    }
}
