//! Command-line front end: argument handling, dispatch and JSON output.
//!
//! Each invocation prints exactly one JSON object with sorted keys on
//! standard output, or `{"error": ...}` on standard error.
//!
//! Exit codes: 0 answer produced, 1 internal failure, 2 bad input,
//! 3 hypothesis not met, 4 resource guard tripped.

mod parse;

pub use parse::{parse_components, parse_polynomial, parse_vector_field};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{self, BoundInput, BoundReport, SurfaceData};
use crate::corpus::{self, CorpusEntry};
use crate::error::{Error, Result};
use crate::extactic::{
    extactic, extract_first_integral, Engine, ExtacticOptions, LinearSystem, SystemKind,
};
use crate::foliation::{Mode, VectorField};
use crate::polyring::{Degree, Ring};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

/// Overrides the system-dimension guard.
pub const MAX_DIM_ENV: &str = "EXTATICA_MAX_DIM";

#[derive(Parser, Debug)]
#[command(
    name = "extatica",
    version,
    about = "Extactic divisors, invariant curves and first integrals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the extactic polynomial for the complete degree-k system.
    Extactic(ExtacticArgs),
    /// Test whether a curve is invariant and report its cofactor.
    InvariantCheck(InvariantArgs),
    /// Extract a rational first integral from a vanishing extactic.
    FirstIntegral(ExtacticArgs),
    /// Evaluate a degree or genus bound.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Print a built-in field and its verified facts.
    Corpus(CorpusArgs),
    /// Parse and print a polynomial or vector field in canonical form.
    Parse(ParseArgs),
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Comma-separated component expressions.
    #[arg(long)]
    pub field: Option<String>,
    /// Built-in field: slv:L, planted:N,D,SEED, random:N,D,SEED, hamiltonian:H, pencil:F;G.
    #[arg(long)]
    pub field_corpus: Option<String>,
    /// File holding the component expressions.
    #[arg(long)]
    pub field_file: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<Mode>,
}

#[derive(Args, Debug)]
pub struct ExtacticArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// System degree.
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Worker threads for the modular engine.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub curve: String,
}

#[derive(Args, Debug)]
pub struct DivisorArgs {
    #[arg(long)]
    pub deg_d: i64,
    #[arg(long)]
    pub h0: i64,
    /// Number of invariant divisors in the linear system.
    #[arg(long)]
    pub count: i64,
    #[arg(long)]
    pub deg_f: i64,
    #[arg(long, default_value_t = 1)]
    pub deg_x: i64,
}

impl DivisorArgs {
    fn input(&self) -> BoundInput {
        BoundInput::new(self.deg_d, self.h0, self.count, self.deg_f, self.deg_x)
    }
}

#[derive(Subcommand, Debug)]
pub enum BoundCommand {
    /// deg(D)(N - h0) <= (deg F - deg X) C(h0, 2).
    Theorem1(DivisorArgs),
    /// deg(D) against (deg F - deg X) C(h0, 2) / (N - h0).
    Poin(DivisorArgs),
    /// Degree-k hypersurfaces on P^n.
    Pn {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        count: i64,
    },
    /// Genus bound for plane curves.
    Gen {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        count: i64,
        /// Defaults to the genus of a smooth plane curve of degree k.
        #[arg(long)]
        genus: Option<i64>,
    },
    /// Genus bound on a surface.
    Cor {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long)]
        genus: i64,
        #[arg(long, default_value_t = 0)]
        h1: i64,
        #[arg(long, default_value_t = 0)]
        h0_k_minus_d: i64,
        /// K.K
        #[arg(long, allow_negative_numbers = true)]
        kk: i64,
        /// K.D
        #[arg(long, allow_negative_numbers = true)]
        kd: i64,
        /// Topological Euler characteristic.
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
    },
    /// Degree bound on an abelian variety.
    Abelian {
        /// D^n
        #[arg(long)]
        self_int: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        count: i64,
        #[arg(long)]
        deg_f: i64,
        #[arg(long, default_value_t = 1)]
        deg_x: i64,
        #[arg(long)]
        deg_d: i64,
    },
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// slv:L, planted:N,D,SEED, hamiltonian:H or pencil:F;G.
    pub name: String,
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub vars: Vec<String>,
    #[arg(long, conflicts_with = "field", required_unless_present = "field")]
    pub poly: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub mode: Option<Mode>,
}

/// What a run produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisNotMet(_) => EXIT_HYPOTHESIS,
        Error::ResourceGuard(_) => EXIT_GUARD,
        Error::InternalConsistency(_)
        | Error::FirstIntegral(_)
        | Error::BadPrime(_)
        | Error::DivisionByZero => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn error_outcome(code: i32, message: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("{}\n", json!({ "error": message })),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => error_outcome(EXIT_INPUT, text.trim_end().to_string()),
            };
        }
    };
    execute(&cli.command)
}

/// Runs an already parsed command.
pub fn execute(command: &Command) -> Outcome {
    let mut stderr = String::new();
    match dispatch(command, &mut stderr) {
        Ok(v) => Outcome {
            code: EXIT_OK,
            stdout: format!("{v}\n"),
            stderr,
        },
        Err(e) => {
            let mut out = error_outcome(exit_code(&e), e.to_string());
            out.stderr.insert_str(0, &stderr);
            out
        }
    }
}

fn dispatch(command: &Command, stderr: &mut String) -> Result<Value> {
    match command {
        Command::Extactic(a) => run_extactic(a),
        Command::InvariantCheck(a) => run_invariant(a),
        Command::FirstIntegral(a) => run_first_integral(a, stderr),
        Command::Bound(b) => run_bound(b),
        Command::Corpus(a) => run_corpus(a),
        Command::Parse(a) => run_parse(a),
    }
}

fn options(engine: Option<Engine>, jobs: Option<usize>) -> Result<ExtacticOptions> {
    let mut o = ExtacticOptions::default();
    if let Some(e) = engine {
        o.engine = e;
    }
    if jobs == Some(0) {
        return Err(Error::InvalidInput("--jobs must be at least 1".into()));
    }
    o.jobs = jobs;
    if let Ok(v) = std::env::var(MAX_DIM_ENV) {
        o.max_dim = v.trim().parse().map_err(|_| {
            Error::InvalidInput(format!(
                "{MAX_DIM_ENV} must be a non-negative integer, got `{v}`"
            ))
        })?;
    }
    Ok(o)
}

fn parse_list<const N: usize>(text: &str, what: &str) -> Result<[u64; N]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        Error::InvalidInput(format!(
            "{what} expects {N} comma-separated integers, got `{text}`"
        ))
    };
    if parts.len() != N {
        return Err(bad());
    }
    let mut out = [0u64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn split_source(source_name: &str) -> Result<(&str, &str)> {
    source_name.split_once(':').ok_or_else(|| {
        Error::InvalidInput(format!(
            "corpus names look like `slv:1`, got `{source_name}`"
        ))
    })
}

/// Looks up a built-in entry by name.
pub fn corpus_entry(source_name: &str) -> Result<CorpusEntry> {
    let (kind, arg) = split_source(source_name)?;
    let plane = Ring::standard(2);
    match kind {
        "slv" => {
            let ell = arg
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad slv index `{arg}`")))?;
            corpus::slv(ell)
        }
        "planted" => {
            let [n, d, seed] = parse_list::<3>(arg, "planted")?;
            corpus::planted_lines_field(n as usize, d as u32, seed)
        }
        "hamiltonian" => corpus::hamiltonian(&parse_polynomial(&plane, arg)?),
        "pencil" => {
            let (f, g) = arg
                .split_once(';')
                .ok_or_else(|| Error::InvalidInput(format!("pencil expects `f;g`, got `{arg}`")))?;
            corpus::pencil_field(&parse_polynomial(&plane, f)?, &parse_polynomial(&plane, g)?)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown corpus family `{other}`"
        ))),
    }
}

/// Built-in field by name; also accepts `random:N,D,SEED`.
pub fn corpus_field(source_name: &str) -> Result<VectorField> {
    let (kind, arg) = split_source(source_name)?;
    if kind == "random" {
        let [n, d, seed] = parse_list::<3>(arg, "random")?;
        let mode = if n >= 3 {
            Mode::Homogeneous
        } else {
            Mode::Affine
        };
        return corpus::random_field(n as usize, d as u32, seed, mode);
    }
    Ok(corpus_entry(source_name)?.field)
}

fn resolve_field(a: &FieldArgs) -> Result<VectorField> {
    let sources = [
        a.field.is_some(),
        a.field_corpus.is_some(),
        a.field_file.is_some(),
    ];
    if sources.iter().filter(|s| **s).count() != 1 {
        return Err(Error::InvalidInput(
            "give exactly one of --field, --field-corpus, --field-file".into(),
        ));
    }
    if let Some(source_name) = &a.field_corpus {
        let field = corpus_field(source_name)?;
        if let Some(vars) = &a.vars {
            if vars.as_slice() != field.ring().names() {
                return Err(Error::InvalidInput(format!(
                    "--vars {} does not match the corpus variables {}",
                    vars.join(","),
                    field.ring().names().join(",")
                )));
            }
        }
        return match a.mode {
            Some(m) => field.with_mode(m),
            None => Ok(field),
        };
    }
    let text = match (&a.field, &a.field_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => unreachable!("source count checked above"),
    };
    let vars = a
        .vars
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("--vars is required with --field".into()))?;
    let ring = Ring::new(vars)?;
    parse_vector_field(&ring, &text, a.mode)
}

fn system_for(field: &VectorField, k: u32) -> Result<LinearSystem> {
    let kind = match field.mode() {
        Mode::Homogeneous => SystemKind::Homogeneous,
        Mode::Affine => SystemKind::Affine,
    };
    LinearSystem::monomial(field.ring(), k, kind)
}

fn degree_json(d: Degree) -> Value {
    match d.finite() {
        Some(d) => json!(d),
        None => Value::Null,
    }
}

fn run_extactic(a: &ExtacticArgs) -> Result<Value> {
    let field = resolve_field(&a.field)?;
    let system = system_for(&field, a.k)?;
    let report = extactic(&field, &system, &options(a.engine, a.jobs)?)?;
    Ok(json!({
        "command": "extactic",
        "vars": field.ring().names(),
        "field": field.to_string(),
        "mode": field.mode().as_str(),
        "k": a.k,
        "m": report.dimension,
        "engine": report.engine.as_str(),
        "extactic": report.extactic.to_string(),
        "degree": degree_json(report.degree),
        "degree_bound": report.degree_bound,
        "identically_zero": report.identically_zero,
    }))
}

fn run_invariant(a: &InvariantArgs) -> Result<Value> {
    let field = resolve_field(&a.field)?;
    let curve = parse_polynomial(field.ring(), &a.curve)?;
    let cofactor = field.check_invariance(&curve)?;
    Ok(json!({
        "command": "invariant-check",
        "field": field.to_string(),
        "curve": curve.to_string(),
        "invariant": cofactor.is_some(),
        "cofactor": cofactor.map(|c| c.polynomial.to_string()),
    }))
}

fn run_first_integral(a: &ExtacticArgs, stderr: &mut String) -> Result<Value> {
    let field = resolve_field(&a.field)?;
    let system = system_for(&field, a.k)?;
    let (status, numerator, denominator, rank) =
        match extract_first_integral(&field, &system, &options(a.engine, a.jobs)?) {
            Ok(fi) => (
                "found",
                Some(fi.numerator.to_string()),
                Some(fi.denominator.to_string()),
                Some(fi.rank),
            ),
            Err(Error::ExtacticNonzero) => {
                ("extactic-nonzero", None, None, Some(system.dimension()))
            }
            Err(Error::FirstIntegral(msg)) => {
                stderr.push_str(&format!("{}\n", json!({ "diagnostic": msg })));
                ("failed", None, None, None)
            }
            Err(e) => return Err(e),
        };
    Ok(json!({
        "command": "first-integral",
        "status": status,
        "numerator": numerator,
        "denominator": denominator,
        "rank": rank,
    }))
}

fn report_json(r: &BoundReport) -> Value {
    json!({
        "command": "bound",
        "formula": r.formula.id(),
        "lhs": r.lhs.to_string(),
        "rhs": r.rhs.to_string(),
        "threshold": r.threshold.as_ref().map(|t| t.to_string()),
        "verdict": r.verdict.as_str(),
    })
}

fn run_bound(b: &BoundCommand) -> Result<Value> {
    let report = match b {
        BoundCommand::Theorem1(d) => bounds::theorem1_check(&d.input())?,
        BoundCommand::Poin(d) => bounds::poincare_check(&d.input())?,
        BoundCommand::Pn { d, k, n, count } => bounds::pn_check(*d, *k, *n, *count)?,
        BoundCommand::Gen { d, k, count, genus } => bounds::genus_check(*d, *k, *count, *genus)?,
        BoundCommand::Cor {
            divisor,
            genus,
            h1,
            h0_k_minus_d,
            kk,
            kd,
            chi,
        } => {
            let mut input = divisor.input();
            input.genus = Some(*genus);
            input.surface = Some(SurfaceData {
                h1: *h1,
                h0_k_minus_d: *h0_k_minus_d,
                k_dot_k: *kk,
                k_dot_d: *kd,
                chi_top: *chi,
            });
            bounds::surface_bound(&input)?
        }
        BoundCommand::Abelian {
            self_int,
            n,
            count,
            deg_f,
            deg_x,
            deg_d,
        } => bounds::abelian_check(*self_int, *n, *count, *deg_f, *deg_x, *deg_d)?,
    };
    Ok(report_json(&report))
}

fn run_corpus(a: &CorpusArgs) -> Result<Value> {
    let entry = corpus_entry(&a.name)?;
    Ok(json!({
        "command": "corpus",
        "name": entry.name,
        "vars": entry.field.ring().names(),
        "field": entry.field.to_string(),
        "mode": entry.field.mode().as_str(),
        "facts": entry.facts_json(),
        "note": entry.note,
    }))
}

fn run_parse(a: &ParseArgs) -> Result<Value> {
    let ring = Ring::new(&a.vars)?;
    let (polynomial, field, mode) = match (&a.poly, &a.field) {
        (Some(p), _) => (Some(parse_polynomial(&ring, p)?.to_string()), None, None),
        (None, Some(f)) => {
            let field = parse_vector_field(&ring, f, a.mode)?;
            (None, Some(field.to_string()), Some(field.mode().as_str()))
        }
        (None, None) => return Err(Error::InvalidInput("give --poly or --field".into())),
    };
    Ok(json!({
        "command": "parse",
        "vars": ring.names(),
        "polynomial": polynomial,
        "field": field,
        "mode": mode,
    }))
}
