//! `nustar`: multiplicity sequences and equisingularity decisions from the
//! command line.
//!
//! Exit codes: 0 success, 1 corpus failures, 2 input error, 3 resource
//! exhaustion.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nustar::corpus::{load_corpus, run_corpus, CorpusReport, Status, BUNDLED_CORPUS};
use nustar::equising::{
    family_zariski_equisingular, multiplicity_sequence, nu_star_constant, nu_transverse_ze, theorem1_harness, Options,
    SurfaceGerm,
};
use nustar::isolated::{milnor_plane_curve, PlaneCurveGerm, MILNOR_TRIALS};
use nustar::parse::parse_poly;
use nustar::Error;

#[derive(Parser, Debug)]
#[command(name = "nustar", version, about = "Multiplicity sequences and Zariski equisingularity of surface germs")]
struct Cli {
    /// Seed for the random coordinate changes.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Maximal series precision (overrides the per-germ default).
    #[arg(long, global = true)]
    max_precision: Option<u32>,
    /// Maximal number of coordinate trials.
    #[arg(long, global = true, default_value_t = 32)]
    max_trials: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Comma-separated parameter names, e.g. "t,u".
    #[arg(long, global = true, value_delimiter = ',')]
    params: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Zariski equisingularity in generic coordinates.
    Ze,
    /// Zariski equisingularity in nested transverse coordinates.
    Nutze,
    /// Constancy of the multiplicity sequence.
    Nustar,
    /// All three, checked for agreement.
    Harness,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Ze => "ze",
            Mode::Nutze => "nutze",
            Mode::Nustar => "nustar",
            Mode::Harness => "harness",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity sequence of a surface germ f(x, y, z).
    Musq { expression: String },
    /// Decide a family f(x, y, z, params) at the zero parameter.
    CheckFamily {
        expression: String,
        #[arg(long, value_enum, default_value_t = Mode::Harness)]
        mode: Mode,
    },
    /// Milnor number of a plane curve germ g(x, y).
    CurveMilnor { expression: String },
    /// Run a corpus file (the bundled corpus when no path is given).
    Corpus {
        path: Option<PathBuf>,
        /// Worker threads; 1 runs sequentially.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
}

enum Failure {
    Input(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_exhaustion() {
            Failure::Exhausted(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn options(cli: &Cli) -> Options {
    Options { seed: cli.seed, max_trials: cli.max_trials, max_precision: cli.max_precision, ..Options::default() }
}

fn surface(expr: &str, params: &[String]) -> Result<SurfaceGerm, Failure> {
    let names: Vec<&str> = params.iter().map(String::as_str).collect();
    let f = parse_poly(expr, &["x", "y", "z"], &names)?;
    Ok(SurfaceGerm::new(f, &names)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn musq(cli: &Cli, expr: &str) -> Result<Value, Failure> {
    if !cli.params.is_empty() {
        return Err(Failure::Input("musq takes a single germ; use check-family for parameters".into()));
    }
    let g = surface(expr, &[])?;
    let r = multiplicity_sequence(&g, &options(cli))?;
    let mut out = object(to_value(&r));
    out.insert("expression".into(), json!(g.original().to_string()));
    Ok(Value::Object(out))
}

fn check_family(cli: &Cli, expr: &str, mode: Mode) -> Result<Value, Failure> {
    if cli.params.is_empty() {
        return Err(Failure::Input("check-family needs --params".into()));
    }
    let g = surface(expr, &cli.params)?;
    let opts = options(cli);
    let mut out = match mode {
        Mode::Ze => object(to_value(&family_zariski_equisingular(&g, &opts)?)),
        Mode::Nutze => object(to_value(&nu_transverse_ze(&g, &opts)?)),
        Mode::Nustar => {
            let r = nu_star_constant(&g, &opts)?;
            let mut m = object(to_value(&r));
            m.insert("decision".into(), json!(if r.constant { "yes" } else { "no" }));
            m
        }
        Mode::Harness => object(to_value(&theorem1_harness(&g, &[cli.seed, cli.seed + 1], &opts)?)),
    };
    out.insert("mode".into(), json!(mode.name()));
    out.insert("seed".into(), json!(cli.seed));
    out.insert("params".into(), json!(cli.params));
    out.insert("expression".into(), json!(g.original().to_string()));
    Ok(Value::Object(out))
}

fn curve_milnor(cli: &Cli, expr: &str) -> Result<Value, Failure> {
    if !cli.params.is_empty() {
        return Err(Failure::Input("curve-milnor takes no parameters".into()));
    }
    let c = PlaneCurveGerm::new(parse_poly(expr, &["x", "y"], &[])?)?;
    let mu = milnor_plane_curve(&c, cli.seed, MILNOR_TRIALS, &options(cli))?;
    Ok(json!({
        "expression": c.g().to_string(),
        "milnor": mu,
        "multiplicity": c.multiplicity(),
        "seed": cli.seed,
        "trials": MILNOR_TRIALS,
    }))
}

fn corpus(cli: &Cli, path: Option<&PathBuf>, parallel: usize) -> Result<CorpusReport, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => BUNDLED_CORPUS.to_string(),
    };
    let entries = load_corpus(&text)?;
    Ok(run_corpus(&entries, &options(cli), parallel.max(1)))
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(x, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(x, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn corpus_table(r: &CorpusReport) -> String {
    let mut s = String::new();
    for e in &r.reports {
        s += &format!("{:<6} {}\n", if e.passed { "PASS" } else { "FAIL" }, e.name);
        for c in e.checks.iter().filter(|c| c.status != Status::Pass) {
            s += &format!("       {} {:?}: {}\n", c.check, c.status, c.detail);
        }
    }
    s += &format!("{} entries, {} passed, {} failed (seed {})\n", r.entries, r.passed, r.failed, r.seed);
    s
}

fn emit(cli: &Cli, v: &Value) {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("json")),
        Format::Text => {
            let mut s = String::new();
            text_lines(v, "", &mut s);
            print!("{s}");
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let value = match &cli.command {
        Command::Musq { expression } => musq(cli, expression)?,
        Command::CheckFamily { expression, mode } => check_family(cli, expression, *mode)?,
        Command::CurveMilnor { expression } => curve_milnor(cli, expression)?,
        Command::Corpus { path, parallel } => {
            let r = corpus(cli, path.as_ref(), *parallel)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("json")),
                Format::Text => print!("{}", corpus_table(&r)),
            }
            return Ok(if r.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    emit(cli, &value);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
