//! The `biclaw` command line.
//!
//! Every subcommand prints one JSON document (or CSV for `experiment`, or
//! graph text for `gen`) on stdout. Exit status is 0 on success, 2 when a
//! computation stage fails or a witness is rejected, and 1 for usage, file
//! and parse errors.

mod experiment;

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::detect::{BiclawEmbedding, BiclawSearch, DetectError};
use crate::generate::GenSpec;
use crate::graph::BipartiteGraph;
use crate::hamilton::{hamiltonian_cycle_with, verify_cycle, CycleWitness, HamiltonOptions, Route};
use crate::oracle::{
    oracle_hamiltonian_with, oracle_induced_biclaw_with, DEFAULT_BICLAW_BUDGET, DEFAULT_HAMILTON_CAP,
};
use crate::structure::{constants, density_report, DensityOptions};

pub use experiment::{collect_specs, experiment_rows, rows_to_csv, summarize, ExperimentArgs, ExperimentRow, ExperimentSummary, RowConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_STAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "biclaw", version, about = "Biclaw detection and Hamiltonian cycles in bipartite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and print it in text form.
    Gen(GenArgs),
    /// Decide induced S_{a,b}-freeness and report a witness if one exists.
    Check(CheckArgs),
    /// Edge density, diameter and deficiency-set sizes.
    Analyze(AnalyzeArgs),
    /// Construct a Hamiltonian cycle.
    Hamilton(HamiltonArgs),
    /// Check a cycle or biclaw witness against a graph.
    Verify(VerifyArgs),
    /// Run a brute-force reference search.
    Oracle(OracleArgs),
    /// Print the threshold constants C1..C6 for given t and epsilon.
    Constants(ConstantsArgs),
    /// Sweep a corpus of generated graphs; CSV rows on stdout, summary JSON elsewhere.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Read the graph from this file instead of stdin.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Full spec such as `complete_minus_sparse:n=20,removal=3,t=3,seed=1`.
    /// Flags below are appended to it as parameters.
    pub spec: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub removal: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the graph here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Checks S_{t,t} unless --a/--b override one side.
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Wall-clock budget for the search.
    #[arg(long, value_name = "MS")]
    pub budget_ms: Option<u64>,
    /// Search edges one at a time instead of in parallel.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Comma-separated list of epsilons.
    #[arg(long, value_delimiter = ',', default_value = "0.01")]
    pub eps: Vec<f64>,
    /// Number of sampled (a, b) pairs for the S-set maximum.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HamiltonArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Wall-clock budget for the exact fallback.
    #[arg(long, value_name = "MS")]
    pub budget_ms: Option<u64>,
    /// Largest vertex count handed to the exact fallback.
    #[arg(long, default_value_t = DEFAULT_HAMILTON_CAP)]
    pub oracle_cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Cycle as whitespace-separated tokens, e.g. "X0 Y0 X1 Y1".
    #[arg(long, conflicts_with_all = ["biclaw", "result"])]
    pub cycle: Option<String>,
    /// Biclaw record, e.g. "biclaw x=0 y=0 A=1 B=2".
    #[arg(long, conflicts_with = "result")]
    pub biclaw: Option<String>,
    /// JSON output of `hamilton` or `check`; its witness is verified.
    #[arg(long, value_name = "FILE")]
    pub result: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Biclaw,
    Hamilton,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, value_enum)]
    pub kind: OracleKind,
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Candidate budget for the biclaw search.
    #[arg(long, default_value_t = DEFAULT_BICLAW_BUDGET)]
    pub budget: u64,
    /// Vertex cap for the Hamiltonicity search.
    #[arg(long, default_value_t = DEFAULT_HAMILTON_CAP)]
    pub cap: usize,
    #[arg(long, value_name = "MS")]
    pub budget_ms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
}

/// A failed command: exit status plus what to print on stderr. Stage
/// failures also carry a JSON body for stdout.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub body: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            body: None,
        }
    }

    fn stage(message: impl Into<String>, body: Value) -> Self {
        Failure {
            code: EXIT_STAGE,
            message: message.into(),
            body: Some(body),
        }
    }
}

type CmdResult = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Check(a) => read_graph(&a.input, stdin).and_then(|g| cmd_check(&g, &a)),
        Command::Analyze(a) => read_graph(&a.input, stdin).and_then(|g| cmd_analyze(&g, &a)),
        Command::Hamilton(a) => read_graph(&a.input, stdin).and_then(|g| cmd_hamilton(&g, &a)),
        Command::Verify(a) => read_graph(&a.input, stdin).and_then(|g| cmd_verify(&g, &a)),
        Command::Oracle(a) => read_graph(&a.input, stdin).and_then(|g| cmd_oracle(&g, &a)),
        Command::Constants(a) => cmd_constants(&a),
        Command::Experiment(a) => experiment::cmd_experiment(&a, stderr),
    };
    match outcome {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            if let Some(body) = &f.body {
                let _ = stdout.write_all(json_line(body).as_bytes());
            }
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_graph(input: &InputArg, stdin: &mut dyn Read) -> Result<BipartiteGraph, Failure> {
    let text = match &input.input {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            s
        }
    };
    BipartiteGraph::parse(&text).map_err(|e| Failure::usage(e.to_string()))
}

fn deadline(budget_ms: Option<u64>) -> Option<Instant> {
    budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
}

fn shape(t: usize, a: Option<usize>, b: Option<usize>) -> (usize, usize) {
    (a.unwrap_or(t), b.unwrap_or(t))
}

fn gen_spec_text(args: &GenArgs) -> Result<String, Failure> {
    let mut params: Vec<String> = Vec::new();
    let mut push = |key: &str, val: Option<String>| {
        if let Some(v) = val {
            params.push(format!("{key}={v}"));
        }
    };
    push("n", args.n.map(|v| v.to_string()));
    push("nx", args.nx.map(|v| v.to_string()));
    push("ny", args.ny.map(|v| v.to_string()));
    push("p", args.p.map(|v| v.to_string()));
    push("removal", args.removal.map(|v| v.to_string()));
    push("t", args.t.map(|v| v.to_string()));
    push("k", args.k.map(|v| v.to_string()));
    push("degree", args.degree.map(|v| v.to_string()));
    push("a", args.a.map(|v| v.to_string()));
    push("b", args.b.map(|v| v.to_string()));
    push("name", args.name.clone());
    push("seed", args.seed.map(|v| v.to_string()));
    let base = match (&args.spec, &args.family) {
        (Some(_), Some(_)) => return Err(Failure::usage("give either a spec or --family, not both")),
        (Some(s), None) => s.clone(),
        (None, Some(f)) => format!("{f}:"),
        (None, None) => return Err(Failure::usage("gen needs a spec or --family")),
    };
    if params.is_empty() {
        return Ok(base);
    }
    let sep = if base.ends_with(':') {
        ""
    } else if base.contains(':') {
        ","
    } else {
        ":"
    };
    Ok(format!("{base}{sep}{}", params.join(",")))
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let text = gen_spec_text(args)?;
    let spec: GenSpec = text.parse().map_err(|e: crate::generate::BadSpec| Failure::usage(e.to_string()))?;
    let g = spec.generate().map_err(|e| Failure::usage(e.to_string()))?;
    let body = format!("# {spec}\n{}", g.to_text());
    match &args.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn embedding_json(w: &Option<BiclawEmbedding>) -> Value {
    match w {
        Some(w) => json!(w.to_string()),
        None => Value::Null,
    }
}

fn cmd_check(g: &BipartiteGraph, args: &CheckArgs) -> CmdResult {
    let (a, b) = shape(args.t, args.a, args.b);
    let search = BiclawSearch::new(a, b)
        .parallel(!args.serial)
        .deadline(deadline(args.budget_ms));
    match search.run(g) {
        Ok(w) => Ok(json_line(&json!({
            "biclaw_free": w.is_none(),
            "a": a,
            "b": b,
            "witness": embedding_json(&w),
        }))),
        Err(DetectError::Timeout) => Err(Failure::stage(
            "detector budget exhausted",
            json!({"stage": "detect", "error": {"kind": "timeout", "message": "detector budget exhausted"}}),
        )),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn cmd_analyze(g: &BipartiteGraph, args: &AnalyzeArgs) -> CmdResult {
    if let Some(&bad) = args.eps.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(Failure::usage(format!("epsilon {bad} outside (0, 1)")));
    }
    let opts = DensityOptions {
        epsilons: args.eps.clone(),
        pairs: args.pairs,
        seed: args.seed,
    };
    let report = density_report(g, &opts);
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["nx"] = json!(g.nx());
    v["ny"] = json!(g.ny());
    v["min_degree"] = json!(g.min_degree());
    Ok(json_line(&v))
}

fn cmd_hamilton(g: &BipartiteGraph, args: &HamiltonArgs) -> CmdResult {
    if !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(Failure::usage(format!("epsilon {} outside (0, 1)", args.eps)));
    }
    let opts = HamiltonOptions {
        epsilon: args.eps,
        oracle_cap: args.oracle_cap,
        deadline: deadline(args.budget_ms),
    };
    match hamiltonian_cycle_with(g, &opts) {
        Ok(out) => {
            let (route, failed) = match &out.route {
                Route::Pipeline => ("pipeline", Value::Null),
                Route::OracleFallback { failed } => (
                    "oracle_fallback",
                    json!({
                        "stage": failed.stage.name(),
                        "kind": failed.error.kind(),
                        "message": failed.error.to_string(),
                    }),
                ),
            };
            Ok(json_line(&json!({
                "hamiltonian": true,
                "cycle": out.cycle.to_string(),
                "length": out.cycle.len(),
                "route": route,
                "pipeline_failure": failed,
            })))
        }
        Err(f) => {
            let body = json!({
                "hamiltonian": false,
                "stage": f.stage().name(),
                "error": {
                    "kind": f.failure.error.kind(),
                    "message": f.failure.error.to_string(),
                },
                "fallback": serde_json::to_value(&f.fallback).expect("fallback serializes"),
            });
            Err(Failure::stage(f.to_string(), body))
        }
    }
}

fn cmd_verify(g: &BipartiteGraph, args: &VerifyArgs) -> CmdResult {
    let (cycle, biclaw) = match &args.result {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            match (v.get("cycle").and_then(Value::as_str), v.get("witness").and_then(Value::as_str)) {
                (Some(c), _) => (Some(c.to_string()), None),
                (None, Some(w)) => (None, Some(w.to_string())),
                _ => return Err(Failure::usage("result file holds no cycle or witness")),
            }
        }
        None => (args.cycle.clone(), args.biclaw.clone()),
    };
    let report = if let Some(c) = cycle {
        let c: CycleWitness = c.parse().map_err(|e: crate::graph::GraphError| Failure::usage(e.to_string()))?;
        let check = verify_cycle(g, &c);
        json!({"kind": "cycle", "valid": check.valid, "violation": check.violation.map(|v| v.to_string())})
    } else if let Some(b) = biclaw {
        let w: BiclawEmbedding = b.parse().map_err(|e| Failure::usage(format!("{e}")))?;
        let check = w.validate(g);
        json!({"kind": "biclaw", "valid": check.is_ok(), "violation": check.err().map(|v| v.to_string())})
    } else {
        return Err(Failure::usage("verify needs --cycle, --biclaw or --result"));
    };
    if report["valid"] == json!(true) {
        Ok(json_line(&report))
    } else {
        Err(Failure::stage("witness rejected", report))
    }
}

fn cmd_oracle(g: &BipartiteGraph, args: &OracleArgs) -> CmdResult {
    let limit = deadline(args.budget_ms);
    let oracle_failure = |e: crate::oracle::OracleError| {
        Failure::stage(
            e.to_string(),
            json!({"stage": "oracle", "error": {"kind": "oracle", "message": e.to_string()}}),
        )
    };
    match args.kind {
        OracleKind::Biclaw => {
            let (a, b) = shape(args.t, args.a, args.b);
            let w = oracle_induced_biclaw_with(g, a, b, args.budget, limit).map_err(oracle_failure)?;
            Ok(json_line(&json!({
                "oracle": "biclaw",
                "a": a,
                "b": b,
                "biclaw_free": w.is_none(),
                "witness": embedding_json(&w),
            })))
        }
        OracleKind::Hamilton => {
            let c = oracle_hamiltonian_with(g, args.cap, limit).map_err(oracle_failure)?;
            Ok(json_line(&json!({
                "oracle": "hamilton",
                "hamiltonian": c.is_some(),
                "cycle": c.map(|c| c.to_string()),
            })))
        }
    }
}

fn cmd_constants(args: &ConstantsArgs) -> CmdResult {
    if args.t == 0 || !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(Failure::usage("constants needs t >= 1 and epsilon in (0, 1)"));
    }
    let ladder = constants(args.t, args.eps);
    Ok(json_line(&serde_json::to_value(&ladder).expect("ladder serializes")))
}
