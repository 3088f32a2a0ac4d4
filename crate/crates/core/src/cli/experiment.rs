//! Corpus sweeps. One CSV row per generated graph, in input order, plus an
//! aggregate JSON summary.
//!
//! CSV header:
//!
//! ```text
//! spec,nx,ny,m,min_deg,diameter,density_ratio,u_size_eps,s_max_eps,biclaw_free_t,hamiltonian_ok,stage_failed,elapsed_ms
//! ```
//!
//! `diameter` is `inf` for disconnected graphs. `biclaw_free_t` is `true`,
//! `false` or `timeout`. `stage_failed` names the first pipeline stage that
//! failed (empty if none), even when the exact fallback then found a
//! cycle. `elapsed_ms` is 0 unless `--timing` is given, so that runs with
//! identical flags are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use super::{deadline, Failure};
use crate::detect::{BiclawSearch, DetectError};
use crate::generate::{BadSpec, GenSpec};
use crate::hamilton::{hamiltonian_cycle_with, HamiltonOptions, Route};
use crate::structure::{density_report, epsilon_key, DensityOptions};

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// A generator spec; repeatable.
    #[arg(long = "spec", value_name = "SPEC")]
    pub specs: Vec<String>,
    /// File with one spec per line (`#` starts a comment).
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Family for a size-by-seed grid, combined with --sizes and --seeds.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated part sizes `n` for the grid.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Seeds 0..N for the grid.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// Extra `key=value` parameters for every grid spec; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    /// Sampled pairs for the S-set maximum.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Sampling seed for the S-set maximum.
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Per-graph wall-clock budget for the detector and the exact fallback.
    #[arg(long, value_name = "MS")]
    pub budget_ms: Option<u64>,
    /// Skip the Hamiltonian pipeline.
    #[arg(long)]
    pub no_hamilton: bool,
    /// Fill the elapsed_ms column with real timings.
    #[arg(long)]
    pub timing: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the summary JSON here instead of stderr.
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub spec: String,
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    pub min_deg: usize,
    pub diameter: String,
    pub density_ratio: f64,
    pub u_size_eps: usize,
    pub s_max_eps: usize,
    pub biclaw_free_t: String,
    pub hamiltonian_ok: bool,
    pub stage_failed: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub rows: usize,
    pub t: usize,
    pub epsilon: f64,
    pub biclaw_free: usize,
    pub detector_timeouts: usize,
    pub hamiltonian_ok: usize,
    pub via_pipeline: usize,
    pub via_oracle: usize,
    /// stage -> rows whose pipeline failed there
    pub stage_failures: BTreeMap<String, usize>,
    pub min_density_ratio: Option<f64>,
    pub max_diameter: Option<usize>,
    pub disconnected: usize,
    /// Connected biclaw-free rows with diameter at most 5.
    pub biclaw_free_diameter_at_most_5: usize,
    pub max_u_size: usize,
    pub max_s_max: usize,
}

/// Settings shared by every row.
#[derive(Debug, Clone)]
pub struct RowConfig {
    pub eps: f64,
    pub t: usize,
    pub pairs: Option<usize>,
    pub sample_seed: u64,
    pub budget_ms: Option<u64>,
    pub hamilton: bool,
    pub timing: bool,
}

impl From<&ExperimentArgs> for RowConfig {
    fn from(a: &ExperimentArgs) -> Self {
        RowConfig {
            eps: a.eps,
            t: a.t,
            pairs: a.pairs,
            sample_seed: a.sample_seed,
            budget_ms: a.budget_ms,
            hamilton: !a.no_hamilton,
            timing: a.timing,
        }
    }
}

fn row(spec: &GenSpec, cfg: &RowConfig) -> Result<(ExperimentRow, Option<bool>), BadSpec> {
    let started = Instant::now();
    let g = spec.generate()?;
    let opts = DensityOptions {
        epsilons: vec![cfg.eps],
        pairs: cfg.pairs,
        seed: cfg.sample_seed,
    };
    let report = density_report(&g, &opts);
    let key = epsilon_key(cfg.eps);
    let free = match BiclawSearch::new(cfg.t, cfg.t)
        .parallel(false)
        .deadline(deadline(cfg.budget_ms))
        .run(&g)
    {
        Ok(w) => w.is_none().to_string(),
        Err(DetectError::Timeout) => "timeout".to_string(),
        Err(e) => unreachable!("detector on a generated graph: {e}"),
    };
    let (ok, stage, pipeline) = if cfg.hamilton {
        let hopts = HamiltonOptions {
            epsilon: cfg.eps,
            deadline: deadline(cfg.budget_ms),
            ..HamiltonOptions::default()
        };
        match hamiltonian_cycle_with(&g, &hopts) {
            Ok(out) => match out.route {
                Route::Pipeline => (true, String::new(), Some(true)),
                Route::OracleFallback { failed } => (true, failed.stage.name().to_string(), Some(false)),
            },
            Err(f) => (false, f.stage().name().to_string(), None),
        }
    } else {
        (false, String::new(), None)
    };
    let elapsed_ms = if cfg.timing { started.elapsed().as_millis() as u64 } else { 0 };
    Ok((
        ExperimentRow {
            spec: spec.to_string(),
            nx: g.nx(),
            ny: g.ny(),
            m: g.edge_count(),
            min_deg: g.min_degree(),
            diameter: report.diameter.to_string(),
            density_ratio: report.density_ratio,
            u_size_eps: report.u_sizes.get(&key).copied().unwrap_or(0),
            s_max_eps: report.s_max.get(&key).copied().unwrap_or(0),
            biclaw_free_t: free,
            hamiltonian_ok: ok,
            stage_failed: stage,
            elapsed_ms,
        },
        pipeline,
    ))
}

/// Runs every spec, in parallel, and returns rows in input order together
/// with whether each cycle came from the pipeline (`Some(true)`), the
/// fallback (`Some(false)`), or was not found.
pub fn experiment_rows(
    specs: &[GenSpec],
    cfg: &RowConfig,
) -> Result<Vec<(ExperimentRow, Option<bool>)>, BadSpec> {
    specs.par_iter().map(|s| row(s, cfg)).collect()
}

pub fn summarize(rows: &[(ExperimentRow, Option<bool>)], cfg: &RowConfig) -> ExperimentSummary {
    let mut s = ExperimentSummary {
        rows: rows.len(),
        t: cfg.t,
        epsilon: cfg.eps,
        biclaw_free: 0,
        detector_timeouts: 0,
        hamiltonian_ok: 0,
        via_pipeline: 0,
        via_oracle: 0,
        stage_failures: BTreeMap::new(),
        min_density_ratio: None,
        max_diameter: None,
        disconnected: 0,
        biclaw_free_diameter_at_most_5: 0,
        max_u_size: 0,
        max_s_max: 0,
    };
    for (r, route) in rows {
        let free = r.biclaw_free_t == "true";
        s.biclaw_free += free as usize;
        s.detector_timeouts += (r.biclaw_free_t == "timeout") as usize;
        s.hamiltonian_ok += r.hamiltonian_ok as usize;
        match route {
            Some(true) => s.via_pipeline += 1,
            Some(false) => s.via_oracle += 1,
            None => {}
        }
        if !r.stage_failed.is_empty() {
            *s.stage_failures.entry(r.stage_failed.clone()).or_insert(0) += 1;
        }
        s.min_density_ratio = Some(s.min_density_ratio.map_or(r.density_ratio, |m: f64| m.min(r.density_ratio)));
        match r.diameter.parse::<usize>() {
            Ok(d) => {
                s.max_diameter = Some(s.max_diameter.map_or(d, |m| m.max(d)));
                if free && d <= 5 {
                    s.biclaw_free_diameter_at_most_5 += 1;
                }
            }
            Err(_) => s.disconnected += 1,
        }
        s.max_u_size = s.max_u_size.max(r.u_size_eps);
        s.max_s_max = s.max_s_max.max(r.s_max_eps);
    }
    s
}

/// Expands the spec sources of `args` into a list, in order: `--spec`
/// values, then corpus file lines, then the family grid (sizes outer,
/// seeds inner).
pub fn collect_specs(args: &ExperimentArgs) -> Result<Vec<GenSpec>, Failure> {
    let mut texts: Vec<String> = args.specs.clone();
    if let Some(path) = &args.corpus {
        let body = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        texts.extend(
            body.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(str::to_string),
        );
    }
    if let Some(family) = &args.family {
        if args.sizes.is_empty() {
            return Err(Failure::usage("--family needs --sizes"));
        }
        for &n in &args.sizes {
            for seed in 0..args.seeds {
                let mut params = vec![format!("n={n}")];
                params.extend(args.params.iter().cloned());
                params.push(format!("seed={seed}"));
                texts.push(format!("{family}:{}", params.join(",")));
            }
        }
    }
    if texts.is_empty() {
        return Err(Failure::usage("experiment needs --spec, --corpus or --family"));
    }
    texts
        .iter()
        .map(|t| t.parse::<GenSpec>().map_err(|e| Failure::usage(format!("{t}: {e}"))))
        .collect()
}

pub fn rows_to_csv(rows: &[(ExperimentRow, Option<bool>)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (r, _) in rows {
        w.serialize(r).expect("rows serialize to memory");
    }
    if rows.is_empty() {
        w.write_record([
            "spec", "nx", "ny", "m", "min_deg", "diameter", "density_ratio", "u_size_eps", "s_max_eps",
            "biclaw_free_t", "hamiltonian_ok", "stage_failed", "elapsed_ms",
        ])
        .expect("header writes to memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub(super) fn cmd_experiment(args: &ExperimentArgs, stderr: &mut dyn Write) -> Result<String, Failure> {
    if !(args.eps > 0.0 && args.eps < 1.0) {
        return Err(Failure::usage(format!("epsilon {} outside (0, 1)", args.eps)));
    }
    if args.t == 0 {
        return Err(Failure::usage("t must be at least 1"));
    }
    let specs = collect_specs(args)?;
    let cfg = RowConfig::from(args);
    let rows = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::usage(e.to_string()))?
            .install(|| experiment_rows(&specs, &cfg)),
        None => experiment_rows(&specs, &cfg),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;

    let summary = summarize(&rows, &cfg);
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_text.push('\n');
    match &args.summary {
        Some(path) => fs::write(path, &summary_text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => {
            let _ = stderr.write_all(summary_text.as_bytes());
        }
    }

    let csv_text = rows_to_csv(&rows);
    match &args.out {
        Some(path) => {
            fs::write(path, csv_text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(csv_text),
    }
}
