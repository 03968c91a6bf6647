//! `obstruct`: build, export and solve obstruction systems, and run the
//! geometric oracle suites.
//!
//! Exit codes: 0 feasible / all checks pass, 1 infeasible / violations found,
//! 2 usage or data error, 3 timeout.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use obstruct_core::builtins::{builtin, builtin_names};
use obstruct_core::geometry::{run_suite, Suite};
use obstruct_core::ilp::{export_lp, solve, Limits, Verdict};
use obstruct_core::model::ModelReport;
use obstruct_core::system::{build, Preset, SystemConfig};
use obstruct_core::{cells, complex_from_file, SimplicialComplex};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "obstruct", version, about = "Integer obstruction systems for simplicial embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the JSON report to stdout instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// f-vector and deleted-product cell counts.
    Info {
        #[command(flatten)]
        input: Input,
    },
    /// Build a system and write it in LP format.
    Generate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_name = "FILE.lp")]
        out: PathBuf,
    },
    /// Build a system and decide integer feasibility.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        system: SystemArgs,
        /// Seconds before giving up.
        #[arg(long, env = "OBSTRUCT_TIME_LIMIT", value_name = "S")]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Rounds of Gomory cuts on the root LP; 0 skips the LP.
        #[arg(long, default_value_t = Limits::default().cut_rounds)]
        cut_rounds: usize,
        /// Write the feasible assignment here as JSON.
        #[arg(long, value_name = "FILE")]
        solution: Option<PathBuf>,
    },
    /// Random property suites for the geometric oracle.
    Oracle {
        /// Largest vertex index; maps are on 0..=N.
        #[arg(long, value_name = "N")]
        vertices: usize,
        #[arg(long, value_name = "M")]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        suite: Suite,
    },
}

#[derive(Args)]
struct Input {
    /// Complex in the JSON facet format.
    #[arg(long, value_name = "FILE", conflicts_with = "builtin", required_unless_present = "builtin")]
    complex: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    /// Target dimension m.
    #[arg(long, value_name = "M")]
    dim: Option<usize>,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long = "system", value_name = "PRESET", default_value = "minimal")]
    preset: Preset,
    /// Emit the swap equalities as rows instead of identifying variables.
    #[arg(long)]
    no_symmetry_reduction: bool,
}

#[derive(Serialize, Default)]
struct RunReport {
    command: &'static str,
    instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_vector: Option<Vec<usize>>,
    /// Deleted-product cells by dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ModelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<obstruct_core::geometry::OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    wall_ms: u128,
}

fn load(input: &Input) -> anyhow::Result<SimplicialComplex> {
    match (&input.complex, &input.builtin) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            Ok(complex_from_file(file)?)
        }
        (None, Some(name)) => builtin(name).with_context(|| {
            format!("known builtins: {}", builtin_names().collect::<Vec<_>>().join(", "))
        }),
        (None, None) => bail!("one of --complex or --builtin is required"),
    }
}

fn dim_of(input: &Input, k: &SimplicialComplex) -> usize {
    input.dim.unwrap_or(k.dim() + 1)
}

fn config(args: &SystemArgs) -> SystemConfig {
    let mut cfg = SystemConfig::new(args.preset);
    cfg.symmetry_reduction = !args.no_symmetry_reduction;
    cfg
}

fn run(cli: &Cli) -> anyhow::Result<(u8, RunReport, String)> {
    let start = Instant::now();
    let mut text = String::new();
    let (code, mut report) = match &cli.command {
        Command::Info { input } => {
            let k = load(input)?;
            let top = 2 * k.dim() + 1;
            let counts: Vec<usize> = (0..top).map(|d| cells(&k, d).len()).collect();
            let fv = k.f_vector();
            text.push_str(&format!("{}: f-vector {fv}\n", k.name()));
            for (d, n) in counts.iter().enumerate() {
                text.push_str(&format!("dim-{d} cells: {n}\n"));
            }
            let report = RunReport {
                command: "info",
                instance: k.name().to_string(),
                m: input.dim,
                f_vector: Some(fv.0),
                cells: Some(counts),
                ..Default::default()
            };
            (EXIT_OK, report)
        }
        Command::Generate { input, system, out } => {
            let k = load(input)?;
            let m = dim_of(input, &k);
            let model = build(&k, m, config(system))?;
            fs::write(out, export_lp(&model)).with_context(|| format!("writing {}", out.display()))?;
            let summary = model.report();
            text.push_str(&format!(
                "{} m={m} {}: {} variables, {} rows -> {}\n",
                k.name(),
                system.preset,
                summary.variables,
                summary.rows,
                out.display()
            ));
            let report = RunReport {
                command: "generate",
                instance: k.name().to_string(),
                preset: Some(system.preset.to_string()),
                m: Some(m),
                model: Some(summary),
                ..Default::default()
            };
            (EXIT_OK, report)
        }
        Command::Check { input, system, time_limit, workers, cut_rounds, solution } => {
            let k = load(input)?;
            let m = dim_of(input, &k);
            let time = match time_limit {
                Some(s) if !s.is_finite() || *s < 0.0 => bail!("--time-limit must be a nonnegative number"),
                Some(s) => Some(Duration::from_secs_f64(*s)),
                None => None,
            };
            let model = build(&k, m, config(system))?;
            let limits = Limits { time, workers: *workers, cut_rounds: *cut_rounds, ..Default::default() };
            let sol = solve(&model, limits)?;
            let code = match &sol.verdict {
                Verdict::Feasible(a) => {
                    if let Some(path) = solution {
                        write_json(path, a)?;
                    }
                    EXIT_OK
                }
                Verdict::Infeasible => EXIT_NEGATIVE,
                Verdict::Timeout(_) => EXIT_TIMEOUT,
            };
            text.push_str(&format!(
                "{} m={m} {}: {} ({} nodes)\n",
                k.name(),
                system.preset,
                sol.verdict.label(),
                sol.stats.nodes
            ));
            let report = RunReport {
                command: "check",
                instance: k.name().to_string(),
                preset: Some(system.preset.to_string()),
                m: Some(m),
                model: Some(model.report()),
                verdict: Some(sol.verdict.label()),
                nodes: Some(sol.stats.nodes),
                ..Default::default()
            };
            (code, report)
        }
        Command::Oracle { vertices, dim, trials, seed, suite } => {
            let rep = run_suite(*suite, *vertices, *dim, *trials, *seed)?;
            text.push_str(&format!(
                "{suite} N={vertices} m={dim}: {} trials, {} checks, {} violations\n",
                rep.trials,
                rep.checks,
                rep.violations.len()
            ));
            for v in rep.violations.iter().take(20) {
                text.push_str(&format!("  {v}\n"));
            }
            let code = if rep.passed() { EXIT_OK } else { EXIT_NEGATIVE };
            let report = RunReport {
                command: "oracle",
                instance: format!("simplex-{vertices}"),
                m: Some(*dim),
                seed: Some(*seed),
                oracle: Some(rep),
                ..Default::default()
            };
            (code, report)
        }
    };
    report.wall_ms = start.elapsed().as_millis();
    Ok((code, report, text))
}

fn write_json<T: Serialize>(path: &PathBuf, value: &T) -> anyhow::Result<()> {
    let body = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_env("OBSTRUCT_LOG"))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(code, report, text)| {
        if let Some(path) = &cli.report {
            write_json(path, &report)?;
        }
        let body = if cli.json { serde_json::to_string_pretty(&report)? + "\n" } else { text };
        let mut stdout = std::io::stdout().lock();
        match stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(code),
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
