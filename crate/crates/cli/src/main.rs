//! `cubic-sudoku` command-line tool.
//!
//! Exit codes: 0 success, 1 negative verification or failed completion,
//! 2 invalid input or file errors. Every subcommand prints one JSON line.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cubic_sudoku::chain::{
    build_q, c_cond_estimate, default_q_grid, hitting_stats, minorization_alpha, mixing_time,
    stationary, structure_check, ChainParams,
};
use cubic_sudoku::colouring::full_pipeline_on_graph;
use cubic_sudoku::experiments::{
    bad_density_bins, conjecture_probe, envelope_check, run_trials, sweep, write_sweep_csv,
    EnvelopeSpec,
};
use cubic_sudoku::io::{self, PipelineSummary};
use cubic_sudoku::plot::{line_chart, Series};
use cubic_sudoku::verify::{self, AdjGraph, VerificationStatus};
use cubic_sudoku::{full_pipeline, generate_graph, is_simple, PipelineConfig};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cubic-sudoku", version, about = "Sudoku sets for random cubic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a cycle-plus-matching graph and write it as cubic-v1 JSON.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run burn-in, the run algorithm and completion.
    Pipeline {
        #[command(flatten)]
        phases: PhaseArgs,
        /// Replay this cubic-v1 graph instead of sampling one.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Full run artifact (summary, matching, colours, set).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Write the colouring as colouring-v1.
        #[arg(long)]
        colouring: Option<PathBuf>,
        /// Write the Sudoku set as set-v1.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Check a colouring and a candidate Sudoku set.
    Verify {
        /// cubic-v1, adj-v1 or a pipeline artifact.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colouring: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 3)]
        colours: u8,
    },
    /// Exact minimum Sudoku set of a small graph.
    MinSudoku {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        colours: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagnostics of the 18-state type chain.
    Chain {
        #[arg(long, default_value_t = 1.0 / 6.0)]
        q1: f64,
        #[arg(long, default_value_t = 1.0 / 6.0)]
        q2: f64,
        #[arg(long, default_value_t = 1.0 / 6.0)]
        q3: f64,
        #[arg(long, default_value_t = 6)]
        power: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pipeline statistics over several sizes, as CSV.
    Sweep {
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads, 0 = all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trajectory concentration runs.
    Trajectory {
        #[command(flatten)]
        phases: PhaseArgs,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// CSV of the first trial; an SVG lands beside it.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Per-trial envelope report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heuristic search for small Sudoku sets on one graph.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Burn-in length, default max(⌈n^{2/3}⌉, 7).
    #[arg(long)]
    i0: Option<usize>,
    /// Tail length, default min(⌈20√n⌉, ⌊n/3⌋).
    #[arg(long)]
    tail: Option<usize>,
    /// Trajectory stride, default max(⌊n/1000⌋, 1).
    #[arg(long)]
    sample_every: Option<usize>,
}

impl PhaseArgs {
    fn config(&self, n: usize) -> PipelineConfig {
        let mut c = PipelineConfig::new(n, self.seed);
        if let Some(i0) = self.i0 {
            c.i0 = i0;
        }
        if let Some(t) = self.tail {
            c.tail = t;
        }
        if let Some(s) = self.sample_every {
            c.sample_every = s;
        }
        c
    }
}

/// Success with a flag for "negative" results (exit 1).
struct Done {
    summary: serde_json::Value,
    negative: bool,
}

fn ok(summary: serde_json::Value) -> Result<Done> {
    Ok(Done {
        summary,
        negative: false,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn svg_beside(path: &Path) -> PathBuf {
    path.with_extension("svg")
}

/// Graph from cubic-v1, adj-v1 or a pipeline artifact.
fn load_graph(path: &Path) -> Result<AdjGraph> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).context("graph file is not JSON")?;
    if value.get("version").and_then(|v| v.as_str()) == Some("pipeline-v1") {
        let n = value["summary"]["n"].as_u64().context("artifact without n")? as usize;
        let graph = json!({"version": io::GRAPH_VERSION, "n": n, "matching": value["matching"]});
        return Ok(io::graph_from_json(&graph.to_string())?.to_adjacency());
    }
    Ok(io::any_graph_from_json(&text)?)
}

fn run(cli: Cli) -> Result<Done> {
    match cli.command {
        Command::Gen { n, seed, out } => {
            let g = generate_graph(n, seed)?;
            write(&out, &io::graph_to_json(&g))?;
            ok(json!({"command": "gen", "n": n, "seed": seed, "simple": is_simple(&g), "out": out}))
        }
        Command::Pipeline {
            phases,
            graph,
            out,
            trajectory,
            colouring,
            set,
        } => {
            let result = match graph {
                Some(path) => {
                    let g = io::graph_from_json(&read(&path)?)?;
                    if phases.n.is_some_and(|n| n != g.n()) {
                        bail!("--n disagrees with the graph file");
                    }
                    let config = phases.config(g.n());
                    full_pipeline_on_graph(g, &config)?
                }
                None => {
                    let n = phases.n.context("--n is required without --graph")?;
                    full_pipeline(&phases.config(n))?
                }
            };
            if let Some(p) = &out {
                write(p, &io::pipeline_to_json(&result))?;
            }
            if let Some(p) = &trajectory {
                let mut buf = Vec::new();
                io::write_trajectory_csv(&result.trajectory, &mut buf)?;
                fs::write(p, buf).with_context(|| format!("writing {}", p.display()))?;
            }
            if let Some(p) = &colouring {
                write(p, &io::colouring_to_json(result.colouring.as_slice()))?;
            }
            if let Some(p) = &set {
                write(p, &io::set_to_json(&result.sudoku_set))?;
            }
            let summary = PipelineSummary::of(&result);
            Ok(Done {
                negative: !summary.completed,
                summary: json!({"command": "pipeline", "result": summary}),
            })
        }
        Command::Verify {
            graph,
            colouring,
            set,
            colours,
        } => {
            let g = load_graph(&graph)?;
            let col = io::colouring_from_json(&read(&colouring)?)?;
            let members = io::set_from_json(&read(&set)?)?;
            let mask = io::set_mask(g.n(), &members)?;
            let proper = verify::check_proper(&g, &col, colours)?;
            let result = verify::is_sudoku_set(&g, &col, &mask, colours, verify::COUNT_GUARD)?;
            let strong = verify::strong_order(&g, &col, &mask, colours).is_some();
            let negative = !(proper && result.status.is_unique());
            let status = match result.status {
                VerificationStatus::NotUnique(c) => format!("NotUnique({c})"),
                s => format!("{s:?}"),
            };
            Ok(Done {
                negative,
                summary: json!({
                    "command": "verify",
                    "proper": proper,
                    "status": status,
                    "set_size": members.len(),
                    "strong": strong,
                    "decycling": verify::is_decycling(&g, &mask),
                }),
            })
        }
        Command::MinSudoku { graph, colours, out } => {
            let g = load_graph(&graph)?;
            let (size, set, col) = verify::min_sudoku_exact(&g, colours, verify::MIN_SUDOKU_GUARD)?;
            let ids: Vec<usize> = set.iter().map(|v| v + 1).collect();
            if let Some(p) = &out {
                write(p, &io::set_to_json(&ids))?;
            }
            ok(json!({"command": "min-sudoku", "n": g.n(), "colours": colours, "size": size, "set": ids, "colouring": col}))
        }
        Command::Chain {
            q1,
            q2,
            q3,
            power,
            eps,
            out,
        } => {
            let params = ChainParams::new(q1, q2, q3)?;
            let m = build_q(&params);
            let (irreducible, aperiodic) = structure_check(&m);
            let pi = stationary(&m, 1e-10)?;
            let t_mix = mixing_time(&m, eps, 1_000_000)?;
            let (alpha, _) = minorization_alpha(&m, power);
            let kappa = hitting_stats(&m, &pi)?.kappa;
            let c_cond = c_cond_estimate(&default_q_grid());
            let report = json!({
                "params": params,
                "pi": pi.to_vec(),
                "t_mix": t_mix,
                "alpha": alpha,
                "kappa": kappa,
                "c_cond": c_cond,
                "irreducible": irreducible,
                "aperiodic": aperiodic,
            });
            if let Some(p) = &out {
                write(p, &report.to_string())?;
            }
            ok(report)
        }
        Command::Sweep {
            ns,
            trials,
            seed,
            jobs,
            out,
        } => {
            if ns.is_empty() || trials == 0 {
                bail!("sweep needs at least one n and one trial");
            }
            let rows = sweep(&ns, trials, seed, jobs)?;
            if let Some(p) = &out {
                let file = fs::File::create(p).with_context(|| format!("writing {}", p.display()))?;
                write_sweep_csv(&rows, file)?;
            }
            ok(json!({"command": "sweep", "rows": rows}))
        }
        Command::Trajectory {
            phases,
            trials,
            jobs,
            trajectory,
            out,
        } => trajectory_command(&phases, trials, jobs, trajectory, out),
        Command::Probe {
            n,
            seed,
            trials,
            budget,
            out,
        } => {
            let report = conjecture_probe(n, trials, budget, seed)?;
            if let Some(p) = &out {
                write(p, &serde_json::to_string(&report)?)?;
            }
            ok(json!({
                "command": "probe",
                "n": n,
                "lb_regular": report.lb_regular,
                "best_size": report.best_size,
                "best_fraction": report.best_fraction,
                "checks": report.checks,
                "budget_exhausted": report.budget_exhausted,
            }))
        }
    }
}

fn trajectory_command(
    phases: &PhaseArgs,
    trials: usize,
    jobs: usize,
    trajectory: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<Done> {
    let n = phases.n.context("--n is required")?;
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let base = phases.config(n);
    base.validate()?;
    let want_bins = trials >= 10;
    let results = run_trials(trials, phases.seed, jobs, |_, seed| {
        let config = PipelineConfig {
            seed,
            record_trace: want_bins,
            ..base
        };
        full_pipeline(&config)
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let c_cond = c_cond_estimate(&default_q_grid());
    let spec = EnvelopeSpec { n, c_cond, tol: 0.01 };
    let reports: Vec<_> = results.iter().map(|r| envelope_check(&r.trajectory, &spec)).collect();

    if let Some(p) = &trajectory {
        let first = &results[0].trajectory;
        let mut buf = Vec::new();
        io::write_trajectory_csv(first, &mut buf)?;
        fs::write(p, buf).with_context(|| format!("writing {}", p.display()))?;
        let emp: Vec<(f64, f64)> = first
            .samples
            .iter()
            .map(|s| (s.step as f64 / n as f64, s.x as f64 / n as f64))
            .collect();
        let model: Vec<(f64, f64)> = emp.iter().map(|&(t, _)| (t, EnvelopeSpec::x(t))).collect();
        let svg = line_chart(
            &format!("X(i)/n against t(1-t), n = {n}"),
            &[
                Series { label: "X/n", colour: "steelblue", points: &emp },
                Series { label: "t(1-t)", colour: "firebrick", points: &model },
            ],
        );
        write(&svg_beside(p), &svg)?;
        if want_bins {
            let traces: Vec<&[_]> = results.iter().map(|r| r.trace.as_deref().unwrap_or(&[])).collect();
            let bins = bad_density_bins(&traces, n, base.i0, base.i1(), 50)?;
            let stem = p.with_extension("");
            let csv_path = PathBuf::from(format!("{}_density.csv", stem.display()));
            let mut w = String::from("t_lo,t_hi,vertices,bad,fraction,target\n");
            for b in &bins {
                w.push_str(&format!("{},{},{},{},{},{}\n", b.t_lo, b.t_hi, b.vertices, b.bad, b.fraction, b.target));
            }
            write(&csv_path, &w)?;
            let emp: Vec<(f64, f64)> = bins.iter().map(|b| ((b.t_lo + b.t_hi) / 2.0, b.fraction)).collect();
            let target: Vec<(f64, f64)> = bins.iter().map(|b| ((b.t_lo + b.t_hi) / 2.0, b.target)).collect();
            let svg = line_chart(
                "bad-vertex density against 1 - 2t/3",
                &[
                    Series { label: "empirical", colour: "steelblue", points: &emp },
                    Series { label: "1-2t/3", colour: "firebrick", points: &target },
                ],
            );
            write(&svg_beside(&csv_path), &svg)?;
        }
    }

    let max_x = reports.iter().map(|r| r.max_dev_x).fold(0.0, f64::max);
    let max_bal = reports.iter().map(|r| r.max_dev_balance).fold(0.0, f64::max);
    let summary = json!({
        "command": "trajectory",
        "n": n,
        "trials": trials,
        "max_dev_x": max_x,
        "max_dev_balance": max_bal,
        "formal_envelope_holds": reports.iter().all(|r| r.formal_envelope_holds),
        "vacuous": reports.iter().any(|r| r.vacuous),
        "c_cond": c_cond,
    });
    if let Some(p) = &out {
        let full = json!({"summary": summary, "runs": reports});
        write(p, &full.to_string())?;
    }
    ok(summary)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(done) => {
            println!("{}", done.summary);
            ExitCode::from(u8::from(done.negative))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
