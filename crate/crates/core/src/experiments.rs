//! Monte Carlo harness.
//!
//! Every driver takes a master seed; trial `t` runs on
//! [`trial_seed`]`(master, t)` and results come back in trial order, so
//! output does not depend on the thread count.

use crate::chain::{segment_comparison, ChainError, ChainParams, SegmentComparison};
use crate::colouring::{
    balanced_greedy_burn_in, full_pipeline, start_run, PipelineConfig, PipelineError, StepRecord,
    SudokuRun,
};
use crate::graph::{GraphError, MatchingProcess, RevealOutcome};
use crate::io::PipelineSummary;
use crate::rng::{trial_seed, DeterministicRandomSource, AUX_STREAM, MATCHING_STREAM};
use crate::stats::{mean, min_max};
use crate::types::{TrajectoryRecord, VertexId, N_TYPES};
use crate::verify::{self, AdjGraph, VerifyError};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("window ({lo}, {hi}] not covered by the trace")]
    Window { lo: usize, hi: usize },
    #[error("need at least {need} records, got {got}")]
    TooFewRecords { need: usize, got: usize },
    #[error("{0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Runs `f(t, trial_seed(master, t))` for `t < trials` on `jobs` threads
/// (0 = all cores).
pub fn run_trials<T, F>(trials: usize, master: u64, jobs: usize, f: F) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(usize, u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| f(t, trial_seed(master, t as u64)))
            .collect()
    }))
}

// ---------------------------------------------------------------------------
// trajectories

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRun {
    pub record: TrajectoryRecord,
    pub summary: Option<PipelineSummary>,
    /// Pipeline failure, if any; the run is reported rather than raised.
    pub error: Option<String>,
}

pub fn trajectory_run(config: &PipelineConfig) -> TrajectoryRun {
    match full_pipeline(config) {
        Ok(r) => TrajectoryRun {
            summary: Some(PipelineSummary::of(&r)),
            record: r.trajectory,
            error: None,
        },
        Err(e) => TrajectoryRun {
            record: TrajectoryRecord {
                n: config.n,
                samples: Vec::new(),
            },
            summary: None,
            error: Some(e.to_string()),
        },
    }
}

/// `x(t) = t(1 − t)` with the error function
/// `ε(t) = ln³n / (n^{1/3} (1 − t)^C)`, `C = 54·c_cond + 2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeSpec {
    pub n: usize,
    pub c_cond: f64,
    /// Absolute tolerance on the scaled deviations used as the gate.
    pub tol: f64,
}

impl EnvelopeSpec {
    pub fn x(t: f64) -> f64 {
        t * (1.0 - t)
    }

    pub fn exponent(&self) -> f64 {
        54.0 * self.c_cond + 2.0
    }

    pub fn eps(&self, t: f64) -> f64 {
        let n = self.n as f64;
        n.ln().powi(3) / (n.cbrt() * (1.0 - t).powf(self.exponent()))
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct EnvelopeReport {
    /// `max |X(i)/n − x(i/n)|`.
    pub max_dev_x: f64,
    /// `max_k |X_k(i) − X(i)/3| / n`.
    pub max_dev_balance: f64,
    /// `|X_k − n·x/3| ≤ n·ε/3` at every sample.
    pub formal_envelope_holds: bool,
    /// `ε(t) ≥ x(t)` somewhere, so the formal envelope says nothing.
    pub vacuous: bool,
    pub within_tol: bool,
}

pub fn envelope_check(record: &TrajectoryRecord, spec: &EnvelopeSpec) -> EnvelopeReport {
    let n = record.n as f64;
    let mut max_dev_x = 0.0f64;
    let mut max_dev_balance = 0.0f64;
    let mut holds = true;
    let mut vacuous = false;
    for s in &record.samples {
        let t = s.step as f64 / n;
        let x = EnvelopeSpec::x(t);
        let eps = spec.eps(t);
        max_dev_x = max_dev_x.max((s.x as f64 / n - x).abs());
        for xk in [s.x1, s.x2, s.x3] {
            max_dev_balance = max_dev_balance.max((xk as f64 - s.x as f64 / 3.0).abs() / n);
            if (xk as f64 - n * x / 3.0).abs() > n * eps / 3.0 {
                holds = false;
            }
        }
        vacuous |= eps >= x;
    }
    EnvelopeReport {
        max_dev_x,
        max_dev_balance,
        formal_envelope_holds: holds,
        vacuous,
        within_tol: max_dev_x <= spec.tol && max_dev_balance <= spec.tol,
    }
}

// ---------------------------------------------------------------------------
// burn-in

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BurnInSample {
    pub seed: u64,
    pub i0: usize,
    pub discrepancy: usize,
    pub x_at_i0: usize,
    /// `|X(i0) − n·x(i0/n)| / n`.
    pub deviation: f64,
}

pub fn burn_in_samples(
    n: usize,
    trials: usize,
    master: u64,
    jobs: usize,
) -> Result<Vec<BurnInSample>, ExperimentError> {
    let i0 = PipelineConfig::default_i0(n);
    run_trials(trials, master, jobs, |_, seed| -> Result<BurnInSample, ExperimentError> {
        let mut p = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM))?;
        let burn = balanced_greedy_burn_in(&mut p, i0)?;
        let x = p.x_total();
        let t = i0 as f64 / n as f64;
        Ok(BurnInSample {
            seed,
            i0,
            discrepancy: burn.discrepancy,
            x_at_i0: x,
            deviation: (x as f64 / n as f64 - EnvelopeSpec::x(t)).abs(),
        })
    })?
    .into_iter()
    .collect()
}

// ---------------------------------------------------------------------------
// segment hit and birth counts

/// `H_k` and `B_k` over the window `(i, i + ω]` of one trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentCounts {
    pub i: usize,
    pub omega: usize,
    /// Unsaturated colour-`k` vertices of `[i]` matched inside the window.
    pub hits: [usize; 3],
    /// Colour-`k` window vertices still unsaturated at `i + ω`.
    pub births: [usize; 3],
    pub start_xk: [usize; 3],
    pub end_xk: [usize; 3],
}

impl SegmentCounts {
    /// `X_k(i+ω) − X_k(i) = B_k − H_k` for every colour.
    pub fn conserved(&self) -> bool {
        (0..3).all(|k| self.end_xk[k] + self.hits[k] == self.start_xk[k] + self.births[k])
    }
}

/// Counts from a trace whose records include vertices `i+1..=i+ω`.
/// `start_xk` is `X_k(i)`.
pub fn segment_counts(
    trace: &[StepRecord],
    start_xk: [usize; 3],
    i: usize,
    omega: usize,
) -> Result<SegmentCounts, ExperimentError> {
    let window = || ExperimentError::Window { lo: i, hi: i + omega };
    let first = trace.first().ok_or_else(window)?.vertex as usize;
    if omega == 0 || first > i + 1 || (trace.last().unwrap().vertex as usize) < i + omega {
        return Err(window());
    }
    let recs = &trace[i + 1 - first..i + omega + 1 - first];
    let mut hits = [0usize; 3];
    let mut births = [0usize; 3];
    let mut hit_in_window = vec![false; omega];
    for r in recs {
        let p = r.partner as usize;
        if p == 0 {
            continue;
        }
        if p <= i {
            hits[r.partner_colour as usize - 1] += 1;
        } else {
            hit_in_window[p - i - 1] = true;
        }
    }
    for (offset, r) in recs.iter().enumerate() {
        if r.partner == 0 && !hit_in_window[offset] {
            births[r.colour as usize - 1] += 1;
        }
    }
    let last = recs.last().unwrap();
    Ok(SegmentCounts {
        i,
        omega,
        hits,
        births,
        start_xk,
        end_xk: last.xk.map(|x| x as usize),
    })
}

/// Advances `run` to `i`, then records the window `(i, i + ω]`.
pub fn window_counts(run: &mut SudokuRun, i: usize, omega: usize) -> Result<SegmentCounts, ExperimentError> {
    run.run_to(i)?;
    if run.current() != i {
        return Err(ExperimentError::Window { lo: i, hi: i + omega });
    }
    let start = run.state().xk();
    run.set_trace(true);
    run.run_to(i + omega)?;
    let counts = segment_counts(run.trace().unwrap_or(&[]), start, i, omega);
    run.set_trace(false);
    counts
}

#[derive(Clone, Debug, Serialize)]
pub struct SegmentStats {
    pub t: f64,
    pub i: usize,
    pub omega: usize,
    pub replicas: usize,
    pub hit_rate: [f64; 3],
    pub birth_rate: [f64; 3],
    pub conserved_everywhere: bool,
}

/// Averages `H_k/ω` and `B_k/ω` over independent runs, one window per run
/// at each `i = ⌊t·n⌋`.
pub fn segment_stats(
    n: usize,
    ts: &[f64],
    omega: usize,
    replicas: usize,
    master: u64,
    jobs: usize,
) -> Result<Vec<SegmentStats>, ExperimentError> {
    let config = PipelineConfig::new(n, 0);
    let points: Vec<usize> = ts.iter().map(|&t| (t * n as f64) as usize).collect();
    for &i in &points {
        if i < config.i0 || i + omega > config.i1() {
            return Err(ExperimentError::Window { lo: i, hi: i + omega });
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&j| points[j]);
    let per_run = run_trials(replicas, master, jobs, |_, seed| -> Result<Vec<SegmentCounts>, ExperimentError> {
        let cfg = PipelineConfig { seed, ..config };
        let process = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM))?;
        let (mut run, _) = start_run(process, &cfg)?;
        let mut out = vec![None; points.len()];
        for &j in &order {
            out[j] = Some(window_counts(&mut run, points[j], omega)?);
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    Ok(ts
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mut hit = [0.0; 3];
            let mut birth = [0.0; 3];
            for run in &per_run {
                for k in 0..3 {
                    hit[k] += run[j].hits[k] as f64;
                    birth[k] += run[j].births[k] as f64;
                }
            }
            let denom = (replicas * omega) as f64;
            SegmentStats {
                t,
                i: points[j],
                omega,
                replicas,
                hit_rate: hit.map(|h| h / denom),
                birth_rate: birth.map(|b| b / denom),
                conserved_everywhere: per_run.iter().all(|r| r[j].conserved()),
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// bad-vertex density

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DensityBin {
    pub t_lo: f64,
    pub t_hi: f64,
    pub vertices: usize,
    pub bad: usize,
    pub fraction: f64,
    /// `1 − 2t/3` at the bin midpoint.
    pub target: f64,
}

/// Fraction of conventionally bad vertices per equal-width time bin over
/// `(i0, i1]`, pooled across traces.
pub fn bad_density_bins(
    traces: &[&[StepRecord]],
    n: usize,
    i0: usize,
    i1: usize,
    bins: usize,
) -> Result<Vec<DensityBin>, ExperimentError> {
    if traces.len() < 10 {
        return Err(ExperimentError::TooFewRecords { need: 10, got: traces.len() });
    }
    if bins == 0 || i1 <= i0 || i1 - i0 < bins {
        return Err(ExperimentError::Config(format!("{bins} bins over ({i0}, {i1}]")));
    }
    let span = i1 - i0;
    let mut vertices = vec![0usize; bins];
    let mut bad = vec![0usize; bins];
    for trace in traces {
        for r in trace.iter() {
            let v = r.vertex as usize;
            if v <= i0 || v > i1 {
                continue;
            }
            let b = (v - i0 - 1) * bins / span;
            vertices[b] += 1;
            bad[b] += usize::from(r.label.is_conventionally_bad());
        }
    }
    Ok((0..bins)
        .map(|b| {
            let lo = i0 + b * span / bins;
            let hi = i0 + (b + 1) * span / bins;
            let (t_lo, t_hi) = (lo as f64 / n as f64, hi as f64 / n as f64);
            DensityBin {
                t_lo,
                t_hi,
                vertices: vertices[b],
                bad: bad[b],
                fraction: bad[b] as f64 / vertices[b].max(1) as f64,
                target: 1.0 - (t_lo + t_hi) / 3.0,
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// even-cycle intervals

pub fn block_len(n: usize) -> usize {
    (n as f64).sqrt() as usize
}

/// `⌊√n / ln ln n⌋`, at least 1.
pub fn blocks_per_trial(n: usize) -> usize {
    let nf = n as f64;
    ((nf.sqrt() / nf.ln().ln()) as usize).max(1)
}

/// A block succeeds when exactly one matching edge lies inside it and its
/// endpoints are an odd cycle distance of at least 3 apart.
pub fn block_succeeds(internal: &[(VertexId, VertexId)]) -> bool {
    match internal {
        [(a, b)] => {
            let d = a.abs_diff(*b);
            d % 2 == 1 && d >= 3
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvenCycleReport {
    pub n: usize,
    pub block_len: usize,
    pub blocks: usize,
    pub successes: usize,
    pub rate: f64,
}

/// Reveals the first `blocks_per_trial(n)` blocks of length `⌊√n⌋` in each
/// trial and counts successful blocks.
pub fn even_cycle_frequency(
    n: usize,
    trials: usize,
    master: u64,
    jobs: usize,
) -> Result<EvenCycleReport, ExperimentError> {
    if n < 10_000 {
        return Err(ExperimentError::Config(format!("need n >= 10000, got {n}")));
    }
    let len = block_len(n);
    let per_trial = blocks_per_trial(n).min(n / len);
    let per = run_trials(trials, master, jobs, |_, seed| -> Result<usize, ExperimentError> {
        let mut p = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM))?;
        let mut ok = 0;
        for b in 0..per_trial {
            let start = b * len + 1;
            let mut internal = Vec::new();
            for v in start..start + len {
                if let RevealOutcome::Backward(j) = p.reveal_step()? {
                    if j >= start {
                        internal.push((j, v));
                    }
                }
            }
            ok += usize::from(block_succeeds(&internal));
        }
        Ok(ok)
    })?;
    let successes = per.into_iter().sum::<Result<usize, _>>()?;
    let blocks = trials * per_trial;
    Ok(EvenCycleReport {
        n,
        block_len: len,
        blocks,
        successes,
        rate: successes as f64 / blocks.max(1) as f64,
    })
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub trials: usize,
    pub s_frac_mean: f64,
    pub s_frac_min: f64,
    pub s_frac_max: f64,
    pub half_bc_mean: f64,
    pub half_bc_min: f64,
    pub half_bc_max: f64,
    /// Mean of `|B_U^(c)| + |B_U^(d)|`.
    pub bu_mean: f64,
    /// Largest `|B_U^(c)| + 2|B_U^(d)|`.
    pub bu_weighted_max: usize,
    /// Share of runs with `|B_U^(c)| + 2|B_U^(d)| ≤ 20`.
    pub bu_small_rate: f64,
    pub completion_rate: f64,
    pub discrepancy_mean: f64,
    pub discrepancy_max: usize,
}

fn summarise(n: usize, runs: &[PipelineSummary]) -> SweepRow {
    let s: Vec<f64> = runs.iter().map(|r| r.s_fraction).collect();
    let h: Vec<f64> = runs.iter().map(|r| r.half_bc_fraction).collect();
    let weighted: Vec<usize> = runs.iter().map(|r| r.buc + 2 * r.bud).collect();
    let (s_min, s_max) = min_max(&s);
    let (h_min, h_max) = min_max(&h);
    let trials = runs.len();
    let frac = |k: usize| k as f64 / trials as f64;
    SweepRow {
        n,
        trials,
        s_frac_mean: mean(&s),
        s_frac_min: s_min,
        s_frac_max: s_max,
        half_bc_mean: mean(&h),
        half_bc_min: h_min,
        half_bc_max: h_max,
        bu_mean: runs.iter().map(|r| (r.buc + r.bud) as f64).sum::<f64>() / trials as f64,
        bu_weighted_max: weighted.iter().copied().max().unwrap_or(0),
        bu_small_rate: frac(weighted.iter().filter(|&&w| w <= 20).count()),
        completion_rate: frac(runs.iter().filter(|r| r.completed).count()),
        discrepancy_mean: runs.iter().map(|r| r.discrepancy as f64).sum::<f64>() / trials as f64,
        discrepancy_max: runs.iter().map(|r| r.discrepancy).max().unwrap_or(0),
    }
}

/// Independent pipeline runs per `n`; the per-`n` master seed is
/// `trial_seed(master, n)`.
pub fn sweep_runs(
    n: usize,
    trials: usize,
    master: u64,
    jobs: usize,
) -> Result<Vec<PipelineSummary>, ExperimentError> {
    run_trials(trials, trial_seed(master, n as u64), jobs, |_, seed| {
        full_pipeline(&PipelineConfig::new(n, seed)).map(|r| PipelineSummary::of(&r))
    })?
    .into_iter()
    .map(|r| r.map_err(ExperimentError::from))
    .collect()
}

pub fn sweep(ns: &[usize], trials: usize, master: u64, jobs: usize) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted
        .into_iter()
        .map(|n| Ok(summarise(n, &sweep_runs(n, trials, master, jobs)?)))
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// type-law coupling

#[derive(Clone, Debug, Serialize)]
pub struct CouplingRow {
    pub omega: usize,
    /// `ω² / (n − i)`.
    pub scale: f64,
    pub comparison: SegmentComparison,
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    pub n: usize,
    pub i: usize,
    pub start_type: usize,
    pub q: [f64; 3],
    pub rows: Vec<CouplingRow>,
}

/// Runs one pipeline to `i`, then continues `replicas` reseeded copies for
/// `max(omegas)` steps and compares the empirical law of `V_{i+j}` with
/// `δ_{V_i} Q^j`, `Q` built from `q_k = X_k(i)/(n − i)`.
pub fn coupling_experiment(
    n: usize,
    i: usize,
    omegas: &[usize],
    replicas: usize,
    master: u64,
    jobs: usize,
) -> Result<CouplingReport, ExperimentError> {
    let config = PipelineConfig::new(n, master);
    let omega_max = omegas.iter().copied().max().unwrap_or(0);
    if i <= config.i0 || i + omega_max > config.i1() {
        return Err(ExperimentError::Window { lo: i, hi: i + omega_max });
    }
    let process = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(master, MATCHING_STREAM))?;
    let (mut base, _) = start_run(process, &config)?;
    base.run_to(i)?;
    let start = base
        .state()
        .vertex_type(i)
        .ok_or(ExperimentError::Window { lo: i, hi: i })?;
    let xk = base.state().xk();
    let rest = (n - i) as f64;
    let params = ChainParams::new(xk[0] as f64 / rest, xk[1] as f64 / rest, xk[2] as f64 / rest)?;

    let base = &base;
    let sequences = run_trials(replicas, master ^ 0x5EED, jobs, |_, seed| -> Result<Vec<u8>, ExperimentError> {
        let mut run = base.clone();
        run.reseed(seed);
        let mut seq = Vec::with_capacity(omega_max);
        for j in 1..=omega_max {
            run.step()?;
            let t = run.state().vertex_type(i + j).ok_or(ExperimentError::Window { lo: i, hi: i + j })?;
            seq.push(t.index() as u8);
        }
        Ok(seq)
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut counts = vec![[0u64; N_TYPES]; omega_max + 1];
    counts[0][start.index()] = replicas as u64;
    for seq in &sequences {
        for (j, &t) in seq.iter().enumerate() {
            counts[j + 1][t as usize] += 1;
        }
    }
    let mut rows = Vec::new();
    for &omega in omegas {
        rows.push(CouplingRow {
            omega,
            scale: (omega * omega) as f64 / rest,
            comparison: segment_comparison(&params, start, &counts[..=omega])?,
        });
    }
    Ok(CouplingReport {
        n,
        i,
        start_type: start.index(),
        q: params.q,
        rows,
    })
}

// ---------------------------------------------------------------------------
// small-graph search for compact Sudoku sets

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub lb_regular: i64,
    pub best_size: Option<usize>,
    pub best_fraction: Option<f64>,
    /// 0-based vertex indices of the best verified set.
    pub witness_set: Vec<usize>,
    pub witness_colouring: Vec<u8>,
    pub checks: usize,
    pub budget_exhausted: bool,
}

/// Largest guard for exact verification inside the probe.
pub const PROBE_GUARD: usize = 200;
/// Recolouring moves tried per decycling set.
pub const LOCAL_STEPS: usize = 300;
/// Extension counts are capped here when ranking near misses.
const CLOSEST_CAP: u64 = 1 << 12;

/// Greedy decycling: strip vertices of degree ≤ 1 in `G − S`, then move a
/// vertex of largest remaining degree into `S` (random tie-break) until
/// nothing is left.
pub fn greedy_decycling(g: &AdjGraph, rng: &mut DeterministicRandomSource) -> Vec<bool> {
    let n = g.n();
    let mut in_s = vec![false; n];
    loop {
        let mut alive: Vec<bool> = in_s.iter().map(|&s| !s).collect();
        let mut deg: Vec<usize> = (0..n)
            .map(|v| g.neighbours(v).iter().filter(|&&w| alive[w]).count())
            .collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in g.neighbours(v) {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 {
                        stack.push(w);
                    }
                }
            }
        }
        let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        let Some(top) = core.iter().map(|&v| deg[v]).max() else {
            return in_s;
        };
        let best: Vec<usize> = core.into_iter().filter(|&v| deg[v] == top).collect();
        in_s[best[rng.index(best.len())]] = true;
    }
}

/// Proper 3-colouring by depth-first search with randomised colour order.
pub fn random_proper_colouring(g: &AdjGraph, rng: &mut DeterministicRandomSource) -> Option<Vec<u8>> {
    random_extension(g, &vec![0; g.n()], rng)
}

/// Random proper 3-colouring agreeing with the nonzero entries of `fixed`.
pub fn random_extension(g: &AdjGraph, fixed: &[u8], rng: &mut DeterministicRandomSource) -> Option<Vec<u8>> {
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|&v| fixed[v] == 0).collect();
    let mut col = fixed.to_vec();
    let mut choices: Vec<[u8; 3]> = vec![[0; 3]; free.len()];
    let mut next = vec![0usize; free.len()];
    let mut depth = 0usize;
    let mut spent = 0u64;
    let fresh = |rng: &mut DeterministicRandomSource| {
        let mut c = [1u8, 2, 3];
        for a in (1..3).rev() {
            c.swap(a, rng.index(a + 1));
        }
        c
    };
    if !verify::is_partial_proper(g, fixed) {
        return None;
    }
    if !free.is_empty() {
        choices[0] = fresh(rng);
    }
    while depth < free.len() {
        let v = free[depth];
        col[v] = 0;
        let mut placed = false;
        while next[depth] < 3 {
            let c = choices[depth][next[depth]];
            next[depth] += 1;
            if g.neighbours(v).iter().all(|&w| col[w] != c) {
                col[v] = c;
                placed = true;
                break;
            }
        }
        if placed {
            spent += 1;
            if spent > 1_000_000 {
                return None;
            }
            depth += 1;
            if depth < free.len() {
                next[depth] = 0;
                choices[depth] = fresh(rng);
            }
        } else {
            if depth == 0 {
                return None;
            }
            depth -= 1;
        }
    }
    Some(col)
}

/// Hill climbing over colourings of `S` (starting from a random proper
/// colouring restricted to `S`): recolour one vertex of `S` at a time and
/// keep the move when the extension count does not grow and stays positive.
/// Returns the best count and its partial colouring; `checks` is charged one
/// per count.
fn local_search(
    g: &AdjGraph,
    in_s: &[bool],
    rng: &mut DeterministicRandomSource,
    steps: usize,
    checks: &mut usize,
    budget: usize,
) -> Result<Option<(u64, Vec<u8>)>, ExperimentError> {
    let Some(col) = random_proper_colouring(g, rng) else {
        return Ok(None);
    };
    let members: Vec<usize> = (0..g.n()).filter(|&v| in_s[v]).collect();
    if members.is_empty() || *checks >= budget {
        return Ok(None);
    }
    let mut partial: Vec<u8> = col.iter().zip(in_s).map(|(&c, &m)| if m { c } else { 0 }).collect();
    *checks += 1;
    let mut count = verify::count_extensions(g, &partial, 3, Some(CLOSEST_CAP), PROBE_GUARD)?;
    for _ in 0..steps {
        if count == 1 || *checks >= budget {
            break;
        }
        let v = members[rng.index(members.len())];
        let old = partial[v];
        let c = other_colour(old, rng);
        if g.neighbours(v).iter().any(|&w| partial[w] == c) {
            continue;
        }
        partial[v] = c;
        *checks += 1;
        let k = verify::count_extensions(g, &partial, 3, Some(CLOSEST_CAP), PROBE_GUARD)?;
        if k >= 1 && k <= count {
            count = k;
        } else {
            partial[v] = old;
        }
    }
    Ok(Some((count, partial)))
}

fn other_colour(c: u8, rng: &mut DeterministicRandomSource) -> u8 {
    let others = crate::types::other_colours(c);
    others[rng.index(2)]
}

/// Heuristic search on `generate_graph(n, master)`: per trial a greedy
/// decycling set, a local search for a colouring of it with few
/// extensions, then single-vertex augmentation of that near miss. Only
/// verified sets are kept. `budget` caps the number of extension counts
/// and uniqueness checks.
pub fn conjecture_probe(
    n: usize,
    trials: usize,
    budget: usize,
    master: u64,
) -> Result<ProbeReport, ExperimentError> {
    if n > PROBE_GUARD {
        return Err(ExperimentError::Config(format!("probe needs n <= {PROBE_GUARD}, got {n}")));
    }
    let g = crate::graph::generate_graph(n, master)?.to_adjacency();
    let lb = verify::bounds_report(n as u64, g.edge_count() as u64, 3, 3, 0)?.lb_regular;
    let mut rng = DeterministicRandomSource::with_stream(master, AUX_STREAM);
    let mut best: Option<(Vec<bool>, Vec<u8>)> = None;
    let mut checks = 0usize;
    let size = |m: &[bool]| m.iter().filter(|&&b| b).count();

    'trials: for _ in 0..trials {
        if checks >= budget {
            break;
        }
        let in_s = greedy_decycling(&g, &mut rng);
        let s = size(&in_s);
        if best.as_ref().is_some_and(|(b, _)| size(b) <= s) {
            continue;
        }
        let Some((count, partial)) = local_search(&g, &in_s, &mut rng, LOCAL_STEPS, &mut checks, budget)? else {
            continue;
        };
        let Some(col) = random_extension(&g, &partial, &mut rng) else {
            continue;
        };
        if count == 1 {
            checks += 1;
            if verify::is_sudoku_set(&g, &col, &in_s, 3, PROBE_GUARD)?.status.is_unique() {
                best = Some((in_s, col));
                continue;
            }
        }
        if best.as_ref().is_some_and(|(b, _)| size(b) <= s + 1) {
            continue;
        }
        let mut extra: Vec<usize> = (0..n).filter(|&v| !in_s[v]).collect();
        for a in (1..extra.len()).rev() {
            extra.swap(a, rng.index(a + 1));
        }
        for v in extra {
            if checks >= budget {
                break 'trials;
            }
            checks += 1;
            let mut grown = in_s.clone();
            grown[v] = true;
            if verify::is_sudoku_set(&g, &col, &grown, 3, PROBE_GUARD)?.status.is_unique() {
                best = Some((grown, col));
                break;
            }
        }
    }
    let (witness_set, witness_colouring) = match &best {
        Some((m, c)) => ((0..n).filter(|&v| m[v]).collect(), c.clone()),
        None => (Vec::new(), Vec::new()),
    };
    let best_size = best.as_ref().map(|(m, _)| size(m));
    Ok(ProbeReport {
        n,
        lb_regular: lb,
        best_size,
        best_fraction: best_size.map(|s| s as f64 / n as f64),
        witness_set,
        witness_colouring,
        checks,
        budget_exhausted: checks >= budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::CaseLabel;
    use crate::types::TrajectorySample;

    fn rec(vertex: u32, colour: u8, partner: u32, partner_colour: u8, xk: [u32; 3]) -> StepRecord {
        StepRecord {
            vertex,
            label: CaseLabel::A2a,
            colour,
            partner,
            partner_colour,
            vtype: 0,
            pointer: vertex,
            s_size: 0,
            xk,
        }
    }

    #[test]
    fn segment_counts_by_hand() {
        // X(10) = (2, 1, 0). 11 forward colour 1, 12 hits 3 (colour 1),
        // 13 hits 11, 14 forward colour 3
        let trace = [
            rec(11, 1, 0, 0, [3, 1, 0]),
            rec(12, 2, 3, 1, [2, 1, 0]),
            rec(13, 3, 11, 1, [1, 1, 0]),
            rec(14, 3, 0, 0, [1, 1, 1]),
        ];
        let c = segment_counts(&trace, [2, 1, 0], 10, 4).unwrap();
        assert_eq!(c.hits, [1, 0, 0]);
        assert_eq!(c.births, [0, 0, 1]);
        assert!(c.conserved());
        assert!(segment_counts(&trace, [2, 1, 0], 10, 5).is_err());
        assert!(segment_counts(&trace, [2, 1, 0], 9, 2).is_err());
    }

    #[test]
    fn conservation_on_real_runs() {
        for seed in 0..5 {
            let cfg = PipelineConfig::new(5000, seed);
            let p = MatchingProcess::on_the_fly(5000, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM)).unwrap();
            let (mut run, _) = start_run(p, &cfg).unwrap();
            for i in [500, 2500] {
                assert!(window_counts(&mut run, i, 100).unwrap().conserved());
            }
        }
    }

    #[test]
    fn envelope_zero_on_exact_record() {
        let n = 900;
        let samples = (0..=n)
            .step_by(30)
            .map(|i| {
                // i(n − i)/n is an integer multiple of 3 here
                let x = i * (n - i) / n;
                TrajectorySample { step: i, x, x1: x / 3, x2: x / 3, x3: x - 2 * (x / 3), s_size: 0, bc: 0, buc: 0, bud: 0 }
            })
            .collect();
        let record = TrajectoryRecord { n, samples };
        let spec = EnvelopeSpec { n, c_cond: 2.0, tol: 0.01 };
        let r = envelope_check(&record, &spec);
        assert!(r.max_dev_x < 1e-12, "{r:?}");
        assert!(r.vacuous);
    }

    #[test]
    fn eps_formula() {
        let spec = EnvelopeSpec { n: 1_000_000, c_cond: 3.0, tol: 0.01 };
        let expect = (1e6f64).ln().powi(3) / 100.0;
        assert!((spec.eps(0.0) - expect).abs() < 1e-9);
        assert_eq!(spec.exponent(), 164.0);
    }

    #[test]
    fn block_rule() {
        assert!(!block_succeeds(&[(1, 2)]));
        assert!(block_succeeds(&[(1, 4)]));
        assert!(!block_succeeds(&[(1, 5)]));
        assert!(!block_succeeds(&[(1, 4), (2, 7)]));
        assert!(!block_succeeds(&[]));
        assert_eq!(block_len(1_000_000), 1000);
    }

    #[test]
    fn run_trials_is_order_stable() {
        let a = run_trials(50, 9, 1, |t, s| (t, s)).unwrap();
        let b = run_trials(50, 9, 4, |t, s| (t, s)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[3], (3, trial_seed(9, 3)));
    }

    #[test]
    fn decycling_leaves_forest() {
        let mut rng = DeterministicRandomSource::new(4);
        for seed in 0..10 {
            let g = crate::graph::generate_graph(40, seed).unwrap().to_adjacency();
            let s = greedy_decycling(&g, &mut rng);
            assert!(verify::is_decycling(&g, &s));
            let c = random_proper_colouring(&g, &mut rng).unwrap();
            assert!(verify::check_proper(&g, &c, 3).unwrap());
        }
    }

    #[test]
    fn probe_reports_verified_witness() {
        let r = conjecture_probe(30, 10, 5000, 1).unwrap();
        let size = r.best_size.expect("some witness");
        assert!(size as i64 >= r.lb_regular);
        let g = crate::graph::generate_graph(30, 1).unwrap().to_adjacency();
        let mut mask = vec![false; 30];
        for &v in &r.witness_set {
            mask[v] = true;
        }
        let res = verify::is_sudoku_set(&g, &r.witness_colouring, &mask, 3, PROBE_GUARD).unwrap();
        assert!(res.status.is_unique());
    }

    #[test]
    fn density_bins_need_ten_traces() {
        let t: Vec<StepRecord> = vec![];
        let traces: Vec<&[StepRecord]> = vec![&t; 3];
        assert!(matches!(
            bad_density_bins(&traces, 100, 10, 90, 5),
            Err(ExperimentError::TooFewRecords { need: 10, got: 3 })
        ));
    }
}
