//! Three-phase colouring: balanced greedy burn-in on `[i0]`, the run
//! algorithm on `(i0, i1]`, and even-cycle completion on `(i1, n]`.

mod burn_in;
mod completion;
mod sudoku;

pub use burn_in::{balanced_greedy_burn_in, BurnIn};
pub use completion::{completion_phase, find_even_interval, list_colour_even_cycle};
pub use sudoku::{classify_step, CaseLabel, RunKind, RunState, StepRecord, SudokuRun};

use crate::graph::{CubicMultigraph, GraphError, MatchingProcess};
use crate::rng::{DeterministicRandomSource, COLOUR_STREAM, MATCHING_STREAM};
use crate::types::{Colour, TrajectoryRecord, VertexId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("burn-in needs i0 >= 7, got {0}")]
    BurnInTooShort(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("state corruption at vertex {vertex}: {detail}")]
    Corrupt { vertex: VertexId, detail: String },
    #[error("even cycle list colouring needs an even length >= 4, got {0}")]
    BadCycle(usize),
}

/// Colour per vertex; index `v - 1`, 0 = uncoloured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColouring {
    colours: Vec<Colour>,
}

impl PartialColouring {
    pub fn new(n: usize) -> Self {
        PartialColouring {
            colours: vec![0; n],
        }
    }

    pub fn from_vec(colours: Vec<Colour>) -> Self {
        PartialColouring { colours }
    }

    pub fn n(&self) -> usize {
        self.colours.len()
    }

    pub fn get(&self, v: VertexId) -> Option<Colour> {
        match self.colours[v - 1] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, v: VertexId, c: Colour) {
        debug_assert!((1..=3).contains(&c));
        self.colours[v - 1] = c;
    }

    pub fn clear(&mut self, v: VertexId) {
        self.colours[v - 1] = 0;
    }

    pub fn is_total(&self) -> bool {
        self.colours.iter().all(|&c| c != 0)
    }

    pub fn as_slice(&self) -> &[Colour] {
        &self.colours
    }

    pub fn into_vec(self) -> Vec<Colour> {
        self.colours
    }

    /// Colours not used by the coloured neighbours of `v`, as a bitmask
    /// over `{1,2,3}` (bit `c-1`).
    pub fn free_mask(&self, graph: &CubicMultigraph, v: VertexId) -> u8 {
        let mut used = 0u8;
        for w in graph.neighbours(v) {
            if let Some(c) = self.get(w) {
                used |= 1 << (c - 1);
            }
        }
        0b111 & !used
    }

    /// No edge of `graph` with both ends coloured is monochromatic.
    pub fn is_proper_on(&self, graph: &CubicMultigraph) -> bool {
        (1..=graph.n()).all(|v| match self.get(v) {
            None => true,
            Some(c) => graph
                .neighbours(v)
                .iter()
                .all(|&w| self.get(w) != Some(c)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: usize,
    pub i0: usize,
    pub tail: usize,
    pub seed: u64,
    pub sample_every: usize,
    /// Keep a per-vertex [`StepRecord`] for `(i0, i1]`.
    pub record_trace: bool,
}

impl PipelineConfig {
    /// Defaults: `i0 = max(⌈n^{2/3}⌉, 7)`, `tail = min(⌈20√n⌉, ⌊n/3⌋)`,
    /// `sample_every = max(⌊n/1000⌋, 1)`.
    pub fn new(n: usize, seed: u64) -> Self {
        PipelineConfig {
            n,
            i0: Self::default_i0(n),
            tail: Self::default_tail(n),
            seed,
            sample_every: Self::default_sample_every(n),
            record_trace: false,
        }
    }

    /// `max(⌈n^{2/3}⌉, 7)`, computed exactly.
    pub fn default_i0(n: usize) -> usize {
        let target = (n as u128) * (n as u128);
        let mut i = (n as f64).powf(2.0 / 3.0).floor() as u128;
        while i > 0 && (i - 1).pow(3) >= target {
            i -= 1;
        }
        while i.pow(3) < target {
            i += 1;
        }
        (i as usize).max(7)
    }

    /// `min(⌈20√n⌉, ⌊n/3⌋)`, computed exactly.
    pub fn default_tail(n: usize) -> usize {
        let target = 400 * n as u128;
        let mut t = (20.0 * (n as f64).sqrt()).floor() as u128;
        while t > 0 && (t - 1).pow(2) >= target {
            t -= 1;
        }
        while t * t < target {
            t += 1;
        }
        (t as usize).min(n / 3)
    }

    pub fn default_sample_every(n: usize) -> usize {
        (n / 1000).max(1)
    }

    pub fn i1(&self) -> usize {
        self.n.saturating_sub(self.tail)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.n < 4 || self.n % 2 == 1 {
            return Err(PipelineError::Config(format!(
                "n must be even and >= 4, got {}",
                self.n
            )));
        }
        if self.i0 < 7 {
            return Err(PipelineError::BurnInTooShort(self.i0));
        }
        if self.tail == 0 || self.tail >= self.n || self.i0 >= self.i1() {
            return Err(PipelineError::Config(format!(
                "need 0 < i0 < i1 = n - tail < n, got i0 = {}, tail = {}, n = {}",
                self.i0, self.tail, self.n
            )));
        }
        if self.sample_every == 0 {
            return Err(PipelineError::Config("sample_every must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompletionMode {
    EvenCycleInterval,
    BacktrackFallback,
    Failed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadCounts {
    pub bc: usize,
    pub buc: usize,
    pub bud: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub config: PipelineConfig,
    pub graph: CubicMultigraph,
    pub colouring: PartialColouring,
    /// Final Sudoku set, ascending 1-based ids.
    pub sudoku_set: Vec<VertexId>,
    pub counts: BadCounts,
    /// `|S(i1)|` before `i1` and the tail are added.
    pub run_set_size: usize,
    pub discrepancy: usize,
    /// `X(i0)` and `X_k(i0)`.
    pub x_at_i0: usize,
    pub xk_at_i0: [usize; 3],
    pub trajectory: TrajectoryRecord,
    pub trace: Option<Vec<StepRecord>>,
    pub completed: bool,
    pub completion_mode: CompletionMode,
}

impl PipelineResult {
    pub fn i0(&self) -> usize {
        self.config.i0
    }

    pub fn i1(&self) -> usize {
        self.config.i1()
    }

    /// Membership mask of the final set, index `v - 1`.
    pub fn sudoku_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.config.n];
        for &v in &self.sudoku_set {
            mask[v - 1] = true;
        }
        mask
    }

    /// Right-hand side of the run-set size bound:
    /// `½|B_C| + |B_U^(c)| + 2|B_U^(d)| + |S0|`, doubled to stay integral.
    pub fn size_bound_holds(&self) -> bool {
        2 * self.run_set_size
            <= self.counts.bc + 2 * self.counts.buc + 4 * self.counts.bud + 2 * self.config.i0
    }
}

/// Runs burn-in, the run algorithm and completion on an on-the-fly matching.
pub fn full_pipeline(config: &PipelineConfig) -> Result<PipelineResult, PipelineError> {
    config.validate()?;
    let process = MatchingProcess::on_the_fly(
        config.n,
        DeterministicRandomSource::with_stream(config.seed, MATCHING_STREAM),
    )?;
    pipeline_on(process, config)
}

/// Same as [`full_pipeline`] but replaying a fixed graph.
pub fn full_pipeline_on_graph(
    graph: CubicMultigraph,
    config: &PipelineConfig,
) -> Result<PipelineResult, PipelineError> {
    config.validate()?;
    if graph.n() != config.n {
        return Err(PipelineError::Config(format!(
            "graph has {} vertices, config says {}",
            graph.n(),
            config.n
        )));
    }
    pipeline_on(MatchingProcess::presampled(graph), config)
}

/// Burn-in followed by a [`SudokuRun`] positioned at `i0`.
pub fn start_run(
    mut process: MatchingProcess,
    config: &PipelineConfig,
) -> Result<(SudokuRun, BurnIn), PipelineError> {
    config.validate()?;
    let burn = balanced_greedy_burn_in(&mut process, config.i0)?;
    let state = RunState::after_burn_in(burn.colouring.clone(), config.i0, &process)?;
    let run = SudokuRun::new(
        state,
        process,
        DeterministicRandomSource::with_stream(config.seed, COLOUR_STREAM),
        config.i1(),
        config.sample_every,
        config.record_trace,
    );
    Ok((run, burn))
}

fn pipeline_on(
    process: MatchingProcess,
    config: &PipelineConfig,
) -> Result<PipelineResult, PipelineError> {
    let i0 = config.i0;
    let i1 = config.i1();
    let (mut run, burn) = start_run(process, config)?;
    run.run_to(i1)?;
    let parts = run.into_parts();
    let state = parts.state;
    let mut process = parts.process;
    process.finish();
    let graph = process.graph()?;

    let run_set_size = state.s_size();
    let mut in_s = state.in_s().to_vec();
    in_s[i1 - 1] = true;
    for flag in &mut in_s[i1..] {
        *flag = true;
    }
    let counts = state.counts();
    let (colouring, completion_mode) = completion_phase(&graph, state.colouring, i1);
    let completed = completion_mode != CompletionMode::Failed;
    debug_assert!(!completed || (colouring.is_total() && colouring.is_proper_on(&graph)));
    let sudoku_set: Vec<VertexId> = (1..=config.n).filter(|&v| in_s[v - 1]).collect();
    debug_assert!(sudoku_set.len() >= i0);

    Ok(PipelineResult {
        config: *config,
        graph,
        colouring,
        sudoku_set,
        counts,
        run_set_size,
        discrepancy: burn.discrepancy,
        x_at_i0: burn.xk.iter().sum(),
        xk_at_i0: burn.xk,
        trajectory: parts.trajectory,
        trace: parts.trace,
        completed,
        completion_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_phase_sizes() {
        assert_eq!(PipelineConfig::default_i0(1000), 100);
        assert_eq!(PipelineConfig::default_i0(100_000), 2155);
        assert_eq!(PipelineConfig::default_i0(8), 7);
        assert_eq!(PipelineConfig::default_tail(10_000), 2000);
        assert_eq!(PipelineConfig::default_tail(100_000), 6325);
        assert_eq!(PipelineConfig::default_tail(100), 33);
        let c = PipelineConfig::new(1_000_000, 0);
        assert_eq!((c.i0, c.tail), (10_000, 20_000));
    }

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::new(100, 0).validate().is_ok());
        let mut c = PipelineConfig::new(100, 0);
        c.i0 = 6;
        assert_eq!(c.validate(), Err(PipelineError::BurnInTooShort(6)));
        let mut c = PipelineConfig::new(100, 0);
        c.tail = 95;
        assert!(matches!(c.validate(), Err(PipelineError::Config(_))));
        assert!(matches!(
            PipelineConfig::new(101, 0).validate(),
            Err(PipelineError::Config(_))
        ));
    }

    #[test]
    fn small_pipeline_is_proper_and_contains_phases() {
        for seed in 0..20 {
            let cfg = PipelineConfig::new(200, seed);
            let r = full_pipeline(&cfg).unwrap();
            assert!(r.completed);
            assert!(r.colouring.is_total());
            assert!(r.colouring.is_proper_on(&r.graph));
            let mask = r.sudoku_mask();
            assert!(mask[..cfg.i0].iter().all(|&b| b));
            assert!(mask[cfg.i1() - 1..].iter().all(|&b| b));
            assert!(r.size_bound_holds());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = PipelineConfig::new(1000, 17);
        let a = full_pipeline(&cfg).unwrap();
        let b = full_pipeline(&cfg).unwrap();
        assert_eq!(a.colouring, b.colouring);
        assert_eq!(a.sudoku_set, b.sudoku_set);
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.trajectory, b.trajectory);
    }
}
