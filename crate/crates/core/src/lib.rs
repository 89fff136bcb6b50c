//! Sudoku sets for random cubic graphs.
//!
//! The graphs are a Hamilton cycle `1 2 … n` plus a uniform perfect
//! matching. The crate colours them with a three-phase pipeline (balanced
//! greedy burn-in, a pointer-driven run algorithm, and an even-cycle
//! completion), certifies the resulting Sudoku sets, and ships the numerics
//! for the 18-state vertex type chain together with a Monte Carlo harness.

pub mod chain;
pub mod colouring;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod plot;
pub mod rng;
pub mod stats;
pub mod types;
pub mod verify;

pub use chain::{ChainParams, Dist18, TransitionMatrix18};
pub use colouring::{
    full_pipeline, CaseLabel, CompletionMode, PartialColouring, PipelineConfig, PipelineResult,
    RunKind, RunState, StepRecord, SudokuRun,
};
pub use graph::{generate_graph, is_simple, CubicMultigraph, MatchingProcess, RevealOutcome};
pub use rng::DeterministicRandomSource;
pub use types::{Colour, TrajectoryRecord, TrajectorySample, VertexId, VertexType};
pub use verify::{AdjGraph, BoundsReport, VerificationResult, VerificationStatus};
