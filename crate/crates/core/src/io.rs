//! JSON and CSV file formats.
//!
//! All vertex ids in files are 1-based.

use crate::colouring::{CompletionMode, PipelineResult};
use crate::graph::{CubicMultigraph, GraphError};
use crate::types::{TrajectoryRecord, TrajectorySample, VertexId};
use crate::verify::{AdjGraph, VerifyError};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use thiserror::Error;

pub const GRAPH_VERSION: &str = "cubic-v1";
pub const ADJ_VERSION: &str = "adj-v1";
pub const COLOURING_VERSION: &str = "colouring-v1";
pub const SET_VERSION: &str = "set-v1";
pub const TRAJECTORY_HEADER: [&str; 9] = ["step", "X", "X1", "X2", "X3", "S_size", "bc", "buc", "bud"];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("expected version {expected:?}, found {found:?}")]
    Version { expected: &'static str, found: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad trajectory header {0:?}")]
    Header(Vec<String>),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("vertex id {0} out of range for n = {1}")]
    Id(usize, usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    version: String,
    n: usize,
    matching: Vec<[VertexId; 2]>,
}

#[derive(Serialize, Deserialize)]
struct AdjFile {
    version: String,
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ColouringFile {
    version: String,
    n: usize,
    colours: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct SetFile {
    version: String,
    vertices: Vec<VertexId>,
}

fn check_version(found: &str, expected: &'static str) -> Result<(), IoError> {
    if found == expected {
        Ok(())
    } else {
        Err(IoError::Version {
            expected,
            found: found.to_string(),
        })
    }
}

pub fn graph_to_json(graph: &CubicMultigraph) -> String {
    let file = GraphFile {
        version: GRAPH_VERSION.into(),
        n: graph.n(),
        matching: graph.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
    };
    serde_json::to_string(&file).expect("plain data")
}

pub fn graph_from_json(text: &str) -> Result<CubicMultigraph, IoError> {
    let file: GraphFile = serde_json::from_str(text)?;
    check_version(&file.version, GRAPH_VERSION)?;
    let pairs: Vec<(VertexId, VertexId)> = file.matching.iter().map(|p| (p[0], p[1])).collect();
    Ok(CubicMultigraph::from_pairs(file.n, &pairs)?)
}

pub fn adj_to_json(graph: &AdjGraph) -> String {
    let file = AdjFile {
        version: ADJ_VERSION.into(),
        n: graph.n(),
        edges: graph.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect(),
    };
    serde_json::to_string(&file).expect("plain data")
}

/// Reads either an `adj-v1` or a `cubic-v1` document.
pub fn any_graph_from_json(text: &str) -> Result<AdjGraph, IoError> {
    let probe: serde_json::Value = serde_json::from_str(text)?;
    match probe.get("version").and_then(|v| v.as_str()) {
        Some(GRAPH_VERSION) => Ok(graph_from_json(text)?.to_adjacency()),
        _ => {
            let file: AdjFile = serde_json::from_value(probe)?;
            check_version(&file.version, ADJ_VERSION)?;
            let mut edges = Vec::with_capacity(file.edges.len());
            for [a, b] in file.edges {
                for v in [a, b] {
                    if v == 0 || v > file.n {
                        return Err(IoError::Id(v, file.n));
                    }
                }
                edges.push((a - 1, b - 1));
            }
            Ok(AdjGraph::from_edges(file.n, &edges)?)
        }
    }
}

pub fn colouring_to_json(colours: &[u8]) -> String {
    let file = ColouringFile {
        version: COLOURING_VERSION.into(),
        n: colours.len(),
        colours: colours.to_vec(),
    };
    serde_json::to_string(&file).expect("plain data")
}

pub fn colouring_from_json(text: &str) -> Result<Vec<u8>, IoError> {
    let file: ColouringFile = serde_json::from_str(text)?;
    check_version(&file.version, COLOURING_VERSION)?;
    if file.colours.len() != file.n {
        return Err(IoError::Verify(VerifyError::Length {
            graph: file.n,
            input: file.colours.len(),
        }));
    }
    Ok(file.colours)
}

pub fn set_to_json(vertices: &[VertexId]) -> String {
    let file = SetFile {
        version: SET_VERSION.into(),
        vertices: vertices.to_vec(),
    };
    serde_json::to_string(&file).expect("plain data")
}

pub fn set_from_json(text: &str) -> Result<Vec<VertexId>, IoError> {
    let file: SetFile = serde_json::from_str(text)?;
    check_version(&file.version, SET_VERSION)?;
    Ok(file.vertices)
}

/// Membership mask (index `v - 1`) from 1-based ids.
pub fn set_mask(n: usize, vertices: &[VertexId]) -> Result<Vec<bool>, IoError> {
    let mut mask = vec![false; n];
    for &v in vertices {
        if v == 0 || v > n {
            return Err(IoError::Id(v, n));
        }
        mask[v - 1] = true;
    }
    Ok(mask)
}

pub fn write_trajectory_csv<W: Write>(record: &TrajectoryRecord, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for s in &record.samples {
        w.serialize((s.step, s.x, s.x1, s.x2, s.x3, s.s_size, s.bc, s.buc, s.bud))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(n: usize, input: R) -> Result<TrajectoryRecord, IoError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != TRAJECTORY_HEADER {
        return Err(IoError::Header(header));
    }
    let mut samples = Vec::new();
    for row in r.deserialize() {
        let (step, x, x1, x2, x3, s_size, bc, buc, bud): (
            usize,
            usize,
            usize,
            usize,
            usize,
            usize,
            usize,
            usize,
            usize,
        ) = row?;
        samples.push(TrajectorySample {
            step,
            x,
            x1,
            x2,
            x3,
            s_size,
            bc,
            buc,
            bud,
        });
    }
    Ok(TrajectoryRecord { n, samples })
}

/// Compact description of a pipeline run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PipelineSummary {
    pub n: usize,
    pub seed: u64,
    pub i0: usize,
    pub i1: usize,
    pub completed: bool,
    pub completion_mode: CompletionMode,
    pub s_size: usize,
    pub s_fraction: f64,
    pub run_set_size: usize,
    pub bc: usize,
    pub buc: usize,
    pub bud: usize,
    pub half_bc_fraction: f64,
    pub discrepancy: usize,
    pub x_at_i0: usize,
    pub size_bound_holds: bool,
}

impl PipelineSummary {
    pub fn of(r: &PipelineResult) -> Self {
        let n = r.config.n;
        PipelineSummary {
            n,
            seed: r.config.seed,
            i0: r.i0(),
            i1: r.i1(),
            completed: r.completed,
            completion_mode: r.completion_mode,
            s_size: r.sudoku_set.len(),
            s_fraction: r.sudoku_set.len() as f64 / n as f64,
            run_set_size: r.run_set_size,
            bc: r.counts.bc,
            buc: r.counts.buc,
            bud: r.counts.bud,
            half_bc_fraction: r.counts.bc as f64 / (2 * n) as f64,
            discrepancy: r.discrepancy,
            x_at_i0: r.x_at_i0,
            size_bound_holds: r.size_bound_holds(),
        }
    }
}

/// Full run artifact: summary plus graph, colouring and set.
#[derive(Serialize)]
pub struct PipelineArtifact<'a> {
    pub version: &'static str,
    pub summary: PipelineSummary,
    pub matching: Vec<[VertexId; 2]>,
    pub colours: &'a [u8],
    pub sudoku_set: &'a [VertexId],
}

pub fn pipeline_to_json(r: &PipelineResult) -> String {
    let art = PipelineArtifact {
        version: "pipeline-v1",
        summary: PipelineSummary::of(r),
        matching: r.graph.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        colours: r.colouring.as_slice(),
        sudoku_set: &r.sudoku_set,
    };
    serde_json::to_string(&art).expect("plain data")
}
