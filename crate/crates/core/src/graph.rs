//! Cubic multigraphs `H_n ∪ M_n` and the vertex-by-vertex matching process.

use crate::rng::{DeterministicRandomSource, GRAPH_STREAM};
use crate::types::VertexId;
use rand::seq::SliceRandom;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("n must be even and at least 4, got {0}")]
    BadOrder(usize),
    #[error("vertex {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("vertex {0} is matched to itself")]
    SelfLoop(usize),
    #[error("vertex {0} appears in more than one matching pair")]
    Repeated(usize),
    #[error("vertex {0} is not covered by the matching")]
    Uncovered(usize),
    #[error("matching process already finished all {0} steps")]
    Exhausted(usize),
    #[error("matching not fully revealed (step {step} of {n})")]
    Incomplete { step: usize, n: usize },
}

/// The cycle `1 2 … n` together with a perfect matching `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicMultigraph {
    n: usize,
    partner: Vec<VertexId>,
}

impl CubicMultigraph {
    /// Builds the graph from `partner[v-1] = p(v)`.
    pub fn from_partners(partner: Vec<VertexId>) -> Result<Self, GraphError> {
        let n = partner.len();
        if n < 4 || n % 2 == 1 {
            return Err(GraphError::BadOrder(n));
        }
        for (i, &p) in partner.iter().enumerate() {
            let v = i + 1;
            if p == 0 || p > n {
                return Err(GraphError::OutOfRange(p, n));
            }
            if p == v {
                return Err(GraphError::SelfLoop(v));
            }
            if partner[p - 1] != v {
                return Err(GraphError::Repeated(p));
            }
        }
        Ok(CubicMultigraph { n, partner })
    }

    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        if n < 4 || n % 2 == 1 {
            return Err(GraphError::BadOrder(n));
        }
        let mut partner = vec![0; n];
        for &(a, b) in pairs {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::OutOfRange(v, n));
                }
                if partner[v - 1] != 0 {
                    return Err(GraphError::Repeated(v));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        if let Some(i) = partner.iter().position(|&p| p == 0) {
            return Err(GraphError::Uncovered(i + 1));
        }
        Self::from_partners(partner)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, v: VertexId) -> VertexId {
        self.partner[v - 1]
    }

    pub fn partners(&self) -> &[VertexId] {
        &self.partner
    }

    pub fn cycle_next(&self, v: VertexId) -> VertexId {
        if v == self.n {
            1
        } else {
            v + 1
        }
    }

    pub fn cycle_prev(&self, v: VertexId) -> VertexId {
        if v == 1 {
            self.n
        } else {
            v - 1
        }
    }

    /// Cycle predecessor, cycle successor, matching partner.
    pub fn neighbours(&self, v: VertexId) -> [VertexId; 3] {
        [self.cycle_prev(v), self.cycle_next(v), self.partner(v)]
    }

    /// Matching pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        (1..=self.n)
            .filter_map(|v| {
                let p = self.partner(v);
                (v < p).then_some((v, p))
            })
            .collect()
    }

    /// 0-based adjacency lists (cycle edges plus matching edges, with
    /// multiplicity).
    pub fn to_adjacency(&self) -> crate::verify::AdjGraph {
        let mut edges = Vec::with_capacity(3 * self.n / 2);
        for v in 1..=self.n {
            edges.push((v - 1, self.cycle_next(v) - 1));
        }
        for (a, b) in self.pairs() {
            edges.push((a - 1, b - 1));
        }
        crate::verify::AdjGraph::from_edges(self.n, &edges)
            .expect("cubic multigraph edges are in range")
    }
}

/// Uniform random perfect matching on `[n]` by shuffling and pairing
/// consecutive entries.
pub fn generate_graph(n: usize, seed: u64) -> Result<CubicMultigraph, GraphError> {
    if n < 4 || n % 2 == 1 {
        return Err(GraphError::BadOrder(n));
    }
    let mut rng = DeterministicRandomSource::with_stream(seed, GRAPH_STREAM);
    let mut order: Vec<VertexId> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut partner = vec![0; n];
    for pair in order.chunks_exact(2) {
        partner[pair[0] - 1] = pair[1];
        partner[pair[1] - 1] = pair[0];
    }
    CubicMultigraph::from_partners(partner)
}

/// No matching edge doubles a cycle edge.
pub fn is_simple(graph: &CubicMultigraph) -> bool {
    (1..=graph.n()).all(|v| {
        let p = graph.partner(v);
        p != graph.cycle_next(v) && p != graph.cycle_prev(v)
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RevealOutcome {
    Forward,
    Backward(VertexId),
}

const ABSENT: usize = usize::MAX;

/// Deferred-decision exposure of the matching, one vertex per step.
///
/// Step `i` decides whether `p(i) < i`; if so it reveals `p(i)`, an
/// unsaturated vertex of `[i-1]`. With a pre-sampled graph the answers are
/// read off the graph; otherwise they are drawn on the fly with
/// `Pr(backward) = X(i-1)/(n-i+1)` and a uniform unsaturated partner.
#[derive(Clone, Debug)]
pub struct MatchingProcess {
    n: usize,
    step: usize,
    revealed: Vec<VertexId>,
    unsaturated: Vec<VertexId>,
    slot: Vec<usize>,
    source: Option<Arc<CubicMultigraph>>,
    rng: DeterministicRandomSource,
}

impl MatchingProcess {
    /// On-the-fly sampling driven by `rng`.
    pub fn on_the_fly(n: usize, rng: DeterministicRandomSource) -> Result<Self, GraphError> {
        if n < 4 || n % 2 == 1 {
            return Err(GraphError::BadOrder(n));
        }
        Ok(MatchingProcess {
            n,
            step: 0,
            revealed: vec![0; n],
            unsaturated: Vec::new(),
            slot: vec![ABSENT; n],
            source: None,
            rng,
        })
    }

    /// Replays a fixed graph.
    pub fn presampled(graph: CubicMultigraph) -> Self {
        let n = graph.n();
        MatchingProcess {
            n,
            step: 0,
            revealed: vec![0; n],
            unsaturated: Vec::new(),
            slot: vec![ABSENT; n],
            source: Some(Arc::new(graph)),
            rng: DeterministicRandomSource::new(0),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// `X(step)`.
    pub fn x_total(&self) -> usize {
        self.unsaturated.len()
    }

    pub fn is_finished(&self) -> bool {
        self.step == self.n
    }

    /// Unsaturated vertices of `[step]` (internal order).
    pub fn unsaturated(&self) -> &[VertexId] {
        &self.unsaturated
    }

    pub fn is_unsaturated(&self, v: VertexId) -> bool {
        self.slot[v - 1] != ABSENT
    }

    /// `p(v)` if already revealed.
    pub fn revealed_partner(&self, v: VertexId) -> Option<VertexId> {
        match self.revealed[v - 1] {
            0 => None,
            p => Some(p),
        }
    }

    /// Replaces the sampling stream (used to branch replicas from a shared
    /// prefix).
    pub fn reseed(&mut self, rng: DeterministicRandomSource) {
        self.rng = rng;
    }

    pub fn reveal_step(&mut self) -> Result<RevealOutcome, GraphError> {
        if self.step == self.n {
            return Err(GraphError::Exhausted(self.n));
        }
        let v = self.step + 1;
        let outcome = match &self.source {
            Some(g) => {
                let p = g.partner(v);
                if p < v {
                    RevealOutcome::Backward(p)
                } else {
                    RevealOutcome::Forward
                }
            }
            None => {
                let x = self.unsaturated.len() as u64;
                let remaining = (self.n - self.step) as u64;
                if self.rng.bernoulli_ratio(x, remaining) {
                    let j = self.unsaturated[self.rng.index(self.unsaturated.len())];
                    RevealOutcome::Backward(j)
                } else {
                    RevealOutcome::Forward
                }
            }
        };
        match outcome {
            RevealOutcome::Backward(j) => {
                self.remove_unsaturated(j);
                self.revealed[v - 1] = j;
                self.revealed[j - 1] = v;
            }
            RevealOutcome::Forward => {
                self.slot[v - 1] = self.unsaturated.len();
                self.unsaturated.push(v);
            }
        }
        self.step = v;
        if cfg!(debug_assertions) && self.n <= 4096 {
            assert_eq!(self.recount_unsaturated(), self.unsaturated.len());
        }
        Ok(outcome)
    }

    fn remove_unsaturated(&mut self, j: VertexId) {
        let pos = self.slot[j - 1];
        assert!(pos != ABSENT, "vertex {j} is not unsaturated");
        self.unsaturated.swap_remove(pos);
        if let Some(&moved) = self.unsaturated.get(pos) {
            self.slot[moved - 1] = pos;
        }
        self.slot[j - 1] = ABSENT;
    }

    /// Number of `j <= step` whose partner is still unknown, counted from
    /// scratch.
    pub fn recount_unsaturated(&self) -> usize {
        (1..=self.step).filter(|&j| self.revealed[j - 1] == 0).count()
    }

    /// Runs the process to the end.
    pub fn finish(&mut self) {
        while self.step < self.n {
            self.reveal_step().expect("step < n");
        }
    }

    /// The fully revealed graph.
    pub fn graph(&self) -> Result<CubicMultigraph, GraphError> {
        if self.step < self.n {
            return Err(GraphError::Incomplete {
                step: self.step,
                n: self.n,
            });
        }
        CubicMultigraph::from_partners(self.revealed.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(generate_graph(2, 0), Err(GraphError::BadOrder(2)));
        assert_eq!(generate_graph(7, 0), Err(GraphError::BadOrder(7)));
    }

    #[test]
    fn simple_examples() {
        let g = CubicMultigraph::from_pairs(4, &[(1, 3), (2, 4)]).unwrap();
        assert!(is_simple(&g));
        let g = CubicMultigraph::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(!is_simple(&g));
        let g = CubicMultigraph::from_pairs(6, &[(1, 4), (2, 5), (3, 6)]).unwrap();
        assert!(is_simple(&g));
        // 1-n is a cycle edge too
        let g = CubicMultigraph::from_pairs(6, &[(1, 6), (2, 4), (3, 5)]).unwrap();
        assert!(!is_simple(&g));
    }

    #[test]
    fn loader_rejects_broken_matchings() {
        assert_eq!(
            CubicMultigraph::from_pairs(4, &[(1, 1), (2, 4)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            CubicMultigraph::from_pairs(4, &[(1, 2), (2, 3)]),
            Err(GraphError::Repeated(2))
        );
        assert_eq!(
            CubicMultigraph::from_pairs(4, &[(1, 2)]),
            Err(GraphError::Uncovered(3))
        );
        assert_eq!(
            CubicMultigraph::from_pairs(4, &[(1, 5), (2, 3)]),
            Err(GraphError::OutOfRange(5, 4))
        );
    }

    #[test]
    fn first_step_forward_last_step_backward() {
        for seed in 0..50 {
            let mut p =
                MatchingProcess::on_the_fly(10, DeterministicRandomSource::new(seed)).unwrap();
            assert_eq!(p.reveal_step().unwrap(), RevealOutcome::Forward);
            while p.step() < 9 {
                p.reveal_step().unwrap();
            }
            assert_eq!(p.x_total(), 1);
            assert!(matches!(p.reveal_step().unwrap(), RevealOutcome::Backward(_)));
            assert_eq!(p.x_total(), 0);
            assert_eq!(p.reveal_step(), Err(GraphError::Exhausted(10)));
        }
    }

    #[test]
    fn replay_reproduces_graph() {
        for seed in 0..20 {
            let g = generate_graph(50, seed).unwrap();
            let mut p = MatchingProcess::presampled(g.clone());
            p.finish();
            assert_eq!(p.graph().unwrap(), g);
        }
    }

    #[test]
    fn x_steps_by_one() {
        let mut p = MatchingProcess::on_the_fly(200, DeterministicRandomSource::new(3)).unwrap();
        let mut prev = 0i64;
        while !p.is_finished() {
            p.reveal_step().unwrap();
            let x = p.x_total() as i64;
            assert_eq!((x - prev).abs(), 1);
            prev = x;
        }
        assert_eq!(prev, 0);
        p.graph().unwrap();
    }
}
