//! The pointer-driven run algorithm on `(i0, i1]`.

use super::{BadCounts, PartialColouring, PipelineError};
use crate::graph::{MatchingProcess, RevealOutcome};
use crate::rng::{DeterministicRandomSource, COLOUR_STREAM, MATCHING_STREAM};
use crate::types::{
    other_colours, third_colour, Colour, Edge, TrajectoryRecord, TrajectorySample, VertexId,
    VertexType,
};
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    A1,
    A2a,
    A2b,
    B1,
    B2a,
    B2b,
    B2c,
    B2d,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 8] = [
        CaseLabel::A1,
        CaseLabel::A2a,
        CaseLabel::A2b,
        CaseLabel::B1,
        CaseLabel::B2a,
        CaseLabel::B2b,
        CaseLabel::B2c,
        CaseLabel::B2d,
    ];

    /// Vertices that end a run through a forward edge or a clashing partner
    /// colour.
    pub fn is_conventionally_bad(self) -> bool {
        matches!(
            self,
            CaseLabel::A2a | CaseLabel::A2b | CaseLabel::B2a | CaseLabel::B2b
        )
    }

    /// Growth of `S` caused by this case.
    pub fn set_increment(self) -> usize {
        match self {
            CaseLabel::B2a | CaseLabel::B2b | CaseLabel::B2c => 1,
            CaseLabel::B2d => 2,
            _ => 0,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunKind {
    A,
    B,
}

/// One processed vertex of `(i0, i1]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub vertex: u32,
    pub label: CaseLabel,
    pub colour: Colour,
    /// Backward partner, 0 for a forward edge.
    pub partner: u32,
    pub partner_colour: Colour,
    pub vtype: u8,
    pub pointer: u32,
    pub s_size: u32,
    /// `X_k` after this step.
    pub xk: [u32; 3],
}

const NO_TYPE: u8 = u8::MAX;

#[derive(Clone, Debug)]
pub struct RunState {
    pub colouring: PartialColouring,
    current: VertexId,
    pointer: VertexId,
    /// `p(current)` when it is smaller than `current`.
    current_back_partner: Option<VertexId>,
    in_s: Vec<bool>,
    s_size: usize,
    bc: Vec<VertexId>,
    buc: Vec<VertexId>,
    bud: Vec<VertexId>,
    types: Vec<u8>,
    xk: [usize; 3],
}

impl RunState {
    /// State at `i0`: `S = [i0]`, pointer `i0`, `X_k` counted from the
    /// process's unsaturated vertices.
    pub fn after_burn_in(
        colouring: PartialColouring,
        i0: VertexId,
        process: &MatchingProcess,
    ) -> Result<Self, PipelineError> {
        let n = colouring.n();
        if process.step() != i0 {
            return Err(PipelineError::Config(format!(
                "process at step {}, expected {i0}",
                process.step()
            )));
        }
        let mut xk = [0; 3];
        for &v in process.unsaturated() {
            let c = colouring.get(v).ok_or_else(|| PipelineError::Corrupt {
                vertex: v,
                detail: "burn-in left a vertex uncoloured".into(),
            })?;
            xk[c as usize - 1] += 1;
        }
        let mut in_s = vec![false; n];
        in_s[..i0].iter_mut().for_each(|b| *b = true);
        let back = process.revealed_partner(i0).filter(|&p| p < i0);
        let mut types = vec![NO_TYPE; n];
        let c0 = colouring.get(i0).ok_or_else(|| PipelineError::Corrupt {
            vertex: i0,
            detail: "i0 uncoloured".into(),
        })?;
        let edge = if back.is_some() { Edge::Backward } else { Edge::Forward };
        types[i0 - 1] = VertexType::A { edge, k: c0 }.index() as u8;
        Ok(RunState {
            colouring,
            current: i0,
            pointer: i0,
            current_back_partner: back,
            in_s,
            s_size: i0,
            bc: Vec::new(),
            buc: Vec::new(),
            bud: Vec::new(),
            types,
            xk,
        })
    }

    pub fn current(&self) -> VertexId {
        self.current
    }

    pub fn pointer(&self) -> VertexId {
        self.pointer
    }

    pub fn run_kind(&self) -> RunKind {
        if self.pointer == self.current {
            RunKind::A
        } else {
            RunKind::B
        }
    }

    pub fn in_s(&self) -> &[bool] {
        &self.in_s
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn bc(&self) -> &[VertexId] {
        &self.bc
    }

    pub fn buc(&self) -> &[VertexId] {
        &self.buc
    }

    pub fn bud(&self) -> &[VertexId] {
        &self.bud
    }

    pub fn counts(&self) -> BadCounts {
        BadCounts {
            bc: self.bc.len(),
            buc: self.buc.len(),
            bud: self.bud.len(),
        }
    }

    /// `X_k` for `k = 1, 2, 3`.
    pub fn xk(&self) -> [usize; 3] {
        self.xk
    }

    pub fn vertex_type(&self, v: VertexId) -> Option<VertexType> {
        match self.types[v - 1] {
            NO_TYPE => None,
            t => Some(VertexType::from_index(t as usize)),
        }
    }

    fn colour_of(&self, v: VertexId) -> Result<Colour, PipelineError> {
        self.colouring.get(v).ok_or_else(|| PipelineError::Corrupt {
            vertex: v,
            detail: "reference vertex uncoloured".into(),
        })
    }

    /// `C_{i+1}`: `{c(i-1), c(i)}` if `p(i) > i`, else `{c(i), c(p(i))}`.
    pub fn reference_pair(&self) -> Result<[Colour; 2], PipelineError> {
        let i = self.current;
        let other = match self.current_back_partner {
            None => i - 1,
            Some(p) => p,
        };
        Ok([self.colour_of(other)?, self.colour_of(i)?])
    }
}

/// Case of the next vertex `i+1` given its reveal and, for a backward edge,
/// the partner's colour.
pub fn classify_step(
    state: &RunState,
    reveal: RevealOutcome,
    partner_colour: Option<Colour>,
) -> Result<CaseLabel, PipelineError> {
    let i = state.current;
    let corrupt = |detail: &str| PipelineError::Corrupt {
        vertex: i + 1,
        detail: detail.to_string(),
    };
    match state.run_kind() {
        RunKind::A => match reveal {
            RevealOutcome::Forward => Ok(CaseLabel::A2a),
            RevealOutcome::Backward(_) => {
                let pc = partner_colour.ok_or_else(|| corrupt("backward partner uncoloured"))?;
                if pc == state.colour_of(i)? {
                    Ok(CaseLabel::A2b)
                } else {
                    Ok(CaseLabel::A1)
                }
            }
        },
        RunKind::B => {
            let cset = state.reference_pair()?;
            if cset[0] == cset[1] {
                return Err(corrupt("reference pair is monochromatic"));
            }
            match reveal {
                RevealOutcome::Forward => Ok(CaseLabel::B2a),
                RevealOutcome::Backward(j) => {
                    let pc =
                        partner_colour.ok_or_else(|| corrupt("backward partner uncoloured"))?;
                    let inside = cset.contains(&pc);
                    if j <= state.pointer {
                        Ok(if inside { CaseLabel::B1 } else { CaseLabel::B2b })
                    } else if j <= i {
                        Ok(if inside { CaseLabel::B2c } else { CaseLabel::B2d })
                    } else {
                        Err(corrupt("backward partner beyond current vertex"))
                    }
                }
            }
        }
    }
}

/// Drives the run algorithm one vertex at a time.
#[derive(Clone, Debug)]
pub struct SudokuRun {
    state: RunState,
    process: MatchingProcess,
    rng: DeterministicRandomSource,
    i1: VertexId,
    sample_every: usize,
    trace: Option<Vec<StepRecord>>,
    trajectory: TrajectoryRecord,
}

pub struct RunParts {
    pub state: RunState,
    pub process: MatchingProcess,
    pub trace: Option<Vec<StepRecord>>,
    pub trajectory: TrajectoryRecord,
}

impl SudokuRun {
    pub fn new(
        state: RunState,
        process: MatchingProcess,
        rng: DeterministicRandomSource,
        i1: VertexId,
        sample_every: usize,
        record_trace: bool,
    ) -> Self {
        let n = process.n();
        let mut run = SudokuRun {
            state,
            process,
            rng,
            i1,
            sample_every: sample_every.max(1),
            trace: record_trace.then(Vec::new),
            trajectory: TrajectoryRecord {
                n,
                samples: Vec::new(),
            },
        };
        run.sample();
        run
    }

    pub fn state(&self) -> &RunState {
        &self.state
    }

    pub fn process(&self) -> &MatchingProcess {
        &self.process
    }

    pub fn trace(&self) -> Option<&[StepRecord]> {
        self.trace.as_deref()
    }

    pub fn trajectory(&self) -> &TrajectoryRecord {
        &self.trajectory
    }

    pub fn current(&self) -> VertexId {
        self.state.current
    }

    /// Swaps in fresh matching and colour streams derived from `seed`, so
    /// clones of one run continue independently.
    pub fn reseed(&mut self, seed: u64) {
        self.process
            .reseed(DeterministicRandomSource::with_stream(seed, MATCHING_STREAM));
        self.rng = DeterministicRandomSource::with_stream(seed, COLOUR_STREAM);
    }

    /// Starts recording (or clears) the per-step trace.
    pub fn set_trace(&mut self, on: bool) {
        self.trace = on.then(Vec::new);
    }

    fn sample(&mut self) {
        let s = &self.state;
        let i = s.current;
        let due = i.is_multiple_of(self.sample_every) || i == self.i1 || self.trajectory.samples.is_empty();
        if !due || self.trajectory.samples.last().is_some_and(|l| l.step == i) {
            return;
        }
        self.trajectory.samples.push(TrajectorySample {
            step: i,
            x: self.process.x_total(),
            x1: s.xk[0],
            x2: s.xk[1],
            x3: s.xk[2],
            s_size: s.s_size,
            bc: s.bc.len(),
            buc: s.buc.len(),
            bud: s.bud.len(),
        });
    }

    /// Processes vertex `current + 1`.
    pub fn step(&mut self) -> Result<CaseLabel, PipelineError> {
        let i = self.state.current;
        if i >= self.i1 {
            return Err(PipelineError::Config(format!("run already reached i1 = {}", self.i1)));
        }
        let v = i + 1;
        let outcome = self.process.reveal_step()?;
        let partner_colour = match outcome {
            RevealOutcome::Backward(j) => Some(self.state.colour_of(j)?),
            RevealOutcome::Forward => None,
        };
        let label = classify_step(&self.state, outcome, partner_colour)?;
        let st = &mut self.state;
        let ci = st.colour_of(i)?;
        let ptr = st.pointer;
        let colour = match label {
            CaseLabel::A1 => third_colour(ci, partner_colour.unwrap()),
            CaseLabel::A2a | CaseLabel::A2b => other_colours(ci)[self.rng.index(2)],
            CaseLabel::B1 | CaseLabel::B2a | CaseLabel::B2c => {
                let [a, b] = st.reference_pair()?;
                third_colour(a, b)
            }
            CaseLabel::B2b | CaseLabel::B2d => third_colour(ci, partner_colour.unwrap()),
        };
        if matches!(label, CaseLabel::B2c | CaseLabel::B2d) {
            let j = match outcome {
                RevealOutcome::Backward(j) => j,
                RevealOutcome::Forward => unreachable!(),
            };
            if j != ptr + 1 {
                return Err(PipelineError::Corrupt {
                    vertex: v,
                    detail: format!("partner {j} of a run-closing vertex is not ptr+1 = {}", ptr + 1),
                });
            }
        }
        st.colouring.set(v, colour);

        let add = |st: &mut RunState, u: VertexId| {
            if !st.in_s[u - 1] {
                st.in_s[u - 1] = true;
                st.s_size += 1;
            }
        };
        match label {
            CaseLabel::A1 => st.pointer = v,
            CaseLabel::A2a | CaseLabel::A2b | CaseLabel::B1 => {}
            CaseLabel::B2a => {
                add(st, v);
                st.pointer = v;
            }
            CaseLabel::B2b => {
                add(st, i);
                st.pointer = v;
            }
            CaseLabel::B2c => {
                add(st, v);
                st.pointer = v;
            }
            CaseLabel::B2d => {
                add(st, i);
                add(st, v);
                st.pointer = v;
            }
        }
        match label {
            CaseLabel::A2a | CaseLabel::A2b | CaseLabel::B2a | CaseLabel::B2b => st.bc.push(v),
            CaseLabel::B2c => st.buc.push(v),
            CaseLabel::B2d => st.bud.push(v),
            _ => {}
        }

        match outcome {
            RevealOutcome::Backward(_) => {
                st.xk[partner_colour.unwrap() as usize - 1] -= 1;
            }
            RevealOutcome::Forward => st.xk[colour as usize - 1] += 1,
        }
        let (edge, back) = match outcome {
            RevealOutcome::Backward(j) => (Edge::Backward, Some(j)),
            RevealOutcome::Forward => (Edge::Forward, None),
        };
        let vtype = if st.pointer == v {
            VertexType::A { edge, k: colour }
        } else {
            let l = match edge {
                Edge::Backward => partner_colour.unwrap(),
                Edge::Forward => ci,
            };
            VertexType::B { edge, l, k: colour }
        };
        st.types[v - 1] = vtype.index() as u8;
        st.current = v;
        st.current_back_partner = back;

        if cfg!(debug_assertions) {
            if ci == colour || partner_colour == Some(colour) {
                return Err(PipelineError::Corrupt {
                    vertex: v,
                    detail: "improper colour assigned".into(),
                });
            }
            if st.pointer < ptr || st.pointer > v {
                return Err(PipelineError::Corrupt {
                    vertex: v,
                    detail: "pointer out of order".into(),
                });
            }
            if st.xk.iter().sum::<usize>() != self.process.x_total() {
                return Err(PipelineError::Corrupt {
                    vertex: v,
                    detail: "colour counts disagree with X".into(),
                });
            }
        }

        if let Some(trace) = self.trace.as_mut() {
            trace.push(StepRecord {
                vertex: v as u32,
                label,
                colour,
                partner: back.unwrap_or(0) as u32,
                partner_colour: partner_colour.unwrap_or(0),
                vtype: vtype.index() as u8,
                pointer: st.pointer as u32,
                s_size: st.s_size as u32,
                xk: [st.xk[0] as u32, st.xk[1] as u32, st.xk[2] as u32],
            });
        }
        self.sample();
        Ok(label)
    }

    /// Steps until `current == target` (capped at `i1`).
    pub fn run_to(&mut self, target: VertexId) -> Result<(), PipelineError> {
        let target = target.min(self.i1);
        while self.state.current < target {
            self.step()?;
        }
        Ok(())
    }

    pub fn into_parts(self) -> RunParts {
        RunParts {
            state: self.state,
            process: self.process,
            trace: self.trace,
            trajectory: self.trajectory,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{start_run, PipelineConfig};
    use crate::graph::{CubicMultigraph, MatchingProcess};

    /// Builds a state directly: colours on `1..=i`, pointer, back partner.
    fn state_with(
        colours: &[Colour],
        pointer: VertexId,
        back: Option<VertexId>,
        n: usize,
    ) -> RunState {
        let mut col = PartialColouring::new(n);
        for (idx, &c) in colours.iter().enumerate() {
            col.set(idx + 1, c);
        }
        let i = colours.len();
        RunState {
            colouring: col,
            current: i,
            pointer,
            current_back_partner: back,
            in_s: vec![false; n],
            s_size: 0,
            bc: vec![],
            buc: vec![],
            bud: vec![],
            types: vec![NO_TYPE; n],
            xk: [0; 3],
        }
    }

    #[test]
    fn a_run_cases() {
        // c(i) = 1, A-run
        let s = state_with(&[2, 3, 1], 3, None, 10);
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(2), Some(2)).unwrap(),
            CaseLabel::A1
        );
        assert_eq!(
            classify_step(&s, RevealOutcome::Forward, None).unwrap(),
            CaseLabel::A2a
        );
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(1), Some(1)).unwrap(),
            CaseLabel::A2b
        );
    }

    #[test]
    fn b_run_cases() {
        // vertices 1..4, pointer 2, vertex 4 forward? no: B-run with p(4) > 4
        // means 4 = ptr+1; use pointer 3, c(3)=1, c(4)=2, C = {1,2}
        let s = state_with(&[3, 2, 1, 2], 3, None, 12);
        assert_eq!(s.reference_pair().unwrap(), [1, 2]);
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(1), Some(3)).unwrap(),
            CaseLabel::B2b
        );
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(2), Some(2)).unwrap(),
            CaseLabel::B1
        );
        assert_eq!(
            classify_step(&s, RevealOutcome::Forward, None).unwrap(),
            CaseLabel::B2a
        );
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(4), Some(2)).unwrap(),
            CaseLabel::B2c
        );
        // B-run where p(i) < i: C = {c(i), c(p(i))}
        let s = state_with(&[3, 2, 1, 2, 3], 3, Some(1), 12);
        assert_eq!(s.reference_pair().unwrap(), [3, 3]);
        assert!(classify_step(&s, RevealOutcome::Forward, None).is_err());
        let s = state_with(&[1, 2, 1, 2, 3], 3, Some(1), 12);
        assert_eq!(s.reference_pair().unwrap(), [1, 3]);
        assert_eq!(
            classify_step(&s, RevealOutcome::Backward(4), Some(2)).unwrap(),
            CaseLabel::B2d
        );
    }

    #[test]
    fn worked_b2b_example() {
        // p(i) > i, c(i-1) = 1, c(i) = 2, partner of colour 3 in [ptr]:
        // colour 1, add i to S, pointer jumps to i+1
        let n = 16;
        // vertices: 1..8 coloured, ptr = 7, vertex 8 forward
        let colours = [1, 2, 3, 1, 2, 3, 1, 2];
        let mut s = state_with(&colours, 7, None, n);
        s.xk = [0, 1, 1];
        // process at step 8 with vertex 3 and 8 unsaturated
        let mut pairs = vec![(3, 9), (8, 16)];
        let rest = [1, 2, 4, 5, 6, 7, 10, 11, 12, 13, 14, 15];
        for c in rest.chunks(2) {
            pairs.push((c[0], c[1]));
        }
        let g = CubicMultigraph::from_pairs(n, &pairs).unwrap();
        let mut p = MatchingProcess::presampled(g);
        for _ in 0..8 {
            p.reveal_step().unwrap();
        }
        assert_eq!(p.x_total(), 2);
        let mut run = SudokuRun::new(s, p, DeterministicRandomSource::new(0), 12, 1, true);
        let label = run.step().unwrap();
        assert_eq!(label, CaseLabel::B2b);
        assert_eq!(run.state().colouring.get(9), Some(1));
        assert!(run.state().in_s()[7]);
        assert_eq!(run.state().pointer(), 9);
        assert_eq!(
            run.state().vertex_type(9),
            Some(VertexType::A { edge: Edge::Backward, k: 1 })
        );
    }

    #[test]
    fn runs_alternate_and_pointer_monotone() {
        for seed in 0..10 {
            let mut cfg = PipelineConfig::new(3000, seed);
            cfg.record_trace = true;
            let p = MatchingProcess::on_the_fly(
                3000,
                DeterministicRandomSource::with_stream(seed, MATCHING_STREAM),
            )
            .unwrap();
            let (mut run, _) = start_run(p, &cfg).unwrap();
            run.run_to(cfg.i1()).unwrap();
            let trace = run.trace().unwrap();
            // run-ending labels alternate: A2 opens a B-run, B2 closes it
            let mut expect_a2 = true;
            let mut last_ptr = cfg.i0 as u32;
            for r in trace {
                assert!(r.pointer >= last_ptr && r.pointer <= r.vertex);
                last_ptr = r.pointer;
                match r.label {
                    CaseLabel::A2a | CaseLabel::A2b => {
                        assert!(expect_a2);
                        expect_a2 = false;
                    }
                    CaseLabel::B2a | CaseLabel::B2b | CaseLabel::B2c | CaseLabel::B2d => {
                        assert!(!expect_a2);
                        expect_a2 = true;
                    }
                    CaseLabel::A1 => assert!(expect_a2),
                    CaseLabel::B1 => assert!(!expect_a2),
                }
            }
        }
    }
}
