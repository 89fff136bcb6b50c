//! Colouring the tail `(i1, n]` around an induced even cycle.

use super::{CompletionMode, PartialColouring, PipelineError};
use crate::graph::CubicMultigraph;
use crate::types::{Colour, VertexId};

/// Node budget for the backtracking fallback.
pub const BACKTRACK_BUDGET: u64 = 5_000_000;

/// First interval `{l..r}` inside `(i1, n]` with `p(l) = r`, `r - l` odd
/// and at least 3, and every interior partner outside the interval.
pub fn find_even_interval(graph: &CubicMultigraph, i1: VertexId) -> Option<(VertexId, VertexId)> {
    let n = graph.n();
    for l in i1 + 1..=n {
        let r = graph.partner(l);
        if r <= l || (r - l).is_multiple_of(2) || r - l < 3 {
            continue;
        }
        if (l + 1..r).all(|v| {
            let p = graph.partner(v);
            p < l || p > r
        }) {
            return Some((l, r));
        }
    }
    None
}

/// Proper colouring of the cycle `v_0 v_1 … v_{L-1} v_0` with `v_t`
/// coloured from `lists[t]`.
pub fn list_colour_even_cycle(lists: &[[Colour; 2]]) -> Result<Vec<Colour>, PipelineError> {
    let len = lists.len();
    if len < 4 || len % 2 == 1 {
        return Err(PipelineError::BadCycle(len));
    }
    let normal = |l: &[Colour; 2]| {
        let mut s = *l;
        s.sort_unstable();
        s
    };
    let differ = (0..len).find(|&t| normal(&lists[t]) != normal(&lists[(t + 1) % len]));
    let mut out = vec![0; len];
    match differ {
        None => {
            let [a, b] = normal(&lists[0]);
            for (t, slot) in out.iter_mut().enumerate() {
                *slot = if t % 2 == 0 { a } else { b };
            }
        }
        Some(t) => {
            // start just after t with a colour t cannot use, then walk
            // round the cycle ending at t
            let s = (t + 1) % len;
            let start = lists[s]
                .iter()
                .copied()
                .find(|c| !lists[t].contains(c))
                .expect("distinct 2-lists");
            out[s] = start;
            for step in 1..len {
                let u = (s + step) % len;
                let prev = out[(u + len - 1) % len];
                let next_fixed = if u == t { Some(start) } else { None };
                let c = lists[u]
                    .iter()
                    .copied()
                    .find(|&c| c != prev && Some(c) != next_fixed);
                match c {
                    Some(c) => out[u] = c,
                    None => return backtrack_cycle(lists),
                }
            }
        }
    }
    if cycle_ok(lists, &out) {
        Ok(out)
    } else {
        backtrack_cycle(lists)
    }
}

fn cycle_ok(lists: &[[Colour; 2]], out: &[Colour]) -> bool {
    let len = lists.len();
    (0..len).all(|t| lists[t].contains(&out[t]) && out[t] != out[(t + 1) % len])
}

fn backtrack_cycle(lists: &[[Colour; 2]]) -> Result<Vec<Colour>, PipelineError> {
    let len = lists.len();
    let mut out = vec![0; len];
    fn rec(lists: &[[Colour; 2]], out: &mut [Colour], t: usize) -> bool {
        let len = lists.len();
        if t == len {
            return out[len - 1] != out[0];
        }
        for &c in &lists[t] {
            if t > 0 && out[t - 1] == c {
                continue;
            }
            out[t] = c;
            if rec(lists, out, t + 1) {
                return true;
            }
        }
        false
    }
    if rec(lists, &mut out, 0) {
        Ok(out)
    } else {
        Err(PipelineError::Corrupt {
            vertex: 0,
            detail: "even cycle with 2-lists has no list colouring".into(),
        })
    }
}

fn greedy(graph: &CubicMultigraph, colouring: &mut PartialColouring, v: VertexId) -> bool {
    let free = colouring.free_mask(graph, v);
    if free == 0 {
        return false;
    }
    colouring.set(v, free.trailing_zeros() as Colour + 1);
    true
}

/// Colours `(i1, n]` given a proper colouring of `[i1]`.
///
/// With an even interval `{l..r}`: forward greedy on `(i1, l)`, reverse
/// greedy on `(r, n]`, then list colouring of the interval. Without one, or
/// if a greedy step gets stuck, backtracking over the whole tail.
pub fn completion_phase(
    graph: &CubicMultigraph,
    colouring: PartialColouring,
    i1: VertexId,
) -> (PartialColouring, CompletionMode) {
    let n = graph.n();
    if let Some((l, r)) = find_even_interval(graph, i1) {
        let mut col = colouring.clone();
        let mut ok = (i1 + 1..l).all(|v| greedy(graph, &mut col, v));
        ok = ok && (r + 1..=n).rev().all(|v| greedy(graph, &mut col, v));
        if ok {
            let lists: Vec<[Colour; 2]> = (l..=r)
                .map(|v| {
                    let free = col.free_mask(graph, v);
                    let a = free.trailing_zeros() as Colour + 1;
                    let rest = free & !(1 << (a - 1));
                    [a, rest.trailing_zeros() as Colour + 1]
                })
                .collect();
            let lists_valid = (l..=r).all(|v| col.free_mask(graph, v).count_ones() == 2);
            if lists_valid {
                if let Ok(colours) = list_colour_even_cycle(&lists) {
                    for (offset, c) in colours.into_iter().enumerate() {
                        col.set(l + offset, c);
                    }
                    if col.is_total() && col.is_proper_on(graph) {
                        return (col, CompletionMode::EvenCycleInterval);
                    }
                }
            }
        }
    }
    let order: Vec<VertexId> = (i1 + 1..=n).rev().collect();
    match backtrack_colour(graph, colouring.clone(), &order, BACKTRACK_BUDGET) {
        Some(col) => (col, CompletionMode::BacktrackFallback),
        None => (colouring, CompletionMode::Failed),
    }
}

/// Depth-first search over `order`, each vertex trying its free colours in
/// ascending order. Gives up after `budget` assignments.
pub fn backtrack_colour(
    graph: &CubicMultigraph,
    mut colouring: PartialColouring,
    order: &[VertexId],
    budget: u64,
) -> Option<PartialColouring> {
    // next colour to try (1..=3, 4 = exhausted) per depth
    let mut next = vec![1u8; order.len()];
    let mut depth = 0usize;
    let mut spent = 0u64;
    while depth < order.len() {
        let v = order[depth];
        colouring.clear(v);
        let free = colouring.free_mask(graph, v);
        let mut placed = false;
        while next[depth] <= 3 {
            let c = next[depth];
            next[depth] += 1;
            if free & (1 << (c - 1)) != 0 {
                colouring.set(v, c);
                placed = true;
                break;
            }
        }
        if placed {
            spent += 1;
            if spent > budget {
                return None;
            }
            depth += 1;
            if depth < order.len() {
                next[depth] = 1;
            }
        } else {
            if depth == 0 {
                return None;
            }
            depth -= 1;
        }
    }
    Some(colouring)
}
