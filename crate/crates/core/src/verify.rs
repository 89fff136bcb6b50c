//! Colouring and Sudoku-set certificates, bound formulas, and exact solvers
//! for small graphs.
//!
//! Everything here works on [`AdjGraph`], with 0-based vertex indices
//! (`index = id - 1`). Colourings are dense `u8` slices, 0 = uncoloured.
//! Sets are boolean masks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("edge endpoint {0} out of range for n = {1}")]
    OutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} is uncoloured")]
    Uncoloured(usize),
    #[error("colour {colour} at vertex {vertex} exceeds k = {k}")]
    ColourRange { vertex: usize, colour: u8, k: u8 },
    #[error("length mismatch: graph has {graph} vertices, input has {input}")]
    Length { graph: usize, input: usize },
    #[error("graph has {n} vertices, guard allows at most {guard}")]
    GuardExceeded { n: usize, guard: usize },
    #[error("need chi >= 2, got {0}")]
    ChiTooSmall(u32),
    #[error("need d >= 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("graph has no proper {0}-colouring")]
    NotColourable(u8),
    #[error("k must be in 1..=32, got {0}")]
    BadK(u8),
}

/// Undirected multigraph as adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl AdjGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, VerifyError> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n {
                return Err(VerifyError::OutOfRange(a, n));
            }
            if b >= n {
                return Err(VerifyError::OutOfRange(b, n));
            }
            if a == b {
                return Err(VerifyError::SelfLoop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        Ok(AdjGraph {
            n,
            adj,
            m: edges.len(),
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|a| (a - 1, a)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Two triangles `{0,1,2}`, `{3,4,5}` joined by `0-3, 1-4, 2-5`.
    pub fn prism() -> Self {
        Self::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge list with `a < b` (multi-edges repeated), in adjacency order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for a in 0..self.n {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerificationStatus {
    UniqueByPropagation,
    UniqueByExactCount,
    NotUnique(u64),
    Contradiction,
    Unknown,
}

impl VerificationStatus {
    pub fn is_unique(&self) -> bool {
        matches!(
            self,
            VerificationStatus::UniqueByPropagation | VerificationStatus::UniqueByExactCount
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub status: VerificationStatus,
    /// Vertices in the order propagation coloured them.
    pub forced_order: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lb_edges: i64,
    pub lb_regular: i64,
    pub ub_independence: i64,
}

/// Default size guard for [`count_extensions`].
pub const COUNT_GUARD: usize = 60;
/// Default size guard for [`min_sudoku_exact`].
pub const MIN_SUDOKU_GUARD: usize = 14;
/// Default size guard for [`max_independent_exact`].
pub const INDEPENDENT_GUARD: usize = 40;

fn check_len(graph: &AdjGraph, len: usize) -> Result<(), VerifyError> {
    if graph.n != len {
        return Err(VerifyError::Length {
            graph: graph.n,
            input: len,
        });
    }
    Ok(())
}

fn check_k(k: u8) -> Result<(), VerifyError> {
    if k == 0 || k > 32 {
        return Err(VerifyError::BadK(k));
    }
    Ok(())
}

/// True iff no edge is monochromatic. Every vertex must be coloured from
/// `1..=k`.
pub fn check_proper(graph: &AdjGraph, colouring: &[u8], k: u8) -> Result<bool, VerifyError> {
    check_len(graph, colouring.len())?;
    for (v, &c) in colouring.iter().enumerate() {
        if c == 0 {
            return Err(VerifyError::Uncoloured(v));
        }
        if c > k {
            return Err(VerifyError::ColourRange {
                vertex: v,
                colour: c,
                k,
            });
        }
    }
    Ok(graph
        .edges()
        .iter()
        .all(|&(a, b)| colouring[a] != colouring[b]))
}

/// True iff no edge with both ends coloured is monochromatic.
pub fn is_partial_proper(graph: &AdjGraph, partial: &[u8]) -> bool {
    graph
        .edges()
        .iter()
        .all(|&(a, b)| partial[a] == 0 || partial[a] != partial[b])
}

enum Propagation {
    Done,
    Stalled,
    Contradiction,
}

/// Unit propagation in place: any uncoloured vertex whose coloured
/// neighbours use exactly `k-1` colours gets the remaining one.
fn propagate_in_place(
    graph: &AdjGraph,
    colours: &mut [u8],
    k: u8,
    order: &mut Vec<usize>,
) -> Propagation {
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut seen = vec![0u32; graph.n];
    for v in 0..graph.n {
        if colours[v] == 0 {
            for &w in &graph.adj[v] {
                if colours[w] != 0 {
                    seen[v] |= 1 << (colours[w] - 1);
                }
            }
        }
    }
    let mut queue: Vec<usize> = (0..graph.n).filter(|&v| colours[v] == 0).collect();
    queue.reverse();
    while let Some(v) = queue.pop() {
        if colours[v] != 0 {
            continue;
        }
        let free = full & !seen[v];
        if free == 0 {
            return Propagation::Contradiction;
        }
        if free.count_ones() == 1 {
            let c = free.trailing_zeros() as u8 + 1;
            colours[v] = c;
            order.push(v);
            for &w in &graph.adj[v] {
                if colours[w] == 0 {
                    seen[w] |= 1 << (c - 1);
                    queue.push(w);
                }
            }
        }
    }
    if colours.iter().all(|&c| c != 0) {
        Propagation::Done
    } else {
        Propagation::Stalled
    }
}

/// Forced-colour propagation from `partial`.
pub fn propagate_forced(
    graph: &AdjGraph,
    partial: &[u8],
    k: u8,
) -> Result<(Vec<u8>, VerificationResult), VerifyError> {
    check_len(graph, partial.len())?;
    check_k(k)?;
    let mut colours = partial.to_vec();
    let mut order = Vec::new();
    let status = match propagate_in_place(graph, &mut colours, k, &mut order) {
        Propagation::Done => VerificationStatus::UniqueByPropagation,
        Propagation::Stalled => VerificationStatus::Unknown,
        Propagation::Contradiction => VerificationStatus::Contradiction,
    };
    Ok((
        colours,
        VerificationResult {
            status,
            forced_order: Some(order),
        },
    ))
}

/// Number of proper `k`-colourings extending `partial`, stopping at `cap`
/// when given. Refuses graphs larger than `guard`.
pub fn count_extensions(
    graph: &AdjGraph,
    partial: &[u8],
    k: u8,
    cap: Option<u64>,
    guard: usize,
) -> Result<u64, VerifyError> {
    check_len(graph, partial.len())?;
    check_k(k)?;
    if graph.n > guard {
        return Err(VerifyError::GuardExceeded { n: graph.n, guard });
    }
    if !is_partial_proper(graph, partial) {
        return Ok(0);
    }
    let mut count = 0u64;
    count_rec(graph, partial.to_vec(), k, cap, &mut count);
    Ok(count)
}

fn count_rec(graph: &AdjGraph, mut colours: Vec<u8>, k: u8, cap: Option<u64>, count: &mut u64) {
    if cap.is_some_and(|c| *count >= c) {
        return;
    }
    let mut scratch = Vec::new();
    match propagate_in_place(graph, &mut colours, k, &mut scratch) {
        Propagation::Contradiction => return,
        Propagation::Done => {
            *count += 1;
            return;
        }
        Propagation::Stalled => {}
    }
    // branch on the uncoloured vertex with fewest admissible colours
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut best: Option<(usize, u32)> = None;
    for v in 0..graph.n {
        if colours[v] != 0 {
            continue;
        }
        let mut seen = 0u32;
        for &w in &graph.adj[v] {
            if colours[w] != 0 {
                seen |= 1 << (colours[w] - 1);
            }
        }
        let free = full & !seen;
        if best.is_none_or(|(_, f)| free.count_ones() < f.count_ones()) {
            best = Some((v, free));
        }
    }
    let (v, free) = best.expect("stalled propagation leaves an uncoloured vertex");
    let mut bits = free;
    while bits != 0 {
        let c = bits.trailing_zeros() as u8 + 1;
        bits &= bits - 1;
        let mut next = colours.clone();
        next[v] = c;
        count_rec(graph, next, k, cap, count);
        if cap.is_some_and(|cp| *count >= cp) {
            return;
        }
    }
}

/// Whether `colouring` restricted to `in_s` extends uniquely (and to
/// `colouring` itself). Falls back to exact counting when propagation
/// stalls and `graph.n() <= guard`.
pub fn is_sudoku_set(
    graph: &AdjGraph,
    colouring: &[u8],
    in_s: &[bool],
    k: u8,
    guard: usize,
) -> Result<VerificationResult, VerifyError> {
    check_len(graph, colouring.len())?;
    check_len(graph, in_s.len())?;
    let partial: Vec<u8> = colouring
        .iter()
        .zip(in_s)
        .map(|(&c, &s)| if s { c } else { 0 })
        .collect();
    let (extended, result) = propagate_forced(graph, &partial, k)?;
    match result.status {
        VerificationStatus::UniqueByPropagation => {
            if extended == colouring {
                Ok(result)
            } else {
                // forced values disagree with the reference colouring, so
                // the reference is not an extension at all
                Ok(VerificationResult {
                    status: VerificationStatus::Contradiction,
                    forced_order: result.forced_order,
                })
            }
        }
        VerificationStatus::Contradiction => Ok(result),
        _ => {
            if graph.n > guard {
                return Ok(VerificationResult {
                    status: VerificationStatus::Unknown,
                    forced_order: result.forced_order,
                });
            }
            let count = count_extensions(graph, &extended, k, Some(2), guard)?;
            let status = match count {
                0 => VerificationStatus::Contradiction,
                1 => VerificationStatus::UniqueByExactCount,
                c => VerificationStatus::NotUnique(c),
            };
            Ok(VerificationResult {
                status,
                forced_order: result.forced_order,
            })
        }
    }
}

/// Greedy strong order of `V \ S`: each next vertex sees `k-1` distinct
/// colours among `S` and the vertices before it.
pub fn strong_order(graph: &AdjGraph, colouring: &[u8], in_s: &[bool], k: u8) -> Option<Vec<usize>> {
    if graph.n != colouring.len() || graph.n != in_s.len() {
        return None;
    }
    let mut fixed = in_s.to_vec();
    let mut seen = vec![0u32; graph.n];
    for v in 0..graph.n {
        if fixed[v] {
            for &w in &graph.adj[v] {
                seen[w] |= 1 << (colouring[v] - 1);
            }
        }
    }
    let ready = |v: usize, seen: &[u32]| seen[v].count_ones() + 1 == u32::from(k);
    let mut queue: Vec<usize> = (0..graph.n).rev().filter(|&v| !fixed[v]).collect();
    let mut order = Vec::new();
    let mut remaining = queue.len();
    while let Some(v) = queue.pop() {
        if fixed[v] || !ready(v, &seen) {
            continue;
        }
        fixed[v] = true;
        order.push(v);
        remaining -= 1;
        for &w in &graph.adj[v] {
            seen[w] |= 1 << (colouring[v] - 1);
            if !fixed[w] && ready(w, &seen) {
                queue.push(w);
            }
        }
    }
    (remaining == 0).then_some(order)
}

/// True iff `G - S` is a forest (a surviving multi-edge is a cycle).
pub fn is_decycling(graph: &AdjGraph, in_s: &[bool]) -> bool {
    let mut parent: Vec<usize> = (0..graph.n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in graph.edges() {
        if in_s[a] || in_s[b] {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

fn ceil_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    num.div_euclid(den) + i64::from(num.rem_euclid(den) != 0)
}

/// Lower bounds from edge counting and for `d`-regular graphs with
/// `chi = d`, and the independence upper bound.
pub fn bounds_report(
    n_vertices: u64,
    n_edges: u64,
    d: u32,
    chi: u32,
    alpha: u64,
) -> Result<BoundsReport, VerifyError> {
    if chi < 2 {
        return Err(VerifyError::ChiTooSmall(chi));
    }
    if d < 2 {
        return Err(VerifyError::DegreeTooSmall(d));
    }
    let (n, m, d, chi, alpha) = (
        n_vertices as i64,
        n_edges as i64,
        d as i64,
        chi as i64,
        alpha as i64,
    );
    // ⌈n − m/(χ−1)⌉ = n − ⌊m/(χ−1)⌋
    let lb_edges = n - m.div_euclid(chi - 1);
    let lb_regular = ceil_div((d - 2) * n + 2 + (d - 2) * (d - 3), 2 * (d - 1));
    Ok(BoundsReport {
        lb_edges,
        lb_regular,
        ub_independence: (chi - 1) * alpha,
    })
}

/// Smallest Sudoku set of `graph` for `k` colours, with a witness
/// `(S as 0-based indices, partial colouring)`.
pub fn min_sudoku_exact(
    graph: &AdjGraph,
    k: u8,
    guard: usize,
) -> Result<(usize, Vec<usize>, Vec<u8>), VerifyError> {
    check_k(k)?;
    let n = graph.n;
    if n > guard {
        return Err(VerifyError::GuardExceeded { n, guard });
    }
    for size in 0..=n {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if let Some(partial) = unique_colouring_on(graph, &subset, k) {
                return Ok((size, subset, partial));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Err(VerifyError::NotColourable(k))
}

/// Tries every colouring of `subset` up to colour permutation (restricted
/// growth order) and returns one with a unique extension.
fn unique_colouring_on(graph: &AdjGraph, subset: &[usize], k: u8) -> Option<Vec<u8>> {
    let s = subset.len();
    let mut assign = vec![0u8; s];
    fn rec(
        graph: &AdjGraph,
        subset: &[usize],
        k: u8,
        pos: usize,
        max_used: u8,
        assign: &mut Vec<u8>,
        partial: &mut Vec<u8>,
    ) -> Option<Vec<u8>> {
        if pos == subset.len() {
            let count = count_extensions(graph, partial, k, Some(2), usize::MAX).ok()?;
            return (count == 1).then(|| partial.clone());
        }
        let v = subset[pos];
        let limit = (max_used + 1).min(k);
        for c in 1..=limit {
            if graph.adj[v].iter().any(|&w| partial[w] == c) {
                continue;
            }
            assign[pos] = c;
            partial[v] = c;
            if let Some(found) = rec(graph, subset, k, pos + 1, max_used.max(c), assign, partial) {
                return Some(found);
            }
            partial[v] = 0;
        }
        None
    }
    let mut partial = vec![0u8; graph.n];
    rec(graph, subset, k, 0, 0, &mut assign, &mut partial)
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let s = subset.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if subset[i] < n - s + i {
            subset[i] += 1;
            for j in i + 1..s {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Independence number by branch and bound over 64-bit vertex masks.
pub fn max_independent_exact(graph: &AdjGraph, guard: usize) -> Result<usize, VerifyError> {
    let n = graph.n;
    let guard = guard.min(64);
    if n > guard {
        return Err(VerifyError::GuardExceeded { n, guard });
    }
    let nbr: Vec<u64> = (0..n)
        .map(|v| graph.adj[v].iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    fn rec(nbr: &[u64], cand: u64, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        // branch on the candidate with most candidate neighbours
        let mut v = cand.trailing_zeros() as usize;
        let mut deg = (nbr[v] & cand).count_ones();
        let mut bits = cand;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (nbr[w] & cand).count_ones();
            if d > deg {
                v = w;
                deg = d;
            }
        }
        let without_v = cand & !(1u64 << v);
        if deg == 0 {
            rec(nbr, without_v, size + 1, best);
            return;
        }
        rec(nbr, without_v & !nbr[v], size + 1, best);
        rec(nbr, without_v, size, best);
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    rec(&nbr, all, 0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> AdjGraph {
        AdjGraph::complete(3)
    }

    /// Proper k-colourings extending `partial`, by full enumeration.
    fn brute_count(graph: &AdjGraph, partial: &[u8], k: u8) -> u64 {
        let n = graph.n();
        let total = (k as u64).pow(n as u32);
        let mut count = 0;
        let mut col = vec![0u8; n];
        for code in 0..total {
            let mut c = code;
            for slot in col.iter_mut() {
                *slot = (c % k as u64) as u8 + 1;
                c /= k as u64;
            }
            if partial.iter().zip(&col).any(|(&p, &x)| p != 0 && p != x) {
                continue;
            }
            if check_proper(graph, &col, k).unwrap() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn proper_examples() {
        assert!(check_proper(&AdjGraph::cycle(4), &[1, 2, 1, 2], 2).unwrap());
        assert!(!check_proper(&triangle(), &[1, 1, 2], 3).unwrap());
        assert_eq!(
            check_proper(&triangle(), &[1, 0, 2], 3),
            Err(VerifyError::Uncoloured(1))
        );
    }

    #[test]
    fn propagation_examples() {
        let path = AdjGraph::path(3);
        let (ext, res) = propagate_forced(&path, &[1, 0, 2], 3).unwrap();
        assert_eq!(ext, vec![1, 3, 2]);
        assert_eq!(res.status, VerificationStatus::UniqueByPropagation);
        assert_eq!(res.forced_order, Some(vec![1]));

        let (_, res) = propagate_forced(&triangle(), &[1, 0, 0], 3).unwrap();
        assert_eq!(res.status, VerificationStatus::Unknown);

        // vertex 1 sees 1 and 2, vertex 3 sees 1 and 2 too but is adjacent to 1
        let k4 = AdjGraph::complete(4);
        let (_, res) = propagate_forced(&k4, &[1, 0, 2, 0], 3).unwrap();
        assert_eq!(res.status, VerificationStatus::Contradiction);
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_extensions(&triangle(), &[0, 0, 0], 3, None, COUNT_GUARD).unwrap(),
            6
        );
        assert_eq!(
            count_extensions(&AdjGraph::cycle(4), &[1, 0, 0, 0], 2, None, COUNT_GUARD).unwrap(),
            1
        );
        assert_eq!(
            count_extensions(&triangle(), &[0, 0, 0], 3, Some(2), COUNT_GUARD).unwrap(),
            2
        );
        let big = AdjGraph::cycle(61);
        assert_eq!(
            count_extensions(&big, &[0; 61], 3, Some(2), COUNT_GUARD),
            Err(VerifyError::GuardExceeded { n: 61, guard: 60 })
        );
    }

    #[test]
    fn prism_colouring_count_matches_enumeration() {
        let prism = AdjGraph::prism();
        let oracle = brute_count(&prism, &[0; 6], 3);
        assert_eq!(
            count_extensions(&prism, &[0; 6], 3, None, COUNT_GUARD).unwrap(),
            oracle
        );
        // regression constant from the 3^6 enumeration above
        assert_eq!(oracle, 12);
    }

    #[test]
    fn sudoku_set_examples() {
        let t = triangle();
        let res = is_sudoku_set(&t, &[1, 2, 3], &[true; 3], 3, COUNT_GUARD).unwrap();
        assert_eq!(res.status, VerificationStatus::UniqueByPropagation);
        let res = is_sudoku_set(&t, &[1, 2, 3], &[true, false, false], 3, COUNT_GUARD).unwrap();
        assert_eq!(res.status, VerificationStatus::NotUnique(2));
        let res = is_sudoku_set(&t, &[1, 2, 3], &[true, true, false], 3, COUNT_GUARD).unwrap();
        assert_eq!(res.status, VerificationStatus::UniqueByPropagation);
    }

    #[test]
    fn strong_order_examples() {
        let t = triangle();
        assert_eq!(strong_order(&t, &[1, 2, 3], &[true; 3], 3), Some(vec![]));
        assert_eq!(strong_order(&t, &[1, 2, 3], &[true, false, false], 3), None);
        assert_eq!(
            strong_order(&t, &[1, 2, 3], &[true, true, false], 3),
            Some(vec![2])
        );
    }

    #[test]
    fn decycling_examples() {
        let c = AdjGraph::cycle(5);
        assert!(is_decycling(&c, &[true; 5]));
        assert!(!is_decycling(&c, &[false; 5]));
        assert!(is_decycling(&c, &[true, false, false, false, false]));
        // a doubled edge between two survivors is a cycle
        let g = AdjGraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert!(!is_decycling(&g, &[false; 3]));
        assert!(is_decycling(&g, &[true, false, false]));
    }

    #[test]
    fn bounds_examples() {
        let b = bounds_report(70, 105, 3, 3, 0).unwrap();
        assert_eq!(b.lb_regular, 18);
        let b = bounds_report(60, 90, 3, 3, 25).unwrap();
        assert_eq!(b.lb_edges, 15);
        assert_eq!(b.lb_regular, 16);
        assert_eq!(b.ub_independence, 50);
        let b = bounds_report(6, 9, 3, 3, 2).unwrap();
        assert_eq!(b.lb_regular, 2);
        assert_eq!(bounds_report(6, 9, 3, 1, 2), Err(VerifyError::ChiTooSmall(1)));
    }

    #[test]
    fn min_sudoku_examples() {
        let (s, set, partial) = min_sudoku_exact(&AdjGraph::complete(4), 4, MIN_SUDOKU_GUARD).unwrap();
        assert_eq!(s, 3);
        assert_eq!(set.len(), 3);
        assert_eq!(
            count_extensions(&AdjGraph::complete(4), &partial, 4, None, COUNT_GUARD).unwrap(),
            1
        );
        let (s, _, _) = min_sudoku_exact(&AdjGraph::cycle(4), 2, MIN_SUDOKU_GUARD).unwrap();
        assert_eq!(s, 1);
        let (s, _, partial) = min_sudoku_exact(&AdjGraph::prism(), 3, MIN_SUDOKU_GUARD).unwrap();
        assert!((2..=3).contains(&s));
        assert_eq!(brute_count(&AdjGraph::prism(), &partial, 3), 1);
        assert_eq!(
            min_sudoku_exact(&AdjGraph::cycle(16), 3, MIN_SUDOKU_GUARD),
            Err(VerifyError::GuardExceeded { n: 16, guard: 14 })
        );
    }

    #[test]
    fn independence_examples() {
        assert_eq!(max_independent_exact(&triangle(), INDEPENDENT_GUARD).unwrap(), 1);
        assert_eq!(max_independent_exact(&AdjGraph::cycle(6), INDEPENDENT_GUARD).unwrap(), 3);
        assert_eq!(max_independent_exact(&AdjGraph::prism(), INDEPENDENT_GUARD).unwrap(), 2);
        assert_eq!(max_independent_exact(&AdjGraph::cycle(7), INDEPENDENT_GUARD).unwrap(), 3);
    }
}
