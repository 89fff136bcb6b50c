//! The 18-state vertex type chain `Q(q1, q2, q3)`.
//!
//! States follow [`VertexType::index`]. Rows out of `A_e^(k)` and
//! `B_e^(kl)` do not depend on `e`.

use crate::rng::DeterministicRandomSource;
use crate::types::{Colour, Edge, VertexType, N_TYPES};
use num_traits::Num;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Dist18 = [f64; N_TYPES];
pub type Matrix18 = [[f64; N_TYPES]; N_TYPES];

#[derive(Debug, Error, PartialEq)]
pub enum ChainError {
    #[error("parameters out of range: q = {0:?}")]
    BadParams([f64; 3]),
    #[error("singular linear system (reducible chain?)")]
    Singular,
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("need at least {need} replicas, got {got}")]
    TooFewReplicas { need: usize, got: usize },
    #[error("gamma must lie in [0, 1), got {0}")]
    BadGamma(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub q: [f64; 3],
}

impl ChainParams {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Result<Self, ChainError> {
        let q = [q1, q2, q3];
        let ok = q.iter().all(|x| (0.0..=1.0).contains(x)) && q1 + q2 + q3 <= 1.0 + 1e-12;
        if ok {
            Ok(ChainParams { q })
        } else {
            Err(ChainError::BadParams(q))
        }
    }

    pub fn balanced(q: f64) -> Result<Self, ChainError> {
        Self::new(q / 3.0, q / 3.0, q / 3.0)
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix18 {
    pub entries: Matrix18,
}

impl TransitionMatrix18 {
    pub fn row_sums(&self) -> [f64; N_TYPES] {
        let mut out = [0.0; N_TYPES];
        for (s, row) in out.iter_mut().zip(&self.entries) {
            *s = row.iter().sum();
        }
        out
    }

    pub fn power(&self, p: usize) -> Matrix18 {
        let mut acc = identity();
        for _ in 0..p {
            acc = matmul(&acc, &self.entries);
        }
        acc
    }
}

fn identity() -> Matrix18 {
    let mut m = [[0.0; N_TYPES]; N_TYPES];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn matmul(a: &Matrix18, b: &Matrix18) -> Matrix18 {
    let mut out = [[0.0; N_TYPES]; N_TYPES];
    for i in 0..N_TYPES {
        for k in 0..N_TYPES {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..N_TYPES {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `μ Q`.
pub fn step_dist(mu: &Dist18, m: &Matrix18) -> Dist18 {
    let mut out = [0.0; N_TYPES];
    for (i, &w) in mu.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for j in 0..N_TYPES {
            out[j] += w * m[i][j];
        }
    }
    out
}

pub fn l1(a: &Dist18, b: &Dist18) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Total variation distance, `½‖μ − ν‖₁`.
pub fn tv(a: &Dist18, b: &Dist18) -> f64 {
    0.5 * l1(a, b)
}

pub fn linf(a: &Dist18, b: &Dist18) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn others(k: Colour) -> (Colour, Colour) {
    match k {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    }
}

/// Nonzero entries `(from, to, value)` of `Q(q1,q2,q3)` over any numeric
/// type (used with rationals in tests). Entries sharing a cell are summed
/// by the caller.
pub fn transition_entries<T: Num + Copy>(q: [T; 3]) -> Vec<(usize, usize, T)> {
    let two = T::one() + T::one();
    let total = q[0] + q[1] + q[2];
    let qk = |c: Colour| q[c as usize - 1];
    let a_b = |k: Colour| VertexType::A { edge: Edge::Backward, k }.index();
    let a_f = |k: Colour| VertexType::A { edge: Edge::Forward, k }.index();
    let b_b = |l: Colour, k: Colour| VertexType::B { edge: Edge::Backward, l, k }.index();
    let b_f = |l: Colour, k: Colour| VertexType::B { edge: Edge::Forward, l, k }.index();
    let mut out = Vec::new();
    for edge in [Edge::Backward, Edge::Forward] {
        for k in 1..=3 {
            let from = VertexType::A { edge, k }.index();
            let (l, m) = others(k);
            out.push((from, a_b(l), qk(m)));
            out.push((from, a_b(m), qk(l)));
            out.push((from, b_f(k, l), (T::one() - total) / two));
            out.push((from, b_f(k, m), (T::one() - total) / two));
            out.push((from, b_b(k, l), qk(k) / two));
            out.push((from, b_b(k, m), qk(k) / two));
        }
        for k in 1..=3 {
            for l in 1..=3 {
                if k == l {
                    continue;
                }
                let m = 6 - k - l;
                let from = VertexType::B { edge, l: k, k: l }.index();
                out.push((from, a_b(k), qk(m)));
                out.push((from, a_f(m), T::one() - total));
                out.push((from, b_b(k, m), qk(k)));
                out.push((from, b_b(l, m), qk(l)));
            }
        }
    }
    out
}

pub fn build_q(params: &ChainParams) -> TransitionMatrix18 {
    let mut entries = [[0.0; N_TYPES]; N_TYPES];
    for (i, j, v) in transition_entries(params.q) {
        entries[i][j] += v;
    }
    TransitionMatrix18 { entries }
}

/// Closed-form stationary law of the balanced chain.
pub fn pi_bal(q: f64) -> Dist18 {
    let mut pi = [0.0; N_TYPES];
    for (i, slot) in pi.iter_mut().enumerate() {
        *slot = match i {
            0..=2 => q / 6.0,
            3..=5 => (1.0 - q) / 6.0,
            6..=11 => q / 12.0,
            _ => (1.0 - q) / 12.0,
        };
    }
    pi
}

/// Mass of `F^(k) = {A_f^(k), B_f^(lk), B_f^(mk)}`.
pub fn forward_class_mass(pi: &Dist18, k: Colour) -> f64 {
    VertexType::all()
        .filter(|t| t.edge() == Edge::Forward && t.colour() == k)
        .map(|t| pi[t.index()])
        .sum()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, ChainError> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-14 {
            return Err(ChainError::Singular);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Stationary law by a linear solve of `π(Q − I) = 0`, `Σπ = 1`.
pub fn stationary(m: &TransitionMatrix18, tol: f64) -> Result<Dist18, ChainError> {
    let n = N_TYPES;
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            // row i of (Q − I)^T
            a[i][j] = m.entries[j][i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    a[n - 1] = vec![1.0; n];
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let x = solve_linear(a, b)?;
    let mut pi = [0.0; N_TYPES];
    pi.copy_from_slice(&x);
    let residual = l1(&step_dist(&pi, &m.entries), &pi);
    if residual > tol.max(1e-12) {
        return Err(ChainError::NoConvergence(0));
    }
    Ok(pi)
}

/// Stationary law by power iteration from the uniform law.
pub fn stationary_power(
    m: &TransitionMatrix18,
    tol: f64,
    max_iter: usize,
) -> Result<Dist18, ChainError> {
    let mut pi = [1.0 / N_TYPES as f64; N_TYPES];
    for _ in 0..max_iter {
        let next = step_dist(&pi, &m.entries);
        let s: f64 = next.iter().sum();
        let next = next.map(|x| x / s);
        if l1(&next, &pi) <= tol {
            return Ok(next);
        }
        pi = next;
    }
    Err(ChainError::NoConvergence(max_iter))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Irreducibility (strong connectivity of the positive-entry digraph) and
/// aperiodicity (period of state 0 from BFS levels).
pub fn structure_check(m: &TransitionMatrix18) -> (bool, bool) {
    let reach = |forward: bool| {
        let mut seen = [false; N_TYPES];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..N_TYPES {
                let w = if forward { m.entries[u][v] } else { m.entries[v][u] };
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    let irreducible = fwd.iter().all(|&b| b) && bwd.iter().all(|&b| b);

    // BFS levels from 0; the period divides level(u) + 1 − level(v) for
    // every edge u → v inside the class of 0
    let mut level = [usize::MAX; N_TYPES];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for v in 0..N_TYPES {
            if m.entries[u][v] > 0.0 && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut period = 0usize;
    for u in 0..N_TYPES {
        if !(fwd[u] && bwd[u]) {
            continue;
        }
        for v in 0..N_TYPES {
            if m.entries[u][v] > 0.0 && fwd[v] && bwd[v] {
                let d = (level[u] + 1) as isize - level[v] as isize;
                period = gcd(period, d.unsigned_abs());
            }
        }
    }
    (irreducible, period == 1)
}

/// `d(t) = max_V TV(δ_V Q^t, π)`.
pub fn worst_tv(rows: &Matrix18, pi: &Dist18) -> f64 {
    rows.iter().map(|r| tv(r, pi)).fold(0.0, f64::max)
}

/// Smallest `t` with `d(t) <= eps`.
pub fn mixing_time(m: &TransitionMatrix18, eps: f64, budget: usize) -> Result<usize, ChainError> {
    let pi = stationary(m, 1e-10)?;
    let mut rows = identity();
    for t in 0..=budget {
        if worst_tv(&rows, &pi) <= eps {
            return Ok(t);
        }
        rows = matmul(&rows, &m.entries);
    }
    Err(ChainError::NoConvergence(budget))
}

/// `α = Σ_{V'} min_V Q^p(V, V')` and, if positive, `ν = column minima / α`.
pub fn minorization_alpha(m: &TransitionMatrix18, power: usize) -> (f64, Option<Dist18>) {
    let p = m.power(power);
    let mut mins = [0.0; N_TYPES];
    for (j, slot) in mins.iter_mut().enumerate() {
        *slot = (0..N_TYPES).map(|i| p[i][j]).fold(f64::INFINITY, f64::min);
    }
    let alpha: f64 = mins.iter().sum();
    if alpha > 0.0 {
        (alpha, Some(mins.map(|x| x / alpha)))
    } else {
        (0.0, None)
    }
}

#[derive(Clone, Debug)]
pub struct HittingStats {
    /// `expected[x][y] = E_x[τ_y]`, zero on the diagonal.
    pub expected: Matrix18,
    /// `E_y[τ_y⁺]`.
    pub return_times: Dist18,
    /// `max_y max_{x≠y} π(y) E_x[τ_y]`.
    pub kappa: f64,
}

/// Expected hitting times by one absorbing-state solve per target.
pub fn hitting_stats(m: &TransitionMatrix18, pi: &Dist18) -> Result<HittingStats, ChainError> {
    let mut expected = [[0.0; N_TYPES]; N_TYPES];
    let mut return_times = [0.0; N_TYPES];
    let mut kappa = 0.0f64;
    for y in 0..N_TYPES {
        let idx: Vec<usize> = (0..N_TYPES).filter(|&x| x != y).collect();
        let k = idx.len();
        let mut a = vec![vec![0.0; k]; k];
        for (r, &x) in idx.iter().enumerate() {
            for (c, &z) in idx.iter().enumerate() {
                a[r][c] = if x == z { 1.0 } else { 0.0 } - m.entries[x][z];
            }
        }
        let h = solve_linear(a, vec![1.0; k])?;
        for (r, &x) in idx.iter().enumerate() {
            expected[x][y] = h[r];
            kappa = kappa.max(pi[y] * h[r]);
        }
        return_times[y] = 1.0
            + idx
                .iter()
                .map(|&z| m.entries[y][z] * expected[z][y])
                .sum::<f64>();
    }
    Ok(HittingStats {
        expected,
        return_times,
        kappa,
    })
}

/// `{0.05, 0.10, …, 0.95}`.
pub fn default_q_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

/// Largest ratio `π_bal(V') / min_V Pr_V(reach V')` at horizon 6 over the
/// grid. Backward targets use `Q_bal^6(V, V')`; forward targets use the
/// probability of hitting `V'` within 6 steps.
pub fn c_cond_estimate(grid: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &q in grid {
        let params = ChainParams::balanced(q).expect("grid inside (0,1)");
        let qb = build_q(&params);
        let pb = pi_bal(q);
        let q6 = qb.power(6);
        for target in 0..N_TYPES {
            let backward = VertexType::from_index(target).edge() == Edge::Backward;
            let min_prob = if backward {
                (0..N_TYPES).map(|v| q6[v][target]).fold(f64::INFINITY, f64::min)
            } else {
                let mut absorbing = qb.clone();
                absorbing.entries[target] = [0.0; N_TYPES];
                absorbing.entries[target][target] = 1.0;
                let h = absorbing.power(6);
                (0..N_TYPES).map(|v| h[v][target]).fold(f64::INFINITY, f64::min)
            };
            let ratio = if min_prob > 0.0 {
                pb[target] / min_prob
            } else {
                f64::INFINITY
            };
            worst = worst.max(ratio);
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub q: f64,
    pub gamma: f64,
    pub trials: usize,
    pub max_deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Samples `trials` triples with `(1−γ)q/3 < q_k < (1+γ)q/3`, `Σ q_k = q`,
/// and reports the largest `‖π − π_bal‖_∞` against `3·c_cond·γ·q`.
pub fn perturbation_check(
    q: f64,
    gamma: f64,
    trials: usize,
    c_cond: f64,
    rng: &mut DeterministicRandomSource,
) -> Result<PerturbationReport, ChainError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(ChainError::BadGamma(gamma));
    }
    let pb = pi_bal(q);
    let mut max_deviation = 0.0f64;
    for _ in 0..trials {
        let u = loop {
            let u1 = (2.0 * rng.unit() - 1.0) * gamma;
            let u2 = (2.0 * rng.unit() - 1.0) * gamma;
            let u3 = -u1 - u2;
            if gamma == 0.0 || (u1.abs() < gamma && u2.abs() < gamma && u3.abs() < gamma) {
                break [u1, u2, u3];
            }
        };
        let qs = u.map(|x| q / 3.0 * (1.0 + x));
        let params = ChainParams::new(qs[0], qs[1], qs[2])?;
        let pi = stationary(&build_q(&params), 1e-10)?;
        max_deviation = max_deviation.max(linf(&pi, &pb));
    }
    let bound = 3.0 * c_cond * gamma * q;
    Ok(PerturbationReport {
        q,
        gamma,
        trials,
        max_deviation,
        bound,
        holds: max_deviation <= bound + 1e-12,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SegmentComparison {
    /// `‖ρ̂_j − δ_{V_i} Q^j‖₁` for `j = 0..=ω`.
    pub per_step: Vec<f64>,
    pub max_l1: f64,
    pub replicas: usize,
}

pub const MIN_REPLICAS: usize = 200;

/// Compares empirical type laws `counts[j][V]` (replica counts of
/// `V_{i+j}`) with `δ_start Q^j`.
pub fn segment_comparison(
    params: &ChainParams,
    start: VertexType,
    counts: &[[u64; N_TYPES]],
) -> Result<SegmentComparison, ChainError> {
    let replicas = counts.first().map(|c| c.iter().sum::<u64>()).unwrap_or(0) as usize;
    if replicas < MIN_REPLICAS {
        return Err(ChainError::TooFewReplicas {
            need: MIN_REPLICAS,
            got: replicas,
        });
    }
    let q = build_q(params);
    let mut exact = [0.0; N_TYPES];
    exact[start.index()] = 1.0;
    let mut per_step = Vec::with_capacity(counts.len());
    for row in counts {
        let total: u64 = row.iter().sum();
        let emp = row.map(|c| c as f64 / total as f64);
        per_step.push(l1(&emp, &exact));
        exact = step_dist(&exact, &q.entries);
    }
    let max_l1 = per_step.iter().copied().fold(0.0, f64::max);
    Ok(SegmentComparison {
        per_step,
        max_l1,
        replicas,
    })
}
