//! Balanced greedy colouring of `[i0]`.

use super::{PartialColouring, PipelineError};
use crate::graph::MatchingProcess;
use crate::types::{Colour, VertexId};

pub const BATCH: usize = 7;

#[derive(Clone, Debug)]
pub struct BurnIn {
    pub colouring: PartialColouring,
    /// `max_k X_k(i0) - min_k X_k(i0)`.
    pub discrepancy: usize,
    /// `X_k(i0)` for `k = 1, 2, 3`.
    pub xk: [usize; 3],
    pub good_batches: usize,
    pub bad_batches: usize,
}

fn discrepancy(x: &[usize; 3]) -> usize {
    x.iter().max().unwrap() - x.iter().min().unwrap()
}

/// All proper colourings of a path on `len` vertices with the first vertex
/// avoiding `left` and the last avoiding `right`, in lexicographic order.
pub(crate) fn path_colourings(len: usize, left: Option<Colour>, right: Option<Colour>) -> Vec<Vec<Colour>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(
        len: usize,
        left: Option<Colour>,
        right: Option<Colour>,
        cur: &mut Vec<Colour>,
        out: &mut Vec<Vec<Colour>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in 1..=3 {
            let prev = cur.last().copied().or(left);
            if prev == Some(c) {
                continue;
            }
            if cur.len() + 1 == len && right == Some(c) {
                continue;
            }
            cur.push(c);
            rec(len, left, right, cur, out);
            cur.pop();
        }
    }
    rec(len, left, right, &mut cur, &mut out);
    out
}

/// Reveals steps `1..=i0`, then colours `[i0]` batch by batch.
///
/// A batch is good when it has all 7 vertices and each has `p(j) > i0`.
/// Bad batches are coloured first, in index order, with the smallest free
/// colour. Good batches follow in index order; each takes the proper path
/// colouring (consistent with its coloured boundary neighbours) that
/// minimises the resulting discrepancy, ties to the lexicographically
/// smallest sequence.
pub fn balanced_greedy_burn_in(
    process: &mut MatchingProcess,
    i0: usize,
) -> Result<BurnIn, PipelineError> {
    if i0 < BATCH {
        return Err(PipelineError::BurnInTooShort(i0));
    }
    if process.step() != 0 {
        return Err(PipelineError::Config(format!(
            "burn-in expects a fresh process, found step {}",
            process.step()
        )));
    }
    let n = process.n();
    if i0 >= n {
        return Err(PipelineError::Config(format!("i0 = {i0} must be below n = {n}")));
    }
    for _ in 0..i0 {
        process.reveal_step()?;
    }

    let batches: Vec<(VertexId, VertexId)> = (0..i0.div_ceil(BATCH))
        .map(|b| (b * BATCH + 1, ((b + 1) * BATCH).min(i0)))
        .collect();
    let is_good = |&(lo, hi): &(VertexId, VertexId)| {
        hi - lo + 1 == BATCH && (lo..=hi).all(|j| process.is_unsaturated(j))
    };
    let good: Vec<bool> = batches.iter().map(is_good).collect();

    let mut colouring = PartialColouring::new(n);
    let mut xk = [0usize; 3];

    for (batch, _) in batches.iter().zip(&good).filter(|(_, &g)| !g) {
        for v in batch.0..=batch.1 {
            let mut used = 0u8;
            let mut nbrs = vec![if v == 1 { n } else { v - 1 }, v + 1];
            if let Some(p) = process.revealed_partner(v) {
                nbrs.push(p);
            }
            for w in nbrs {
                if let Some(c) = colouring.get(w) {
                    used |= 1 << (c - 1);
                }
            }
            let free = 0b111 & !used;
            if free == 0 {
                return Err(PipelineError::Corrupt {
                    vertex: v,
                    detail: "no free colour in bad batch".into(),
                });
            }
            let c = free.trailing_zeros() as Colour + 1;
            colouring.set(v, c);
            if process.is_unsaturated(v) {
                xk[c as usize - 1] += 1;
            }
        }
    }

    for (batch, _) in batches.iter().zip(&good).filter(|(_, &g)| g) {
        let (lo, hi) = *batch;
        let left = if lo > 1 { colouring.get(lo - 1) } else { None };
        let right = if hi < i0 { colouring.get(hi + 1) } else { None };
        let mut best: Option<(usize, Vec<Colour>)> = None;
        for cand in path_colourings(BATCH, left, right) {
            let mut x = xk;
            for &c in &cand {
                x[c as usize - 1] += 1;
            }
            let d = discrepancy(&x);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, cand));
            }
        }
        let (_, chosen) = best.ok_or_else(|| PipelineError::Corrupt {
            vertex: lo,
            detail: "no proper colouring of good batch".into(),
        })?;
        for (offset, &c) in chosen.iter().enumerate() {
            colouring.set(lo + offset, c);
            xk[c as usize - 1] += 1;
        }
    }

    let good_batches = good.iter().filter(|&&g| g).count();
    Ok(BurnIn {
        colouring,
        discrepancy: discrepancy(&xk),
        xk,
        good_batches,
        bad_batches: batches.len() - good_batches,
    })
}
