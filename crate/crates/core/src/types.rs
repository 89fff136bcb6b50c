//! Shared vocabulary: vertex ids, colours, the 18 vertex types and
//! trajectory samples.

use serde::{Deserialize, Serialize};
use std::fmt;

/// 1-based vertex id.
pub type VertexId = usize;

/// Colour in `1..=3`; 0 marks "uncoloured" in dense vectors.
pub type Colour = u8;

/// The colour in `{1,2,3}` different from both `a` and `b` (`a != b`).
pub fn third_colour(a: Colour, b: Colour) -> Colour {
    debug_assert!(a != b && (1..=3).contains(&a) && (1..=3).contains(&b));
    6 - a - b
}

/// The two colours of `{1,2,3}` other than `c`, ascending.
pub fn other_colours(c: Colour) -> [Colour; 2] {
    match c {
        1 => [2, 3],
        2 => [1, 3],
        3 => [1, 2],
        _ => panic!("colour out of range: {c}"),
    }
}

/// Direction of a vertex's matching edge relative to its own index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Edge {
    Backward,
    Forward,
}

/// One of the 18 vertex types.
///
/// `A { edge, k }` is a vertex at the head of an A-run with colour `k`.
/// `B { edge, l, k }` is a vertex inside a B-run with colour `k`; for a
/// backward edge `l` is the partner's colour, for a forward edge `l` is the
/// colour of the previous vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexType {
    A { edge: Edge, k: Colour },
    B { edge: Edge, l: Colour, k: Colour },
}

pub const N_TYPES: usize = 18;

fn pair_offset(l: Colour, k: Colour) -> usize {
    debug_assert!(l != k);
    2 * (l as usize - 1) + (k as usize - 1) - usize::from(k > l)
}

impl VertexType {
    /// Canonical index: `A_b` 0..2, `A_f` 3..5, `B_b` 6..11 and `B_f`
    /// 12..17, superscripts in order 12,13,21,23,31,32.
    pub fn index(self) -> usize {
        match self {
            VertexType::A { edge, k } => {
                let base = if edge == Edge::Backward { 0 } else { 3 };
                base + k as usize - 1
            }
            VertexType::B { edge, l, k } => {
                let base = if edge == Edge::Backward { 6 } else { 12 };
                base + pair_offset(l, k)
            }
        }
    }

    pub fn from_index(i: usize) -> VertexType {
        const PAIRS: [(Colour, Colour); 6] = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];
        match i {
            0..=2 => VertexType::A { edge: Edge::Backward, k: i as Colour + 1 },
            3..=5 => VertexType::A { edge: Edge::Forward, k: i as Colour - 2 },
            6..=11 => {
                let (l, k) = PAIRS[i - 6];
                VertexType::B { edge: Edge::Backward, l, k }
            }
            12..=17 => {
                let (l, k) = PAIRS[i - 12];
                VertexType::B { edge: Edge::Forward, l, k }
            }
            _ => panic!("type index out of range: {i}"),
        }
    }

    pub fn all() -> impl Iterator<Item = VertexType> {
        (0..N_TYPES).map(VertexType::from_index)
    }

    pub fn colour(self) -> Colour {
        match self {
            VertexType::A { k, .. } | VertexType::B { k, .. } => k,
        }
    }

    pub fn edge(self) -> Edge {
        match self {
            VertexType::A { edge, .. } | VertexType::B { edge, .. } => edge,
        }
    }

    pub fn is_a(self) -> bool {
        matches!(self, VertexType::A { .. })
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |edge: Edge| if edge == Edge::Backward { 'b' } else { 'f' };
        match *self {
            VertexType::A { edge, k } => write!(f, "A_{}^({})", e(edge), k),
            VertexType::B { edge, l, k } => write!(f, "B_{}^({}{})", e(edge), l, k),
        }
    }
}

/// One row of a trajectory: state after processing vertex `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub step: usize,
    pub x: usize,
    pub x1: usize,
    pub x2: usize,
    pub x3: usize,
    pub s_size: usize,
    pub bc: usize,
    pub buc: usize,
    pub bud: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub n: usize,
    pub samples: Vec<TrajectorySample>,
}

impl TrajectoryRecord {
    /// Checks `X = X1+X2+X3` everywhere and monotonicity of `|S|` and the
    /// ledgers.
    pub fn is_consistent(&self) -> bool {
        let sums = self.samples.iter().all(|s| s.x == s.x1 + s.x2 + s.x3);
        let mono = self.samples.windows(2).all(|w| {
            w[0].step < w[1].step
                && w[0].s_size <= w[1].s_size
                && w[0].bc <= w[1].bc
                && w[0].buc <= w[1].buc
                && w[0].bud <= w[1].bud
        });
        sums && mono
    }
}
