use cubic_sudoku::chain::{
    build_q, l1, pi_bal, stationary, stationary_power, step_dist, structure_check, transition_entries, tv,
    ChainParams, TransitionMatrix18,
};
use cubic_sudoku::colouring::list_colour_even_cycle;
use cubic_sudoku::graph::{generate_graph, MatchingProcess, RevealOutcome};
use cubic_sudoku::rng::{DeterministicRandomSource, MATCHING_STREAM};
use cubic_sudoku::types::N_TYPES;
use cubic_sudoku::verify::{count_extensions, is_sudoku_set, propagate_forced, AdjGraph, VerificationStatus};
use num_rational::Ratio;
use proptest::prelude::*;

fn even_n() -> impl Strategy<Value = usize> {
    (2usize..200).prop_map(|h| 2 * h)
}

fn interior_q() -> impl Strategy<Value = ChainParams> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0, 0.05f64..0.95).prop_map(|(a, b, c, total)| {
        let s = a + b + c;
        ChainParams::new(total * a / s, total * b / s, total * c / s).unwrap()
    })
}

/// Parameters on a coarse lattice, including zeros and `Σq = 1`.
fn lattice_q() -> impl Strategy<Value = ChainParams> {
    let v = prop::sample::select(vec![0.0, 0.1, 0.25, 0.3, 0.5, 1.0]);
    (v.clone(), v.clone(), v)
        .prop_filter("sum at most 1", |(a, b, c)| a + b + c <= 1.0)
        .prop_map(|(a, b, c)| ChainParams::new(a, b, c).unwrap())
}

fn dist18() -> impl Strategy<Value = [f64; N_TYPES]> {
    prop::array::uniform18(0.0f64..1.0).prop_filter_map("nonzero", |w| {
        let s: f64 = w.iter().sum();
        (s > 0.0).then(|| w.map(|x| x / s))
    })
}

/// Irreducible iff `(I + A)^17 > 0`. Aperiodic iff the closed walks at
/// state 0 of length at most 400 have gcd 1.
fn brute_structure(m: &TransitionMatrix18) -> (bool, bool) {
    type B = [[bool; N_TYPES]; N_TYPES];
    let mul = |a: &B, b: &B| {
        let mut c = [[false; N_TYPES]; N_TYPES];
        for i in 0..N_TYPES {
            for j in 0..N_TYPES {
                c[i][j] = (0..N_TYPES).any(|k| a[i][k] && b[k][j]);
            }
        }
        c
    };
    let mut a = [[false; N_TYPES]; N_TYPES];
    let mut reach = [[false; N_TYPES]; N_TYPES];
    for i in 0..N_TYPES {
        for j in 0..N_TYPES {
            a[i][j] = m.entries[i][j] > 0.0;
            reach[i][j] = a[i][j] || i == j;
        }
    }
    for _ in 0..5 {
        reach = mul(&reach, &reach);
    }
    let irreducible = reach.iter().flatten().all(|&x| x);
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    let mut p = a;
    let mut g = 0;
    for len in 1..=400 {
        if p[0][0] {
            g = gcd(g, len);
        }
        p = mul(&p, &a);
    }
    (irreducible, g == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_matching_is_a_fixed_point_free_involution(n in even_n(), seed in any::<u64>()) {
        let g = generate_graph(n, seed).unwrap();
        for v in 1..=n {
            let p = g.partner(v);
            prop_assert!((1..=n).contains(&p));
            prop_assert_ne!(p, v);
            prop_assert_eq!(g.partner(p), v);
        }
    }

    #[test]
    fn presampled_replay_matches_on_the_fly(n in even_n(), seed in any::<u64>()) {
        let mut live = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM)).unwrap();
        let mut outcomes = Vec::with_capacity(n);
        for _ in 0..n {
            outcomes.push(live.reveal_step().unwrap());
        }
        let g = live.graph().unwrap();
        let mut replay = MatchingProcess::presampled(g);
        for o in outcomes {
            prop_assert_eq!(replay.reveal_step().unwrap(), o);
        }
        prop_assert!(replay.is_finished());
    }

    #[test]
    fn unsaturated_count_moves_by_one(n in even_n(), seed in any::<u64>()) {
        let mut p = MatchingProcess::on_the_fly(n, DeterministicRandomSource::with_stream(seed, MATCHING_STREAM)).unwrap();
        let mut x = 0i64;
        for _ in 0..n {
            let o = p.reveal_step().unwrap();
            let next = p.x_total() as i64;
            match o {
                RevealOutcome::Forward => prop_assert_eq!(next, x + 1),
                RevealOutcome::Backward(_) => prop_assert_eq!(next, x - 1),
            }
            prop_assert_eq!(p.recount_unsaturated() as i64, next);
            x = next;
        }
        prop_assert_eq!(x, 0);
    }

    #[test]
    fn q_is_row_stochastic(params in lattice_q()) {
        let m = build_q(&params);
        for (i, s) in m.row_sums().iter().enumerate() {
            prop_assert!((s - 1.0).abs() < 1e-12, "row {} sums to {}", i, s);
        }
        prop_assert!(m.entries.iter().flatten().all(|&x| x >= 0.0));
    }

    #[test]
    fn q_rows_sum_to_one_exactly(a in 0i64..=40, b in 0i64..=40, c in 0i64..=40) {
        prop_assume!(a + b + c <= 120);
        let q = [Ratio::new(a, 120), Ratio::new(b, 120), Ratio::new(c, 120)];
        let mut sums = [Ratio::from_integer(0i64); N_TYPES];
        for (from, _, v) in transition_entries(q) {
            prop_assert!(v >= Ratio::from_integer(0));
            sums[from] += v;
        }
        prop_assert!(sums.iter().all(|s| *s == Ratio::from_integer(1)));
    }

    #[test]
    fn balanced_law_is_fixed(q in 0.0f64..=1.0) {
        let m = build_q(&ChainParams::balanced(q).unwrap());
        let pi = pi_bal(q);
        prop_assert!(l1(&step_dist(&pi, &m.entries), &pi) <= 1e-12);
    }

    #[test]
    fn tv_is_half_l1(a in dist18(), b in dist18()) {
        let by_hand: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
        prop_assert!((tv(&a, &b) - by_hand).abs() < 1e-15);
        prop_assert!(tv(&a, &b) <= 1.0 + 1e-12);
    }

    #[test]
    fn solve_agrees_with_power_iteration(params in interior_q()) {
        let m = build_q(&params);
        let direct = stationary(&m, 1e-10).unwrap();
        let iterated = stationary_power(&m, 1e-14, 1_000_000).unwrap();
        prop_assert!(l1(&direct, &iterated) <= 1e-10);
    }

    #[test]
    fn structure_matches_boolean_powers(params in lattice_q()) {
        let m = build_q(&params);
        prop_assert_eq!(structure_check(&m), brute_structure(&m));
    }

    #[test]
    fn structure_matches_on_interior(params in interior_q()) {
        let m = build_q(&params);
        prop_assert_eq!(structure_check(&m), (true, true));
        prop_assert_eq!(brute_structure(&m), (true, true));
    }

    #[test]
    fn even_cycle_list_colouring_respects_lists(
        half in 2usize..12,
        picks in prop::collection::vec(0usize..3, 24),
    ) {
        let len = 2 * half;
        let choices = [[1u8, 2], [1, 3], [2, 3]];
        let lists: Vec<[u8; 2]> = picks[..len].iter().map(|&i| choices[i]).collect();
        let col = list_colour_even_cycle(&lists).unwrap();
        prop_assert_eq!(col.len(), len);
        for t in 0..len {
            prop_assert!(lists[t].contains(&col[t]));
            prop_assert_ne!(col[t], col[(t + 1) % len]);
        }
    }

    #[test]
    fn verdicts_agree_with_exact_counts(
        n in 4usize..=12,
        colours in prop::collection::vec(1u8..=3, 12),
        edge_bits in prop::collection::vec(any::<bool>(), 66),
        s_bits in prop::collection::vec(any::<bool>(), 12),
    ) {
        let col = &colours[..n];
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if edge_bits[bit] && col[u] != col[v] {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        let g = AdjGraph::from_edges(n, &edges).unwrap();
        let in_s = &s_bits[..n];
        let partial: Vec<u8> = col.iter().zip(in_s).map(|(&c, &s)| if s { c } else { 0 }).collect();
        let exact = count_extensions(&g, &partial, 3, None, 60).unwrap();
        prop_assert!(exact >= 1);

        let verdict = is_sudoku_set(&g, col, in_s, 3, 60).unwrap().status;
        match verdict {
            VerificationStatus::UniqueByPropagation | VerificationStatus::UniqueByExactCount => prop_assert_eq!(exact, 1),
            VerificationStatus::NotUnique(c) => prop_assert!(c >= 2 && exact >= 2),
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }

        let (forced, result) = propagate_forced(&g, &partial, 3).unwrap();
        if result.status == VerificationStatus::UniqueByPropagation {
            prop_assert_eq!(exact, 1);
            prop_assert_eq!(&forced[..], col);
        }
    }
}
