mod common;

use std::collections::BTreeSet;

use leafpower::cycles::{
    can_satisfy_cycle, construct_cycle_weighting, enumerate_alternating_cycles, signed_path_counts,
    weighting_satisfies, AlternatingCycle,
};
use leafpower::graph::{is_chordal, is_strongly_chordal, verify_elimination, Graph};
use leafpower::leafroot::{
    count_feasible_topologies, has_positive_weights, is_leaf_power_exact, normalize_zero_edges,
    verify_leafroot,
};
use leafpower::lp::can_satisfy;
use leafpower::quartets::{path_lemma_closure, required_quartets};
use leafpower::rcc::{
    find_chordless_st_cycle, is_chordless_cycle, planted_instance, random_instance,
};
use leafpower::tree::{displayed_quartets, enumerate_binary_topologies, topology_count};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::with_vertices(labels(n));
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if bits[k] {
                g.add_edge(&format!("l{a}"), &format!("l{b}")).unwrap();
            }
            k += 1;
        }
    }
    g
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, bits)| graph_from_bits(n, &bits))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chordality_matches_hole_search(g in small_graph(7)) {
        let cert = is_chordal(&g);
        prop_assert_eq!(cert.is_some(), brute_chordal(&g));
        if let Some(c) = cert {
            prop_assert!(verify_elimination(&g, &c).unwrap());
        }
    }

    #[test]
    fn strong_chordality_matches_sun_search(g in small_graph(7)) {
        let cert = is_strongly_chordal(&g);
        prop_assert_eq!(cert.is_some(), brute_strongly_chordal(&g));
        if let Some(c) = cert {
            prop_assert!(verify_elimination(&g, &c).unwrap());
        }
    }

    #[test]
    fn alternating_cycles_match_sequence_search(g in small_graph(6)) {
        let n = g.order();
        let listed: BTreeSet<AlternatingCycle> =
            enumerate_alternating_cycles(&g, 3).unwrap().into_iter().collect();
        let mut brute = BTreeSet::new();
        for len in [4, 6] {
            if len > n {
                continue;
            }
            let mut seq = Vec::new();
            sequences(&g, len, &mut seq, &mut brute);
        }
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn leaf_power_graphs_display_required_quartets(seed in any::<u64>(), n in 4usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wt = random_weighted(&mut rng, n, 5);
        let g = leaf_power_graph(&wt);
        prop_assert!(verify_leafroot(&wt, &g).unwrap());
        prop_assert!(required_quartets(&g).displayed_by(wt.tree()).unwrap());
    }

    #[test]
    fn displayed_quartets_are_closed(seed in any::<u64>(), n in 4usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_binary_tree(&mut rng, &labels(n));
        let q = displayed_quartets(&t);
        prop_assert_eq!(path_lemma_closure(&q), q);
    }

    #[test]
    fn closure_is_monotone_and_idempotent(g in small_graph(7)) {
        let q = required_quartets(&g);
        let c = path_lemma_closure(&q);
        prop_assert!(q.is_subset(&c));
        prop_assert_eq!(path_lemma_closure(&c), c);
    }

    #[test]
    fn cycle_verdict_matches_simplex(seed in any::<u64>(), c in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2 * c..=8);
        let t = random_tree(&mut rng, &labels(n));
        let (_, cyc) = random_cycle_on(&mut rng, &t, c);
        let lp = can_satisfy(&t, &cyc.constraints()).unwrap().feasible;
        prop_assert_eq!(can_satisfy_cycle(&t, &cyc).unwrap(), lp);
    }

    #[test]
    fn greedy_weighting_whenever_a_witness_exists(seed in any::<u64>(), c in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2 * c..=8);
        let t = random_tree(&mut rng, &labels(n));
        let (_, cyc) = random_cycle_on(&mut rng, &t, c);
        let counts = signed_path_counts(&t, &cyc).unwrap();
        match construct_cycle_weighting(&t, &cyc) {
            Ok(w) => {
                prop_assert!(counts.witnesses().next().is_some());
                prop_assert!(weighting_satisfies(&w.raw, &cyc).unwrap());
                prop_assert!(weighting_satisfies(&w.normalized, &cyc).unwrap());
                prop_assert!(has_positive_weights(&w.normalized));
            }
            Err(_) => prop_assert!(counts.witnesses().next().is_none()),
        }
    }

    #[test]
    fn normalization_keeps_the_graph(seed in any::<u64>(), n in 2usize..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wt = random_weighted(&mut rng, n, 4);
        let g = leaf_power_graph(&wt);
        let norm = normalize_zero_edges(&wt).unwrap();
        prop_assert!(has_positive_weights(&norm));
        prop_assert!(verify_leafroot(&norm, &g).unwrap());
    }
}

/// Every valid `x0 y0 x1 y1 ...` sequence of the given length, canonicalised.
fn sequences(g: &Graph, len: usize, seq: &mut Vec<usize>, out: &mut BTreeSet<AlternatingCycle>) {
    if seq.len() == len {
        if !g.adjacent(seq[len - 1], seq[0]) {
            let labels: Vec<&str> = seq.iter().map(|&v| g.label(v)).collect();
            out.insert(AlternatingCycle::from_sequence(g, &labels).unwrap());
        }
        return;
    }
    for v in g.vertex_ids() {
        if seq.contains(&v) {
            continue;
        }
        if let Some(&last) = seq.last() {
            // Odd positions close an edge pair; even ones follow a non-edge.
            let want_edge = seq.len() % 2 == 1;
            if g.adjacent(last, v) != want_edge {
                continue;
            }
        }
        seq.push(v);
        sequences(g, len, seq, out);
        seq.pop();
    }
}

#[test]
fn topology_enumeration_counts() {
    for n in 1..=8 {
        let all: Vec<_> = enumerate_binary_topologies(&labels(n), 9)
            .unwrap()
            .collect();
        assert_eq!(all.len() as u128, topology_count(n), "n = {n}");
        let splits: BTreeSet<_> = all.iter().map(|t| t.splits()).collect();
        assert_eq!(splits.len(), all.len(), "duplicates at n = {n}");
        for t in &all {
            let leaves: BTreeSet<&str> = t.leaf_labels().collect();
            assert_eq!(leaves.len(), n);
        }
    }
}

/// The exact search (pendant reduction plus pruning) against the plain count
/// of feasible binary topologies.
#[test]
fn exact_search_matches_plain_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut yes = 0;
    for _ in 0..60 {
        let n = rng.gen_range(3..=6);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let (_, feasible) = count_feasible_topologies(&g, 9).unwrap();
        match is_leaf_power_exact(&g, 9).unwrap() {
            Some(root) => {
                assert!(feasible > 0);
                assert!(verify_leafroot(&root, &g).unwrap());
                assert!(has_positive_weights(&root));
                yes += 1;
            }
            None => assert_eq!(feasible, 0),
        }
    }
    assert!(yes > 0);
}

/// Whether some vertex set holding `s` and `t` induces a single cycle.
fn brute_st_cycle(g: &Graph, s: usize, t: usize) -> bool {
    let others: Vec<usize> = g.vertex_ids().filter(|&v| v != s && v != t).collect();
    subsets(others.len()).any(|pick| {
        let mut set: Vec<usize> = pick.iter().map(|&i| others[i]).collect();
        set.extend([s, t]);
        if set.len() < 4 {
            return false;
        }
        let deg = |v: usize| set.iter().filter(|&&w| g.adjacent(v, w)).count();
        if set.iter().any(|&v| deg(v) != 2) {
            return false;
        }
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &set {
                if g.adjacent(v, w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    })
}

#[test]
fn st_cycle_search_matches_subset_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut yes, mut no) = (0, 0);
    for round in 0..80 {
        let inst = if round % 3 == 0 {
            let arc = rng.gen_range(1..=2);
            planted_instance(&mut rng, (1, arc), 1, 1, 0.3).unwrap()
        } else {
            let nu = rng.gen_range(2..=5);
            let nv = rng.gen_range(4..=7);
            let p = rng.gen_range(0.2..0.6);
            random_instance(&mut rng, nu, nv, p).unwrap()
        };
        let g = inst.graph();
        let found = find_chordless_st_cycle(&inst);
        let brute = brute_st_cycle(g, g.id(inst.s()).unwrap(), g.id(inst.t()).unwrap());
        assert_eq!(found.is_some(), brute, "round {round}");
        if let Some(c) = found {
            assert!(is_chordless_cycle(g, &c).unwrap());
            assert!(c.iter().any(|v| v == inst.t()));
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}
