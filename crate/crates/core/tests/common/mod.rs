#![allow(dead_code)]

use std::collections::BTreeSet;

use leafpower::cycles::AlternatingCycle;
use leafpower::graph::Graph;
use leafpower::tree::PhyloTree;
use leafpower::{LeafRoot, WeightedTree};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("l{i}")).collect()
}

/// Uniform over binary topologies: each new leaf subdivides a uniform edge.
pub fn random_binary_tree<R: Rng>(rng: &mut R, labels: &[String]) -> PhyloTree {
    let n = labels.len();
    assert!(n >= 1);
    // Nodes 0..n are leaves; internal nodes follow.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next = n;
    match n {
        1 => {}
        2 => edges.push((0, 1)),
        _ => {
            edges.extend([(0, n), (1, n), (2, n)]);
            next += 1;
            for leaf in 3..n {
                let i = rng.gen_range(0..edges.len());
                let (a, b) = edges[i];
                let w = next;
                next += 1;
                edges[i] = (a, w);
                edges.push((w, b));
                edges.push((w, leaf));
            }
        }
    }
    build(labels, next, &edges)
}

fn build(labels: &[String], nodes: usize, edges: &[(usize, usize)]) -> PhyloTree {
    let mut t = PhyloTree::new();
    let mut ids = Vec::with_capacity(nodes);
    for i in 0..nodes {
        ids.push(match labels.get(i) {
            Some(l) => t.add_leaf(l).unwrap(),
            None => t.add_node(),
        });
    }
    for &(a, b) in edges {
        t.add_edge(ids[a], ids[b]);
    }
    t.validate().unwrap();
    t
}

pub fn internal_edges(t: &PhyloTree) -> Vec<usize> {
    t.edge_ids().filter(|&e| t.is_internal_edge(e)).collect()
}

/// Contracts up to `max` random internal edges.
pub fn contract_some<R: Rng>(rng: &mut R, mut t: PhyloTree, max: usize) -> PhyloTree {
    let k = rng.gen_range(0..=max);
    for _ in 0..k {
        let inner = internal_edges(&t);
        let Some(&e) = inner.choose(rng) else { break };
        t = t.contract(e).unwrap();
    }
    t
}

pub fn random_tree<R: Rng>(rng: &mut R, labels: &[String]) -> PhyloTree {
    let t = random_binary_tree(rng, labels);
    let m = internal_edges(&t).len();
    contract_some(rng, t, m)
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices(labels(n));
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(&format!("l{a}"), &format!("l{b}")).unwrap();
            }
        }
    }
    g
}

/// `2c` distinct leaves of `t`; the graph has exactly the `c` pair edges.
pub fn random_cycle_on<R: Rng>(rng: &mut R, t: &PhyloTree, c: usize) -> (Graph, AlternatingCycle) {
    let mut leaves: Vec<&str> = t.leaf_labels().collect();
    leaves.shuffle(rng);
    let pairs: Vec<(&str, &str)> = (0..c).map(|i| (leaves[2 * i], leaves[2 * i + 1])).collect();
    let g = Graph::from_edges(pairs.iter().copied()).unwrap();
    let cyc = AlternatingCycle::new(&g, &pairs).unwrap();
    (g, cyc)
}

/// Subsets of `0..n` as sorted vectors.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// Whether the vertices `s` induce a chordless cycle of length `>= 4`.
fn induces_hole(g: &Graph, s: &[usize]) -> bool {
    if s.len() < 4 {
        return false;
    }
    let deg = |v: usize| s.iter().filter(|&&w| g.adjacent(v, w)).count();
    if s.iter().any(|&v| deg(v) != 2) {
        return false;
    }
    // All degrees 2: a disjoint union of cycles; connected means one cycle.
    let mut seen = BTreeSet::from([s[0]]);
    let mut stack = vec![s[0]];
    while let Some(v) = stack.pop() {
        for &w in s {
            if g.adjacent(v, w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == s.len()
}

pub fn brute_chordal(g: &Graph) -> bool {
    !subsets(g.order()).any(|s| induces_hole(g, &s))
}

/// Whether `s` induces a sun: a clique `C` plus an independent set of the
/// same size whose members each see exactly two clique vertices, the pairs
/// forming one Hamiltonian cycle of `C`.
pub fn induces_sun(g: &Graph, s: &[usize]) -> bool {
    let k = s.len() / 2;
    if !s.len().is_multiple_of(2) || k < 3 {
        return false;
    }
    let deg = |v: usize| s.iter().filter(|&&w| g.adjacent(v, w)).count();
    let (core, ears): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&v| deg(v) == k + 1);
    if core.len() != k || ears.iter().any(|&v| deg(v) != 2) || !g.is_clique(&core) {
        return false;
    }
    let mut pairs = Vec::new();
    for &e in &ears {
        let nb: Vec<usize> = core.iter().copied().filter(|&c| g.adjacent(e, c)).collect();
        if nb.len() != 2 {
            return false;
        }
        pairs.push((nb[0], nb[1]));
    }
    // Every core vertex in two pairs, and the pairs connected: one cycle.
    if core
        .iter()
        .any(|&c| pairs.iter().filter(|p| p.0 == c || p.1 == c).count() != 2)
    {
        return false;
    }
    let mut seen = BTreeSet::from([core[0]]);
    let mut stack = vec![core[0]];
    while let Some(v) = stack.pop() {
        for &(a, b) in &pairs {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen.len() == k
}

/// Strongly chordal iff chordal and sun-free.
pub fn brute_strongly_chordal(g: &Graph) -> bool {
    assert!(g.order() <= 12);
    brute_chordal(g) && !subsets(g.order()).any(|s| induces_sun(g, &s))
}

/// Pairs at weighted distance `<= k` become edges.
pub fn leaf_power_graph(wt: &LeafRoot) -> Graph {
    let leaves: Vec<&str> = wt.tree().leaf_labels().collect();
    let mut g = Graph::with_vertices(&leaves);
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            if wt.distance(a, b).unwrap() <= *wt.threshold() {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn random_weighted<R: Rng>(rng: &mut R, n: usize, max_w: u64) -> LeafRoot {
    let t = random_tree(rng, &labels(n));
    let w = (0..t.edge_count())
        .map(|_| rng.gen_range(0..=max_w))
        .collect();
    let k = rng.gen_range(1..=3 * max_w);
    WeightedTree::new(t, w, k).unwrap()
}
