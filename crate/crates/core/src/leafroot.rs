//! Leaf roots: verification, zero-edge normalisation, pendant vertices and
//! the exhaustive exact oracle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{can_satisfy, scale_to_integers, ConstraintPair};
use crate::quartets::required_quartets;
use crate::tree::{
    enumerate_binary_topologies, search_binary_topologies, PhyloTree, SearchStats, Weight,
    WeightedTree,
};
use crate::{LeafRoot, QuartetSet};

fn check_leaf_set(t: &PhyloTree, g: &Graph) -> Result<()> {
    let leaves: BTreeSet<&str> = t.leaf_labels().collect();
    let verts: BTreeSet<&str> = g.labels().collect();
    if leaves != verts {
        let extra: Vec<&str> = leaves.difference(&verts).copied().collect();
        let missing: Vec<&str> = verts.difference(&leaves).copied().collect();
        return Err(Error::LeafSetMismatch(format!(
            "leaves not in the graph: {extra:?}; vertices without a leaf: {missing:?}"
        )));
    }
    Ok(())
}

/// Whether `uv` is an edge exactly when `d(u, v) <= k`, over all pairs.
/// Zero weights are accepted here; positivity is a separate question.
pub fn verify_leafroot<W: Weight>(wt: &WeightedTree<W>, g: &Graph) -> Result<bool> {
    check_leaf_set(wt.tree(), g)?;
    let k = wt.threshold();
    for u in g.vertex_ids() {
        let d = wt.distances_from(g.label(u))?;
        for v in u + 1..g.order() {
            if (d[g.label(v)] <= *k) != g.adjacent(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Removes zero weights: with `d` the largest edge count of any path in the
/// tree, every weight is multiplied by `d + 1`, zeros become 1, and the
/// threshold becomes `(d + 1) k + d`. Pairs within `k` stay within the new
/// threshold and pairs at `k + 1` or more stay beyond it.
pub fn normalize_zero_edges<W: Weight>(wt: &WeightedTree<W>) -> Result<WeightedTree<W>> {
    let d = wt.tree().diameter_edges();
    let of = |x: usize| W::from_usize(x).ok_or(Error::Overflow("normalisation factor"));
    let (dd, d1) = (of(d)?, of(d + 1)?);
    let weights = wt
        .weights()
        .iter()
        .map(|w| {
            if w.is_zero() {
                Ok(W::one())
            } else {
                w.checked_mul(&d1)
                    .ok_or(Error::Overflow("normalised weight"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let k = wt
        .threshold()
        .checked_mul(&d1)
        .and_then(|x| x.checked_add(&dd))
        .ok_or(Error::Overflow("normalised threshold"))?;
    WeightedTree::new(wt.tree().clone(), weights, k)
}

/// One step of [`reduce_degree_one`]: `removed` had `anchor` as its only
/// neighbour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendantRemoval {
    pub removed: String,
    pub anchor: String,
}

/// Repeatedly deletes a degree-1 vertex, the earliest in vertex order, as
/// long as its neighbour is not itself of degree 1. Deleting a pendant vertex
/// keeps the leaf-power status, so the log is enough to rebuild a root of
/// `g` from a root of the result.
pub fn reduce_degree_one(g: &Graph) -> (Graph, Vec<PendantRemoval>) {
    let mut h = g.clone();
    let mut log = Vec::new();
    loop {
        let pick = h.vertex_ids().find_map(|v| {
            if h.degree(v) != 1 {
                return None;
            }
            let w = h.neighbors(v).next().expect("degree one");
            (h.degree(w) != 1).then_some((v, w))
        });
        let Some((v, w)) = pick else { break };
        log.push(PendantRemoval {
            removed: h.label(v).to_owned(),
            anchor: h.label(w).to_owned(),
        });
        h = h
            .without_vertex(&log.last().expect("just pushed").removed)
            .expect("vertex exists");
    }
    (h, log)
}

/// Adds leaf `v` next to leaf `w`: the pendant edge `wz` is subdivided at a
/// new node `z'` with `f(wz') = 0`, `v` hangs from `z'` with weight `k`, and
/// the zero edge is normalised away. Inputs with zero weights are normalised
/// first so that `f(z'z) > 0`.
pub fn extend_root_over_pendant<W: Weight>(
    wt: &WeightedTree<W>,
    w: &str,
    v: &str,
) -> Result<WeightedTree<W>> {
    if wt.tree().has_leaf(v) {
        return Err(Error::InvalidParameter(format!("`{v}` is already a leaf")));
    }
    let wn = wt.tree().leaf(w)?;
    let base = if wt.has_zero_edge() {
        normalize_zero_edges(wt)?
    } else {
        wt.clone()
    };
    let (mut tree, mut weights, k) = base.into_parts();
    if tree.edge_count() == 0 {
        let vn = tree.add_leaf(v)?;
        tree.add_edge(wn, vn);
        return WeightedTree::new(tree, vec![k.clone()], k);
    }
    let &(_, e) = tree
        .neighbors(wn)
        .first()
        .expect("a leaf of a nontrivial tree has a neighbour");
    let f = weights[e].clone();
    let w_first = tree.edge(e)[0] == wn;
    tree.graft(e, v)?;
    // graft keeps `e` on the first endpoint's side.
    let (on_e, on_rest) = if w_first {
        (W::zero(), f)
    } else {
        (f, W::zero())
    };
    weights[e] = on_e;
    weights.push(on_rest);
    weights.push(k.clone());
    let raw = WeightedTree::new(tree, weights, k)?;
    normalize_zero_edges(&raw)
}

/// Result of an exact leaf-power search.
#[derive(Debug, Clone)]
pub struct LeafPowerOutcome {
    /// A verified root with positive integer weights, if one exists.
    pub root: Option<LeafRoot>,
    /// Vertices set aside by [`reduce_degree_one`] before the search.
    pub reduction: Vec<PendantRemoval>,
    pub stats: SearchStats,
}

/// Exact leaf-power test for graphs with at most `cap` vertices.
///
/// Pendant vertices are removed first. Refining a leaf root keeps it a leaf
/// root, so only binary topologies of the reduced graph are tried; each is
/// decided by the rational simplex. A partial topology is dropped once it
/// fails to display a required quartet among its leaves, or once the pairs
/// among its own leaves are infeasible; every completion restricts back to
/// it, so neither test loses a root.
pub fn leaf_power_search(g: &Graph, cap: usize) -> Result<LeafPowerOutcome> {
    if g.is_empty() {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "exact leaf-power search",
            size: g.order(),
            cap,
        });
    }
    let (h, log) = reduce_degree_one(g);
    let all = ConstraintPair::of_graph(&h);
    let labels: Vec<&str> = h.labels().collect();
    let required = required_quartets(&h);
    let shows_required = |t: &PhyloTree, inside: &BTreeSet<&str>| {
        let sub: QuartetSet = required.restricted_to(inside).cloned().collect();
        sub.displayed_by(t).expect("labels come from the graph")
    };
    let viable = |t: &PhyloTree| {
        let inside: BTreeSet<&str> = t.leaf_labels().collect();
        shows_required(t, &inside)
            && can_satisfy(t, &all.restricted_to(&inside))
                .expect("labels come from the graph")
                .feasible
    };
    let goal = |t: &PhyloTree| {
        let inside: BTreeSet<&str> = t.leaf_labels().collect();
        if !shows_required(t, &inside) {
            return None;
        }
        can_satisfy(t, &all)
            .expect("labels come from the graph")
            .witness
    };
    let (witness, stats) = search_binary_topologies(&labels, cap, viable, goal)?;
    let root = match witness {
        None => None,
        Some(w) => Some(realise(&w, &h, g, &log)?),
    };
    Ok(LeafPowerOutcome {
        root,
        reduction: log,
        stats,
    })
}

fn realise(
    w: &crate::RationalTree,
    h: &Graph,
    g: &Graph,
    log: &[PendantRemoval],
) -> Result<LeafRoot> {
    let mut root = scale_to_integers(w)?;
    if root.has_zero_edge() {
        root = normalize_zero_edges(&root)?;
    }
    if !verify_leafroot(&root, h)? {
        return Err(Error::Verification(
            "integer root of the reduced graph".into(),
        ));
    }
    for step in log.iter().rev() {
        root = extend_root_over_pendant(&root, &step.anchor, &step.removed)?;
    }
    if !verify_leafroot(&root, g)? {
        return Err(Error::Verification("re-extended root".into()));
    }
    Ok(root)
}

/// [`leaf_power_search`] without the statistics.
pub fn is_leaf_power_exact(g: &Graph, cap: usize) -> Result<Option<LeafRoot>> {
    Ok(leaf_power_search(g, cap)?.root)
}

/// Runs the simplex on every binary topology of `V(g)` with no pruning and no
/// pendant reduction. Returns `(topologies examined, feasible topologies)`.
pub fn count_feasible_topologies(g: &Graph, cap: usize) -> Result<(usize, usize)> {
    let all = ConstraintPair::of_graph(g);
    let labels: Vec<&str> = g.labels().collect();
    let mut seen = 0;
    let mut feasible = 0;
    for t in enumerate_binary_topologies(&labels, cap)? {
        seen += 1;
        if can_satisfy(&t, &all)?.feasible {
            feasible += 1;
        }
    }
    Ok((seen, feasible))
}

/// All weights at least one.
pub fn has_positive_weights<W: Weight>(wt: &WeightedTree<W>) -> bool {
    wt.weights().iter().all(|w| *w >= W::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, edgeless, path, sun};

    fn p3() -> Graph {
        Graph::from_edges([("a", "b"), ("b", "c")]).unwrap()
    }

    fn star_212(k: u64) -> LeafRoot {
        let t = PhyloTree::star(&["a", "b", "c"]).unwrap();
        WeightedTree::new(t, vec![2, 1, 2], k).unwrap()
    }

    #[test]
    fn star_root_of_p3() {
        assert!(verify_leafroot(&star_212(3), &p3()).unwrap());
        assert!(!verify_leafroot(&star_212(4), &p3()).unwrap());
    }

    #[test]
    fn leaf_set_must_match() {
        let g = Graph::from_edges([("a", "b"), ("b", "d")]).unwrap();
        assert!(matches!(
            verify_leafroot(&star_212(3), &g),
            Err(Error::LeafSetMismatch(_))
        ));
    }

    #[test]
    fn single_zero_edge_normalisation() {
        // a path of three edges, so d = 3
        let t = PhyloTree::caterpillar(&["a", "b", "c", "d"]).unwrap();
        let mut w = vec![1u64; t.edge_count()];
        let mid = t.edge_ids().find(|&e| t.is_internal_edge(e)).unwrap();
        w[mid] = 0;
        let wt = WeightedTree::new(t, w, 2).unwrap();
        let n = normalize_zero_edges(&wt).unwrap();
        assert_eq!(*n.weight(mid), 1);
        assert_eq!(*n.threshold(), 11);
        assert!(has_positive_weights(&n));
    }

    #[test]
    fn pendant_reduction() {
        let g = Graph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let (h, log) = reduce_degree_one(&g);
        assert_eq!(h.order(), 2);
        assert_eq!(
            log,
            vec![PendantRemoval {
                removed: "a".into(),
                anchor: "b".into()
            }]
        );

        let e = edgeless(3);
        let (h, log) = reduce_degree_one(&e);
        assert_eq!(h, e);
        assert!(log.is_empty());
    }

    #[test]
    fn extend_k2_to_p3() {
        let t = PhyloTree::star(&["a", "b"]).unwrap();
        let k2 = WeightedTree::new(t, vec![1u64], 1).unwrap();
        let ext = extend_root_over_pendant(&k2, "b", "c").unwrap();
        assert!(verify_leafroot(&ext, &p3()).unwrap());
        assert!(has_positive_weights(&ext));
        assert!(extend_root_over_pendant(&k2, "b", "a").is_err());
    }

    #[test]
    fn repeated_extension_grows_paths() {
        let mut root = WeightedTree::new(PhyloTree::single("v1"), vec![], 1u64).unwrap();
        for n in 2..=6 {
            root =
                extend_root_over_pendant(&root, &format!("v{}", n - 1), &format!("v{n}")).unwrap();
            assert!(verify_leafroot(&root, &path(n)).unwrap());
        }
    }

    #[test]
    fn exact_oracle_small_cases() {
        let r = is_leaf_power_exact(&p3(), 9).unwrap().unwrap();
        assert!(verify_leafroot(&r, &p3()).unwrap());
        assert!(is_leaf_power_exact(&sun(3).unwrap(), 9).unwrap().is_none());
        assert!(is_leaf_power_exact(&cycle(4), 9).unwrap().is_none());
        assert!(is_leaf_power_exact(&complete(5), 9).unwrap().is_some());
        assert!(is_leaf_power_exact(&edgeless(4), 9).unwrap().is_some());
        assert!(matches!(
            is_leaf_power_exact(&complete(5), 4),
            Err(Error::CapExceeded { .. })
        ));
    }
}
