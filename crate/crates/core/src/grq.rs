//! The `G_{r,q}` family of strongly chordal graphs that are not leaf powers,
//! and explicit leaf roots for each of their vertex-deleted subgraphs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::leafroot::{
    extend_root_over_pendant, is_leaf_power_exact, normalize_zero_edges, reduce_degree_one,
    verify_leafroot,
};
use crate::tree::{NodeId, PhyloTree, WeightedTree};
use crate::LeafRoot;

#[derive(Debug, Clone)]
pub struct GrqInstance {
    pub r: usize,
    pub q: usize,
    /// Vertices in the order `a1..ar, b1..bq, x1..x(r-1), y1..y(q-1)`.
    pub graph: Graph,
}

impl GrqInstance {
    pub fn a(&self) -> Vec<String> {
        numbered("a", self.r)
    }

    pub fn b(&self) -> Vec<String> {
        numbered("b", self.q)
    }

    pub fn x(&self) -> Vec<String> {
        numbered("x", self.r - 1)
    }

    pub fn y(&self) -> Vec<String> {
        numbered("y", self.q - 1)
    }
}

fn numbered(p: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{p}{i}")).collect()
}

fn check_rq(r: usize, q: usize) -> Result<()> {
    if r < 3 || q < 3 {
        return Err(Error::InvalidParameter(format!(
            "G_(r,q) needs r, q >= 3, got ({r}, {q})"
        )));
    }
    Ok(())
}

/// Clique on `A ∪ B` minus `a1ar, a1bq, b1bq, b1ar`, plus `x_i` adjacent to
/// `a_i, a_(i+1)` and `y_j` adjacent to `b_j, b_(j+1)`.
pub fn gen_grq(r: usize, q: usize) -> Result<GrqInstance> {
    check_rq(r, q)?;
    let (a, b) = (numbered("a", r), numbered("b", q));
    let (x, y) = (numbered("x", r - 1), numbered("y", q - 1));
    let core: Vec<&String> = a.iter().chain(&b).collect();
    let mut g = Graph::with_vertices(core.iter().copied().chain(&x).chain(&y));
    let missing = [
        (&a[0], &a[r - 1]),
        (&a[0], &b[q - 1]),
        (&b[0], &b[q - 1]),
        (&b[0], &a[r - 1]),
    ];
    for (i, u) in core.iter().enumerate() {
        for v in &core[i + 1..] {
            if !missing
                .iter()
                .any(|&(s, t)| (s == *u && t == *v) || (s == *v && t == *u))
            {
                g.add_edge(u, v)?;
            }
        }
    }
    for i in 0..r - 1 {
        g.add_edge(&x[i], &a[i])?;
        g.add_edge(&x[i], &a[i + 1])?;
    }
    for j in 0..q - 1 {
        g.add_edge(&y[j], &b[j])?;
        g.add_edge(&y[j], &b[j + 1])?;
    }
    Ok(GrqInstance { r, q, graph: g })
}

/// `G_(r,q)` without the edges `a_i b_q` for `2 <= i <= j`.
pub fn gen_grq_variant(r: usize, q: usize, j: usize) -> Result<Graph> {
    check_rq(r, q)?;
    if r < 4 || !(2..=r - 2).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "variant needs r >= 4 and 2 <= j <= r - 2, got r = {r}, j = {j}"
        )));
    }
    let mut g = gen_grq(r, q)?.graph;
    for i in 2..=j {
        g.remove_edge(&format!("a{i}"), &format!("b{q}"))?;
    }
    Ok(g)
}

/// `x1..x(r-1), y1..y(q-1), a1, b1, ar, bq, a2..a(r-1), b2..b(q-1)`, a
/// simple elimination ordering of `G_(r,q)`.
pub fn simple_ordering(r: usize, q: usize) -> Result<Vec<String>> {
    check_rq(r, q)?;
    let mut out = numbered("x", r - 1);
    out.extend(numbered("y", q - 1));
    out.extend([
        "a1".to_owned(),
        "b1".to_owned(),
        format!("a{r}"),
        format!("b{q}"),
    ]);
    out.extend((2..r).map(|i| format!("a{i}")));
    out.extend((2..q).map(|j| format!("b{j}")));
    Ok(out)
}

/// Weights for the leaf root of `G_(r,q) - x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafRootRecipe {
    pub i: usize,
    pub p: u64,
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    pub threshold: u64,
}

/// `p = 2(2i-1)(2r-2i-1)(2q-3)`, `p1 = p/(2i-1)`, `p2 = p/(2q-3)`,
/// `p3 = p/(2r-2i-1)`, threshold `2p`.
pub fn grq_recipe(r: usize, q: usize, i: usize) -> Result<LeafRootRecipe> {
    check_rq(r, q)?;
    if !(1..r).contains(&i) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= i <= {}, got {i}",
            r - 1
        )));
    }
    let (r, q, i) = (r as u64, q as u64, i as u64);
    let (d1, d2, d3) = (2 * i - 1, 2 * q - 3, 2 * r - 2 * i - 1);
    let p = 2 * d1 * d2 * d3;
    let rec = LeafRootRecipe {
        i: i as usize,
        p,
        p1: p / d1,
        p2: p / d2,
        p3: p / d3,
        threshold: 2 * p,
    };
    assert!(rec.p1 * d1 == p && rec.p2 * d2 == p && rec.p3 * d3 == p);
    assert!(rec.p1 > 2 && rec.p2 > 2 && rec.p3 > 2);
    Ok(rec)
}

/// The leaf root of `G_(r,q) - x_i` together with its two hubs.
#[derive(Debug, Clone)]
pub struct GrqLeafRoot {
    pub recipe: LeafRootRecipe,
    /// Threshold `2p`, with zero-weight edges.
    pub root: LeafRoot,
    /// End of the `a1` and `b1` spines.
    pub u: NodeId,
    /// End of the `ar` spine.
    pub v: NodeId,
}

/// Builds the tree from three spines meeting at `u - v`.
///
/// * `a1 = A0, A1, ..., A(2i-1) = u`, every edge `p1`; `a_j` hangs from
///   `A(2j-2)` and `x_j` from `A(2j-1)` for `j < i`.
/// * `b1 = B0, ..., B(2q-4)`, edges `p2` except the last one `2 p2`, then
///   `B(2q-4) - u` with weight 0; `b_j` hangs from `B(2j-2)`, `y_j` from
///   `B(2j-1)` and `b(q-1)` from `B(2q-4)` with weight 1.
/// * `ar = R0, ..., R(2r-2i-1) = v`, every edge `p3`; `a_j` hangs from
///   `R(2(r-j))` and `x_j` from `R(2(r-j)-1)` for `j > i`.
/// * `u - v` weighs 1 and `v - Z` weighs `p`; `y(q-1)` (weight `p - 2`) and
///   `bq` (weight 0) hang from `Z`.
///
/// Spine leaves `a_j, b_j` sit at weight 0, `x_j` at `2p - 2p1` or
/// `2p - 2p3`, `y_j` at `2p - 2p2` (one less for `j = q - 2`).
pub fn grq_minus_leafroot_layout(r: usize, q: usize, i: usize) -> Result<GrqLeafRoot> {
    let rec = grq_recipe(r, q, i)?;
    let LeafRootRecipe { p, p1, p2, p3, .. } = rec;
    let mut t = PhyloTree::new();
    let mut w: Vec<u64> = Vec::new();

    let mut a_sp = vec![t.add_leaf("a1")?];
    a_sp.extend((1..2 * i).map(|_| t.add_node()));
    let mut b_sp = vec![t.add_leaf("b1")?];
    b_sp.extend((1..=2 * q - 4).map(|_| t.add_node()));
    let mut r_sp = vec![t.add_leaf(&format!("a{r}"))?];
    r_sp.extend((1..2 * r - 2 * i).map(|_| t.add_node()));
    let (u, v) = (a_sp[2 * i - 1], r_sp[2 * r - 2 * i - 1]);
    let z = t.add_node();

    let mut spine = Vec::new();
    for m in 0..2 * i - 1 {
        spine.push((a_sp[m], a_sp[m + 1], p1));
    }
    for m in 0..2 * q - 4 {
        let x = if m == 2 * q - 5 { 2 * p2 } else { p2 };
        spine.push((b_sp[m], b_sp[m + 1], x));
    }
    spine.push((b_sp[2 * q - 4], u, 0));
    for m in 0..2 * r - 2 * i - 1 {
        spine.push((r_sp[m], r_sp[m + 1], p3));
    }
    spine.push((u, v, 1));
    spine.push((v, z, p));

    let mut leaves: Vec<(NodeId, String, u64)> = Vec::new();
    for j in 2..=i {
        leaves.push((a_sp[2 * j - 2], format!("a{j}"), 0));
    }
    for j in 1..i {
        leaves.push((a_sp[2 * j - 1], format!("x{j}"), 2 * p - 2 * p1));
    }
    for j in i + 1..r {
        leaves.push((r_sp[2 * (r - j)], format!("a{j}"), 0));
        leaves.push((r_sp[2 * (r - j) - 1], format!("x{j}"), 2 * p - 2 * p3));
    }
    for j in 2..q - 1 {
        leaves.push((b_sp[2 * j - 2], format!("b{j}"), 0));
    }
    leaves.push((b_sp[2 * q - 4], format!("b{}", q - 1), 1));
    for j in 1..q - 1 {
        let x = if j == q - 2 {
            2 * p - 2 * p2 - 1
        } else {
            2 * p - 2 * p2
        };
        leaves.push((b_sp[2 * j - 1], format!("y{j}"), x));
    }
    leaves.push((z, format!("y{}", q - 1), p - 2));
    leaves.push((z, format!("b{q}"), 0));

    for (a, b, x) in spine {
        t.add_edge(a, b);
        w.push(x);
    }
    for (at, label, x) in leaves {
        let l = t.add_leaf(&label)?;
        t.add_edge(at, l);
        w.push(x);
    }
    let root = WeightedTree::new(t, w, 2 * p)?;
    Ok(GrqLeafRoot {
        recipe: rec,
        root,
        u,
        v,
    })
}

/// A leaf root of `G_(r,q) - x_i` with threshold `2p`, checked against the
/// graph both as built and after zero-edge normalisation.
pub fn construct_grq_minus_leafroot(r: usize, q: usize, i: usize) -> Result<LeafRoot> {
    let root = grq_minus_leafroot_layout(r, q, i)?.root;
    let target = gen_grq(r, q)?.graph.without_vertex(&format!("x{i}"))?;
    if !verify_leafroot(&root, &target)? {
        return Err(Error::Verification(format!(
            "constructed root of G_({r},{q}) - x{i} misclassifies a pair"
        )));
    }
    if !verify_leafroot(&normalize_zero_edges(&root)?, &target)? {
        return Err(Error::Verification(format!(
            "normalised root of G_({r},{q}) - x{i} misclassifies a pair"
        )));
    }
    Ok(root)
}

/// Root of `G_(r,q) - y_j`, from `G_(q,r) - x_j` with `a <-> b`, `x <-> y`.
fn construct_minus_y(r: usize, q: usize, j: usize) -> Result<LeafRoot> {
    let root = construct_grq_minus_leafroot(q, r, j)?;
    let (tree, weights, k) = root.into_parts();
    let mut t = PhyloTree::new();
    for n in 0..tree.node_count() {
        match tree.label(n) {
            Some(l) => t.add_leaf(&swap_sides(l))?,
            None => t.add_node(),
        };
    }
    for e in tree.edge_ids() {
        let [a, b] = tree.edge(e);
        t.add_edge(a, b);
    }
    WeightedTree::new(t, weights, k)
}

fn swap_sides(l: &str) -> String {
    let (head, rest) = l.split_at(1);
    let h = match head {
        "a" => "b",
        "b" => "a",
        "x" => "y",
        "y" => "x",
        other => other,
    };
    format!("{h}{rest}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeletionMethod {
    /// Direct construction for a deleted `x_i` or `y_i`.
    Construction,
    /// Pendant vertices removed, the root for `G - via` restricted, then
    /// extended back over the pendants.
    PendantExtension { via: String, pendants: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct DeletionCertificate {
    pub deleted: String,
    pub method: DeletionMethod,
    /// Threshold `2p` of the constructed root the certificate started from.
    pub recipe_threshold: u64,
    /// Verified, all weights positive.
    pub root: LeafRoot,
    /// Verdict of the exhaustive oracle, when it was run.
    pub oracle_agrees: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub r: usize,
    pub q: usize,
    pub deletions: Vec<DeletionCertificate>,
}

impl MinimalityReport {
    pub fn all_certified(&self) -> bool {
        self.deletions
            .iter()
            .all(|d| d.oracle_agrees != Some(false))
    }
}

fn certify_deletion(inst: &GrqInstance, v: &str, cap: usize) -> Result<DeletionCertificate> {
    let fail = |why: String| Error::Verification(format!("G_({},{}) - {v}: {why}", inst.r, inst.q));
    let g = inst.graph.without_vertex(v)?;
    let index = |l: &str| l[1..].parse::<usize>().expect("numbered label");
    let (root, method, recipe_threshold) = match &v[..1] {
        "x" | "y" => {
            let root = match &v[..1] {
                "x" => construct_grq_minus_leafroot(inst.r, inst.q, index(v))?,
                _ => construct_minus_y(inst.r, inst.q, index(v))?,
            };
            let k = *root.threshold();
            (root, DeletionMethod::Construction, k)
        }
        _ => {
            let (h, log) = reduce_degree_one(&g);
            let via = log
                .iter()
                .map(|s| s.removed.as_str())
                .find(|l| l.starts_with('x') || l.starts_with('y'))
                .ok_or_else(|| fail("no pendant x or y after deletion".into()))?
                .to_owned();
            let full = match &via[..1] {
                "x" => construct_grq_minus_leafroot(inst.r, inst.q, index(&via))?,
                _ => construct_minus_y(inst.r, inst.q, index(&via))?,
            };
            let k = *full.threshold();
            let keep: Vec<&str> = h.labels().collect();
            let (t, origin) = full.tree().restrict(&keep)?;
            let w = origin.iter().map(|&e| *full.weight(e)).collect();
            let mut root = WeightedTree::new(t, w, *full.threshold())?;
            if !verify_leafroot(&root, &h)? {
                return Err(fail("restricted root fails the reduced graph".into()));
            }
            for step in log.iter().rev() {
                root = extend_root_over_pendant(&root, &step.anchor, &step.removed)?;
            }
            let pendants = log.iter().map(|s| s.removed.clone()).collect();
            (root, DeletionMethod::PendantExtension { via, pendants }, k)
        }
    };
    let root = if root.has_zero_edge() {
        normalize_zero_edges(&root)?
    } else {
        root
    };
    if !verify_leafroot(&root, &g)? {
        return Err(fail("root misclassifies a pair".into()));
    }
    let oracle_agrees = if g.order() <= cap {
        Some(is_leaf_power_exact(&g, cap)?.is_some())
    } else {
        None
    };
    Ok(DeletionCertificate {
        deleted: v.to_owned(),
        method,
        recipe_threshold,
        root,
        oracle_agrees,
    })
}

/// Certifies that every `G_(r,q) - v` is a leaf power by exhibiting a
/// verified root. Deleted graphs with at most `cap` vertices are also run
/// through the exhaustive oracle (`cap = 0` skips it).
pub fn verify_minimality(r: usize, q: usize, cap: usize) -> Result<MinimalityReport> {
    let inst = gen_grq(r, q)?;
    let labels: Vec<String> = inst.graph.labels().map(str::to_owned).collect();
    let deletions = labels
        .par_iter()
        .map(|v| certify_deletion(&inst, v, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalityReport { r, q, deletions })
}

/// Edge weights along the path between two nodes of a root.
pub fn path_weight(root: &LeafRoot, a: NodeId, b: NodeId) -> u64 {
    root.tree()
        .rooting()
        .path_edges(a, b)
        .into_iter()
        .map(|e| *root.weight(e))
        .sum()
}

/// Counts per vertex class, handy for reports.
pub fn class_sizes(inst: &GrqInstance) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("a", inst.r),
        ("b", inst.q),
        ("x", inst.r - 1),
        ("y", inst.q - 1),
    ])
}
