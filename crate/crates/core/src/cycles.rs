//! Alternating cycles and whether a tree topology can satisfy them.
//!
//! An alternating cycle `(x0, y0, ..., x(c-1), y(c-1))` has every `x_i y_i` an
//! edge and every `y_i x_(i+1)` a non-edge, indices mod `c`. A tree can
//! satisfy it exactly when some tree edge lies on more negative paths
//! (`y_i`-`x_(i+1)`) than positive ones (`x_i`-`y_i`).

use std::cmp::Ordering;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::leafroot::normalize_zero_edges;
use crate::lp::ConstraintPair;
use crate::tree::{EdgeId, PhyloTree, Quartet, WeightedTree};
use crate::LeafRoot;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlternatingCycle {
    pairs: Vec<(String, String)>,
}

impl PartialOrd for AlternatingCycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlternatingCycle {
    /// Shorter cycles first, then by label sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.pairs
            .len()
            .cmp(&other.pairs.len())
            .then_with(|| self.pairs.cmp(&other.pairs))
    }
}

impl AlternatingCycle {
    /// Validates the pairs against `g` and stores the canonical rotation or
    /// reflection.
    pub fn new<S: AsRef<str>>(g: &Graph, pairs: &[(S, S)]) -> Result<Self> {
        let c = pairs.len();
        if c < 2 {
            return Err(Error::InvalidParameter(
                "an alternating cycle needs at least two pairs".into(),
            ));
        }
        let ids = pairs
            .iter()
            .map(|(x, y)| Ok((g.id(x.as_ref())?, g.id(y.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        let mut all: Vec<VertexId> = ids.iter().flat_map(|&(x, y)| [x, y]).collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "alternating cycle repeats a vertex".into(),
            ));
        }
        for i in 0..c {
            let (x, y) = ids[i];
            let nx = ids[(i + 1) % c].0;
            if !g.adjacent(x, y) {
                return Err(Error::InvalidParameter(format!(
                    "{} {} must be an edge",
                    g.label(x),
                    g.label(y)
                )));
            }
            if g.adjacent(y, nx) {
                return Err(Error::InvalidParameter(format!(
                    "{} {} must be a non-edge",
                    g.label(y),
                    g.label(nx)
                )));
            }
        }
        let owned = pairs
            .iter()
            .map(|(x, y)| (x.as_ref().to_owned(), y.as_ref().to_owned()))
            .collect();
        Ok(Self::canonical(owned))
    }

    /// `x0 y0 x1 y1 ...` as a flat sequence.
    pub fn from_sequence<S: AsRef<str>>(g: &Graph, seq: &[S]) -> Result<Self> {
        if !seq.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "alternating cycle needs an even number of vertices".into(),
            ));
        }
        let pairs: Vec<(&str, &str)> = seq
            .chunks(2)
            .map(|p| (p[0].as_ref(), p[1].as_ref()))
            .collect();
        Self::new(g, &pairs)
    }

    /// Least label sequence over all rotations and the reversed reading
    /// (`x'_i = y_(c-1-i)`, `y'_i = x_(c-1-i)`), which is always valid too.
    fn canonical(pairs: Vec<(String, String)>) -> Self {
        let c = pairs.len();
        let reversed: Vec<(String, String)> = (0..c)
            .map(|i| {
                let (x, y) = &pairs[c - 1 - i];
                (y.clone(), x.clone())
            })
            .collect();
        let mut best: Option<Vec<(String, String)>> = None;
        for base in [&pairs, &reversed] {
            for s in 0..c {
                let cand: Vec<(String, String)> =
                    (0..c).map(|i| base[(i + s) % c].clone()).collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        Self {
            pairs: best.expect("c >= 2"),
        }
    }

    pub fn half_length(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn x(&self, i: usize) -> &str {
        &self.pairs[i % self.pairs.len()].0
    }

    pub fn y(&self, i: usize) -> &str {
        &self.pairs[i % self.pairs.len()].1
    }

    pub fn vertices(&self) -> Vec<&str> {
        self.pairs
            .iter()
            .flat_map(|(x, y)| [x.as_str(), y.as_str()])
            .collect()
    }

    /// `(E(C), Ē(C))` as a constraint system.
    pub fn constraints(&self) -> ConstraintPair {
        let c = self.half_length();
        ConstraintPair {
            must_close: (0..c)
                .map(|i| (self.x(i).to_owned(), self.y(i).to_owned()))
                .collect(),
            must_separate: (0..c)
                .map(|i| (self.y(i).to_owned(), self.x(i + 1).to_owned()))
                .collect(),
        }
    }

    /// `x0y0|x1y1` for a cycle on four vertices.
    pub fn quartet(&self) -> Option<Quartet> {
        (self.half_length() == 2).then(|| {
            Quartet::new(self.x(0), self.y(0), self.x(1), self.y(1)).expect("distinct vertices")
        })
    }
}

impl std::fmt::Display for AlternatingCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.vertices().join(", "))
    }
}

/// Walks every canonical alternating cycle with at most `max_c` pairs. The
/// canonical reading starts at its least label as `x0`, so the search fixes
/// `x0` and only uses larger labels afterwards; each cycle is met once.
fn walk<B>(
    g: &Graph,
    max_c: usize,
    mut visit: impl FnMut(&[VertexId]) -> ControlFlow<B>,
) -> Option<B> {
    let mut order: Vec<VertexId> = g.vertex_ids().collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut rank = vec![0; g.order()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut used = vec![false; g.order()];
    let mut seq = Vec::with_capacity(2 * max_c);

    // `seq` ends with some x_i; choose y_i, then close or choose x_(i+1).
    fn grow<B>(
        g: &Graph,
        rank: &[usize],
        used: &mut [bool],
        seq: &mut Vec<VertexId>,
        max_c: usize,
        visit: &mut impl FnMut(&[VertexId]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let x0 = seq[0];
        let xi = *seq.last().expect("nonempty");
        let c_now = seq.len() / 2 + 1;
        for y in g.neighbors(xi) {
            if used[y] || rank[y] < rank[x0] {
                continue;
            }
            used[y] = true;
            seq.push(y);
            if c_now >= 2 && !g.adjacent(y, x0) {
                visit(seq)?;
            }
            if c_now < max_c {
                for x in g.vertex_ids() {
                    if used[x] || rank[x] < rank[x0] || x == y || g.adjacent(x, y) {
                        continue;
                    }
                    used[x] = true;
                    seq.push(x);
                    grow(g, rank, used, seq, max_c, visit)?;
                    seq.pop();
                    used[x] = false;
                }
            }
            seq.pop();
            used[y] = false;
        }
        ControlFlow::Continue(())
    }

    for &x0 in &order {
        used[x0] = true;
        seq.push(x0);
        if let ControlFlow::Break(b) = grow(g, &rank, &mut used, &mut seq, max_c, &mut visit) {
            return Some(b);
        }
        seq.pop();
        used[x0] = false;
    }
    None
}

fn from_ids(g: &Graph, seq: &[VertexId]) -> AlternatingCycle {
    AlternatingCycle {
        pairs: seq
            .chunks(2)
            .map(|p| (g.label(p[0]).to_owned(), g.label(p[1]).to_owned()))
            .collect(),
    }
}

/// All alternating cycles with `2 <= c <= max_half_length`, one per cycle up
/// to rotation and reflection, shortest first.
pub fn enumerate_alternating_cycles(
    g: &Graph,
    max_half_length: usize,
) -> Result<Vec<AlternatingCycle>> {
    if max_half_length < 2 {
        return Err(Error::InvalidParameter(format!(
            "max half length must be at least 2, got {max_half_length}"
        )));
    }
    let mut out = Vec::new();
    walk::<()>(g, max_half_length, |seq| {
        out.push(from_ids(g, seq));
        ControlFlow::Continue(())
    });
    out.sort();
    Ok(out)
}

/// Whether `g` has any alternating cycle at all (`c` up to `n / 2`).
pub fn has_alternating_cycle(g: &Graph) -> bool {
    first_alternating_cycle(g).is_some()
}

pub fn first_alternating_cycle(g: &Graph) -> Option<AlternatingCycle> {
    let max_c = g.order() / 2;
    if max_c < 2 {
        return None;
    }
    walk(g, max_c, |seq| ControlFlow::Break(from_ids(g, seq)))
}

/// Per tree edge, how many positive and negative paths of the cycle use it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPathCounts {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl SignedPathCounts {
    /// Edges with more negative than positive paths.
    pub fn witnesses(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.positive.len()).filter(|&e| self.negative[e] > self.positive[e])
    }
}

pub fn signed_path_counts(t: &PhyloTree, cyc: &AlternatingCycle) -> Result<SignedPathCounts> {
    let r = t.rooting();
    let m = t.edge_count();
    let mut positive = vec![0; m];
    let mut negative = vec![0; m];
    for i in 0..cyc.half_length() {
        let (x, y, nx) = (t.leaf(cyc.x(i))?, t.leaf(cyc.y(i))?, t.leaf(cyc.x(i + 1))?);
        for e in r.path_edges(x, y) {
            positive[e] += 1;
        }
        for e in r.path_edges(y, nx) {
            negative[e] += 1;
        }
    }
    Ok(SignedPathCounts { positive, negative })
}

pub fn can_satisfy_cycle(t: &PhyloTree, cyc: &AlternatingCycle) -> Result<bool> {
    Ok(signed_path_counts(t, cyc)?.witnesses().next().is_some())
}

/// The first cycle (in enumeration order, `c <= max_half_length`) that `t`
/// cannot satisfy.
pub fn check_necessary_condition(
    g: &Graph,
    t: &PhyloTree,
    max_half_length: usize,
) -> Result<Option<AlternatingCycle>> {
    if !t
        .leaf_labels()
        .eq(sorted_labels(g).iter().map(String::as_str))
    {
        return Err(Error::LeafSetMismatch(
            "tree leaves differ from graph vertices".into(),
        ));
    }
    for cyc in enumerate_alternating_cycles(g, max_half_length)? {
        if !can_satisfy_cycle(t, &cyc)? {
            return Ok(Some(cyc));
        }
    }
    Ok(None)
}

fn sorted_labels(g: &Graph) -> Vec<String> {
    let mut v: Vec<String> = g.labels().map(str::to_owned).collect();
    v.sort();
    v
}

/// Output of [`construct_cycle_weighting`].
#[derive(Debug, Clone)]
pub struct CycleWeighting {
    /// Edge carrying `e = c^2`.
    pub witness_edge: EdgeId,
    /// The cycle as traversed, rotated so that `y0` is negative.
    pub traversal: Vec<(String, String)>,
    /// `2 c^10`.
    pub k: u64,
    /// Greedy value at `x0` once the traversal closes; at most `k / 2`.
    pub final_x0: u64,
    /// Smallest leaf weight assigned by the greedy rules.
    pub min_leaf_weight: u64,
    /// Weights with zeros on interior edges, threshold `k`.
    pub raw: LeafRoot,
    /// `raw` after zero-edge normalisation.
    pub normalized: LeafRoot,
}

/// Greedy weighting for a satisfiable cycle.
///
/// Take the edge `uv` with the largest surplus of negative over positive
/// paths and view the tree as the double star around it. Put `e = c^2` on `uv`,
/// use `k = 2 c^10`, rotate so `y0` is negative (separated from `x1`, not
/// from `x0`), set `f(y0) = k/2` and walk `x1, y1, ..., x0`:
///
/// * `f(x_i) = k + 1 - f(y_(i-1))`, less `e` when `x_i` and `y_(i-1)` are separated;
/// * `f(y_i) = k - f(x_i)`, less `e` when `y_i` and `x_i` are separated.
///
/// Leaf weights go on pendant edges, interior edges get 0, leaves outside the
/// cycle get 1.
pub fn construct_cycle_weighting(t: &PhyloTree, cyc: &AlternatingCycle) -> Result<CycleWeighting> {
    let counts = signed_path_counts(t, cyc)?;
    let uv = counts
        .witnesses()
        .max_by(|&a, &b| {
            let s = |e: EdgeId| counts.negative[e] as i64 - counts.positive[e] as i64;
            s(a).cmp(&s(b)).then(b.cmp(&a))
        })
        .ok_or_else(|| {
            Error::Precondition("no edge lies on more negative than positive paths".into())
        })?;

    let side = side_of(t, uv);
    let c = cyc.half_length();
    let sep = |a: &str, b: &str| -> Result<bool> { Ok(side[t.leaf(a)?] != side[t.leaf(b)?]) };

    let mut start = None;
    for i in 0..c {
        if sep(cyc.y(i), cyc.x(i + 1))? && !sep(cyc.y(i), cyc.x(i))? {
            start = Some(i);
            break;
        }
    }
    let s = start.ok_or_else(|| Error::Verification("no negative y on a witness edge".into()))?;
    let xs: Vec<&str> = (0..c).map(|i| cyc.x(i + s)).collect();
    let ys: Vec<&str> = (0..c).map(|i| cyc.y(i + s)).collect();

    let c128 = c as i128;
    let e = c128.pow(2);
    let k = 2 * c128.pow(10);
    let mut fx = vec![0i128; c];
    let mut fy = vec![0i128; c];
    fy[0] = k / 2;
    for step in 1..=c {
        let i = step % c;
        let prev = fy[step - 1];
        fx[i] = k + 1 - prev - if sep(xs[i], ys[step - 1])? { e } else { 0 };
        if i != 0 {
            fy[i] = k - fx[i] - if sep(ys[i], xs[i])? { e } else { 0 };
        }
    }
    if fx[0] > k / 2 {
        return Err(Error::Verification(format!(
            "greedy closes at f(x0) = {} > k/2 = {}",
            fx[0],
            k / 2
        )));
    }
    let min_leaf = fx.iter().chain(&fy).copied().min().expect("c >= 2");
    if min_leaf <= 0 {
        return Err(Error::Verification(
            "greedy produced a nonpositive weight".into(),
        ));
    }
    let u = |v: i128| u64::try_from(v).map_err(|_| Error::Overflow("cycle weighting"));

    let mut weights = vec![0u64; t.edge_count()];
    for l in t.leaf_labels() {
        let n = t.leaf(l)?;
        if let Some(&(_, pe)) = t.neighbors(n).first() {
            weights[pe] = 1;
        }
    }
    for i in 0..c {
        for (z, f) in [(xs[i], fx[i]), (ys[i], fy[i])] {
            let n = t.leaf(z)?;
            let &(_, pe) = t
                .neighbors(n)
                .first()
                .expect("cycle leaves are not isolated");
            debug_assert_ne!(pe, uv);
            weights[pe] = u(f)?;
        }
    }
    weights[uv] = u(e)?;
    let raw = WeightedTree::new(t.clone(), weights, u(k)?)?;
    if !weighting_satisfies(&raw, cyc)? {
        return Err(Error::Verification(
            "greedy weighting misses the cycle".into(),
        ));
    }
    let normalized = normalize_zero_edges(&raw)?;
    if !weighting_satisfies(&normalized, cyc)? {
        return Err(Error::Verification(
            "normalised weighting misses the cycle".into(),
        ));
    }
    Ok(CycleWeighting {
        witness_edge: uv,
        traversal: xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
        k: u(k)?,
        final_x0: u(fx[0])?,
        min_leaf_weight: u(min_leaf)?,
        raw,
        normalized,
    })
}

/// Node sides after deleting edge `uv`: `true` on the side of its second end.
fn side_of(t: &PhyloTree, uv: EdgeId) -> Vec<bool> {
    let [_, b] = t.edge(uv);
    let mut side = vec![false; t.node_count()];
    side[b] = true;
    let mut stack = vec![b];
    while let Some(x) = stack.pop() {
        for &(y, f) in t.neighbors(x) {
            if f != uv && !side[y] {
                side[y] = true;
                stack.push(y);
            }
        }
    }
    side
}

/// `d(x_i, y_i) <= k` and `d(y_i, x_(i+1)) > k` for every `i`.
pub fn weighting_satisfies(wt: &LeafRoot, cyc: &AlternatingCycle) -> Result<bool> {
    let k = *wt.threshold();
    for i in 0..cyc.half_length() {
        if wt.distance(cyc.x(i), cyc.y(i))? > k || wt.distance(cyc.y(i), cyc.x(i + 1))? <= k {
            return Ok(false);
        }
    }
    Ok(true)
}
