//! Restricted chordless cycles and the reduction to finding an induced
//! `G_{r,q}` in a chordal graph.
//!
//! An instance is a bipartite graph `G = (U ∪ V, E)` with `s, t ∈ U` of degree
//! two and no common neighbour; the question is whether some chordless cycle
//! passes through both. [`build_h`] turns it into a chordal graph `H` that has
//! an induced `G_{r,q}` exactly when the answer is yes. Both sides are solved
//! exactly here so the equivalence can be checked instance by instance.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::grq::gen_grq;

/// Default vertex cap for [`cross_check_reduction`].
pub const DEFAULT_RCC_CAP: usize = 14;

#[derive(Debug, Clone)]
pub struct RccInstance {
    graph: Graph,
    s: String,
    t: String,
    u_part: BTreeSet<String>,
}

impl RccInstance {
    /// `u_part` lists `U`; every other vertex is in `V`.
    pub fn new<S: AsRef<str>>(graph: Graph, s: &str, t: &str, u_part: &[S]) -> Result<Self> {
        let u_part: BTreeSet<String> = u_part.iter().map(|l| l.as_ref().to_owned()).collect();
        for l in &u_part {
            graph.id(l)?;
        }
        let inst = Self {
            graph,
            s: s.to_owned(),
            t: t.to_owned(),
            u_part,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Two-colours each component, putting `s` (or failing that `t`, or the
    /// earliest vertex) in `U`.
    pub fn with_inferred_parts(graph: Graph, s: &str, t: &str) -> Result<Self> {
        let (si, ti) = (graph.id(s)?, graph.id(t)?);
        let n = graph.order();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let starts = [si, ti].into_iter().chain(graph.vertex_ids());
        for start in starts {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(true);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].expect("coloured");
                for y in graph.neighbors(x) {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => {
                            return Err(Error::InvalidInstance(format!(
                                "graph is not bipartite: edge {} {} inside one side",
                                graph.label(x),
                                graph.label(y)
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        let u: Vec<&str> = graph
            .vertex_ids()
            .filter(|&v| side[v] == Some(true))
            .map(|v| graph.label(v))
            .collect();
        let u: Vec<String> = u.into_iter().map(str::to_owned).collect();
        Self::new(graph, s, t, &u)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.graph;
        let bad = |m: String| Err(Error::InvalidInstance(m));
        let (s, t) = (g.id(&self.s)?, g.id(&self.t)?);
        if s == t {
            return bad("s and t must differ".into());
        }
        for l in [&self.s, &self.t] {
            if !self.u_part.contains(l) {
                return bad(format!("`{l}` must lie in U"));
            }
        }
        for (a, b) in g.edges() {
            if self.in_u(a) == self.in_u(b) {
                return bad(format!(
                    "edge {} {} does not cross the bipartition",
                    g.label(a),
                    g.label(b)
                ));
            }
        }
        for (v, l) in [(s, &self.s), (t, &self.t)] {
            if g.degree(v) != 2 {
                return bad(format!("`{l}` has degree {}, expected 2", g.degree(v)));
            }
        }
        if let Some(c) = g.neighbors(s).find(|&c| g.adjacent(c, t)) {
            return bad(format!("s and t share the neighbour `{}`", g.label(c)));
        }
        Ok(())
    }

    fn in_u(&self, v: VertexId) -> bool {
        self.u_part.contains(self.graph.label(v))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn s(&self) -> &str {
        &self.s
    }

    pub fn t(&self) -> &str {
        &self.t
    }

    /// `U` in graph order.
    pub fn u_part(&self) -> Vec<&str> {
        self.graph
            .labels()
            .filter(|l| self.u_part.contains(*l))
            .collect()
    }

    /// `V` in graph order.
    pub fn v_part(&self) -> Vec<&str> {
        self.graph
            .labels()
            .filter(|l| !self.u_part.contains(*l))
            .collect()
    }

    /// `N(s)` and `N(t)` in graph order.
    fn terminals(&self) -> ([VertexId; 2], [VertexId; 2]) {
        let g = &self.graph;
        let two = |l: &str| {
            let v: Vec<VertexId> = g.neighbors(g.id(l).expect("validated")).collect();
            [v[0], v[1]]
        };
        (two(&self.s), two(&self.t))
    }
}

/// Where a vertex of `H` comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    S1,
    S2,
    T1,
    T2,
    /// `u'` for `u ∈ U \ {s, t}`.
    U(String),
    /// `v'` for `v ∈ V`.
    V(String),
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    /// Vertices `s1, s2, t1, t2`, then `u'` and `v'` in the order of `G`.
    pub h: Graph,
    pub origin: BTreeMap<String, Origin>,
    /// `N(s) = {c1, c2}` as labels of `G`.
    pub c: [String; 2],
    /// `N(t) = {d1, d2}` as labels of `G`.
    pub d: [String; 2],
}

impl ReductionOutput {
    /// `X_U` followed by the four terminals.
    pub fn x_u_star(&self) -> Vec<&str> {
        self.h
            .labels()
            .filter(|l| !matches!(self.origin[*l], Origin::V(_)))
            .collect()
    }

    pub fn x_v(&self) -> Vec<&str> {
        self.h
            .labels()
            .filter(|l| matches!(self.origin[*l], Origin::V(_)))
            .collect()
    }
}

fn prime(l: &str) -> String {
    format!("{l}'")
}

/// `X_U^* = X_U ∪ {s1, s2, t1, t2}` is a clique minus `s_i t_j`; `u'v'` is an
/// edge when `uv` is; and `s1 c1', s2 c2', t1 d1', t2 d2'` are added.
pub fn build_h(inst: &RccInstance) -> ReductionOutput {
    let g = &inst.graph;
    let ([c1, c2], [d1, d2]) = inst.terminals();
    let mut h = Graph::new();
    let mut origin = BTreeMap::new();
    for (l, o) in [
        ("s1", Origin::S1),
        ("s2", Origin::S2),
        ("t1", Origin::T1),
        ("t2", Origin::T2),
    ] {
        h.add_vertex(l);
        origin.insert(l.to_owned(), o);
    }
    let inner_u: Vec<&str> = inst
        .u_part()
        .into_iter()
        .filter(|&l| l != inst.s && l != inst.t)
        .collect();
    for &u in &inner_u {
        h.add_vertex(&prime(u));
        origin.insert(prime(u), Origin::U(u.to_owned()));
    }
    for v in inst.v_part() {
        h.add_vertex(&prime(v));
        origin.insert(prime(v), Origin::V(v.to_owned()));
    }
    let star: Vec<String> = ["s1", "s2", "t1", "t2"]
        .into_iter()
        .map(str::to_owned)
        .chain(inner_u.iter().map(|u| prime(u)))
        .collect();
    for i in 0..star.len() {
        for j in i + 1..star.len() {
            // The four missing pairs are s_i t_j; ids 0, 1 are s and 2, 3 are t.
            if i < 2 && (2..4).contains(&j) {
                continue;
            }
            h.add_edge(&star[i], &star[j]).expect("distinct labels");
        }
    }
    for &u in &inner_u {
        let ui = g.id(u).expect("own vertex");
        for v in g.neighbors(ui) {
            h.add_edge(&prime(u), &prime(g.label(v)))
                .expect("distinct labels");
        }
    }
    for (term, x) in [("s1", c1), ("s2", c2), ("t1", d1), ("t2", d2)] {
        h.add_edge(term, &prime(g.label(x)))
            .expect("distinct labels");
    }
    let name = |v: VertexId| g.label(v).to_owned();
    ReductionOutput {
        h,
        origin,
        c: [name(c1), name(c2)],
        d: [name(d1), name(d2)],
    }
}

/// A chordless cycle through `s` and `t`, as `s, c1, ..., t, ..., c2`.
///
/// Every such cycle leaves `s` through one of its two neighbours and returns
/// through the other, so the search grows induced paths from `s` via `c1`
/// and closes at `c2`.
pub fn find_chordless_st_cycle(inst: &RccInstance) -> Option<Vec<String>> {
    let g = &inst.graph;
    let (s, t) = (g.id(&inst.s).ok()?, g.id(&inst.t).ok()?);
    let ([c1, c2], _) = inst.terminals();
    let mut path = vec![s, c1];
    let mut on = vec![false; g.order()];
    on[s] = true;
    on[c1] = true;

    fn grow(
        g: &Graph,
        t: VertexId,
        c2: VertexId,
        path: &mut Vec<VertexId>,
        on: &mut [bool],
    ) -> bool {
        let last = *path.last().expect("nonempty");
        let inner: Vec<VertexId> = path[1..path.len() - 1].to_vec();
        let cands: Vec<VertexId> = g.neighbors(last).filter(|&w| !on[w]).collect();
        for w in cands {
            if inner.iter().any(|&p| g.adjacent(w, p)) {
                continue;
            }
            if w == c2 {
                if on[t] {
                    path.push(w);
                    return true;
                }
                continue;
            }
            on[w] = true;
            path.push(w);
            if grow(g, t, c2, path, on) {
                return true;
            }
            path.pop();
            on[w] = false;
        }
        false
    }

    grow(g, t, c2, &mut path, &mut on)
        .then(|| path.iter().map(|&v| g.label(v).to_owned()).collect())
}

/// Whether `cycle` (without repeating its first vertex) is a chordless cycle
/// of `g` on at least four vertices.
pub fn is_chordless_cycle<S: AsRef<str>>(g: &Graph, cycle: &[S]) -> Result<bool> {
    let ids = cycle
        .iter()
        .map(|l| g.id(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let n = ids.len();
    if n < 4 || ids.iter().collect::<BTreeSet<_>>().len() != n {
        return Ok(false);
    }
    for i in 0..n {
        for j in i + 1..n {
            let consecutive = j == i + 1 || (i == 0 && j == n - 1);
            if g.adjacent(ids[i], ids[j]) != consecutive {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An induced copy of `G_(r,q)`: each of its labels mapped to a host vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrqEmbedding {
    pub r: usize,
    pub q: usize,
    pub map: BTreeMap<String, String>,
}

impl GrqEmbedding {
    /// Checks injectivity and that every pair is adjacent in the host exactly
    /// when it is in `G_(r,q)`.
    pub fn verify(&self, host: &Graph) -> Result<bool> {
        let pattern = gen_grq(self.r, self.q)?.graph;
        if self.map.len() != pattern.order()
            || self.map.values().collect::<BTreeSet<_>>().len() != self.map.len()
        {
            return Ok(false);
        }
        let mut img = Vec::with_capacity(pattern.order());
        for l in pattern.labels() {
            let Some(h) = self.map.get(l) else {
                return Ok(false);
            };
            img.push(host.id(h)?);
        }
        for a in pattern.vertex_ids() {
            for b in a + 1..pattern.order() {
                if pattern.adjacent(a, b) != host.adjacent(img[a], img[b]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn host_vertices(&self) -> Vec<&str> {
        self.map.values().map(String::as_str).collect()
    }
}

/// Backtracking state: `k` holds the clique part chosen so far, `conns` the
/// degree-two connectors, `seqs[0]` and `seqs[1]` the `a` and `b` chains.
struct Finder<'a> {
    h: &'a Graph,
    used: Vec<bool>,
    k: Vec<VertexId>,
    conns: Vec<VertexId>,
    seqs: [Vec<VertexId>; 2],
    ends: [VertexId; 2],
}

impl Finder<'_> {
    /// Extends chain `side` until it reaches its end corner.
    fn chain(&mut self, side: usize) -> bool {
        let h = self.h;
        let prev = *self.seqs[side].last().expect("chain starts at a corner");
        let end = self.ends[side];
        let cands: Vec<VertexId> = h.neighbors(prev).filter(|&x| !self.used[x]).collect();
        for x in cands {
            if self
                .k
                .iter()
                .chain(&self.conns)
                .any(|&w| w != prev && w != end && h.adjacent(x, w))
            {
                continue;
            }
            self.used[x] = true;
            self.conns.push(x);
            self.seqs[side].push(x);
            if h.adjacent(x, end) {
                // A connector straight from corner to corner would mean r = 2.
                if self.seqs[side].len() > 2 && (side == 1 || self.chain(1)) {
                    return true;
                }
            } else {
                let next: Vec<VertexId> = h.neighbors(x).filter(|&a| !self.used[a]).collect();
                for a in next {
                    if !self.k.iter().all(|&w| h.adjacent(a, w))
                        || self.conns.iter().any(|&c| c != x && h.adjacent(a, c))
                    {
                        continue;
                    }
                    self.used[a] = true;
                    self.k.push(a);
                    self.seqs[side].push(a);
                    if self.chain(side) {
                        return true;
                    }
                    self.seqs[side].pop();
                    self.k.pop();
                    self.used[a] = false;
                }
            }
            self.seqs[side].pop();
            self.conns.pop();
            self.used[x] = false;
        }
        false
    }
}

/// Searches `h` for an induced `G_(r,q)` with `r, q >= 3`.
///
/// Corners `a1, b1, ar, bq` are tried first: `a1 b1` and `ar bq` are edges and
/// the four cross pairs are not. The symmetries of `G_(r,q)` act transitively
/// on the corners, so `a1` can be taken as the corner with the smallest id.
/// Each chain then alternates a connector adjacent only to its two chain
/// neighbours with a clique vertex adjacent to everything in the clique part.
/// Exponential in the worst case.
pub fn find_induced_grq(h: &Graph) -> Option<GrqEmbedding> {
    let mut corners = Vec::new();
    for a1 in h.vertex_ids() {
        for b1 in h.neighbors(a1).filter(|&b| b > a1) {
            for ar in h.vertex_ids().filter(|&x| x > a1 && x != b1) {
                if h.adjacent(ar, a1) || h.adjacent(ar, b1) {
                    continue;
                }
                for bq in h.neighbors(ar).filter(|&x| x > a1 && x != b1) {
                    if !h.adjacent(bq, a1) && !h.adjacent(bq, b1) {
                        corners.push([a1, b1, ar, bq]);
                    }
                }
            }
        }
    }
    let found = corners.par_iter().find_map_first(|&[a1, b1, ar, bq]| {
        let mut f = Finder {
            h,
            used: vec![false; h.order()],
            k: vec![a1, b1, ar, bq],
            conns: Vec::new(),
            seqs: [vec![a1], vec![b1]],
            ends: [ar, bq],
        };
        for c in [a1, b1, ar, bq] {
            f.used[c] = true;
        }
        f.chain(0).then(|| {
            let mut seqs = f.seqs;
            seqs[0].push(ar);
            seqs[1].push(bq);
            seqs
        })
    })?;
    let label = |v: &VertexId| h.label(*v).to_owned();
    let a: Vec<String> = found[0].iter().map(label).collect();
    let b: Vec<String> = found[1].iter().map(label).collect();
    let emb = named_embedding(&a, &b);
    assert!(
        emb.verify(h).unwrap_or(false),
        "induced G_(r,q) search returned a copy that does not verify"
    );
    Some(emb)
}

/// The copy of `G_(r,q)` that a chordless `s`-`t` cycle induces in `H`.
/// `cycle` must start `s, c1` and pass through `t`, as returned by
/// [`find_chordless_st_cycle`]. The result has `r + q = l + 2` for a cycle
/// of length `2l`.
pub fn grq_from_cycle(
    inst: &RccInstance,
    out: &ReductionOutput,
    cycle: &[String],
) -> Result<GrqEmbedding> {
    let g = &inst.graph;
    if !is_chordless_cycle(g, cycle)? || cycle[0] != inst.s {
        return Err(Error::InvalidParameter(
            "expected a chordless cycle starting at s".into(),
        ));
    }
    let ti = cycle
        .iter()
        .position(|l| *l == inst.t)
        .ok_or_else(|| Error::InvalidParameter("cycle misses t".into()))?;
    let p1: Vec<&str> = cycle[..=ti].iter().map(String::as_str).collect();
    let mut p2 = vec![inst.s.as_str()];
    p2.extend(cycle[ti..].iter().rev().map(String::as_str));
    let side_of = |first: &str, last: &str| -> Result<(String, String)> {
        let ci = out.c.iter().position(|c| c == first);
        let di = out.d.iter().position(|d| d == last);
        match (ci, di) {
            (Some(ci), Some(di)) => Ok((format!("s{}", ci + 1), format!("t{}", di + 1))),
            _ => Err(Error::Verification(
                "path does not start at N(s) and end at N(t)".into(),
            )),
        }
    };
    let chain = |p: &[&str]| -> Result<Vec<String>> {
        let (start, end) = side_of(p[1], p[p.len() - 2])?;
        let mut v = vec![start];
        v.extend(p[1..p.len() - 1].iter().map(|l| prime(l)));
        v.push(end);
        Ok(v)
    };
    let (a, b) = (chain(&p1)?, chain(&p2)?);
    let emb = named_embedding(&a, &b);
    if !emb.verify(&out.h)? {
        return Err(Error::Verification(
            "cycle does not induce G_(r,q) in H".into(),
        ));
    }
    Ok(emb)
}

fn named_embedding(a: &[String], b: &[String]) -> GrqEmbedding {
    let mut map = BTreeMap::new();
    for (chain, (k, c)) in [(a, ("a", "x")), (b, ("b", "y"))] {
        for (pos, v) in chain.iter().enumerate() {
            let tag = if pos % 2 == 0 { k } else { c };
            map.insert(format!("{tag}{}", pos / 2 + 1), v.clone());
        }
    }
    GrqEmbedding {
        r: a.len().div_ceil(2),
        q: b.len().div_ceil(2),
        map,
    }
}

/// Reads a chordless `s`-`t` cycle of `G` off an induced `G_(r,q)` in `H`:
/// the `a` chain and the `b` chain become the two independent paths. The
/// cycle is returned as `s, c1, ..., t, ..., c2`.
pub fn cycle_from_grq(
    inst: &RccInstance,
    out: &ReductionOutput,
    emb: &GrqEmbedding,
) -> Result<Vec<String>> {
    if !emb.verify(&out.h)? {
        return Err(Error::InvalidParameter(
            "embedding does not verify in H".into(),
        ));
    }
    let back = |l: &str| -> Result<String> {
        Ok(match out.origin.get(l) {
            Some(Origin::S1 | Origin::S2) => inst.s.clone(),
            Some(Origin::T1 | Origin::T2) => inst.t.clone(),
            Some(Origin::U(x) | Origin::V(x)) => x.clone(),
            None => return Err(Error::UnknownVertex(l.to_owned())),
        })
    };
    let chain = |k: &str, c: &str, n: usize| -> Result<Vec<String>> {
        let mut v = Vec::with_capacity(2 * n - 1);
        for i in 1..=n {
            v.push(back(&emb.map[&format!("{k}{i}")])?);
            if i < n {
                v.push(back(&emb.map[&format!("{c}{i}")])?);
            }
        }
        Ok(v)
    };
    let (mut a, mut b) = (chain("a", "x", emb.r)?, chain("b", "y", emb.q)?);
    if a[0] != b[0] || a[a.len() - 1] != b[b.len() - 1] || a[0] == a[a.len() - 1] {
        return Err(Error::Verification(
            "corners of the copy do not pair up as {s1, s2} and {t1, t2}".into(),
        ));
    }
    if a[0] == inst.t {
        a.reverse();
        b.reverse();
    }
    if a.get(1) != Some(&out.c[0]) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut cycle = a;
    cycle.extend(b[1..b.len() - 1].iter().rev().cloned());
    if !is_chordless_cycle(&inst.graph, &cycle)? {
        return Err(Error::Verification(
            "paths read off the copy do not form a chordless cycle".into(),
        ));
    }
    Ok(cycle)
}

/// Both exact solvers on one instance, plus the translations between their
/// answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub cycle: Option<Vec<String>>,
    pub embedding: Option<GrqEmbedding>,
    /// The copy built from `cycle`, if there was one.
    pub from_cycle: Option<GrqEmbedding>,
    /// The cycle read off `embedding`, if there was one.
    pub from_embedding: Option<Vec<String>>,
}

impl CrossCheckReport {
    pub fn agree(&self) -> bool {
        self.cycle.is_some() == self.embedding.is_some()
    }
}

/// Runs [`find_chordless_st_cycle`] on the instance and [`find_induced_grq`]
/// on `H`, and translates each positive answer into the other's terms.
pub fn cross_check_reduction(inst: &RccInstance, cap: usize) -> Result<CrossCheckReport> {
    if inst.graph.order() > cap {
        return Err(Error::CapExceeded {
            what: "restricted chordless cycle instance",
            size: inst.graph.order(),
            cap,
        });
    }
    let out = build_h(inst);
    let cycle = find_chordless_st_cycle(inst);
    let embedding = find_induced_grq(&out.h);
    let from_cycle = match &cycle {
        Some(c) => {
            let e = grq_from_cycle(inst, &out, c)?;
            if e.r + e.q != c.len() / 2 + 2 {
                return Err(Error::Verification(format!(
                    "cycle of length {} gave G_({},{})",
                    c.len(),
                    e.r,
                    e.q
                )));
            }
            Some(e)
        }
        None => None,
    };
    let from_embedding = match &embedding {
        Some(e) => Some(cycle_from_grq(inst, &out, e)?),
        None => None,
    };
    Ok(CrossCheckReport {
        cycle,
        embedding,
        from_cycle,
        from_embedding,
    })
}

/// Bipartite instance built around a planted chordless cycle
/// `s - ... - t - ... - s` whose two arcs have `inner.0` and `inner.1`
/// interior `U` vertices (at least one each). `extra_u` and `extra_v` more
/// vertices are added, and every `U`-`V` pair that is not a cycle pair and
/// avoids `s` and `t` becomes an edge with probability `p`.
pub fn planted_instance<R: Rng + ?Sized>(
    rng: &mut R,
    inner: (usize, usize),
    extra_u: usize,
    extra_v: usize,
    p: f64,
) -> Result<RccInstance> {
    if inner.0 == 0 || inner.1 == 0 {
        return Err(Error::InvalidParameter(
            "each arc needs an interior U vertex".into(),
        ));
    }
    let mut g = Graph::new();
    let (mut nu, mut nv) = (0, 0);
    let mut fresh = |g: &mut Graph, u_side: bool| {
        let l = if u_side {
            nu += 1;
            format!("u{nu}")
        } else {
            nv += 1;
            format!("v{nv}")
        };
        g.add_vertex(&l);
        l
    };
    g.add_vertex("s");
    g.add_vertex("t");
    let mut cycle = vec!["s".to_owned()];
    for (k, arc) in [inner.0, inner.1].into_iter().enumerate() {
        for _ in 0..arc {
            cycle.push(fresh(&mut g, false));
            cycle.push(fresh(&mut g, true));
        }
        cycle.push(fresh(&mut g, false));
        if k == 0 {
            cycle.push("t".to_owned());
        }
    }
    for i in 0..cycle.len() {
        g.add_edge(&cycle[i], &cycle[(i + 1) % cycle.len()])?;
    }
    let on_cycle: BTreeSet<String> = cycle.iter().cloned().collect();
    for _ in 0..extra_u {
        fresh(&mut g, true);
    }
    for _ in 0..extra_v {
        fresh(&mut g, false);
    }
    add_noise(rng, &mut g, p, |a, b| {
        on_cycle.contains(a) && on_cycle.contains(b)
    });
    let u: Vec<String> = g
        .labels()
        .filter(|l| *l == "s" || *l == "t" || l.starts_with('u'))
        .map(str::to_owned)
        .collect();
    RccInstance::new(g, "s", "t", &u)
}

/// Random `U`-`V` edges avoiding `s`, `t` and pairs where `skip` holds.
fn add_noise<R: Rng + ?Sized>(
    rng: &mut R,
    g: &mut Graph,
    p: f64,
    skip: impl Fn(&str, &str) -> bool,
) {
    let us: Vec<String> = g
        .labels()
        .filter(|l| l.starts_with('u'))
        .map(str::to_owned)
        .collect();
    let vs: Vec<String> = g
        .labels()
        .filter(|l| l.starts_with('v'))
        .map(str::to_owned)
        .collect();
    for u in &us {
        for v in &vs {
            if !skip(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).expect("distinct labels");
            }
        }
    }
}

/// `U = {s, t, u1, ..}` with `n_u` vertices and `V = {v1, ..}` with `n_v`;
/// `s` and `t` get two private neighbours each, other pairs are edges with
/// probability `p`. Needs `n_u >= 2` and `n_v >= 4`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n_u: usize,
    n_v: usize,
    p: f64,
) -> Result<RccInstance> {
    if n_u < 2 || n_v < 4 {
        return Err(Error::InvalidParameter(format!(
            "need |U| >= 2 and |V| >= 4, got {n_u} and {n_v}"
        )));
    }
    let mut g = Graph::with_vertices(["s", "t"]);
    for i in 1..=n_u - 2 {
        g.add_vertex(&format!("u{i}"));
    }
    let vs: Vec<String> = (1..=n_v).map(|i| format!("v{i}")).collect();
    for v in &vs {
        g.add_vertex(v);
    }
    let picks: Vec<&String> = vs.choose_multiple(rng, 4).collect();
    for (term, v) in [
        ("s", picks[0]),
        ("s", picks[1]),
        ("t", picks[2]),
        ("t", picks[3]),
    ] {
        g.add_edge(term, v)?;
    }
    add_noise(rng, &mut g, p, |_, _| false);
    let u: Vec<String> = g
        .labels()
        .filter(|l| *l == "s" || *l == "t" || l.starts_with('u'))
        .map(str::to_owned)
        .collect();
    RccInstance::new(g, "s", "t", &u)
}

/// A random instance in which `c1` and `c2` get the same neighbourhood.
/// Any cycle through `s` then has the chord `u c2`, where `u` follows `c1`,
/// unless it is the 4-cycle `s c1 u c2`, which cannot contain `t`.
pub fn forced_no_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n_u: usize,
    n_v: usize,
    p: f64,
) -> Result<RccInstance> {
    let inst = random_instance(rng, n_u, n_v, p)?;
    let mut g = inst.graph.clone();
    let ([c1, c2], _) = inst.terminals();
    let (l1, l2) = (g.label(c1).to_owned(), g.label(c2).to_owned());
    let union: Vec<String> = g
        .neighbors(c1)
        .chain(g.neighbors(c2))
        .map(|v| g.label(v).to_owned())
        .filter(|l| l != "s")
        .collect();
    for u in union {
        g.add_edge(&u, &l1)?;
        g.add_edge(&u, &l2)?;
    }
    let u: Vec<&str> = inst.u_part();
    RccInstance::new(g, "s", "t", &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use crate::graph::is_chordal;
    use rand::SeedableRng;

    /// The 8-cycle `s v1 u1 v2 t v3 u2 v4`.
    fn eight_cycle() -> RccInstance {
        let g = Graph::from_edges([
            ("s", "v1"),
            ("v1", "u1"),
            ("u1", "v2"),
            ("v2", "t"),
            ("t", "v3"),
            ("v3", "u2"),
            ("u2", "v4"),
            ("v4", "s"),
        ])
        .unwrap();
        RccInstance::with_inferred_parts(g, "s", "t").unwrap()
    }

    #[test]
    fn validation() {
        let g = Graph::from_edges([("s", "v1"), ("s", "v2"), ("t", "v1"), ("t", "v3")]).unwrap();
        assert!(matches!(
            RccInstance::with_inferred_parts(g, "s", "t"),
            Err(Error::InvalidInstance(_))
        ));
        let g = Graph::from_edges([("s", "v1"), ("t", "v2"), ("t", "v3")]).unwrap();
        assert!(RccInstance::with_inferred_parts(g, "s", "t").is_err());
        let tri = Graph::from_edges([("s", "a"), ("a", "b"), ("b", "s")]).unwrap();
        assert!(RccInstance::with_inferred_parts(tri, "s", "a").is_err());
    }

    #[test]
    fn h_shape() {
        let inst = eight_cycle();
        assert_eq!(inst.u_part(), ["s", "u1", "t", "u2"]);
        let out = build_h(&inst);
        assert_eq!(out.h.order(), 10);
        assert!(is_chordal(&out.h).is_some());
        for x in out.x_v() {
            let v = out.h.id(x).unwrap();
            let nb: Vec<VertexId> = out.h.neighbors(v).collect();
            assert!(out.h.is_clique(&nb));
        }
        let missing: Vec<(&str, &str)> = out
            .h
            .non_edges()
            .into_iter()
            .map(|(a, b)| (out.h.label(a), out.h.label(b)))
            .filter(|(a, b)| !a.ends_with('\'') && !b.ends_with('\''))
            .collect();
        assert_eq!(
            missing,
            [("s1", "t1"), ("s1", "t2"), ("s2", "t1"), ("s2", "t2")]
        );
    }

    #[test]
    fn eight_cycle_both_ways() {
        let inst = eight_cycle();
        let rep = cross_check_reduction(&inst, DEFAULT_RCC_CAP).unwrap();
        assert!(rep.agree());
        let c = rep.cycle.unwrap();
        assert_eq!(c, ["s", "v1", "u1", "v2", "t", "v3", "u2", "v4"]);
        let e = rep.from_cycle.unwrap();
        assert_eq!((e.r, e.q), (3, 3));
        assert!(rep.embedding.is_some());
        assert!(is_chordless_cycle(inst.graph(), &rep.from_embedding.unwrap()).unwrap());
    }

    #[test]
    fn theta_graph_without_cycle() {
        // Both s-t routes run through the shared vertex u1.
        let g = Graph::from_edges([
            ("s", "v1"),
            ("s", "v2"),
            ("v1", "u1"),
            ("v2", "u1"),
            ("u1", "v3"),
            ("u1", "v4"),
            ("v3", "t"),
            ("v4", "t"),
        ])
        .unwrap();
        let inst = RccInstance::with_inferred_parts(g, "s", "t").unwrap();
        let rep = cross_check_reduction(&inst, DEFAULT_RCC_CAP).unwrap();
        assert!(rep.cycle.is_none() && rep.embedding.is_none());
    }

    #[test]
    fn separate_components() {
        let g = Graph::from_edges([
            ("s", "v1"),
            ("s", "v2"),
            ("v1", "u1"),
            ("v2", "u1"),
            ("t", "v3"),
            ("t", "v4"),
            ("v3", "u2"),
            ("v4", "u2"),
        ])
        .unwrap();
        let inst = RccInstance::with_inferred_parts(g, "s", "t").unwrap();
        assert!(find_chordless_st_cycle(&inst).is_none());
    }

    #[test]
    fn grq_finder_on_known_graphs() {
        let g = gen_grq(3, 3).unwrap().graph;
        let e = find_induced_grq(&g).unwrap();
        assert_eq!((e.r, e.q), (3, 3));
        assert!(find_induced_grq(&complete(5)).is_none());
        for v in ["x1", "a2", "b1"] {
            assert!(find_induced_grq(&g.without_vertex(v).unwrap()).is_none());
        }
        let e = find_induced_grq(&gen_grq(3, 4).unwrap().graph).unwrap();
        assert_eq!(e.r + e.q, 7);
    }

    #[test]
    fn generators_produce_valid_answers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let yes = planted_instance(&mut rng, (1, 2), 1, 1, 0.3).unwrap();
        assert!(find_chordless_st_cycle(&yes).is_some());
        let no = forced_no_instance(&mut rng, 4, 6, 0.5).unwrap();
        assert!(find_chordless_st_cycle(&no).is_none());
    }

    #[test]
    fn cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let big = random_instance(&mut rng, 8, 8, 0.2).unwrap();
        assert!(matches!(
            cross_check_reduction(&big, DEFAULT_RCC_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }
}
