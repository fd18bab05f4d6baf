//! Simple undirected graphs over string-labelled vertices.
//!
//! Vertices are stored in insertion order and addressed internally by a dense
//! [`VertexId`]. Every iteration in this crate follows that order, which makes
//! all certificates reproducible across runs.

mod elimination;
pub mod generators;
mod patterns;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use elimination::{
    is_chordal, is_simple_in, is_simplicial_in, is_strongly_chordal, maximum_cardinality_search,
    verify_elimination, EliminationCertificate, EliminationKind,
};
pub use patterns::{find_gem, find_induced_cycle, Gem};

pub type VertexId = usize;

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    nbrs: Vec<BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with the given vertices and no edges.
    pub fn with_vertices<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut g = Self::new();
        for l in labels {
            g.add_vertex(l.as_ref());
        }
        g
    }

    /// Builds a graph from an edge list; endpoints are added in order of first appearance.
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut g = Self::new();
        for (a, b) in edges {
            g.add_edge(a.as_ref(), b.as_ref())?;
        }
        Ok(g)
    }

    /// Adds a vertex if absent and returns its id.
    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        self.nbrs.push(BTreeSet::new());
        id
    }

    /// Adds the edge `ab`, creating missing endpoints. Returns `false` if the
    /// edge was already present.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<bool> {
        if a == b {
            return Err(Error::SelfLoop(a.to_owned()));
        }
        let ia = self.add_vertex(a);
        let ib = self.add_vertex(b);
        Ok(self.add_edge_ids(ia, ib))
    }

    pub(crate) fn add_edge_ids(&mut self, a: VertexId, b: VertexId) -> bool {
        debug_assert_ne!(a, b);
        let fresh = self.nbrs[a].insert(b);
        self.nbrs[b].insert(a);
        fresh
    }

    pub fn remove_edge(&mut self, a: &str, b: &str) -> Result<bool> {
        let ia = self.id(a)?;
        let ib = self.id(b)?;
        let had = self.nbrs[ia].remove(&ib);
        self.nbrs[ib].remove(&ia);
        Ok(had)
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.nbrs.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.labels.iter().map(String::as_str)
    }

    pub fn vertex_ids(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Like [`Graph::index_of`] but reports unknown labels as an error.
    pub fn id(&self, label: &str) -> Result<VertexId> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.nbrs[a].contains(&b)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.adjacent(self.id(a)?, self.id(b)?))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.nbrs[v].iter().copied()
    }

    pub fn neighbor_set(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.nbrs[v].len()
    }

    /// All edges as id pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.size());
        for a in self.vertex_ids() {
            out.extend(self.nbrs[a].range(a + 1..).map(|&b| (a, b)));
        }
        out
    }

    /// All non-adjacent pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_labels(&self) -> Vec<(&str, &str)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.label(a), self.label(b)))
            .collect()
    }

    pub fn is_clique(&self, vs: &[VertexId]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    /// `G[X]` for a set of labels. The result keeps the host graph's vertex order.
    pub fn induced_subgraph<S: AsRef<str>>(&self, labels: &[S]) -> Result<Graph> {
        let ids = labels
            .iter()
            .map(|l| self.id(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced_by_ids(&ids))
    }

    pub fn induced_by_ids(&self, ids: &[VertexId]) -> Graph {
        let keep: BTreeSet<VertexId> = ids.iter().copied().collect();
        let mut g = Graph::new();
        let mut map = HashMap::with_capacity(keep.len());
        for &v in &keep {
            map.insert(v, g.add_vertex(self.label(v)));
        }
        for &v in &keep {
            for &w in self.nbrs[v].range(v + 1..) {
                if let Some(&nw) = map.get(&w) {
                    g.add_edge_ids(map[&v], nw);
                }
            }
        }
        g
    }

    /// `G - v`.
    pub fn without_vertex(&self, label: &str) -> Result<Graph> {
        let drop = self.id(label)?;
        let keep: Vec<VertexId> = self.vertex_ids().filter(|&v| v != drop).collect();
        Ok(self.induced_by_ids(&keep))
    }

    pub fn without_vertices<S: AsRef<str>>(&self, labels: &[S]) -> Result<Graph> {
        let drop = labels
            .iter()
            .map(|l| self.id(l.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        let keep: Vec<VertexId> = self.vertex_ids().filter(|v| !drop.contains(v)).collect();
        Ok(self.induced_by_ids(&keep))
    }

    /// Renames every vertex through `f`; `f` must be injective on the vertex set.
    pub fn relabeled<F: FnMut(&str) -> String>(&self, mut f: F) -> Result<Graph> {
        let mut g = Graph::new();
        for l in self.labels() {
            let new = f(l);
            if g.contains(&new) {
                return Err(Error::InvalidParameter(format!(
                    "relabelling maps two vertices to `{new}`"
                )));
            }
            g.add_vertex(&new);
        }
        for (a, b) in self.edges() {
            g.add_edge_ids(a, b);
        }
        Ok(g)
    }

    /// Equality as labelled graphs, ignoring vertex order.
    pub fn same_labeled_graph(&self, other: &Graph) -> bool {
        if self.order() != other.order() || self.size() != other.size() {
            return false;
        }
        self.labels().all(|l| other.contains(l))
            && self.edges().into_iter().all(|(a, b)| {
                other
                    .has_edge(self.label(a), self.label(b))
                    .unwrap_or(false)
            })
    }

    /// Connected component containing `v`, as sorted ids.
    pub fn component_of(&self, v: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; self.order()];
        let mut stack = vec![v];
        seen[v] = true;
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ V: {:?}, E: [", self.labels)?;
        for (i, (a, b)) in self.edge_labels().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}{b}")?;
        }
        write!(f, "] }}")
    }
}
