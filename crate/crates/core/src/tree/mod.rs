//! Unrooted trees whose leaves carry vertex labels.
//!
//! A [`PhyloTree`] stores nodes and edges in dense vectors. Edge ids are stable
//! for the life of a tree value, so weightings are plain vectors indexed by
//! [`EdgeId`]. Operations that need a direction (paths, splits) hang the tree
//! from node 0 on the fly; nothing observable depends on that choice.

mod enumerate;
mod quartet;
mod weighted;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub use enumerate::{
    enumerate_binary_topologies, search_binary_topologies, topology_count, BinaryTopologies,
    SearchStats,
};
pub use quartet::{displayed_quartets, Quartet, QuartetSet};
pub use weighted::{Weight, WeightedTree};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Default, PartialEq, Eq)]
pub struct PhyloTree {
    ends: Vec<[NodeId; 2]>,
    adj: Vec<Vec<(NodeId, EdgeId)>>,
    label: Vec<Option<String>>,
    leaves: BTreeMap<String, NodeId>,
}

impl PhyloTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adj.push(Vec::new());
        self.label.push(None);
        self.adj.len() - 1
    }

    pub fn add_leaf(&mut self, label: &str) -> Result<NodeId> {
        if self.leaves.contains_key(label) {
            return Err(Error::InvalidTree(format!("leaf `{label}` appears twice")));
        }
        let n = self.add_node();
        self.label[n] = Some(label.to_owned());
        self.leaves.insert(label.to_owned(), n);
        Ok(n)
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> EdgeId {
        let e = self.ends.len();
        self.ends.push([a, b]);
        self.adj[a].push((b, e));
        self.adj[b].push((a, e));
        e
    }

    /// A lone labelled node.
    pub fn single(label: &str) -> Self {
        let mut t = Self::new();
        t.add_leaf(label).expect("fresh tree");
        t
    }

    /// Star with one centre; two labels give a single edge.
    pub fn star<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        match labels.len() {
            0 => Err(Error::InvalidTree("a tree needs at least one leaf".into())),
            1 => Ok(Self::single(labels[0].as_ref())),
            2 => {
                let mut t = Self::new();
                let a = t.add_leaf(labels[0].as_ref())?;
                let b = t.add_leaf(labels[1].as_ref())?;
                t.add_edge(a, b);
                Ok(t)
            }
            _ => {
                let mut t = Self::new();
                let c = t.add_node();
                for l in labels {
                    let x = t.add_leaf(l.as_ref())?;
                    t.add_edge(c, x);
                }
                Ok(t)
            }
        }
    }

    /// Caterpillar `l0 l1 | l2 | ... | l(n-3) | l(n-2) l(n-1)`; for four labels
    /// `a b c d` this is the quartet tree `ab|cd`.
    pub fn caterpillar<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let n = labels.len();
        if n < 4 {
            return Self::star(labels);
        }
        let mut t = Self::new();
        let spine: Vec<NodeId> = (0..n - 2).map(|_| t.add_node()).collect();
        for w in spine.windows(2) {
            t.add_edge(w[0], w[1]);
        }
        for (i, l) in labels.iter().enumerate() {
            let x = t.add_leaf(l.as_ref())?;
            let at = i.saturating_sub(1).min(n - 3);
            t.add_edge(spine[at], x);
        }
        Ok(t)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn edge(&self, e: EdgeId) -> [NodeId; 2] {
        self.ends[e]
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.ends.len()
    }

    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adj[n]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.adj[n].len()
    }

    pub fn label(&self, n: NodeId) -> Option<&str> {
        self.label[n].as_deref()
    }

    pub fn leaf(&self, label: &str) -> Result<NodeId> {
        self.leaves
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLeaf(label.to_owned()))
    }

    pub fn has_leaf(&self, label: &str) -> bool {
        self.leaves.contains_key(label)
    }

    /// Leaf labels in sorted order.
    pub fn leaf_labels(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.leaves.keys().map(String::as_str)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// An edge whose endpoints are both unlabelled.
    pub fn is_internal_edge(&self, e: EdgeId) -> bool {
        let [a, b] = self.ends[e];
        self.label[a].is_none() && self.label[b].is_none()
    }

    /// Checks the tree invariants: connected, acyclic, every node of degree at
    /// most one carries a label and labels sit only on such nodes.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        if n == 0 {
            return Err(Error::InvalidTree("empty tree".into()));
        }
        if self.edge_count() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "{} nodes but {} edges",
                n,
                self.edge_count()
            )));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != n {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        for v in 0..n {
            match (&self.label[v], self.degree(v)) {
                (Some(l), d) if d > 1 => {
                    return Err(Error::InvalidTree(format!(
                        "label `{l}` sits on a node of degree {d}"
                    )))
                }
                (None, d) if d <= 1 => {
                    return Err(Error::InvalidTree(format!(
                        "unlabelled node {v} has degree {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub(crate) fn rooting(&self) -> Rooting {
        Rooting::new(self)
    }

    /// Edges on the path between two leaves.
    pub fn path_edges(&self, x: &str, y: &str) -> Result<Vec<EdgeId>> {
        let (a, b) = (self.leaf(x)?, self.leaf(y)?);
        Ok(self.rooting().path_edges(a, b))
    }

    /// Contracts an internal edge, merging its endpoints. Edge ids above `e`
    /// shift down by one.
    pub fn contract(&self, e: EdgeId) -> Result<PhyloTree> {
        if e >= self.edge_count() {
            return Err(Error::InvalidParameter(format!("no edge {e}")));
        }
        if !self.is_internal_edge(e) {
            return Err(Error::InvalidTree(format!(
                "edge {e} is incident to a leaf"
            )));
        }
        let [keep, gone] = self.ends[e];
        let remap = |v: NodeId| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut t = PhyloTree::new();
        for v in 0..self.node_count() {
            if v == gone {
                continue;
            }
            match &self.label[v] {
                Some(l) => {
                    t.add_leaf(l)?;
                }
                None => {
                    t.add_node();
                }
            }
        }
        for (f, &[a, b]) in self.ends.iter().enumerate() {
            if f != e {
                t.add_edge(remap(a), remap(b));
            }
        }
        Ok(t)
    }

    /// Nontrivial splits, each given by the side that avoids the smallest
    /// leaf label.
    pub fn splits(&self) -> BTreeSet<BTreeSet<String>> {
        let n = self.leaf_count();
        let Some(min) = self.leaves.keys().next() else {
            return BTreeSet::new();
        };
        let r = self.rooting();
        let mut out = BTreeSet::new();
        for e in self.edge_ids() {
            let below: BTreeSet<String> = r
                .leaves_below(self, r.child_of_edge(e))
                .into_iter()
                .collect();
            let side = if below.contains(min) {
                self.leaves
                    .keys()
                    .filter(|l| !below.contains(*l))
                    .cloned()
                    .collect()
            } else {
                below
            };
            if side.len() >= 2 && side.len() + 2 <= n {
                out.insert(side);
            }
        }
        out
    }

    /// True when `coarse` arises from `self` by contracting edges, judged on
    /// leaf sets and nontrivial splits (degree-2 nodes are immaterial).
    pub fn is_refinement_of(&self, coarse: &PhyloTree) -> bool {
        self.leaves.keys().eq(coarse.leaves.keys()) && coarse.splits().is_subset(&self.splits())
    }

    /// The subtree spanned by `keep`: other leaves are dropped and unlabelled
    /// nodes left dangling are pruned. Also returns, for each surviving edge,
    /// its id in `self`.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<(PhyloTree, Vec<EdgeId>)> {
        let mut alive = vec![true; self.node_count()];
        let wanted: BTreeSet<&str> = keep.iter().map(AsRef::as_ref).collect();
        for l in &wanted {
            self.leaf(l)?;
        }
        for (l, &v) in &self.leaves {
            if !wanted.contains(l.as_str()) {
                alive[v] = false;
            }
        }
        let mut deg: Vec<usize> = (0..self.node_count())
            .map(|v| self.adj[v].iter().filter(|&&(w, _)| alive[w]).count())
            .collect();
        let mut stack: Vec<NodeId> = (0..self.node_count())
            .filter(|&v| alive[v] && self.label[v].is_none() && deg[v] <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(w, _) in &self.adj[v] {
                if alive[w] {
                    deg[w] -= 1;
                    if self.label[w].is_none() && deg[w] <= 1 {
                        stack.push(w);
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; self.node_count()];
        let mut t = PhyloTree::new();
        for v in 0..self.node_count() {
            if alive[v] {
                map[v] = match &self.label[v] {
                    Some(l) => t.add_leaf(l)?,
                    None => t.add_node(),
                };
            }
        }
        let mut origin = Vec::new();
        for (e, &[a, b]) in self.ends.iter().enumerate() {
            if alive[a] && alive[b] {
                t.add_edge(map[a], map[b]);
                origin.push(e);
            }
        }
        t.validate()?;
        Ok((t, origin))
    }

    /// Replaces edge `e = {a, b}` by `a - m - b` and hangs a new leaf from `m`.
    /// Edge `e` becomes `a - m`; returns the ids of `m - b` and `m - leaf`.
    pub(crate) fn graft(&mut self, e: EdgeId, label: &str) -> Result<(EdgeId, EdgeId)> {
        let [a, b] = self.ends[e];
        let m = self.add_node();
        let leaf = self.add_leaf(label)?;
        self.ends[e] = [a, m];
        for slot in self.adj[a].iter_mut() {
            if slot.1 == e {
                *slot = (m, e);
            }
        }
        self.adj[b].retain(|&(_, f)| f != e);
        self.adj[m].push((a, e));
        let mb = self.add_edge(m, b);
        let ml = self.add_edge(m, leaf);
        Ok((mb, ml))
    }

    /// Largest number of edges on any node-to-node path.
    pub fn diameter_edges(&self) -> usize {
        let n = self.node_count();
        if n <= 1 {
            return 0;
        }
        let far = |s: NodeId| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        stack.push(y);
                    }
                }
            }
            (0..n).map(|v| (dist[v], v)).max().expect("nonempty")
        };
        let (_, u) = far(0);
        far(u).0
    }
}

impl std::fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = |v: NodeId| match &self.label[v] {
            Some(l) => l.clone(),
            None => format!("#{v}"),
        };
        write!(f, "PhyloTree [")?;
        for (i, &[a, b]) in self.ends.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}", name(a), name(b))?;
        }
        write!(f, "]")
    }
}

/// The tree hung from node 0.
pub(crate) struct Rooting {
    parent: Vec<NodeId>,
    parent_edge: Vec<EdgeId>,
    depth: Vec<usize>,
}

impl Rooting {
    fn new(t: &PhyloTree) -> Self {
        let n = t.node_count();
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        if n > 0 {
            parent[0] = 0;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for &(y, e) in &t.adj[x] {
                    if parent[y] == usize::MAX {
                        parent[y] = x;
                        parent_edge[y] = e;
                        depth[y] = depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
        Self {
            parent,
            parent_edge,
            depth,
        }
    }

    pub(crate) fn child_of_edge(&self, e: EdgeId) -> NodeId {
        (0..self.parent_edge.len())
            .find(|&v| v != 0 && self.parent_edge[v] == e)
            .expect("every edge has a lower endpoint")
    }

    pub(crate) fn path_edges(&self, mut a: NodeId, mut b: NodeId) -> Vec<EdgeId> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            up.push(self.parent_edge[a]);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            down.push(self.parent_edge[b]);
            b = self.parent[b];
        }
        while a != b {
            up.push(self.parent_edge[a]);
            down.push(self.parent_edge[b]);
            a = self.parent[a];
            b = self.parent[b];
        }
        up.extend(down.into_iter().rev());
        up
    }

    pub(crate) fn path_nodes(&self, mut a: NodeId, mut b: NodeId) -> Vec<NodeId> {
        let mut out = vec![a, b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
            out.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
            out.push(b);
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
            out.push(a);
            out.push(b);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn leaves_below(&self, t: &PhyloTree, top: NodeId) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![top];
        while let Some(x) = stack.pop() {
            if let Some(l) = t.label(x) {
                out.push(l.to_owned());
            }
            stack.extend(
                t.adj[x]
                    .iter()
                    .map(|&(y, _)| y)
                    .filter(|&y| y != 0 && self.parent[y] == x),
            );
        }
        out
    }
}
