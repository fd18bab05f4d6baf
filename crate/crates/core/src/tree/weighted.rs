use std::collections::BTreeMap;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, One, Zero};

use super::{EdgeId, NodeId, PhyloTree};
use crate::error::{Error, Result};

/// Edge weight / threshold type of a [`WeightedTree`].
pub trait Weight:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Zero
    + One
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Weight for T where
    T: Clone
        + fmt::Debug
        + fmt::Display
        + PartialOrd
        + Zero
        + One
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + Send
        + Sync
{
}

/// A tree with a nonnegative weight on every edge and a threshold `k >= 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedTree<W> {
    tree: PhyloTree,
    weights: Vec<W>,
    threshold: W,
}

impl<W: Weight> WeightedTree<W> {
    pub fn new(tree: PhyloTree, weights: Vec<W>, threshold: W) -> Result<Self> {
        tree.validate()?;
        if weights.len() != tree.edge_count() {
            return Err(Error::InvalidTree(format!(
                "{} weights for {} edges",
                weights.len(),
                tree.edge_count()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w < W::zero()) {
            return Err(Error::InvalidTree(format!("negative weight {w}")));
        }
        if threshold < W::one() {
            return Err(Error::InvalidTree(format!("threshold {threshold} below 1")));
        }
        Ok(Self {
            tree,
            weights,
            threshold,
        })
    }

    pub fn tree(&self) -> &PhyloTree {
        &self.tree
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn weight(&self, e: EdgeId) -> &W {
        &self.weights[e]
    }

    pub fn threshold(&self) -> &W {
        &self.threshold
    }

    pub fn into_parts(self) -> (PhyloTree, Vec<W>, W) {
        (self.tree, self.weights, self.threshold)
    }

    pub fn has_zero_edge(&self) -> bool {
        self.weights.iter().any(Zero::is_zero)
    }

    /// `d(x, y)`, the total weight of the path between two leaves.
    pub fn distance(&self, x: &str, y: &str) -> Result<W> {
        let edges = self.tree.path_edges(x, y)?;
        sum(edges.iter().map(|&e| &self.weights[e]))
    }

    /// Distances from one leaf to every other leaf, keyed by label.
    pub fn distances_from(&self, x: &str) -> Result<BTreeMap<String, W>> {
        let s = self.tree.leaf(x)?;
        let n = self.tree.node_count();
        let mut dist: Vec<Option<W>> = vec![None; n];
        dist[s] = Some(W::zero());
        let mut stack: Vec<NodeId> = vec![s];
        let mut out = BTreeMap::new();
        while let Some(v) = stack.pop() {
            let dv = dist[v].clone().expect("set before push");
            if let Some(l) = self.tree.label(v) {
                out.insert(l.to_owned(), dv.clone());
            }
            for &(w, e) in self.tree.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(
                        dv.checked_add(&self.weights[e])
                            .ok_or(Error::Overflow("tree distance"))?,
                    );
                    stack.push(w);
                }
            }
        }
        Ok(out)
    }

    pub fn map_weights<U: Weight>(&self, mut f: impl FnMut(&W) -> U) -> Result<WeightedTree<U>> {
        WeightedTree::new(
            self.tree.clone(),
            self.weights.iter().map(&mut f).collect(),
            f(&self.threshold),
        )
    }

    pub fn with_threshold(mut self, threshold: W) -> Result<Self> {
        if threshold < W::one() {
            return Err(Error::InvalidTree(format!("threshold {threshold} below 1")));
        }
        self.threshold = threshold;
        Ok(self)
    }
}

pub(crate) fn sum<'a, W: Weight + 'a>(it: impl IntoIterator<Item = &'a W>) -> Result<W> {
    it.into_iter().try_fold(W::zero(), |acc, w| {
        acc.checked_add(w).ok_or(Error::Overflow("weight sum"))
    })
}

impl<W: fmt::Display> fmt::Debug for WeightedTree<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: NodeId| match self.tree.label(v) {
            Some(l) => l.to_owned(),
            None => format!("#{v}"),
        };
        write!(f, "WeightedTree(k = {}) [", self.threshold)?;
        for e in self.tree.edge_ids() {
            let [a, b] = self.tree.edge(e);
            if e > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}:{}", name(a), name(b), self.weights[e])?;
        }
        write!(f, "]")
    }
}
