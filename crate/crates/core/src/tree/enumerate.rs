//! Unrooted binary topologies by stepwise insertion.
//!
//! Labels are sorted and inserted in that order: the first three form a star,
//! and leaf `i` (0-based) is grafted onto one of the `2i - 3` edges of the
//! tree built so far. Each choice sequence gives a distinct topology and every
//! topology arises once, so there are `(2n - 5)!!` of them.
//!
//! Restricting a binary tree to the first `i` labels gives exactly the tree
//! built after `i` insertions. A property that survives restriction can
//! therefore be tested on partial trees, cutting off whole subtrees of the
//! search.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::PhyloTree;
use crate::error::{Error, Result};

/// `(2n - 5)!!` for `n >= 3`, and 1 below that.
pub fn topology_count(n: usize) -> u128 {
    (4..=n).map(|i| (2 * i - 5) as u128).product()
}

fn prepare<S: AsRef<str>>(labels: &[S], cap: usize) -> Result<Vec<String>> {
    if labels.is_empty() {
        return Err(Error::InvalidParameter("no labels to place".into()));
    }
    if labels.len() > cap {
        return Err(Error::CapExceeded {
            what: "topology search",
            size: labels.len(),
            cap,
        });
    }
    let mut v: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
    v.sort();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!(
            "label `{}` repeated",
            w[0]
        )));
    }
    Ok(v)
}

fn base(labels: &[String]) -> PhyloTree {
    PhyloTree::star(&labels[..labels.len().min(3)]).expect("distinct labels")
}

fn build(labels: &[String], choices: &[usize]) -> PhyloTree {
    let mut t = base(labels);
    for (i, &e) in choices.iter().enumerate() {
        t.graft(e, &labels[i + 3]).expect("fresh label");
    }
    t
}

/// Iterator over all binary topologies, in insertion-choice order.
pub struct BinaryTopologies {
    labels: Vec<String>,
    choices: Vec<usize>,
    done: bool,
}

impl Iterator for BinaryTopologies {
    type Item = PhyloTree;

    fn next(&mut self) -> Option<PhyloTree> {
        if self.done {
            return None;
        }
        let t = build(&self.labels, &self.choices);
        self.done = true;
        for pos in (0..self.choices.len()).rev() {
            // leaf pos + 3 goes into a tree with pos + 3 leaves.
            let limit = 2 * (pos + 3) - 3;
            self.choices[pos] += 1;
            if self.choices[pos] < limit {
                self.done = false;
                break;
            }
            self.choices[pos] = 0;
        }
        Some(t)
    }
}

/// All unrooted binary trees on `labels`; for fewer than four labels the
/// single tree there is.
pub fn enumerate_binary_topologies<S: AsRef<str>>(
    labels: &[S],
    cap: usize,
) -> Result<BinaryTopologies> {
    let labels = prepare(labels, cap)?;
    let choices = vec![0; labels.len().saturating_sub(3)];
    Ok(BinaryTopologies {
        labels,
        choices,
        done: false,
    })
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Complete topologies handed to the goal.
    pub complete: usize,
    /// Partial topologies rejected by the viability test.
    pub pruned: usize,
}

/// Depth-first search over binary topologies.
///
/// `viable` is asked about each partial tree and must only reject trees none
/// of whose extensions can reach the goal. `goal` is applied to complete
/// trees. The branches below the five-leaf level are explored in parallel;
/// the answer returned is the first in enumeration order regardless of
/// scheduling.
pub fn search_binary_topologies<S, T, P, G>(
    labels: &[S],
    cap: usize,
    viable: P,
    goal: G,
) -> Result<(Option<T>, SearchStats)>
where
    S: AsRef<str>,
    T: Send,
    P: Fn(&PhyloTree) -> bool + Sync,
    G: Fn(&PhyloTree) -> Option<T> + Sync,
{
    let labels = prepare(labels, cap)?;
    let n = labels.len();
    let complete = AtomicUsize::new(0);
    let pruned = AtomicUsize::new(0);
    let ctx = Ctx {
        labels: &labels,
        viable: &viable,
        goal: &goal,
        complete: &complete,
        pruned: &pruned,
    };

    let root = base(&labels);
    let split = n.min(5);
    let mut frontier = if n > 3 && !viable(&root) {
        pruned.fetch_add(1, Ordering::Relaxed);
        Vec::new()
    } else {
        vec![root]
    };
    for (i, label) in labels.iter().enumerate().take(split).skip(3) {
        let mut next = Vec::new();
        for t in &frontier {
            for e in t.edge_ids() {
                let mut c = t.clone();
                c.graft(e, label).expect("fresh label");
                if i + 1 < n && !viable(&c) {
                    pruned.fetch_add(1, Ordering::Relaxed);
                } else {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    let found = frontier.par_iter().find_map_first(|t| ctx.dfs(t, split));
    let stats = SearchStats {
        complete: complete.into_inner(),
        pruned: pruned.into_inner(),
    };
    Ok((found, stats))
}

struct Ctx<'a, P, G> {
    labels: &'a [String],
    viable: &'a P,
    goal: &'a G,
    complete: &'a AtomicUsize,
    pruned: &'a AtomicUsize,
}

impl<P, G> Ctx<'_, P, G> {
    fn dfs<T>(&self, t: &PhyloTree, placed: usize) -> Option<T>
    where
        P: Fn(&PhyloTree) -> bool,
        G: Fn(&PhyloTree) -> Option<T>,
    {
        let n = self.labels.len();
        if placed == n {
            self.complete.fetch_add(1, Ordering::Relaxed);
            return (self.goal)(t);
        }
        for e in t.edge_ids() {
            let mut c = t.clone();
            c.graft(e, &self.labels[placed]).expect("fresh label");
            if placed + 1 < n && !(self.viable)(&c) {
                self.pruned.fetch_add(1, Ordering::Relaxed);
                continue;
            }
            if let Some(x) = self.dfs(&c, placed + 1) {
                return Some(x);
            }
        }
        None
    }
}
