use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NodeId, PhyloTree, Rooting};
use crate::error::{Error, Result};

/// The split `ab|cd` on four distinct labels, stored canonically: each side
/// sorted, then the two sides sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quartet {
    left: [String; 2],
    right: [String; 2],
}

impl Quartet {
    pub fn new(a: &str, b: &str, c: &str, d: &str) -> Result<Self> {
        let all = [a, b, c, d];
        for i in 0..4 {
            for j in i + 1..4 {
                if all[i] == all[j] {
                    return Err(Error::InvalidParameter(format!(
                        "quartet {a}{b}|{c}{d} repeats `{}`",
                        all[i]
                    )));
                }
            }
        }
        let pair = |x: &str, y: &str| {
            if x <= y {
                [x.to_owned(), y.to_owned()]
            } else {
                [y.to_owned(), x.to_owned()]
            }
        };
        let (l, r) = (pair(a, b), pair(c, d));
        Ok(if l <= r {
            Self { left: l, right: r }
        } else {
            Self { left: r, right: l }
        })
    }

    pub fn left(&self) -> [&str; 2] {
        [&self.left[0], &self.left[1]]
    }

    pub fn right(&self) -> [&str; 2] {
        [&self.right[0], &self.right[1]]
    }

    /// The four labels in sorted order.
    pub fn labels(&self) -> [&str; 4] {
        let mut l = [
            self.left[0].as_str(),
            self.left[1].as_str(),
            self.right[0].as_str(),
            self.right[1].as_str(),
        ];
        l.sort_unstable();
        l
    }

    /// Same four labels, different split.
    pub fn conflicts_with(&self, other: &Quartet) -> bool {
        self != other && self.labels() == other.labels()
    }

    /// Whether `t` displays this quartet: the `a`-`b` and `c`-`d` paths share
    /// no node.
    pub fn displayed_by(&self, t: &PhyloTree) -> Result<bool> {
        let ids = self.leaf_ids(t)?;
        Ok(displays(&t.rooting(), ids))
    }

    fn leaf_ids(&self, t: &PhyloTree) -> Result<[NodeId; 4]> {
        Ok([
            t.leaf(&self.left[0])?,
            t.leaf(&self.left[1])?,
            t.leaf(&self.right[0])?,
            t.leaf(&self.right[1])?,
        ])
    }
}

fn displays(r: &Rooting, [a, b, c, d]: [NodeId; 4]) -> bool {
    let p = r.path_nodes(a, b);
    let q = r.path_nodes(c, d);
    !p.iter().any(|x| q.binary_search(x).is_ok())
}

impl fmt::Display for Quartet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} | {} {}",
            self.left[0], self.left[1], self.right[0], self.right[1]
        )
    }
}

/// A set of quartets in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuartetSet(BTreeSet<Quartet>);

impl QuartetSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, q: Quartet) -> bool {
        self.0.insert(q)
    }

    pub fn remove(&mut self, q: &Quartet) -> bool {
        self.0.remove(q)
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.0.contains(q)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quartet> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &QuartetSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Every label mentioned, sorted.
    pub fn labels(&self) -> Vec<String> {
        let s: BTreeSet<&str> = self.0.iter().flat_map(|q| q.labels()).collect();
        s.into_iter().map(str::to_owned).collect()
    }

    /// Two quartets on the same four labels with different splits, if any.
    pub fn find_conflict(&self) -> Option<(&Quartet, &Quartet)> {
        let mut by_labels: HashMap<[&str; 4], &Quartet> = HashMap::new();
        for q in &self.0 {
            if let Some(prev) = by_labels.insert(q.labels(), q) {
                return Some((prev, q));
            }
        }
        None
    }

    /// Quartets whose four labels all lie in `within`.
    pub fn restricted_to<'a>(
        &'a self,
        within: &'a BTreeSet<&str>,
    ) -> impl Iterator<Item = &'a Quartet> + 'a {
        self.0
            .iter()
            .filter(move |q| q.labels().iter().all(|l| within.contains(l)))
    }

    /// Whether `t` displays every quartet in the set.
    pub fn displayed_by(&self, t: &PhyloTree) -> Result<bool> {
        let r = t.rooting();
        for q in &self.0 {
            if !displays(&r, q.leaf_ids(t)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl FromIterator<Quartet> for QuartetSet {
    fn from_iter<I: IntoIterator<Item = Quartet>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Extend<Quartet> for QuartetSet {
    fn extend<I: IntoIterator<Item = Quartet>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl IntoIterator for QuartetSet {
    type Item = Quartet;
    type IntoIter = std::collections::btree_set::IntoIter<Quartet>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a QuartetSet {
    type Item = &'a Quartet;
    type IntoIter = std::collections::btree_set::Iter<'a, Quartet>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `Q(T)`: every quartet the tree displays. A 4-subset resolved as a star
/// contributes nothing.
pub fn displayed_quartets(t: &PhyloTree) -> QuartetSet {
    let labels: Vec<&str> = t.leaf_labels().collect();
    let ids: Vec<NodeId> = labels
        .iter()
        .map(|l| t.leaf(l).expect("own leaf"))
        .collect();
    let r = t.rooting();
    let n = labels.len();
    let mut out = QuartetSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let (a, b, c, d) = (ids[i], ids[j], ids[k], ids[l]);
                    for [p, q, s, u] in [[a, b, c, d], [a, c, b, d], [a, d, b, c]] {
                        if displays(&r, [p, q, s, u]) {
                            let lab = |x: NodeId| t.label(x).expect("leaf");
                            out.insert(
                                Quartet::new(lab(p), lab(q), lab(s), lab(u))
                                    .expect("distinct leaves"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}
