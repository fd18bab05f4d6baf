//! Exact linear feasibility and its use for weighting a fixed tree topology.

mod simplex;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{PhyloTree, WeightedTree};
use crate::{LeafRoot, Rational, RationalTree};

pub use simplex::{Constraint, FeasibilityProblem, Relation, Scalar};

/// Pairs that must end up within the threshold (`A`) and pairs that must end
/// up beyond it (`B`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintPair {
    pub must_close: Vec<(String, String)>,
    pub must_separate: Vec<(String, String)>,
}

impl ConstraintPair {
    pub fn new<S: AsRef<str>>(must_close: &[(S, S)], must_separate: &[(S, S)]) -> Self {
        let own = |v: &[(S, S)]| {
            v.iter()
                .map(|(a, b)| (a.as_ref().to_owned(), b.as_ref().to_owned()))
                .collect()
        };
        Self {
            must_close: own(must_close),
            must_separate: own(must_separate),
        }
    }

    /// Every edge of `g` in `A` and every non-edge in `B`.
    pub fn of_graph(g: &crate::Graph) -> Self {
        let name = |(a, b): (usize, usize)| (g.label(a).to_owned(), g.label(b).to_owned());
        Self {
            must_close: g.edges().into_iter().map(name).collect(),
            must_separate: g.non_edges().into_iter().map(name).collect(),
        }
    }

    /// The pairs with both ends in `labels`.
    pub fn restricted_to(&self, labels: &BTreeSet<&str>) -> Self {
        let keep = |v: &[(String, String)]| {
            v.iter()
                .filter(|(a, b)| labels.contains(a.as_str()) && labels.contains(b.as_str()))
                .cloned()
                .collect()
        };
        Self {
            must_close: keep(&self.must_close),
            must_separate: keep(&self.must_separate),
        }
    }

    fn check_disjoint(&self) -> Result<()> {
        let norm = |(a, b): &(String, String)| {
            if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        };
        let close: BTreeSet<_> = self.must_close.iter().map(norm).collect();
        if let Some((a, b)) = self
            .must_separate
            .iter()
            .map(norm)
            .find(|p| close.contains(p))
        {
            return Err(Error::InvalidInstance(format!(
                "pair {a} {b} is required both close and separated"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Rational weights and threshold meeting every constraint exactly.
    pub witness: Option<RationalTree>,
}

/// Decides whether some weighting of `t` puts every `A` pair at distance
/// `<= k` and every `B` pair at distance `>= k + 1`, for some `k >= 1`.
///
/// Variables are one weight per edge and `k' = k - 1`, all nonnegative.
pub fn can_satisfy(t: &PhyloTree, c: &ConstraintPair) -> Result<FeasibilityResult> {
    c.check_disjoint()?;
    let r = t.rooting();
    let m = t.edge_count();
    let kvar = m;
    let mut lp = FeasibilityProblem::<Rational>::new(m + 1);
    let one = Rational::one();
    let path = |a: &str, b: &str| -> Result<Vec<(usize, Rational)>> {
        let mut coeffs: Vec<(usize, Rational)> = r
            .path_edges(t.leaf(a)?, t.leaf(b)?)
            .into_iter()
            .map(|e| (e, one.clone()))
            .collect();
        coeffs.push((kvar, -one.clone()));
        Ok(coeffs)
    };
    for (a, b) in &c.must_close {
        lp.add(path(a, b)?, Relation::Le, Rational::one());
    }
    for (a, b) in &c.must_separate {
        lp.add(
            path(a, b)?,
            Relation::Ge,
            Rational::from_integer(BigInt::from(2)),
        );
    }
    let Some(x) = lp.solve() else {
        return Ok(FeasibilityResult {
            feasible: false,
            witness: None,
        });
    };
    let k = Rational::one() + x[kvar].clone();
    let witness = WeightedTree::new(t.clone(), x[..m].to_vec(), k)?;
    if !witness_satisfies(&witness, c)? {
        return Err(Error::Verification(
            "simplex point fails the constraints it was built from".into(),
        ));
    }
    Ok(FeasibilityResult {
        feasible: true,
        witness: Some(witness),
    })
}

/// Exact re-check of a rational weighting against `(A, B)`.
pub fn witness_satisfies(w: &RationalTree, c: &ConstraintPair) -> Result<bool> {
    let k = w.threshold();
    let k1 = k.clone() + Rational::one();
    for (a, b) in &c.must_close {
        if w.distance(a, b)? > *k {
            return Ok(false);
        }
    }
    for (a, b) in &c.must_separate {
        if w.distance(a, b)? < k1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplies a rational weighting by the lcm of its denominators. `A` pairs
/// stay within the scaled threshold and `B` pairs stay strictly beyond it.
pub fn scale_to_integers(w: &RationalTree) -> Result<LeafRoot> {
    let lcm = w
        .weights()
        .iter()
        .chain(std::iter::once(w.threshold()))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let to_u64 = |q: &Rational| -> Result<u64> {
        let v = q.numer() * (&lcm / q.denom());
        v.to_u64().ok_or(Error::Overflow("integer witness"))
    };
    let weights = w.weights().iter().map(to_u64).collect::<Result<Vec<_>>>()?;
    let k = to_u64(w.threshold())?;
    debug_assert!(!lcm.is_zero());
    WeightedTree::new(w.tree().clone(), weights, k)
}
