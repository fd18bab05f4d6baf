use std::fmt::Debug;

use num_traits::{Num, Signed};

/// An ordered field the simplex can pivot over. Exact types such as
/// [`crate::Rational`] give exact verdicts; nothing else is used on the
/// decision path.
pub trait Scalar: Clone + Num + Signed + PartialOrd + Debug {}

impl<T: Clone + Num + Signed + PartialOrd + Debug> Scalar for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `sum coeffs[j] * x[j]  (rel)  rhs`, sparse in the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

/// Find `x >= 0` meeting every constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem<S> {
    num_vars: usize,
    constraints: Vec<Constraint<S>>,
}

impl<S: Scalar> FeasibilityProblem<S> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint<S>] {
        &self.constraints
    }

    pub fn add(&mut self, coeffs: Vec<(usize, S)>, relation: Relation, rhs: S) {
        assert!(
            coeffs.iter().all(|&(j, _)| j < self.num_vars),
            "coefficient for a variable out of range"
        );
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Exact check of a candidate point.
    pub fn is_satisfied_by(&self, x: &[S]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = c
                    .coeffs
                    .iter()
                    .fold(S::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone());
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Phase-one simplex with Bland's rule. Returns a feasible point or `None`
    /// when the system has no nonnegative solution.
    pub fn solve(&self) -> Option<Vec<S>> {
        let m = self.constraints.len();
        let n = self.num_vars;
        if m == 0 {
            return Some(vec![S::zero(); n]);
        }
        // Normalise to rhs >= 0, then count slack and artificial columns.
        let mut rows: Vec<(Vec<S>, Relation, S)> = Vec::with_capacity(m);
        for c in &self.constraints {
            let mut dense = vec![S::zero(); n];
            for (j, a) in &c.coeffs {
                dense[*j] = dense[*j].clone() + a.clone();
            }
            let (mut rel, mut rhs) = (c.relation, c.rhs.clone());
            if rhs.is_negative() {
                for a in dense.iter_mut() {
                    *a = -a.clone();
                }
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((dense, rel, rhs));
        }
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let width = n + n_slack + n_art;
        let art_start = n + n_slack;

        let mut tab: Vec<Vec<S>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (n, art_start);
        for (dense, rel, rhs) in rows {
            let mut row = dense;
            row.resize(width + 1, S::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = S::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -S::one();
                    next_slack += 1;
                    row[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tab.push(row);
        }

        // Reduced costs of "minimise the sum of artificials".
        let mut obj = vec![S::zero(); width + 1];
        for o in &mut obj[art_start..width] {
            *o = S::one();
        }
        for (i, &b) in basis.iter().enumerate() {
            if b >= art_start {
                for j in 0..=width {
                    obj[j] = obj[j].clone() - tab[i][j].clone();
                }
            }
        }

        while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if !tab[i][enter].is_positive() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let lhs = tab[i][width].clone() * tab[l][enter].clone();
                        let rhs = tab[l][width].clone() * tab[i][enter].clone();
                        if lhs < rhs || (lhs == rhs && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
            // The phase-one objective is bounded below, so a ratio row exists.
            let r = leave.expect("phase one cannot be unbounded");
            pivot(&mut tab, &mut obj, r, enter);
            basis[r] = enter;
        }

        if !obj[width].is_zero() {
            return None;
        }
        let mut x = vec![S::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = tab[i][width].clone();
            }
        }
        Some(x)
    }
}

fn pivot<S: Scalar>(tab: &mut [Vec<S>], obj: &mut [S], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let prow = tab[r].clone();
    let eliminate = |row: &mut Vec<S>| {
        let f = row[c].clone();
        if f.is_zero() {
            return;
        }
        for (v, pv) in row.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    };
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    let mut o = obj.to_vec();
    eliminate(&mut o);
    obj.clone_from_slice(&o);
}
