//! Exact linear programming over rationals.
//!
//! Dense two-phase simplex on problems in standard form
//! `minimize c·x subject to A x = b, x >= 0`, pivoting with Bland's rule.

use crate::rational::Rational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct StandardLp {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (r, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * &self.rows[r][j];
            }
        }
        d
    }

    /// Runs Bland pivots on `cost` over columns `< allowed`. Returns false if
    /// the objective is unbounded below.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let d = self.reduced_costs(cost);
            let Some(col) = (0..allowed).find(|&j| d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

impl StandardLp {
    /// Feasibility-only problem (zero objective).
    pub fn feasibility(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Self {
        let n = a.first().map_or(0, Vec::len);
        StandardLp {
            a,
            b,
            c: vec![Rational::zero(); n],
        }
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        assert!(self.a.iter().all(|row| row.len() == n), "ragged constraint matrix");
        assert_eq!(self.b.len(), m, "rhs length differs from row count");

        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, bi)) in self.a.iter().zip(&self.b).enumerate() {
            let flip = bi.is_negative();
            let mut t: Vec<Rational> = row
                .iter()
                .map(|v| if flip { -v } else { v.clone() })
                .collect();
            t.extend((0..m).map(|k| Rational::from_integer((k == i).into())));
            t.push(if flip { -bi } else { bi.clone() });
            rows.push(t);
        }
        let mut tab = Tableau {
            rows,
            basis: (n..n + m).collect(),
            width,
        };

        let mut phase1 = vec![Rational::zero(); width];
        for c in phase1.iter_mut().skip(n) {
            *c = Rational::from_integer(1.into());
        }
        tab.optimize(&phase1, width);
        let infeasibility: Rational = (0..m)
            .filter(|&r| tab.basis[r] >= n)
            .map(|r| tab.rhs(r).clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }

        // Drive artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n {
                match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(col) => tab.pivot(r, col),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }

        let mut cost = self.c.clone();
        cost.extend(std::iter::repeat_n(Rational::zero(), m));
        if !tab.optimize(&cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &bv) in tab.basis.iter().enumerate() {
            if bv < n {
                x[bv] = tab.rhs(r).clone();
            }
        }
        let value = x.iter().zip(&self.c).map(|(xi, ci)| xi * ci).sum();
        LpOutcome::Optimal { x, value }
    }
}

/// A nonnegative solution of `A x = b`, if one exists.
pub fn feasible_point(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Option<Vec<Rational>> {
    match StandardLp::feasibility(a, b).solve() {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
