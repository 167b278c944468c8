//! Dense two-phase simplex over exact rationals, for the small feasibility
//! problems behind halfspace cell enumeration. Bland's rule avoids cycling.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

/// `maximize objective · y` subject to `row · y <= bound` for every row and `y >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let factor = self.a[r][col].clone();
            for (v, pv) in self.a[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Maximizes `cost` over the current basic feasible solution, only letting
    /// columns with `allowed[j]` enter. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let cols = cost.len();
        loop {
            let mut entering = None;
            for j in 0..cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() {
                        reduced -= &cost[b] * &self.a[i][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.a[i][col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, r)| &cost[b] * r).sum()
    }
}

pub fn maximize(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.rows.len();
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| lp.rows[i].1.is_negative()).collect();
    let k = artificial_rows.len();
    let cols = n + m + k;

    let mut a = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (row, bound)) in lp.rows.iter().enumerate() {
        assert_eq!(row.len(), n, "constraint row {i} has wrong length");
        let mut r = vec![zero(); cols];
        r[..n].clone_from_slice(row);
        r[n + i] = one();
        let mut b = bound.clone();
        if let Some(ai) = artificial_rows.iter().position(|&x| x == i) {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
            r[n + m + ai] = one();
            basis.push(n + m + ai);
        } else {
            basis.push(n + i);
        }
        a.push(r);
        rhs.push(b);
    }
    let mut t = Tableau { a, rhs, basis };

    if k > 0 {
        let mut phase1 = vec![zero(); cols];
        for c in phase1.iter_mut().skip(n + m) {
            *c = -one();
        }
        let allowed = vec![true; cols];
        t.optimize(&phase1, &allowed);
        if t.objective_value(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut row = 0;
        while row < t.a.len() {
            if t.basis[row] >= n + m {
                match (0..n + m).find(|&j| !t.a[row][j].is_zero()) {
                    Some(j) => t.pivot(row, j),
                    None => {
                        t.a.remove(row);
                        t.rhs.remove(row);
                        t.basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }
    }

    let mut cost = vec![zero(); cols];
    cost[..n].clone_from_slice(&lp.objective);
    let allowed: Vec<bool> = (0..cols).map(|j| j < n + m).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![zero(); n];
    for (&b, r) in t.basis.iter().zip(&t.rhs) {
        if b < n {
            point[b] = r.clone();
        }
    }
    let value = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal { value, point }
}
