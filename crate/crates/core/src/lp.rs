//! Exact linear programming over the rationals.
//!
//! Dense two-phase simplex with Bland's rule, so it always terminates.
//! Problems here are tiny (fan-sized), so no effort is spent on sparsity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(Vec<BigRational>),
}

/// Standard-form problem: minimize `cost · x` subject to `A x = b`, `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub cost: Vec<BigRational>,
}

impl StandardLp {
    pub fn feasibility(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Self {
        let n = a.first().map_or(0, Vec::len);
        StandardLp { a, b, cost: vec![BigRational::zero(); n] }
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.solve(), LpOutcome::Optimal(_) | LpOutcome::Unbounded)
    }
}

struct Tableau {
    // rows of [coefficients | rhs]
    rows: Vec<Vec<BigRational>>,
    // reduced costs, length = number of columns (rhs excluded); last entry of `obj` is -z
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's-rule simplex over columns `< allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.a.len();
    let n = lp.cost.len();
    assert!(lp.a.iter().all(|r| r.len() == n) && lp.b.len() == m, "malformed LP");

    // phase 1: artificial columns n..n+m
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (arow, bi)) in lp.a.iter().zip(&lp.b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<BigRational> =
            arow.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        row.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    let mut obj = vec![BigRational::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width] -= &row[width];
    }
    let mut t = Tableau { rows, obj, basis: (n..n + m).collect(), ncols: width };
    t.run(width);
    if t.obj[width].is_negative() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2 on the original columns
    for row in t.rows.iter_mut() {
        let rhs = row[width].clone();
        row.truncate(n);
        row.push(rhs);
    }
    t.ncols = n;
    let mut obj: Vec<BigRational> = lp.cost.clone();
    obj.push(BigRational::zero());
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = lp.cost[bv].clone();
        if cb.is_zero() {
            continue;
        }
        for (o, v) in obj.iter_mut().zip(row) {
            *o -= &cb * v;
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[n].clone();
    }
    LpOutcome::Optimal(x)
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_big(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|row| row.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn simple_minimum() {
        // min x + y  s.t.  x - y - s = 1 (x - y >= 1)
        let lp = StandardLp { a: r(&[&[1, -1, -1]]), b: vec![rat(1)], cost: vec![rat(1), rat(1), rat(0)] };
        assert_eq!(lp.solve(), LpOutcome::Optimal(vec![rat(1), rat(0), rat(0)]));
    }

    #[test]
    fn infeasible_system() {
        // x + y = -1 with x, y >= 0
        let lp = StandardLp::feasibility(r(&[&[1, 1]]), vec![rat(-1)]);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_objective() {
        let lp = StandardLp { a: r(&[&[1, -1]]), b: vec![rat(0)], cost: vec![rat(-1), rat(0)] };
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let lp = StandardLp {
            a: r(&[&[1, 1, 0], &[2, 2, 0], &[0, 1, 1]]),
            b: vec![rat(2), rat(4), rat(1)],
            cost: vec![rat(0), rat(0), rat(1)],
        };
        match lp.solve() {
            LpOutcome::Optimal(x) => {
                assert_eq!(&x[0] + &x[1], rat(2));
                assert_eq!(x[2], rat(0));
            }
            other => panic!("{other:?}"),
        }
    }
}
