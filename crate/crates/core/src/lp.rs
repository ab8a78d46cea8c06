//! Exact linear programming over `Q`: dense two-phase simplex with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows: constraints, last column is the right-hand side
    a: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = &*v / &p;
        }
        let row = self.a[r].clone();
        for (i, other) in self.a.iter_mut().enumerate() {
            if i == r || other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (v, w) in other.iter_mut().zip(&row) {
                if !w.is_zero() {
                    *v = &*v - &(&f * w);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over the current basis; `allowed` masks entering columns.
    fn optimize(&mut self, obj: &[BigRational], allowed: usize) -> bool {
        let width = self.a[0].len() - 1;
        loop {
            // reduced costs
            let mut entering = None;
            for c in 0..allowed.min(width) {
                if self.basis.contains(&c) {
                    continue;
                }
                let mut rc = obj[c].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.a[i][c].is_zero() {
                        rc -= &obj[b] * &self.a[i][c];
                    }
                }
                if rc.is_positive() {
                    entering = Some(c);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.a.len() {
                if self.a[i][c].is_positive() {
                    let ratio = &self.a[i][width] / &self.a[i][c];
                    let better = match &leave {
                        None => true,
                        Some((j, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*j]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes `c · x` subject to `A x ≤ b`, `x ≥ 0`.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpResult {
    let n = c.len();
    let m = a.len();
    // columns: x (n), slacks (m), artificials (m), rhs
    let width = n + 2 * m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width + 1];
        let neg = b[i].is_negative();
        let sign = if neg { -BigRational::one() } else { BigRational::one() };
        for j in 0..n {
            row[j] = &a[i][j] * &sign;
        }
        row[n + i] = sign.clone();
        row[width] = &b[i] * &sign;
        if neg {
            row[n + m + i] = BigRational::one();
            basis.push(n + m + i);
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { a: rows, basis };
    // phase 1: maximize minus the sum of artificials
    let mut phase1 = vec![BigRational::zero(); width];
    for v in phase1.iter_mut().skip(n + m) {
        *v = -BigRational::one();
    }
    if t.basis.iter().any(|&b| b >= n + m) {
        t.optimize(&phase1, width);
        let infeasible = t.basis.iter().enumerate().any(|(i, &b)| b >= n + m && !t.a[i][width].is_zero());
        if infeasible {
            return LpResult::Infeasible;
        }
        // drive zero-valued artificials out of the basis where possible
        for i in 0..m {
            if t.basis[i] >= n + m {
                if let Some(c) = (0..n + m).find(|&c| !t.a[i][c].is_zero()) {
                    t.pivot(i, c);
                }
            }
        }
    }
    let mut obj = vec![BigRational::zero(); width];
    obj[..n].clone_from_slice(c);
    for v in obj.iter_mut().skip(n + m) {
        *v = BigRational::zero();
    }
    if !t.optimize(&obj, n + m) {
        return LpResult::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = t.a[i][width].clone();
        }
    }
    let value = x.iter().zip(c).fold(BigRational::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpResult::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let r = maximize(&[q(3), q(5)], &[vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]], &[q(4), q(12), q(18)]);
        assert_eq!(r, LpResult::Optimal { x: vec![q(2), q(6)], value: q(36) });
    }

    #[test]
    fn needs_phase_one() {
        // max -x - y, x + y ≥ 2 → -2
        match maximize(&[q(-1), q(-1)], &[vec![q(-1), q(-1)]], &[q(-2)]) {
            LpResult::Optimal { value, .. } => assert_eq!(value, q(-2)),
            other => panic!("{other:?}"),
        }
        assert_eq!(maximize(&[q(1)], &[vec![q(1)], vec![q(-1)]], &[q(1), q(-2)]), LpResult::Infeasible);
        assert_eq!(maximize(&[q(1)], &[vec![q(-1)]], &[q(0)]), LpResult::Unbounded);
    }
}
