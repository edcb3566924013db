//! Exact-rational feasibility for `A x = b, x ≥ 0`.
//!
//! Phase-one simplex on a dense tableau with one artificial variable per row,
//! Bland's rule for both the entering and the leaving variable.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A basic feasible point of `{x ≥ 0 : A x = b}`, or `None` if the system is
/// infeasible. Rows of `a` must all have the same length.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    let width = n + m + 1;
    let rhs = width - 1;
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = bi.is_negative();
        let mut t = vec![Rational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v.clone() } else { v.clone() };
        }
        t[n + i] = Rational::one();
        t[rhs] = if flip { -bi.clone() } else { bi.clone() };
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![Rational::zero(); width];
    for row in &tableau {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }

    loop {
        let Some(entering) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so some row always qualifies
        let (pivot_row, _) = leaving.expect("phase-one objective is bounded");
        pivot(&mut tableau, &mut cost, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tableau[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let p = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tableau[row].clone();
    for (i, other) in tableau.iter_mut().enumerate() {
        if i == row || other[col].is_zero() {
            continue;
        }
        let factor = other[col].clone();
        for (v, pv) in other.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
}
