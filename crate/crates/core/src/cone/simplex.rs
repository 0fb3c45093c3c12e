//! Dense exact-rational phase-one simplex for `A·y = b, y ≥ 0`.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. When the system is infeasible the optimal phase-one duals give
//! a Farkas vector `z` with `Aᵀz ≥ 0` and `bᵀz < 0`.

use num_traits::{Signed, Zero};

use crate::model::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A nonnegative solution of `A·y = b`.
    Feasible(Vec<Rational>),
    /// `z` with `Aᵀz ≥ 0` componentwise and `bᵀz < 0`.
    Infeasible(Vec<Rational>),
}

/// Solves `A·y = b, y ≥ 0` exactly. `a` is row-major with `b.len()` rows.
pub fn solve_nonnegative(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let rows = b.len();
    let cols = a.first().map_or(0, Vec::len);
    debug_assert!(a.iter().all(|r| r.len() == cols));
    let width = cols + rows + 1;
    let rhs = width - 1;

    // Row i is multiplied by sign(b_i) so every right-hand side starts >= 0;
    // artificial variable i (column cols + i) starts basic in row i.
    let flips: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for j in 0..cols {
                row[j] = if flips[i] { -a[i][j].clone() } else { a[i][j].clone() };
            }
            row[cols + i] = Rational::from_integer(1.into());
            row[rhs] = b[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs for minimising the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    for c in &mut cost[cols..cols + rows] {
        *c = Rational::from_integer(1.into());
    }
    for row in &tab {
        for j in 0..width {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
    }

    while let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, _) = leave.expect("phase-one objective is bounded below by zero");
        pivot(&mut tab, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    // cost[rhs] holds minus the objective value
    if cost[rhs].is_zero() {
        let mut y = vec![Rational::zero(); cols];
        for (i, &var) in basis.iter().enumerate() {
            if var < cols {
                y[var] = tab[i][rhs].clone();
            }
        }
        Feasibility::Feasible(y)
    } else {
        // reduced cost of artificial i is 1 - u_i, with u the phase-one dual
        let z = (0..rows)
            .map(|i| {
                let u = Rational::from_integer(1.into()) - &cost[cols + i];
                if flips[i] {
                    u
                } else {
                    -u
                }
            })
            .collect();
        Feasibility::Infeasible(z)
    }
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for x in tab[row].iter_mut() {
        if !x.is_zero() {
            *x /= &p;
        }
    }
    let pivot_row = tab[row].clone();
    let eliminate = |target: &mut [Rational]| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for (t, pr) in target.iter_mut().zip(&pivot_row) {
            if !pr.is_zero() {
                *t -= &factor * pr;
            }
        }
    };
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    eliminate(cost);
}
