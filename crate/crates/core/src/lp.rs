//! Exact linear feasibility for `Σ λ_j c_j = b, λ ≥ 0`.
//!
//! Phase-1 simplex on a dense rational tableau with Bland's smallest-index
//! rule, so degenerate bases cannot cycle. Infeasibility comes back as a
//! Farkas vector `u` with `⟨u, c_j⟩ ≤ 0` for every column and `⟨u, b⟩ > 0`.

use num_traits::{One, Signed, Zero};

use crate::vector::{Rational, Vector};

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Nonnegative coefficients, one per input column.
    Feasible(Vec<Rational>),
    /// Farkas certificate of infeasibility.
    Infeasible(Vector),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides whether `rhs` is a nonnegative combination of `columns`.
pub fn nonnegative_combination(columns: &[Vector], rhs: &Vector) -> Feasibility {
    let m = rhs.dim();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.dim() == m));

    // Rows are negated where needed so the starting artificial basis is feasible.
    let flip: Vec<bool> = rhs.coords().iter().map(|b| b.is_negative()).collect();
    let width = k + m + 1;
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            for col in columns {
                row.push(if flip[i] { -col[i].clone() } else { col[i].clone() });
            }
            for j in 0..m {
                row.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Reduced costs for minimizing the sum of artificials; last slot holds -objective.
    let mut cost = vec![Rational::zero(); width];
    for row in &tab {
        for (j, c) in cost.iter_mut().enumerate().take(k) {
            *c -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    while let Some(enter) = (0..k).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase 1 is bounded below by zero, so an entering column always has a pivot row.
        let (pr, _) = leave.expect("phase-1 objective is bounded");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    let objective = -cost[width - 1].clone();
    if objective.is_zero() {
        let mut coeffs = vec![Rational::zero(); k];
        for (r, &b) in basis.iter().enumerate() {
            if b < k {
                coeffs[b] = tab[r][width - 1].clone();
            }
        }
        Feasibility::Feasible(coeffs)
    } else {
        // Reduced cost of artificial i is 1 - u_i, where u = c_B^T B^{-1}.
        let u = (0..m)
            .map(|i| {
                let ui = Rational::one() - &cost[k + i];
                if flip[i] {
                    -ui
                } else {
                    ui
                }
            })
            .collect();
        Feasibility::Infeasible(Vector::new(u))
    }
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r != pr && !row[pc].is_zero() {
            let factor = row[pc].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
    }
    if !cost[pc].is_zero() {
        let factor = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}

/// Checks a Farkas vector against the system it claims to refute.
pub fn is_farkas_certificate(columns: &[Vector], rhs: &Vector, u: &Vector) -> bool {
    columns.iter().all(|c| !u.dot(c).is_positive()) && u.dot(rhs).is_positive()
}

/// Checks that `coeffs` is a nonnegative solution.
pub fn is_nonnegative_solution(columns: &[Vector], rhs: &Vector, coeffs: &[Rational]) -> bool {
    if coeffs.len() != columns.len() || coeffs.iter().any(|c| c.is_negative()) {
        return false;
    }
    let mut acc = Vector::zeros(rhs.dim());
    for (c, col) in coeffs.iter().zip(columns) {
        if !c.is_zero() {
            acc = &acc + &col.scale(c);
        }
    }
    acc == *rhs
}
