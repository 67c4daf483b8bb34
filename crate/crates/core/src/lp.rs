//! Exact small-scale linear feasibility: Phase-I simplex with Bland's rule
//! and Gaussian elimination, over `i128` rationals.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Working precision of the solvers.
pub type Q = Ratio<i128>;

pub fn widen(r: &Rational) -> Q {
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

/// Narrows back to [`Rational`]; `None` if a part does not fit in `i64`.
pub fn narrow(q: &Q) -> Option<Rational> {
    Some(Rational::new(i64::try_from(*q.numer()).ok()?, i64::try_from(*q.denom()).ok()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `Σ coeffs[j]·x_j  (≤ | = | ≥)  rhs`
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, relation: Relation, rhs: Q) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// A point satisfying every constraint, or `None`.
///
/// Variables are non-negative unless `free` is set, in which case each is
/// split into a difference of two non-negative parts.
pub fn feasible_point(vars: usize, constraints: &[Constraint], free: bool) -> Option<Vec<Q>> {
    let width = if free { 2 * vars } else { vars };
    let mut rows = Vec::with_capacity(constraints.len());
    let mut rhs = Vec::with_capacity(constraints.len());
    let slacks = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let mut slack = 0;
    for c in constraints {
        assert_eq!(c.coeffs.len(), vars, "constraint width must match the variable count");
        let mut row = vec![Q::zero(); width + slacks];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = *a;
            if free {
                row[vars + j] = -*a;
            }
        }
        match c.relation {
            Relation::Le => {
                row[width + slack] = Q::one();
                slack += 1;
            }
            Relation::Ge => {
                row[width + slack] = -Q::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        rows.push(row);
        rhs.push(c.rhs);
    }
    let z = standard_feasible(&rows, &rhs)?;
    Some(if free {
        (0..vars).map(|j| z[j] - z[vars + j]).collect()
    } else {
        z[..vars].to_vec()
    })
}

/// Some `x ≥ 0` with `a·x = b`, by Phase-I simplex with Bland's rule.
pub fn standard_feasible(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // tableau columns: n originals, m artificials, rhs
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (row, &rhs) in a.iter().zip(b) {
        let sign = if rhs.is_negative() { -Q::one() } else { Q::one() };
        let mut r: Vec<Q> = row.iter().map(|&v| v * sign).collect();
        r.extend((0..m).map(|_| Q::zero()));
        r.push(rhs * sign);
        t.push(r);
    }
    for (k, r) in t.iter_mut().enumerate() {
        r[n + k] = Q::one();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cols = n + m;
    // reduced costs of the Phase-I objective: minimize the sum of artificials
    let mut cost = vec![Q::zero(); cols + 1];
    for r in &t {
        for j in 0..n {
            cost[j] -= r[j];
        }
        cost[cols] -= r[cols];
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Q)> = None;
        for (k, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = r[cols] / r[enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[k] < basis[*l]),
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
        }
        let (row, _) = leave.expect("the Phase-I objective is bounded below");
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }
    if !cost[cols].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (k, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[k][cols];
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Q>], cost: &mut [Q], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (k, r) in t.iter_mut().enumerate() {
        if k != row && !r[col].is_zero() {
            let f = r[col];
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
    let f = cost[col];
    if !f.is_zero() {
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
    }
}

/// Rank of the matrix with the given columns.
pub fn column_rank(columns: &[Vec<Q>]) -> usize {
    let Some(height) = columns.first().map(Vec::len) else { return 0 };
    let mut m: Vec<Vec<Q>> = (0..height).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    echelon(&mut m, columns.len())
}

/// Reduces `m` in place to reduced row echelon form over its first `cols`
/// columns; returns the rank.
fn echelon(m: &mut [Vec<Q>], cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let lead = m[rank][c];
        for v in m[rank].iter_mut() {
            *v /= lead;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The unique solution of `Σ_j λ_j·columns[j] = target`, if the columns are
/// linearly independent and the system is consistent.
pub fn unique_combination(columns: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = columns.len();
    let mut m: Vec<Vec<Q>> = target
        .iter()
        .enumerate()
        .map(|(r, &t)| columns.iter().map(|c| c[r]).chain(std::iter::once(t)).collect())
        .collect();
    let rank = echelon(&mut m, k);
    if rank < k || m[rank..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    // reduced rows `rank` are the pivots, one per column, in order
    Some(m[..k].iter().map(|row| row[k]).collect())
}
