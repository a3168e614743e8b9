//! Exact two-phase simplex over the rationals, Bland's rule throughout (no cycling).
//!
//! Only used on the small systems that arise from cone intersections, so the dense tableau is fine.

use super::int::{Rational, rational_sign, rsum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Maximize `c·x` subject to `A x = b`, `x ≥ 0`.
pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (row, rhs) in a.iter().zip(b) {
        let flip = rational_sign(rhs).is_lt();
        let mut r = Vec::with_capacity(width);
        for x in row {
            r.push(if flip { -x.clone() } else { x.clone() });
        }
        r.extend(std::iter::repeat_n(Rational::ZERO, m));
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        t.push(r);
    }
    for (i, r) in t.iter_mut().enumerate() {
        r[n + i] = Rational::ONE;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase one: maximize −Σ artificials.
    let mut phase1 = vec![Rational::ZERO; n + m];
    for x in phase1.iter_mut().skip(n) {
        *x = Rational::NEG_ONE;
    }
    let active: Vec<usize> = (0..n + m).collect();
    if run(&mut t, &mut basis, &phase1, &active) == Step::Unbounded {
        unreachable!("phase one objective is bounded by zero");
    }
    let infeasibility = rsum(basis.iter().zip(&t).filter(|&(&j, _)| j >= n).map(|(_, r)| r[width - 1].clone()));
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; rows where that is impossible are redundant.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(Rational::ZERO, m));
    let real: Vec<usize> = (0..n).collect();
    match run(&mut t, &mut basis, &cost, &real) {
        Step::Unbounded => LpOutcome::Unbounded,
        Step::Optimal => {
            let mut x = vec![Rational::ZERO; n];
            for (r, &j) in t.iter().zip(&basis) {
                x[j] = r[width - 1].clone();
            }
            let value = rsum(x.iter().zip(c).map(|(xi, ci)| xi * ci));
            LpOutcome::Optimal { value, x }
        }
    }
}

#[derive(PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded,
}

fn run(t: &mut [Vec<Rational>], basis: &mut [usize], cost: &[Rational], columns: &[usize]) -> Step {
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    loop {
        let entering = columns.iter().copied().find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z = rsum(basis.iter().zip(t.iter()).map(|(&b, r)| &cost[b] * &r[j]));
            rational_sign(&(&cost[j] - z)).is_gt()
        });
        let Some(j) = entering else { return Step::Optimal };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if rational_sign(&r[j]).is_gt() {
                let ratio = &r[rhs] / &r[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else { return Step::Unbounded };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], i: usize, j: usize) {
    let inv = Rational::ONE / &t[i][j];
    for x in t[i].iter_mut() {
        *x = &*x * &inv;
    }
    let prow = t[i].clone();
    for (k, r) in t.iter_mut().enumerate() {
        if k != i && !r[j].is_zero() {
            let f = r[j].clone();
            for (x, p) in r.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
    }
    basis[i] = j;
}
