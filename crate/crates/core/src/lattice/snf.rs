//! Smith and Hermite normal forms, and the projection `Z^{n+1} → Z^{n+1}/Zv`.

use super::LatticeError;
use super::int::{Int, abs, div_floor, sign};
use super::matrix::IntegerMatrix;
use super::vector::LatticeVector;

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithNormalForm {
    pub fn invariant_factors(&self) -> Vec<Int> {
        let k = self.d.nrows().min(self.d.ncols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn snf(m: &IntegerMatrix) -> Result<SmithNormalForm, LatticeError> {
    if m.is_empty() {
        return Err(LatticeError::EmptyMatrix);
    }
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.clone().into_rows();
    let mut u = IntegerMatrix::identity(nr).into_rows();
    let mut v = IntegerMatrix::identity(nc).into_rows();

    for t in 0..nr.min(nc) {
        loop {
            let Some((pi, pj)) = smallest_entry(&a, t) else {
                return Ok(finish(a, u, v, nc));
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_columns(&mut a, t, pj);
            swap_columns(&mut v, t, pj);

            for i in t + 1..nr {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
            }
            for j in t + 1..nc {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
            }
            let clean = (t + 1..nr).all(|i| a[i][t].is_zero()) && (t + 1..nc).all(|j| a[t][j].is_zero());
            if !clean {
                continue;
            }
            let pivot = a[t][t].clone();
            let offender = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    // Pull the non-divisible row into the pivot row and reduce again.
                    row_axpy(&mut a, t, i, &Int::NEG_ONE);
                    row_axpy(&mut u, t, i, &Int::NEG_ONE);
                }
                None => break,
            }
        }
        if sign(&a[t][t]).is_lt() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Ok(finish(a, u, v, nc))
}

fn finish(a: Vec<Vec<Int>>, u: Vec<Vec<Int>>, v: Vec<Vec<Int>>, _nc: usize) -> SmithNormalForm {
    SmithNormalForm {
        u: IntegerMatrix::new(u).expect("square"),
        d: IntegerMatrix::new(a).expect("rectangular"),
        v: IntegerMatrix::new(v).expect("square"),
    }
}

fn smallest_entry(a: &[Vec<Int>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = abs(x);
            if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_columns(a: &mut [Vec<Int>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row[dst] -= q · row[src]`.
fn row_axpy(a: &mut [Vec<Int>], dst: usize, src: usize, q: &Int) {
    let src_row = a[src].clone();
    for (x, s) in a[dst].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

/// `col[dst] -= q · col[src]`.
fn col_axpy(a: &mut [Vec<Int>], dst: usize, src: usize, q: &Int) {
    for row in a.iter_mut() {
        let t = q * &row[src];
        row[dst] -= t;
    }
}

/// Row-style Hermite normal form of the row lattice: echelon, positive pivots, entries above a
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    let nc = m.ncols();
    let mut a = m.clone().into_rows();
    let nr = a.len();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        loop {
            let pick = (r..nr)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| abs(&a[i][c]).cmp(&abs(&a[j][c])));
            let Some(p) = pick else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..nr {
                if !a[i][c].is_zero() {
                    let q = &a[i][c] / &a[r][c];
                    row_axpy(&mut a, i, r, &q);
                    done &= a[i][c].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if sign(&a[r][c]).is_lt() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = div_floor(&a[i][c], &a[r][c]);
            if !q.is_zero() {
                row_axpy(&mut a, i, r, &q);
            }
        }
        r += 1;
    }
    a.truncate(r);
    IntegerMatrix::new(a).expect("rectangular")
}

/// An `n × (n+1)` matrix `P` with `P·v = 0` whose rows span the dual of `Z^{n+1}/Zv`.
///
/// When some `|vᵢ| = 1` (last such index) the completion `{v} ∪ {e_j : j ≠ i}` is a basis and
/// `P` has rows `e_jᵀ − (v_j/v_i) e_iᵀ`; otherwise the rows of the Smith transform after the first.
pub fn quotient_projection(v: &LatticeVector) -> Result<IntegerMatrix, LatticeError> {
    let n1 = v.rank();
    if n1 < 2 {
        return Err(LatticeError::RankTooSmall { rank: n1, minimum: 2 });
    }
    if !v.is_primitive() {
        return Err(LatticeError::NonPrimitive(v.clone()));
    }
    let c = v.coords();
    if let Some(i) = (0..n1).rev().find(|&i| c[i] == Int::ONE || c[i] == Int::NEG_ONE) {
        let rows = (0..n1)
            .filter(|&j| j != i)
            .map(|j| {
                let mut row = vec![Int::ZERO; n1];
                row[j] = Int::ONE;
                // v_i = ±1, so −v_j / v_i = −v_j · v_i.
                row[i] = -(&c[j] * &c[i]);
                row
            })
            .collect();
        return IntegerMatrix::new(rows);
    }
    let column = IntegerMatrix::from_columns(std::slice::from_ref(v))?;
    let s = snf(&column)?;
    IntegerMatrix::new(s.u.rows()[1..].to_vec())
}

/// `quotient_projection` brought to Hermite normal form: a basis choice for `N/Zv` that depends only
/// on the sublattice `v^⊥`, not on how it was computed.
pub fn canonical_quotient_projection(v: &LatticeVector) -> Result<IntegerMatrix, LatticeError> {
    Ok(hermite_normal_form(&quotient_projection(v)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int::int;

    fn check(m: &IntegerMatrix) -> SmithNormalForm {
        let s = snf(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        s
    }

    #[test]
    fn identity_is_its_own_form() {
        let s = check(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
        assert_eq!(s.u, IntegerMatrix::identity(3));
        assert_eq!(s.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn diag_two_three_becomes_one_six() {
        let s = check(&IntegerMatrix::from_i64(&[[2, 0], [0, 3]]));
        assert_eq!(s.d, IntegerMatrix::from_i64(&[[1, 0], [0, 6]]));
    }

    #[test]
    fn primitive_row_reduces_to_unit() {
        let s = check(&IntegerMatrix::from_i64(&[[-2, -1, 1]]));
        assert_eq!(s.d, IntegerMatrix::from_i64(&[[1, 0, 0]]));
    }

    #[test]
    fn empty_matrix_rejected() {
        assert_eq!(snf(&IntegerMatrix::zeros(0, 0)), Err(LatticeError::EmptyMatrix));
    }

    #[test]
    fn projection_examples() {
        let p = quotient_projection(&LatticeVector::from_i64(&[-1, 1])).unwrap();
        assert_eq!(p, IntegerMatrix::from_i64(&[[1, 1]]));
        let p = quotient_projection(&LatticeVector::from_i64(&[-2, -1, 1])).unwrap();
        assert_eq!(p, IntegerMatrix::from_i64(&[[1, 0, 2], [0, 1, 1]]));
        assert!(matches!(
            quotient_projection(&LatticeVector::from_i64(&[-2, 2])),
            Err(LatticeError::NonPrimitive(_))
        ));
    }

    #[test]
    fn projection_without_unit_entry_uses_smith_transform() {
        let v = LatticeVector::from_i64(&[-3, 0, 2, 5]);
        let p = quotient_projection(&v).unwrap();
        assert_eq!(p.nrows(), 3);
        assert!(p.mul_vec(v.coords()).iter().all(|x| x.is_zero()));
        assert_eq!(snf(&p).unwrap().invariant_factors(), vec![int(1); 3]);
    }

    #[test]
    fn hermite_form_is_reduced_echelon() {
        let h = hermite_normal_form(&IntegerMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(h, IntegerMatrix::from_i64(&[[2, 4, 4], [0, 6, 0], [0, 0, 12]]));
        let c = canonical_quotient_projection(&LatticeVector::from_i64(&[-2, -1, 1])).unwrap();
        assert_eq!(c, IntegerMatrix::from_i64(&[[1, 0, 2], [0, 1, 1]]));
    }
}
