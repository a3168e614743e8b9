//! Checked `i64` versions of the Bareiss kernels. Each returns `None` on overflow so the caller can
//! redo the work with arbitrary precision; the answers are identical whenever both succeed.

use super::int::{Int, to_i64};

pub(crate) fn to_small(a: &[Vec<Int>]) -> Option<Vec<Vec<i64>>> {
    a.iter().map(|r| r.iter().map(to_i64).collect()).collect()
}

/// `(a·d − b·c) / prev`, exact by Bareiss.
fn step(a: i64, d: i64, b: i64, c: i64, prev: i64) -> Option<i64> {
    a.checked_mul(d)?.checked_sub(b.checked_mul(c)?)?.checked_div(prev)
}

pub(crate) fn pivot_columns(a: &[Vec<Int>], ncols: usize) -> Option<Vec<usize>> {
    let mut m = to_small(a)?;
    let nrows = m.len();
    let mut prev = 1i64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&p| m[p][c] != 0) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                m[i][j] = step(m[i][j], m[r][c], m[i][c], m[r][j], prev)?;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

/// `(det, adj)`; the outer `None` means overflow, the inner one a singular matrix.
#[allow(clippy::type_complexity, clippy::option_option)]
pub(crate) fn adjugate(a: &[Vec<Int>]) -> Option<Option<(i64, Vec<Vec<i64>>)>> {
    adjugate_of(to_small(a)?)
}

#[allow(clippy::type_complexity, clippy::option_option)]
pub(crate) fn adjugate_of(mut m: Vec<Vec<i64>>) -> Option<Option<(i64, Vec<Vec<i64>>)>> {
    let n = m.len();
    for (i, row) in m.iter_mut().enumerate() {
        row.extend((0..n).map(|j| i64::from(i == j)));
    }
    let mut prev = 1i64;
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&p| m[p][k] != 0) else {
            return Some(None);
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..2 * n {
                m[i][j] = step(m[i][j], m[k][k], m[i][k], m[k][j], prev)?;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    let det = if negate { prev.checked_neg()? } else { prev };
    let mut adj = vec![vec![0i64; n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = det.checked_mul(m[i][n + col])?;
            for l in i + 1..n {
                acc = acc.checked_sub(m[i][l].checked_mul(adj[l][col])?)?;
            }
            adj[i][col] = acc.checked_div(m[i][i])?;
        }
    }
    Some(Some((det, adj)))
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> Option<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (&x, &y)| acc.checked_add(i128::from(x) * i128::from(y)))
}
