use std::fmt;

use super::LatticeError;
use super::int::{Int, Rational, primitive_from_rationals, rsum, sign};
use super::small;
use super::vector::LatticeVector;

/// Rectangular matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: Vec<Vec<Int>>,
    ncols: usize,
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LatticeError::RaggedMatrix);
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Int>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(rows).expect("rectangular literal")
    }

    pub fn from_rows(rows: &[LatticeVector]) -> Result<Self, LatticeError> {
        Self::new(rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[LatticeVector]) -> Result<Self, LatticeError> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::ONE } else { Int::ZERO }).collect())
            .collect();
        Self { rows, ncols: n }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { rows: vec![vec![Int::ZERO; ncols]; nrows], ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.ncols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols).map(|j| self.column(j)).collect();
        Self { rows, ncols: self.rows.len() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.ncols != other.nrows() {
            return Err(LatticeError::DimensionMismatch { expected: self.ncols, found: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, orow)| a * &orow[j]).sum())
                    .collect()
            })
            .collect();
        Ok(Self { rows, ncols: other.ncols })
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.ncols, "matrix-vector dimension mismatch");
        self.rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_rational_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.ncols, "matrix-vector dimension mismatch");
        self.rows
            .iter()
            .map(|r| rsum(r.iter().zip(x).map(|(a, b)| Rational::from(a.clone()) * b)))
            .collect()
    }

    pub fn determinant(&self) -> Result<Int, LatticeError> {
        if self.nrows() != self.ncols {
            return Err(LatticeError::NotSquare { rows: self.nrows(), cols: self.ncols });
        }
        Ok(determinant(&self.rows))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_ok_and(|d| d == Int::ONE || d == Int::NEG_ONE)
    }

    pub fn rank(&self) -> usize {
        pivot_columns(&self.rows, self.ncols).len()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Bareiss determinant with row pivoting. `a` must be square.
pub(crate) fn determinant(a: &[Vec<Int>]) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::ONE;
    }
    let mut m = a.to_vec();
    let mut prev = Int::ONE;
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&p| !m[p][k].is_zero()) else {
            return Int::ZERO;
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if negate { -prev } else { prev }
}

/// Columns carrying pivots in a fraction-free row echelon form; their count is the rank.
pub(crate) fn pivot_columns(a: &[Vec<Int>], ncols: usize) -> Vec<usize> {
    if let Some(p) = small::pivot_columns(a, ncols) {
        return p;
    }
    let nrows = a.len();
    let mut m = a.to_vec();
    let mut prev = Int::ONE;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = t / &prev;
            }
            m[i][c] = Int::ZERO;
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `adj · A = A · adj = det · I` for a nonsingular square `A`.
#[derive(Clone, Debug)]
pub(crate) struct Adjugate {
    pub det: Int,
    pub adj: Vec<Vec<Int>>,
}

impl Adjugate {
    /// Fraction-free elimination on `[A | I]` followed by exact back substitution; `None` if singular.
    pub fn of(a: &[Vec<Int>]) -> Option<Self> {
        if let Some(found) = small::adjugate(a) {
            let (det, adj) = found?;
            let adj = adj.into_iter().map(|r| r.into_iter().map(Int::from).collect()).collect();
            return Some(Self { det: Int::from(det), adj });
        }
        let n = a.len();
        let mut m: Vec<Vec<Int>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Int::ONE } else { Int::ZERO }));
                row
            })
            .collect();
        let mut prev = Int::ONE;
        let mut negate = false;
        for k in 0..n {
            let p = (k..n).find(|&p| !m[p][k].is_zero())?;
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..2 * n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t / &prev;
                }
                m[i][k] = Int::ZERO;
            }
            prev = m[k][k].clone();
        }
        let det = if negate { -&prev } else { prev };
        let mut adj = vec![vec![Int::ZERO; n]; n];
        for col in 0..n {
            for i in (0..n).rev() {
                let mut acc = &det * &m[i][n + col];
                for l in i + 1..n {
                    acc -= &m[i][l] * &adj[l][col];
                }
                adj[i][col] = acc / &m[i][i];
            }
        }
        Some(Self { det, adj })
    }

    /// `adj · x`, a positive or negative multiple (`det`) of `A⁻¹ x`.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.adj.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `A⁻¹ x` over the rationals.
    pub fn solve(&self, x: &[Rational]) -> Vec<Rational> {
        let d = Rational::from(self.det.clone());
        self.adj
            .iter()
            .map(|r| {
                let s = rsum(r.iter().zip(x).map(|(a, b)| Rational::from(a.clone()) * b));
                s / &d
            })
            .collect()
    }

    pub fn det_sign_positive(&self) -> bool {
        sign(&self.det).is_gt()
    }
}

/// Primitive integer basis of `{y : yᵀ A = 0}` for an `r × k` matrix given by rows, each with
/// positive leading entry.
pub(crate) fn left_kernel(a: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let r = a.len();
    // Reduced row echelon form of Aᵀ (k × r) over Q.
    let mut m: Vec<Vec<Rational>> =
        (0..ncols).map(|j| (0..r).map(|i| Rational::from(a[i][j].clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..r {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(p, row);
        let inv = Rational::ONE / &m[row][c];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = m[row].clone();
        for (i, other) in m.iter_mut().enumerate() {
            if i != row && !other[c].is_zero() {
                let f = other[c].clone();
                for (x, p) in other.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..r).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut y = vec![Rational::ZERO; r];
            y[f] = Rational::ONE;
            for (pr, &pc) in pivots.iter().enumerate() {
                y[pc] = -m[pr][f].clone();
            }
            let mut y = primitive_from_rationals(&y);
            if y.iter().find(|x| !x.is_zero()).is_some_and(|x| sign(x).is_lt()) {
                y = y.into_iter().map(|x| -x).collect();
            }
            y
        })
        .collect()
}
