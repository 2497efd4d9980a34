use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use super::{fmt_rational, QVector, Rational};
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| super::int(x)).collect())
            .collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<QVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| super::dot(self.row(i), v)).collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Result<QVector> {
        self.transpose().mul_vec(v)
    }

    pub fn scaled(&self, s: &Rational) -> QMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        self.scaled(&-Rational::one())
    }

    /// Rows `ri` and columns `ci`, in the given order.
    pub fn submatrix(&self, ri: &[usize], ci: &[usize]) -> QMatrix {
        let mut m = Self::zeros(ri.len(), ci.len());
        for (a, &i) in ri.iter().enumerate() {
            for (b, &j) in ci.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn block_diagonal(blocks: &[QMatrix]) -> QMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact positive-definiteness test for symmetric matrices: symmetric
    /// Gaussian elimination without pivoting succeeds with every pivot > 0.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return false;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &a[k][k];
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        true
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact inverse by fraction-free Gauss-Jordan elimination.
///
/// Each row is first scaled to integers. Elimination on `[A | I]` then runs
/// entirely in `BigInt`; every division by the previous pivot is exact, so
/// intermediate entries stay bounded by minors of `A`. The final left block is
/// `det * I` and the right block `det * A^-1`.
pub fn invert(m: &QMatrix) -> Result<QMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cannot invert a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    // Row scales L_i so that diag(L) * m is integral; m^-1 = (diag(L) m)^-1 diag(L).
    let scales: Vec<BigInt> = (0..n)
        .map(|i| m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
        .collect();
    let w = 2 * n;
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = m
                .row(i)
                .iter()
                .map(|x| (x * &scales[i]).to_integer())
                .collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        let pivot_row = a[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..w {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = pivot;
    }
    let det = prev;
    let mut inv = QMatrix::zeros(n, n);
    for i in 0..n {
        debug_assert_eq!(a[i][i], det);
        for j in 0..n {
            // column j of (diag(L) m)^-1 is scaled by L_j
            let num = &a[i][n + j] * &scales[j];
            inv.set(i, j, Rational::new(num, det.clone()));
        }
    }
    Ok(inv)
}

/// Unique solution of `m x = b` by ordinary rational row reduction.
///
/// Deliberately shares no code with [`invert`], so the two can serve as
/// independent routes for one another.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Result<QVector> {
    if !m.is_square() || b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve with {}x{} matrix and length-{} rhs",
            m.rows,
            m.cols,
            b.len()
        )));
    }
    let n = m.rows;
    let mut a: Vec<QVector> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        let inv = a[k][k].recip();
        for x in a[k].iter_mut() {
            *x *= &inv;
        }
        let pr = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, y) in row.iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `D = A * [[B^-1, -B^-1 C], [0, Id]]` for the partition of an `n x n` Gramm
/// matrix `A` whose leading `m x m` block is `B` and upper-right block is `C`.
///
/// Row `p` of `D` expresses the `p`-th vector of the original basis in the
/// mixed basis made of the first `m` roots followed by the last `n - m` dual
/// weights.
pub fn block_coefficient_matrix(a: &QMatrix, b: &QMatrix, c: &QMatrix) -> Result<QMatrix> {
    let n = a.rows;
    let m = b.rows;
    if !a.is_square() || !b.is_square() || m > n || c.rows != m || c.cols != n - m {
        return Err(Error::DimensionMismatch(format!(
            "blocks a:{}x{} b:{}x{} c:{}x{}",
            a.rows, a.cols, b.rows, b.cols, c.rows, c.cols
        )));
    }
    let b_inv = invert(b)?;
    let coupling = b_inv.mul(c)?.neg();
    let mut right = QMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            right.set(i, j, b_inv.get(i, j).clone());
        }
        for j in 0..n - m {
            right.set(i, m + j, coupling.get(i, j).clone());
        }
    }
    for j in m..n {
        right.set(j, j, Rational::one());
    }
    a.mul(&right)
}
