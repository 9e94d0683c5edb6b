//! Dense linear algebra over the prime field 𝔽_p.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::lattice::{IntMatrix, IntVector};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Residue of an integer in `[0, p)`.
pub fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

fn inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1 % p;
        }
        m
    }

    /// Entrywise reduction of an integer matrix.
    pub fn from_int(m: &IntMatrix, p: u64) -> Self {
        let mut out = Self::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = residue(&m[(i, j)], p);
            }
        }
        out
    }

    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v % p;
            }
        }
        m
    }

    /// Integer matrix with entries in `[0, p)`.
    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| BigInt::from(self[(i, j)]))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.p, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn hstack(&self, other: &FpMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut m = Self::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0u64; self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = (*o + self.data[i * self.cols + j] * x) % self.p;
            }
        }
        out
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut a = self.clone();
        let pivots = a.reduce_in_place(None);
        (a, pivots)
    }

    /// Row-reduces `self`, applying the same row operations to `track`.
    fn reduce_in_place(&mut self, mut track: Option<&mut FpMatrix>) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&i| self[(i, col)] != 0) else {
                continue;
            };
            self.swap_rows(pr, row);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(pr, row);
            }
            let inv = inverse(self[(row, col)], p);
            self.scale_row(row, inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(row, inv);
            }
            for i in 0..self.rows {
                if i != row && self[(i, col)] != 0 {
                    let f = p - self[(i, col)];
                    self.add_row_multiple(i, row, f);
                    if let Some(t) = track.as_deref_mut() {
                        t.add_row_multiple(i, row, f);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = *x * c % self.p;
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let x = &mut self.data[dst * self.cols + j];
                *x = (*x + s * c) % self.p;
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> FpMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(self.p, self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k[(f, idx)] = 1;
            for (prow, &pc) in pivots.iter().enumerate() {
                k[(pc, idx)] = (self.p - r[(prow, f)]) % self.p;
            }
        }
        k
    }

    /// A basis of the column space chosen among the columns of `self`.
    pub fn column_basis(&self) -> FpMatrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Whether the square matrix is invertible.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Solver for `A·x = b` over 𝔽_p, precomputed once per matrix.
#[derive(Clone, Debug)]
pub struct FpSolver {
    transform: FpMatrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl FpSolver {
    pub fn new(a: &FpMatrix) -> Self {
        let mut reduced = a.clone();
        let mut transform = FpMatrix::identity(a.p, a.rows);
        let pivots = reduced.reduce_in_place(Some(&mut transform));
        FpSolver {
            transform,
            pivots,
            cols: a.cols,
        }
    }

    /// Some solution (free variables set to zero), or `None` if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let eb = self.transform.mul_vec(b);
        if eb[self.pivots.len()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &c) in self.pivots.iter().enumerate() {
            x[c] = eb[row];
        }
        Some(x)
    }
}

impl Index<(usize, usize)> for FpMatrix {
    type Output = u64;

    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &FpMatrix {
    type Output = FpMatrix;

    fn mul(self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        assert_eq!(self.p, rhs.p);
        let mut out = FpMatrix::zeros(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let x = &mut out.data[i * rhs.cols + j];
                    *x = (*x + a * rhs.data[k * rhs.cols + j]) % self.p;
                }
            }
        }
        out
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}) {}x{} [", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Reduces an integer vector to residues.
pub fn reduce_vec(v: &[BigInt], p: u64) -> Vec<u64> {
    v.iter().map(|x| residue(x, p)).collect()
}

/// Residues as an integer vector with entries in `[0, p)`.
pub fn lift_vec(v: &[u64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..20).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn reduction() {
        let m = IntMatrix::from_rows(&[[2, 3, -1]]);
        let r = FpMatrix::from_int(&m, 2);
        assert_eq!(r.column(0), vec![0]);
        assert_eq!(r.column(1), vec![1]);
        assert_eq!(r.column(2), vec![1]);
        assert_eq!(FpMatrix::from_int(&IntMatrix::identity(2), 3), FpMatrix::identity(3, 2));
    }

    #[test]
    fn kernel_and_rank() {
        let m = FpMatrix::from_int(&IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]), 2);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solver() {
        let m = FpMatrix::from_int(&IntMatrix::from_rows(&[[1, 2], [0, 1], [1, 0]]), 3);
        let s = FpSolver::new(&m);
        let x = s.solve(&[2, 1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![2, 1, 0]);
        assert!(s.solve(&[1, 0, 0]).is_none());
    }
}
