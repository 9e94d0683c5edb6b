//! Hermite and Smith normal forms over the integers.
//!
//! Both algorithms pick the nonzero entry of least absolute value as pivot and
//! run Euclid by repeated floor division, so every transform is a product of
//! elementary unimodular operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};
use super::LatticeError;

/// Column-style Hermite normal form `M·U = H`.
///
/// `H` is in column echelon form: pivot `j` sits at `(pivot_rows[j], j)`, is
/// positive, every entry of column `j` above its pivot row is zero, and the
/// entries to the left of a pivot are reduced into `[0, pivot)`.
/// Columns `rank..` of `H` are zero, so the matching columns of `U` are a
/// basis of the integer kernel of `M`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl Hermite {
    pub fn new(m: &IntMatrix) -> Self {
        let mut h = m.clone();
        let mut u = IntMatrix::identity(m.cols());
        let mut pivot_rows = Vec::new();
        let mut pc = 0;
        for row in 0..h.rows() {
            if pc == h.cols() {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for c in pc..h.cols() {
                    let v = &h[(row, c)];
                    if !v.is_zero()
                        && best.is_none_or(|b| v.magnitude() < h[(row, b)].magnitude())
                    {
                        best = Some(c);
                    }
                }
                let Some(b) = best else { break };
                h.swap_cols(pc, b);
                u.swap_cols(pc, b);
                let mut clean = true;
                for c in pc + 1..h.cols() {
                    if h[(row, c)].is_zero() {
                        continue;
                    }
                    let q = -h[(row, c)].div_floor(&h[(row, pc)]);
                    h.add_col_multiple(c, pc, &q);
                    u.add_col_multiple(c, pc, &q);
                    if !h[(row, c)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if h[(row, pc)].is_zero() {
                continue;
            }
            if h[(row, pc)].is_negative() {
                h.negate_col(pc);
                u.negate_col(pc);
            }
            for c in 0..pc {
                let q = -h[(row, c)].div_floor(&h[(row, pc)]);
                h.add_col_multiple(c, pc, &q);
                u.add_col_multiple(c, pc, &q);
            }
            pivot_rows.push(row);
            pc += 1;
        }
        Hermite { h, u, pivot_rows }
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Basis of `{x : M·x = 0}` as the columns of the returned matrix.
    pub fn kernel(&self) -> IntMatrix {
        self.u.select_columns(self.rank()..self.u.cols())
    }

    /// Solves `M·x = b` over the integers.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<IntVector>, LatticeError> {
        if b.len() != self.h.rows() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.h.rows(),
                found: b.len(),
            });
        }
        let mut residual = b.to_vec();
        let mut y = vec![BigInt::zero(); self.h.cols()];
        for (j, &row) in self.pivot_rows.iter().enumerate() {
            if residual[row].is_zero() {
                continue;
            }
            let (q, r) = residual[row].div_rem(&self.h[(row, j)]);
            if !r.is_zero() {
                return Ok(None);
            }
            for (i, res) in residual.iter_mut().enumerate().skip(row) {
                let hij = &self.h[(i, j)];
                if !hij.is_zero() {
                    *res -= hij * &q;
                }
            }
            y[j] = q;
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(self.u.mul_vec(&y)))
    }
}

/// Returns `(H, U)` with `M·U = H` in column Hermite normal form.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let Hermite { h, u, .. } = Hermite::new(m);
    (h, u)
}

/// Integer kernel basis of `m` (columns).
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    Hermite::new(m).kernel()
}

/// Finds `x` with `M·x = b`, or `None` if `b` is outside the column lattice of `M`.
pub fn lattice_solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>, LatticeError> {
    Hermite::new(m).solve(b)
}

/// Smith normal form `U·M·V = S` with the inverse of `U` kept alongside.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn new(m: &IntMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a = m.clone();
        let mut u = IntMatrix::identity(rows);
        let mut u_inv = IntMatrix::identity(rows);
        let mut v = IntMatrix::identity(cols);

        // Row operations are mirrored on U, and inversely (as column
        // operations) on U⁻¹.
        let swap_rows = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, x, y| {
            a.swap_rows(x, y);
            u.swap_rows(x, y);
            ui.swap_cols(x, y);
        };
        let add_row = |a: &mut IntMatrix,
                       u: &mut IntMatrix,
                       ui: &mut IntMatrix,
                       dst: usize,
                       src: usize,
                       q: &BigInt| {
            a.add_row_multiple(dst, src, q);
            u.add_row_multiple(dst, src, q);
            ui.add_col_multiple(src, dst, &-q);
        };

        for t in 0..rows.min(cols) {
            let Some((pi, pj)) = min_entry(&a, t) else { break };
            swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = -a[(i, t)].div_floor(&a[(t, t)]);
                    add_row(&mut a, &mut u, &mut u_inv, i, t, &q);
                    clean &= a[(i, t)].is_zero();
                }
                for j in t + 1..cols {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    clean &= a[(t, j)].is_zero();
                }
                if !clean {
                    // bring the smallest leftover of row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..rows {
                        if !a[(i, t)].is_zero() && a[(i, t)].magnitude() < a[best].magnitude() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..cols {
                        if !a[(t, j)].is_zero() && a[(t, j)].magnitude() < a[best].magnitude() {
                            best = (t, j);
                        }
                    }
                    if best.0 != t {
                        swap_rows(&mut a, &mut u, &mut u_inv, t, best.0);
                    }
                    if best.1 != t {
                        a.swap_cols(t, best.1);
                        v.swap_cols(t, best.1);
                    }
                    continue;
                }
                let pivot = a[(t, t)].clone();
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => add_row(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                    None => break,
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
                u_inv.negate_col(t);
            }
        }
        Smith { s: a, u, u_inv, v }
    }

    /// The diagonal `d₁ | d₂ | …` of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn min_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if !x.is_zero() && best.is_none_or(|b| x.magnitude() < a[b].magnitude()) {
                best = Some((i, j));
                if x.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Returns `(S, U, V)` with `U·M·V = S` diagonal, nonnegative, and satisfying
/// the divisibility chain.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let Smith { s, u, v, .. } = Smith::new(m);
    (s, u, v)
}
