//! Monomial bases of `Ωⁱ_n = S^{n−i} ⊗ Λⁱ` in `r` variables and the structural
//! integer matrices acting on them.
//!
//! A basis element `x^α dx_T` is stored as an exponent vector `alpha` and a
//! strictly increasing list `wedge` of 0-based variable indices. Within a
//! graded piece the order is: `T` in colexicographic increasing order first,
//! then `α` in lexicographic decreasing order. Every matrix here has its
//! columns indexed by the source basis and rows by the target basis in that
//! order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::IntMatrix;
use crate::modp::FpMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisElement {
    pub alpha: Vec<u32>,
    pub wedge: Vec<usize>,
}

impl BasisElement {
    pub fn degree(&self) -> usize {
        self.alpha.iter().map(|&a| a as usize).sum::<usize>() + self.wedge.len()
    }

    /// `α + 1_T`, preserved by `d`, `κ` and (after multiplying by `p`) `F`.
    pub fn multidegree(&self) -> Vec<u32> {
        let mut w = self.alpha.clone();
        for &t in &self.wedge {
            w[t] += 1;
        }
        w
    }
}

fn variable_name(j: usize, r: usize) -> String {
    if r <= 3 {
        ["x", "y", "z"][j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.alpha.len();
        let mut parts = Vec::new();
        for (j, &a) in self.alpha.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(variable_name(j, r)),
                _ => parts.push(format!("{}^{}", variable_name(j, r), a)),
            }
        }
        let poly = parts.join("");
        let forms: Vec<String> = self
            .wedge
            .iter()
            .map(|&t| format!("d{}", variable_name(t, r)))
            .collect();
        match (poly.is_empty(), forms.is_empty()) {
            (true, true) => write!(f, "1"),
            (false, true) => write!(f, "{poly}"),
            (true, false) => write!(f, "{}", forms.join("^")),
            (false, false) => write!(f, "{poly} {}", forms.join("^")),
        }
    }
}

/// The ordered monomial basis of `Ωⁱ_n` in `r` variables.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub r: usize,
    pub n: usize,
    pub i: usize,
    pub elements: Vec<BasisElement>,
    index: HashMap<BasisElement, usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, e: &BasisElement) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Strictly increasing `k`-subsets of `0..r`, colexicographically ordered.
fn subsets_colex(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..r {
            cur.push(j);
            rec(j + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= r {
        rec(0, r, k, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Exponent vectors of length `r` summing to `m`, lexicographically decreasing.
fn compositions_lex_desc(r: usize, m: usize) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let r = cur.len();
        if pos == r - 1 {
            cur[pos] = left as u32;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[pos] = a as u32;
            rec(pos + 1, left - a, cur, out);
        }
    }
    if r == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, m, &mut vec![0; r], &mut out);
    out
}

pub fn basis(r: usize, n: usize, i: usize) -> GradedPiece {
    let mut elements = Vec::new();
    if i <= n && i <= r {
        let alphas = compositions_lex_desc(r, n - i);
        for wedge in subsets_colex(r, i) {
            for alpha in &alphas {
                elements.push(BasisElement {
                    alpha: alpha.clone(),
                    wedge: wedge.clone(),
                });
            }
        }
    }
    let index = elements
        .iter()
        .enumerate()
        .map(|(k, e)| (e.clone(), k))
        .collect();
    GradedPiece {
        r,
        n,
        i,
        elements,
        index,
    }
}

/// Sign and position for inserting `j` into the sorted list `wedge` (at the front
/// of the wedge product, then sorting): `(−1)^{#{t ∈ T : t < j}}`.
fn insert_front(wedge: &[usize], j: usize) -> Option<(Vec<usize>, bool)> {
    if wedge.contains(&j) {
        return None;
    }
    let smaller = wedge.iter().filter(|&&t| t < j).count();
    let mut w = wedge.to_vec();
    w.insert(smaller, j);
    Some((w, smaller % 2 == 1))
}

fn signed(c: BigInt, negative: bool) -> BigInt {
    if negative {
        -c
    } else {
        c
    }
}

/// Builds the matrix of a map given on basis elements as lists of
/// `(target element, coefficient)`.
fn matrix_from_images(
    source: &GradedPiece,
    target: &GradedPiece,
    mut image: impl FnMut(&BasisElement) -> Vec<(BasisElement, BigInt)>,
) -> IntMatrix {
    let mut m = IntMatrix::zeros(target.dim(), source.dim());
    for (col, e) in source.elements.iter().enumerate() {
        for (t, c) in image(e) {
            let row = target
                .index_of(&t)
                .unwrap_or_else(|| panic!("{t} is not in the target basis"));
            m[(row, col)] += c;
        }
    }
    m
}

/// The summand of `Ω_n` spanned by basis elements of one multidegree `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultidegreeBlock {
    pub weight: Vec<u32>,
    /// `indices[i]`: positions in `basis(r, n, i)` of the elements of weight `w`.
    pub indices: Vec<Vec<usize>>,
    /// The corresponding basis elements, in the same order.
    pub elements: Vec<Vec<BasisElement>>,
}

impl MultidegreeBlock {
    /// `dⁱ` restricted to the block, in local coordinates.
    pub fn d(&self, i: usize) -> IntMatrix {
        let src = &self.elements[i];
        let empty = Vec::new();
        let tgt = self.elements.get(i + 1).unwrap_or(&empty);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for (col, e) in src.iter().enumerate() {
            for (t, c) in d_images(e) {
                let row = tgt.iter().position(|x| *x == t).expect("d preserves the multidegree");
                m[(row, col)] += c;
            }
        }
        m
    }

    /// `dⁱ⁻¹` into degree `i` (from zero when `i = 0`).
    pub fn d_into(&self, i: usize) -> IntMatrix {
        if i == 0 {
            IntMatrix::zeros(self.elements[0].len(), 0)
        } else {
            self.d(i - 1)
        }
    }
}

/// `Ω_n` as a direct sum of subcomplexes indexed by multidegree, sorted by
/// weight. Each block has dimension `C(s, i)` in degree `i`, where `s` is the
/// number of variables occurring in the weight.
pub fn multidegree_blocks(r: usize, n: usize) -> Vec<MultidegreeBlock> {
    let top = top_degree(r, n);
    let mut blocks: BTreeMap<Vec<u32>, MultidegreeBlock> = BTreeMap::new();
    for i in 0..=top {
        for (k, e) in basis(r, n, i).elements.into_iter().enumerate() {
            let w = e.multidegree();
            let b = blocks.entry(w.clone()).or_insert_with(|| MultidegreeBlock {
                weight: w,
                indices: vec![Vec::new(); top + 1],
                elements: vec![Vec::new(); top + 1],
            });
            b.indices[i].push(k);
            b.elements[i].push(e);
        }
    }
    blocks.into_values().collect()
}

/// `d` of one basis element, as `(element, coefficient)` terms.
fn d_images(e: &BasisElement) -> Vec<(BasisElement, BigInt)> {
    let mut out = Vec::new();
    for j in 0..e.alpha.len() {
        if e.alpha[j] == 0 {
            continue;
        }
        if let Some((wedge, neg)) = insert_front(&e.wedge, j) {
            let mut alpha = e.alpha.clone();
            alpha[j] -= 1;
            out.push((BasisElement { alpha, wedge }, signed(BigInt::from(e.alpha[j]), neg)));
        }
    }
    out
}

/// de Rham differential `d: Ωⁱ_n → Ωⁱ⁺¹_n`.
pub fn d_matrix(r: usize, n: usize, i: usize) -> IntMatrix {
    let src = basis(r, n, i);
    let tgt = basis(r, n, i + 1);
    matrix_from_images(&src, &tgt, d_images)
}

/// Koszul differential `κ: Ωⁱ_n → Ωⁱ⁻¹_n`, `κ(dx_j) = x_j`, zero on polynomials.
pub fn koszul_matrix(r: usize, n: usize, i: usize) -> IntMatrix {
    let src = basis(r, n, i);
    if i == 0 {
        return IntMatrix::zeros(0, src.dim());
    }
    let tgt = basis(r, n, i - 1);
    matrix_from_images(&src, &tgt, |e| {
        e.wedge
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let mut alpha = e.alpha.clone();
                alpha[t] += 1;
                let mut wedge = e.wedge.clone();
                wedge.remove(k);
                (BasisElement { alpha, wedge }, signed(BigInt::one(), k % 2 == 1))
            })
            .collect()
    })
}

/// `x^α dx_T ↦ x^{qα + (q−1)·1_T} dx_T`, the monomial part shared by the
/// Frobenius and the Cartier representative (with `q = p` or a power of it).
fn power_monomial(e: &BasisElement, q: u32) -> BasisElement {
    let mut alpha: Vec<u32> = e.alpha.iter().map(|&a| a * q).collect();
    for &t in &e.wedge {
        alpha[t] += q - 1;
    }
    BasisElement {
        alpha,
        wedge: e.wedge.clone(),
    }
}

/// Frobenius `F: Ωⁱ_n → Ωⁱ_{pn}`, `x ↦ x^p`, `dx ↦ p·x^{p−1}dx`.
pub fn frobenius_matrix(r: usize, n: usize, i: usize, p: u64) -> IntMatrix {
    let src = basis(r, n, i);
    let tgt = basis(r, p as usize * n, i);
    let coeff = BigInt::from(p).pow(i as u32);
    matrix_from_images(&src, &tgt, |e| vec![(power_monomial(e, p as u32), coeff.clone())])
}

/// The integral map `x^α dx_T ↦ x^{pα + (p−1)1_T} dx_T`, i.e. `F / p^i`.
/// It satisfies `d ∘ C = p·C ∘ d`, so it maps cocycles to cocycles and
/// coboundaries to coboundaries.
pub fn cartier_lift_matrix(r: usize, n: usize, i: usize, p: u64) -> IntMatrix {
    let src = basis(r, n, i);
    let tgt = basis(r, p as usize * n, i);
    matrix_from_images(&src, &tgt, |e| vec![(power_monomial(e, p as u32), BigInt::one())])
}

/// Cartier representative `Ωⁱ_n ⊗ 𝔽_p → Ωⁱ_{pn} ⊗ 𝔽_p`,
/// `x ↦ x^p`, `dx ↦ x^{p−1}dx`; equals `F / p^i` reduced mod p.
pub fn cartier_rep_matrix(r: usize, n: usize, i: usize, p: u64) -> FpMatrix {
    FpMatrix::from_int(&cartier_lift_matrix(r, n, i, p), p)
}

/// Entrywise reduction mod p.
pub fn reduce_mod_p(m: &IntMatrix, p: u64) -> FpMatrix {
    FpMatrix::from_int(m, p)
}

type Form = HashMap<BasisElement, BigInt>;

fn multiply_linear(form: &Form, coeffs: &[BigInt]) -> Form {
    let mut out = Form::new();
    for (e, c) in form {
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut alpha = e.alpha.clone();
            alpha[k] += 1;
            *out.entry(BasisElement {
                alpha,
                wedge: e.wedge.clone(),
            })
            .or_default() += c * a;
        }
    }
    out
}

/// Right wedge product with the 1-form `Σ coeffs[k] dy_k`.
fn wedge_linear(form: &Form, coeffs: &[BigInt]) -> Form {
    let mut out = Form::new();
    for (e, c) in form {
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() || e.wedge.contains(&k) {
                continue;
            }
            let larger = e.wedge.iter().filter(|&&u| u > k).count();
            let mut wedge = e.wedge.clone();
            wedge.insert(wedge.len() - larger, k);
            *out.entry(BasisElement {
                alpha: e.alpha.clone(),
                wedge,
            })
            .or_default() += signed(c * a, larger % 2 == 1);
        }
    }
    out
}

/// Functoriality in the lattice: the map `Ωⁱ_n(ℤ^r) → Ωⁱ_n(ℤ^s)` induced by the
/// linear substitution `x_j ↦ Σ_k f[k][j] y_k` (so `f` is `s × r`).
pub fn substitution_map(f: &IntMatrix, n: usize, i: usize) -> IntMatrix {
    let (s, r) = (f.rows(), f.cols());
    let src = basis(r, n, i);
    let tgt = basis(s, n, i);
    let columns: Vec<Vec<BigInt>> = (0..r).map(|j| f.column(j)).collect();
    matrix_from_images(&src, &tgt, |e| {
        let mut form = Form::new();
        form.insert(
            BasisElement {
                alpha: vec![0; s],
                wedge: Vec::new(),
            },
            BigInt::one(),
        );
        for (j, &a) in e.alpha.iter().enumerate() {
            for _ in 0..a {
                form = multiply_linear(&form, &columns[j]);
            }
        }
        for &t in &e.wedge {
            form = wedge_linear(&form, &columns[t]);
        }
        form.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    })
}

/// The de Rham complex `Ω_n` in `r` variables as a list of integer matrices.
#[derive(Clone, Debug)]
pub struct ComplexZ {
    pub r: usize,
    pub n: usize,
    /// `pieces[i]` is the basis of `Ωⁱ_n` for `i = 0..=top`.
    pub pieces: Vec<GradedPiece>,
}

impl ComplexZ {
    pub fn new(r: usize, n: usize) -> Self {
        let top = top_degree(r, n);
        ComplexZ {
            r,
            n,
            pieces: (0..=top).map(|i| basis(r, n, i)).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn cochain_dim(&self, i: usize) -> usize {
        self.pieces.get(i).map_or(0, GradedPiece::dim)
    }

    /// `dⁱ` as a dense matrix, or an empty map outside the range.
    pub fn d(&self, i: usize) -> IntMatrix {
        match self.pieces.get(i) {
            Some(src) => {
                let empty = basis(self.r, self.n, i + 1);
                let tgt = self.pieces.get(i + 1).unwrap_or(&empty);
                matrix_from_images(src, tgt, d_images)
            }
            None => IntMatrix::zeros(self.cochain_dim(i + 1), 0),
        }
    }

    /// `dⁱ⁻¹` into degree `i` (the zero map from 0 when `i = 0`).
    pub fn d_into(&self, i: usize) -> IntMatrix {
        if i == 0 {
            IntMatrix::zeros(self.cochain_dim(0), 0)
        } else {
            self.d(i - 1)
        }
    }

    /// `dⁱ x` without forming the matrix.
    pub fn apply_d(&self, i: usize, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cochain_dim(i), "cochain has wrong length");
        let mut out = vec![BigInt::zero(); self.cochain_dim(i + 1)];
        let Some(src) = self.pieces.get(i) else {
            return out;
        };
        for (k, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, a) in d_images(&src.elements[k]) {
                let row = self.pieces[i + 1].index_of(&t).expect("d stays in the complex");
                out[row] += a * c;
            }
        }
        out
    }
}

/// Highest degree with a nonzero cochain group: `min(n, r)`.
pub fn top_degree(r: usize, n: usize) -> usize {
    n.min(r)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}
