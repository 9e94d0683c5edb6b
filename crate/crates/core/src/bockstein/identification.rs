use serde::{Deserialize, Serialize};

use super::sequence::BocksteinSequence;
use crate::cohomology::integral_lift;
use crate::derham::{basis, cartier_rep_matrix, d_matrix};
use crate::modp::{reduce_vec, FpMatrix};

/// The `k`-fold composite of Cartier representatives
/// `Ωⁱ_m ⊗ 𝔽_p → Ωⁱ_{p^k m} ⊗ 𝔽_p`.
pub fn cartier_composite(r: usize, m: usize, i: usize, p: u64, k: usize) -> FpMatrix {
    let mut acc = FpMatrix::identity(p, basis(r, m, i).dim());
    let mut deg = m;
    for _ in 0..k {
        acc = &cartier_rep_matrix(r, deg, i, p) * &acc;
        deg *= p as usize;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationOutcome {
    pub k: usize,
    pub nu: usize,
    /// `dim E_kⁱ` per degree.
    pub page_dims: Vec<usize>,
    /// `dim Ωⁱ_{n/p^k} ⊗ 𝔽_p` per degree (zeros past `ν_p(n)`).
    pub expected_dims: Vec<usize>,
    pub passed: bool,
    /// Degree, description and offending mod-p vector of the first failure.
    pub witness: Option<(usize, String, Vec<u64>)>,
}

/// Checks `E_k ≅ Ω_{n/p^k} ⊗ 𝔽_p` as complexes through the explicit map
/// `ω ↦ class of (C⁻¹)^k ω` when `1 ≤ k ≤ ν_p(n)`, and `E_k = 0` beyond.
pub fn verify_page_identification(seq: &BocksteinSequence, k: usize) -> IdentificationOutcome {
    let (r, n, p) = (seq.r, seq.n, seq.p);
    let nu = seq.nu();
    let couple = seq.couple(k);
    let page_dims: Vec<usize> = couple.e_groups.iter().map(|g| g.ngens()).collect();
    let mut out = IdentificationOutcome {
        k,
        nu,
        page_dims: page_dims.clone(),
        expected_dims: vec![0; page_dims.len()],
        passed: false,
        witness: None,
    };
    if k > nu {
        if let Some(i) = page_dims.iter().position(|&d| d != 0) {
            out.witness = Some((i, format!("E_{k} should vanish past nu = {nu}"), Vec::new()));
        } else {
            out.passed = true;
        }
        return out;
    }

    let m = n / (p as usize).pow(k as u32);
    out.expected_dims = (0..page_dims.len()).map(|i| basis(r, m, i).dim()).collect();
    let mut psis = Vec::with_capacity(page_dims.len());
    for (i, &dim) in page_dims.iter().enumerate() {
        let composite = cartier_composite(r, m, i, p, k);
        let mut cols = Vec::with_capacity(composite.cols());
        for j in 0..composite.cols() {
            let v = composite.column(j);
            let Some(e1) = seq.e1_coords(i, &v) else {
                out.witness = Some((i, format!("image of basis element {j} is not a cocycle"), v));
                return out;
            };
            let Some(c) = seq.express_in_page(k, i, &integral_lift(&e1)) else {
                out.witness = Some((i, format!("image of basis element {j} does not survive to E_{k}"), v));
                return out;
            };
            cols.push(reduce_vec(&c, p));
        }
        let psi = FpMatrix::from_columns(p, dim, &cols);
        if !psi.is_invertible() {
            let kernel = psi.kernel();
            let w = if kernel.cols() > 0 { kernel.column(0) } else { Vec::new() };
            out.witness = Some((i, "Cartier composite is not bijective".to_string(), w));
            return out;
        }
        psis.push(psi);
    }
    for i in 0..page_dims.len().saturating_sub(1) {
        let d = FpMatrix::from_int(&d_matrix(r, m, i), p);
        let dk = FpMatrix::from_int(couple.differential(i).matrix(), p);
        let lhs = &psis[i + 1] * &d;
        let rhs = &dk * &psis[i];
        if lhs != rhs {
            let j = (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j)).unwrap_or(0);
            let mut w = vec![0; lhs.cols()];
            w[j] = 1;
            out.witness = Some((i, "d_k is not conjugate to d".to_string(), w));
            return out;
        }
    }
    out.passed = true;
    out
}
