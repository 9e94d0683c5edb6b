use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::sequence::{BocksteinSequence, SpectralPage};
use super::BocksteinError;
use crate::cohomology::{check_prime, integral_lift, CohomologyDegree};
use crate::derham::{multidegree_blocks, ComplexZ, MultidegreeBlock};
use crate::lattice::{FgAbGroup, Hermite, IntMatrix, Subquotient};
use crate::modp::{reduce_vec, FpMatrix};

/// `E_k` computed directly on cochains:
/// `E_kⁱ = Z_kⁱ / (p·Z_{k−1}ⁱ + p^{1−k}·d(Z_{k−1}ⁱ⁻¹))` with
/// `Z_kⁱ = {x : dx ∈ p^k·Ωⁱ⁺¹}` and `d_k[x] = [dx / p^k]`, one multidegree
/// block at a time.
#[derive(Clone, Debug)]
pub struct ClosedFormPage {
    pub k: usize,
    pub p: u64,
    pub groups: Vec<CohomologyDegree>,
    pub differentials: Vec<FpMatrix>,
}

impl ClosedFormPage {
    /// Integral cochain representatives (in `Z_kⁱ`) of the generators.
    pub fn lift(&self, i: usize) -> &IntMatrix {
        self.groups[i].lift()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.group().ngens()).collect()
    }

    pub fn to_spectral_page(&self) -> SpectralPage {
        SpectralPage {
            k: self.k,
            p: self.p,
            dims: self.dims(),
            differentials: self.differentials.clone(),
            lifts: (0..self.groups.len())
                .map(|i| FpMatrix::from_int(self.lift(i), self.p))
                .collect(),
        }
    }
}

/// Basis of `Z_kⁱ = {x : dx ≡ 0 mod p^k}` from the kernel of `[d | −p^k·I]`.
fn deep_cocycles(d: &IntMatrix, pk: &BigInt) -> IntMatrix {
    let c = d.cols();
    if pk == &BigInt::from(1) {
        return IntMatrix::identity(c);
    }
    let scaled = IntMatrix::scalar(d.rows(), &-pk.clone());
    let stacked = IntMatrix::hstack(d.rows(), &[d, &scaled]);
    Hermite::new(&stacked).kernel().select_rows(0..c)
}

/// The page of one block, in local coordinates.
fn block_page(block: &MultidegreeBlock, top: usize, pb: &BigInt, k: usize) -> Vec<Subquotient> {
    let pk = pb.pow(k as u32);
    let pk1 = pb.pow(k as u32 - 1);
    let z_k: Vec<IntMatrix> = (0..=top).map(|i| deep_cocycles(&block.d(i), &pk)).collect();
    let z_k1: Vec<IntMatrix> = (0..=top).map(|i| deep_cocycles(&block.d(i), &pk1)).collect();
    (0..=top)
        .map(|i| {
            let c = block.indices[i].len();
            let ambient = Arc::new(FgAbGroup::free(c));
            let mut denominator = z_k1[i].scaled(pb);
            if i > 0 {
                let boundaries = (&block.d(i - 1) * &z_k1[i - 1])
                    .div_exact(&pk1)
                    .expect("d(Z_{k-1}) is divisible by p^{k-1}");
                denominator = IntMatrix::hstack(c, &[&denominator, &boundaries]);
            }
            Subquotient::new(ambient, z_k[i].clone(), denominator)
        })
        .collect()
}

pub fn closed_form_page(r: usize, n: usize, p: u64, k: usize) -> Result<ClosedFormPage, BocksteinError> {
    check_prime(p)?;
    if k == 0 {
        return Err(BocksteinError::ZeroPage);
    }
    let complex = ComplexZ::new(r, n);
    let top = complex.top();
    let pb = BigInt::from(p);
    let pk = pb.pow(k as u32);

    let blocks = multidegree_blocks(r, n);
    let pages: Vec<Vec<Subquotient>> = blocks.iter().map(|b| block_page(b, top, &pb, k)).collect();
    let groups: Vec<CohomologyDegree> = (0..=top)
        .map(|i| {
            let parts = blocks
                .iter()
                .zip(&pages)
                .filter(|(b, _)| !b.indices[i].is_empty())
                .map(|(b, page)| (b.indices[i].clone(), page[i].clone()))
                .collect();
            CohomologyDegree::assemble(complex.cochain_dim(i), parts)
        })
        .collect();

    let mut differentials = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let src = groups[i].group().ngens();
        if i == top {
            differentials.push(FpMatrix::zeros(p, 0, src));
            continue;
        }
        let mut cols = Vec::with_capacity(src);
        for (g, x) in groups[i].lift().columns().enumerate() {
            let w: Vec<BigInt> = complex
                .apply_d(i, &x)
                .iter()
                .map(|v| {
                    let (q, rem) = v.div_rem(&pk);
                    debug_assert!(rem.is_zero(), "lifts lie in Z_k");
                    q
                })
                .collect();
            let c = groups[i + 1].express(&w).ok_or(BocksteinError::Expression {
                page: k,
                degree: i,
                generator: g,
            })?;
            cols.push(reduce_vec(&c, p));
        }
        differentials.push(FpMatrix::from_columns(p, groups[i + 1].group().ngens(), &cols));
    }

    Ok(ClosedFormPage {
        k,
        p,
        groups,
        differentials,
    })
}

/// Outcome of comparing a derived-couple page with the closed-form page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageComparison {
    pub k: usize,
    pub derived_dims: Vec<usize>,
    pub closed_form_dims: Vec<usize>,
    pub agree: bool,
    /// Degree and description of the first disagreement.
    pub failure: Option<(usize, String)>,
}

/// Maps each closed-form generator (an integral cochain in `Z_k`) to its class
/// in the derived page, and checks that this is an isomorphism of complexes.
pub fn compare_pages(seq: &BocksteinSequence, closed: &ClosedFormPage) -> PageComparison {
    let k = closed.k;
    let p = seq.p;
    let couple = seq.couple(k);
    let derived_dims: Vec<usize> = couple.e_groups.iter().map(|g| g.ngens()).collect();
    let closed_form_dims = closed.dims();
    let mut out = PageComparison {
        k,
        derived_dims: derived_dims.clone(),
        closed_form_dims: closed_form_dims.clone(),
        agree: false,
        failure: None,
    };
    if derived_dims != closed_form_dims {
        out.failure = Some((0, "dimension mismatch".to_string()));
        return out;
    }
    let mut phis = Vec::with_capacity(derived_dims.len());
    for i in 0..derived_dims.len() {
        let mut cols = Vec::new();
        for (g, x) in closed.lift(i).columns().enumerate() {
            let e1 = match seq.e1_coords_of_integral(i, &x) {
                Some(c) => c,
                None => {
                    out.failure = Some((i, format!("generator {g} is not a mod-p cocycle")));
                    return out;
                }
            };
            match seq.express_in_page(k, i, &integral_lift(&e1)) {
                Some(c) => cols.push(reduce_vec(&c, p)),
                None => {
                    out.failure = Some((i, format!("generator {g} does not survive to page {k}")));
                    return out;
                }
            }
        }
        let phi = FpMatrix::from_columns(p, derived_dims[i], &cols);
        if !phi.is_invertible() {
            out.failure = Some((i, "comparison map is not invertible".to_string()));
            return out;
        }
        phis.push(phi);
    }
    for i in 0..derived_dims.len().saturating_sub(1) {
        let derived_d = FpMatrix::from_int(couple.differential(i).matrix(), p);
        let lhs = &phis[i + 1] * &closed.differentials[i];
        let rhs = &derived_d * &phis[i];
        if lhs != rhs {
            out.failure = Some((i, "differentials are not conjugate".to_string()));
            return out;
        }
    }
    out.agree = true;
    out
}
