use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::BocksteinError;
use crate::cohomology::{integral_lift, CohomologyResult, ModpCohomologyResult};
use crate::lattice::{homology_of_pair, FgAbGroup, Hermite, Homomorphism, IntMatrix, Subquotient};
use crate::modp::reduce_vec;

/// Where an exactness check failed inside the triangle `D →i D →j E →k D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CoupleNode {
    /// `ker j = im i` at `Dⁱ`.
    AtD,
    /// `ker k = im j` at `Eⁱ`.
    AtE,
    /// `ker i = im k` at `Dⁱ⁺¹`.
    AtNextD,
}

/// A degree-wise exact couple of finitely generated abelian groups.
///
/// `i: Dⁱ → Dⁱ`, `j: Dⁱ → Eⁱ`, `k: Eⁱ → Dⁱ⁺¹`, for `i = 0..=top`. The group
/// `D^{top+1}` is zero. For a derived couple, `d_sub[i]` presents `Dⁱ` as a
/// subgroup of the previous `Dⁱ` and `e_sub[i]` presents `Eⁱ` as a
/// subquotient of the previous `Eⁱ`.
#[derive(Clone, Debug)]
pub struct ExactCouple {
    pub p: u64,
    pub page: usize,
    pub d_groups: Vec<Arc<FgAbGroup>>,
    pub e_groups: Vec<Arc<FgAbGroup>>,
    pub i_maps: Vec<Homomorphism>,
    pub j_maps: Vec<Homomorphism>,
    pub k_maps: Vec<Homomorphism>,
    pub d_sub: Vec<Subquotient>,
    pub e_sub: Vec<Subquotient>,
}

impl ExactCouple {
    pub fn top(&self) -> usize {
        self.d_groups.len() - 1
    }

    /// The page differential `j ∘ k: Eⁱ → Eⁱ⁺¹`.
    pub fn differential(&self, i: usize) -> Homomorphism {
        if i < self.top() {
            self.j_maps[i + 1]
                .compose(&self.k_maps[i])
                .expect("k lands in the source of j")
        } else {
            Homomorphism::zero(self.e_groups[i].clone(), Arc::new(FgAbGroup::zero()))
        }
    }

    /// Exactness at every node of every degree, as triviality of `ker/im`.
    pub fn check_exactness(&self) -> Result<(), BocksteinError> {
        let fail = |degree, node| BocksteinError::NotExact {
            page: self.page,
            degree,
            node,
        };
        let trivial = |f: &Homomorphism, g: &Homomorphism| {
            homology_of_pair(f, g).is_ok_and(|h| h.group().is_trivial())
        };
        if !self.i_maps[0].is_injective() {
            return Err(fail(0, CoupleNode::AtNextD));
        }
        for i in 0..=self.top() {
            if !trivial(&self.i_maps[i], &self.j_maps[i]) {
                return Err(fail(i, CoupleNode::AtD));
            }
            if !trivial(&self.j_maps[i], &self.k_maps[i]) {
                return Err(fail(i, CoupleNode::AtE));
            }
            if i < self.top() {
                if !trivial(&self.k_maps[i], &self.i_maps[i + 1]) {
                    return Err(fail(i, CoupleNode::AtNextD));
                }
            } else if !self.k_maps[i].target().is_trivial() {
                return Err(fail(i, CoupleNode::AtNextD));
            }
        }
        Ok(())
    }

    pub fn e_dims(&self) -> Vec<usize> {
        self.e_groups.iter().map(|g| g.ngens()).collect()
    }

    pub fn is_e_zero(&self) -> bool {
        self.e_groups.iter().all(|g| g.is_trivial())
    }
}

/// The couple of `0 → Ω_n →p Ω_n → Ω_n⊗𝔽_p → 0`: `D = H(Ω_n; ℤ)`, `E = H(Ω_n; 𝔽_p)`,
/// `i = ×p`, `j` = reduction, `k = ∂`, with `∂[x̄] = [d x̃ / p]`.
pub fn initial_couple_from(
    integral: &CohomologyResult,
    modp: &ModpCohomologyResult,
) -> Result<ExactCouple, BocksteinError> {
    let p = modp.p;
    let top = integral.top();
    let pb = BigInt::from(p);
    let d_groups: Vec<Arc<FgAbGroup>> = (0..=top).map(|i| integral.group(i)).collect();
    let e_groups: Vec<Arc<FgAbGroup>> = (0..=top)
        .map(|i| Arc::new(FgAbGroup::elementary(p, modp.dim(i))))
        .collect();
    let zero = Arc::new(FgAbGroup::zero());

    let i_maps = d_groups
        .iter()
        .map(|g| Homomorphism::scalar(g.clone(), &pb))
        .collect();

    let mut j_maps = Vec::with_capacity(top + 1);
    let mut k_maps = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let lift = integral.lift(i);
        let deg = &modp.degrees[i];
        let cols: Vec<_> = lift
            .columns()
            .map(|z| {
                let c = deg
                    .coords(&reduce_vec(&z, p))
                    .expect("integral cocycles reduce to mod-p cocycles");
                integral_lift(&c)
            })
            .collect();
        let m = IntMatrix::from_columns(deg.dim(), &cols);
        j_maps.push(Homomorphism::new(d_groups[i].clone(), e_groups[i].clone(), m)?);

        let target = if i < top { d_groups[i + 1].clone() } else { zero.clone() };
        let mut cols = Vec::with_capacity(deg.dim());
        for g in 0..deg.dim() {
            let x = integral_lift(&deg.reps.column(g));
            let dx: Vec<BigInt> = integral.complex.apply_d(i, &x);
            let mut y = Vec::with_capacity(dx.len());
            for v in &dx {
                let (q, r) = num_integer::Integer::div_rem(v, &pb);
                debug_assert!(r.is_zero());
                y.push(q);
            }
            let c = if i < top {
                integral
                    .express(i + 1, &y)
                    .ok_or(BocksteinError::ConnectingMap { degree: i, generator: g })?
            } else {
                Vec::new()
            };
            cols.push(c);
        }
        let m = IntMatrix::from_columns(target.ngens(), &cols);
        k_maps.push(Homomorphism::new(e_groups[i].clone(), target, m)?);
    }

    Ok(ExactCouple {
        p,
        page: 1,
        d_sub: Vec::new(),
        e_sub: Vec::new(),
        d_groups,
        e_groups,
        i_maps,
        j_maps,
        k_maps,
    })
}

/// The derived couple: `D' = im i`, `E' = ker(jk)/im(jk)`, `i' = i|_{D'}`,
/// `j'(i x) = [j x]`, `k'[e] = k e`.
pub fn derive(c: &ExactCouple) -> Result<ExactCouple, BocksteinError> {
    let top = c.top();
    let page = c.page + 1;
    let zero = Arc::new(FgAbGroup::zero());

    let d_sub: Vec<Subquotient> = c.i_maps.iter().map(Homomorphism::image).collect();
    let d_groups: Vec<Arc<FgAbGroup>> = d_sub.iter().map(|s| s.group().clone()).collect();

    let diffs: Vec<Homomorphism> = (0..=top).map(|i| c.differential(i)).collect();
    let mut e_sub = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let incoming = if i == 0 {
            Homomorphism::zero(zero.clone(), c.e_groups[0].clone())
        } else {
            diffs[i - 1].clone()
        };
        e_sub.push(homology_of_pair(&incoming, &diffs[i])?);
    }
    let e_groups: Vec<Arc<FgAbGroup>> = e_sub.iter().map(|s| s.group().clone()).collect();

    let mut i_maps = Vec::with_capacity(top + 1);
    let mut j_maps = Vec::with_capacity(top + 1);
    let mut k_maps = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let sub = &d_sub[i];
        let old_i = c.i_maps[i].matrix();

        // i'
        let images = old_i * sub.lift();
        let cols = images
            .columns()
            .enumerate()
            .map(|(g, y)| {
                sub.express(&y)
                    .ok_or(BocksteinError::Expression { page, degree: i, generator: g })
            })
            .collect::<Result<Vec<_>, _>>()?;
        i_maps.push(Homomorphism::new(
            d_groups[i].clone(),
            d_groups[i].clone(),
            IntMatrix::from_columns(d_groups[i].ngens(), &cols),
        )?);

        // j': pick a preimage under i, and check the class does not depend on it
        let dn = c.d_groups[i].ngens();
        let preimage = Hermite::new(&IntMatrix::hstack(dn, &[old_i, c.d_groups[i].relations()]));
        let ker_i = c.i_maps[i].kernel();
        let mut cols = Vec::with_capacity(sub.lift().cols());
        for (g, y) in sub.lift().columns().enumerate() {
            let err = BocksteinError::Expression { page, degree: i, generator: g };
            let x = preimage.solve(&y)?.ok_or(err.clone())?;
            let x = &x[..dn];
            let e = c.j_maps[i].apply(x);
            let coords = e_sub[i].express(&e).ok_or(err)?;
            for w in ker_i.lift().columns() {
                let x2: Vec<BigInt> = x.iter().zip(&w).map(|(a, b)| a + b).collect();
                let e2 = c.j_maps[i].apply(&x2);
                let same = e_sub[i]
                    .express(&e2)
                    .is_some_and(|c2| e_groups[i].elements_equal(&coords, &c2));
                if !same {
                    return Err(BocksteinError::PreimageDependence { page, degree: i, generator: g });
                }
            }
            cols.push(coords);
        }
        j_maps.push(Homomorphism::new(
            d_groups[i].clone(),
            e_groups[i].clone(),
            IntMatrix::from_columns(e_groups[i].ngens(), &cols),
        )?);

        // k'
        let target = if i < top { d_groups[i + 1].clone() } else { zero.clone() };
        let images = c.k_maps[i].matrix() * e_sub[i].lift();
        let mut cols = Vec::with_capacity(images.cols());
        for (g, y) in images.columns().enumerate() {
            let coords = if i < top {
                d_sub[i + 1]
                    .express(&y)
                    .ok_or(BocksteinError::Expression { page, degree: i, generator: g })?
            } else {
                Vec::new()
            };
            cols.push(coords);
        }
        k_maps.push(Homomorphism::new(
            e_groups[i].clone(),
            target.clone(),
            IntMatrix::from_columns(target.ngens(), &cols),
        )?);
    }

    Ok(ExactCouple {
        p: c.p,
        page,
        d_groups,
        e_groups,
        i_maps,
        j_maps,
        k_maps,
        d_sub,
        e_sub,
    })
}
