use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::couple::{derive, initial_couple_from, ExactCouple};
use super::BocksteinError;
use crate::cohomology::{
    check_prime, integral_cohomology, modp_cohomology, CohomologyResult, ModpCohomologyResult,
};
use crate::lattice::{valuation, IntMatrix, IntVector};
use crate::modp::{reduce_vec, FpMatrix};

/// One page `E_k` with its differential `d_k`, all over 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub k: usize,
    pub p: u64,
    /// `dims[i] = dim E_kⁱ`.
    pub dims: Vec<usize>,
    /// `differentials[i]`: `E_kⁱ → E_kⁱ⁺¹` (`dims[i+1] × dims[i]`; empty rows at the top).
    pub differentials: Vec<FpMatrix>,
    /// Mod-p cochain representatives of the generators, `dim Ωⁱ_n × dims[i]`.
    pub lifts: Vec<FpMatrix>,
}

impl SpectralPage {
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn differential_ranks(&self) -> Vec<usize> {
        self.differentials.iter().map(FpMatrix::rank).collect()
    }
}

/// Compact page summary for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSummary {
    pub k: usize,
    pub dims: Vec<usize>,
    pub differential_ranks: Vec<usize>,
}

impl From<&SpectralPage> for PageSummary {
    fn from(page: &SpectralPage) -> Self {
        PageSummary {
            k: page.k,
            dims: page.dims.clone(),
            differential_ranks: page.differential_ranks(),
        }
    }
}

/// Iterated derived couples of the Bockstein couple of `Ω_n` at `p`.
#[derive(Clone, Debug)]
pub struct BocksteinSequence {
    pub r: usize,
    pub n: usize,
    pub p: u64,
    pub integral: Arc<CohomologyResult>,
    pub modp: Arc<ModpCohomologyResult>,
    /// `couples[k - 1]` is the couple whose `E` is the page `E_k`.
    pub couples: Vec<ExactCouple>,
}

impl BocksteinSequence {
    /// Builds pages `1..=kmax`, checking exactness of every couple.
    pub fn new(r: usize, n: usize, p: u64, kmax: usize) -> Result<Self, BocksteinError> {
        check_prime(p)?;
        if n == 0 {
            return Err(BocksteinError::ZeroDegree);
        }
        let integral = Arc::new(integral_cohomology(r, n));
        let modp = Arc::new(modp_cohomology(r, n, p)?);
        Self::from_parts(integral, modp, kmax)
    }

    pub fn from_parts(
        integral: Arc<CohomologyResult>,
        modp: Arc<ModpCohomologyResult>,
        kmax: usize,
    ) -> Result<Self, BocksteinError> {
        if kmax == 0 {
            return Err(BocksteinError::ZeroPage);
        }
        if integral.n == 0 {
            return Err(BocksteinError::ZeroDegree);
        }
        let first = initial_couple_from(&integral, &modp)?;
        first.check_exactness()?;
        let mut couples = vec![first];
        while couples.len() < kmax {
            let next = derive(couples.last().expect("nonempty"))?;
            next.check_exactness()?;
            couples.push(next);
        }
        Ok(BocksteinSequence {
            r: integral.r,
            n: integral.n,
            p: modp.p,
            integral,
            modp,
            couples,
        })
    }

    pub fn nu(&self) -> usize {
        valuation(&BigInt::from(self.n), self.p) as usize
    }

    pub fn kmax(&self) -> usize {
        self.couples.len()
    }

    pub fn couple(&self, k: usize) -> &ExactCouple {
        &self.couples[k - 1]
    }

    /// Writes an element of `E_1ⁱ` (coordinates) in the generators of `E_kⁱ`;
    /// `None` if it does not survive to `E_k`.
    pub fn express_in_page(&self, k: usize, i: usize, e1: &[BigInt]) -> Option<IntVector> {
        let mut v = e1.to_vec();
        for couple in &self.couples[1..k] {
            v = couple.e_sub[i].express(&v)?;
        }
        Some(v)
    }

    /// `E_kⁱ` generators written in `E_1ⁱ` coordinates.
    pub fn page_in_e1(&self, k: usize, i: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(self.couples[0].e_groups[i].ngens());
        for couple in &self.couples[1..k] {
            m = &m * couple.e_sub[i].lift();
        }
        m
    }

    pub fn page(&self, k: usize) -> SpectralPage {
        let couple = self.couple(k);
        let p = self.p;
        let dims: Vec<usize> = couple.e_groups.iter().map(|g| g.ngens()).collect();
        let differentials = (0..=couple.top())
            .map(|i| FpMatrix::from_int(couple.differential(i).matrix(), p))
            .collect();
        let lifts = (0..=couple.top())
            .map(|i| {
                let reps = &self.modp.degrees[i].reps;
                let coords = FpMatrix::from_int(&self.page_in_e1(k, i), p);
                reps * &coords
            })
            .collect();
        SpectralPage {
            k,
            p,
            dims,
            differentials,
            lifts,
        }
    }

    pub fn pages(&self) -> Vec<SpectralPage> {
        (1..=self.kmax()).map(|k| self.page(k)).collect()
    }

    /// Coordinates in `E_1ⁱ` of a mod-p cocycle.
    pub fn e1_coords(&self, i: usize, cochain: &[u64]) -> Option<Vec<u64>> {
        self.modp.degrees.get(i)?.coords(cochain)
    }

    /// Coordinates in `E_1ⁱ` of an integral cochain whose reduction is a cocycle.
    pub fn e1_coords_of_integral(&self, i: usize, cochain: &[BigInt]) -> Option<Vec<u64>> {
        self.e1_coords(i, &reduce_vec(cochain, self.p))
    }
}

/// The Bockstein couple of `Ω_n` at `p` (page 1).
pub fn initial_couple(r: usize, n: usize, p: u64) -> Result<ExactCouple, BocksteinError> {
    Ok(BocksteinSequence::new(r, n, p, 1)?.couples.remove(0))
}

/// Pages `E_1 … E_kmax`; `kmax` defaults to `ν_p(n) + 1`.
pub fn pages(r: usize, n: usize, p: u64, kmax: Option<usize>) -> Result<Vec<SpectralPage>, BocksteinError> {
    check_prime(p)?;
    let kmax = match kmax {
        Some(k) => k,
        None if n == 0 => return Err(BocksteinError::ZeroDegree),
        None => valuation(&BigInt::from(n), p) as usize + 1,
    };
    Ok(BocksteinSequence::new(r, n, p, kmax)?.pages())
}
