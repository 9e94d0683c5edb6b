//! Integral and mod-p cohomology of the de Rham complexes, and the Cartier
//! isomorphism on cohomology.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::derham::{basis, cartier_rep_matrix, d_matrix, multidegree_blocks, top_degree, ComplexZ};
use crate::lattice::{homology_at, FgAbGroup, Homomorphism, IntMatrix, IntVector, Subquotient};
use crate::modp::{is_prime, lift_vec, FpMatrix, FpSolver};

/// Largest prime accepted by the mod-p routines.
pub const MAX_PRIME: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("{0} is not a prime in the supported range 2..={MAX_PRIME}")]
    InvalidPrime(u64),
    #[error("Cartier map is not bijective in degree {degree} (witness column {witness:?})")]
    CartierNotBijective { degree: usize, witness: Vec<u64> },
}

pub fn check_prime(p: u64) -> Result<(), CohomologyError> {
    if is_prime(p) && p <= MAX_PRIME {
        Ok(())
    } else {
        Err(CohomologyError::InvalidPrime(p))
    }
}

/// One multidegree block's contribution to a subquotient of cochains.
#[derive(Clone, Debug)]
struct Piece {
    /// Positions of the block's basis elements in the cochain group.
    indices: Vec<usize>,
    homology: Subquotient,
    /// First coordinate of this block's generators in the direct sum.
    offset: usize,
}

/// A subquotient of `Ωⁱ_n` that splits over the multidegree blocks, such as
/// `Hⁱ(Ω_n)`. The group is `⊕ ℤ/dⱼ` over the blocks' cyclic factors, in
/// block order.
#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    group: Arc<FgAbGroup>,
    lift: IntMatrix,
    pieces: Vec<Piece>,
}

impl CohomologyDegree {
    /// Direct sum of per-block subquotients of free ambients; `blocks` pairs
    /// the cochain positions of each block with its subquotient.
    pub fn assemble(cochain_dim: usize, blocks: Vec<(Vec<usize>, Subquotient)>) -> Self {
        let mut orders = Vec::new();
        let mut pieces = Vec::with_capacity(blocks.len());
        for (indices, homology) in blocks {
            let g = homology.group();
            let offset = orders.len();
            let rel = g.relations();
            orders.extend((0..g.ngens()).map(|j| {
                if j < rel.cols() {
                    rel[(j, j)].clone()
                } else {
                    BigInt::zero()
                }
            }));
            pieces.push(Piece { indices, homology, offset });
        }
        let mut lift = IntMatrix::zeros(cochain_dim, orders.len());
        for piece in &pieces {
            let local = piece.homology.lift();
            for c in 0..local.cols() {
                for (row, &k) in piece.indices.iter().enumerate() {
                    lift[(k, piece.offset + c)] = local[(row, c)].clone();
                }
            }
        }
        CohomologyDegree {
            group: Arc::new(FgAbGroup::from_cyclic_orders(&orders)),
            lift,
            pieces,
        }
    }

    pub fn group(&self) -> &Arc<FgAbGroup> {
        &self.group
    }

    /// Cocycle representatives of the generators (columns).
    pub fn lift(&self) -> &IntMatrix {
        &self.lift
    }

    pub fn block_count(&self) -> usize {
        self.pieces.len()
    }

    /// Class of an integral cochain; `None` if it is not a cocycle.
    pub fn express(&self, x: &[BigInt]) -> Option<IntVector> {
        assert_eq!(x.len(), self.lift.rows(), "cochain has wrong length");
        let mut out = vec![BigInt::zero(); self.group.ngens()];
        for piece in &self.pieces {
            let local: Vec<BigInt> = piece.indices.iter().map(|&k| x[k].clone()).collect();
            if local.iter().all(Zero::is_zero) {
                continue;
            }
            let c = piece.homology.express(&local)?;
            out[piece.offset..piece.offset + c.len()].clone_from_slice(&c);
        }
        Some(out)
    }
}

/// `Hⁱ(Ω_n)` for every degree, with cocycle representatives of the generators.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub r: usize,
    pub n: usize,
    pub complex: ComplexZ,
    /// Indexed by degree `i = 0..=top`.
    pub degrees: Vec<CohomologyDegree>,
}

impl CohomologyResult {
    pub fn top(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn group(&self, i: usize) -> Arc<FgAbGroup> {
        self.degrees
            .get(i)
            .map(|h| h.group().clone())
            .unwrap_or_else(|| Arc::new(FgAbGroup::zero()))
    }

    /// Cocycle representatives of the generators of `Hⁱ` (columns).
    pub fn lift(&self, i: usize) -> IntMatrix {
        self.degrees
            .get(i)
            .map(|h| h.lift().clone())
            .unwrap_or_else(|| IntMatrix::zeros(self.complex.cochain_dim(i), 0))
    }

    /// Class of an integral cocycle; `None` if it is not a cocycle.
    pub fn express(&self, i: usize, cocycle: &[BigInt]) -> Option<IntVector> {
        match self.degrees.get(i) {
            Some(h) => h.express(cocycle),
            None => cocycle.iter().all(Zero::is_zero).then(Vec::new),
        }
    }
}

/// Integral cohomology, computed block by block over the multidegree
/// decomposition of `Ω_n`.
pub fn integral_cohomology(r: usize, n: usize) -> CohomologyResult {
    let complex = ComplexZ::new(r, n);
    let blocks = multidegree_blocks(r, n);
    let degrees = (0..=complex.top())
        .map(|i| {
            let parts = blocks
                .iter()
                .filter(|b| !b.indices[i].is_empty())
                .map(|b| {
                    let h = homology_at(&b.d_into(i), &b.d(i)).expect("d∘d = 0 on the de Rham complex");
                    (b.indices[i].clone(), h)
                })
                .collect();
            CohomologyDegree::assemble(complex.cochain_dim(i), parts)
        })
        .collect();
    CohomologyResult { r, n, complex, degrees }
}

#[derive(Clone, Debug)]
struct ModpPiece {
    indices: Vec<usize>,
    /// Solves against `[coboundaries | representatives]` of the block.
    solver: FpSolver,
    coboundary_dim: usize,
    offset: usize,
}

/// `Hⁱ(Ω_n ⊗ 𝔽_p)` in one degree, assembled from the multidegree blocks.
#[derive(Clone, Debug)]
pub struct ModpDegree {
    pub i: usize,
    pub cochain_dim: usize,
    /// Cocycle representatives of a basis of cohomology (columns).
    pub reps: FpMatrix,
    cocycle_dim: usize,
    coboundary_dim: usize,
    pieces: Vec<ModpPiece>,
}

impl ModpDegree {
    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_dim
    }

    pub fn coboundary_dim(&self) -> usize {
        self.coboundary_dim
    }

    /// Coordinates of the class of a mod-p cocycle; `None` if `v` is not a cocycle.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.cochain_dim, "cochain has wrong length");
        let mut out = vec![0; self.dim()];
        for piece in &self.pieces {
            let local: Vec<u64> = piece.indices.iter().map(|&k| v[k]).collect();
            if local.iter().all(|&x| x == 0) {
                continue;
            }
            let x = piece.solver.solve(&local)?;
            let c = &x[piece.coboundary_dim..];
            out[piece.offset..piece.offset + c.len()].copy_from_slice(c);
        }
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct ModpCohomologyResult {
    pub r: usize,
    pub n: usize,
    pub p: u64,
    pub degrees: Vec<ModpDegree>,
}

impl ModpCohomologyResult {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(ModpDegree::dim).collect()
    }

    pub fn degree(&self, i: usize) -> Option<&ModpDegree> {
        self.degrees.get(i)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.degrees.get(i).map_or(0, ModpDegree::dim)
    }
}

pub fn modp_cohomology(r: usize, n: usize, p: u64) -> Result<ModpCohomologyResult, CohomologyError> {
    check_prime(p)?;
    let top = top_degree(r, n);
    let blocks = multidegree_blocks(r, n);
    let degrees = (0..=top)
        .map(|i| {
            let cochain_dim = basis(r, n, i).dim();
            let mut pieces = Vec::new();
            let mut columns: Vec<Vec<u64>> = Vec::new();
            let (mut cocycle_dim, mut coboundary_dim) = (0, 0);
            for b in blocks.iter().filter(|b| !b.indices[i].is_empty()) {
                let d_out = FpMatrix::from_int(&b.d(i), p);
                let d_in = FpMatrix::from_int(&b.d_into(i), p);
                let cocycles = d_out.kernel();
                let coboundaries = d_in.column_basis();
                let nb = coboundaries.cols();
                let (_, pivots) = coboundaries.hstack(&cocycles).rref();
                debug_assert!(pivots[..nb].iter().copied().eq(0..nb));
                let chosen: Vec<usize> = pivots[nb..].iter().map(|&c| c - nb).collect();
                let reps = cocycles.select_columns(&chosen);
                let offset = columns.len();
                for c in 0..reps.cols() {
                    let mut v = vec![0; cochain_dim];
                    for (row, &k) in b.indices[i].iter().enumerate() {
                        v[k] = reps[(row, c)];
                    }
                    columns.push(v);
                }
                cocycle_dim += cocycles.cols();
                coboundary_dim += nb;
                pieces.push(ModpPiece {
                    indices: b.indices[i].clone(),
                    solver: FpSolver::new(&coboundaries.hstack(&reps)),
                    coboundary_dim: nb,
                    offset,
                });
            }
            ModpDegree {
                i,
                cochain_dim,
                reps: FpMatrix::from_columns(p, cochain_dim, &columns),
                cocycle_dim,
                coboundary_dim,
                pieces,
            }
        })
        .collect();
    Ok(ModpCohomologyResult { r, n, p, degrees })
}

/// `dim Ωⁱ_n − rank_p(dⁱ)`: the mod-p cocycles of `Ωⁱ_n`.
pub fn cocycle_dim(r: usize, n: usize, i: usize, p: u64) -> usize {
    let dim = basis(r, n, i).dim();
    if dim == 0 {
        return 0;
    }
    dim - FpMatrix::from_int(&d_matrix(r, n, i), p).rank()
}

/// The map `C⁻¹: Ωⁱ_n ⊗ 𝔽_p → Hⁱ(Ω_{pn} ⊗ 𝔽_p)` in coordinates.
#[derive(Clone, Debug)]
pub struct CartierIso {
    pub r: usize,
    pub n: usize,
    pub i: usize,
    pub p: u64,
    /// `dim Hⁱ(Ω_{pn}⊗𝔽_p) × dim Ωⁱ_n`.
    pub matrix: FpMatrix,
    pub homomorphism: Homomorphism,
}

pub fn cartier_iso(r: usize, n: usize, i: usize, p: u64) -> Result<CartierIso, CohomologyError> {
    let target = modp_cohomology(r, p as usize * n, p)?;
    cartier_iso_into(&target, n, i)
}

/// As [`cartier_iso`], reusing an already computed `H(Ω_{pn} ⊗ 𝔽_p)`.
pub fn cartier_iso_into(
    target: &ModpCohomologyResult,
    n: usize,
    i: usize,
) -> Result<CartierIso, CohomologyError> {
    let (r, p) = (target.r, target.p);
    assert_eq!(target.n, p as usize * n, "target must be H(Ω_pn ⊗ F_p)");
    let rep = cartier_rep_matrix(r, n, i, p);
    let tdim = target.dim(i);
    let mut cols = Vec::with_capacity(rep.cols());
    for j in 0..rep.cols() {
        let v = rep.column(j);
        let c = match target.degree(i) {
            Some(deg) => deg.coords(&v),
            None => v.iter().all(|&x| x == 0).then(Vec::new),
        };
        let c = c.ok_or(CohomologyError::CartierNotBijective {
            degree: i,
            witness: v,
        })?;
        cols.push(c);
    }
    let matrix = FpMatrix::from_columns(p, tdim, &cols);
    if !matrix.is_invertible() {
        let kernel = matrix.kernel();
        let witness = if kernel.cols() > 0 { kernel.column(0) } else { Vec::new() };
        return Err(CohomologyError::CartierNotBijective { degree: i, witness });
    }
    let source = Arc::new(FgAbGroup::elementary(p, rep.cols()));
    let tgt = Arc::new(FgAbGroup::elementary(p, tdim));
    let homomorphism = Homomorphism::new(source, tgt, matrix.to_int())
        .expect("maps between 𝔽_p-vector spaces are well defined");
    Ok(CartierIso {
        r,
        n,
        i,
        p,
        matrix,
        homomorphism,
    })
}

/// Integral lift of a mod-p vector with entries in `[0, p)`.
pub fn integral_lift(v: &[u64]) -> IntVector {
    lift_vec(v)
}
