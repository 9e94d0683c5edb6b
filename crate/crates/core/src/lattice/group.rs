use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{IntMatrix, IntVector};
use super::normal_form::{Hermite, Smith};
use super::LatticeError;

/// Free rank and invariant factors `d₁ | d₂ | …` (each `> 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

/// A finitely generated abelian group `ℤ^ngens / (column lattice of relations)`.
///
/// Presentations are kept as given; invariants and a relation-lattice solver
/// are computed lazily and cached.
pub struct FgAbGroup {
    ngens: usize,
    relations: IntMatrix,
    invariants: OnceLock<Invariants>,
    solver: OnceLock<Hermite>,
}

impl Clone for FgAbGroup {
    fn clone(&self) -> Self {
        FgAbGroup {
            ngens: self.ngens,
            relations: self.relations.clone(),
            invariants: self.invariants.clone(),
            solver: self.solver.clone(),
        }
    }
}

impl PartialEq for FgAbGroup {
    /// Equality of presentations, not isomorphism; see [`is_isomorphic`].
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.relations == other.relations
    }
}

impl Eq for FgAbGroup {}

impl FgAbGroup {
    /// Group with `relations.rows()` generators.
    pub fn new(relations: IntMatrix) -> Self {
        FgAbGroup {
            ngens: relations.rows(),
            relations,
            invariants: OnceLock::new(),
            solver: OnceLock::new(),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self::new(IntMatrix::zeros(rank, 0))
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(&[order.into()])
    }

    /// `⊕ ℤ/d` over the given orders (an order of 0 gives a free summand).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let g = Self::new(IntMatrix::diagonal(orders));
        if let Some(inv) = cyclic_invariants(orders) {
            let _ = g.invariants.set(inv);
        }
        g
    }

    /// Direct sum of `free_rank` copies of ℤ and `ℤ/d` for each listed factor.
    pub fn from_invariants(free_rank: usize, factors: &[BigInt]) -> Self {
        let mut orders = factors.to_vec();
        orders.extend(std::iter::repeat_n(BigInt::zero(), free_rank));
        Self::from_cyclic_orders(&orders)
    }

    /// An elementary abelian `p`-group of the given dimension.
    pub fn elementary(p: u64, dim: usize) -> Self {
        Self::new(IntMatrix::scalar(dim, &BigInt::from(p)))
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &Invariants {
        self.invariants.get_or_init(|| {
            let sm = Smith::new(&self.relations);
            let diag = sm.diagonal();
            let rank = diag.iter().filter(|d| !d.is_zero()).count();
            Invariants {
                free_rank: self.ngens - rank,
                invariant_factors: diag.into_iter().filter(|d| d > &BigInt::one()).collect(),
            }
        })
    }

    pub fn free_rank(&self) -> usize {
        self.invariants().free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariants().invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariant_factors().is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors().iter().product())
    }

    /// Exponent of the torsion subgroup (1 if torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors()
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    fn solver(&self) -> &Hermite {
        self.solver.get_or_init(|| Hermite::new(&self.relations))
    }

    /// Whether the coordinate vector `x` represents zero.
    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.ngens, "element has wrong length");
        x.iter().all(Zero::is_zero)
            || self
                .solver()
                .solve(x)
                .expect("length checked")
                .is_some()
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let diff: IntVector = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&diff)
    }

    /// An isomorphic presentation `⊕ ℤ/dⱼ ⊕ ℤ^f` with nontrivial factors only,
    /// together with the coordinate changes in both directions.
    pub fn normalize(&self) -> Normalized {
        let sm = Smith::new(&self.relations);
        let diag = sm.diagonal();
        let factor = |j: usize| diag.get(j).cloned().unwrap_or_default();
        let kept: Vec<usize> = (0..self.ngens).filter(|&j| !factor(j).is_one()).collect();
        let orders: Vec<BigInt> = kept.iter().map(|&j| factor(j)).collect();
        let torsion: Vec<BigInt> = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        let free_rank = orders.len() - torsion.len();
        let mut relations = IntMatrix::zeros(kept.len(), torsion.len());
        for (k, d) in torsion.iter().enumerate() {
            relations[(k, k)] = d.clone();
        }
        let group = FgAbGroup::new(relations);
        let _ = group.invariants.set(Invariants {
            free_rank,
            invariant_factors: torsion,
        });
        Normalized {
            group: Arc::new(group),
            to_normal: sm.u.select_rows(kept.iter().copied()),
            from_normal: sm.u_inv.select_columns(kept.iter().copied()),
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({})", self)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariants();
        let mut parts: Vec<String> = inv
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match inv.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Result of [`FgAbGroup::normalize`].
#[derive(Clone, Debug)]
pub struct Normalized {
    pub group: Arc<FgAbGroup>,
    /// Old coordinates → normalized coordinates.
    pub to_normal: IntMatrix,
    /// Normalized generators written in old coordinates.
    pub from_normal: IntMatrix,
}

/// Invariants of `⊕ ℤ/dⱼ` by collecting prime powers, skipping the Smith
/// form. `None` when an order is too large to factor by trial division.
fn cyclic_invariants(orders: &[BigInt]) -> Option<Invariants> {
    let mut free_rank = 0;
    let mut powers: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in orders {
        if d.is_zero() {
            free_rank += 1;
            continue;
        }
        let mut m = d.magnitude().to_u64().filter(|&m| m < 1 << 40)?;
        let mut q = 2;
        while q * q <= m {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            if e > 0 {
                powers.entry(q).or_default().push(e);
            }
            q += 1;
        }
        if m > 1 {
            powers.entry(m).or_default().push(1);
        }
    }
    let len = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![BigInt::one(); len];
    for (q, exps) in &mut powers {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (j, &e) in exps.iter().enumerate() {
            factors[j] *= BigInt::from(*q).pow(e);
        }
    }
    factors.reverse();
    Some(Invariants {
        free_rank,
        invariant_factors: factors,
    })
}

/// `true` iff the groups have equal free rank and invariant factors.
pub fn is_isomorphic(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.invariants() == b.invariants()
}

/// A group homomorphism given by its matrix on generators.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: Arc<FgAbGroup>,
    target: Arc<FgAbGroup>,
    matrix: IntMatrix,
}

impl Homomorphism {
    /// Checked constructor: dimensions must match and relations must map to zero.
    pub fn new(
        source: Arc<FgAbGroup>,
        target: Arc<FgAbGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, LatticeError> {
        let h = Self::new_unchecked(source, target, matrix)?;
        h.check_well_defined()?;
        Ok(h)
    }

    /// Builds the map checking dimensions only.
    pub fn new_unchecked(
        source: Arc<FgAbGroup>,
        target: Arc<FgAbGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, LatticeError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(LatticeError::ShapeMismatch {
                expected: (target.ngens(), source.ngens()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        Ok(Homomorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(group: Arc<FgAbGroup>) -> Self {
        let m = IntMatrix::identity(group.ngens());
        Homomorphism {
            source: group.clone(),
            target: group,
            matrix: m,
        }
    }

    /// Multiplication by `c` on `group`.
    pub fn scalar(group: Arc<FgAbGroup>, c: &BigInt) -> Self {
        let m = IntMatrix::scalar(group.ngens(), c);
        Homomorphism {
            source: group.clone(),
            target: group,
            matrix: m,
        }
    }

    pub fn zero(source: Arc<FgAbGroup>, target: Arc<FgAbGroup>) -> Self {
        let m = IntMatrix::zeros(target.ngens(), source.ngens());
        Homomorphism {
            source,
            target,
            matrix: m,
        }
    }

    pub fn source(&self) -> &Arc<FgAbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FgAbGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn check_well_defined(&self) -> Result<(), LatticeError> {
        let images = &self.matrix * self.source.relations();
        for (j, col) in images.columns().enumerate() {
            if !self.target.is_zero_element(&col) {
                return Err(LatticeError::NotWellDefined { relation: j });
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Homomorphism) -> Result<Homomorphism, LatticeError> {
        if !same_group(&first.target, &self.source) {
            return Err(LatticeError::NotComposable);
        }
        Ok(Homomorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix
            .columns()
            .all(|c| self.target.is_zero_element(&c))
    }

    /// Equality as maps: same endpoints and agreement on generators modulo
    /// the target relations.
    pub fn equals(&self, other: &Homomorphism) -> bool {
        same_group(&self.source, &other.source)
            && same_group(&self.target, &other.target)
            && (0..self.source.ngens()).all(|j| {
                self.target
                    .elements_equal(&self.matrix.column(j), &other.matrix.column(j))
            })
    }

    /// First generator on which the two maps differ.
    pub fn first_difference(&self, other: &Homomorphism) -> Option<usize> {
        (0..self.source.ngens()).find(|&j| {
            !self
                .target
                .elements_equal(&self.matrix.column(j), &other.matrix.column(j))
        })
    }

    /// Lattice of source coordinates mapping into the target relations.
    fn preimage_of_zero(&self) -> IntMatrix {
        let a = self.source.ngens();
        let stacked = IntMatrix::hstack(self.target.ngens(), &[&self.matrix, self.target.relations()]);
        let k = Hermite::new(&stacked).kernel();
        k.select_rows(0..a)
    }

    pub fn kernel(&self) -> Subquotient {
        Subquotient::new(
            self.source.clone(),
            self.preimage_of_zero(),
            IntMatrix::zeros(self.source.ngens(), 0),
        )
    }

    pub fn image(&self) -> Subquotient {
        Subquotient::new(
            self.target.clone(),
            self.matrix.clone(),
            IntMatrix::zeros(self.target.ngens(), 0),
        )
    }

    pub fn cokernel(&self) -> Subquotient {
        Subquotient::new(
            self.target.clone(),
            IntMatrix::identity(self.target.ngens()),
            self.matrix.clone(),
        )
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

fn same_group(a: &Arc<FgAbGroup>, b: &Arc<FgAbGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The subquotient `(⟨N⟩ + R) / (⟨D⟩ + R)` of an ambient group `ℤ^m / R`,
/// where `N` and `D` are generator matrices with `⟨D⟩ ⊆ ⟨N⟩ + R`.
///
/// Subgroups, kernels, images, quotients and homology groups are all special
/// cases. The group is stored in normalized form; `lift` holds ambient
/// representatives of its generators and [`Subquotient::express`] writes
/// ambient elements of the numerator in those generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: Arc<FgAbGroup>,
    numerator: IntMatrix,
    denominator: IntMatrix,
    raw: FgAbGroup,
    group: Arc<FgAbGroup>,
    lift: IntMatrix,
    to_normal: IntMatrix,
    solver: Hermite,
}

impl Subquotient {
    pub fn new(ambient: Arc<FgAbGroup>, numerator: IntMatrix, denominator: IntMatrix) -> Self {
        let m = ambient.ngens();
        assert_eq!(numerator.rows(), m, "numerator lives in the wrong ambient group");
        assert_eq!(denominator.rows(), m, "denominator lives in the wrong ambient group");
        let t = numerator.cols();
        let stacked = IntMatrix::hstack(m, &[&numerator, ambient.relations(), &denominator]);
        let solver = Hermite::new(&stacked);
        let raw_relations = solver.kernel().select_rows(0..t);
        let raw = FgAbGroup::new(raw_relations);
        let norm = raw.normalize();
        let lift = &numerator * &norm.from_normal;
        Subquotient {
            ambient,
            numerator,
            denominator,
            raw,
            group: norm.group,
            lift,
            to_normal: norm.to_normal,
            solver,
        }
    }

    /// Subgroup generated by the columns of `gens`.
    pub fn subgroup(ambient: Arc<FgAbGroup>, gens: IntMatrix) -> Self {
        let m = ambient.ngens();
        Self::new(ambient, gens, IntMatrix::zeros(m, 0))
    }

    pub fn ambient(&self) -> &Arc<FgAbGroup> {
        &self.ambient
    }

    pub fn group(&self) -> &Arc<FgAbGroup> {
        &self.group
    }

    /// The presentation before normalization: generators are the numerator columns.
    pub fn raw_group(&self) -> &FgAbGroup {
        &self.raw
    }

    pub fn numerator(&self) -> &IntMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntMatrix {
        &self.denominator
    }

    /// Ambient representatives of the generators of [`Self::group`].
    pub fn lift(&self) -> &IntMatrix {
        &self.lift
    }

    /// Coordinates of `x` in the generators of the subquotient, or `None` if
    /// `x` does not lie in the numerator.
    pub fn express(&self, x: &[BigInt]) -> Option<IntVector> {
        let sol = self.solver.solve(x).ok()??;
        let y = &sol[..self.numerator.cols()];
        Some(self.to_normal.mul_vec(y))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solver.solve(x).ok().flatten().is_some()
    }

    /// Inclusion of a subgroup (denominator zero) into its ambient group.
    pub fn inclusion(&self) -> Homomorphism {
        Homomorphism {
            source: self.group.clone(),
            target: self.ambient.clone(),
            matrix: self.lift.clone(),
        }
    }
}

/// `ker(g) / im(f)` for composable homomorphisms with `g ∘ f = 0`.
pub fn homology_of_pair(f: &Homomorphism, g: &Homomorphism) -> Result<Subquotient, LatticeError> {
    if !same_group(f.target(), g.source()) {
        return Err(LatticeError::NotComposable);
    }
    if !g.compose(f)?.is_zero() {
        return Err(LatticeError::NotAComplex);
    }
    Ok(Subquotient::new(
        g.source().clone(),
        g.preimage_of_zero(),
        f.matrix().clone(),
    ))
}

/// `ker(d_out) / im(d_in)` for maps of free abelian groups.
///
/// `lift()` of the result holds cocycle representatives of the generators.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient, LatticeError> {
    if d_in.rows() != d_out.cols() {
        return Err(LatticeError::DimensionMismatch {
            expected: d_out.cols(),
            found: d_in.rows(),
        });
    }
    if !(d_out * d_in).is_zero() {
        return Err(LatticeError::NotAComplex);
    }
    let ambient = Arc::new(FgAbGroup::free(d_in.rows()));
    let cycles = Hermite::new(d_out).kernel();
    Ok(Subquotient::new(ambient, cycles, d_in.clone()))
}

/// The map on cohomology induced by a cochain map `f`.
pub fn induced_map(
    f_cochain: &IntMatrix,
    source: &Subquotient,
    target: &Subquotient,
) -> Result<Homomorphism, LatticeError> {
    if f_cochain.cols() != source.ambient.ngens() || f_cochain.rows() != target.ambient.ngens() {
        return Err(LatticeError::ShapeMismatch {
            expected: (target.ambient.ngens(), source.ambient.ngens()),
            found: (f_cochain.rows(), f_cochain.cols()),
        });
    }
    let images = f_cochain * source.lift();
    let mut cols = Vec::with_capacity(images.cols());
    for (j, w) in images.columns().enumerate() {
        let c = target
            .express(&w)
            .ok_or(LatticeError::NotACocycle { generator: j })?;
        cols.push(c);
    }
    let matrix = IntMatrix::from_columns(target.group.ngens(), &cols);
    Homomorphism::new(source.group.clone(), target.group.clone(), matrix)
}

/// `p^k·G` with its inclusion into `G`.
pub fn subgroup_pk(g: &Arc<FgAbGroup>, p: u64, k: u32) -> Subquotient {
    let c = BigInt::from(p).pow(k);
    Subquotient::subgroup(g.clone(), IntMatrix::scalar(g.ngens(), &c))
}

/// Dimension over 𝔽_p of `p^{k−1}G / p^k G`: the free rank plus the number of
/// invariant factors divisible by `p^k`.
pub fn graded_piece_dim(g: &FgAbGroup, p: u64, k: u32) -> usize {
    assert!(k >= 1, "graded pieces start at k = 1");
    let pk = BigInt::from(p).pow(k);
    g.free_rank()
        + g.invariant_factors()
            .iter()
            .filter(|d| d.is_multiple_of(&pk))
            .count()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(p >= 2, "valuation at {p}");
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

/// The p-primary component of the torsion of `G`, as the kernel of
/// multiplication by a large enough power of `p`.
pub fn primary_part(g: &Arc<FgAbGroup>, p: u64) -> Subquotient {
    let e = g
        .invariant_factors()
        .iter()
        .map(|d| valuation(d, p))
        .max()
        .unwrap_or(0);
    Homomorphism::scalar(g.clone(), &BigInt::from(p).pow(e)).kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::int_vec;

    fn group(orders: &[i64]) -> Arc<FgAbGroup> {
        Arc::new(FgAbGroup::from_cyclic_orders(&int_vec(orders)))
    }

    #[test]
    fn cyclic_invariants_match_smith() {
        for orders in [&[2, 3, 4, 0, 6, 1][..], &[12, 18, 8], &[1, 1], &[], &[-4, 10, 0, 0], &[97, 97 * 2]] {
            let orders = int_vec(orders);
            let direct = FgAbGroup::from_cyclic_orders(&orders);
            let smith = FgAbGroup::new(IntMatrix::diagonal(&orders));
            assert_eq!(direct.invariants(), smith.invariants(), "{orders:?}");
        }
    }

    #[test]
    fn invariants_of_diagonal() {
        let g = group(&[2, 3]);
        assert_eq!(g.invariant_factors(), &int_vec(&[6])[..]);
        assert_eq!(g.order(), Some(BigInt::from(6)));
        let f = group(&[0, 4]);
        assert_eq!(f.free_rank(), 1);
        assert_eq!(f.order(), None);
        assert!(FgAbGroup::zero().is_trivial());
    }

    #[test]
    fn isomorphism_examples() {
        assert!(!is_isomorphic(&group(&[2, 2]), &group(&[4])));
        assert!(is_isomorphic(&group(&[6]), &group(&[2, 3])));
        assert!(is_isomorphic(&FgAbGroup::zero(), &FgAbGroup::zero()));
        assert!(is_isomorphic(&group(&[1, 1]), &FgAbGroup::zero()));
    }

    #[test]
    fn homology_examples() {
        // ker of an injective map
        let h = homology_at(&IntMatrix::zeros(1, 0), &IntMatrix::from_rows(&[[2]])).unwrap();
        assert!(h.group().is_trivial());
        // coker of ×2
        let h = homology_at(&IntMatrix::from_rows(&[[2]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(h.group().invariant_factors(), &int_vec(&[2])[..]);
        // ℤ --4--> ℤ --0--> 0
        let h = homology_at(&IntMatrix::from_rows(&[[4]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(h.group().invariant_factors(), &int_vec(&[4])[..]);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let r = homology_at(&IntMatrix::from_rows(&[[1]]), &IntMatrix::from_rows(&[[1]]));
        assert!(matches!(r, Err(LatticeError::NotAComplex)));
    }

    #[test]
    fn induced_identity_and_scalar() {
        let d = IntMatrix::from_rows(&[[6]]);
        let h = homology_at(&d, &IntMatrix::zeros(0, 1)).unwrap();
        let id = induced_map(&IntMatrix::identity(1), &h, &h).unwrap();
        assert!(id.equals(&Homomorphism::identity(h.group().clone())));
        let two = induced_map(&IntMatrix::scalar(1, &BigInt::from(2)), &h, &h).unwrap();
        assert!(two.equals(&Homomorphism::scalar(h.group().clone(), &BigInt::from(2))));
        assert!(!two.is_injective());
    }

    #[test]
    fn induced_rejects_non_cocycle() {
        // source: H⁰ of ℤ --0--> ℤ is ℤ; target complex ℤ --1--> ℤ has no cocycles
        let src = homology_at(&IntMatrix::zeros(1, 0), &IntMatrix::zeros(1, 1)).unwrap();
        let tgt = homology_at(&IntMatrix::zeros(1, 0), &IntMatrix::from_rows(&[[1]])).unwrap();
        let r = induced_map(&IntMatrix::identity(1), &src, &tgt);
        assert!(matches!(r, Err(LatticeError::NotACocycle { generator: 0 })));
    }

    #[test]
    fn pk_subgroups() {
        let g = group(&[4]);
        assert!(is_isomorphic(subgroup_pk(&g, 2, 1).group(), &group(&[2])));
        let g = group(&[4, 4, 2]);
        assert!(is_isomorphic(subgroup_pk(&g, 2, 1).group(), &group(&[2, 2])));
        assert!(is_isomorphic(subgroup_pk(&g, 2, 0).group(), &g));
    }

    #[test]
    fn graded_dims() {
        let g = group(&[4]);
        assert_eq!(
            (1..=3).map(|k| graded_piece_dim(&g, 2, k)).collect::<Vec<_>>(),
            vec![1, 1, 0]
        );
        let g = group(&[4, 4, 2]);
        assert_eq!(graded_piece_dim(&g, 2, 1), 3);
        assert_eq!(graded_piece_dim(&g, 2, 2), 2);
        assert_eq!(graded_piece_dim(&FgAbGroup::free(1), 5, 1), 1);
    }

    #[test]
    fn primary_parts() {
        let g = group(&[12]);
        assert!(is_isomorphic(primary_part(&g, 2).group(), &group(&[4])));
        assert!(is_isomorphic(primary_part(&g, 3).group(), &group(&[3])));
        assert!(primary_part(&group(&[4, 2]), 3).group().is_trivial());
        assert!(primary_part(&Arc::new(FgAbGroup::free(2)), 2).group().is_trivial());
    }

    #[test]
    fn kernel_image_cokernel() {
        // ℤ/4 --×2--> ℤ/4
        let g = group(&[4]);
        let f = Homomorphism::scalar(g.clone(), &BigInt::from(2));
        assert!(is_isomorphic(f.kernel().group(), &group(&[2])));
        assert!(is_isomorphic(f.image().group(), &group(&[2])));
        assert!(is_isomorphic(f.cokernel().group(), &group(&[2])));
        assert!(Homomorphism::identity(g).is_isomorphism());
    }

    #[test]
    fn ill_defined_map_rejected() {
        // ℤ/2 → ℤ/3, 1 ↦ 1 is not well defined
        let r = Homomorphism::new(group(&[2]), group(&[3]), IntMatrix::from_rows(&[[1]]));
        assert!(matches!(r, Err(LatticeError::NotWellDefined { .. })));
    }

    #[test]
    fn normalize_roundtrip() {
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[2, 4], [6, 8], [0, 0]]));
        let n = g.normalize();
        assert!(is_isomorphic(&g, &n.group));
        // from_normal then to_normal is the identity on normalized coordinates
        let back = &n.to_normal * &n.from_normal;
        for j in 0..n.group.ngens() {
            let mut e = vec![BigInt::zero(); n.group.ngens()];
            e[j] = BigInt::one();
            assert!(n.group.elements_equal(&back.column(j), &e));
        }
    }
}
