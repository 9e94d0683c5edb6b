//! Integral de Rham cohomology of affine spaces over ℤ.
//!
//! The crate builds the graded de Rham complexes `Ω_n` of polynomial forms in
//! `r` variables, computes their integral and mod-p cohomology exactly, runs
//! the Bockstein spectral sequence at a prime through iterated derived exact
//! couples, and checks the structural statements (Euler annihilation, Cartier
//! isomorphism, page identification, Frobenius on cohomology, the p-adic
//! filtration) over parameter sweeps.

pub mod bockstein;
pub mod cohomology;
pub mod derham;
pub mod lattice;
pub mod modp;
pub mod theorems;
