//! Machine-checked statements about `H(Ω_n)` and its Bockstein spectral
//! sequence, each producing a [`VerificationReport`].
//!
//! The Frobenius used on cohomology in degree `i` is the divided map
//! `F / p^{i−1}` (it equals `F_*` in degree 1). The undivided `F_*` is still
//! checked to land in `p·H` by the couple-morphism report.

mod cache;
mod report;
mod statements;

pub use cache::Cache;
pub use report::{Check, Parameters, Statement, Status, UnknownStatement, VerificationReport, Witness};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::cohomology::{CohomologyError, MAX_PRIME};
use crate::lattice::valuation;
use crate::modp::is_prime;

/// Precondition violations; failed verifications are reports, not errors.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("this statement needs total degree n >= 1")]
    ZeroDegree,
    #[error("page index must be at least 1")]
    ZeroPage,
}

/// Runs verifications against a shared [`Cache`], so that a sweep computes
/// each cohomology group and spectral sequence once.
#[derive(Default)]
pub struct Verifier {
    cache: Cache,
}

impl Verifier {
    pub fn new() -> Self {
        Verifier { cache: Cache::new() }
    }

    pub fn cache(&self) -> &Cache {
        &self.cache
    }

    pub fn annihilation(&self, r: usize, n: usize) -> VerificationReport {
        statements::annihilation(&self.cache, r, n)
    }

    pub fn cartier(&self, r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
        statements::cartier(&self.cache, r, n, p)
    }

    pub fn couple_morphism(&self, r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
        statements::couple_morphism(&self.cache, r, n, p)
    }

    pub fn frobenius_iso(&self, r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
        statements::frobenius_iso(&self.cache, r, n, p)
    }

    pub fn page_identification(
        &self,
        r: usize,
        n: usize,
        p: u64,
        k: usize,
    ) -> Result<VerificationReport, TheoremError> {
        statements::page_identification(&self.cache, r, n, p, k)
    }

    pub fn filtration(&self, r: usize, n: usize) -> Result<VerificationReport, TheoremError> {
        statements::filtration(&self.cache, r, n)
    }

    pub fn example_deg4(&self, r: usize) -> VerificationReport {
        statements::example_deg4(&self.cache, r)
    }

    /// Runs one job of a sweep.
    pub fn run(&self, statement: Statement, params: Parameters) -> Result<VerificationReport, TheoremError> {
        let Parameters { r, n, p, k } = params;
        let p = p.unwrap_or(0);
        match statement {
            Statement::Annihilation => Ok(self.annihilation(r, n)),
            Statement::Cartier => self.cartier(r, n, p),
            Statement::CoupleMorphism => self.couple_morphism(r, n, p),
            Statement::FrobeniusIso => self.frobenius_iso(r, n, p),
            Statement::PageIdentification => self.page_identification(r, n, p, k.unwrap_or(0)),
            Statement::Filtration => self.filtration(r, n),
            Statement::ExampleDeg4 => Ok(self.example_deg4(r)),
        }
    }

    /// Every job of [`sweep_jobs`], run in parallel and returned in job order.
    pub fn sweep(&self, rmax: usize, nmax: usize) -> Vec<VerificationReport> {
        self.run_all(&sweep_jobs(rmax, nmax))
    }

    pub fn run_all(&self, jobs: &[(Statement, Parameters)]) -> Vec<VerificationReport> {
        jobs.par_iter()
            .map(|&(st, params)| {
                self.run(st, params)
                    .expect("sweep jobs satisfy the preconditions")
            })
            .collect()
    }
}

pub fn verify_annihilation(r: usize, n: usize) -> VerificationReport {
    Verifier::new().annihilation(r, n)
}

pub fn verify_cartier(r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
    Verifier::new().cartier(r, n, p)
}

pub fn verify_couple_morphism(r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
    Verifier::new().couple_morphism(r, n, p)
}

pub fn verify_frobenius_iso(r: usize, n: usize, p: u64) -> Result<VerificationReport, TheoremError> {
    Verifier::new().frobenius_iso(r, n, p)
}

pub fn verify_page_identification(
    r: usize,
    n: usize,
    p: u64,
    k: usize,
) -> Result<VerificationReport, TheoremError> {
    Verifier::new().page_identification(r, n, p, k)
}

pub fn verify_filtration(r: usize, n: usize) -> Result<VerificationReport, TheoremError> {
    Verifier::new().filtration(r, n)
}

pub fn example_deg4(r: usize) -> VerificationReport {
    Verifier::new().example_deg4(r)
}

/// All sweep jobs for `1 ≤ r ≤ rmax`, `n ≤ nmax`, sorted by statement then
/// parameters.
///
/// Cartier, couple-morphism and Frobenius checks run for primes `p` with
/// `p·n ≤ nmax`; page identification runs for every `p | n` and
/// `k = 1..=ν_p(n) + 1`. Primes above the supported bound are skipped.
pub fn sweep_jobs(rmax: usize, nmax: usize) -> Vec<(Statement, Parameters)> {
    let primes: Vec<u64> = (2..=nmax as u64)
        .filter(|&p| is_prime(p) && p <= MAX_PRIME)
        .collect();
    let mut jobs = Vec::new();
    for r in 1..=rmax {
        for n in 0..=nmax {
            jobs.push((Statement::Annihilation, Parameters::new(r, n)));
            if n == 0 {
                continue;
            }
            if primes_supported(n) {
                jobs.push((Statement::Filtration, Parameters::new(r, n)));
            }
            for &p in &primes {
                let base = Parameters::new(r, n).with_prime(p);
                if p as usize * n <= nmax {
                    jobs.push((Statement::Cartier, base));
                    jobs.push((Statement::CoupleMorphism, base));
                    jobs.push((Statement::FrobeniusIso, base));
                }
                if (n as u64).is_multiple_of(p) {
                    let nu = valuation(&BigInt::from(n), p) as usize;
                    for k in 1..=nu + 1 {
                        jobs.push((Statement::PageIdentification, base.with_page(k)));
                    }
                }
            }
        }
        if nmax >= 4 {
            jobs.push((Statement::ExampleDeg4, Parameters::new(r, 4)));
        }
    }
    jobs.sort();
    jobs
}

fn primes_supported(n: usize) -> bool {
    (2..=n as u64).all(|p| !(is_prime(p) && (n as u64).is_multiple_of(p)) || p <= MAX_PRIME)
}

/// [`Verifier::sweep`] with a fresh cache.
pub fn sweep(rmax: usize, nmax: usize) -> Vec<VerificationReport> {
    Verifier::new().sweep(rmax, nmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_pass(report: &VerificationReport) {
        assert!(report.passed(), "{report:#?}");
        assert!(report.witness.is_none());
    }

    #[test]
    fn annihilation_examples() {
        assert_pass(&verify_annihilation(3, 6));
        for n in 1..=12 {
            let report = verify_annihilation(1, n);
            assert_pass(&report);
            if n > 1 {
                assert!(report.notes.contains(&format!("H^1 = Z/{n}")), "{:?}", report.notes);
            }
        }
        let zero = verify_annihilation(2, 0);
        assert_pass(&zero);
        assert_eq!(zero.check("h0_is_z"), Some(true));
    }

    #[test]
    fn cartier_examples() {
        assert_pass(&verify_cartier(2, 2, 2).unwrap());
        let report = verify_cartier(2, 3, 2).unwrap();
        assert_pass(&report);
        assert_eq!(report.check("vanishing"), Some(true));
        assert!(verify_cartier(1, 1, 4).is_err());
    }

    #[test]
    fn couple_morphism_examples() {
        for (r, n, p) in [(1, 2, 2), (2, 2, 2), (1, 3, 2), (2, 1, 3), (2, 3, 2)] {
            assert_pass(&verify_couple_morphism(r, n, p).unwrap());
        }
        assert_eq!(verify_couple_morphism(1, 0, 2), Err(TheoremError::ZeroDegree));
    }

    #[test]
    fn frobenius_examples() {
        let report = verify_frobenius_iso(1, 2, 2).unwrap();
        assert_pass(&report);
        assert!(report.notes.iter().any(|s| s == "degree 1: Z/2 -> Z/2"), "{:?}", report.notes);
        let report = verify_frobenius_iso(1, 3, 2).unwrap();
        assert_pass(&report);
        assert_eq!(report.notes.len(), 1);
        assert_pass(&verify_frobenius_iso(2, 2, 3).unwrap());
        assert_pass(&verify_frobenius_iso(2, 2, 2).unwrap());
    }

    #[test]
    fn page_identification_examples() {
        for k in 1..=3 {
            assert_pass(&verify_page_identification(2, 4, 2, k).unwrap());
        }
        assert_eq!(verify_page_identification(2, 4, 2, 0), Err(TheoremError::ZeroPage));
        assert_pass(&verify_page_identification(1, 4, 2, 5).unwrap());
    }

    #[test]
    fn filtration_examples() {
        for (r, n) in [(2, 4), (2, 6), (1, 12), (3, 4)] {
            assert_pass(&verify_filtration(r, n).unwrap());
        }
        assert_eq!(verify_filtration(2, 0), Err(TheoremError::ZeroDegree));
    }

    #[test]
    fn degree_four_example() {
        for r in 1..=3 {
            assert_pass(&example_deg4(r));
        }
        let report = example_deg4(2);
        assert!(report.notes.contains(&"H^2 = Z/2".to_string()), "{:?}", report.notes);
    }

    #[test]
    fn sweep_jobs_are_sorted_and_bounded() {
        let jobs = sweep_jobs(2, 8);
        assert!(jobs.windows(2).all(|w| w[0] < w[1]));
        for (st, params) in &jobs {
            if matches!(st, Statement::Cartier | Statement::CoupleMorphism | Statement::FrobeniusIso) {
                assert!(params.p.unwrap() as usize * params.n <= 8);
            }
        }
        assert!(jobs.contains(&(Statement::PageIdentification, Parameters::new(1, 8).with_prime(2).with_page(4))));
    }

    #[test]
    fn small_sweep_passes() {
        let reports = sweep(2, 6);
        assert!(!reports.is_empty());
        for report in &reports {
            assert_pass(report);
        }
    }
}
