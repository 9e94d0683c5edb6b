use std::fmt;

use derham_core::bockstein::{
    closed_form_page, compare_pages, verify_page_identification, BocksteinError, BocksteinSequence,
};
use derham_core::cohomology::{check_prime, integral_cohomology, MAX_PRIME};
use derham_core::derham::basis as basis_of;
use derham_core::lattice::valuation;
use derham_core::modp::is_prime;
use derham_core::theorems::{sweep_jobs, Parameters, Statement, TheoremError, Verifier};
use num_bigint::BigInt;

use crate::document::{
    BasisRow, BasisTable, CohomologyRow, DocParameters, PageRow, PagesTable, ReportDocument, Results,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags, out-of-bounds parameters or unmet preconditions (exit 2).
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<TheoremError> for CliError {
    fn from(e: TheoremError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<BocksteinError> for CliError {
    fn from(e: BocksteinError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub const MAX_RANK: usize = 4;
pub const MAX_DEGREE: usize = 16;

/// Size guard on `r` and `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub unsafe_bounds: bool,
}

impl Limits {
    pub fn check(&self, r: usize, n: usize) -> Result<(), CliError> {
        if r == 0 {
            return Err(CliError::Usage("rank must be at least 1".into()));
        }
        if !self.unsafe_bounds && (r > MAX_RANK || n > MAX_DEGREE) {
            return Err(CliError::Usage(format!(
                "r={r} n={n} is outside the default bounds r <= {MAX_RANK}, n <= {MAX_DEGREE} \
                 (pass --unsafe-bounds to override)"
            )));
        }
        Ok(())
    }
}

fn small(x: &BigInt) -> u64 {
    u64::try_from(x).expect("invariant factor fits in u64")
}

pub fn cohomology(r: usize, n: usize) -> ReportDocument {
    let result = integral_cohomology(r, n);
    let rows = (0..=result.top())
        .filter_map(|i| {
            let g = result.group(i);
            if g.is_trivial() {
                return None;
            }
            let mut factors: Vec<u64> = g.invariant_factors().iter().map(small).collect();
            factors.sort_unstable();
            Some(CohomologyRow {
                i,
                free_rank: g.free_rank(),
                invariant_factors: factors,
            })
        })
        .collect();
    ReportDocument::new("cohomology", DocParameters::new(r, n), Results::Cohomology(rows))
}

/// Pages `E_1 … E_{ν+1}` with identification and closed-form status.
pub fn pages(r: usize, n: usize, p: u64) -> Result<ReportDocument, CliError> {
    check_prime(p).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = DocParameters {
        p: Some(p),
        ..DocParameters::new(r, n)
    };
    if n == 0 {
        let table = PagesTable {
            p,
            nu: 0,
            note: Some("n = 0: Omega_0 is Z in degree 0 with no torsion; the Bockstein sequence is degenerate".into()),
            pages: Vec::new(),
        };
        return Ok(ReportDocument::new("pages", params, Results::Pages(table)));
    }
    let nu = valuation(&BigInt::from(n), p) as usize;
    let seq = BocksteinSequence::new(r, n, p, nu + 1)?;
    let mut rows = Vec::new();
    for k in 1..=nu + 1 {
        let page = seq.page(k);
        let ident = verify_page_identification(&seq, k);
        let closed = closed_form_page(r, n, p, k)?;
        rows.push(PageRow {
            k,
            differential_ranks: page.differential_ranks(),
            dims: page.dims,
            expected_dims: ident.expected_dims,
            identified: ident.passed,
            closed_form_agrees: compare_pages(&seq, &closed).agree,
        });
    }
    let table = PagesTable {
        p,
        nu,
        note: None,
        pages: rows,
    };
    Ok(ReportDocument::new("pages", params, Results::Pages(table)))
}

/// Jobs for a single statement. Without `-p`, prime-dependent statements run
/// at 2 and 3 (page identification: at every supported prime dividing `n`, or
/// 2 if there is none); without `-k`, at every page up to `ν + 1`.
pub fn statement_jobs(
    statement: Statement,
    r: usize,
    n: usize,
    p: Option<u64>,
    k: Option<usize>,
) -> Vec<(Statement, Parameters)> {
    let base = Parameters::new(r, n);
    let mut jobs = Vec::new();
    match statement {
        Statement::Annihilation | Statement::Filtration => jobs.push((statement, base)),
        Statement::ExampleDeg4 => jobs.push((statement, Parameters::new(r, 4))),
        Statement::Cartier | Statement::CoupleMorphism | Statement::FrobeniusIso => {
            let primes = p.map_or_else(|| vec![2, 3], |p| vec![p]);
            jobs.extend(primes.into_iter().map(|p| (statement, base.with_prime(p))));
        }
        Statement::PageIdentification => {
            let primes = p.map_or_else(
                || {
                    let divisors: Vec<u64> = (2..=MAX_PRIME)
                        .filter(|&q| is_prime(q) && n > 0 && (n as u64).is_multiple_of(q))
                        .collect();
                    if divisors.is_empty() {
                        vec![2]
                    } else {
                        divisors
                    }
                },
                |p| vec![p],
            );
            for q in primes {
                let pages = match k {
                    Some(k) => vec![k],
                    None if n == 0 => vec![1],
                    None => (1..=valuation(&BigInt::from(n), q) as usize + 1).collect(),
                };
                jobs.extend(pages.into_iter().map(|k| (statement, base.with_prime(q).with_page(k))));
            }
        }
    }
    jobs.sort();
    jobs
}

pub fn verify_statement(
    statement: Statement,
    r: usize,
    n: usize,
    p: Option<u64>,
    k: Option<usize>,
) -> Result<ReportDocument, CliError> {
    let verifier = Verifier::new();
    let reports = statement_jobs(statement, r, n, p, k)
        .into_iter()
        .map(|(st, params)| verifier.run(st, params))
        .collect::<Result<Vec<_>, _>>()?;
    let params = DocParameters {
        p,
        k,
        statement: Some(statement.id().to_string()),
        ..DocParameters::new(r, n)
    };
    Ok(ReportDocument::new("verify", params, Results::Verify(reports)))
}

/// Every statement over `1 ≤ r' ≤ r`, `0 ≤ n' ≤ n`.
pub fn verify_all(r: usize, n: usize) -> ReportDocument {
    let reports = Verifier::new().run_all(&sweep_jobs(r, n));
    let params = DocParameters {
        all: true,
        ..DocParameters::new(r, n)
    };
    ReportDocument::new("verify", params, Results::Verify(reports))
}

pub fn basis(r: usize, n: usize, i: usize) -> ReportDocument {
    let piece = basis_of(r, n, i);
    let elements: Vec<BasisRow> = piece
        .elements
        .iter()
        .enumerate()
        .map(|(index, e)| BasisRow {
            index,
            alpha: e.alpha.clone(),
            wedge: e.wedge.clone(),
            form: e.to_string(),
        })
        .collect();
    let params = DocParameters {
        i: Some(i),
        ..DocParameters::new(r, n)
    };
    let table = BasisTable {
        dim: elements.len(),
        elements,
    };
    ReportDocument::new("basis", params, Results::Basis(table))
}
