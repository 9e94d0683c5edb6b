//! One line per acceptance criterion. Runs with its own `main` so the lines are
//! printed even when the target passes.
//!
//! Criterion 8 (graded pieces of the p-adic filtration equal cocycle dimensions)
//! is false as literally stated at a few points of the sweep. It prints FAIL;
//! the target itself fails only if the set of failing points changes or if the
//! corrected recursive relation stops holding.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use derham_core::cohomology::{integral_cohomology, modp_cohomology};
use derham_core::derham::d_matrix;
use derham_core::lattice::FgAbGroup;
use derham_core::theorems::{sweep, sweep_jobs, Parameters, Statement, VerificationReport, Verifier};
use num_bigint::BigInt;
use num_traits::Signed;

const RMAX: usize = 3;
const NMAX: usize = 12;

struct Line {
    criterion: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn failures(reports: &[VerificationReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} {}", r.statement, r.parameters))
        .collect()
}

fn summary(reports: &[VerificationReport]) -> (bool, String) {
    let bad = failures(reports);
    if bad.is_empty() {
        (true, format!("{} reports pass", reports.len()))
    } else {
        (false, format!("{} of {} fail: {}", bad.len(), reports.len(), bad.join("; ")))
    }
}

fn run(v: &Verifier, jobs: &[(Statement, Parameters)]) -> Vec<VerificationReport> {
    v.run_all(jobs)
}

fn jobs_where(f: impl Fn(Statement, &Parameters) -> bool) -> Vec<(Statement, Parameters)> {
    sweep_jobs(RMAX, NMAX)
        .into_iter()
        .filter(|(s, p)| f(*s, p))
        .collect()
}

fn small_prime(p: &Parameters) -> bool {
    matches!(p.p, Some(2) | Some(3))
}

fn group(factors: &[u64]) -> FgAbGroup {
    FgAbGroup::from_invariants(0, &factors.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>())
}

fn same(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.free_rank() == b.free_rank() && a.invariant_factors() == b.invariant_factors()
}

fn criterion_1(v: &Verifier) -> Line {
    let start = Instant::now();
    let jobs: Vec<_> = (1..=RMAX)
        .flat_map(|r| (0..=NMAX).map(move |n| (Statement::Annihilation, Parameters::new(r, n))))
        .collect();
    let reports = run(v, &jobs);
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = summary(&reports);
    Line {
        criterion: 1,
        title: "Euler identity and n-annihilation, r <= 3, n <= 12",
        passed: ok && secs < 60.0,
        detail: format!("{detail} in {secs:.2}s"),
    }
}

fn criterion_2() -> Line {
    // The one-variable complex is Z -> Z, x^n |-> n x^{n-1} dx: the 1x1 matrix is the oracle.
    let mut bad = Vec::new();
    for n in 1..=50usize {
        let d = d_matrix(1, n, 0);
        let oracle = group(&[u64::try_from(d.row(0)[0].abs()).unwrap()]);
        let h = integral_cohomology(1, n);
        if !same(&h.group(1), &oracle) || !h.group(0).is_trivial() {
            bad.push(n);
        }
    }
    Line {
        criterion: 2,
        title: "H^1 = Z/n in one variable, 1 <= n <= 50",
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "50 degrees agree".into() } else { format!("mismatch at n = {bad:?}") },
    }
}

fn criterion_3(v: &Verifier) -> Line {
    let reports = run(v, &jobs_where(|s, p| s == Statement::Cartier && small_prime(p)));
    let (ok, detail) = summary(&reports);
    let mut nonzero = Vec::new();
    for r in 1..=RMAX {
        for m in 1..=NMAX {
            for p in [2u64, 3] {
                if !(m as u64).is_multiple_of(p) && modp_cohomology(r, m, p).unwrap().dims().iter().any(|&d| d > 0) {
                    nonzero.push((r, m, p));
                }
            }
        }
    }
    Line {
        criterion: 3,
        title: "Cartier isomorphism, p in {2,3}, pn <= 12; mod-p vanishing for p not dividing m",
        passed: ok && nonzero.is_empty() && !reports.is_empty(),
        detail: format!("{detail}; nonvanishing: {nonzero:?}"),
    }
}

fn criterion_4(v: &Verifier) -> Line {
    let reports = run(v, &jobs_where(|s, p| s == Statement::PageIdentification && small_prime(p)));
    let (ok, detail) = summary(&reports);
    let golden: Vec<Vec<usize>> = derham_core::bockstein::pages(2, 4, 2, None)
        .unwrap()
        .into_iter()
        .map(|pg| pg.dims)
        .collect();
    let golden_ok = golden == vec![vec![3, 4, 1], vec![2, 2, 0], vec![0, 0, 0]];
    Line {
        criterion: 4,
        title: "E_k = Omega_{n/p^k} (x) F_p for k <= nu, E_k = 0 beyond",
        passed: ok && golden_ok,
        detail: format!("{detail}; (2,4,2) pages {golden:?}"),
    }
}

fn criterion_5(v: &Verifier) -> Line {
    let reports = run(v, &jobs_where(|s, _| s == Statement::PageIdentification));
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !(r.check("closed_form_agreement") == Some(true)))
        .map(|r| r.parameters.to_string())
        .collect();
    Line {
        criterion: 5,
        title: "derived-couple pages agree with closed-form pages on the sweep",
        passed: bad.is_empty() && !reports.is_empty(),
        detail: if bad.is_empty() {
            format!("{} pages agree", reports.len())
        } else {
            format!("disagree at {}", bad.join("; "))
        },
    }
}

fn criterion_6(v: &Verifier) -> Line {
    let reports = run(
        v,
        &jobs_where(|s, p| s == Statement::CoupleMorphism && small_prime(p) && p.r <= 2 && p.n >= 1),
    );
    let (ok, detail) = summary(&reports);
    Line {
        criterion: 6,
        title: "Frobenius morphism of couples and divisibility, r <= 2, pn <= 12",
        passed: ok && !reports.is_empty(),
        detail,
    }
}

fn criterion_7(v: &Verifier) -> Line {
    let reports = run(
        v,
        &jobs_where(|s, p| s == Statement::FrobeniusIso && small_prime(p) && p.r <= 2 && p.n >= 1),
    );
    let (ok, detail) = summary(&reports);
    let golden = v.frobenius_iso(1, 2, 2).unwrap();
    let golden_ok = golden.passed()
        && same(&integral_cohomology(1, 2).group(1), &group(&[2]))
        && same(&integral_cohomology(1, 4).group(1), &group(&[4]));
    Line {
        criterion: 7,
        title: "Frobenius is an isomorphism on p-primary parts onto p*H",
        passed: ok && golden_ok,
        detail: format!("{detail}; (1,2,2) Z/2 -> 2*(Z/4): {}", if golden_ok { "ok" } else { "wrong" }),
    }
}

const KNOWN_LITERAL_FAILURES: [(usize, usize); 4] = [(2, 8), (2, 12), (3, 8), (3, 12)];

/// Returns the line and whether the outcome is the expected one.
fn criterion_8(v: &Verifier) -> (Line, bool) {
    let reports = run(v, &jobs_where(|s, _| s == Statement::Filtration));
    let literal_bad: BTreeSet<(usize, usize)> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| (r.parameters.r, r.parameters.n))
        .collect();
    let recursive_ok = reports.iter().all(|r| {
        ["recursive_graded_dims", "recursive_reconstruction"]
            .iter()
            .all(|c| r.check(c) == Some(true))
    });
    let mut golden_ok = same(&integral_cohomology(2, 4).group(2), &group(&[2]));
    for r in 1..=3usize {
        let mut f = vec![2u64; r * (r - 1) / 2];
        f.extend(std::iter::repeat_n(4, r));
        golden_ok &= same(&integral_cohomology(r, 4).group(1), &group(&f));
    }
    let literal_ok = literal_bad.is_empty();
    let expected: BTreeSet<_> = KNOWN_LITERAL_FAILURES.into_iter().collect();
    let detail = format!(
        "literal graded = cocycles fails at (r,n) in {:?} of {} cases; corrected recursion \
         g_k^i = dim Z^i(Omega_{{n/p^k}}) - g_{{k+1}}^{{i+1}} {}; degree-4 goldens {}",
        literal_bad,
        reports.len(),
        if recursive_ok { "holds everywhere" } else { "FAILS" },
        if golden_ok { "ok" } else { "wrong" },
    );
    let line = Line {
        criterion: 8,
        title: "filtration graded pieces equal cocycles of Omega_{n/p^k}",
        passed: literal_ok && recursive_ok && golden_ok,
        detail,
    };
    (line, literal_bad == expected && recursive_ok && golden_ok)
}

fn criterion_9() -> Line {
    let start = Instant::now();
    let a = serde_json::to_string(&sweep(RMAX, NMAX)).unwrap();
    let b = serde_json::to_string(&sweep(RMAX, NMAX)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Line {
        criterion: 9,
        title: "repeated full sweeps serialize to identical JSON",
        passed: a == b && secs < 600.0,
        detail: format!("{} bytes, two sweeps in {secs:.2}s", a.len()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let v = Verifier::new();
    let (line8, eight_as_expected) = criterion_8(&v);
    let lines = vec![
        criterion_1(&v),
        criterion_2(),
        criterion_3(&v),
        criterion_4(&v),
        criterion_5(&v),
        criterion_6(&v),
        criterion_7(&v),
        line8,
        criterion_9(),
    ];
    let mut unexpected = Vec::new();
    for line in &lines {
        let status = if line.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {status}: {} ({})", line.criterion, line.title, line.detail);
        let expected = if line.criterion == 8 { eight_as_expected } else { line.passed };
        if !expected {
            unexpected.push(line.criterion);
        }
    }
    println!("acceptance run took {:.2}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        println!("acceptance: outcomes as expected (criterion 8 fails as literally stated, see README)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
