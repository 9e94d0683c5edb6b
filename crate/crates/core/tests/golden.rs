//! Cohomology groups checked against values computed independently (Smith
//! normal form of the full differential matrices in a separate computer
//! algebra system, or by hand for the small cases).

use derham_core::bockstein::pages;
use derham_core::cohomology::integral_cohomology;
use derham_core::lattice::FgAbGroup;
use num_bigint::BigInt;

/// Invariant factors from `(order, multiplicity)` pairs, smallest first.
fn factors(spec: &[(u64, usize)]) -> Vec<BigInt> {
    spec.iter()
        .flat_map(|&(d, m)| std::iter::repeat_n(BigInt::from(d), m))
        .collect()
}

fn assert_groups(r: usize, n: usize, expected: &[(usize, Vec<BigInt>)]) {
    let h = integral_cohomology(r, n);
    for i in 0..=h.top() {
        let g = h.group(i);
        let want = expected
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, f)| f.clone())
            .unwrap_or_default();
        let want = FgAbGroup::from_invariants(0, &want);
        assert_eq!(g.free_rank(), 0, "r={r} n={n} i={i}");
        assert_eq!(
            g.invariant_factors(),
            want.invariant_factors(),
            "r={r} n={n} i={i}"
        );
    }
}

#[test]
fn one_variable() {
    for n in 1..=20u64 {
        assert_groups(1, n as usize, &[(1, vec![BigInt::from(n)])]);
    }
    let h = integral_cohomology(1, 0);
    assert_eq!(h.group(0).free_rank(), 1);
}

#[test]
fn degree_four() {
    assert_groups(2, 4, &[(1, factors(&[(2, 1), (4, 2)])), (2, factors(&[(2, 1)]))]);
    assert_groups(
        3,
        4,
        &[
            (1, factors(&[(2, 3), (4, 3)])),
            (2, factors(&[(2, 3)])),
        ],
    );
}

#[test]
fn two_variables_degree_eight() {
    assert_groups(
        2,
        8,
        &[(1, factors(&[(2, 2), (4, 1), (8, 2)])), (2, factors(&[(2, 2), (4, 1)]))],
    );
}

#[test]
fn two_variables_degree_twelve() {
    assert_groups(
        2,
        12,
        &[
            (1, factors(&[(2, 2), (6, 1), (12, 4)])),
            (2, factors(&[(2, 2), (6, 1), (12, 2)])),
        ],
    );
}

#[test]
fn three_variables_degree_eight() {
    assert_groups(
        3,
        8,
        &[
            (1, factors(&[(2, 9), (4, 3), (8, 3)])),
            (2, factors(&[(2, 12), (4, 3)])),
            (3, factors(&[(2, 3)])),
        ],
    );
}

#[test]
fn page_dimensions() {
    let dims: Vec<Vec<usize>> = pages(2, 4, 2, None).unwrap().into_iter().map(|pg| pg.dims).collect();
    assert_eq!(dims, vec![vec![3, 4, 1], vec![2, 2, 0], vec![0, 0, 0]]);
    let dims: Vec<Vec<usize>> = pages(1, 3, 2, None).unwrap().into_iter().map(|pg| pg.dims).collect();
    assert_eq!(dims, vec![vec![0, 0]]);
}
