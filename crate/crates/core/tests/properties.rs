use derham_core::bockstein::pages;
use derham_core::cohomology::{integral_cohomology, modp_cohomology};
use derham_core::derham::{
    basis, cartier_lift_matrix, cartier_rep_matrix, d_matrix, frobenius_matrix, koszul_matrix,
    substitution_map,
};
use derham_core::lattice::{graded_piece_dim, homology_at, snf, FgAbGroup, Hermite, IntMatrix};
use derham_core::modp::FpMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |xs| {
            IntMatrix::from_fn(r, c, |i, j| BigInt::from(xs[i * c + j]))
        })
    })
}

/// A unimodular matrix built from elementary column operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            continue;
        }
        let op = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else if i == a && j == b {
                BigInt::from(c)
            } else {
                BigInt::zero()
            }
        });
        m = &m * &op;
    }
    m
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

fn small_r_n() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 0usize..=7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_factorization(m in small_matrix(5, 5)) {
        let (s, u, v) = snf(&m);
        prop_assert_eq!(&(&u * &m) * &v, s.clone());
        prop_assert_eq!(u.determinant().abs(), BigInt::one());
        prop_assert_eq!(v.determinant().abs(), BigInt::one());
        let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s.row(i)[i].clone()).collect();
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    prop_assert!(s.row(i)[j].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            prop_assert!(divides(&w[0], &w[1]), "{} does not divide {}", w[0], w[1]);
        }
    }

    #[test]
    fn hermite_form_preserves_the_lattice(m in small_matrix(4, 5)) {
        let herm = Hermite::new(&m);
        prop_assert_eq!(&m * &herm.u, herm.h.clone());
        prop_assert_eq!(herm.u.determinant().abs(), BigInt::one());
        for j in herm.rank()..herm.h.cols() {
            prop_assert!(herm.h.column(j).iter().all(Zero::is_zero));
        }
        for (j, &row) in herm.pivot_rows.iter().enumerate() {
            prop_assert!(herm.h.row(row)[j].is_positive());
            for above in 0..row {
                prop_assert!(herm.h.row(above)[j].is_zero());
            }
        }
    }

    /// A complex with known homology, disguised by unimodular base changes.
    #[test]
    fn homology_of_disguised_complexes(
        torsion in proptest::collection::vec(1i64..=12, 0..4),
        free in 0usize..3,
        extra_in in 0usize..2,
        extra_out in 0usize..2,
        ops in proptest::collection::vec((0usize..16, 0usize..16, -3i64..=3), 0..12),
    ) {
        // C0 = Z^{t + extra_in} → C1 = Z^{t + free + extra_out} → C2 = Z^{extra_out}
        // d0 = diag(torsion) on the first t coordinates, d1 maps the last
        // extra_out coordinates isomorphically; H1 = ⊕ Z/t ⊕ Z^free.
        let t = torsion.len();
        let c0 = t + extra_in;
        let c1 = t + free + extra_out;
        let c2 = extra_out;
        let d0 = IntMatrix::from_fn(c1, c0, |i, j| {
            if i == j && i < t { BigInt::from(torsion[i]) } else { BigInt::zero() }
        });
        let d1 = IntMatrix::from_fn(c2, c1, |i, j| {
            if j == t + free + i { BigInt::one() } else { BigInt::zero() }
        });
        let g1 = unimodular(c1, &ops);
        let g1_inv = {
            let (s, u, v) = snf(&g1);
            prop_assert_eq!(&s, &IntMatrix::identity(c1));
            &v * &u
        };
        let d0 = &g1 * &d0;
        let d1 = &d1 * &g1_inv;
        prop_assert!((&d1 * &d0).is_zero());
        let h = homology_at(&d0, &d1).unwrap();
        let mut factors: Vec<i64> = torsion.iter().copied().filter(|&x| x > 1).collect();
        factors.sort_unstable();
        let expected = FgAbGroup::from_invariants(
            free,
            &factors.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(),
        );
        prop_assert_eq!(h.group().free_rank(), free);
        let got = FgAbGroup::from_invariants(0, h.group().invariant_factors());
        let want = FgAbGroup::from_invariants(0, expected.invariant_factors());
        prop_assert_eq!(got.invariant_factors(), want.invariant_factors());
        prop_assert_eq!(h.group().order(), expected.order());
    }

    #[test]
    fn cyclic_orders_match_smith(orders in proptest::collection::vec(1i64..=200, 0..6)) {
        let orders: Vec<BigInt> = orders.into_iter().map(BigInt::from).collect();
        let fast = FgAbGroup::from_cyclic_orders(&orders);
        let slow = FgAbGroup::new(IntMatrix::diagonal(&orders));
        prop_assert_eq!(fast.invariant_factors(), slow.invariant_factors());
        prop_assert_eq!(fast.free_rank(), slow.free_rank());
    }

    #[test]
    fn graded_dims_are_non_increasing(
        factors in proptest::collection::vec(1i64..=64, 0..5),
        free in 0usize..2,
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let factors: Vec<BigInt> = factors.into_iter().map(BigInt::from).collect();
        let g = FgAbGroup::from_cyclic_orders(&factors);
        let g = FgAbGroup::from_invariants(free, g.invariant_factors());
        let dims: Vec<usize> = (1..=8).map(|k| graded_piece_dim(&g, p, k)).collect();
        for w in dims.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        // Each Z/p^a contributes to pieces 1..=a, each Z to every piece.
        for (k, &dim) in dims.iter().enumerate() {
            let pk = BigInt::from(p).pow(k as u32 + 1);
            let count = factors.iter().filter(|f| (*f % &pk).is_zero()).count() + free;
            prop_assert_eq!(dim, count);
        }
    }

    #[test]
    fn d_and_koszul_square_to_zero((r, n) in small_r_n(), i in 0usize..4) {
        let d = &d_matrix(r, n, i + 1) * &d_matrix(r, n, i);
        prop_assert!(d.is_zero());
        if i >= 1 {
            let k = &koszul_matrix(r, n, i) * &koszul_matrix(r, n, i + 1);
            prop_assert!(k.is_zero());
        }
    }

    #[test]
    fn euler_identity((r, n) in small_r_n(), i in 0usize..4) {
        let dim = basis(r, n, i).dim();
        let mut sum = &koszul_matrix(r, n, i + 1) * &d_matrix(r, n, i);
        if i >= 1 {
            sum = sum.add(&(&d_matrix(r, n, i - 1) * &koszul_matrix(r, n, i)));
        }
        prop_assert_eq!(sum, IntMatrix::scalar(dim, &BigInt::from(n)));
    }

    #[test]
    fn frobenius_is_a_chain_map(
        r in 1usize..=3, n in 0usize..=4, i in 0usize..3,
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let pn = p as usize * n;
        let lhs = &d_matrix(r, pn, i) * &frobenius_matrix(r, n, i, p);
        let rhs = &frobenius_matrix(r, n, i + 1, p) * &d_matrix(r, n, i);
        prop_assert_eq!(lhs, rhs);
        let lhs = &d_matrix(r, pn, i) * &cartier_lift_matrix(r, n, i, p);
        let rhs = (&cartier_lift_matrix(r, n, i + 1, p) * &d_matrix(r, n, i)).scaled(&BigInt::from(p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cartier_columns_are_mod_p_cocycles(
        r in 1usize..=3, n in 0usize..=4, i in 0usize..4,
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let d = FpMatrix::from_int(&d_matrix(r, p as usize * n, i), p);
        prop_assert!((&d * &cartier_rep_matrix(r, n, i, p)).is_zero());
    }

    #[test]
    fn substitution_commutes_with_d_and_koszul(
        (s, r) in (1usize..=3, 1usize..=3),
        entries in proptest::collection::vec(-2i64..=2, 9),
        n in 0usize..=4,
        i in 0usize..3,
    ) {
        let f = IntMatrix::from_fn(s, r, |a, b| BigInt::from(entries[a * 3 + b]));
        let lhs = &d_matrix(s, n, i) * &substitution_map(&f, n, i);
        let rhs = &substitution_map(&f, n, i + 1) * &d_matrix(r, n, i);
        prop_assert_eq!(lhs, rhs);
        let lhs = &koszul_matrix(s, n, i + 1) * &substitution_map(&f, n, i + 1);
        let rhs = &substitution_map(&f, n, i) * &koszul_matrix(r, n, i + 1);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `C⁻¹` is natural on cohomology: substituting before or after differ by a
    /// mod-p coboundary.
    #[test]
    fn inverse_cartier_is_natural(
        (s, r) in (1usize..=2, 1usize..=2),
        entries in proptest::collection::vec(-2i64..=2, 4),
        n in 1usize..=3,
        i in 0usize..3,
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let pn = p as usize * n;
        let f = IntMatrix::from_fn(s, r, |a, b| BigInt::from(entries[a * 2 + b]));
        let before = FpMatrix::from_int(&(&substitution_map(&f, pn, i) * &cartier_lift_matrix(r, n, i, p)), p);
        let after = FpMatrix::from_int(&(&cartier_lift_matrix(s, n, i, p) * &substitution_map(&f, n, i)), p);
        let target = modp_cohomology(s, pn, p).unwrap();
        let Some(deg) = target.degree(i) else { return Ok(()); };
        for j in 0..before.cols() {
            let a = deg.coords(&before.column(j)).expect("cocycle");
            let b = deg.coords(&after.column(j)).expect("cocycle");
            prop_assert_eq!(a, b, "column {}", j);
        }
    }

    /// `dim E_{k+1}ⁱ = dim E_kⁱ − rank d_kⁱ − rank d_kⁱ⁻¹`, and `E_1` obeys the
    /// universal coefficient formula.
    #[test]
    fn page_rank_bookkeeping(
        r in 1usize..=3, n in 1usize..=8,
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let all = pages(r, n, p, Some(3)).unwrap();
        for w in all.windows(2) {
            let ranks = w[0].differential_ranks();
            for i in 0..w[0].dims.len() {
                let incoming = if i == 0 { 0 } else { ranks[i - 1] };
                prop_assert_eq!(w[1].dims[i], w[0].dims[i] - ranks[i] - incoming);
            }
        }
        let h = integral_cohomology(r, n);
        for i in 0..=h.top() {
            let next = if i < h.top() { graded_piece_dim(&h.group(i + 1), p, 1) } else { 0 };
            prop_assert_eq!(all[0].dims[i], graded_piece_dim(&h.group(i), p, 1) + next);
        }
    }
}
