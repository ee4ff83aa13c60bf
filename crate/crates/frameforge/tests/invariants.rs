//! Property tests for the structural invariants: projector algebra, exact
//! versus floating-point rank agreement, the dual-route spanning criterion,
//! Gram splitting, complementarity, and certificate idempotence.

use proptest::prelude::*;

use frameforge::linalg::exact::{QMat, Q};
use frameforge::{
    complementarity_check, gram_split, harmonic_frame, is_parseval, orthoprojector,
    random_parseval, scaled_union_of_bases, spans_subset, verify_partition, Ctx, Frame, Mat,
    TheoremClaim, Tolerance,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Strategy: a small rational matrix as (numerator, denominator) pairs with
/// |p| <= 1000 and 1 <= q <= 1000, with an extra exactly-dependent row
/// appended half of the time (a small rational multiple of the first row).
fn rational_matrix() -> impl Strategy<Value = (Vec<Vec<(i32, u32)>>, Option<(i32, u32)>)> {
    let entry = (-1000i32..=1000, 1u32..=1000);
    let rows = prop::collection::vec(
        prop::collection::vec(entry, 1..=5usize),
        1..=5usize,
    )
    .prop_filter("rectangular", |rows| {
        rows.iter().all(|r| r.len() == rows[0].len())
    });
    (rows, prop::option::of((-20i32..=20, 1u32..=20)))
}

fn build_pair(rows: &[Vec<(i32, u32)>], dep: Option<(i32, u32)>) -> (Mat, QMat) {
    let mut qrows: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&(p, q)| Q::new(p.into(), q.into()))
                .collect()
        })
        .collect();
    if let Some((p, q)) = dep {
        let mult = Q::new(p.into(), q.into());
        let extra: Vec<Q> = qrows[0].iter().map(|x| x * &mult).collect();
        qrows.push(extra);
    }
    let frows: Vec<Vec<f64>> = qrows
        .iter()
        .map(|r| r.iter().map(frameforge::linalg::exact::q_to_f64).collect())
        .collect();
    (
        Mat::from_rows(frows).unwrap(),
        QMat::from_rows(qrows).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Float rank with the default threshold agrees with exact
    /// fraction-free elimination on rational inputs of bounded height.
    #[test]
    fn rank_agrees_between_float_and_exact((rows, dep) in rational_matrix()) {
        let (mat, qmat) = build_pair(&rows, dep);
        prop_assert_eq!(mat.rank(tol()), qmat.rank());
    }

    /// Every computed projector is symmetric and idempotent within
    /// 10 * eig_abs, and its top eigenvalue is 0 or 1.
    #[test]
    fn projectors_are_projections(
        rows in prop::collection::vec(
            prop::collection::vec(-8.0f64..8.0, 2..=6usize),
            1..=6usize,
        ).prop_filter("rectangular", |rows| rows.iter().all(|r| r.len() == rows[0].len())),
        duplicate in any::<bool>(),
    ) {
        let mut rows = rows;
        if duplicate {
            rows.push(rows[0].clone());
        }
        let a = Mat::from_rows(rows).unwrap();
        let p = orthoprojector(&a, tol());
        let slack = 10.0 * tol().eig_abs;
        prop_assert!(p.matmul(&p).sub(&p).max_abs() <= slack);
        prop_assert!(p.asymmetry() <= slack);
        let top = p.top_eigenvalue_sym(tol()).unwrap();
        prop_assert!(top.abs() <= slack || (top - 1.0).abs() <= slack);
        // The projector's rank tracks the input's rank.
        prop_assert_eq!(p.rank(tol()), a.rank(tol()));
    }

    /// spectral_norm(A) equals the square root of the top eigenvalue of
    /// the PSD matrix A^T A.
    #[test]
    fn spectral_norm_cross_check(
        rows in prop::collection::vec(
            prop::collection::vec(-10.0f64..10.0, 1..=6usize),
            1..=6usize,
        ).prop_filter("rectangular", |rows| rows.iter().all(|r| r.len() == rows[0].len())),
    ) {
        let a = Mat::from_rows(rows).unwrap();
        let direct = a.spectral_norm();
        let via_gram = a
            .transpose()
            .matmul(&a)
            .top_eigenvalue_sym(tol())
            .unwrap()
            .max(0.0)
            .sqrt();
        prop_assert!((direct - via_gram).abs() <= 10.0 * tol().eig_abs);
    }

    /// Dual-route spanning verdicts agree on every generated Parseval
    /// frame and random subset (the eigenvalue criterion as a property).
    #[test]
    fn spanning_routes_agree(seed in 0u64..5_000, n in 2usize..=5, extra in 0usize..=10, mask in any::<u32>()) {
        let m = n + 1 + extra;
        let f = random_parseval(n, m, seed).unwrap();
        let subset: Vec<usize> = (0..m).filter(|&i| mask >> (i % 32) & 1 == 1).collect();
        // Any CriterionMismatch fails the property.
        let (_, ev) = spans_subset(&f, &subset, Ctx::float(tol())).unwrap();
        prop_assert!(ev.parseval);
    }

    /// Parseval trace identity: the norms of any generated Parseval frame
    /// sum to the dimension.
    #[test]
    fn parseval_trace_identity(seed in 0u64..1000, n in 1usize..=5, extra in 0usize..=8, r in 1usize..=4) {
        for f in [
            random_parseval(n, n + extra, seed).unwrap(),
            harmonic_frame(n, n + extra).unwrap(),
            scaled_union_of_bases(n, r),
        ] {
            prop_assert!(is_parseval(&f, tol()));
            let total: f64 = f.norms_sq().iter().sum();
            prop_assert!((total - n as f64).abs() <= 1e-10);
        }
    }

    /// Gram splitting under any computed projector: G = R + Q entrywise
    /// within 1e-10 and all three matrices idempotent.
    #[test]
    fn gram_split_property(seed in 0u64..1000, n in 2usize..=4, extra in 0usize..=6, k in 0usize..=3) {
        let f = random_parseval(n, n + extra, seed).unwrap();
        // Projector onto the span of k rows of a seeded random matrix.
        let p = if k == 0 {
            Mat::zeros(n, n)
        } else {
            let g = random_parseval(n, n.max(k), seed ^ 0xABCD).unwrap();
            let rows: Vec<Vec<f64>> = (0..k.min(n)).map(|i| g.vector(i).to_vec()).collect();
            orthoprojector(&Mat::from_rows(rows).unwrap(), tol())
        };
        let (g, r, q) = gram_split(&f, &p, tol()).unwrap();
        prop_assert!(g.sub(&r.add(&q)).max_abs() <= 1e-10);
    }

    /// Complementarity: for every projector on R^n (n <= 6) and subset,
    /// the two booleans agree (a CriterionMismatch fails the property).
    #[test]
    fn complementarity_booleans_agree(seed in 0u64..2000, n in 1usize..=6, k in 0usize..=6, mask in any::<u8>()) {
        let p = if k == 0 {
            Mat::zeros(n, n)
        } else {
            let g = random_parseval(n, n.max(k), seed).unwrap();
            let rows: Vec<Vec<f64>> = (0..k.min(n)).map(|i| g.vector(i).to_vec()).collect();
            orthoprojector(&Mat::from_rows(rows).unwrap(), tol())
        };
        let b: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let (spans, independent) = complementarity_check(n, &p, &b, tol()).unwrap();
        prop_assert_eq!(spans, independent);
    }
}

/// Certificates are idempotent: re-verifying a pipeline's partition
/// reproduces the construction-time certificate bit for bit, in both modes.
#[test]
fn certificate_verification_is_idempotent() {
    let f = harmonic_frame(2, 4).unwrap().with_dyadic_exact();
    for ctx in [Ctx::float(tol()), Ctx::exact(tol())] {
        let (p, cert) = frameforge::equal_norm_independent_partition(&f, ctx).unwrap();
        let again = verify_partition(&f, &p, TheoremClaim::IndependentParts { r: 2, k: 0 }, ctx)
            .unwrap();
        assert_eq!(cert.to_json(), again.to_json());
    }

    let f = scaled_union_of_bases(3, 3).with_dyadic_exact();
    for ctx in [Ctx::float(tol()), Ctx::exact(tol())] {
        let (p, cert) = frameforge::spanning_partition(&f, ctx).unwrap();
        let again = verify_partition(
            &f,
            &p,
            TheoremClaim::SpanningParts {
                r: 3,
                lower_bound: cert.params["lower_bound"].as_f64().unwrap(),
            },
            ctx,
        )
        .unwrap();
        assert_eq!(cert.to_json(), again.to_json());
    }
}

/// Counting consistency: when independent parts jointly admit a spanning
/// repartition into the same number of sets, every part must itself span.
#[test]
fn independent_parts_with_spanning_repartition_span() {
    // Exhaustive oracle for "a spanning r-partition of 0..m exists".
    fn spanning_repartition_exists(f: &Frame, r: usize) -> bool {
        let m = f.len();
        assert!(m <= 12);
        let ctx = Ctx::float(tol());
        let mut assign = vec![0usize; m];
        loop {
            let mut all_span = true;
            for p in 0..r {
                let part: Vec<usize> = (0..m).filter(|&i| assign[i] == p).collect();
                if f.subset_rank(&part, ctx).unwrap() != f.dim() {
                    all_span = false;
                    break;
                }
            }
            if all_span {
                return true;
            }
            let mut i = 0;
            loop {
                if i == m {
                    return false;
                }
                assign[i] += 1;
                if assign[i] < r {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
        }
    }

    let ctx = Ctx::float(tol());
    let mut tested = 0usize;
    for (n, seed) in [(2usize, 3u64), (2, 9), (3, 5), (3, 11)] {
        let f = random_parseval(n, 2 * n, seed).unwrap();
        let oracle = frameforge::MatroidOracle::linear(&f, ctx).unwrap();
        let frameforge::PartitionOutcome::Partitioned(p) =
            frameforge::matroid_partition(&oracle, 2).unwrap()
        else {
            continue;
        };
        if !spanning_repartition_exists(&f, 2) {
            continue;
        }
        for part in p.parts() {
            assert_eq!(
                f.subset_rank(&part, ctx).unwrap(),
                n,
                "independent part {part:?} must span (n = {n}, seed = {seed})"
            );
        }
        tested += 1;
    }
    assert!(tested >= 2, "too few instances exercised the property");
}
