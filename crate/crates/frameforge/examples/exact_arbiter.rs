//! Exact rational arithmetic as the arbiter behind floating-point ranks.
//!
//! Frames built from rational entries (or read from CSV, where every
//! decimal literal is a rational) carry an exact twin. Every rank-backed
//! verdict can then be recomputed with fraction-free elimination and must
//! match the floating-point route.
//!
//! Run with: cargo run --example exact_arbiter

use frameforge::linalg::exact::parse_q;
use frameforge::{
    matroid_partition, spans_subset, Ctx, Frame, MatroidOracle, PartitionOutcome, ScalarMode,
    Tolerance,
};

fn main() -> frameforge::Result<()> {
    let tol = Tolerance::default();
    let q = |s: &str| parse_q(s).unwrap();

    // A rational Parseval-like family: harmonic(2, 4) has entries +-1/2.
    let f = Frame::from_rational(
        2,
        vec![
            vec![q("1/2"), q("1/2")],
            vec![q("1/2"), q("-1/2")],
            vec![q("1/2"), q("1/2")],
            vec![q("1/2"), q("-1/2")],
        ],
    )?;

    println!("frame has exact entries: {}", f.has_exact());
    for subset in [vec![0usize, 1], vec![0, 2], vec![1, 3], vec![0, 1, 2]] {
        let (float_verdict, _) = spans_subset(&f, &subset, Ctx::float(tol))?;
        let (exact_verdict, _) = spans_subset(&f, &subset, Ctx::exact(tol))?;
        println!(
            "subset {subset:?}: spans (float) = {float_verdict}, spans (exact) = {exact_verdict}"
        );
        assert_eq!(float_verdict, exact_verdict);
    }

    // Rado-Horn witnesses carry exact counts in exact mode.
    let dup = Frame::from_rational(
        2,
        vec![
            vec![q("1"), q("0")],
            vec![q("1"), q("0")],
            vec![q("1"), q("0")],
            vec![q("0"), q("1")],
        ],
    )?;
    let oracle = MatroidOracle::linear(&dup, Ctx::exact(tol))?;
    if let PartitionOutcome::Infeasible(w) = matroid_partition(&oracle, 2)? {
        println!(
            "\nexact witness: E = {:?}, |E| = {} > 2 * rank(E) = {} (mode: {})",
            w.subset,
            w.subset.len(),
            2 * w.rank,
            ScalarMode::Exact.as_str()
        );
    }
    Ok(())
}
