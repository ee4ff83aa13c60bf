//! The Gram-matrix spanning criterion on the Mercedes-Benz frame.
//!
//! For a Parseval frame with Gram matrix G and index set B, the subfamily
//! {f_i : i in B} spans exactly when 1 is not an eigenvalue of the
//! compression of G onto the complement of B. This example computes both
//! that eigenvalue and a plain rank for every subset of the Mercedes-Benz
//! frame, splits the Gram under a projector, and runs the
//! spanning/independence complementarity check.
//!
//! Run with: cargo run --example spanning_criterion

use frameforge::{
    complementarity_check, gram, gram_split, harmonic_frame, orthoprojector, spans_subset,
    validate_frame, Ctx, Mat, Tolerance,
};

fn main() -> frameforge::Result<()> {
    let tol = Tolerance::default();
    let ctx = Ctx::float(tol);

    let mb = harmonic_frame(2, 3)?;
    let bounds = validate_frame(&mb, tol)?;
    println!(
        "Mercedes-Benz frame: 3 vectors in R^2, frame bounds ({:.3}, {:.3})",
        bounds.lower, bounds.upper
    );

    let g = gram(&mb);
    println!("\nGram matrix (diagonal 2/3, off-diagonal -1/3):");
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| format!("{:+.4}", g.mat.get(i, j))).collect();
        println!("  [{}]", row.join(", "));
    }

    println!("\nSpanning verdicts for every subset (rank route and eigenvalue route):");
    for mask in 0u32..8 {
        let subset: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
        let (spans, ev) = spans_subset(&mb, &subset, ctx)?;
        println!(
            "  B = {:?}: spans = {}  (rank {}/{}, top eigenvalue of complement compression {:.4})",
            subset,
            spans,
            ev.subset_rank,
            ev.ambient_dim,
            ev.compressed_top_eig.unwrap_or(f64::NAN),
        );
    }

    // Split the Gram under the projector onto the first coordinate axis.
    let p = orthoprojector(&Mat::from_rows(vec![vec![1.0, 0.0]])?, tol);
    let (g_full, r_part, q_part) = gram_split(&mb, &p, tol)?;
    let dev = g_full.sub(&r_part.add(&q_part)).max_abs();
    println!("\nGram split under the projector onto e1: max |G - (R + Q)| = {dev:.2e}");
    println!("  R and Q are again projections; the split certifies the Parseval geometry.");

    // Complementarity: projections of a basis span the range of P exactly
    // when the complementary (I - P) images are independent.
    let diag = orthoprojector(&Mat::from_rows(vec![vec![1.0, 1.0]])?, tol);
    let (spans, independent) = complementarity_check(2, &diag, &[0], tol)?;
    println!(
        "\nComplementarity for P onto span{{(1,1)}}, B = {{0}}: spans = {spans}, independent = {independent}"
    );
    Ok(())
}
