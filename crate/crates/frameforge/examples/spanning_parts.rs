//! Spanning partitions: a frame whose lower bound dominates its largest
//! norm splits into floor(A / max ||f_i||^2) spanning parts.
//!
//! The algorithm follows the existence proof: try to split into independent
//! parts (then counting forces them to span); otherwise the infeasibility
//! witness hands over a subspace, the witness partition is the answer, and
//! the recursion on the orthogonal complement certifies it.
//!
//! Run with: cargo run --example spanning_parts

use frameforge::{harmonic_frame, scaled_union_of_bases, spanning_partition, Ctx, Frame, Tolerance};

fn main() -> frameforge::Result<()> {
    let ctx = Ctx::float(Tolerance::default());

    // Two scaled copies of the standard basis: 2 spanning parts.
    let f = scaled_union_of_bases(2, 2);
    let (p, cert) = spanning_partition(&f, ctx)?;
    println!(
        "scaled_union_of_bases(2, 2): {} spanning parts: {:?}",
        p.part_count(),
        p.parts()
    );
    assert!(cert.verified);

    // harmonic(2, 6) has norms^2 = 1/3: three spanning parts.
    let f = harmonic_frame(2, 6)?;
    let (p, _) = spanning_partition(&f, ctx)?;
    println!("harmonic(2, 6): {} spanning parts: {:?}", p.part_count(), p.parts());

    // A family with duplicates that defeats the independent route and
    // falls through to the subspace-witness branch.
    let s = 0.5f64.sqrt();
    let f = Frame::new(
        2,
        vec![
            vec![s, 0.0],
            vec![s, 0.0],
            vec![0.0, s],
            vec![0.0, s],
            vec![s, 0.0],
            vec![0.0, s],
        ],
    )?;
    let (p, cert) = spanning_partition(&f, ctx)?;
    println!(
        "duplicated scaled basis (lower bound 1.5, norms^2 = 1/2): {} spanning parts",
        p.part_count()
    );
    for part in &cert.parts {
        println!("  part {} = {:?}: spans = {}", part.part, part.indices, part.spans);
    }
    Ok(())
}
