//! Constructing the infeasibility witness: maximal-dimension partition,
//! dependency chains, and the overfilled subspace.
//!
//! When a family cannot split into m independent sets, there is a partition
//! and a subspace S with: (a) each part's vectors inside S span S, (b) the
//! indices landing in S outnumber m * dim S, and (c) each part's vectors
//! outside S are independent. The construction walks dependency chains out
//! of the dependent core of part 1.
//!
//! Run with: cargo run --example subspace_witness

use frameforge::{find_chains, max_dim_partition, subspace_witness, Ctx, Frame, Tolerance};

fn main() -> frameforge::Result<()> {
    let ctx = Ctx::float(Tolerance::default());

    // Seven vectors in R^2: e1 three times, e2 three times, e1 + e2.
    let f = Frame::new(
        2,
        vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ],
    )?;

    let md = max_dim_partition(&f, 2, ctx)?;
    println!("maximal-dimension partition into 2 parts:");
    for (k, part) in md.parts().iter().enumerate() {
        let dim = f.subset_rank(part, ctx)?;
        println!("  part {} = {:?} (span dimension {})", k + 1, part, dim);
    }

    // Chains out of the dependent indices of part 1.
    let part1 = md.part(1);
    let mut seeds = Vec::new();
    for &a in &part1 {
        let rest: Vec<usize> = part1.iter().copied().filter(|&i| i != a).collect();
        if f.subset_rank(&rest, ctx)? == f.subset_rank(&part1, ctx)? {
            seeds.push(a);
        }
    }
    let (closure, chains) = find_chains(&f, &md, &seeds, ctx)?;
    println!("\ndependent core of part 1: {seeds:?}");
    println!("chain closure reaches {closure:?}");
    for chain in &chains {
        let hops: Vec<String> = chain
            .links
            .iter()
            .map(|l| format!("({}, part {})", l.index, l.part))
            .collect();
        println!("  minimal chain to {}: {}", chain.end(), hops.join(" -> "));
    }

    let w = subspace_witness(&f, 2, ctx)?;
    println!(
        "\nwitness: S = span of vectors {:?} (dim {}), J = {:?}",
        w.basis_indices, w.subspace_dim, w.violating_set
    );
    println!(
        "counting violation: |J| / dim S = {} / {} > 2, so no 2-part independent split exists",
        w.ratio.0, w.ratio.1
    );
    Ok(())
}
