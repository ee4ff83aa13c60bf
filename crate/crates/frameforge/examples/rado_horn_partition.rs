//! Matroid partitioning with two-armed outcomes.
//!
//! A family splits into R independent sets exactly when no subset E has
//! |E| > R * rank(E). The partition engine either produces the split or the
//! violating subset, here shown on the linear matroid (independence of the
//! vectors) and the cospanning matroid (independence = the complement still
//! spans).
//!
//! Run with: cargo run --example rado_horn_partition

use frameforge::{
    harmonic_frame, matroid_partition, Ctx, Frame, MatroidOracle, PartitionOutcome, Tolerance,
};

fn main() -> frameforge::Result<()> {
    let ctx = Ctx::float(Tolerance::default());

    // Three copies of e1 and one e2: two independent sets are impossible.
    let jammed = Frame::new(
        2,
        vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ],
    )?;
    let oracle = MatroidOracle::linear(&jammed, ctx)?;
    match matroid_partition(&oracle, 2)? {
        PartitionOutcome::Partitioned(_) => println!("unexpected: found a partition"),
        PartitionOutcome::Infeasible(w) => println!(
            "{{e1, e1, e1, e2}} into 2 independent sets: infeasible, witness E = {:?} with |E| = {} > 2 * rank(E) = {}",
            w.subset,
            w.subset.len(),
            2 * w.rank
        ),
    }

    // The same family into 3 parts works.
    match matroid_partition(&oracle, 3)? {
        PartitionOutcome::Partitioned(p) => {
            println!("...but 3 parts succeed: {:?}", p.parts());
        }
        PartitionOutcome::Infeasible(_) => println!("unexpected witness"),
    }

    // Cospanning matroid on the Mercedes-Benz frame: a set is independent
    // when the vectors outside it still span, so three singletons give
    // three spanning complements.
    let mb = harmonic_frame(2, 3)?;
    let dual = MatroidOracle::cospanning(&mb, ctx)?;
    match matroid_partition(&dual, 3)? {
        PartitionOutcome::Partitioned(p) => {
            println!("\nMercedes-Benz under the cospanning matroid, 3 parts:");
            for (k, part) in p.parts().iter().enumerate() {
                let complement: Vec<usize> = (0..3).filter(|i| !part.contains(i)).collect();
                let rank = mb.subset_rank(&complement, ctx)?;
                println!(
                    "  part {} = {:?}, complement {:?} has rank {} (spans: {})",
                    k + 1,
                    part,
                    complement,
                    rank,
                    rank == 2
                );
            }
        }
        PartitionOutcome::Infeasible(_) => println!("unexpected witness"),
    }
    Ok(())
}
