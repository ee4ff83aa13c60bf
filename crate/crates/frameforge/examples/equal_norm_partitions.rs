//! Equal-norm Parseval frames: r + 1 independent sets, and the sharper
//! split into one independent set plus r bases.
//!
//! With M = rN + k vectors of equal norm, the Rado-Horn bound gives r + 1
//! independent parts (r spanning parts of size N when k = 0). On top of
//! that, the chain-exchange search produces parts 2..=r+1 that are bases
//! while part 1 stays independent.
//!
//! Run with: cargo run --example equal_norm_partitions

use frameforge::{
    equal_norm_independent_partition, harmonic_frame, independent_spanning_partition, Ctx,
    Tolerance,
};

fn main() -> frameforge::Result<()> {
    let ctx = Ctx::float(Tolerance::default());

    for (n, m) in [(2usize, 4usize), (2, 5), (3, 7), (4, 9)] {
        let f = harmonic_frame(n, m)?;
        let r = m / n;
        let k = m % n;
        let (p, cert) = equal_norm_independent_partition(&f, ctx)?;
        let sizes: Vec<usize> = cert.parts.iter().map(|q| q.size).collect();
        println!(
            "harmonic({n}, {m}) = {r}*{n} + {k}: {} independent parts, sizes {:?}",
            p.part_count(),
            sizes
        );

        let (_, cert) = independent_spanning_partition(&f, r, ctx)?;
        let bases = cert.parts[1..]
            .iter()
            .all(|q| q.independent && q.spans && q.size == n);
        println!(
            "  refined: part 1 independent of size {}, parts 2..={} all bases: {}",
            cert.part(1).size,
            r + 1,
            bases
        );
    }
    Ok(())
}
