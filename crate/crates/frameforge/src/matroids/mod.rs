//! Matroid rank oracles over frame index sets and the constructive
//! partitioning machinery built on them.
//!
//! Two matroids matter here. The *linear* matroid calls an index set
//! independent when the corresponding vectors are. The *cospanning* (dual)
//! matroid calls it independent when the complementary vectors still span;
//! its rank comes from the duality identity
//! `rank*(E) = |E| + dim span {f_j : j not in E} - N`.
//!
//! Partitioning into independent sets is the Rado-Horn problem: a family
//! splits into `R` independent sets exactly when `|E| <= R * rank(E)` for
//! every subset `E`. The algorithms here either produce the partition or a
//! violating subset, never a bare failure.

mod chains;
mod engine;
mod witness;

pub use chains::{find_chains, Chain, ChainLink};
pub use witness::{subspace_witness, SubspaceWitness};

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{Ctx, ScalarMode};
use crate::partition::IndexPartition;

/// `dim span {f_i : i in e}`, decided by the context's arithmetic.
pub fn linear_rank(f: &Frame, e: &[usize], ctx: Ctx) -> Result<usize> {
    let mut idx = e.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != e.len() {
        return Err(Error::InvalidShape("duplicate index in subset".into()));
    }
    if idx.last().is_some_and(|&i| i >= f.len()) {
        return Err(Error::InvalidShape("index out of range".into()));
    }
    f.subset_rank(&idx, ctx)
}

/// Rank of `e` in the cospanning matroid:
/// `|e| + dim span {f_j : j not in e} - N`. Requires a spanning frame.
pub fn cospanning_rank(f: &Frame, e: &[usize], ctx: Ctx) -> Result<usize> {
    let all: Vec<usize> = (0..f.len()).collect();
    let full = f.subset_rank(&all, ctx)?;
    if full < f.dim() {
        return Err(Error::NotAFrame {
            lambda_min: 0.0,
        });
    }
    let mut idx = e.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != e.len() {
        return Err(Error::InvalidShape("duplicate index in subset".into()));
    }
    if idx.last().is_some_and(|&i| i >= f.len()) {
        return Err(Error::InvalidShape("index out of range".into()));
    }
    let mut mask = vec![false; f.len()];
    for &i in &idx {
        mask[i] = true;
    }
    let complement: Vec<usize> = (0..f.len()).filter(|&i| !mask[i]).collect();
    let comp_rank = f.subset_rank(&complement, ctx)?;
    Ok(idx.len() + comp_rank - f.dim())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatroidKind {
    Linear,
    Cospanning,
}

/// Rank oracle over `{0, .., M-1}` backed by a frame.
pub struct MatroidOracle<'a> {
    frame: &'a Frame,
    kind: MatroidKind,
    ctx: Ctx,
}

impl<'a> MatroidOracle<'a> {
    pub fn linear(frame: &'a Frame, ctx: Ctx) -> Result<Self> {
        if ctx.mode == ScalarMode::Exact && !frame.has_exact() {
            return Err(Error::ExactUnavailable);
        }
        Ok(MatroidOracle {
            frame,
            kind: MatroidKind::Linear,
            ctx,
        })
    }

    /// The cospanning oracle needs the frame to span.
    pub fn cospanning(frame: &'a Frame, ctx: Ctx) -> Result<Self> {
        if ctx.mode == ScalarMode::Exact && !frame.has_exact() {
            return Err(Error::ExactUnavailable);
        }
        let all: Vec<usize> = (0..frame.len()).collect();
        if frame.subset_rank(&all, ctx)? < frame.dim() {
            return Err(Error::NotAFrame { lambda_min: 0.0 });
        }
        Ok(MatroidOracle {
            frame,
            kind: MatroidKind::Cospanning,
            ctx,
        })
    }

    pub fn kind(&self) -> MatroidKind {
        self.kind
    }

    pub fn ground_size(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &Frame {
        self.frame
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    /// Matroid rank of a (sorted, deduplicated) index set.
    pub fn rank(&self, set: &[usize]) -> usize {
        match self.kind {
            MatroidKind::Linear => self
                .frame
                .subset_rank(set, self.ctx)
                .expect("oracle construction validated the mode"),
            MatroidKind::Cospanning => {
                let mut mask = vec![false; self.frame.len()];
                for &i in set {
                    mask[i] = true;
                }
                let complement: Vec<usize> =
                    (0..self.frame.len()).filter(|&i| !mask[i]).collect();
                let comp_rank = self
                    .frame
                    .subset_rank(&complement, self.ctx)
                    .expect("oracle construction validated the mode");
                set.len() + comp_rank - self.frame.dim()
            }
        }
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank(set) == set.len()
    }
}

/// A subset violating the Rado-Horn condition: `|subset| > parts * rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadoHornViolation {
    pub subset: Vec<usize>,
    pub rank: usize,
    pub parts: usize,
}

/// Two-armed outcome of a partition attempt: never a bare failure.
#[derive(Clone, Debug)]
pub enum PartitionOutcome {
    Partitioned(IndexPartition),
    Infeasible(RadoHornViolation),
}

/// Partitions the oracle's ground set into `m_parts` independent sets, or
/// returns a violating subset. Elements are inserted in ascending order and
/// each augmenting path is the lexicographically smallest shortest one, so
/// the outcome is deterministic.
pub fn matroid_partition(oracle: &MatroidOracle, m_parts: usize) -> Result<PartitionOutcome> {
    if m_parts == 0 {
        return Err(Error::InvalidShape("need at least one part".into()));
    }
    let mut eng = engine::Engine::new(oracle, m_parts);
    for x in 0..oracle.ground_size() {
        match eng.insert(x)? {
            engine::Insert::Placed => {}
            engine::Insert::Blocked(subset) => {
                let rank = oracle.rank(&subset);
                debug_assert!(subset.len() > m_parts * rank);
                return Ok(PartitionOutcome::Infeasible(RadoHornViolation {
                    subset,
                    rank,
                    parts: m_parts,
                }));
            }
        }
    }
    let parts: Vec<Vec<usize>> = eng.parts().to_vec();
    Ok(PartitionOutcome::Partitioned(IndexPartition::from_parts(
        oracle.ground_size(),
        &parts,
    )?))
}

/// Maximum-coverage run of the same engine: packs as many elements as
/// possible into `m_parts` independent sets, returning the engine parts,
/// the blocked elements, and (when anything was blocked) the deficiency
/// set `E` balancing `|ground \ E| + m_parts * rank(E) = packed`. The
/// packed count equals the `m_parts`-fold union rank of the ground set.
pub(crate) fn matroid_union_cover(
    oracle: &MatroidOracle,
    m_parts: usize,
) -> Result<(Vec<Vec<usize>>, Vec<usize>, Option<Vec<usize>>)> {
    let mut eng = engine::Engine::new(oracle, m_parts);
    let blocked = eng.run_cover()?;
    let deficiency = if blocked.is_empty() {
        None
    } else {
        // Maximality certificate must balance.
        let witness = eng.deficiency_witness()?;
        let rank = oracle.rank(&witness);
        let assigned = oracle.ground_size() - blocked.len();
        if oracle.ground_size() - witness.len() + m_parts * rank != assigned {
            return Err(Error::InternalContractViolation(
                "union cover maximality certificate does not balance".into(),
            ));
        }
        Some(witness)
    };
    Ok((eng.parts().to_vec(), blocked, deficiency))
}

/// Partition maximizing the sum of per-part span dimensions, normalized so
/// parts `2..=m` are linearly independent and every leftover element sits in
/// part 1.
///
/// Sum-maximality gives the componentwise maximality property: any partition
/// that weakly dominates this one in every per-part dimension has the same
/// dimension in every part. Zero vectors are loops: they always land in
/// part 1.
pub fn max_dim_partition(f: &Frame, m_parts: usize, ctx: Ctx) -> Result<IndexPartition> {
    if m_parts == 0 {
        return Err(Error::InvalidShape("need at least one part".into()));
    }
    let oracle = MatroidOracle::linear(f, ctx)?;
    let (mut parts, blocked, _) = matroid_union_cover(&oracle, m_parts)?;
    let packed: usize = parts.iter().map(Vec::len).sum();
    for x in blocked {
        let pos = parts[0].binary_search(&x).unwrap_err();
        parts[0].insert(pos, x);
    }
    let partition = IndexPartition::from_parts(f.len(), &parts)?;

    // Postconditions: parts 2..=m independent, dimension sum equals the
    // union rank (= packed element count).
    let mut dim_sum = 0usize;
    for p in 1..=m_parts {
        let part = partition.part(p);
        let rank = f.subset_rank(&part, ctx)?;
        dim_sum += rank;
        if p >= 2 && rank != part.len() {
            return Err(Error::InternalContractViolation(format!(
                "max-dim partition part {p} is dependent"
            )));
        }
    }
    if dim_sum != packed {
        return Err(Error::InternalContractViolation(format!(
            "max-dim partition dimension sum {dim_sum} != union rank {packed}"
        )));
    }
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{harmonic_frame, Frame};
    use crate::linalg::Tolerance;

    fn ctx() -> Ctx {
        Ctx::float(Tolerance::default())
    }

    fn frame(dim: usize, rows: &[&[f64]]) -> Frame {
        Frame::new(dim, rows.iter().map(|r| r.to_vec()).collect())
            .unwrap()
            .with_dyadic_exact()
    }

    /// Exhaustive Rado-Horn check over all subsets: the independent oracle
    /// for `matroid_partition`.
    pub(crate) fn rado_horn_feasible_bruteforce(
        oracle: &MatroidOracle,
        m_parts: usize,
    ) -> bool {
        let n = oracle.ground_size();
        assert!(n <= 20);
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if subset.len() > m_parts * oracle.rank(&subset) {
                return false;
            }
        }
        true
    }

    #[test]
    fn linear_rank_examples() {
        let f = frame(2, &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(linear_rank(&f, &[0, 1, 2], ctx()).unwrap(), 2);
        assert_eq!(linear_rank(&f, &[], ctx()).unwrap(), 0);
        let mb = harmonic_frame(2, 3).unwrap();
        assert_eq!(linear_rank(&mb, &[0, 2], ctx()).unwrap(), 2);
        assert!(linear_rank(&f, &[0, 0], ctx()).is_err());
    }

    #[test]
    fn cospanning_rank_examples() {
        let mb = harmonic_frame(2, 3).unwrap();
        assert_eq!(cospanning_rank(&mb, &[0], ctx()).unwrap(), 1);
        let basis = frame(2, &[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(cospanning_rank(&basis, &[0], ctx()).unwrap(), 0);
        assert_eq!(cospanning_rank(&basis, &[], ctx()).unwrap(), 0);
        // Non-spanning family is rejected.
        let thin = frame(2, &[&[1.0, 0.0], &[2.0, 0.0]]);
        assert!(matches!(
            cospanning_rank(&thin, &[0], ctx()),
            Err(Error::NotAFrame { .. })
        ));
    }

    /// Brute-force dual rank: the largest `F` inside `e` whose complement
    /// spans.
    fn cospanning_rank_bruteforce(f: &Frame, e: &[usize]) -> usize {
        let n = f.len();
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !subset.iter().all(|i| e.contains(i)) || subset.len() <= best {
                continue;
            }
            let complement: Vec<usize> =
                (0..n).filter(|i| !subset.contains(i)).collect();
            if f.subset_rank(&complement, ctx()).unwrap() == f.dim() {
                best = subset.len();
            }
        }
        best
    }

    #[test]
    fn cospanning_rank_matches_bruteforce() {
        let fams: Vec<Frame> = vec![
            harmonic_frame(2, 4).unwrap(),
            harmonic_frame(2, 5).unwrap(),
            harmonic_frame(3, 5).unwrap(),
            frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]),
        ];
        for f in &fams {
            let n = f.len();
            for mask in 0u32..(1 << n) {
                let e: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                assert_eq!(
                    cospanning_rank(f, &e, ctx()).unwrap(),
                    cospanning_rank_bruteforce(f, &e),
                    "family of {n}, subset {e:?}"
                );
            }
        }
    }

    #[test]
    fn oracle_axioms_spot_checks() {
        let f = frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        for oracle in [
            MatroidOracle::linear(&f, ctx()).unwrap(),
            MatroidOracle::cospanning(&f, ctx()).unwrap(),
        ] {
            assert_eq!(oracle.rank(&[]), 0);
            let n = oracle.ground_size();
            // Monotonicity, unit growth, and submodularity on sampled triples.
            for mask in 0u32..(1 << n) {
                let a: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let ra = oracle.rank(&a);
                assert!(ra <= a.len());
                for x in 0..n {
                    if a.contains(&x) {
                        continue;
                    }
                    let mut ax = a.clone();
                    ax.push(x);
                    ax.sort_unstable();
                    let rax = oracle.rank(&ax);
                    assert!(rax == ra || rax == ra + 1);
                    for y in 0..n {
                        if y == x || a.contains(&y) {
                            continue;
                        }
                        let mut ay = a.clone();
                        ay.push(y);
                        ay.sort_unstable();
                        let mut axy = ax.clone();
                        axy.push(y);
                        axy.sort_unstable();
                        // Submodularity: r(A+x) + r(A+y) >= r(A+x+y) + r(A).
                        assert!(oracle.rank(&ax) + oracle.rank(&ay) >= oracle.rank(&axy) + ra);
                    }
                }
            }
        }
    }

    #[test]
    fn matroid_partition_examples() {
        // {e1, e2, e1, e2} into two independent pairs.
        let f = frame(2, &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let oracle = MatroidOracle::linear(&f, ctx()).unwrap();
        match matroid_partition(&oracle, 2).unwrap() {
            PartitionOutcome::Partitioned(p) => {
                for part in p.parts() {
                    assert_eq!(f.subset_rank(&part, ctx()).unwrap(), part.len());
                }
            }
            PartitionOutcome::Infeasible(_) => panic!("feasible instance"),
        }

        // {e1, e1, e1} cannot split into two independent sets.
        let f = frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]]);
        let oracle = MatroidOracle::linear(&f, ctx()).unwrap();
        match matroid_partition(&oracle, 2).unwrap() {
            PartitionOutcome::Partitioned(_) => panic!("infeasible instance"),
            PartitionOutcome::Infeasible(w) => {
                assert_eq!(w.subset, vec![0, 1, 2]);
                assert_eq!(w.rank, 1);
                assert!(w.subset.len() > w.parts * w.rank);
            }
        }

        // Mercedes-Benz under the cospanning oracle: three singletons.
        let mb = harmonic_frame(2, 3).unwrap();
        let oracle = MatroidOracle::cospanning(&mb, ctx()).unwrap();
        match matroid_partition(&oracle, 3).unwrap() {
            PartitionOutcome::Partitioned(p) => {
                for part in p.parts() {
                    assert_eq!(part.len(), 1);
                    let comp: Vec<usize> =
                        (0..3).filter(|i| !part.contains(i)).collect();
                    assert_eq!(mb.subset_rank(&comp, ctx()).unwrap(), 2);
                }
            }
            PartitionOutcome::Infeasible(_) => panic!("feasible instance"),
        }
    }

    #[test]
    fn matroid_partition_agrees_with_bruteforce_on_seeded_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _case in 0..40 {
            let n = rng.gen_range(1..=3usize);
            let m = rng.gen_range(1..=7usize);
            let vectors: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_range(-1i32..=1) as f64).collect())
                .collect();
            let f = Frame::new(n, vectors).unwrap().with_dyadic_exact();
            for parts in 1..=3usize {
                let oracle = MatroidOracle::linear(&f, ctx()).unwrap();
                let expect = rado_horn_feasible_bruteforce(&oracle, parts);
                match matroid_partition(&oracle, parts).unwrap() {
                    PartitionOutcome::Partitioned(p) => {
                        assert!(expect, "algorithm found a partition on an infeasible instance");
                        for part in p.parts() {
                            assert!(oracle.is_independent(&part));
                        }
                    }
                    PartitionOutcome::Infeasible(w) => {
                        assert!(!expect, "algorithm failed on a feasible instance");
                        assert!(w.subset.len() > parts * w.rank);
                        // The witness rank must be honest.
                        assert_eq!(oracle.rank(&w.subset), w.rank);
                    }
                }
            }
        }
    }

    #[test]
    fn max_dim_partition_examples() {
        // {e1, e1, e2}, two parts: dimensions (2, 1).
        let f = frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let p = max_dim_partition(&f, 2, ctx()).unwrap();
        assert_eq!(p.part(1), vec![0, 2]);
        assert_eq!(p.part(2), vec![1]);

        // Orthonormal basis, one part.
        let b = frame(2, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let p = max_dim_partition(&b, 1, ctx()).unwrap();
        assert_eq!(p.part(1), vec![0, 1]);
        assert_eq!(b.subset_rank(&p.part(1), ctx()).unwrap(), 2);

        // {e1, e1, e1, e2}: dimension sum 3, part 2 independent.
        let f = frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let p = max_dim_partition(&f, 2, ctx()).unwrap();
        let d1 = f.subset_rank(&p.part(1), ctx()).unwrap();
        let d2 = f.subset_rank(&p.part(2), ctx()).unwrap();
        assert_eq!(d1 + d2, 3);
        assert_eq!(d2, p.part(2).len());
    }

    /// Exhaustive maximum of the dimension sum over all m-part assignments.
    pub(crate) fn max_dim_sum_bruteforce(f: &Frame, m_parts: usize) -> usize {
        let n = f.len();
        let mut best = 0usize;
        let mut assign = vec![0usize; n];
        loop {
            let mut total = 0usize;
            for p in 0..m_parts {
                let part: Vec<usize> = (0..n).filter(|&i| assign[i] == p).collect();
                total += f.subset_rank(&part, ctx()).unwrap();
            }
            best = best.max(total);
            // Odometer increment.
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                assign[i] += 1;
                if assign[i] < m_parts {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn max_dim_partition_matches_exhaustive_maximum() {
        let fams: Vec<Frame> = vec![
            frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
            frame(2, &[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
            frame(
                2,
                &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[1.0, 1.0]],
            ),
            frame(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        ];
        for f in &fams {
            for m in 1..=3usize {
                let p = max_dim_partition(f, m, ctx()).unwrap();
                let total: usize = (1..=m)
                    .map(|j| f.subset_rank(&p.part(j), ctx()).unwrap())
                    .sum();
                assert_eq!(total, max_dim_sum_bruteforce(f, m));
            }
        }
    }

    #[test]
    fn max_dim_partition_satisfies_dependence_propagation() {
        // In a maximal partition, a vector dependent inside its own part
        // lies in the span of every part.
        let f = frame(
            2,
            &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[1.0, 1.0]],
        );
        for m in 1..=3usize {
            let p = max_dim_partition(&f, m, ctx()).unwrap();
            for k in 0..f.len() {
                let part = p.part(p.part_of(k));
                let rest: Vec<usize> = part.iter().copied().filter(|&i| i != k).collect();
                let dependent = f.subset_rank(&rest, ctx()).unwrap()
                    == f.subset_rank(&part, ctx()).unwrap();
                if !dependent {
                    continue;
                }
                for j in 1..=m {
                    let other = p.part(j);
                    let with: Vec<usize> = {
                        let mut v = other.clone();
                        if !v.contains(&k) {
                            v.push(k);
                            v.sort_unstable();
                        }
                        v
                    };
                    assert_eq!(
                        f.subset_rank(&with, ctx()).unwrap(),
                        f.subset_rank(&other, ctx()).unwrap(),
                        "dependent vector {k} escapes part {j}"
                    );
                }
            }
        }
    }
}
