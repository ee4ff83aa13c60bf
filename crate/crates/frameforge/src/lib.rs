//! Partitioning finite frames into spanning and/or linearly independent
//! subsets, with verifiable certificates.
//!
//! A frame is a finite spanning family of vectors; a Parseval frame is one
//! whose Gram matrix is an orthogonal projection. This crate implements the
//! constructive side of the theory of splitting such families:
//!
//! * the Gram-matrix spanning criterion (a subfamily spans iff 1 is not an
//!   eigenvalue of the complementary Gram compression) and its
//!   spanning/independence complementarity, in [`frames`];
//! * matroid partitioning with Rado-Horn witnesses, maximal-dimension
//!   partitions, dependency chains, and the subspace witness for
//!   infeasible instances, in [`matroids`];
//! * four partition pipelines with recomputed certificates (spanning
//!   complements, equal-norm independent parts, spanning parts, one
//!   independent part plus disjoint bases), in [`partitioners`];
//! * a desk-scale paving search on hollow Gram matrices and the chain from
//!   a paving to spanning complements, in [`paving`].
//!
//! Every boolean the library emits is backed by a rank or an eigenvalue
//! that is recomputed from scratch, and every rank decision can be re-run
//! in exact rational arithmetic ([`linalg::exact`]) when the frame carries
//! rational entries.
//!
//! The `examples/` directory holds one runnable walk-through per
//! capability; `frameforge` is the batch CLI over the same pipelines.

pub mod cli;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod matroids;
pub mod partition;
pub mod partitioners;
pub mod paving;

pub use error::{Error, Result};
pub use frames::{
    complementarity_check, gram, gram_split, harmonic_frame, is_parseval, random_parseval,
    scaled_union_of_bases, spans_subset, validate_frame, Frame, FrameBounds, GramMatrix,
    SpanEvidence,
};
pub use linalg::{orthoprojector, Ctx, Mat, ScalarMode, Tolerance};
pub use matroids::{
    cospanning_rank, find_chains, linear_rank, matroid_partition, max_dim_partition,
    subspace_witness, Chain, ChainLink, MatroidKind, MatroidOracle, PartitionOutcome,
    RadoHornViolation, SubspaceWitness,
};
pub use partition::IndexPartition;
pub use partitioners::{
    equal_norm_independent_partition, independent_spanning_partition,
    spanning_complement_partition, spanning_partition, verify_partition, PartReport,
    PartitionCertificate, TheoremClaim,
};
pub use paving::{
    hollow_gram, pave, paving_spanning_pipeline, AnnealConfig, PaveMethod, PavingResult,
};
