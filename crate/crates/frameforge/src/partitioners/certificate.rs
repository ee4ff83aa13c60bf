//! Partition certificates: every boolean verdict backed by the rank or
//! eigenvalue that reproduces it.
//!
//! Serialized as a versioned JSON document with sorted parameter keys, so
//! identical runs produce identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::frames::{spans_subset, Frame};
use crate::linalg::Ctx;
use crate::partition::IndexPartition;

pub const CERTIFICATE_SCHEMA_VERSION: &str = "1";

/// Per-part facts, all recomputed from scratch.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PartReport {
    /// 1-based part number.
    pub part: usize,
    pub indices: Vec<usize>,
    pub size: usize,
    /// Dimension of the part's span.
    pub dim: usize,
    pub independent: bool,
    pub spans: bool,
    /// Dimension of the complement's span.
    pub complement_dim: usize,
    pub complement_spans: bool,
    /// Top eigenvalue of the Gram compression on this part; present for
    /// Parseval input, where it backs `complement_spans`.
    pub eigenvalue: Option<f64>,
}

/// What a pipeline claims about its output partition.
#[derive(Clone, Debug, PartialEq)]
pub enum TheoremClaim {
    /// Every part's complement spans.
    SpanningComplements { delta: f64, r: usize },
    /// Every part is linearly independent.
    IndependentParts { r: usize, k: usize },
    /// Every part spans.
    SpanningParts { r: usize, lower_bound: f64 },
    /// Part 1 independent, parts 2.. independent and spanning.
    IndependentSpanning { r: usize },
    /// Paving pipeline: every part's complement spans and every compressed
    /// Gram norm is at most `1 - delta/2`.
    Paving { r: usize, delta: f64 },
    /// No claim: report the facts only.
    Generic,
}

impl TheoremClaim {
    pub fn tag(&self) -> &'static str {
        match self {
            TheoremClaim::SpanningComplements { .. } => "t1",
            TheoremClaim::IndependentParts { .. } => "p5",
            TheoremClaim::SpanningParts { .. } => "p6",
            TheoremClaim::IndependentSpanning { .. } => "cor5",
            TheoremClaim::Paving { .. } => "paving",
            TheoremClaim::Generic => "generic",
        }
    }

    pub fn params(&self) -> Map<String, Value> {
        let mut m = Map::new();
        match *self {
            TheoremClaim::SpanningComplements { delta, r } => {
                m.insert("delta".into(), Value::from(delta));
                m.insert("r".into(), Value::from(r));
            }
            TheoremClaim::IndependentParts { r, k } => {
                m.insert("r".into(), Value::from(r));
                m.insert("k".into(), Value::from(k));
            }
            TheoremClaim::SpanningParts { r, lower_bound } => {
                m.insert("r".into(), Value::from(r));
                m.insert("lower_bound".into(), Value::from(lower_bound));
            }
            TheoremClaim::IndependentSpanning { r } => {
                m.insert("r".into(), Value::from(r));
            }
            TheoremClaim::Paving { r, delta } => {
                m.insert("r".into(), Value::from(r));
                m.insert("delta".into(), Value::from(delta));
            }
            TheoremClaim::Generic => {}
        }
        m
    }

    /// Does the recomputed evidence support the claim?
    pub fn holds(&self, parts: &[PartReport]) -> bool {
        match self {
            TheoremClaim::SpanningComplements { .. } | TheoremClaim::Paving { .. } => {
                parts.iter().all(|p| p.complement_spans)
            }
            TheoremClaim::IndependentParts { .. } => parts.iter().all(|p| p.independent),
            TheoremClaim::SpanningParts { .. } => parts.iter().all(|p| p.spans),
            TheoremClaim::IndependentSpanning { .. } => {
                parts.iter().all(|p| {
                    if p.part == 1 {
                        p.independent
                    } else {
                        p.independent && p.spans
                    }
                })
            }
            TheoremClaim::Generic => true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ToleranceReport {
    pub rank_rel: f64,
    pub eig_abs: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PartitionCertificate {
    pub schema_version: String,
    pub theorem: String,
    pub params: Map<String, Value>,
    pub parts: Vec<PartReport>,
    pub tolerances: ToleranceReport,
    pub scalar_mode: String,
    /// Whether the recomputed evidence supports the theorem claim.
    pub verified: bool,
}

impl PartitionCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn part(&self, p: usize) -> &PartReport {
        &self.parts[p - 1]
    }
}

/// Recomputes every per-part fact from scratch and stamps the claim.
/// Never trusts caller-provided evidence.
pub fn verify_partition(
    f: &Frame,
    p: &IndexPartition,
    claim: TheoremClaim,
    ctx: Ctx,
) -> Result<PartitionCertificate> {
    if p.len() != f.len() {
        return Err(Error::InvalidShape(
            "partition does not cover the frame's index set".into(),
        ));
    }
    let mut parts = Vec::with_capacity(p.part_count());
    for part_no in 1..=p.part_count() {
        let indices = p.part(part_no);
        let complement = p.complement_of_part(part_no);
        let dim = f.subset_rank(&indices, ctx)?;
        let comp_dim = f.subset_rank(&complement, ctx)?;
        // Dual-route complement verdict; its evidence is the compression on
        // this part. Falls back to rank-only on non-Parseval input.
        let (complement_spans, comp_ev) = spans_subset(f, &complement, ctx)?;
        debug_assert_eq!(comp_ev.subset_rank, comp_dim);
        let (spans, _) = spans_subset(f, &indices, ctx)?;
        parts.push(PartReport {
            part: part_no,
            size: indices.len(),
            dim,
            independent: dim == indices.len(),
            spans,
            complement_dim: comp_dim,
            complement_spans,
            eigenvalue: comp_ev.compressed_top_eig,
            indices,
        });
    }
    let verified = claim.holds(&parts);
    let mut params = claim.params();
    // The ambient dimension and vector count back the spans/independence
    // booleans, so the certificate carries them explicitly.
    params.insert("ambient_dim".into(), Value::from(f.dim()));
    params.insert("vectors".into(), Value::from(f.len()));
    Ok(PartitionCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION.into(),
        theorem: claim.tag().into(),
        params,
        parts,
        tolerances: ToleranceReport {
            rank_rel: ctx.tol.rank_rel,
            eig_abs: ctx.tol.eig_abs,
        },
        scalar_mode: ctx.mode.as_str().into(),
        verified,
    })
}
