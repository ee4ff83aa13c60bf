//! Index partitions: the universal output object of every pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total assignment of ground-set indices `0..len` to parts `1..=part_count`.
///
/// Parts may be empty where a theorem permits; part numbering is meaningful
/// (part 1 is the dump/leftover part in the max-dimension machinery).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPartition {
    part_count: usize,
    /// `assignment[i]` is the 1-based part of index `i`.
    assignment: Vec<usize>,
}

impl IndexPartition {
    pub fn new(part_count: usize, assignment: Vec<usize>) -> Result<Self> {
        if part_count == 0 {
            return Err(Error::InvalidShape("a partition needs at least one part".into()));
        }
        for (i, &p) in assignment.iter().enumerate() {
            if p == 0 || p > part_count {
                return Err(Error::InvalidShape(format!(
                    "index {i} assigned to part {p}, outside 1..={part_count}"
                )));
            }
        }
        Ok(IndexPartition {
            part_count,
            assignment,
        })
    }

    /// Builds from a list of parts; every index in `0..len` must appear
    /// exactly once.
    pub fn from_parts(len: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![0usize; len];
        for (p, part) in parts.iter().enumerate() {
            for &i in part {
                if i >= len {
                    return Err(Error::InvalidShape(format!("index {i} out of range")));
                }
                if assignment[i] != 0 {
                    return Err(Error::InvalidShape(format!("index {i} assigned twice")));
                }
                assignment[i] = p + 1;
            }
        }
        if let Some(i) = assignment.iter().position(|&p| p == 0) {
            return Err(Error::InvalidShape(format!("index {i} unassigned")));
        }
        IndexPartition::new(parts.len().max(1), assignment)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn part_count(&self) -> usize {
        self.part_count
    }

    /// 1-based part of index `i`.
    pub fn part_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Indices of part `p` (1-based), ascending.
    pub fn part(&self, p: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &q)| (q == p).then_some(i))
            .collect()
    }

    /// All parts, 1-based order, each ascending.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.part_count];
        for (i, &p) in self.assignment.iter().enumerate() {
            out[p - 1].push(i);
        }
        out
    }

    /// Indices outside part `p`, ascending.
    pub fn complement_of_part(&self, p: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &q)| (q != p).then_some(i))
            .collect()
    }

    /// Relabels parts in order of first appearance (restricted-growth
    /// normal form). Canonicalizes outputs whose part numbering carries no
    /// meaning.
    pub fn canonicalized(&self) -> IndexPartition {
        let mut map = vec![0usize; self.part_count + 1];
        let mut next = 0usize;
        let mut assignment = Vec::with_capacity(self.assignment.len());
        for &p in &self.assignment {
            if map[p] == 0 {
                next += 1;
                map[p] = next;
            }
            assignment.push(map[p]);
        }
        // Keep the declared part count: trailing empty parts stay legal.
        IndexPartition {
            part_count: self.part_count,
            assignment,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// Enumerates all partitions of `0..n` into at most `max_parts` nonempty
/// blocks via restricted-growth strings. `visit` runs exactly once per
/// prefix (including complete strings) with the 0-based assignment and the
/// block count; returning `false` prunes every extension of that prefix.
/// Sound whenever the pruned property is monotone under extension.
pub fn for_each_rgs<F: FnMut(&[usize], usize) -> bool>(n: usize, max_parts: usize, visit: &mut F) {
    if n == 0 || max_parts == 0 {
        return;
    }
    let mut a = vec![0usize; n];
    rgs_rec(&mut a, 0, 0, max_parts, visit);
}

fn rgs_rec<F: FnMut(&[usize], usize) -> bool>(
    a: &mut [usize],
    pos: usize,
    used: usize,
    max_parts: usize,
    visit: &mut F,
) {
    let cap = (used + 1).min(max_parts);
    for p in 0..cap {
        a[pos] = p;
        let new_used = used.max(p + 1);
        if visit(&a[..pos + 1], new_used) && pos + 1 < a.len() {
            rgs_rec(a, pos + 1, new_used, max_parts, visit);
        }
    }
}
