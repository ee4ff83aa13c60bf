//! Augmenting-path engine for matroid partitioning.
//!
//! Maintains disjoint oracle-independent sets and grows them one ground
//! element at a time. An element enters through a shortest augmenting path
//! in the exchange graph: `y -> z` when `y` can replace `z` in `z`'s part
//! (`z` lies in the fundamental circuit of `y` there), and `y -> sink_k`
//! when part `k` can absorb `y` outright. When no sink is reachable, the
//! set of reached elements is a Rado-Horn violator: it satisfies
//! `|E| = parts * rank(E) + 1` exactly.

use super::MatroidOracle;
use crate::error::{Error, Result};

pub(crate) struct Engine<'a> {
    oracle: &'a MatroidOracle<'a>,
    parts: Vec<Vec<usize>>,
    assignment: Vec<Option<usize>>,
}

/// Result of one insertion attempt.
pub(crate) enum Insert {
    Placed,
    /// No augmenting path: the reached ground elements, ascending,
    /// including the new element itself.
    Blocked(Vec<usize>),
}

impl<'a> Engine<'a> {
    pub fn new(oracle: &'a MatroidOracle<'a>, m_parts: usize) -> Self {
        Engine {
            oracle,
            parts: vec![Vec::new(); m_parts],
            assignment: vec![None; oracle.ground_size()],
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    fn with_element(part: &[usize], y: usize) -> Vec<usize> {
        let mut s = part.to_vec();
        match s.binary_search(&y) {
            Ok(_) => {}
            Err(pos) => s.insert(pos, y),
        }
        s
    }

    fn without_element(part: &[usize], z: usize) -> Vec<usize> {
        part.iter().copied().filter(|&i| i != z).collect()
    }

    /// Edges out of `y`: replaceable elements, plus parts reachable as sinks.
    fn edges_from(&self, y: usize) -> (Vec<usize>, Vec<usize>) {
        let mut targets = Vec::new();
        let mut sinks = Vec::new();
        for (k, part) in self.parts.iter().enumerate() {
            if self.assignment[y] == Some(k) {
                continue;
            }
            let grown = Self::with_element(part, y);
            if self.oracle.is_independent(&grown) {
                sinks.push(k);
                continue;
            }
            for &z in part.iter() {
                let swapped = Self::with_element(&Self::without_element(part, z), y);
                if self.oracle.is_independent(&swapped) {
                    targets.push(z);
                }
            }
        }
        targets.sort_unstable();
        (targets, sinks)
    }

    /// Tries to place `x` via the lexicographically smallest shortest
    /// augmenting path.
    pub fn insert(&mut self, x: usize) -> Result<Insert> {
        debug_assert!(self.assignment[x].is_none());
        let n = self.assignment.len();

        // Forward BFS over the full reachable set, caching adjacency.
        let mut dist: Vec<Option<usize>> = vec![None; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sink_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = std::collections::VecDeque::new();
        dist[x] = Some(0);
        queue.push_back(x);
        let mut best_sink_dist: Option<usize> = None;
        while let Some(y) = queue.pop_front() {
            let dy = dist[y].expect("queued nodes have distances");
            if let Some(b) = best_sink_dist {
                // Nodes at or beyond the best sink layer cannot start a
                // shorter path; stop expanding them.
                if dy + 1 > b {
                    continue;
                }
            }
            let (targets, sinks) = self.edges_from(y);
            if !sinks.is_empty() {
                let cand = dy + 1;
                if best_sink_dist.is_none_or(|b| cand < b) {
                    best_sink_dist = Some(cand);
                }
            }
            sink_edges[y] = sinks;
            adj[y] = targets.clone();
            for z in targets {
                if dist[z].is_none() {
                    dist[z] = Some(dy + 1);
                    queue.push_back(z);
                }
            }
        }

        let Some(dmin) = best_sink_dist else {
            let mut reached: Vec<usize> =
                (0..n).filter(|&i| dist[i].is_some()).collect();
            reached.sort_unstable();
            return Ok(Insert::Blocked(reached));
        };

        // Backward distances to the nearest sink, over reversed cached edges.
        let mut bdist: Vec<Option<usize>> = vec![None; n];
        let mut frontier: Vec<usize> = (0..n)
            .filter(|&i| dist[i].is_some() && !sink_edges[i].is_empty())
            .collect();
        for &i in &frontier {
            bdist[i] = Some(1);
        }
        let mut level = 1usize;
        while !frontier.is_empty() && level < dmin {
            let mut next = Vec::new();
            for v in 0..n {
                if dist[v].is_none() || bdist[v].is_some() {
                    continue;
                }
                if adj[v].iter().any(|&u| bdist[u] == Some(level)) {
                    bdist[v] = Some(level + 1);
                    next.push(v);
                }
            }
            level += 1;
            frontier = next;
        }

        // Greedy lexicographic reconstruction of a shortest path.
        let mut path: Vec<usize> = Vec::new();
        let mut cur = x;
        let mut remaining = dmin;
        while remaining > 1 {
            let next = adj[cur]
                .iter()
                .copied()
                .find(|&z| bdist[z] == Some(remaining - 1))
                .ok_or_else(|| {
                    Error::InternalContractViolation(
                        "augmenting path reconstruction lost the trail".into(),
                    )
                })?;
            path.push(next);
            cur = next;
            remaining -= 1;
        }
        let sink = *sink_edges[cur].first().ok_or_else(|| {
            Error::InternalContractViolation("shortest path ends without a sink".into())
        })?;

        self.apply_path(x, &path, sink)?;
        Ok(Insert::Placed)
    }

    fn apply_path(&mut self, x: usize, path: &[usize], sink: usize) -> Result<()> {
        let mut entrant = x;
        let mut touched = vec![sink];
        for &z in path {
            let k = self.assignment[z].expect("path nodes are assigned");
            touched.push(k);
            let part = &mut self.parts[k];
            part.retain(|&i| i != z);
            let pos = part.binary_search(&entrant).unwrap_err();
            part.insert(pos, entrant);
            self.assignment[entrant] = Some(k);
            entrant = z;
        }
        let part = &mut self.parts[sink];
        let pos = part.binary_search(&entrant).unwrap_err();
        part.insert(pos, entrant);
        self.assignment[entrant] = Some(sink);

        // Shortest-path exchanges preserve independence; verify anyway,
        // since a float rank flip here must surface, not corrupt results.
        for k in touched {
            if !self.oracle.is_independent(&self.parts[k]) {
                return Err(Error::InternalContractViolation(format!(
                    "part {k} lost independence after an exchange"
                )));
            }
        }
        Ok(())
    }

    /// Inserts every ground element in ascending order, skipping the ones
    /// that cannot be placed. Returns the blocked elements.
    pub fn run_cover(&mut self) -> Result<Vec<usize>> {
        let mut blocked = Vec::new();
        for x in 0..self.assignment.len() {
            if let Insert::Blocked(_) = self.insert(x)? {
                blocked.push(x);
            }
        }
        Ok(blocked)
    }

    /// Combined reachable set from every unassigned element at the current
    /// state. Certifies maximality of a cover run:
    /// `|ground \ E| + parts * rank(E) = assigned count`.
    pub fn deficiency_witness(&self) -> Result<Vec<usize>> {
        let n = self.assignment.len();
        let mut reached = vec![false; n];
        for x in 0..n {
            if self.assignment[x].is_some() || reached[x] {
                continue;
            }
            let mut queue = std::collections::VecDeque::new();
            reached[x] = true;
            queue.push_back(x);
            while let Some(y) = queue.pop_front() {
                let (targets, sinks) = self.edges_from(y);
                if !sinks.is_empty() {
                    // Blocked elements stay blocked as the cover grows; a
                    // sink here means the cover was not maximal.
                    return Err(Error::InternalContractViolation(
                        "cover claimed maximal but an augmenting path exists".into(),
                    ));
                }
                for z in targets {
                    if !reached[z] {
                        reached[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        Ok((0..n).filter(|&i| reached[i]).collect())
    }
}
