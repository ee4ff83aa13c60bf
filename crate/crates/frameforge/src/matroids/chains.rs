//! Dependency chains between parts of a partition.
//!
//! A chain records how a dependent vector propagates across parts: the
//! first link `(a_1, b_1)` marks a vector that is a combination of the
//! others in its own part; each later link `(a_i, b_i)` writes `f_{a_i}`
//! as `alpha * f_{a_{i-1}}` plus a combination of the rest of part `b_i`,
//! with `alpha != 0`. Chain closure of the dependent set of part 1 is what
//! builds the infeasibility subspace, and single chain moves are the
//! augmenting steps of the independent + spanning search.
//!
//! Breadth-first layering gives minimal-length chains (a prefix of a
//! minimal chain is minimal), and minimality is what makes the bookkeeping
//! of chain moves sound.

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::exact::q_to_f64;
use crate::linalg::{Ctx, Mat, ScalarMode};
use crate::partition::IndexPartition;

/// One link `(a_i, b_i)` with its dependency witness.
#[derive(Clone, Debug)]
pub struct ChainLink {
    /// The index `a_i`.
    pub index: usize,
    /// 1-based part `b_i` containing `a_i`.
    pub part: usize,
    /// Coefficient `alpha` on the previous chain element; `None` on the
    /// first link.
    pub prev_coeff: Option<f64>,
    /// Coefficients on the rest of part `b_i` (index, coefficient pairs).
    pub part_coeffs: Vec<(usize, f64)>,
}

/// A chain from a seed to its final index, links in order.
#[derive(Clone, Debug)]
pub struct Chain {
    pub links: Vec<ChainLink>,
}

impl Chain {
    pub fn start(&self) -> usize {
        self.links.first().expect("chains are nonempty").index
    }

    pub fn end(&self) -> usize {
        self.links.last().expect("chains are nonempty").index
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

struct ChainSearch<'a> {
    frame: &'a Frame,
    ctx: Ctx,
    /// Per-index cache of the part contents with that index removed.
    rest_of_part: Vec<Vec<usize>>,
}

impl<'a> ChainSearch<'a> {
    fn new(frame: &'a Frame, partition: &'a IndexPartition, ctx: Ctx) -> Self {
        let rest_of_part = (0..frame.len())
            .map(|a| {
                partition
                    .part(partition.part_of(a))
                    .into_iter()
                    .filter(|&i| i != a)
                    .collect()
            })
            .collect();
        ChainSearch {
            frame,
            ctx,
            rest_of_part,
        }
    }

    fn rank(&self, idx: &[usize]) -> Result<usize> {
        self.frame.subset_rank(idx, self.ctx)
    }

    fn rank_with(&self, base: &[usize], extra: &[usize]) -> Result<usize> {
        let mut idx = base.to_vec();
        for &e in extra {
            if !idx.contains(&e) {
                idx.push(e);
            }
        }
        idx.sort_unstable();
        self.rank(&idx)
    }

    /// Is `f_a` a combination of the rest of its own part?
    fn dependent_in_part(&self, a: usize) -> Result<bool> {
        let rest = &self.rest_of_part[a];
        Ok(self.rank(rest)? == self.rank_with(rest, &[a])?)
    }

    /// Does a representation `f_a = alpha f_u + (combination of part(a) \ {a})`
    /// with `alpha != 0` exist?
    ///
    /// Writing `V` for the span of part(a) minus `a`: such a representation
    /// exists iff `f_a` lies in `V + <f_u>` and it is not the case that
    /// `f_a` is in `V` while `f_u` is not (that configuration forces
    /// `alpha = 0`).
    fn link_exists(&self, u: usize, a: usize) -> Result<bool> {
        let rest = &self.rest_of_part[a];
        let r_v = self.rank(rest)?;
        let r_vu = self.rank_with(rest, &[u])?;
        let r_vua = self.rank_with(rest, &[u, a])?;
        if r_vua != r_vu {
            return Ok(false); // f_a outside V + <f_u>
        }
        if r_vu == r_v {
            return Ok(true); // f_u inside V: alpha = 1 works
        }
        let r_va = self.rank_with(rest, &[a])?;
        Ok(r_va > r_v) // f_a outside V forces alpha != 0
    }

    /// Solves `f_a = alpha f_u + sum_j alpha_j f_j` over `j` in the rest of
    /// `a`'s part, choosing a representation with nonzero `alpha`.
    fn solve_link(&self, u: Option<usize>, a: usize) -> Result<(Option<f64>, Vec<(usize, f64)>)> {
        let rest = &self.rest_of_part[a];
        let columns: Vec<usize> = match u {
            Some(u) => std::iter::once(u).chain(rest.iter().copied()).collect(),
            None => rest.clone(),
        };
        let target = self.frame.vector(a);

        // When f_a already lies in V and f_u does too, fix alpha = 1 and
        // express f_a - f_u over V; least squares on the raw system could
        // return alpha = 0.
        let force_unit_alpha = match u {
            Some(uu) => {
                let r_v = self.rank(rest)?;
                self.rank_with(rest, &[a])? == r_v && self.rank_with(rest, &[uu])? == r_v
            }
            None => false,
        };

        match self.ctx.mode {
            ScalarMode::Float => {
                let dim = self.frame.dim();
                if force_unit_alpha {
                    let uu = u.expect("forced alpha requires a predecessor");
                    let mut cols = Mat::zeros(dim, rest.len());
                    for (c, &j) in rest.iter().enumerate() {
                        for r in 0..dim {
                            cols.set(r, c, self.frame.vector(j)[r]);
                        }
                    }
                    let rhs: Vec<f64> = (0..dim)
                        .map(|r| target[r] - self.frame.vector(uu)[r])
                        .collect();
                    let x = cols.solve_least_squares(&rhs, self.ctx.tol);
                    return Ok((
                        Some(1.0),
                        rest.iter().copied().zip(x).collect(),
                    ));
                }
                let mut cols = Mat::zeros(dim, columns.len());
                for (c, &j) in columns.iter().enumerate() {
                    for r in 0..dim {
                        cols.set(r, c, self.frame.vector(j)[r]);
                    }
                }
                let x = cols.solve_least_squares(target, self.ctx.tol);
                match u {
                    Some(_) => Ok((
                        Some(x[0]),
                        rest.iter().copied().zip(x[1..].iter().copied()).collect(),
                    )),
                    None => Ok((None, rest.iter().copied().zip(x).collect())),
                }
            }
            ScalarMode::Exact => {
                let exact = self.frame.exact_vectors().ok_or(Error::ExactUnavailable)?;
                let dim = self.frame.dim();
                if force_unit_alpha {
                    let uu = u.expect("forced alpha requires a predecessor");
                    let cols = crate::linalg::exact::QMat::from_rows(
                        (0..dim)
                            .map(|r| rest.iter().map(|&j| exact[j][r].clone()).collect())
                            .collect(),
                    )?;
                    let rhs: Vec<_> = (0..dim)
                        .map(|r| &exact[a][r] - &exact[uu][r])
                        .collect();
                    let x = cols.solve(&rhs).ok_or_else(|| {
                        Error::InternalContractViolation(
                            "exact link system became inconsistent".into(),
                        )
                    })?;
                    return Ok((
                        Some(1.0),
                        rest.iter()
                            .copied()
                            .zip(x.iter().map(q_to_f64))
                            .collect(),
                    ));
                }
                let cols = crate::linalg::exact::QMat::from_rows(
                    (0..dim)
                        .map(|r| columns.iter().map(|&j| exact[j][r].clone()).collect())
                        .collect(),
                )?;
                let x = cols.solve(&exact[a]).ok_or_else(|| {
                    Error::InternalContractViolation(
                        "exact link system became inconsistent".into(),
                    )
                })?;
                let xs: Vec<f64> = x.iter().map(q_to_f64).collect();
                match u {
                    Some(_) => Ok((
                        Some(xs[0]),
                        rest.iter().copied().zip(xs[1..].iter().copied()).collect(),
                    )),
                    None => Ok((None, rest.iter().copied().zip(xs).collect())),
                }
            }
        }
    }
}

/// Breadth-first chain closure.
///
/// Returns every index reachable by a chain starting in `l_start` (ascending)
/// together with one minimal-length chain per reached index. Seeds qualify
/// only if they satisfy the length-one condition (dependent within their own
/// part); parts `2..=M` must be independent.
pub fn find_chains(
    f: &Frame,
    partition: &IndexPartition,
    l_start: &[usize],
    ctx: Ctx,
) -> Result<(Vec<usize>, Vec<Chain>)> {
    if partition.len() != f.len() {
        return Err(Error::InvalidShape(
            "partition length does not match the frame".into(),
        ));
    }
    let search = ChainSearch::new(f, partition, ctx);
    for p in 2..=partition.part_count() {
        let part = partition.part(p);
        if f.subset_rank(&part, ctx)? != part.len() {
            return Err(Error::PreconditionViolated(format!(
                "part {p} must be linearly independent for the chain machinery"
            )));
        }
    }

    let mut seeds = l_start.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.iter().any(|&i| i >= f.len()) {
        return Err(Error::InvalidShape("seed index out of range".into()));
    }

    let m = f.len();
    let mut link_of: Vec<Option<ChainLink>> = vec![None; m];
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut queue = std::collections::VecDeque::new();
    for &a in &seeds {
        if link_of[a].is_some() {
            continue;
        }
        if search.dependent_in_part(a)? {
            let (_, coeffs) = search.solve_link(None, a)?;
            link_of[a] = Some(ChainLink {
                index: a,
                part: partition.part_of(a),
                prev_coeff: None,
                part_coeffs: coeffs,
            });
            queue.push_back(a);
        }
    }

    while let Some(u) = queue.pop_front() {
        for a in 0..m {
            if link_of[a].is_some() {
                continue;
            }
            if search.link_exists(u, a)? {
                let (alpha, coeffs) = search.solve_link(Some(u), a)?;
                link_of[a] = Some(ChainLink {
                    index: a,
                    part: partition.part_of(a),
                    prev_coeff: alpha,
                    part_coeffs: coeffs,
                });
                parent[a] = Some(u);
                queue.push_back(a);
            }
        }
    }

    let reachable: Vec<usize> = (0..m).filter(|&i| link_of[i].is_some()).collect();
    let chains: Vec<Chain> = reachable
        .iter()
        .map(|&end| {
            let mut links = Vec::new();
            let mut cur = Some(end);
            while let Some(i) = cur {
                links.push(link_of[i].clone().expect("reachable nodes carry links"));
                cur = parent[i];
            }
            links.reverse();
            Chain { links }
        })
        .collect();
    Ok((reachable, chains))
}
