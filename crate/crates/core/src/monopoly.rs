//! Constructive stable and target sets for the r-threshold model on regular
//! expanders, and the verifiers that certify them.
//!
//! The stable set is the largest part of a partition of V into ⌊1/β⌋ parts
//! after cut-reducing local search: while the largest part contains a node
//! with fewer than `r` neighbors inside it, that node moves to the part
//! holding most of its neighbors. Every move lowers the cut by at least one,
//! so the search stops after at most `m` moves, and the result is checked
//! rather than trusted.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::dynamics::{self, Coloring, Outcome, RunResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::rule::ThresholdRule;
use crate::seed::{derive_seed, rng};

/// Fresh random starting partitions tried before giving up.
pub const MAX_RESTARTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Stable,
    Target,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// d_S(v) for each member, in ascending node order.
    InternalDegrees { degrees: Vec<usize> },
    /// The run from blue = T, red elsewhere.
    Run { run: RunResult },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionStats {
    pub beta: f64,
    pub parts: usize,
    /// ⌊βn⌋, the minimum part size in the partition family.
    pub min_part_size: usize,
    pub moves: usize,
    pub restarts: u64,
    pub cut_edges: usize,
    /// 2βn + 1/β.
    pub size_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedSet {
    pub nodes: NodeSet,
    pub kind: SetKind,
    pub rule: ThresholdRule,
    pub certificate: Certificate,
    pub stats: ConstructionStats,
}

impl CertifiedSet {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

/// Partition of V into parts with sizes restricted to the family: every part
/// has at least `min_size` nodes except at most one with `min_size − 1`.
#[derive(Clone, Debug)]
pub struct Partition {
    part_of: Vec<usize>,
    sizes: Vec<usize>,
    /// `links[v * parts + p]` = d_{V_p}(v).
    links: Vec<usize>,
    cut_edges: usize,
    min_size: usize,
}

impl Partition {
    fn new(g: &Graph, parts: usize, min_size: usize, seed: u64) -> Self {
        let n = g.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng(seed));
        let mut part_of = vec![0; n];
        let mut sizes = vec![0; parts];
        for (i, &v) in order.iter().enumerate() {
            // Parts 0..parts-1 take min_size nodes each; the last absorbs the rest.
            let p = (i / min_size).min(parts - 1);
            part_of[v] = p;
            sizes[p] += 1;
        }
        let mut links = vec![0; n * parts];
        let mut cut_edges = 0;
        for v in 0..n {
            for &w in g.neighbors(v) {
                links[v * parts + part_of[w]] += 1;
                if w > v && part_of[w] != part_of[v] {
                    cut_edges += 1;
                }
            }
        }
        Partition {
            part_of,
            sizes,
            links,
            cut_edges,
            min_size,
        }
    }

    pub fn parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn cut_edges(&self) -> usize {
        self.cut_edges
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    #[inline]
    fn link(&self, v: usize, p: usize) -> usize {
        self.links[v * self.parts() + p]
    }

    /// Largest part, lowest index on ties.
    pub fn largest_part(&self) -> usize {
        let mut best = 0;
        for (p, &s) in self.sizes.iter().enumerate() {
            if s > self.sizes[best] {
                best = p;
            }
        }
        best
    }

    pub fn part_nodes(&self, p: usize) -> NodeSet {
        let n = self.part_of.len();
        NodeSet::from_nodes(n, (0..n).filter(|&v| self.part_of[v] == p)).expect("ids in range")
    }

    fn sizes_in_family(sizes: &[usize], min_size: usize) -> bool {
        let short = sizes.iter().filter(|&&s| s < min_size).count();
        short <= 1 && sizes.iter().all(|&s| s + 1 >= min_size)
    }

    pub fn in_family(&self) -> bool {
        Self::sizes_in_family(&self.sizes, self.min_size)
    }

    fn move_is_legal(&self, from: usize, to: usize) -> bool {
        let mut sizes = self.sizes.clone();
        sizes[from] -= 1;
        sizes[to] += 1;
        Self::sizes_in_family(&sizes, self.min_size)
    }

    fn apply_move(&mut self, g: &Graph, v: usize, to: usize) {
        let from = self.part_of[v];
        let k = self.parts();
        self.cut_edges = self.cut_edges + self.link(v, from) - self.link(v, to);
        for &w in g.neighbors(v) {
            self.links[w * k + from] -= 1;
            self.links[w * k + to] += 1;
        }
        self.part_of[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
    }

    /// A legal cut-reducing move of a node of the largest part that has
    /// fewer than `r` neighbors inside it. Destination: the part holding the
    /// most of the node's neighbors, lowest index on ties.
    fn improving_move(&self, g: &Graph, r: usize) -> Option<(usize, usize)> {
        let top = self.largest_part();
        let k = self.parts();
        for u in (0..g.n()).filter(|&u| self.part_of[u] == top) {
            let inside = self.link(u, top);
            if inside >= r {
                continue;
            }
            let mut candidates: Vec<usize> = (0..k).filter(|&p| p != top).collect();
            candidates.sort_by_key(|&p| (std::cmp::Reverse(self.link(u, p)), p));
            if let Some(&to) = candidates
                .iter()
                .find(|&&p| self.link(u, p) > inside && self.move_is_legal(top, p))
            {
                return Some((u, to));
            }
        }
        None
    }

    /// True when the largest part has no node with fewer than `r` internal
    /// neighbors.
    fn largest_part_stable(&self, g: &Graph, r: usize) -> bool {
        let top = self.largest_part();
        (0..g.n()).all(|u| self.part_of[u] != top || self.link(u, top) >= r)
    }
}

struct StableSetParams {
    beta: f64,
    parts: usize,
    min_part_size: usize,
}

fn stable_set_params(g: &Graph, r: usize, sigma: f64) -> Result<StableSetParams> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition("stable-set construction needs a regular graph".into()))?;
    let beta = bounds::beta(r, d, sigma).map_err(|e| match e {
        Error::BoundUndefined(msg) => Error::Precondition(msg),
        other => other,
    })?;
    if beta > 0.5 {
        return Err(Error::Precondition(format!(
            "beta = r/((1-sigma)d) = {beta:.4} exceeds 1/2"
        )));
    }
    let parts = (1.0 / beta).floor() as usize;
    let min_part_size = (beta * g.n() as f64).floor() as usize;
    if parts < 2 {
        return Err(Error::Precondition("floor(1/beta) must be at least 2".into()));
    }
    if min_part_size == 0 {
        return Err(Error::Precondition(format!(
            "beta·n = {:.3} < 1; graph too small for this beta",
            beta * g.n() as f64
        )));
    }
    Ok(StableSetParams {
        beta,
        parts,
        min_part_size,
    })
}

/// Stable set S with ⌊βn⌋ ≤ |S| ≤ 2βn + 1/β (+1 slack for rounding) and
/// min_{v∈S} d_S(v) ≥ r, on a d-regular graph with β = r/((1−σ)d) ≤ 1/2.
pub fn construct_stable_set(g: &Graph, r: usize, sigma: f64, seed: u64) -> Result<CertifiedSet> {
    let params = stable_set_params(g, r, sigma)?;
    let size_bound = bounds::target_size_bound(params.beta, g.n());

    for restart in 0..MAX_RESTARTS {
        let mut partition = Partition::new(g, params.parts, params.min_part_size, derive_seed(seed, restart));
        debug_assert!(partition.in_family());
        let mut moves = 0;
        while let Some((u, to)) = partition.improving_move(g, r) {
            let before = partition.cut_edges();
            partition.apply_move(g, u, to);
            moves += 1;
            if partition.cut_edges() >= before || moves > g.m() || !partition.in_family() {
                return Err(Error::InvariantViolation(format!(
                    "local search move {moves} did not lower the cut or left the partition family"
                )));
            }
        }
        if !partition.largest_part_stable(g, r) {
            log::warn!("stable-set search stuck on family boundary (restart {restart}); reseeding");
            continue;
        }
        let nodes = partition.part_nodes(partition.largest_part());
        let rule = ThresholdRule::r(r)?;
        if !verify_stable(g, &nodes, rule) {
            return Err(Error::InvariantViolation("constructed set is not stable".into()));
        }
        let size = nodes.len();
        if size < params.min_part_size || size as f64 > size_bound + 1.0 {
            return Err(Error::InvariantViolation(format!(
                "stable set size {size} outside [{}, {:.3}]",
                params.min_part_size,
                size_bound + 1.0
            )));
        }
        let degrees = nodes.iter().map(|v| g.degree_in_unchecked(v, &nodes)).collect();
        return Ok(CertifiedSet {
            nodes,
            kind: SetKind::Stable,
            rule,
            certificate: Certificate::InternalDegrees { degrees },
            stats: ConstructionStats {
                beta: params.beta,
                parts: params.parts,
                min_part_size: params.min_part_size,
                moves,
                restarts: restart,
                cut_edges: partition.cut_edges(),
                size_bound,
            },
        });
    }
    Err(Error::InvariantViolation(format!(
        "no stable partition found after {MAX_RESTARTS} restarts"
    )))
}

/// Lowest-id node outside `s` with at least `r` neighbors in `s`.
pub fn find_expandable_node(g: &Graph, s: &NodeSet, r: usize) -> Option<usize> {
    (0..g.n()).find(|&v| !s.contains(v) && g.degree_in_unchecked(v, s) >= r)
}

/// Target set of size at most 2βn + 1/β (+1): the constructed stable set,
/// certified by running the r-threshold dynamics to all blue.
pub fn build_target_set(g: &Graph, r: usize, sigma: f64, seed: u64) -> Result<CertifiedSet> {
    if g.min_degree() < r {
        return Err(Error::Precondition(format!(
            "min degree {} < r = {r}: all blue is not absorbing",
            g.min_degree()
        )));
    }
    let stable = construct_stable_set(g, r, sigma, seed)?;
    let run = dynamics::run(
        g,
        &Coloring::from_blue(stable.nodes.clone()),
        stable.rule,
        dynamics::default_max_rounds(g),
    )?;
    if run.outcome != Outcome::AllBlue {
        return Err(Error::InvariantViolation(format!(
            "constructed target set ended {:?}, not all blue",
            run.outcome
        )));
    }
    Ok(CertifiedSet {
        kind: SetKind::Target,
        certificate: Certificate::Run { run },
        ..stable
    })
}

/// Every member of `s` has at least r (or ⌈α·d(v)⌉) neighbors in `s`, so a
/// fully blue `s` stays blue whatever the other nodes do. Vacuously true
/// for the empty set.
pub fn verify_stable(g: &Graph, s: &NodeSet, rule: ThresholdRule) -> bool {
    s.iter()
        .all(|v| g.degree_in_unchecked(v, s) >= rule.required(g.degree(v)))
}

/// Runs the dynamics from blue = `t`, red elsewhere. By monotonicity this is
/// the worst case over colorings in which `t` is blue.
pub fn verify_target(g: &Graph, t: &NodeSet, rule: ThresholdRule) -> Result<bool> {
    let run = dynamics::run(
        g,
        &Coloring::from_blue(t.clone()),
        rule,
        dynamics::default_max_rounds(g),
    )?;
    Ok(run.outcome == Outcome::AllBlue)
}
