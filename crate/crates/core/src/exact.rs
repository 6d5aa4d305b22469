//! Exact solvers for small instances: minimum stable set, minimum target set
//! and maximum clique. They serve as ground truth for the constructions and
//! the reductions, so they favor obvious correctness over speed and refuse
//! graphs above a configurable node cap.
//!
//! Internally every solver works on 64-bit adjacency masks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::rule::ThresholdRule;

/// Hard limit imposed by the mask representation.
pub const MASK_LIMIT: usize = 64;
pub const DEFAULT_SUBSET_CAP: usize = 20;
pub const DEFAULT_CLIQUE_CAP: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub max_nodes: usize,
    /// Skip the closed-form r = 1 and r = 2 stable-set answers.
    pub force_enumeration: bool,
}

impl ExactOptions {
    pub fn subsets() -> Self {
        ExactOptions {
            max_nodes: DEFAULT_SUBSET_CAP,
            force_enumeration: false,
        }
    }

    pub fn clique() -> Self {
        ExactOptions {
            max_nodes: DEFAULT_CLIQUE_CAP,
            force_enumeration: false,
        }
    }

    pub fn with_cap(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn enumerate(mut self) -> Self {
        self.force_enumeration = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    /// MS_1 = 2 whenever there is an edge.
    ShortcutMs1,
    /// MS_2 = girth.
    ShortcutGirth,
    BranchAndBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub optimum: usize,
    pub witness: NodeSet,
    pub nodes_explored: u64,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExactOutcome {
    Optimal(ExactResult),
    /// No feasible set exists at all.
    Infeasible {
        nodes_explored: u64,
        method: Method,
    },
}

impl ExactOutcome {
    pub fn optimum(&self) -> Option<usize> {
        match self {
            ExactOutcome::Optimal(r) => Some(r.optimum),
            ExactOutcome::Infeasible { .. } => None,
        }
    }

    pub fn result(&self) -> Option<&ExactResult> {
        match self {
            ExactOutcome::Optimal(r) => Some(r),
            ExactOutcome::Infeasible { .. } => None,
        }
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    let cap = cap.min(MASK_LIMIT);
    if g.n() > cap {
        return Err(Error::TooLarge { n: g.n(), cap });
    }
    Ok(())
}

fn check_alpha_rule(g: &Graph, rule: ThresholdRule) -> Result<()> {
    if let ThresholdRule::AlphaThreshold { .. } = rule {
        if let Some(v) = g.first_isolated() {
            return Err(Error::IsolatedNode(v));
        }
    }
    Ok(())
}

/// Bits `from..64`.
#[inline]
fn bits_from(from: usize) -> u64 {
    if from >= 64 {
        0
    } else {
        u64::MAX << from
    }
}

/// Minimum nonempty stable set: MS_r or MS_α.
///
/// r = 1 and r = 2 are answered in closed form (an edge; a shortest cycle)
/// unless `opts.force_enumeration` is set. Otherwise subsets are enumerated
/// by size, then lexicographically, and the first stable one is returned.
/// Branches in which some chosen node can no longer reach its quota from the
/// nodes still available are cut; this skips only subsets that would fail
/// anyway, so the returned witness is still the lexicographically first.
pub fn min_stable_set(g: &Graph, rule: ThresholdRule, opts: ExactOptions) -> Result<ExactOutcome> {
    check_alpha_rule(g, rule)?;
    if !opts.force_enumeration {
        match rule {
            ThresholdRule::RThreshold { r: 1 } => {
                return Ok(match g.edges().next() {
                    Some((u, v)) => ExactOutcome::Optimal(ExactResult {
                        optimum: 2,
                        witness: NodeSet::from_nodes(g.n(), [u, v])?,
                        nodes_explored: 0,
                        method: Method::ShortcutMs1,
                    }),
                    None => ExactOutcome::Infeasible {
                        nodes_explored: 0,
                        method: Method::ShortcutMs1,
                    },
                });
            }
            ThresholdRule::RThreshold { r: 2 } => {
                return Ok(match g.shortest_cycle() {
                    Some(cycle) => ExactOutcome::Optimal(ExactResult {
                        optimum: cycle.len(),
                        witness: NodeSet::from_nodes(g.n(), cycle)?,
                        nodes_explored: 0,
                        method: Method::ShortcutGirth,
                    }),
                    None => ExactOutcome::Infeasible {
                        nodes_explored: 0,
                        method: Method::ShortcutGirth,
                    },
                });
            }
            _ => {}
        }
    }
    check_cap(g, opts.max_nodes)?;
    let adj = g.adjacency_masks()?;
    let quota: Vec<u32> = (0..g.n()).map(|v| rule.required(g.degree(v)) as u32).collect();
    let mut search = StableSearch {
        adj: &adj,
        quota: &quota,
        n: g.n(),
        explored: 0,
    };
    for size in 1..=g.n() {
        if let Some(mask) = search.first_of_size(0, 0, size) {
            return Ok(ExactOutcome::Optimal(ExactResult {
                optimum: size,
                witness: NodeSet::from_mask(g.n(), mask),
                nodes_explored: search.explored,
                method: Method::Enumeration,
            }));
        }
    }
    Ok(ExactOutcome::Infeasible {
        nodes_explored: search.explored,
        method: Method::Enumeration,
    })
}

struct StableSearch<'a> {
    adj: &'a [u64],
    quota: &'a [u32],
    n: usize,
    explored: u64,
}

impl StableSearch<'_> {
    /// Lexicographically first stable set of `remaining` more nodes drawn from
    /// `next..n`, extending `chosen`.
    fn first_of_size(&mut self, next: usize, chosen: u64, remaining: usize) -> Option<u64> {
        self.explored += 1;
        let later = bits_from(next);
        let mut rest = chosen;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let have = (self.adj[v] & chosen).count_ones();
            let reachable = (self.adj[v] & later).count_ones().min(remaining as u32);
            if have + reachable < self.quota[v] {
                return None;
            }
        }
        if remaining == 0 {
            return Some(chosen);
        }
        for i in next..=self.n - remaining {
            // Node i needs its quota from chosen ∪ (i+1..n).
            let pot = (self.adj[i] & chosen).count_ones()
                + (self.adj[i] & bits_from(i + 1)).count_ones().min(remaining as u32 - 1);
            if pot < self.quota[i] {
                continue;
            }
            if let Some(found) = self.first_of_size(i + 1, chosen | 1 << i, remaining - 1) {
                return Some(found);
            }
        }
        None
    }
}

/// Mask-based dynamics used by the target-set search: returns whether the
/// run from `blue` ends all blue.
fn reaches_all_blue(adj: &[u64], degree: &[usize], rule: ThresholdRule, blue: u64, max_rounds: usize) -> Result<bool> {
    let n = adj.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let step = |b: u64| -> u64 {
        let mut next = 0;
        for v in 0..n {
            if rule.turns_blue((adj[v] & b).count_ones() as usize, degree[v]) {
                next |= 1 << v;
            }
        }
        next
    };
    let mut prev2: Option<u64> = None;
    let mut prev = blue;
    for _ in 0..max_rounds {
        let cur = step(prev);
        if cur == prev {
            return Ok(cur == full);
        }
        if prev2 == Some(cur) {
            return Ok(false);
        }
        prev2 = Some(prev);
        prev = cur;
    }
    Err(Error::MaxRoundsExceeded(max_rounds))
}

/// Lexicographic k-subsets of `0..n` as index vectors.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            first: true,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
        } else {
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if self.idx[i] < self.n - k + i {
                    break;
                }
            }
            self.idx[i] += 1;
            for j in i + 1..k {
                self.idx[j] = self.idx[j - 1] + 1;
            }
        }
        Some(self.idx.iter().fold(0u64, |m, &i| m | 1 << i))
    }
}

/// Minimum target set by enumeration over subsets, by size then
/// lexicographically. Each candidate is tested by running the dynamics from
/// blue = candidate, red elsewhere. Infeasible when V itself is no target.
pub fn min_target_set(g: &Graph, rule: ThresholdRule, opts: ExactOptions) -> Result<ExactOutcome> {
    check_alpha_rule(g, rule)?;
    check_cap(g, opts.max_nodes)?;
    let n = g.n();
    let adj = g.adjacency_masks()?;
    let degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_rounds = (n * n).max(16);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut explored = 1;
    if !reaches_all_blue(&adj, &degree, rule, full, max_rounds)? {
        return Ok(ExactOutcome::Infeasible {
            nodes_explored: explored,
            method: Method::Enumeration,
        });
    }
    for size in 0..=n {
        for mask in Combinations::new(n, size) {
            explored += 1;
            if reaches_all_blue(&adj, &degree, rule, mask, max_rounds)? {
                return Ok(ExactOutcome::Optimal(ExactResult {
                    optimum: size,
                    witness: NodeSet::from_mask(n, mask),
                    nodes_explored: explored,
                    method: Method::Enumeration,
                }));
            }
        }
    }
    Err(Error::InvariantViolation(
        "V is a target set but enumeration missed it".into(),
    ))
}

/// Maximum clique by branch and bound with a greedy-coloring bound.
pub fn max_clique(g: &Graph, opts: ExactOptions) -> Result<ExactOutcome> {
    check_cap(g, opts.max_nodes)?;
    let adj = g.adjacency_masks()?;
    let n = g.n();
    let mut search = CliqueSearch {
        adj: &adj,
        best: 0,
        best_size: 0,
        explored: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.expand(0, 0, all);
    Ok(ExactOutcome::Optimal(ExactResult {
        optimum: search.best_size,
        witness: NodeSet::from_mask(n, search.best),
        nodes_explored: search.explored,
        method: Method::BranchAndBound,
    }))
}

/// Clique number only.
pub fn clique_number(g: &Graph) -> Result<usize> {
    Ok(max_clique(g, ExactOptions::clique().with_cap(MASK_LIMIT))?
        .optimum()
        .expect("clique search always has an optimum"))
}

struct CliqueSearch<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: usize,
    explored: u64,
}

impl CliqueSearch<'_> {
    /// Greedy sequential coloring of `cand`; returns vertices in color order
    /// with the color count reached at each.
    fn color_order(&self, cand: u64) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut uncolored = cand;
        let mut color = 0;
        while uncolored != 0 {
            color += 1;
            let mut avail = uncolored;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                avail &= !self.adj[v];
                uncolored &= !(1 << v);
                order.push((v, color));
            }
        }
        order
    }

    fn expand(&mut self, clique: u64, size: usize, mut cand: u64) {
        self.explored += 1;
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = clique;
            }
            return;
        }
        let order = self.color_order(cand);
        for &(v, color) in order.iter().rev() {
            if size + color <= self.best_size {
                return;
            }
            self.expand(clique | 1 << v, size + 1, cand & self.adj[v]);
            cand &= !(1 << v);
        }
        if size > self.best_size {
            self.best_size = size;
            self.best = clique;
        }
    }
}
