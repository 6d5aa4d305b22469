//! Seeded constructions of random graph families and small named graphs.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{rng, SimRng};

/// Graph family plus parameters. Together with a seed it determines the
/// output exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    RandomRegular {
        n: usize,
        d: usize,
    },
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// `K_{1,leaves}`: center 0 joined to nodes `1..=leaves`.
    Star {
        leaves: usize,
    },
    Petersen,
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            GeneratorSpec::ErdosRenyi { n, p } => gen_erdos_renyi(n, p, seed),
            GeneratorSpec::RandomRegular { n, d } => gen_random_regular(n, d, seed),
            GeneratorSpec::Complete { n } => named(Named::Complete, n),
            GeneratorSpec::Cycle { n } => named(Named::Cycle, n),
            GeneratorSpec::Path { n } => named(Named::Path, n),
            GeneratorSpec::Star { leaves } => named(Named::Star, leaves),
            GeneratorSpec::Petersen => named(Named::Petersen, 10),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    Complete,
    Cycle,
    Path,
    /// Size argument is the number of leaves.
    Star,
    /// Size argument is ignored.
    Petersen,
}

/// G(n, p): each of the C(n, 2) pairs, visited in lexicographic order, is an
/// edge independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Largest degree for which whole-configuration rejection is used. The chance
/// that a random pairing is simple is about `exp(-(d²-1)/4)`, which is already
/// below 2% at d = 5.
const PAIRING_REJECTION_MAX_DEGREE: usize = 5;

/// Random simple d-regular graph on `n` nodes.
///
/// For d ≤ 5 a uniformly random pairing of the `n·d` stubs is drawn and
/// rejected as a whole unless it is simple, which samples exactly uniformly.
/// Larger degrees use stub pairing with rejection of individual bad pairs
/// and a restart when no legal pair remains (Steger–Wormald), which is
/// asymptotically uniform. Either route gives up after `max(10·d·n, 100000)`
/// attempts; at d = 5 only about one pairing in a thousand is simple.
/// When d > (n − 1)/2 the complement of a random (n − 1 − d)-regular graph
/// is returned instead; complementation is a bijection, so uniformity carries
/// over and dense small instances stop exhausting the rejection budget.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!(
            "random regular graph needs 0 < d < n, got n={n}, d={d}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n·d must be even, got n={n}, d={d}")));
    }
    if 2 * d > n - 1 {
        let co = n - 1 - d;
        let sparse = if co == 0 {
            Graph::empty(n)
        } else {
            gen_random_regular(n, co, seed)?
        };
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        return Graph::from_edges(n, edges.filter(|&(u, v)| !sparse.has_edge(u, v)));
    }
    let mut rng = rng(seed);
    let max_attempts = (10 * d * n).max(100_000);
    for _ in 0..max_attempts {
        let edges = if d <= PAIRING_REJECTION_MAX_DEGREE {
            try_pairing(n, d, &mut rng)
        } else {
            try_sequential_pairing(n, d, &mut rng)
        };
        if let Some(edges) = edges {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::GenerationFailed(max_attempts))
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn try_pairing(n: usize, d: usize, rng: &mut SimRng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(rng);
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || !seen.insert(edge_key(u, v)) {
            return None;
        }
        edges.push(edge_key(u, v));
    }
    Some(edges)
}

fn try_sequential_pairing(n: usize, d: usize, rng: &mut SimRng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u != v && seen.insert(edge_key(u, v)) {
                edges.push(edge_key(u, v));
            } else {
                *leftover.entry(u).or_default() += 1;
                *leftover.entry(v).or_default() += 1;
            }
        }
        if !leftover.is_empty() && !has_legal_pair(&leftover, &seen) {
            return None;
        }
        stubs = leftover.iter().flat_map(|(&v, &c)| std::iter::repeat_n(v, c)).collect();
    }
    Some(edges)
}

fn has_legal_pair(leftover: &BTreeMap<usize, usize>, seen: &HashSet<(usize, usize)>) -> bool {
    let nodes: Vec<usize> = leftover.keys().copied().collect();
    nodes
        .iter()
        .enumerate()
        .any(|(i, &u)| nodes[i + 1..].iter().any(|&v| !seen.contains(&edge_key(u, v))))
}

/// Canonical small graphs: `K_n`, the cycle `i ~ i+1 mod n`, the path, the
/// star `K_{1,k}` centered at 0, and the Petersen graph (outer 5-cycle
/// `0..5`, spokes `i ~ i+5`, inner pentagram `5+i ~ 5+(i+2 mod 5)`).
pub fn named(kind: Named, size: usize) -> Result<Graph> {
    let invalid = |what: &str| Err(Error::InvalidParameter(format!("{what} (got {size})")));
    match kind {
        Named::Complete => {
            if size == 0 {
                return invalid("complete graph needs n ≥ 1");
            }
            Graph::from_edges(size, (0..size).flat_map(|u| (u + 1..size).map(move |v| (u, v))))
        }
        Named::Cycle => {
            if size < 3 {
                return invalid("cycle needs n ≥ 3");
            }
            Graph::from_edges(size, (0..size).map(|i| (i, (i + 1) % size)))
        }
        Named::Path => {
            if size == 0 {
                return invalid("path needs n ≥ 1");
            }
            Graph::from_edges(size, (1..size).map(|i| (i - 1, i)))
        }
        Named::Star => {
            if size == 0 {
                return invalid("star needs at least one leaf");
            }
            Graph::from_edges(size + 1, (1..=size).map(|i| (0, i)))
        }
        Named::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
    }
}
