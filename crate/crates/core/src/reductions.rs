//! Hardness gadgets as concrete graph transformations:
//!
//! * α-Clique → minimum α-stable set: four layered copies of G plus four hub
//!   nodes, producing an n-regular graph on 4n + 4 nodes in which G has a
//!   clique of size ≥ αn exactly when MS_α = ⌈αn⌉ + 1.
//! * Clique → α-Clique: pad G with isolated nodes (k ≥ αn) or with a
//!   universal clique U (k < αn) so that the target size becomes α·n′.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{clique_number, min_stable_set, ExactOptions};
use crate::graph::Graph;
use crate::rule::{Alpha, ThresholdRule};

/// Role of a node of the constructed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum NodeRole {
    /// Copy of `original` in layer `layer` ∈ 1..=4.
    Copy { layer: u8, original: usize },
    /// Hub w_layer, joined to every node of its layer.
    Hub { layer: u8 },
    /// Original node carried over unchanged.
    Original { original: usize },
    /// Added isolated node.
    Padding { index: usize },
    /// Member of the added universal clique U.
    Universal { index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    AlphaStable,
    /// k ≥ αn: isolated padding.
    CliquePadding,
    /// k < αn: universal clique.
    CliqueUniversal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetParams {
    pub kind: GadgetKind,
    pub alpha: Alpha,
    pub k: Option<usize>,
    pub n: usize,
    pub n_prime: usize,
    /// Whether the padding size came out integral without rounding.
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetOutput {
    #[serde(skip)]
    pub graph: Graph,
    pub node_map: Vec<NodeRole>,
    pub params: GadgetParams,
}

/// Layers 1..=4 occupy ids `(j−1)·n .. j·n`; hubs w_1..w_4 are `4n .. 4n+4`.
///
/// * layers 1 and 4 carry a copy of G, layers 2 and 3 are independent;
/// * w_j is adjacent to all of layer j;
/// * `v_i^(1) ~ v_i'^(2)` and `v_i^(3) ~ v_i'^(4)` for i ≠ i′ with {v_i, v_i′} ∉ E;
/// * `v_i^(2) ~ v_i'^(3)` for {v_i, v_i′} ∈ E.
pub fn alpha_stable_gadget(g: &Graph, alpha: Alpha) -> Result<GadgetOutput> {
    let n = g.n();
    let id = |layer: usize, i: usize| (layer - 1) * n + i;
    let hub = |layer: usize| 4 * n + layer - 1;
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        edges.push((id(1, u), id(1, v)));
        edges.push((id(4, u), id(4, v)));
        edges.push((id(2, u), id(3, v)));
        edges.push((id(2, v), id(3, u)));
    }
    for layer in 1..=4 {
        edges.extend((0..n).map(|i| (hub(layer), id(layer, i))));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !g.has_edge(i, j) {
                edges.push((id(1, i), id(2, j)));
                edges.push((id(3, i), id(4, j)));
            }
        }
    }
    let graph = Graph::from_edges(4 * n + 4, edges)?;
    if graph.regular_degree() != Some(n) && n > 0 {
        return Err(Error::InvariantViolation(format!(
            "alpha-stable gadget is not {n}-regular (degrees {}..{})",
            graph.min_degree(),
            graph.max_degree()
        )));
    }
    let mut node_map = Vec::with_capacity(4 * n + 4);
    for layer in 1..=4u8 {
        node_map.extend((0..n).map(|original| NodeRole::Copy { layer, original }));
    }
    node_map.extend((1..=4u8).map(|layer| NodeRole::Hub { layer }));
    Ok(GadgetOutput {
        graph,
        node_map,
        params: GadgetParams {
            kind: GadgetKind::AlphaStable,
            alpha,
            k: None,
            n,
            n_prime: 4 * n + 4,
            integral: true,
        },
    })
}

/// Clique instance (G, k) → α-Clique instance G′.
///
/// k ≥ αn: add ⌊k/α − n⌋ isolated nodes. k < αn: add a clique U of
/// ⌈(αn − k)/(1 − α)⌉ nodes joined to everything. Sizes are computed in
/// exact rational arithmetic.
pub fn clique_to_alpha_clique(g: &Graph, k: usize, alpha: Alpha) -> Result<GadgetOutput> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    let (p, q) = (alpha.num() as u128, alpha.den() as u128);
    let (n128, k128) = (n as u128, k as u128);
    let mut node_map: Vec<NodeRole> = (0..n).map(|original| NodeRole::Original { original }).collect();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();

    // k ≥ αn  ⇔  kq ≥ pn
    let (kind, added, integral) = if k128 * q >= p * n128 {
        // k/α − n = (kq − pn)/p
        let num = k128 * q - p * n128;
        let added = (num / p) as usize;
        node_map.extend((0..added).map(|index| NodeRole::Padding { index }));
        (GadgetKind::CliquePadding, added, num % p == 0)
    } else {
        // (αn − k)/(1 − α) = (pn − kq)/(q − p)
        let num = p * n128 - k128 * q;
        let den = q - p;
        let added = num.div_ceil(den) as usize;
        for a in 0..added {
            let ua = n + a;
            edges.extend((0..n).map(|v| (v, ua)));
            edges.extend((0..a).map(|b| (n + b, ua)));
        }
        node_map.extend((0..added).map(|index| NodeRole::Universal { index }));
        (GadgetKind::CliqueUniversal, added, num % den == 0)
    };
    let n_prime = n + added;
    Ok(GadgetOutput {
        graph: Graph::from_edges(n_prime, edges)?,
        node_map,
        params: GadgetParams {
            kind,
            alpha,
            k: Some(k),
            n,
            n_prime,
            integral,
        },
    })
}

/// ω(G) ≥ α·|V(G)|, decided exactly.
pub fn has_alpha_clique(g: &Graph, alpha: Alpha) -> Result<bool> {
    let omega = clique_number(g)?;
    Ok(omega as u128 * alpha.den() as u128 >= alpha.num() as u128 * g.n() as u128)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaStableCheck {
    pub clique_number: usize,
    /// ω(G) ≥ αn.
    pub has_alpha_clique: bool,
    /// ⌈αn⌉ + 1.
    pub target: usize,
    pub min_stable: Option<usize>,
    pub regular: bool,
    /// Whether a minimum stable set contains w_2 or w_3.
    pub uses_middle_hub: bool,
    pub equivalence_holds: bool,
}

/// Builds the α-stable gadget for `g` and checks
/// `ω(G) ≥ αn ⇔ MS_α(G′) = ⌈αn⌉ + 1` with the exact solvers.
pub fn check_alpha_stable_equivalence(g: &Graph, alpha: Alpha) -> Result<AlphaStableCheck> {
    let gadget = alpha_stable_gadget(g, alpha)?;
    let n = g.n();
    let cap = gadget.graph.n();
    let outcome = min_stable_set(
        &gadget.graph,
        ThresholdRule::alpha(alpha),
        ExactOptions::subsets().with_cap(cap),
    )?;
    let clique = clique_number(g)?;
    let has = has_alpha_clique(g, alpha)?;
    let target = alpha.ceil_mul(n) + 1;
    let min_stable = outcome.optimum();
    let uses_middle_hub = outcome
        .result()
        .is_some_and(|r| r.witness.contains(4 * n + 1) || r.witness.contains(4 * n + 2));
    Ok(AlphaStableCheck {
        clique_number: clique,
        has_alpha_clique: has,
        target,
        min_stable,
        regular: gadget.graph.regular_degree() == Some(n) && gadget.graph.n() == 4 * n + 4,
        uses_middle_hub,
        equivalence_holds: has == (min_stable == Some(target)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueShiftCheck {
    pub clique_number: usize,
    pub has_k_clique: bool,
    pub has_alpha_clique_prime: bool,
    pub integral: bool,
    /// Both directions, required on integral instances.
    pub equivalence_holds: bool,
    /// ω(G) ≥ k ⇒ ω(G′) ≥ αn′, which survives the rounding of the padding.
    pub forward_holds: bool,
}

/// Checks the clique-shift equivalence for one instance. On non-integral
/// instances only the forward implication is guaranteed: flooring the
/// isolated padding makes αn′ ≤ k, and ceiling |U| makes k + |U| ≥ αn′.
pub fn check_clique_shift(g: &Graph, k: usize, alpha: Alpha) -> Result<CliqueShiftCheck> {
    let gadget = clique_to_alpha_clique(g, k, alpha)?;
    let omega = clique_number(g)?;
    let has_k = omega >= k;
    let has_prime = has_alpha_clique(&gadget.graph, alpha)?;
    Ok(CliqueShiftCheck {
        clique_number: omega,
        has_k_clique: has_k,
        has_alpha_clique_prime: has_prime,
        integral: gadget.params.integral,
        equivalence_holds: has_k == has_prime,
        forward_holds: !has_k || has_prime,
    })
}
