//! Synchronous r-threshold and α-threshold color dynamics.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::rule::ThresholdRule;
use crate::seed::rng;

/// One round's coloring: `blue` is B_t, its complement is R_t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    blue: NodeSet,
}

impl Coloring {
    pub fn from_blue(blue: NodeSet) -> Self {
        Coloring { blue }
    }

    pub fn all_red(n: usize) -> Self {
        Coloring {
            blue: NodeSet::empty(n),
        }
    }

    pub fn all_blue(n: usize) -> Self {
        Coloring { blue: NodeSet::full(n) }
    }

    pub fn blue(&self) -> &NodeSet {
        &self.blue
    }

    pub fn into_blue(self) -> NodeSet {
        self.blue
    }

    pub fn red(&self) -> NodeSet {
        self.blue.complement()
    }

    pub fn n(&self) -> usize {
        self.blue.capacity()
    }

    /// b_t.
    pub fn blue_count(&self) -> usize {
        self.blue.len()
    }

    /// r_t = n − b_t.
    pub fn red_count(&self) -> usize {
        self.n() - self.blue_count()
    }

    pub fn is_blue(&self, v: usize) -> bool {
        self.blue.contains(v)
    }

    pub fn is_all_blue(&self) -> bool {
        self.blue.is_full()
    }

    pub fn is_all_red(&self) -> bool {
        self.blue.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    AllBlue,
    AllRed,
    MixedFixed,
    TwoCycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub outcome: Outcome,
    /// First round whose state belongs to the limit cycle.
    pub rounds: usize,
    pub period: usize,
    /// b_t for t = 0 up to the round at which the cycle was detected.
    pub b_trace: Vec<usize>,
    #[serde(skip)]
    pub limit_states: Vec<Coloring>,
}

fn check_rule(g: &Graph, rule: ThresholdRule) -> Result<()> {
    if let ThresholdRule::AlphaThreshold { .. } = rule {
        if let Some(v) = g.first_isolated() {
            return Err(Error::IsolatedNode(v));
        }
    }
    Ok(())
}

fn check_coloring(g: &Graph, c: &Coloring) -> Result<()> {
    if c.n() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "coloring has {} nodes, graph has {}",
            c.n(),
            g.n()
        )));
    }
    Ok(())
}

fn step_unchecked(g: &Graph, c: &Coloring, rule: ThresholdRule) -> Coloring {
    let mut next = NodeSet::empty(g.n());
    for v in 0..g.n() {
        let blue = g.degree_in_unchecked(v, &c.blue);
        if rule.turns_blue(blue, g.degree(v)) {
            next.insert(v);
        }
    }
    Coloring { blue: next }
}

/// One synchronous round: every node is recolored against the input coloring.
pub fn step(g: &Graph, c: &Coloring, rule: ThresholdRule) -> Result<Coloring> {
    check_coloring(g, c)?;
    check_rule(g, rule)?;
    Ok(step_unchecked(g, c, rule))
}

/// Iterates [`step`] until the state repeats with period 1 or 2.
pub fn run(g: &Graph, c0: &Coloring, rule: ThresholdRule, max_rounds: usize) -> Result<RunResult> {
    run_observed(g, c0, rule, max_rounds, |_, _| {})
}

/// Like [`run`], calling `observe(t, state)` for every state computed,
/// starting with `t = 0`.
pub fn run_observed<F>(
    g: &Graph,
    c0: &Coloring,
    rule: ThresholdRule,
    max_rounds: usize,
    mut observe: F,
) -> Result<RunResult>
where
    F: FnMut(usize, &Coloring),
{
    check_coloring(g, c0)?;
    check_rule(g, rule)?;
    observe(0, c0);
    let mut b_trace = vec![c0.blue_count()];
    let mut prev2: Option<Coloring> = None;
    let mut prev = c0.clone();
    for t in 1..=max_rounds {
        let cur = step_unchecked(g, &prev, rule);
        observe(t, &cur);
        b_trace.push(cur.blue_count());
        if cur == prev {
            let outcome = if cur.is_all_blue() {
                Outcome::AllBlue
            } else if cur.is_all_red() {
                Outcome::AllRed
            } else {
                Outcome::MixedFixed
            };
            return Ok(RunResult {
                outcome,
                rounds: t - 1,
                period: 1,
                b_trace,
                limit_states: vec![cur],
            });
        }
        if prev2.as_ref() == Some(&cur) {
            return Ok(RunResult {
                outcome: Outcome::TwoCycle,
                rounds: t - 2,
                period: 2,
                b_trace,
                limit_states: vec![cur, prev],
            });
        }
        prev2 = Some(std::mem::replace(&mut prev, cur));
    }
    Err(Error::MaxRoundsExceeded(max_rounds))
}

/// Default round cap: n², floored at 16.
pub fn default_max_rounds(g: &Graph) -> usize {
    (g.n() * g.n()).max(16)
}

/// Blue ball of radius `ell` around `center`; everything else red.
pub fn ball_coloring(g: &Graph, center: usize, ell: usize) -> Result<Coloring> {
    Ok(Coloring::from_blue(g.ball(center, ell)?))
}

/// Uniformly random `b0`-subset colored blue.
pub fn random_coloring(n: usize, b0: usize, seed: u64) -> Result<Coloring> {
    if b0 > n {
        return Err(Error::InvalidParameter(format!("b0={b0} exceeds n={n}")));
    }
    let mut rng = rng(seed);
    let idx = sample(&mut rng, n, b0);
    Ok(Coloring::from_blue(NodeSet::from_nodes(n, idx)?))
}
