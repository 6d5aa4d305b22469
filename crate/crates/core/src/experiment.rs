//! Seeded experiments that check the threshold, round, mixing and size
//! guarantees empirically. Every trial draws its randomness from
//! `derive_seed(master_seed, i)`, and rows are emitted in trial order, so a
//! configuration reproduces byte-identical output regardless of scheduling.

use std::io::Write;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{alpha_bounds, AlphaBounds};
use crate::dynamics::{self, ball_coloring, random_coloring, Coloring, Outcome};
use crate::error::{Error, Result};
use crate::generators::{gen_random_regular, GeneratorSpec};
use crate::graph::Graph;
use crate::monopoly::{build_target_set, construct_stable_set, verify_stable, verify_target};
use crate::nodeset::NodeSet;
use crate::rule::{Alpha, ThresholdRule};
use crate::seed::{derive_seed, rng};
use crate::spectral::sigma;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Slack added to the right-hand side of the mixing inequality.
pub const MIXING_TOLERANCE: f64 = 1e-9;

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

fn write_header<W: Write, C: Serialize>(w: &mut W, name: &str, cfg: &C, extra: &[(&str, String)]) -> Result<()> {
    writeln!(w, "# thresh {VERSION}")?;
    writeln!(w, "# experiment: {name}")?;
    writeln!(w, "# config: {}", serde_json::to_string(cfg)?)?;
    for (k, v) in extra {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Threshold guarantees on fresh random regular graphs
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeConfig {
    pub n: usize,
    pub d: usize,
    pub alpha: Alpha,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideResult {
    pub b0: usize,
    pub outcome: Outcome,
    pub rounds: usize,
    /// 4·log_base n, when the base exceeds 1.
    pub round_cap: Option<f64>,
    pub meaningful: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeTrial {
    pub trial: usize,
    pub graph_seed: u64,
    pub sigma: f64,
    pub bounds: AlphaBounds,
    /// b0 = ⌊b_low⌋ random blue nodes.
    pub red: Option<SideResult>,
    /// b0 = ⌈b_high⌉ random blue nodes.
    pub blue: Option<SideResult>,
}

/// For each trial: a fresh random d-regular graph, its measured σ, and two
/// runs from uniformly random seeds of size ⌊b_low⌋ and ⌈b_high⌉. A side is
/// skipped when its seed size falls outside `[0, n]`.
pub fn threshold_guarantees(cfg: &GuaranteeConfig) -> Result<Vec<GuaranteeTrial>> {
    check_trials(cfg.trials)?;
    let rule = ThresholdRule::alpha(cfg.alpha);
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let graph_seed = derive_seed(cfg.master_seed, 3 * trial as u64);
            let g = gen_random_regular(cfg.n, cfg.d, graph_seed)?;
            let s = sigma(&g)?;
            let bounds = alpha_bounds(cfg.n, cfg.alpha, s)?;
            let side = |b0: i64, cap: Option<f64>, meaningful: bool, seed: u64| -> Result<Option<SideResult>> {
                if b0 < 0 || b0 as usize > cfg.n {
                    return Ok(None);
                }
                let c0 = random_coloring(cfg.n, b0 as usize, seed)?;
                let res = dynamics::run(&g, &c0, rule, dynamics::default_max_rounds(&g))?;
                Ok(Some(SideResult {
                    b0: b0 as usize,
                    outcome: res.outcome,
                    rounds: res.rounds,
                    round_cap: cap,
                    meaningful,
                }))
            };
            let red = side(
                bounds.b_low_floor,
                bounds.red_round_cap(),
                bounds.red_meaningful,
                derive_seed(cfg.master_seed, 3 * trial as u64 + 1),
            )?;
            let blue = side(
                bounds.b_high_ceil,
                bounds.blue_round_cap(),
                bounds.blue_meaningful,
                derive_seed(cfg.master_seed, 3 * trial as u64 + 2),
            )?;
            Ok(GuaranteeTrial {
                trial,
                graph_seed,
                sigma: s,
                bounds,
                red,
                blue,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Threshold sweep
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub d: usize,
    pub alpha: Alpha,
    /// Runs per b0 value.
    pub trials: usize,
    /// Number of equal steps across [0, n].
    pub steps: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub b0: usize,
    pub trials: usize,
    pub frac_all_blue: f64,
    pub frac_all_red: f64,
    pub mean_rounds: f64,
    /// `b_low` or `b_high` when the row sits on a bound, else empty.
    pub marker: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub sigma: f64,
    pub bounds: AlphaBounds,
    pub rows: Vec<SweepRow>,
}

/// Sweeps b0 across [0, n] on one random d-regular graph (seeded from
/// `derive_seed(master, 0)`), with ⌊b_low⌋ and ⌈b_high⌉ added to the grid.
pub fn threshold_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    check_trials(cfg.trials)?;
    if cfg.steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let g = gen_random_regular(cfg.n, cfg.d, derive_seed(cfg.master_seed, 0))?;
    let s = sigma(&g)?;
    let bounds = alpha_bounds(cfg.n, cfg.alpha, s)?;
    if !bounds.red_meaningful || !bounds.blue_meaningful {
        log::warn!(
            "sigma = {s:.4}: at least one threshold statement is vacuous for n={}, d={}, alpha={}",
            cfg.n,
            cfg.d,
            cfg.alpha
        );
    }
    let mut grid: Vec<usize> = (0..=cfg.steps).map(|i| i * cfg.n / cfg.steps).collect();
    let in_range = |b: i64| (b >= 0 && b as usize <= cfg.n).then_some(b as usize);
    let low = in_range(bounds.b_low_floor);
    let high = in_range(bounds.b_high_ceil);
    grid.extend(low);
    grid.extend(high);
    grid.sort_unstable();
    grid.dedup();

    let rule = ThresholdRule::alpha(cfg.alpha);
    let max_rounds = dynamics::default_max_rounds(&g);
    let rows = grid
        .iter()
        .enumerate()
        .map(|(gi, &b0)| {
            let runs: Vec<_> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(cfg.master_seed, 1 + (gi * cfg.trials + t) as u64);
                    let c0 = random_coloring(cfg.n, b0, seed)?;
                    dynamics::run(&g, &c0, rule, max_rounds)
                })
                .collect::<Result<_>>()?;
            let count = |o: Outcome| runs.iter().filter(|r| r.outcome == o).count() as f64;
            let trials = cfg.trials as f64;
            let marker = match (Some(b0) == low, Some(b0) == high) {
                (true, true) => "b_low;b_high",
                (true, false) => "b_low",
                (false, true) => "b_high",
                _ => "",
            };
            Ok(SweepRow {
                b0,
                trials: cfg.trials,
                frac_all_blue: count(Outcome::AllBlue) / trials,
                frac_all_red: count(Outcome::AllRed) / trials,
                mean_rounds: runs.iter().map(|r| r.rounds as f64).sum::<f64>() / trials,
                marker: marker.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepOutput { sigma: s, bounds, rows })
}

impl SweepOutput {
    pub fn write_csv<W: Write>(&self, cfg: &SweepConfig, mut w: W) -> Result<()> {
        write_header(
            &mut w,
            "threshold-sweep",
            cfg,
            &[
                ("sigma", format!("{:.12}", self.sigma)),
                ("b_low", format!("{:.6}", self.bounds.b_low)),
                ("b_high", format!("{:.6}", self.bounds.b_high)),
                (
                    "units",
                    "b0 = initial blue nodes; rounds = synchronous rounds to the limit cycle".into(),
                ),
            ],
        )?;
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            csv.serialize(row)?;
        }
        csv.flush()?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Round scaling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub ns: Vec<usize>,
    pub d: usize,
    pub alpha: Alpha,
    /// Initial blue count as a fraction of n.
    pub b0_fraction: f64,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub b0: usize,
    pub trials: usize,
    pub mean_rounds: f64,
    pub max_rounds: usize,
    pub frac_consensus: f64,
    /// mean_rounds / ln n.
    pub rounds_per_ln_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingOutput {
    pub rows: Vec<ScalingRow>,
    /// Smallest C with mean_rounds ≤ C·ln n on every row.
    pub fitted_constant: f64,
}

/// Rounds to the limit cycle versus n at fixed d, α and relative b0, each
/// trial on a fresh random regular graph.
pub fn round_scaling(cfg: &ScalingConfig) -> Result<ScalingOutput> {
    check_trials(cfg.trials)?;
    if !(0.0..=1.0).contains(&cfg.b0_fraction) {
        return Err(Error::InvalidParameter("b0_fraction must lie in [0, 1]".into()));
    }
    let rule = ThresholdRule::alpha(cfg.alpha);
    let rows: Vec<ScalingRow> = cfg
        .ns
        .iter()
        .enumerate()
        .map(|(ni, &n)| {
            let b0 = (cfg.b0_fraction * n as f64).round() as usize;
            let runs: Vec<_> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let idx = 2 * (ni * cfg.trials + t) as u64;
                    let g = gen_random_regular(n, cfg.d, derive_seed(cfg.master_seed, idx))?;
                    let c0 = random_coloring(n, b0, derive_seed(cfg.master_seed, idx + 1))?;
                    dynamics::run(&g, &c0, rule, dynamics::default_max_rounds(&g))
                })
                .collect::<Result<_>>()?;
            let trials = cfg.trials as f64;
            let mean_rounds = runs.iter().map(|r| r.rounds as f64).sum::<f64>() / trials;
            let consensus = runs
                .iter()
                .filter(|r| matches!(r.outcome, Outcome::AllBlue | Outcome::AllRed))
                .count();
            Ok(ScalingRow {
                n,
                b0,
                trials: cfg.trials,
                mean_rounds,
                max_rounds: runs.iter().map(|r| r.rounds).max().unwrap_or(0),
                frac_consensus: consensus as f64 / trials,
                rounds_per_ln_n: mean_rounds / (n as f64).ln(),
            })
        })
        .collect::<Result<_>>()?;
    let fitted_constant = rows.iter().map(|r| r.rounds_per_ln_n).fold(0.0, f64::max);
    Ok(ScalingOutput { rows, fitted_constant })
}

impl ScalingOutput {
    pub fn write_csv<W: Write>(&self, cfg: &ScalingConfig, mut w: W) -> Result<()> {
        write_header(
            &mut w,
            "round-scaling",
            cfg,
            &[
                ("fitted_constant", format!("{:.6}", self.fitted_constant)),
                (
                    "units",
                    "rounds = synchronous rounds to the limit cycle; ln is natural log".into(),
                ),
            ],
        )?;
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            csv.serialize(row)?;
        }
        csv.flush()?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tightness: a blue ball around one node
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessConfig {
    pub n: usize,
    pub d: usize,
    pub alpha: Alpha,
    /// Ball radius; `None` uses ⌊½·log_d n⌋.
    pub ell: Option<usize>,
    pub center: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub n: usize,
    pub d: usize,
    pub ell: usize,
    pub ell_formula: usize,
    pub b0: usize,
    /// d^(ℓ+1).
    pub ball_size_bound: f64,
    pub outcome: Outcome,
    pub rounds: usize,
    /// Last round (from 0) through which the center was continuously blue.
    pub center_blue_through: Option<usize>,
    pub all_red: bool,
    pub rounds_at_least_ell: bool,
    pub center_blue_until_ell: bool,
    pub ball_within_bound: bool,
}

impl TightnessReport {
    pub fn passed(&self) -> bool {
        self.all_red && self.rounds_at_least_ell && self.center_blue_until_ell && self.ball_within_bound
    }
}

/// Largest ℓ with d^(2ℓ) ≤ n, i.e. ⌊½·log_d n⌋ in exact integer arithmetic.
pub fn half_log_radius(n: usize, d: usize) -> usize {
    if d < 2 {
        return 0;
    }
    let mut ell = 0usize;
    let mut pow = 1u128; // d^(2ℓ)
    let d2 = (d as u128) * (d as u128);
    while pow * d2 <= n as u128 {
        pow *= d2;
        ell += 1;
    }
    ell
}

pub fn tightness_ball(cfg: &TightnessConfig) -> Result<TightnessReport> {
    let g = gen_random_regular(cfg.n, cfg.d, derive_seed(cfg.master_seed, 0))?;
    tightness_on_graph(&g, cfg.alpha, cfg.ell, cfg.center)
}

/// Blue ball of radius ℓ around `center`, everything else red, under the
/// α-threshold rule.
pub fn tightness_on_graph(g: &Graph, alpha: Alpha, ell: Option<usize>, center: usize) -> Result<TightnessReport> {
    let d = g.max_degree();
    let ell_formula = half_log_radius(g.n(), d);
    let ell = ell.unwrap_or(ell_formula);
    let c0 = ball_coloring(g, center, ell)?;
    let b0 = c0.blue_count();
    let mut blue_through: Option<usize> = None;
    let mut broken = false;
    let res = dynamics::run_observed(
        g,
        &c0,
        ThresholdRule::alpha(alpha),
        dynamics::default_max_rounds(g),
        |t, c: &Coloring| {
            if !broken && c.is_blue(center) {
                blue_through = Some(t);
            } else {
                broken = true;
            }
        },
    )?;
    let ball_size_bound = (d as f64).powi(ell as i32 + 1);
    let all_red = res.outcome == Outcome::AllRed;
    Ok(TightnessReport {
        n: g.n(),
        d,
        ell,
        ell_formula,
        b0,
        ball_size_bound,
        outcome: res.outcome,
        rounds: res.rounds,
        center_blue_through: blue_through,
        all_red,
        rounds_at_least_ell: all_red && res.rounds >= ell,
        center_blue_until_ell: ell == 0 || blue_through.is_some_and(|t| t + 1 >= ell),
        ball_within_bound: b0 as f64 <= ball_size_bound,
    })
}

// ---------------------------------------------------------------------------
// Mixing inequality check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingConfig {
    pub n: usize,
    /// Degrees cycled through across graphs.
    pub degrees: Vec<usize>,
    pub graphs: usize,
    pub pairs_per_graph: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingGraphReport {
    pub d: usize,
    pub sigma: f64,
    pub pairs: usize,
    pub violations: usize,
    /// max |e(A,B) − |A||B|d/n| / (σd√(…)) over pairs with a nonzero bound.
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub graphs: Vec<MixingGraphReport>,
    pub total_pairs: usize,
    pub violations: usize,
}

/// Left and right sides of the mixing inequality for one pair.
pub fn mixing_sides(g: &Graph, d: usize, sigma: f64, a: &NodeSet, b: &NodeSet) -> (f64, f64) {
    let n = g.n() as f64;
    let (sa, sb) = (a.len() as f64, b.len() as f64);
    let e = g.edge_boundary_count(a, b) as f64;
    let lhs = (e - sa * sb * d as f64 / n).abs();
    let rhs = sigma * d as f64 * (sa * sb * (1.0 - sa / n) * (1.0 - sb / n)).max(0.0).sqrt();
    (lhs, rhs)
}

fn random_subset(n: usize, rng: &mut impl Rng) -> NodeSet {
    let size = rng.gen_range(0..=n);
    NodeSet::from_nodes(n, sample(rng, n, size)).expect("sampled ids are in range")
}

pub fn mixing_check(cfg: &MixingConfig) -> Result<MixingReport> {
    if cfg.degrees.is_empty() || cfg.graphs == 0 {
        return Err(Error::InvalidParameter("need at least one degree and one graph".into()));
    }
    let graphs: Vec<MixingGraphReport> = (0..cfg.graphs)
        .into_par_iter()
        .map(|i| {
            let d = cfg.degrees[i % cfg.degrees.len()];
            let g = gen_random_regular(cfg.n, d, derive_seed(cfg.master_seed, 2 * i as u64))?;
            let s = sigma(&g)?;
            let mut r = rng(derive_seed(cfg.master_seed, 2 * i as u64 + 1));
            let mut violations = 0;
            let mut max_ratio: f64 = 0.0;
            for _ in 0..cfg.pairs_per_graph {
                let a = random_subset(cfg.n, &mut r);
                let b = random_subset(cfg.n, &mut r);
                let (lhs, rhs) = mixing_sides(&g, d, s, &a, &b);
                if lhs > rhs + MIXING_TOLERANCE {
                    violations += 1;
                }
                if rhs > 0.0 {
                    max_ratio = max_ratio.max(lhs / rhs);
                }
            }
            Ok(MixingGraphReport {
                d,
                sigma: s,
                pairs: cfg.pairs_per_graph,
                violations,
                max_ratio,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MixingReport {
        total_pairs: graphs.iter().map(|g| g.pairs).sum(),
        violations: graphs.iter().map(|g| g.violations).sum(),
        graphs,
    })
}

// ---------------------------------------------------------------------------
// Target-set size audit
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub graph: GeneratorSpec,
    pub r: usize,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub trial: usize,
    pub sigma: f64,
    pub beta: f64,
    pub min_size: usize,
    pub stable_size: usize,
    pub target_size: usize,
    /// 2βn + 1/β.
    pub bound: f64,
    pub stable_certified: bool,
    pub target_certified: bool,
    /// Both sizes within [⌊βn⌋, 2βn + 1/β + 1].
    pub within_bound: bool,
}

/// Builds a stable set and a target set per trial graph and re-verifies both
/// independently of the construction's own certificate.
pub fn target_bound_audit(cfg: &AuditConfig) -> Result<Vec<AuditRow>> {
    check_trials(cfg.trials)?;
    let rule = ThresholdRule::r(cfg.r)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let g = cfg.graph.generate(derive_seed(cfg.master_seed, 2 * trial as u64))?;
            let s = sigma(&g)?;
            let seed = derive_seed(cfg.master_seed, 2 * trial as u64 + 1);
            let stable = construct_stable_set(&g, cfg.r, s, seed)?;
            let target = build_target_set(&g, cfg.r, s, seed)?;
            let beta = stable.stats.beta;
            let bound = stable.stats.size_bound;
            let min_size = stable.stats.min_part_size;
            let fits = |k: usize| k >= min_size && k as f64 <= bound + 1.0;
            Ok(AuditRow {
                trial,
                sigma: s,
                beta,
                min_size,
                stable_size: stable.size(),
                target_size: target.size(),
                bound,
                stable_certified: verify_stable(&g, &stable.nodes, rule),
                target_certified: verify_target(&g, &target.nodes, rule)?,
                within_bound: fits(stable.size()) && fits(target.size()),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Unified configuration
// ---------------------------------------------------------------------------

/// Any experiment, tagged by name, e.g.
/// `{"experiment":"mixing-check","n":500,"degrees":[16],...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    ThresholdSweep(SweepConfig),
    ThresholdGuarantees(GuaranteeConfig),
    RoundScaling(ScalingConfig),
    MixingCheck(MixingConfig),
    TightnessBall(TightnessConfig),
    TargetBoundAudit(AuditConfig),
}

impl ExperimentConfig {
    pub fn master_seed(&self) -> u64 {
        match self {
            ExperimentConfig::ThresholdSweep(c) => c.master_seed,
            ExperimentConfig::ThresholdGuarantees(c) => c.master_seed,
            ExperimentConfig::RoundScaling(c) => c.master_seed,
            ExperimentConfig::MixingCheck(c) => c.master_seed,
            ExperimentConfig::TightnessBall(c) => c.master_seed,
            ExperimentConfig::TargetBoundAudit(c) => c.master_seed,
        }
    }
}

/// Outcome of an experiment whose guarantee can fail. `passed == false`
/// means an observed run contradicted a guarantee that should hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub experiment: &'static str,
    pub passed: bool,
}

/// Runs `cfg` and writes its result to `w`. Sweep and scaling experiments
/// write CSV, the others pretty JSON; `json` switches every experiment to
/// single-line JSON.
pub fn run_experiment<W: Write>(cfg: &ExperimentConfig, json: bool, mut w: W) -> Result<ExperimentSummary> {
    fn dump<W: Write, T: Serialize>(w: &mut W, value: &T, compact: bool) -> Result<()> {
        if compact {
            serde_json::to_writer(&mut *w, value)?;
        } else {
            serde_json::to_writer_pretty(&mut *w, value)?;
        }
        writeln!(w)?;
        Ok(())
    }
    let (name, passed) = match cfg {
        ExperimentConfig::ThresholdSweep(c) => {
            let out = threshold_sweep(c)?;
            if json {
                dump(&mut w, &out, json)?;
            } else {
                out.write_csv(c, &mut w)?;
            }
            let passed = out.rows.iter().all(|r| {
                !(r.marker.contains("b_high") && out.bounds.blue_meaningful && r.frac_all_blue < 1.0)
                    && !(r.marker.contains("b_low") && out.bounds.red_meaningful && r.frac_all_red < 1.0)
            });
            ("threshold-sweep", passed)
        }
        ExperimentConfig::ThresholdGuarantees(c) => {
            let trials = threshold_guarantees(c)?;
            dump(&mut w, &trials, json)?;
            let passed = trials.iter().all(|t| {
                let ok = |side: &Option<SideResult>, want: Outcome| {
                    side.as_ref().is_none_or(|s| {
                        !s.meaningful || (s.outcome == want && s.round_cap.is_none_or(|cap| s.rounds as f64 <= cap))
                    })
                };
                ok(&t.red, Outcome::AllRed) && ok(&t.blue, Outcome::AllBlue)
            });
            ("threshold-guarantees", passed)
        }
        ExperimentConfig::RoundScaling(c) => {
            let out = round_scaling(c)?;
            if json {
                dump(&mut w, &out, json)?;
            } else {
                out.write_csv(c, &mut w)?;
            }
            ("round-scaling", true)
        }
        ExperimentConfig::MixingCheck(c) => {
            let out = mixing_check(c)?;
            dump(&mut w, &out, json)?;
            ("mixing-check", out.violations == 0)
        }
        ExperimentConfig::TightnessBall(c) => {
            let out = tightness_ball(c)?;
            dump(&mut w, &out, json)?;
            ("tightness-ball", out.passed())
        }
        ExperimentConfig::TargetBoundAudit(c) => {
            let out = target_bound_audit(c)?;
            dump(&mut w, &out, json)?;
            let passed = out
                .iter()
                .all(|r| r.stable_certified && r.target_certified && r.within_bound);
            ("target-bound-audit", passed)
        }
    };
    Ok(ExperimentSummary {
        experiment: name,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Named};

    fn half() -> Alpha {
        Alpha::new(1, 2).unwrap()
    }

    #[test]
    fn half_log_radius_values() {
        assert_eq!(half_log_radius(10_000, 100), 1);
        assert_eq!(half_log_radius(9_999, 100), 0);
        assert_eq!(half_log_radius(1_000_000, 10), 3);
        assert_eq!(half_log_radius(50, 1), 0);
    }

    #[test]
    fn mixing_full_sets_are_exact() {
        let g = named(Named::Petersen, 10).unwrap();
        let all = NodeSet::full(10);
        let (lhs, rhs) = mixing_sides(&g, 3, 2.0 / 3.0, &all, &all);
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn mixing_small_run_has_no_violations() {
        let report = mixing_check(&MixingConfig {
            n: 120,
            degrees: vec![4, 10],
            graphs: 4,
            pairs_per_graph: 300,
            master_seed: 5,
        })
        .unwrap();
        assert_eq!(report.total_pairs, 1200);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn sweep_is_reproducible_and_marks_bounds() {
        let cfg = SweepConfig {
            n: 300,
            d: 40,
            alpha: half(),
            trials: 3,
            steps: 6,
            master_seed: 9,
        };
        let a = threshold_sweep(&cfg).unwrap();
        let mut ca = Vec::new();
        a.write_csv(&cfg, &mut ca).unwrap();
        let mut cb = Vec::new();
        threshold_sweep(&cfg).unwrap().write_csv(&cfg, &mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with("# thresh "));
        assert!(text.contains("b0,trials,frac_all_blue,frac_all_red,mean_rounds,marker"));
        let zero = &a.rows[0];
        assert_eq!((zero.b0, zero.frac_all_red, zero.mean_rounds), (0, 1.0, 0.0));
        let full = a.rows.last().unwrap();
        assert_eq!((full.b0, full.frac_all_blue, full.mean_rounds), (300, 1.0, 0.0));
        for row in &a.rows {
            if row.marker.contains("b_high") {
                assert_eq!(row.frac_all_blue, 1.0);
            }
            if row.marker.contains("b_low") {
                assert_eq!(row.frac_all_red, 1.0);
            }
        }
    }

    #[test]
    fn scaling_reports_constant() {
        let cfg = ScalingConfig {
            ns: vec![200, 400],
            d: 30,
            alpha: half(),
            b0_fraction: 0.3,
            trials: 3,
            master_seed: 1,
        };
        let out = round_scaling(&cfg).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows.iter().all(|r| r.frac_consensus == 1.0));
        assert!(out.fitted_constant > 0.0);
        let full = round_scaling(&ScalingConfig {
            b0_fraction: 1.0,
            ..cfg
        })
        .unwrap();
        assert!(full.rows.iter().all(|r| r.mean_rounds == 0.0));
    }

    #[test]
    fn tightness_radius_zero_flips_center() {
        let g = gen_random_regular(2_000, 100, 4).unwrap();
        let rep = tightness_on_graph(&g, half(), Some(0), 0).unwrap();
        assert_eq!(rep.b0, 1);
        assert_eq!(rep.center_blue_through, Some(0));
        assert!(rep.all_red);
        assert!(rep.passed());
    }

    #[test]
    fn audit_complete_graph() {
        let rows = target_bound_audit(&AuditConfig {
            graph: GeneratorSpec::Complete { n: 10 },
            r: 2,
            trials: 3,
            master_seed: 0,
        })
        .unwrap();
        for row in rows {
            assert!(row.target_size <= 9 && row.stable_certified && row.target_certified && row.within_bound);
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig::TargetBoundAudit(AuditConfig {
            graph: GeneratorSpec::Complete { n: 10 },
            r: 2,
            trials: 2,
            master_seed: 3,
        });
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.starts_with(r#"{"experiment":"target-bound-audit""#), "{text}");
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        let mut out = Vec::new();
        let summary = run_experiment(&cfg, false, &mut out).unwrap();
        assert!(summary.passed);
        assert_eq!(cfg.master_seed(), 3);
    }
}
