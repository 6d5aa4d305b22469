mod init;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thresh_core::bounds::bounds_for_graph;
use thresh_core::dynamics;
use thresh_core::exact::{self, ExactOptions};
use thresh_core::experiment::{
    run_experiment, AuditConfig, ExperimentConfig, GuaranteeConfig, MixingConfig, ScalingConfig, SweepConfig,
    TightnessConfig,
};
use thresh_core::monopoly::{build_target_set, construct_stable_set, Certificate, ConstructionStats};
use thresh_core::reductions::{alpha_stable_gadget, clique_to_alpha_clique};
use thresh_core::spectral::{normalized_spectrum, sigma};
use thresh_core::{Alpha, CertifiedSet, Error, GeneratorSpec, Graph, SetKind, ThresholdRule};

use crate::init::InitSpec;

/// Threshold dynamics lab: generate graphs, measure expansion, simulate
/// r- and α-threshold dynamics, build stable and target sets, solve small
/// instances exactly and run seeded experiments.
///
/// Exit status: 0 on success, 1 on bad input or unmet preconditions, 2 when
/// a guarantee that should hold by construction is observed to fail.
#[derive(Debug, Parser)]
#[command(name = "thresh", version)]
struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit compact single-line JSON, also for commands whose default output
    /// is an edge list or CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Generate(GenArgs),
    /// Spectral profile: σ, γ, λ_2 and λ_n of the normalized adjacency.
    Sigma {
        #[arg(long)]
        graph: PathBuf,
        /// Include all eigenvalues, in descending order.
        #[arg(long)]
        full_spectrum: bool,
    },
    /// Run the dynamics to its limit cycle.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// `r=3` or `alpha=1/2`.
        #[arg(long)]
        rule: ThresholdRule,
        /// Blue-list file, `random:b0=K,seed=S` or `ball:v=V,ell=L`.
        #[arg(long)]
        init: InitSpec,
        /// Defaults to max(n², 16).
        #[arg(long)]
        max_rounds: Option<usize>,
    },
    /// Threshold, round and size bounds for a graph.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rule: ThresholdRule,
    },
    /// Certified stable set for the r-threshold rule on a regular graph.
    StableSet(SetArgs),
    /// Certified target set for the r-threshold rule on a regular graph.
    TargetSet(SetArgs),
    /// Exact optimum on a small graph.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        problem: Problem,
        /// Required for min-stable and min-target.
        #[arg(long)]
        rule: Option<ThresholdRule>,
        /// Override the node cap (20 for subset search, 40 for clique).
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Skip the closed-form answers for r = 1 and r = 2.
        #[arg(long)]
        force_enumeration: bool,
    },
    /// Build a hardness gadget. The graph goes to --out, the node map to --map.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        gadget: Gadget,
        #[arg(long)]
        alpha: Alpha,
        /// Clique size, for clique-shift.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Seeded experiments.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCmd,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Er,
    Regular,
    Complete,
    Cycle,
    Path,
    Star,
    Petersen,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Node count; for star, the number of leaves. Ignored for petersen.
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
}

impl GenArgs {
    fn spec(&self) -> anyhow::Result<GeneratorSpec> {
        let n = self.n;
        Ok(match self.kind {
            GenKind::Er => GeneratorSpec::ErdosRenyi {
                n,
                p: self.p.context("--kind er needs --p")?,
            },
            GenKind::Regular => GeneratorSpec::RandomRegular {
                n,
                d: self.d.context("--kind regular needs --d")?,
            },
            GenKind::Complete => GeneratorSpec::Complete { n },
            GenKind::Cycle => GeneratorSpec::Cycle { n },
            GenKind::Path => GeneratorSpec::Path { n },
            GenKind::Star => GeneratorSpec::Star { leaves: n },
            GenKind::Petersen => GeneratorSpec::Petersen,
        })
    }
}

#[derive(Debug, Args)]
struct SetArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    /// `auto` computes σ with the eigensolver; a number is used as given.
    #[arg(long, default_value = "auto")]
    sigma: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Problem {
    MinStable,
    MinTarget,
    MaxClique,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Gadget {
    AlphaStable,
    CliqueShift,
}

#[derive(Debug, Subcommand)]
enum ExperimentCmd {
    /// Outcome frequencies as b0 sweeps [0, n] on one random regular graph (CSV).
    ThresholdSweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/2")]
        alpha: Alpha,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Runs from ⌊b_low⌋ and ⌈b_high⌉ on fresh random regular graphs.
    ThresholdGuarantees {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/2")]
        alpha: Alpha,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Rounds to the limit cycle versus n (CSV).
    RoundScaling {
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/2")]
        alpha: Alpha,
        #[arg(long, default_value_t = 0.3)]
        b0_fraction: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Random (A, B) pairs against the mixing inequality.
    MixingCheck {
        #[arg(long)]
        n: usize,
        /// Comma-separated degrees, cycled across graphs.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        graphs: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
    /// Blue ball around one node on a random regular graph.
    TightnessBall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/2")]
        alpha: Alpha,
        /// Defaults to ⌊½·log_d n⌋.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = 0)]
        center: usize,
    },
    /// Stable and target set sizes against 2βn + 1/β across seeds.
    TargetBoundAudit {
        #[command(flatten)]
        graph: GenArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Run a JSON ExperimentConfig file; its master_seed overrides --seed.
    FromConfig { path: PathBuf },
}

impl ExperimentCmd {
    fn config(&self, master_seed: u64) -> anyhow::Result<ExperimentConfig> {
        Ok(match self {
            &ExperimentCmd::ThresholdSweep {
                n,
                d,
                alpha,
                trials,
                steps,
            } => ExperimentConfig::ThresholdSweep(SweepConfig {
                n,
                d,
                alpha,
                trials,
                steps,
                master_seed,
            }),
            &ExperimentCmd::ThresholdGuarantees { n, d, alpha, trials } => {
                ExperimentConfig::ThresholdGuarantees(GuaranteeConfig {
                    n,
                    d,
                    alpha,
                    trials,
                    master_seed,
                })
            }
            ExperimentCmd::RoundScaling {
                ns,
                d,
                alpha,
                b0_fraction,
                trials,
            } => ExperimentConfig::RoundScaling(ScalingConfig {
                ns: ns.clone(),
                d: *d,
                alpha: *alpha,
                b0_fraction: *b0_fraction,
                trials: *trials,
                master_seed,
            }),
            ExperimentCmd::MixingCheck {
                n,
                degrees,
                graphs,
                pairs,
            } => ExperimentConfig::MixingCheck(MixingConfig {
                n: *n,
                degrees: degrees.clone(),
                graphs: *graphs,
                pairs_per_graph: *pairs,
                master_seed,
            }),
            &ExperimentCmd::TightnessBall {
                n,
                d,
                alpha,
                ell,
                center,
            } => ExperimentConfig::TightnessBall(TightnessConfig {
                n,
                d,
                alpha,
                ell,
                center,
                master_seed,
            }),
            ExperimentCmd::TargetBoundAudit { graph, r, trials } => ExperimentConfig::TargetBoundAudit(AuditConfig {
                graph: graph.spec()?,
                r: *r,
                trials: *trials,
                master_seed,
            }),
            ExperimentCmd::FromConfig { path } => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
        })
    }
}

/// Where the primary output goes, and in which JSON style.
struct Sink {
    out: Option<PathBuf>,
    json: bool,
}

impl Sink {
    fn writer(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn emit<T: Serialize>(&self, value: &T) -> anyhow::Result<()> {
        let mut w = self.writer()?;
        if self.json {
            serde_json::to_writer(&mut w, value)?;
        } else {
            serde_json::to_writer_pretty(&mut w, value)?;
        }
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Graph::read_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct GraphJson {
    n: usize,
    m: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SigmaJson {
    sigma: f64,
    gamma: f64,
    lambda2: f64,
    #[serde(rename = "lambdaN")]
    lambda_n: f64,
    n: usize,
    m: usize,
    disconnected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct SetJson<'a> {
    nodes: Vec<usize>,
    size: usize,
    bound: f64,
    certified: bool,
    sigma: f64,
    kind: SetKind,
    rule: ThresholdRule,
    certificate: &'a Certificate,
    stats: &'a ConstructionStats,
}

#[derive(Serialize)]
struct ReduceJson<'a> {
    /// Edge count of the output graph.
    m_prime: usize,
    #[serde(flatten)]
    params: &'a thresh_core::reductions::GadgetParams,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let sink = Sink {
        out: cli.out.clone(),
        json: cli.json,
    };
    match cli.command {
        Command::Generate(args) => {
            let g = args.spec()?.generate(cli.seed)?;
            if cli.json {
                sink.emit(&GraphJson {
                    n: g.n(),
                    m: g.m(),
                    edges: g.edges().collect(),
                })?;
            } else {
                let mut w = sink.writer()?;
                g.write_edge_list(&mut w)?;
                w.flush()?;
            }
        }
        Command::Sigma { graph, full_spectrum } => {
            let g = read_graph(&graph)?;
            let p = normalized_spectrum(&g)?;
            sink.emit(&SigmaJson {
                sigma: p.sigma,
                gamma: p.gamma,
                lambda2: p.lambda2(),
                lambda_n: p.lambda_n(),
                n: p.n,
                m: p.m,
                disconnected: p.disconnected,
                spectrum: full_spectrum.then(|| p.eigenvalues.clone()),
            })?;
        }
        Command::Simulate {
            graph,
            rule,
            init,
            max_rounds,
        } => {
            let g = read_graph(&graph)?;
            let c0 = init.coloring(&g)?;
            let res = dynamics::run(
                &g,
                &c0,
                rule,
                max_rounds.unwrap_or_else(|| dynamics::default_max_rounds(&g)),
            )?;
            sink.emit(&res)?;
        }
        Command::Bounds { graph, rule } => {
            let g = read_graph(&graph)?;
            let p = normalized_spectrum(&g)?;
            sink.emit(&bounds_for_graph(&g, rule, &p)?)?;
        }
        Command::StableSet(args) => emit_set(&sink, &args, cli.seed, construct_stable_set)?,
        Command::TargetSet(args) => emit_set(&sink, &args, cli.seed, build_target_set)?,
        Command::Exact {
            graph,
            problem,
            rule,
            max_nodes,
            force_enumeration,
        } => {
            let g = read_graph(&graph)?;
            let mut opts = match problem {
                Problem::MaxClique => ExactOptions::clique(),
                _ => ExactOptions::subsets(),
            };
            if let Some(cap) = max_nodes {
                if cap > opts.max_nodes {
                    log::warn!(
                        "raising the node cap from {} to {cap}; the search is exponential in n",
                        opts.max_nodes
                    );
                }
                opts = opts.with_cap(cap);
            }
            if force_enumeration {
                opts = opts.enumerate();
            }
            let need_rule = || rule.context("--rule is required for this problem");
            let outcome = match problem {
                Problem::MinStable => exact::min_stable_set(&g, need_rule()?, opts)?,
                Problem::MinTarget => exact::min_target_set(&g, need_rule()?, opts)?,
                Problem::MaxClique => exact::max_clique(&g, opts)?,
            };
            sink.emit(&outcome)?;
        }
        Command::Reduce {
            graph,
            gadget,
            alpha,
            k,
            map,
        } => {
            let g = read_graph(&graph)?;
            let output = match gadget {
                Gadget::AlphaStable => alpha_stable_gadget(&g, alpha)?,
                Gadget::CliqueShift => clique_to_alpha_clique(&g, k.context("clique-shift needs --k")?, alpha)?,
            };
            if let Some(map) = &map {
                write_json_file(map, &output)?;
            }
            match &cli.out {
                Some(path) => {
                    let mut w = sink.writer()?;
                    output.graph.write_edge_list(&mut w)?;
                    w.flush()?;
                    let summary = ReduceJson {
                        m_prime: output.graph.m(),
                        params: &output.params,
                    };
                    log::info!("wrote gadget to {}", path.display());
                    if cli.json {
                        println!("{}", serde_json::to_string(&summary)?);
                    } else {
                        println!("{}", serde_json::to_string_pretty(&summary)?);
                    }
                }
                None => {
                    let mut w = sink.writer()?;
                    output.graph.write_edge_list(&mut w)?;
                    w.flush()?;
                }
            }
        }
        Command::Experiment { kind } => {
            let cfg = kind.config(cli.seed)?;
            let mut w = sink.writer()?;
            let summary = run_experiment(&cfg, cli.json, &mut w)?;
            w.flush()?;
            if !summary.passed {
                log::error!("{}: an observed run contradicts a guarantee", summary.experiment);
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_set(
    sink: &Sink,
    args: &SetArgs,
    seed: u64,
    build: fn(&Graph, usize, f64, u64) -> thresh_core::Result<CertifiedSet>,
) -> anyhow::Result<()> {
    let g = read_graph(&args.graph)?;
    let s = match args.sigma.as_str() {
        "auto" => sigma(&g)?,
        text => {
            let v: f64 = text
                .parse()
                .with_context(|| format!("--sigma must be auto or a number, got {text:?}"))?;
            if !(0.0..=1.0).contains(&v) {
                bail!("--sigma must lie in [0, 1], got {v}");
            }
            v
        }
    };
    let set = build(&g, args.r, s, seed)?;
    sink.emit(&SetJson {
        nodes: set.nodes.to_vec(),
        size: set.size(),
        bound: set.stats.size_bound,
        certified: true,
        sigma: s,
        kind: set.kind,
        rule: set.rule,
        certificate: &set.certificate,
        stats: &set.stats,
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_invariant_violation() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
