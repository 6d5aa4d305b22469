//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any of them fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use thresh_core::dynamics::{self, random_coloring, Coloring, Outcome};
use thresh_core::exact::{clique_number, min_stable_set, ExactOptions};
use thresh_core::experiment::{
    mixing_check, target_bound_audit, threshold_guarantees, tightness_ball, AuditConfig, GuaranteeConfig, MixingConfig,
    TightnessConfig,
};
use thresh_core::generators::{gen_erdos_renyi, gen_random_regular, named, GeneratorSpec, Named};
use thresh_core::reductions::{alpha_stable_gadget, check_alpha_stable_equivalence, check_clique_shift};
use thresh_core::seed::{derive_seed, rng};
use thresh_core::spectral::sigma;
use thresh_core::{Alpha, Graph, ThresholdRule};

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn alpha(p: u64, q: u64) -> Alpha {
    Alpha::new(p, q).unwrap()
}

fn threshold_guarantee_runs() -> (Vec<thresh_core::experiment::GuaranteeTrial>, Duration) {
    let start = Instant::now();
    let trials = threshold_guarantees(&GuaranteeConfig {
        n: 2000,
        d: 64,
        alpha: alpha(1, 2),
        trials: 20,
        master_seed: 2024,
    })
    .expect("guarantee trials");
    (trials, start.elapsed())
}

fn criterion_1(trials: &[thresh_core::experiment::GuaranteeTrial], elapsed: Duration) -> Verdict {
    let mut ok = 0;
    let mut worst = 0.0f64;
    for t in trials {
        if let Some(side) = &t.blue {
            let cap = side.round_cap.unwrap_or(f64::NAN);
            worst = worst.max(side.rounds as f64 / cap);
            if side.outcome == Outcome::AllBlue && (side.rounds as f64) <= cap {
                ok += 1;
            }
        }
    }
    let sig: Vec<f64> = trials.iter().map(|t| t.sigma).collect();
    let smax = sig.iter().cloned().fold(0.0, f64::max);
    let secs = elapsed.as_secs_f64();
    verdict(
        ok == 20 && secs < 60.0,
        format!(
            "{ok}/20 all_blue within cap (max rounds/cap {worst:.4}, max sigma {smax:.4}, {secs:.1}s for both sides)"
        ),
    )
}

fn criterion_2(trials: &[thresh_core::experiment::GuaranteeTrial], elapsed: Duration) -> Verdict {
    let mut ok = 0;
    let mut worst = 0.0f64;
    for t in trials {
        if let Some(side) = &t.red {
            let cap = side.round_cap.unwrap_or(f64::NAN);
            worst = worst.max(side.rounds as f64 / cap);
            if side.outcome == Outcome::AllRed && (side.rounds as f64) <= cap {
                ok += 1;
            }
        }
    }
    let secs = elapsed.as_secs_f64();
    verdict(
        ok == 20 && secs < 60.0,
        format!("{ok}/20 all_red within cap (max rounds/cap {worst:.4})"),
    )
}

fn criterion_3() -> Verdict {
    let report = mixing_check(&MixingConfig {
        n: 500,
        degrees: vec![8, 16, 32],
        graphs: 10,
        pairs_per_graph: 1000,
        master_seed: 3,
    })
    .expect("mixing check");
    let worst = report.graphs.iter().map(|g| g.max_ratio).fold(0.0, f64::max);
    verdict(
        report.violations == 0,
        format!(
            "{} violations over {} pairs on {} graphs (max lhs/rhs {worst:.4})",
            report.violations,
            report.total_pairs,
            report.graphs.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for d in [4usize, 9, 16, 25] {
        let sigmas: Vec<f64> = (0..20u64)
            .into_par_iter()
            .map(|s| sigma(&gen_random_regular(1000, d, derive_seed(40 + d as u64, s)).unwrap()).unwrap())
            .collect();
        let limit = 2.0 / (d as f64).sqrt() + 0.15;
        let within = sigmas.iter().filter(|&&s| s <= limit).count();
        pass &= within * 100 >= 95 * sigmas.len();
        let max = sigmas.iter().cloned().fold(0.0, f64::max);
        parts.push(format!("d={d}: {within}/20 (max {max:.4} vs {limit:.4})"));
    }
    verdict(pass, parts.join("; "))
}

fn criterion_5() -> Verdict {
    let rows = target_bound_audit(&AuditConfig {
        graph: GeneratorSpec::RandomRegular { n: 200, d: 16 },
        r: 2,
        trials: 20,
        master_seed: 5,
    });
    match rows {
        Ok(rows) => {
            let ok = rows
                .iter()
                .filter(|r| r.sigma < 1.0 && r.stable_certified && r.target_certified && r.within_bound)
                .count();
            let max_t = rows.iter().map(|r| r.target_size).max().unwrap_or(0);
            let bound = rows.iter().map(|r| r.bound).fold(f64::INFINITY, f64::min);
            verdict(
                ok == 20,
                format!("{ok}/20 certified within size bound (largest target {max_t}, smallest bound {bound:.2})"),
            )
        }
        Err(e) => verdict(false, format!("construction failed: {e}")),
    }
}

/// Canonical form of a graph on at most 7 nodes: the smallest upper-triangle
/// edge mask over all relabelings.
#[allow(clippy::needless_range_loop)]
fn canonical(g: &Graph) -> (usize, u32) {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u32::MAX;
    let mut bit = vec![vec![0u32; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            bit[i][j] = 1 << k;
            bit[j][i] = 1 << k;
            k += 1;
        }
    }
    fn rec(i: usize, perm: &mut Vec<usize>, g: &Graph, bit: &[Vec<u32>], best: &mut u32) {
        if i == perm.len() {
            let mask = g.edges().fold(0u32, |m, (u, v)| m | bit[perm[u]][perm[v]]);
            *best = (*best).min(mask);
            return;
        }
        for j in i..perm.len() {
            perm.swap(i, j);
            rec(i + 1, perm, g, bit, best);
            perm.swap(i, j);
        }
    }
    rec(0, &mut perm, g, &bit, &mut best);
    (n, best)
}

fn criterion_6() -> Verdict {
    let mut r = rng(6);
    let mut seen = HashSet::new();
    let mut graphs = Vec::new();
    let mut draws = 0u64;
    while graphs.len() < 300 {
        draws += 1;
        let n = r.gen_range(1..=7usize);
        let p = r.gen_range(0.15..0.9);
        let g = gen_erdos_renyi(n, p, derive_seed(6, draws)).unwrap();
        if g.is_connected() && seen.insert(canonical(&g)) {
            graphs.push(g);
        }
    }
    let mut agree = 0;
    let mut with_cycle = 0;
    for g in &graphs {
        let rule1 = ThresholdRule::r(1).unwrap();
        let rule2 = ThresholdRule::r(2).unwrap();
        let s1 = min_stable_set(g, rule1, ExactOptions::subsets()).unwrap().optimum();
        let e1 = min_stable_set(g, rule1, ExactOptions::subsets().enumerate())
            .unwrap()
            .optimum();
        let s2 = min_stable_set(g, rule2, ExactOptions::subsets()).unwrap().optimum();
        let e2 = min_stable_set(g, rule2, ExactOptions::subsets().enumerate())
            .unwrap()
            .optimum();
        let girth = g.girth();
        with_cycle += girth.is_some() as usize;
        let ms1_ok = s1 == e1 && (g.m() == 0 || e1 == Some(2));
        let ms2_ok = s2 == e2 && e2 == girth;
        if ms1_ok && ms2_ok {
            agree += 1;
        }
    }
    verdict(
        agree == graphs.len(),
        format!(
            "{agree}/{} non-isomorphic connected graphs agree ({with_cycle} with a cycle, {draws} draws)",
            graphs.len()
        ),
    )
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let alphas = [alpha(1, 3), alpha(1, 2), alpha(2, 3)];
    let results: Vec<(bool, bool, bool, bool)> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(7, i));
            let n = r.gen_range(1..=6usize);
            let p = r.gen_range(0.05..0.95);
            let g = gen_erdos_renyi(n, p, derive_seed(70, i)).unwrap();
            let a = alphas[i as usize % 3];
            let gadget = alpha_stable_gadget(&g, a).unwrap();
            let shape = gadget.graph.n() == 4 * n + 4 && gadget.graph.regular_degree() == Some(n);
            let check = check_alpha_stable_equivalence(&g, a).unwrap();
            (
                shape,
                check.equivalence_holds,
                check.has_alpha_clique,
                check.min_stable == Some(check.target) && check.uses_middle_hub,
            )
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let shape = results.iter().filter(|r| r.0).count();
    let equiv = results.iter().filter(|r| r.1).count();
    let yes = results.iter().filter(|r| r.2).count();
    // w_2, w_3 should never appear in a minimum witness of size ⌈αn⌉ + 1.
    let hub = results.iter().filter(|r| r.3).count();
    verdict(
        shape == 200 && equiv == 200 && secs < 600.0,
        format!(
            "{equiv}/200 equivalences ({yes} yes-instances), {shape}/200 gadgets n-regular on 4n+4 nodes, \
             {hub} witnesses using w_2/w_3, {secs:.1}s"
        ),
    )
}

fn criterion_8() -> Verdict {
    let alphas = [
        alpha(1, 3),
        alpha(1, 2),
        alpha(2, 3),
        alpha(1, 4),
        alpha(3, 4),
        alpha(2, 5),
    ];
    let mut r = rng(8);
    let mut checked = 0;
    let mut holds = 0;
    let mut yes = 0;
    let mut draws = 0u64;
    while checked < 200 {
        draws += 1;
        let n = r.gen_range(1..=8usize);
        let k = r.gen_range(1..=n);
        let a = alphas[r.gen_range(0..alphas.len())];
        let p = r.gen_range(0.1..1.0);
        let g = gen_erdos_renyi(n, p, derive_seed(80, draws)).unwrap();
        let check = check_clique_shift(&g, k, a).unwrap();
        if !check.integral {
            continue;
        }
        checked += 1;
        holds += check.equivalence_holds as usize;
        yes += check.has_k_clique as usize;
        debug_assert_eq!(check.clique_number, clique_number(&g).unwrap());
    }
    verdict(
        holds == 200,
        format!("{holds}/200 integral instances agree ({yes} yes-instances, {draws} draws)"),
    )
}

fn random_rule(r: &mut impl Rng, g: &Graph) -> ThresholdRule {
    if g.first_isolated().is_none() && r.gen_bool(0.5) {
        let q = r.gen_range(2..=6u64);
        let p = r.gen_range(1..q);
        ThresholdRule::alpha(alpha(p, q))
    } else {
        ThresholdRule::r(r.gen_range(1..=4)).unwrap()
    }
}

fn criterion_9() -> Verdict {
    let failures: usize = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(derive_seed(9, i));
            let n = r.gen_range(1..=200usize);
            let g = if i % 2 == 0 || n < 4 {
                gen_erdos_renyi(n, r.gen_range(0.01..0.2), derive_seed(90, i)).unwrap()
            } else {
                let d = r.gen_range(1..=(n - 1).min(12));
                let d = if n * d % 2 == 1 { d + 1 } else { d };
                gen_random_regular(n, d, derive_seed(90, i)).unwrap()
            };
            let rule = random_rule(&mut r, &g);
            let b0 = r.gen_range(0..=n);
            let c0 = random_coloring(n, b0, derive_seed(91, i)).unwrap();
            let mut fails = 0;

            let extra = r.gen_range(0..=n - b0);
            let outside: Vec<usize> = c0.red().iter().collect();
            let mut bigger = c0.blue().clone();
            for v in rand::seq::index::sample(&mut r, outside.len(), extra) {
                bigger.insert(outside[v]);
            }
            let small = dynamics::step(&g, &c0, rule).unwrap();
            let large = dynamics::step(&g, &Coloring::from_blue(bigger), rule).unwrap();
            if !small.blue().is_subset(large.blue()) {
                fails += 1;
            }

            match dynamics::run(&g, &c0, rule, n * n + 2) {
                Ok(res) if res.period <= 2 && res.rounds <= n * n => {}
                _ => fails += 1,
            }
            fails
        })
        .sum();
    verdict(failures == 0, format!("{failures} failures over 1000 instances"))
}

fn criterion_10() -> Verdict {
    let mut worst = 0.0f64;
    for n in 3..=50 {
        let s = sigma(&named(Named::Complete, n).unwrap()).unwrap();
        worst = worst.max((s - 1.0 / (n as f64 - 1.0)).abs());
    }
    let petersen = (sigma(&named(Named::Petersen, 10).unwrap()).unwrap() - 2.0 / 3.0).abs();
    let mut star = 0.0f64;
    for k in 1..=20 {
        star = star.max((sigma(&named(Named::Star, k).unwrap()).unwrap() - 1.0).abs());
    }
    verdict(
        worst <= 1e-9 && petersen <= 1e-9 && star <= 1e-9,
        format!("max error K_n {worst:.2e}, Petersen {petersen:.2e}, stars {star:.2e}"),
    )
}

fn tightness(ell: usize) -> Verdict {
    let rep = tightness_ball(&TightnessConfig {
        n: 10_000,
        d: 100,
        alpha: alpha(1, 2),
        ell: Some(ell),
        center: 0,
        master_seed: 11,
    })
    .expect("tightness run");
    verdict(
        rep.passed(),
        format!(
            "ell={ell}: b0={} (bound {}), outcome {:?} after {} rounds, center blue through round {:?}",
            rep.b0, rep.ball_size_bound, rep.outcome, rep.rounds, rep.center_blue_through
        ),
    )
}

fn main() -> ExitCode {
    let (trials, elapsed) = threshold_guarantee_runs();
    let criteria: Vec<Criterion> = vec![
        (
            "1 alpha-threshold blue side",
            Box::new(|| criterion_1(&trials, elapsed)),
        ),
        ("2 alpha-threshold red side", Box::new(|| criterion_2(&trials, elapsed))),
        ("3 mixing inequality", Box::new(criterion_3)),
        ("4 sigma trend vs 2/sqrt(d)", Box::new(criterion_4)),
        ("5 stable and target set sizes", Box::new(criterion_5)),
        ("6 stable-set shortcuts", Box::new(criterion_6)),
        ("7 alpha-stable gadget", Box::new(criterion_7)),
        ("8 clique shift", Box::new(criterion_8)),
        ("9 dynamics properties", Box::new(criterion_9)),
        ("10 spectral closed forms", Box::new(criterion_10)),
        ("11 tightness ball", Box::new(|| tightness(2))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let v = run();
        failed += !v.pass as usize;
        println!(
            "criterion {name}: {} ({})",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    // Same instance at the radius given by floor(log_d(n) / 2); reported only.
    let v = tightness(1);
    println!(
        "companion tightness at formula radius: {} ({})",
        if v.pass { "PASS" } else { "FAIL" },
        v.detail
    );
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
