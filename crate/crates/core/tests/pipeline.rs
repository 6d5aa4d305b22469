use thresh_core::bounds::bounds_for_graph;
use thresh_core::dynamics::{self, random_coloring};
use thresh_core::experiment::{round_scaling, ScalingConfig};
use thresh_core::generators::gen_random_regular;
use thresh_core::monopoly::{build_target_set, construct_stable_set, verify_stable, verify_target};
use thresh_core::spectral::normalized_spectrum;
use thresh_core::{Alpha, Graph, Outcome, ThresholdRule};

#[test]
fn generate_measure_construct_verify() {
    let g = gen_random_regular(300, 20, 17).unwrap();
    let text = g.to_edge_list();
    let g2 = Graph::parse_edge_list(&text).unwrap();
    assert_eq!(g, g2);

    let profile = normalized_spectrum(&g2).unwrap();
    let rule = ThresholdRule::r(3).unwrap();
    let report = bounds_for_graph(&g2, rule, &profile).unwrap();
    let rb = report.r.expect("r-threshold bounds");
    assert!(rb.constructive);
    let bound = rb.target_size_bound.unwrap();

    let stable = construct_stable_set(&g2, 3, profile.sigma, 1).unwrap();
    assert!(verify_stable(&g2, &stable.nodes, rule));
    let target = build_target_set(&g2, 3, profile.sigma, 1).unwrap();
    assert!(verify_target(&g2, &target.nodes, rule).unwrap());
    assert!(target.size() as f64 <= bound + 1.0);

    let json = serde_json::to_string(&target).unwrap();
    let back: thresh_core::CertifiedSet = serde_json::from_str(&json).unwrap();
    assert_eq!(
        (&back.nodes, back.kind, &back.stats),
        (&target.nodes, target.kind, &target.stats)
    );
}

#[test]
fn alpha_bounds_hold_on_random_instance() {
    let n = 1500;
    let g = gen_random_regular(n, 80, 4).unwrap();
    let profile = normalized_spectrum(&g).unwrap();
    let alpha = Alpha::new(1, 2).unwrap();
    let rule = ThresholdRule::alpha(alpha);
    let b = bounds_for_graph(&g, rule, &profile).unwrap().alpha.unwrap();
    assert!(b.red_meaningful && b.blue_meaningful, "sigma = {}", profile.sigma);
    for seed in 0..5 {
        let up = random_coloring(n, b.b_high_ceil as usize, seed).unwrap();
        let res = dynamics::run(&g, &up, rule, dynamics::default_max_rounds(&g)).unwrap();
        assert_eq!(res.outcome, Outcome::AllBlue);
        assert!(res.rounds as f64 <= b.blue_round_cap().unwrap());
        let down = random_coloring(n, b.b_low_floor as usize, seed).unwrap();
        let res = dynamics::run(&g, &down, rule, dynamics::default_max_rounds(&g)).unwrap();
        assert_eq!(res.outcome, Outcome::AllRed);
        assert!(res.rounds as f64 <= b.red_round_cap().unwrap());
    }
}

#[test]
fn rounds_grow_at_most_additively_when_n_doubles() {
    let out = round_scaling(&ScalingConfig {
        ns: vec![500, 1000, 2000, 4000],
        d: 64,
        alpha: Alpha::new(1, 2).unwrap(),
        b0_fraction: 0.35,
        trials: 5,
        master_seed: 12,
    })
    .unwrap();
    for w in out.rows.windows(2) {
        assert!(w[1].mean_rounds <= w[0].mean_rounds + 1.0, "{:?}", out.rows);
    }
    assert!(out.rows.iter().all(|r| r.frac_consensus == 1.0));
}

#[test]
fn quadrupling_degree_does_not_slow_consensus() {
    let run = |d| {
        round_scaling(&ScalingConfig {
            ns: vec![1000],
            d,
            alpha: Alpha::new(1, 2).unwrap(),
            b0_fraction: 0.4,
            trials: 10,
            master_seed: 3,
        })
        .unwrap()
        .rows[0]
            .mean_rounds
    };
    assert!(run(64) <= run(16));
}
