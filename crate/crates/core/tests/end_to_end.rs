use rsl_core::eval::{score_sepsets, score_skeleton};
use rsl_core::fixtures;
use rsl_core::io::{parse_graph, read_dataset, write_dataset, write_graph};
use rsl_core::pipeline::{run_fisher_z, run_oracle, Algorithm};
use rsl_core::rsl::{extract_vstructures, LearnOptions, TieBreak};
use rsl_core::synth::{draw_sem, erdos_renyi_dag, sample_sem};

#[test]
fn oracle_vstructures_on_diabetes_match_the_graph() {
    let g = fixtures::diabetes().dag;
    let out = run_oracle(&g, Algorithm::DiamondFree, &LearnOptions::default()).unwrap();
    assert_eq!(out.result.skeleton, g.skeleton());
    let v = extract_vstructures(&out.result.skeleton, &out.result.sepsets).unwrap();
    assert_eq!(v, g.v_structures());
    assert_eq!(score_sepsets(&g, &out.result.sepsets).mistakes, 0);
}

#[test]
fn auto_on_diabetes_settles_at_its_clique_number() {
    let g = fixtures::diabetes().dag;
    let out = run_oracle(&g, Algorithm::Auto, &LearnOptions::default()).unwrap();
    assert_eq!(out.m_used, Some(3));
    assert_eq!(out.result.skeleton, g.skeleton());
    assert_eq!(out.attempts.len(), 3);
}

#[test]
fn finite_sample_run_survives_a_csv_round_trip() {
    let g = erdos_renyi_dag(25, 25f64.powf(-0.82), 11).unwrap();
    let data = sample_sem(&draw_sem(&g, 11), 2000, 11).unwrap();
    let names: Vec<String> = (0..25).map(|i| format!("v{i}")).collect();
    let mut buf = Vec::new();
    write_dataset(&mut buf, &names, &data).unwrap();
    let (_, back) = read_dataset(buf.as_slice()).unwrap();

    let opts = LearnOptions {
        tie_break: TieBreak::Seeded(11),
    };
    let a = run_fisher_z(&data, 0.01, None, Algorithm::DiamondFree, &opts).unwrap();
    let b = run_fisher_z(&back, 0.01, None, Algorithm::DiamondFree, &opts).unwrap();
    assert_eq!(a.result, b.result);
    let report = score_skeleton(&g.skeleton(), &a.result.skeleton).unwrap();
    assert!(report.f1 > 0.9, "{report:?}");
}

#[test]
fn fixture_text_round_trips() {
    let g = fixtures::diabetes();
    assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
}
