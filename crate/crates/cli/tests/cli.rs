use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rsl_core::io::{parse_graph, ResultFile};
use rsl_core::synth::erdos_renyi_dag;
use serde_json::Value;
use tempfile::TempDir;

fn rsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(args)
        .env_remove("RSL_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = rsl(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    rsl(args).status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn oracle_chain_gives_two_edges_and_one_sepset() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "chain3.edges");
    ok(&["generate", "--fixture", "chain3", "-o", s(&g)]);
    let r: ResultFile =
        serde_json::from_str(&ok(&["learn", "--alg", "rsl-d", "--oracle", s(&g)])).unwrap();
    assert_eq!(r.schema, 1);
    assert_eq!(r.edges, vec![(0, 1), (1, 2)]);
    assert_eq!(r.sepsets.len(), 1);
    assert_eq!(
        (r.sepsets[0].x, r.sepsets[0].y, r.sepsets[0].set.clone()),
        (0, 2, vec![1])
    );
    assert_eq!(r.mode, "oracle");
    assert_eq!(r.mb_stats.total_tests, 3);
}

#[test]
fn generated_graph_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.edges");
    ok(&[
        "generate",
        "--n",
        "25",
        "--p",
        "0.2",
        "--seed",
        "3",
        "-o",
        s(&g),
    ]);
    let parsed = parse_graph(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(parsed.dag, erdos_renyi_dag(25, 0.2, 3).unwrap());

    let text = ok(&["generate", "--fixture", "diabetes"]);
    let diabetes = parse_graph(&text).unwrap();
    assert_eq!((diabetes.dag.n(), diabetes.dag.edge_count()), (104, 148));
    assert!(diabetes.names.is_some());
}

#[test]
fn sample_writes_named_columns() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.edges",
        "n 3\nname 0 a\nname 1 b\nname 2 c\na b\nb c\n",
    );
    let d = path(&dir, "d.csv");
    ok(&[
        "sample",
        "--graph",
        s(&g),
        "--samples",
        "40",
        "--seed",
        "1",
        "-o",
        s(&d),
    ]);
    let text = std::fs::read_to_string(&d).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,c"));
    assert_eq!(lines.count(), 40);
    let again = ok(&["sample", "--graph", s(&g), "--samples", "40", "--seed", "1"]);
    assert_eq!(again, text);
}

fn without_wall_time(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_secs");
    v
}

#[test]
fn learning_is_deterministic_given_seed() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.edges");
    let d = path(&dir, "d.csv");
    ok(&[
        "generate",
        "--n",
        "30",
        "--exponent",
        "0.82",
        "--seed",
        "5",
        "-o",
        s(&g),
    ]);
    ok(&[
        "sample",
        "--graph",
        s(&g),
        "--samples",
        "1500",
        "--seed",
        "5",
        "-o",
        s(&d),
    ]);
    let args = ["learn", "--alg", "rsl-d", "--data", s(&d), "--seed", "9"];
    let a = without_wall_time(&ok(&args));
    let b = without_wall_time(&ok(&args));
    assert_eq!(a, b);
    assert_eq!(a["mode"], "fisher-z");
    assert_eq!(a["seed"], 9);

    let from_env = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(["learn", "--alg", "rsl-d", "--data", s(&d)])
        .env("RSL_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(
        without_wall_time(&String::from_utf8(from_env.stdout).unwrap()),
        a
    );
}

#[test]
fn evaluate_scores_an_exact_oracle_run() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.edges");
    let r = path(&dir, "r.json");
    let row = path(&dir, "row.csv");
    ok(&["generate", "--fixture", "diabetes", "-o", s(&g)]);
    ok(&["learn", "--alg", "rsl-d", "--oracle", s(&g), "-o", s(&r)]);
    let report: Value = serde_json::from_str(&ok(&[
        "evaluate",
        "--truth",
        s(&g),
        "--result",
        s(&r),
        "--csv",
        s(&row),
    ]))
    .unwrap();
    assert_eq!(report["f1"], 1.0);
    assert_eq!(report["shd"], 0);
    assert_eq!(report["sepset_mistakes"], 0);
    let csv_text = std::fs::read_to_string(&row).unwrap();
    let lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("schema,algorithm,mode,n,f1"));
    assert!(lines[1].starts_with("1,rsl-d,oracle,104,1.0"));
}

#[test]
fn auto_and_bounded_clique_on_the_diamond() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "d.edges");
    ok(&["generate", "--fixture", "diamond", "-o", s(&g)]);
    let auto: ResultFile =
        serde_json::from_str(&ok(&["learn", "--alg", "rsl-auto", "--oracle", s(&g)])).unwrap();
    assert_eq!(auto.m_used, Some(3));
    assert_eq!(auto.edges.len(), 5);
    let omega: ResultFile = serde_json::from_str(&ok(&[
        "learn",
        "--alg",
        "rsl-omega",
        "--m",
        "3",
        "--oracle",
        s(&g),
    ]))
    .unwrap();
    assert_eq!(omega.edges, auto.edges);
}

#[test]
fn exit_codes_are_distinct() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "chain.edges");
    ok(&["generate", "--fixture", "chain3", "-o", s(&g)]);

    assert_eq!(code(&["learn", "--alg", "rsl-omega", "--oracle", s(&g)]), 2);
    assert_eq!(
        code(&["learn", "--alg", "rsl-d", "--m", "2", "--oracle", s(&g)]),
        2
    );
    assert_eq!(
        code(&[
            "learn",
            "--alg",
            "rsl-d",
            "--oracle",
            s(&g),
            "--alpha",
            "1.5"
        ]),
        2
    );
    assert_eq!(code(&["learn", "--alg", "rsl-d"]), 2);
    assert_eq!(code(&["bench", "--n", "10", "--reps", "0"]), 2);

    let malformed = write(&dir, "bad.edges", "n 2\n0 1 2\n");
    assert_eq!(
        code(&["learn", "--alg", "rsl-d", "--oracle", s(&malformed)]),
        3
    );
    let cyclic = write(&dir, "cyc.edges", "n 2\n0 1\n1 0\n");
    assert_eq!(
        code(&["learn", "--alg", "rsl-d", "--oracle", s(&cyclic)]),
        3
    );
    let bad_csv = write(&dir, "bad.csv", "a,b\n1,oops\n");
    assert_eq!(code(&["learn", "--alg", "rsl-d", "--data", s(&bad_csv)]), 3);

    let unknown = write(&dir, "unknown.edges", "n 2\nname 0 a\na b\n");
    assert_eq!(
        code(&["learn", "--alg", "rsl-d", "--oracle", s(&unknown)]),
        4
    );

    let missing = path(&dir, "missing.edges");
    assert_eq!(
        code(&["learn", "--alg", "rsl-d", "--oracle", s(&missing)]),
        5
    );

    // a near-cancelling path makes one collider look independent, and no
    // clique bound then yields a removable vertex at the end of the run
    let g20 = path(&dir, "g20.edges");
    let d20 = path(&dir, "d20.csv");
    let seed = "85899345920";
    ok(&[
        "generate",
        "--n",
        "20",
        "--exponent",
        "0.82",
        "--seed",
        seed,
        "-o",
        s(&g20),
    ]);
    ok(&[
        "sample",
        "--graph",
        s(&g20),
        "--samples",
        "1000",
        "--seed",
        seed,
        "-o",
        s(&d20),
    ]);
    let args = [
        "learn",
        "--alg",
        "rsl-auto",
        "--data",
        s(&d20),
        "--seed",
        seed,
    ];
    assert_eq!(code(&args), 6);
}

fn bench_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let text = ok(args);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(
        header,
        [
            "n",
            "p",
            "rep",
            "seed",
            "algorithm",
            "m",
            "mode",
            "samples",
            "diamond_free",
            "status",
            "mb_tests",
            "ci_tests",
            "asc",
            "runtime_secs",
            "f1",
            "precision",
            "recall",
            "shd",
            "alss"
        ]
    );
    rdr.records().map(Result::unwrap).collect()
}

#[test]
fn bench_oracle_is_exact_on_diamond_free_draws() {
    let rows = bench_rows(&["bench", "--n", "20,30,40", "--reps", "8", "--alg", "rsl-d"]);
    assert_eq!(rows.len(), 24);
    for n in ["20", "30", "40"] {
        let f1: Vec<f64> = rows
            .iter()
            .filter(|r| &r[0] == n && &r[8] == "true")
            .map(|r| r[14].parse().unwrap())
            .collect();
        assert!(!f1.is_empty());
        assert_eq!(f1.iter().sum::<f64>() / f1.len() as f64, 1.0, "n = {n}");
    }
    for r in &rows {
        assert_eq!(&r[9], "ok");
        assert_eq!(
            r[15].parse::<f64>().unwrap(),
            1.0,
            "rsl-d oracle never loses edges"
        );
    }
}

#[test]
fn bench_rows_do_not_depend_on_thread_count() {
    let base = [
        "bench",
        "--n",
        "15,25",
        "--reps",
        "4",
        "--alg",
        "rsl-d,rsl-auto",
        "--samples",
        "40n",
        "--seed",
        "3",
    ];
    let strip = |rows: Vec<csv::StringRecord>| -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != 13)
                    .map(|(_, f)| f.to_string())
                    .collect()
            })
            .collect()
    };
    let one = strip(bench_rows(&[&base[..], &["--threads", "1"]].concat()));
    let four = strip(bench_rows(&[&base[..], &["--threads", "4"]].concat()));
    assert_eq!(one.len(), 16);
    assert_eq!(one, four);
    let keys: Vec<(usize, usize)> = one
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[2].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn bench_on_a_fixture_with_per_vertex_samples() {
    let rows = bench_rows(&[
        "bench",
        "--fixture",
        "diabetes",
        "--reps",
        "2",
        "--samples",
        "20n",
    ]);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(&r[0], "104");
        assert_eq!(&r[7], "2080");
        assert_eq!(&r[6], "fisher-z");
        assert!(r[14].parse::<f64>().unwrap() > 0.8);
    }
}
