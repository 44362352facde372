use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use contest_core::export::Table;
use tempfile::TempDir;

fn contest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contest")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SQUARE_INVERSE: &str = "version = 1\nn = 3\n[distribution]\nfamily = \"power\"\np = 2.0\n[wage]\nkind = \"inverse_productivity\"\n";
const SQUARE_PRIZES: &str = "version = 1\nn = 4\nseed = 3\nprize_vector = [1.0, 0.2, 0.1, 0.0]\ncompare_vector = [1.0, 0.3, 0.1, 0.0]\n[distribution]\nfamily = \"power\"\np = 2.0\n";

#[test]
fn lambdas_table() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_INVERSE);
    let o = contest(&["effort", "lambdas", &s]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for row in ["1   0.533333", "2   0.266667", "3  -0.800000"] {
        assert!(out.contains(row), "{out}");
    }
}

#[test]
fn brute_force_grading_winner() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_INVERSE);
    let out_dir = dir.path().join("out");
    let o = contest(&["grading", "optimize", "--mode", "brute", &s, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1,2,3  1.173333     1"));
    let t = Table::from_tsv(&fs::read_to_string(out_dir.join("ranking.tsv")).unwrap()).unwrap();
    assert_eq!(t.header, ["cuts", "effort", "rank"]);
    assert_eq!(t.notes, ["winner 1,2,3"]);
    assert!((t.rows[0][1].as_f64().unwrap() - 17.6 / 15.0).abs() < 1e-9);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["metrics"]["winner"], "1,2,3");
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["inputs_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn screening_needs_only_n() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", "version = 1\nn = 4\n");
    let o = contest(&["screening", "sweep", "--p", "1", &s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k_star 2"));
    assert_eq!(contest(&["screening", "sweep", &s]).status.code(), Some(64));
}

fn bundle(dir: &Path, args: &[&str]) -> (String, Vec<(String, Vec<u8>)>) {
    let mut full: Vec<&str> = args.to_vec();
    let d = dir.to_str().unwrap();
    full.extend(["--out", d]);
    let o = contest(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    (stdout(&o), files)
}

#[test]
fn runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_PRIZES);
    for args in [
        vec!["verify", "equilibrium", s.as_str()],
        vec!["effort", "curve", s.as_str()],
        vec!["budget", "allocate", s.as_str(), "--B", "2"],
    ] {
        let a = bundle(&dir.path().join("a"), &args);
        let b = bundle(&dir.path().join("b"), &args);
        assert_eq!(a, b, "{args:?}");
        fs::remove_dir_all(dir.path().join("a")).unwrap();
        fs::remove_dir_all(dir.path().join("b")).unwrap();
    }
}

#[test]
fn seed_changes_simulation_only() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_PRIZES);
    let a = stdout(&contest(&["verify", "equilibrium", &s]));
    let b = stdout(&contest(&["verify", "equilibrium", &s, "--seed", "4"]));
    assert_ne!(a, b);
    let regret = |t: &str| t.split("[ranks]").next().unwrap().to_string();
    assert_eq!(regret(&a), regret(&b));
}

#[test]
fn every_export_round_trips() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_PRIZES);
    let g = scenario(dir.path(), "g.toml", SQUARE_INVERSE);
    let runs: Vec<(Vec<&str>, Vec<(&str, Vec<&str>)>)> = vec![
        (vec!["dist", "classify", &s], vec![
            ("classification", vec!["quantity", "value"]),
            ("assumption1", vec!["theta", "density_times_cdf", "quantile_ratio"]),
        ]),
        (vec!["effort", "lambdas", &s], vec![("lambdas", vec!["rank", "lambda", "method"])]),
        (vec!["effort", "curve", &s], vec![("curve", vec!["theta", "effort", "effort_compare"])]),
        (vec!["effort", "compare", &s], vec![
            ("comparison", vec!["quantity", "value"]),
            ("corollaries", vec!["corollary", "condition", "predicted_sign", "agrees"]),
        ]),
        (vec!["grading", "wages", &g], vec![("wages", vec!["rank", "vstar"])]),
        (vec!["grading", "optimize", &g, "--mode", "structured"], vec![("ranking", vec!["cuts", "effort", "rank"])]),
        (vec!["grading", "table1", &g], vec![("table1", vec![
            "distribution", "h_shape", "order", "order_matches", "optimum", "optimum_effort", "structure", "structure_matches",
        ])]),
        (vec!["budget", "allocate", &s], vec![("allocation", vec!["r", "v1", "v2", "v3", "v4"])]),
        (vec!["screening", "sweep", &s, "--p", "2"], vec![("screening", vec!["k", "objective"])]),
        (vec!["verify", "equilibrium", &s], vec![
            ("regret", vec!["quantity", "value"]),
            ("ranks", vec!["rank", "count", "empirical", "analytic"]),
            ("simulation", vec!["quantity", "value"]),
        ]),
    ];
    for (k, (args, tables)) in runs.iter().enumerate() {
        let out: PathBuf = dir.path().join(format!("run{k}"));
        let (_, files) = bundle(&out, args);
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert!(names.contains(&"summary.json"), "{args:?}");
        for (name, header) in tables {
            let text = fs::read_to_string(out.join(format!("{name}.tsv"))).unwrap();
            let t = Table::from_tsv(&text).unwrap();
            assert_eq!(&t.header, header, "{args:?}");
            assert!(!t.rows.is_empty());
            assert_eq!(t.to_tsv(), text, "{args:?} {name}");
        }
        assert_eq!(files.len(), tables.len() + 1, "{args:?}: {names:?}");
    }
}

#[test]
fn tabulated_inputs_resolve_next_to_scenario() {
    let dir = TempDir::new().unwrap();
    let rows: String = (0..=50).map(|k| {
        let x = k as f64 / 50.0;
        format!("{x},{}\n", x * x)
    }).collect();
    fs::write(dir.path().join("cdf.csv"), format!("theta,cdf\n{rows}")).unwrap();
    fs::write(dir.path().join("wage.csv"), "theta,wage\n0,1\n1,0\n").unwrap();
    let s = scenario(
        dir.path(),
        "t.toml",
        "version = 1\nn = 3\n[distribution]\nfamily = \"tabulated\"\ntable = \"cdf.csv\"\n[wage]\nkind = \"tabulated\"\ntable = \"wage.csv\"\n",
    );
    let o = contest(&["dist", "classify", &s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("numeric"));
    let o = contest(&["grading", "optimize", &s, "--mode", "structured"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = scenario(dir.path(), "good.toml", SQUARE_INVERSE);
    assert_eq!(contest(&["bogus", &good]).status.code(), Some(64));
    assert_eq!(contest(&["effort", "lambdas"]).status.code(), Some(64));
    assert_eq!(contest(&["effort", "lambdas", &good, "--tol", "-1"]).status.code(), Some(64));
    assert_eq!(contest(&["grading", "optimize", &good, "--mode", "greedy"]).status.code(), Some(64));
    assert_eq!(contest(&["--help"]).status.code(), Some(0));

    let unknown = scenario(dir.path(), "u.toml", "version = 1\nn = 3\ncolour = 2\n");
    let o = contest(&["effort", "lambdas", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    let missing = dir.path().join("nope.toml");
    let o = contest(&["effort", "lambdas", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.toml"));
    let version = scenario(dir.path(), "v.toml", "version = 2\nn = 3\n");
    assert_eq!(contest(&["screening", "sweep", &version, "--p", "1"]).status.code(), Some(2));

    let thin = scenario(dir.path(), "thin.toml", "version = 1\nn = 3\n[distribution]\nfamily = \"power\"\np = 0.4\n");
    assert_eq!(contest(&["effort", "lambdas", &thin]).status.code(), Some(2));
    let o = contest(&["dist", "classify", &thin]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: fail"));

    let no_wage = scenario(dir.path(), "nw.toml", "version = 1\nn = 3\n[distribution]\nfamily = \"power\"\np = 2.0\n");
    assert_eq!(contest(&["grading", "optimize", &no_wage]).status.code(), Some(2));
    let wage = scenario(dir.path(), "w.toml", "version = 1\nn = 3\n[distribution]\nfamily = \"power\"\np = 0.75\n[wage]\nkind = \"inverse_productivity\"\n");
    let o = contest(&["grading", "optimize", &wage]);
    assert_eq!(o.status.code(), Some(2));
    let uniform = scenario(dir.path(), "un.toml", "version = 1\nn = 4\n[distribution]\nfamily = \"power\"\np = 1.0\n");
    assert_eq!(contest(&["budget", "allocate", &uniform, "--r", "0.5"]).status.code(), Some(2));
}

#[test]
fn quiet_suppresses_stdout() {
    let dir = TempDir::new().unwrap();
    let s = scenario(dir.path(), "s.toml", SQUARE_INVERSE);
    let o = contest(&["effort", "lambdas", &s, "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}
