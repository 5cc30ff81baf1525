use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fracpois");

fn run_with(args: &[&str], config: Option<&Path>, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("FRACPOIS_CONFIG");
    if let Some(path) = config {
        cmd.env("FRACPOIS_CONFIG", path);
    }
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, None, None)
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn classical_pmf_golden() {
    let out = stdout(&run(&["pmf", "--variant", "classical", "--t", "0,1", "--n-max", "2"]));
    let golden = "\
t,n,p,tail_mass
0.0000000000000000e0,0,1.0000000000000000e0,0.0000000000000000e0
0.0000000000000000e0,1,0.0000000000000000e0,0.0000000000000000e0
0.0000000000000000e0,2,0.0000000000000000e0,0.0000000000000000e0
1.0000000000000000e0,0,3.6787944117144233e-1,8.0301397071077155e-2
1.0000000000000000e0,1,3.6787944117144233e-1,8.0301397071077155e-2
1.0000000000000000e0,2,1.8393972058572106e-1,8.0301397071077155e-2
";
    assert_eq!(out, golden);
}

#[test]
fn floats_round_trip_through_csv() {
    let out = stdout(&run(&["pmf", "--variant", "stfpp", "--t", "0.3,1.7", "--n-max", "8"]));
    for row in data_rows(&out) {
        for field in [&row[0], &row[2], &row[3]] {
            let v: f64 = field.parse().unwrap();
            assert_eq!(&format!("{v:.16e}"), field);
        }
    }
    let p = fracpois::FractionalParams::stfpp(1.0, 0.7, 0.6).unwrap();
    let row = &data_rows(&out)[3];
    assert_eq!(
        row[2].parse::<f64>().unwrap().to_bits(),
        p.pmf(0.3, 3).unwrap().to_bits()
    );
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "pmf",
        "--variant",
        "sstfpp",
        "--beta",
        "-0.5",
        "--gamma",
        "0.2",
        "--t-start",
        "0.1",
        "--t-stop",
        "3",
        "--t-count",
        "12",
    ];
    let a = stdout(&run_with(&args, None, Some("1")));
    let b = stdout(&run_with(&args, None, Some("4")));
    assert_eq!(a, b);

    let sim = [
        "simulate",
        "--variant",
        "stfpp",
        "--samples",
        "20000",
        "--seed",
        "9",
        "--n-max",
        "12",
    ];
    let a = stdout(&run_with(&sim, None, Some("1")));
    let b = stdout(&run_with(&sim, None, Some("3")));
    assert_eq!(a, b);
    assert!(a.contains("# seed=9"));
    assert!(a.contains("# samples=20000"));
    let c = stdout(&run(&[
        "simulate",
        "--variant",
        "stfpp",
        "--samples",
        "20000",
        "--seed",
        "10",
        "--n-max",
        "12",
    ]));
    assert_ne!(a, c);
}

#[test]
fn riemann_liouville_saigo_matches_stfpp_bitwise() {
    for cmd in ["pmf", "pgf", "survival"] {
        let s = stdout(&run(&[
            cmd,
            "--variant",
            "sstfpp",
            "--alpha",
            "0.7",
            "--beta",
            "-0.7",
            "--gamma",
            "0.4",
            "--t",
            "0.5,1,2",
        ]));
        let t = stdout(&run(&[cmd, "--variant", "stfpp", "--alpha", "0.7", "--t", "0.5,1,2"]));
        assert_eq!(s, t, "{cmd}");
    }
}

#[test]
fn zero_time_rows() {
    let out = stdout(&run(&[
        "pmf",
        "--variant",
        "sstfpp",
        "--beta",
        "-0.4",
        "--t",
        "0",
        "--n-max",
        "3",
    ]));
    let rows = data_rows(&out);
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 1.0);
    for row in &rows {
        assert_eq!(row[3].parse::<f64>().unwrap(), 0.0);
    }
    for row in &rows[1..] {
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    }
    let surv = stdout(&run(&["survival", "--t", "0"]));
    assert_eq!(data_rows(&surv)[0][1], "1.0000000000000000e0");
}

#[test]
fn pgf_and_survival_shapes() {
    let out = stdout(&run(&[
        "pgf",
        "--variant",
        "sfpp",
        "--nu",
        "0.6",
        "--t",
        "1",
        "--u",
        "0,0.5",
    ]));
    assert!(out.starts_with("t,u,pgf\n"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2);
    let g: f64 = rows[1][2].parse().unwrap();
    assert!((g - (-(0.5f64).powf(0.6)).exp()).abs() < 1e-12);

    let out = stdout(&run(&["survival", "--variant", "tfpp", "--alpha", "1", "--t", "2"]));
    assert!(out.starts_with("t,survival\n"));
    let s: f64 = data_rows(&out)[0][1].parse().unwrap();
    assert!((s - (-2.0f64).exp()).abs() < 1e-12);
}

#[test]
fn json_output_parses() {
    let out = stdout(&run(&["pmf", "--t", "1", "--n-max", "4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["params"]["variant"], "stfpp");

    let out = stdout(&run(&["verify", "--t", "1"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "kolmogorov",
            "adm_closed_form_diff",
            "composition",
            "semigroup",
            "normalization",
            "pgf_cauchy"
        ]
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify"]).status.code(), Some(0));
    let fail = run(&["verify", "--max-k", "2"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(!fail.stdout.is_empty());

    assert_eq!(run(&["pmf", "--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["pmf", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["pmf", "--t", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["pgf", "--u", "1.5"]).status.code(), Some(2));
    assert_eq!(
        run(&["pmf", "--variant", "stfpp", "--beta", "-0.3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["pmf", "--variant", "bogus"]).status.code(), Some(2));

    let far = run(&["pmf", "--variant", "tfpp", "--alpha", "0.5", "--t", "1e6"]);
    assert_eq!(far.status.code(), Some(3));
    assert!(!far.stderr.is_empty());

    assert_eq!(
        run(&["simulate", "--variant", "sstfpp", "--beta", "-0.5"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fracpois.json");
    std::fs::write(
        &cfg,
        r#"{"variant": "classical", "lambda": 2.0, "t": [1.0], "n_max": 0}"#,
    )
    .unwrap();

    let from_file = stdout(&run_with(&["pmf"], Some(&cfg), None));
    let explicit = stdout(&run(&[
        "pmf",
        "--variant",
        "classical",
        "--lambda",
        "2",
        "--t",
        "1",
        "--n-max",
        "0",
    ]));
    assert_eq!(from_file, explicit);

    let flag_wins = stdout(&run_with(&["pmf", "--lambda", "3"], Some(&cfg), None));
    let p: f64 = data_rows(&flag_wins)[0][2].parse().unwrap();
    assert!((p - (-3.0f64).exp()).abs() < 1e-15);

    // a time flag replaces the file's time specification as a whole
    let grid = stdout(&run_with(
        &["pmf", "--t-start", "0", "--t-stop", "1", "--t-count", "3"],
        Some(&cfg),
        None,
    ));
    assert_eq!(data_rows(&grid).len(), 3);

    std::fs::write(&cfg, r#"{"lambda": 2.0, "colour": "red"}"#).unwrap();
    assert_eq!(run_with(&["pmf"], Some(&cfg), None).status.code(), Some(2));
    assert_eq!(
        run_with(&["pmf"], Some(&dir.path().join("missing.json")), None)
            .status
            .code(),
        Some(2)
    );
}
