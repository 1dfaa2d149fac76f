use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centrality"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

fn simulated_csv(dir: &Path) {
    let o = run(
        &[
            "simulate",
            "--dgp",
            "c",
            "--skewness",
            "0.5",
            "--sample-size",
            "400",
            "--seed",
            "9",
            "--beta",
            "0,0,1",
            "--instrument-set",
            "3",
            "--emit-dataset",
            "sim.csv",
        ],
        dir,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn test_subcommand_reports_decisions_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulated_csv(d);
    let args = [
        "test",
        "--input",
        "sim.csv",
        "--instruments",
        "x,y_lag",
        "--with-const",
        "--functional",
        "mode",
        "--alpha",
        "0.05,0.10",
        "--out-json",
        "t.json",
    ];
    assert_eq!(code(&run(&args, d)), 0);
    let first = read(d, "t.json");
    assert_eq!(code(&run(&args, d)), 0);
    assert_eq!(read(d, "t.json"), first);

    let text = String::from_utf8(first).unwrap();
    for key in [
        "\"schema\": 1",
        "\"p_value\"",
        "\"reject_at\"",
        "\"0.05\"",
        "\"0.1\"",
        "\"df\": 3",
    ] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
}

#[test]
fn test_exits_zero_even_when_rejecting() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // forecasts far above every outcome: rationality is rejected
    let mut csv = String::from("y,x\n");
    for i in 0..200 {
        let y = ((i * 37) % 101) as f64 / 10.0;
        csv.push_str(&format!("{y},{}\n", 20.0 + (i % 7) as f64));
    }
    std::fs::write(d.join("bad.csv"), csv).unwrap();
    let o = run(
        &[
            "test",
            "--input",
            "bad.csv",
            "--with-const",
            "--instruments",
            "x",
            "--functional",
            "mean",
        ],
        d,
    );
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("\"0.05\": true"), "{out}");
}

#[test]
fn cset_outputs_are_byte_identical_and_plot_matches() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulated_csv(d);
    let args = [
        "cset",
        "--input",
        "sim.csv",
        "--instruments",
        "x",
        "--with-const",
        "--grid-m",
        "12",
        "--out-json",
        "g.json",
        "--out-csv",
        "g.csv",
        "--out-svg",
        "g.svg",
    ];
    assert_eq!(code(&run(&args, d)), 0);
    let first: Vec<Vec<u8>> = ["g.json", "g.csv", "g.svg"]
        .iter()
        .map(|n| read(d, n))
        .collect();
    assert_eq!(code(&run(&args, d)), 0);
    for (n, f) in ["g.json", "g.csv", "g.svg"].iter().zip(&first) {
        assert_eq!(&read(d, n), f, "{n} changed between runs");
    }
    let csv = String::from_utf8(first[1].clone()).unwrap();
    assert_eq!(csv.lines().count(), 13 * 14 / 2 + 1);
    let svg = String::from_utf8(first[2].clone()).unwrap();
    assert!(svg.contains(">Mean<") && svg.contains(">Median<") && svg.contains(">Mode<"));

    assert_eq!(
        code(&run(
            &["plot", "--input", "g.json", "--out-svg", "p.svg"],
            d
        )),
        0
    );
    assert_eq!(read(d, "p.svg"), first[2]);
}

#[test]
fn clustered_cset_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("y,x,wave\n");
    for i in 0..240 {
        let x = ((i * 29) % 53) as f64 / 20.0 - 1.0;
        let noise = ((i * 71) % 97) as f64 / 30.0 - 1.6;
        csv.push_str(&format!("{},{x},{}\n", x + noise, i / 4));
    }
    std::fs::write(d.join("panel.csv"), csv).unwrap();
    let o = run(
        &[
            "cset",
            "--input",
            "panel.csv",
            "--instruments",
            "x",
            "--with-const",
            "--cluster",
            "wave",
            "--grid-m",
            "5",
        ],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("\"clustered\": true"));
}

#[test]
fn random_walk_series_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("price\n");
    let mut p: f64 = 1.1;
    for i in 0..1500u64 {
        // deterministic pseudo-random steps
        let u = ((i
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407)
            >> 33)
            % 2001) as f64;
        p += (u - 1000.0) * 1e-5;
        csv.push_str(&format!("{p}\n"));
    }
    std::fs::write(d.join("fx.csv"), csv).unwrap();
    for f in ["mean", "median", "mode"] {
        let args = [
            "test",
            "--input",
            "fx.csv",
            "--prices",
            "price",
            "--functional",
            f,
            "--out-json",
            "rw.json",
        ];
        assert_eq!(code(&run(&args, d)), 0);
        let first = read(d, "rw.json");
        assert_eq!(code(&run(&args, d)), 0);
        assert_eq!(read(d, "rw.json"), first);
    }
    let args = [
        "cset",
        "--input",
        "fx.csv",
        "--prices",
        "price",
        "--grid-m",
        "8",
        "--out-svg",
        "rw.svg",
    ];
    assert_eq!(code(&run(&args, d)), 0);
    let first = read(d, "rw.svg");
    assert_eq!(code(&run(&args, d)), 0);
    assert_eq!(read(d, "rw.svg"), first);
}

#[test]
fn simulate_experiment_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "simulate",
        "--experiment",
        "power",
        "--distortion",
        "noise",
        "--kappa",
        "0.5",
        "--replications",
        "100",
        "--sample-size",
        "200",
        "--seed",
        "2",
        "--out-json",
        "p.json",
    ];
    assert_eq!(code(&run(&args, d)), 0);
    let first = read(d, "p.json");
    assert_eq!(code(&run(&args, d)), 0);
    assert_eq!(read(d, "p.json"), first);
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("\"schema\": 1") && text.contains("\"mc_standard_error\""));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulated_csv(d);
    let cases: [&[&str]; 7] = [
        &[],
        &["frobnicate"],
        &[
            "test",
            "--input",
            "sim.csv",
            "--with-const",
            "--alpha",
            "1.5",
        ],
        &[
            "test",
            "--input",
            "sim.csv",
            "--with-const",
            "--functional",
            "trimmed",
        ],
        &["test", "--input", "sim.csv"],
        &[
            "cset",
            "--input",
            "sim.csv",
            "--with-const",
            "--grid-m",
            "0",
        ],
        &["simulate", "--seed", "1"],
    ];
    for args in cases {
        assert_eq!(code(&run(args, d)), 1, "{args:?}");
    }
    assert_eq!(code(&run(&["--help"], d)), 0);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("nox.csv"), "y,z\n1,2\n3,4\n").unwrap();
    std::fs::write(d.join("text.csv"), "y,x\n1,2\n3,oops\n").unwrap();
    std::fs::write(d.join("flat.csv"), "y,x\n1,1\n1,1\n1,1\n").unwrap();
    let cases: [&[&str]; 5] = [
        &["test", "--input", "missing.csv", "--with-const"],
        &["test", "--input", "nox.csv", "--with-const"],
        &["test", "--input", "text.csv", "--with-const"],
        &[
            "test",
            "--input",
            "flat.csv",
            "--with-const",
            "--functional",
            "mode",
        ],
        &["plot", "--input", "nox.csv", "--out-svg", "x.svg"],
    ];
    for args in cases {
        let o = run(args, d);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = run(&["test", "--input", "text.csv", "--with-const"], d);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("row 2") && err.contains("\"x\""), "{err}");
}
