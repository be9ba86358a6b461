use std::fs;
use std::process::{Command, Output};

fn ttisched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttisched"))
        .args(args)
        .env_remove("TTISCHED_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn partition_file_solves_to_four() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let out = ttisched(&[
        "reduce-partition",
        "1",
        "1",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = ttisched(&["solve", file.to_str().unwrap(), "--policy", "exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "value: 4"), "{text}");
    assert!(text.contains("tti: 1"));
}

#[test]
fn malformed_file_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "2 1 0\n0 MCC 1 1\n1 MCC 1 1\n1 1 1 1\n1 1 x 1\n").unwrap();
    let out = ttisched(&["solve", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5, column 5"), "{err}");
}

#[test]
fn flat_dp_on_non_flat_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nf.txt");
    fs::write(&file, "1 2 0\n0 MCC 3 2\n1 MBB 3 2\n1 2 5 2\n").unwrap();
    let out = ttisched(&["solve", file.to_str().unwrap(), "--policy", "flat_dp"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_check_verbs() {
    let out = ttisched(&["oracle-check", "3", "1", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("equal split: yes"));
    let out = ttisched(&["oracle-check", "1", "2", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("equal split: no"));
    assert!(!ttisched(&["oracle-check", "1", "2"]).status.success());
}

fn sweep(dir: &std::path::Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "sweep",
        "--horizon",
        "1000",
        "--reps",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    ttisched(&args)
}

#[test]
fn sweep_writes_expected_rows_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = sweep(
            d,
            &[
                "--r-mcc",
                "0.1,0.5",
                "--policy",
                "cast,sdfs@2",
                "--seed",
                "4",
            ],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let csv = fs::read(a.join("results.csv")).unwrap();
    assert_eq!(csv, fs::read(b.join("results.csv")).unwrap());
    assert_eq!(
        fs::read(a.join("plot.gp")).unwrap(),
        fs::read(b.join("plot.gp")).unwrap()
    );
    let text = String::from_utf8(csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with(
        "policy,r_mcc,mean_mcc_arrivals,pct_mcc_served,pct_mbb_served,mbb_throughput,reps,se_mcc,se_mbb,se_thr"
    ));
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("cast,0.100000,0.300000,"));
    assert!(lines[4].starts_with("sdfs@2,0.500000,1.50000,"));
    for l in &lines[1..] {
        assert_eq!(l.split(',').nth(6), Some("3"));
    }
}

#[test]
fn zero_mcc_load_reports_hundred_percent_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep(dir.path(), &["--r-mcc", "0", "--policy", "cast"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "100.000");
    assert_eq!(row[10], "no_traffic");
}

#[test]
fn seed_precedence_and_event_logs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.cfg");
    fs::write(&cfg, "seed = 1\nhorizon_units = 2000\nr_mcc = 0.3\n").unwrap();
    let run = |name: &str, env: Option<&str>, cli_seed: Option<&str>| {
        let ev = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ttisched"));
        cmd.args([
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--events",
            ev.to_str().unwrap(),
        ]);
        cmd.env_remove("TTISCHED_SEED");
        if let Some(e) = env {
            cmd.env("TTISCHED_SEED", e);
        }
        if let Some(s) = cli_seed {
            cmd.args(["--seed", s]);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        (stdout(&out), fs::read(ev).unwrap())
    };
    let (cfg_out, cfg_ev) = run("a", None, None);
    assert!(cfg_out.contains("seed=1"));
    assert_eq!(run("b", None, None).1, cfg_ev);
    let (env_out, env_ev) = run("c", Some("9"), None);
    assert!(env_out.contains("seed=9"));
    assert_ne!(env_ev, cfg_ev);
    let (cli_out, cli_ev) = run("d", Some("9"), Some("5"));
    assert!(cli_out.contains("seed=5"));
    assert_eq!(cli_ev, run("e", None, Some("5")).1);
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.cfg");
    fs::write(&cfg, "seed = 1\nr_mcc = lots\n").unwrap();
    let out = ttisched(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}
