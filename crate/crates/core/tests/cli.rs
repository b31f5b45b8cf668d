use std::fs;
use std::process::{Command, Output};

use steadycorr::sweep::parse_csv;

const HEADER: &str = "g1bar,g2bar,x,dperp_ratio,pop_11,pop_10,pop_1m1,pop_00,concurrence,qmi,ccl_1,ccl_2,discord_1,discord_2,geo_discord_1,geo_discord_2,linear_entropy,numeric_deviation";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steadycorr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SWEEP: &str = r#"{
  "mode": "g2zero",
  "g1_values": {"start": 0.01, "stop": 10, "count": 12, "spacing": "log"},
  "x_values": [0.0628, 1.5, 6.2831853],
  "dperp_ratio": 1,
  "numeric_check": true
}"#;

#[test]
fn sweep_header_is_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, SWEEP).unwrap();
    let out = run(&["sweep", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(HEADER));
    assert_eq!(text.lines().count(), 1 + 12 * 3);
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, SWEEP).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["sweep", cfg.to_str().unwrap(), "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let first = fs::read(&a).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, fs::read(&b).unwrap());

    let rows = parse_csv(&String::from_utf8(first).unwrap()).unwrap();
    let worst = rows.iter().map(|r| r.get("numeric_deviation").unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let target = dir.path().join("out.csv");
    for bad in [
        "{ not json",
        r#"{"mode": "g2zero", "g1_values": 1, "x_values": 1, "dperp_ratio": 1, "colour": 3}"#,
        r#"{"mode": "g2zero", "g1_values": {"start": 0, "stop": 1, "count": 3, "spacing": "log"}, "x_values": 1, "dperp_ratio": 1}"#,
    ] {
        fs::write(&cfg, bad).unwrap();
        let out = run(&["sweep", cfg.to_str().unwrap(), "--out", target.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{bad}: {}", stderr(&out));
        assert!(!target.exists());
    }
    let out = run(&["sweep", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn steady_reports_oracle_deviation() {
    let out = run(&["steady", "--g1", "0.5", "--g2", "0", "--x", "1.5708", "--dperp", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let dev: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max deviation "))
        .expect("deviation line")
        .parse()
        .unwrap();
    assert!(dev <= 1e-10);
    assert!(text.contains("\"concurrence\""));
}

#[test]
fn steady_without_p00_names_the_flag() {
    let out = run(&["steady", "--g1", "1", "--g2", "1", "--x", "0", "--dperp", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--p00"));

    let out = run(&["steady", "--g1", "1", "--g2", "1", "--x", "0", "--dperp", "1", "--p00", "0.3"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn steady_rejects_bad_flags() {
    assert_eq!(run(&["steady", "--g1", "1", "--g2", "0", "--x", "1", "--dperp", "2"]).status.code(), Some(2));
    assert_eq!(run(&["steady", "--g1", "1", "--x", "1", "--dperp", "1"]).status.code(), Some(2));
    assert_eq!(run(&["steady", "--g1", "one", "--g2", "0", "--x", "1", "--dperp", "1"]).status.code(), Some(2));
}

#[test]
fn undriven_steady_state_is_ground() {
    let out = run(&["steady", "--g1", "0", "--g2", "0", "--x", "3", "--dperp", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let state: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("steady state")).skip(1).take(4).collect();
    let zero = "0.0000000000 + 0.0000000000 i";
    let one = "1.0000000000 + 0.0000000000 i";
    for (i, line) in state.iter().enumerate() {
        let entries: Vec<&str> = line.split(" i").map(str::trim).filter(|s| !s.is_empty()).collect();
        let last = entries.len() - 1;
        for (j, e) in entries.iter().enumerate() {
            let expected = if i == 3 && j == last { one } else { zero };
            assert!(format!("{e} i").ends_with(expected), "row {i}: {line}");
        }
    }
    assert!(state[3].trim_start().starts_with("|-->"));
}

#[test]
fn figure_has_provenance_comment() {
    let out = run(&["figure", "conc_vs_g1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# figure=conc_vs_g1 params="));
    assert_eq!(lines.next(), Some(HEADER));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let out = run(&["figure", "conc_vs_g1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn unknown_figure_lists_ids() {
    let out = run(&["figure", "conc_vs_nothing"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    for id in steadycorr::sweep::figure_ids() {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn verify_exit_code_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.txt");
    let out = run(&["verify", "--grid-size", "3", "--out", path.to_str().unwrap()]);
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[0].starts_with("PASS [1]"), "{}", lines[0]);
    let any_failed = lines.iter().any(|l| l.starts_with("FAIL"));
    assert_eq!(out.status.code(), Some(if any_failed { 1 } else { 0 }));
}

#[test]
fn verify_catches_corrupted_coupling() {
    let out = run(&["verify", "--grid-size", "3", "--corrupt-coupling"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().any(|l| l.starts_with("FAIL [1]")));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["steady", "sweep", "figure", "verify"] {
        let out = run(&[sub, "--help"]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("--out"), "{sub}");
    }
}
