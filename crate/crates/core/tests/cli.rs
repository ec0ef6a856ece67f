use std::process::Command;

fn lowgirth(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lowgirth"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn eval_prints_five_decimals() {
    let (code, out, _) = lowgirth(&[
        "eval", "--graph", "fig-b", "--p", "1", "--gammas", "0.2617", "--betas", "0.3927",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0.66238");
    let (code, out, _) = lowgirth(&["eval", "--graph", "fig-a", "--p", "1", "--gammas", "0", "--betas", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0.50000");
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = lowgirth(&[
        "eval", "--graph", "fig-a", "--p", "1", "--mode", "ma", "--gammas", "0.1", "--betas", "0.2",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("gammas"), "{err}");
    let (code, _, _) = lowgirth(&["optimize", "--graph", "fig-a", "--p", "1", "--starts", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = lowgirth(&["oracle-check", "--graph", "fig-a", "--p", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = lowgirth(&["eval", "--p", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = lowgirth(&["reproduce", "--table", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn outputs_replay_from_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bm.csv");
    let out_s = out.to_str().unwrap();
    let (code, printed, _) = lowgirth(&[
        "classical",
        "--graph",
        "fig-a",
        "--algorithm",
        "bm",
        "--scheme",
        "para3",
        "--k",
        "1",
        "--samples",
        "20000",
        "--out",
        out_s,
    ]);
    assert_eq!(code, 0);
    // para3 reports one row per neighbor class
    assert_eq!(printed.lines().count(), 3);
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, printed);
    let manifest = format!("{out_s}.manifest.json");
    std::fs::remove_file(&out).unwrap();
    let (code, _, _) = lowgirth(&["replay", &manifest]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), written);
}

#[test]
fn optimize_writes_params_that_eval_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("best.json");
    let out_s = out.to_str().unwrap();
    let (code, printed, _) = lowgirth(&[
        "optimize", "--graph", "fig-a", "--p", "1", "--starts", "6", "--out", out_s,
    ]);
    assert_eq!(code, 0);
    let value = printed.lines().next().unwrap().to_string();
    assert!(std::path::Path::new(&format!("{out_s}.log.jsonl")).exists());
    let (code, again, _) = lowgirth(&["eval", "--graph", "fig-a", "--p", "1", "--params", out_s]);
    assert_eq!(code, 0);
    assert_eq!(again.trim(), value);
}

#[test]
fn threshold_never_flipping_is_one_half() {
    let (code, out, _) = lowgirth(&[
        "classical",
        "--graph",
        "fig-c",
        "--algorithm",
        "threshold",
        "--tau",
        "inf",
        "--samples",
        "200000",
    ]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    let v: f64 = fields[5].parse().unwrap();
    let se: f64 = fields[6].parse().unwrap();
    assert!((v - 0.5).abs() < 4.0 * se);
}

#[test]
fn reproduce_table_four_passes() {
    let (code, out, _) = lowgirth(&["reproduce", "--table", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains(",pass,")).count(), 6);
}

#[test]
fn oracle_check_reports_small_differences() {
    let (code, out, _) = lowgirth(&["oracle-check", "--graph", "fig-c", "--p", "1", "--draws", "5"]);
    assert_eq!(code, 0);
    for line in out.lines() {
        let v: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(v < 1e-9, "{line}");
    }
}
