use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn mahler(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mahler"));
    cmd.args(args).env_remove("MAHLER_BUDGET_MB");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn solve_table() {
    let out = mahler(&["solve", "--system", &corpus("cantor2"), "--order", "10"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("f1 = z + z^2 + z^4 + z^8 + O(z^10)\n"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mahler(&["solve", "--system", &corpus("cantor2"), "--bogus"], &[]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", "--system", "/nonexistent.json"], &[]).status.code(), Some(2));
    assert_eq!(mahler(&["regular", "--system", &corpus("cantor2"), "--alpha", "3/2"], &[]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", "--system", &corpus("cantor2")], &[("MAHLER_BUDGET_MB", "lots")]).status.code(), Some(2));
}

#[test]
fn json_error_document() {
    let out = mahler(&["--json", "regular", "--system", &corpus("cantor2"), "--alpha", "2"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "AlphaOutOfRange");
}

#[test]
fn budget_aborts_with_exit_2() {
    let dir = std::env::temp_dir().join(format!("mahler-budget-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q256.json");
    std::fs::write(&path, r#"{"q": 256, "m": 2, "A": [[["1"], ["0", "1"]], [["0"], ["1"]]], "f0": ["0", "1"]}"#).unwrap();
    let args = ["--json", "heights", "--system", path.to_str().unwrap(), "--alpha", "1/3", "--kmax", "5"];
    let out = mahler(&args, &[("MAHLER_BUDGET_MB", "1")]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], "BitBudgetExceeded");
    assert_eq!(mahler(&args[..args.len() - 1].iter().copied().chain(["2"]).collect::<Vec<_>>(), &[("MAHLER_BUDGET_MB", "1")]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn negative_results_exit_1() {
    let out = mahler(&["regular", "--system", &corpus("singular16"), "--alpha", "1/4"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = mahler(&["lift", "--system", &corpus("cantor3"), "--alpha", "1/2", "--tau", "1,-1,0", "--max-deg", "2"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = mahler(&["lift", "--system", &corpus("singular16"), "--alpha", "1/4", "--tau", "1"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_series_file() {
    let dir = std::env::temp_dir().join(format!("mahler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"series": [["0","1","1","0","1"], ["1","0","0","0","0"]]}"#).unwrap();
    let out = mahler(&["--json", "verify", "--system", &corpus("cantor2"), "--series", good.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"[["0","1","0","0","1"], ["1","0","0","0","0"]]"#).unwrap();
    let out = mahler(&["--json", "verify", "--system", &corpus("cantor2"), "--series", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verified_order"], 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn help_documents_polynomial_grammar() {
    let out = mahler(&["kron-lift", "--help"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("X1..Xm") && text.contains("homogenize"));
}

#[test]
fn kron_index_map() {
    let out = mahler(&["--json", "kron", "--system", &corpus("cantor2"), "--d", "2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["system"]["m"], 4);
}
