use std::io::Write;
use std::process::{Command, Output, Stdio};

fn revcomp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_revcomp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(s) = stdin {
        pipe.write_all(s.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const CONST: &str = r#"{"dom":{"shape":[2]},"cod":{"shape":[2]},"graph":[[0,1],[1,1]]}"#;

#[test]
fn report_schema() {
    let out = revcomp(&["bennett-of", CONST, "--seed", "5"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["inputs_digest", "result", "seed", "tolerances", "verb"]);
    assert_eq!(r["verb"], "bennett-of");
    assert_eq!(r["seed"], 5);
    assert_eq!(r["result"]["core"]["graph"], serde_json::json!([[0, 2], [1, 3]]));
}

#[test]
fn stdin_stream_matches_arguments() {
    let g = r#"{"dom":{"shape":[2]},"cod":{"shape":[3]},"graph":[[1,2]]}"#;
    let from_args = revcomp(&["compose", CONST, g], None);
    let from_stdin = revcomp(&["compose"], Some(&format!("{CONST}\n{g}\n")));
    assert_eq!(from_args.status.code(), Some(0));
    assert_eq!(report(&from_args)["result"], report(&from_stdin)["result"]);
}

#[test]
fn malformed_json_exits_2_with_position() {
    let out = revcomp(&["ridm"], Some("{\"dom\": {\"shape\": [2]},\n  \"cod\": ]"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn shape_mismatch_exits_2() {
    let g = r#"{"dom":{"shape":[3]},"cod":{"shape":[3]},"graph":[]}"#;
    assert_eq!(revcomp(&["compose", CONST, g], None).status.code(), Some(2));
}

#[test]
fn lawcheck_exit_codes() {
    let out = revcomp(&["lawcheck", "--law", "cptp.well_pointed", "--trials", "20"], None);
    assert_eq!(out.status.code(), Some(0));
    let ok = revcomp(&["lawcheck", "--instance", "Pfn", "--law", "restriction.iv", "--max", "2"], None);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["result"]["reports"][0]["mode"], "exhaustive");
    let unknown = revcomp(&["lawcheck", "--instance", "Pfn", "--law", "no.such.law"], None);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn inequivalent_representatives_exit_1() {
    let f = r#"{"base":"pinj","garbage_shape":[2],"core":{"dom":{"shape":[2]},"cod":{"shape":[1,2]},"graph":[[0,0],[1,1]]}}"#;
    let g = r#"{"base":"pinj","garbage_shape":[2],"core":{"dom":{"shape":[2]},"cod":{"shape":[1,2]},"graph":[[0,1],[1,0]]}}"#;
    let out = revcomp(&["aux-equal", f, g], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["equal"], true);
    let h = r#"{"base":"pinj","garbage_shape":[1],"core":{"dom":{"shape":[2]},"cod":{"shape":[1,1]},"graph":[[0,0]]}}"#;
    let out = revcomp(&["ext-equal", f, h], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("revcomp-cli-{}.json", std::process::id()));
    let out = revcomp(&["ridm", CONST, "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.contains("\"verb\": \"ridm\""));
}

#[test]
fn non_positive_tolerance_is_rejected() {
    assert_eq!(revcomp(&["ridm", CONST, "--tol", "-1"], None).status.code(), Some(2));
}
