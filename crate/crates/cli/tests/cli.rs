use cyclosyn_core::report::VerificationReport;
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn cyclosyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclosyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn ghost_of_three_one() {
    let o = cyclosyn(&["ghost", "--m", "2", "--witt", "3,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("[3, 11]"));
}

#[test]
fn dwork_rejects_zero_one() {
    let o = cyclosyn(&["dwork", "--m", "2", "--ghost", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("false"));
    let v: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["witness"]["p"], 2);
}

#[test]
fn chern_json_has_the_e2_component() {
    let o = cyclosyn(&["chern", "--zeta", "5", "--m", "2", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let v: Value = serde_json::from_str(&line).unwrap();
    let comps = v["components"].as_object().unwrap();
    assert_eq!(comps.keys().collect::<Vec<_>>(), ["2"]);
    // c_1(1 - ζ) = -Li_1(ζ)
    let li = cyclosyn(&["li1", "--zeta", "5", "--m", "2", "--d", "2"]);
    let w: Value = serde_json::from_str(stdout(&li).lines().nth(1).unwrap()).unwrap();
    let neg = |s: &Value| {
        let s = s.as_str().unwrap();
        s.strip_prefix('-').map(str::to_string).unwrap_or_else(|| format!("-{s}"))
    };
    let a = &comps["2"][0];
    let b = &w["components"]["2"][0];
    for (x, y) in a.as_array().unwrap().iter().zip(b.as_array().unwrap()) {
        assert_eq!(x.as_str().unwrap(), neg(y));
    }
}

#[test]
fn json_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = cyclosyn(&["norm", "--m", "1", "--to", "2", "--poly", "2,1", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.trim_end(), stdout(&o).lines().nth(1).unwrap());
}

#[test]
fn small_sweep_writes_round_tripping_reports() {
    let cfg = config_file(
        "f = [1, 1, 1, 1, 1]\nN = 5\nlabel = \"Z[zeta5][1/5]\"\nlevels = [2, 3, 4]\ndivisors = [2]\n\
         roots = [[5, 1], [5, 2]]\nsuites = [\"dwork\", \"key_identity\", \"main_theorem\"]\njobs = 2\n",
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let o = cyclosyn(&["verify-all", "--config", cfg.path().to_str().unwrap(), "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let r = VerificationReport::from_json(line).unwrap();
        assert!(r.passed());
        assert_eq!(r.to_json(), line);
        let v: Value = serde_json::from_str(line).unwrap();
        for key in ["suite", "params", "status", "millis"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn level_sharing_a_factor_with_n_is_rejected_before_running() {
    let cfg = config_file("f = [1, 1, 1, 1, 1]\nN = 5\nlevels = [2, 5]\n");
    let o = cyclosyn(&["verify-all", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("levels"), "{err}");
}

#[test]
fn malformed_config_reports_the_line() {
    let cfg = config_file("f = [1, 1]\nN = 2\njobs = \"many\"\n");
    let o = cyclosyn(&["verify-all", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let cfg = config_file("f = [1, 0, 1]\nN = 3\n");
    let o = cyclosyn(&["verify-all", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1") && stderr(&o).contains("discriminant"), "{}", stderr(&o));
}

#[test]
fn unknown_suite_is_a_configuration_error() {
    let o = cyclosyn(&["verify-all", "--suite", "dwork,nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn injected_sign_fault_fails_at_the_first_case() {
    let o = cyclosyn(&[
        "verify-all",
        "--suite",
        "main_theorem",
        "--m",
        "2,3,4",
        "--d",
        "2,3",
        "--inject-li1-sign-fault",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = VerificationReport::from_json(stdout(&o).lines().next().unwrap()).unwrap();
    let w = r.witness.expect("failure has a witness");
    assert_eq!(w.e, Some(2));
    assert!(w.detail.unwrap().starts_with("zeta=5:1 d=2 m=2"));
    assert!(w.left.is_some() && w.right.is_some());
}

#[test]
fn minus_one_needs_adjoin_half() {
    let args = ["verify-all", "--zeta", "2", "--suite", "main_theorem", "--d", "3", "--m"];
    let cfg = config_file("f = [1, 1, 1, 1, 1]\nN = 5\n");
    let mut with_cfg = args.to_vec();
    with_cfg.push("3,9");
    with_cfg.extend(["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(cyclosyn(&with_cfg).status.code(), Some(2));
    with_cfg.push("--adjoin-half");
    let o = cyclosyn(&with_cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut over_z = args.to_vec();
    over_z.push("3,5,9");
    let o = cyclosyn(&over_z);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn default_sweep_passes() {
    let o = cyclosyn(&["verify-all", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), cyclosyn_core::verify::SUITES.len());
}
