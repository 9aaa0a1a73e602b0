use std::process::{Command, Output};

const LINE_QUIVER: &str = r#"{"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "2"}]}"#;

fn hallforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn green_suite_passes_with_report_file() {
    let out = std::env::temp_dir().join(format!("hallforge-green-{}.json", std::process::id()));
    let o = hallforge(&["verify", "--suite", "green", "--quiver", "a2", "--q", "2", "--max-dim", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("2401/2401 pass"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["passes"], 2401);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    std::fs::remove_file(out).ok();
}

#[test]
fn mult_prints_normal_form() {
    let o = hallforge(&["mult", "--algebra", "hd", "--expr", "mu+[S1]*mu-[S1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "mu-[S1] mu+[S1] + K-[(1,0)]");
}

#[test]
fn hallnum_of_the_indecomposable_projective() {
    let o = hallforge(&["hallnum", "--L", "X{1,1}#1", "--M", "S1", "--N", "S2", "--quiver", "a2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let o = hallforge(&["hallnum", "--L", "X{1,1}#1", "--M", "S2", "--N", "S1"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn classes_table() {
    let o = hallforge(&["classes", "--dimvec", "1,1", "--quiver", "a2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("2 isoclasses of dimension (1,1)"), "{s}");
    assert!(s.contains("X{1,1}#0\t|Aut| = 4"), "{s}");
    assert!(s.contains("X{1,1}#1\t|Aut| = 2"), "{s}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hallforge(&["mult", "--algebra", "hd", "--expr", "("]).status.code(), Some(2));
    assert_eq!(hallforge(&["mult", "--algebra", "xx", "--expr", "1"]).status.code(), Some(2));
    assert_eq!(hallforge(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(hallforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hallforge(&["hallnum", "--L", "S9", "--M", "S1", "--N", "0"]).status.code(), Some(2));
}

#[test]
fn enumeration_cap_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_hallforge"))
        .args(["classes", "--dimvec", "3,3", "--quiver", "kronecker", "--q", "3"])
        .env("HALLFORGE_MAX_ENUM", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn file_quiver_and_rep_reference() {
    let dir = std::env::temp_dir().join(format!("hallforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let quiver = dir.join("line.json");
    std::fs::write(&quiver, LINE_QUIVER).unwrap();
    let rep = dir.join("p.json");
    std::fs::write(&rep, r#"{"p": 2, "dims": {"1": 1, "2": 1}, "maps": {"0": [[1]]}}"#).unwrap();
    let expr = format!("mu-[@{}]", rep.display());
    let o = hallforge(&["mult", "--algebra", "hd", "--expr", &expr, "--quiver", quiver.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "mu-[X{1,1}#1]");
    std::fs::remove_dir_all(dir).ok();
}
