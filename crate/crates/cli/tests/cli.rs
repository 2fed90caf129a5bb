use std::fs;
use std::process::{Command, Output};

fn slc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slc"))
        .args(args)
        .env_remove("SLC_M")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&slc(&["--m", "2", "verify-lemma4"])), 0);
    assert_eq!(code(&slc(&["--m", "3", "--degree", "3", "conjecture6"])), 0);
    assert_eq!(code(&slc(&["--m", "4", "--degree", "6", "radial"])), 1);
    assert_eq!(code(&slc(&["--m", "9", "verify-lemma4"])), 2);
    assert_eq!(code(&slc(&["--algebra", "nonsense", "invariants"])), 2);
    assert_eq!(code(&slc(&["no-such-command"])), 2);
    assert_eq!(code(&slc(&["--m", "6", "--degree", "6", "--budget", "50", "conjecture6"])), 3);
    assert_eq!(code(&slc(&["zoo", "import", "--file", "/nonexistent/algebra.json"])), 4);
    assert_eq!(code(&slc(&["--help"])), 0);
}

#[test]
fn environment_supplies_and_flags_override() {
    let from_env = Command::new(env!("CARGO_BIN_EXE_slc"))
        .args(["verify-lemma4"])
        .env("SLC_M", "3")
        .output()
        .unwrap();
    let from_flag = slc(&["--m", "3", "verify-lemma4"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let both = Command::new(env!("CARGO_BIN_EXE_slc"))
        .args(["--m", "3", "verify-lemma4"])
        .env("SLC_M", "9")
        .output()
        .unwrap();
    assert_eq!(code(&both), 0);
    assert_eq!(both.stdout, from_flag.stdout);
}

#[test]
fn tampered_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "--m", "2", "--degree", "3", "conjecture6"];
    let first = slc(&args);
    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = fs::read_to_string(&entry).unwrap();
    fs::write(&entry, text.replace("\"degree\": 3", "\"degree\": 2")).unwrap();
    let second = slc(&args);
    let stderr = String::from_utf8(second.stderr).unwrap();
    assert!(stderr.contains("rejected"), "{stderr}");
    assert_eq!(first.stdout, second.stdout);
    let third = slc(&args);
    assert!(String::from_utf8(third.stderr).unwrap().contains("cache hit"));
}

#[test]
fn csv_and_text_outputs() {
    let csv = String::from_utf8(slc(&["--m", "2", "--output", "csv", "verify-lemma4"]).stdout).unwrap();
    assert!(csv.starts_with("path,value\n"), "{csv}");
    assert!(csv.lines().any(|l| l.starts_with("status,")));
    let text = String::from_utf8(slc(&["--m", "2", "--output", "text", "verify-lemma4"]).stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("status = ")), "{text}");
}

#[test]
fn zoo_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let exported = slc(&["--algebra", "sq", "--n", "2", "zoo", "export"]);
    assert_eq!(code(&exported), 0);
    let report: serde_json::Value = serde_json::from_slice(&exported.stdout).unwrap();
    let file = dir.path().join("sq2.json");
    fs::write(&file, serde_json::to_string(&report["items"]).unwrap()).unwrap();
    let imported = slc(&["zoo", "import", "--file", file.to_str().unwrap()]);
    assert_eq!(code(&imported), 0, "{}", String::from_utf8_lossy(&imported.stderr));
}
