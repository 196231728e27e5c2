use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn mt(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mt"));
    c.args(args).env_remove("MT_CACHE");
    if let Some(dir) = cache {
        c.env("MT_CACHE", dir);
    }
    c.output().expect("mt runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn genera(v: &Value) -> Vec<u64> {
    let mut g: Vec<u64> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["genus"].as_u64().unwrap())
        .collect();
    g.sort_unstable();
    g
}

const A5_LEVEL1: &[&str] = &[
    "level",
    "--group",
    "A5",
    "--classes",
    "3A,3A,3A,3A",
    "--p",
    "2",
    "--k",
    "1",
];

#[test]
fn a5_three_cycles_at_level_zero() {
    let v = json(&mt(
        &[
            "level",
            "--group",
            "A5",
            "--classes",
            "3A,3A,3A,3A",
            "--p",
            "2",
        ],
        None,
    ));
    assert_eq!(genera(&v), vec![0]);
    assert_eq!(v["class_table"][2]["label"], "3A");
}

#[test]
fn a5_three_cycles_at_level_one() {
    let v = json(&mt(A5_LEVEL1, None));
    assert_eq!(genera(&v), vec![9, 12]);
    assert_eq!(v["comparisons"].as_array().unwrap().len(), 2);
}

#[test]
fn dihedral_level_one_at_five() {
    let v = json(&mt(&["dihedral", "--p", "5", "--k", "1"], None));
    let c = &v["components"][0];
    assert_eq!(genera(&v), vec![12]);
    assert_eq!(c["orbit_size"], 300);
    assert_eq!(c["cusp_widths"].as_array().unwrap().len(), 28);
}

#[test]
fn output_ignores_thread_count() {
    let one = mt(&[&["--threads", "1"], A5_LEVEL1].concat(), None);
    let four = mt(&[&["--threads", "4"], A5_LEVEL1].concat(), None);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn report_directory_holds_json_and_csv() {
    let dir = tempdir("report");
    let out = mt(
        &["--report", dir.to_str().unwrap(), "dihedral", "--p", "5"],
        None,
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("sh_incidence_k0.csv")).unwrap();
    assert!(!csv.is_empty());
    assert!(dir.join("level_k0.json").exists());
}

#[test]
fn cache_hits_match_and_poisoning_is_caught() {
    let dir = tempdir("cache");
    let first = mt(A5_LEVEL1, Some(&dir));
    let second = mt(A5_LEVEL1, Some(&dir));
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, mt(A5_LEVEL1, None).stdout);
    let entry = std::fs::read_dir(&dir)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut bytes = std::fs::read(&entry).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 1;
    std::fs::write(&entry, bytes).unwrap();
    let poisoned = mt(A5_LEVEL1, Some(&dir));
    assert_eq!(poisoned.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&poisoned.stderr).contains("corrupt cache"));
}

#[test]
fn exit_codes_follow_error_families() {
    let budget = mt(
        &[
            "level",
            "--group",
            "A5",
            "--classes",
            "3A,3A,3A,3A",
            "--p",
            "2",
            "--budget-elements",
            "100",
        ],
        None,
    );
    assert_eq!(budget.status.code(), Some(2));
    let empty = mt(
        &[
            "level",
            "--group",
            "A5",
            "--classes",
            "2A,2A,2A",
            "--p",
            "3",
        ],
        None,
    );
    assert_eq!(empty.status.code(), Some(3));
    let unknown = mt(
        &[
            "level",
            "--group",
            "no-such-group",
            "--classes",
            "2A,2A,2A",
            "--p",
            "3",
        ],
        None,
    );
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn schur_and_gcomplete_reports() {
    let v = json(&mt(&["schur", "--group", "A4", "--p", "2"], None));
    let mut types: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["top_type"].as_str().unwrap())
        .collect();
    types.sort();
    assert_eq!(types, ["Q8+Z/2", "Q8.Z/4", "Z/4+Z/2+Z/2"]);
    let v = json(&mt(&["gcomplete", "--group", "A5", "--p", "5"], None));
    assert_eq!(v["verdict"]["complete"], false);
    assert_eq!(v["verdict"]["witness"]["order"], 12);
    let v = json(&mt(&["frattini-verify", "--group", "A5", "--p", "2"], None));
    assert_eq!(v["total_order"], 1920);
}

#[test]
fn groups_load_from_files() {
    let dir = tempdir("files");
    let perms = dir.join("a5.txt");
    std::fs::write(&perms, "(1,2)(3,4)\n(1,3,5)\n").unwrap();
    let v = json(&mt(
        &["gcomplete", "--group", perms.to_str().unwrap(), "--p", "2"],
        None,
    ));
    assert_eq!(v["verdict"]["complete"], true);
    let pres = dir.join("s3.txt");
    std::fs::write(&pres, "gens: a b\na^2\nb^3\n(a*b)^2\n").unwrap();
    let v = json(&mt(
        &["gcomplete", "--group", pres.to_str().unwrap(), "--p", "3"],
        None,
    ));
    assert_eq!(v["class_table"].as_array().unwrap().len(), 3);
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("mt-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
