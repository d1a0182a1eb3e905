use std::path::Path;
use std::process::{Command, Output};

use holtklee::fixtures::{coplanar_normals_chirotope, IC_8_4_2_BLOCK};
use serde_json::Value;
use tempfile::TempDir;

fn holtklee(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holtklee"))
        .args(args)
        .env_remove("OM_CATALOG_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn all_plus(n: usize, r: usize) -> String {
    let count = holtklee::chirotope::binomial(n, r);
    format!("{n} {r} {}\n", "+".repeat(count))
}

#[test]
fn validate_reports_ic842_counts() {
    let dir = TempDir::new().unwrap();
    let ic = write(&dir, "ic.txt", IC_8_4_2_BLOCK);
    let out = holtklee(&["validate", &ic]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 8);
    assert_eq!(v["r"], 4);
    assert_eq!(v["uniform"], true);
    assert_eq!(v["cocircuits"], 112);
    assert_eq!(v["topes"], 128);
}

#[test]
fn validate_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "3 2 ++x\n");
    assert_eq!(holtklee(&["validate", &bad]).status.code(), Some(2));
    let zero = write(&dir, "zero.txt", "3 2 000\n");
    assert_eq!(holtklee(&["validate", &zero]).status.code(), Some(2));
    assert_eq!(holtklee(&["validate", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn program_on_representable_fixtures() {
    let dir = TempDir::new().unwrap();
    let alt = write(&dir, "alt.txt", &all_plus(8, 4));
    let dot = dir.path().join("g.dot");
    let out = holtklee(&[
        "program",
        &alt,
        "--g",
        "4",
        "--f",
        "5",
        "--reorient",
        "2",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["proper"], true);
    assert_eq!(v["hk"]["holds"], true);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    // rank 3: every proper program is HK
    let alt63 = write(&dir, "alt63.txt", &all_plus(6, 3));
    let out = holtklee(&["program", &alt63, "--g", "3", "--f", "4", "--reorient", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hk"]["required_d"], 2);
}

#[test]
fn improper_program_exits_one_with_reason() {
    let dir = TempDir::new().unwrap();
    let ic = write(&dir, "ic.txt", IC_8_4_2_BLOCK);
    let out = holtklee(&["program", &ic, "--g", "1", "--f", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["proper"], false);
    assert!(v["reason"].as_str().unwrap().contains("not proper"));
    // g = f is an input error
    assert_eq!(holtklee(&["program", &ic, "--g", "1", "--f", "1"]).status.code(), Some(2));
}

#[test]
fn shelling_certificate_for_ic842() {
    let dir = TempDir::new().unwrap();
    let ic = write(&dir, "ic.txt", IC_8_4_2_BLOCK);
    let dot = dir.path().join("sg.dot");
    let out = holtklee(&["shelling", &ic, "--coline", "1,8", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["shelling_order"], serde_json::json!([3, 2, 7, 6, 4, 5]));
    assert_eq!(v["disjoint_path_count"], 2);
    assert_eq!(v["required_d"], 3);
    assert_eq!(v["hkstar"], false);
    assert_eq!(v["source"], 3);
    assert_eq!(v["sink"], 5);
    assert!(std::fs::read_to_string(&dot).unwrap().contains("\"3\" -> \"2\""));
}

#[test]
fn shelling_rejects_non_colines_and_flags_improper_fixations() {
    let dir = TempDir::new().unwrap();
    let ic = write(&dir, "ic.txt", IC_8_4_2_BLOCK);
    assert_eq!(holtklee(&["shelling", &ic, "--coline", "1,2,3"]).status.code(), Some(2));
    // the coplanar-normals configuration: staircase exists, fixation is not proper
    let r3 = write(&dir, "r3.txt", &coplanar_normals_chirotope().to_line());
    let out = holtklee(&["shelling", &r3, "--coline", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["proper"], false);
    assert_eq!(v["shelling_order"], serde_json::json!([2, 4, 3]));
}

#[test]
fn plain_output_is_key_value() {
    let dir = TempDir::new().unwrap();
    let ic = write(&dir, "ic.txt", IC_8_4_2_BLOCK);
    let out = holtklee(&["--plain", "validate", &ic]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "cocircuits: 112"));
}

#[test]
fn classify_writes_csv_and_aggregate() {
    let dir = TempDir::new().unwrap();
    let ic_line = holtklee::fixtures::ic_8_4_2().to_line();
    let catalog = write(
        &dir,
        "cat.txt",
        &format!("# two entries\nIC {ic_line}\nALT {}", all_plus(8, 4)),
    );
    let csv = dir.path().join("out.csv");
    let out = holtklee(&["classify", &catalog, "--mode", "quick", "--jobs", "2", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["aggregate"]["total"], 2);
    assert_eq!(v["aggregate"]["non_hkstar"], 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("id,n,r,uniform,hk,hkstar,euclidean,shannon"));
    assert_eq!(text.lines().count(), 3);
    // identical runs give identical bytes
    let again = holtklee(&["classify", &catalog, "--mode", "quick", "--jobs", "1"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn classify_finds_catalogs_through_the_environment() {
    let dir = TempDir::new().unwrap();
    write(&dir, "tiny.txt", &all_plus(5, 3));
    let out = Command::new(env!("CARGO_BIN_EXE_holtklee"))
        .args(["classify", "tiny.txt", "--mode", "quick"])
        .env("OM_CATALOG_DIR", dir.path())
        .current_dir(Path::new("/"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["aggregate"]["total"], 1);
}

#[test]
fn classify_missing_catalog_is_input_error() {
    assert_eq!(holtklee(&["classify", "/nonexistent/catalog.txt"]).status.code(), Some(2));
}

#[test]
fn construct_rank_four_size_eight() {
    let dir = TempDir::new().unwrap();
    let cert_path = dir.path().join("cert.json");
    let out = holtklee(&["construct", "--rank", "4", "--size", "8", "--out", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["r"], 4);
    assert_eq!(v["n"], 8);
    let chirotope = v["chirotope"].as_str().unwrap();
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(saved["chirotope"], v["chirotope"]);
    // re-check the emitted chirotope with the shelling command
    let chi_file = write(&dir, "chi.txt", chirotope);
    let coline: Vec<String> = v["coline"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let out = holtklee(&["shelling", &chi_file, "--coline", &coline.join(",")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["hkstar"], false);
}

#[test]
fn construct_preconditions_and_sensitive_search() {
    assert_eq!(holtklee(&["construct", "--rank", "4", "--size", "7"]).status.code(), Some(2));
    let out = holtklee(&["construct", "sensitive", "--vertices", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["found"], false);
    assert!(v["note"].as_str().unwrap().contains("exhaustive"));
    let out = holtklee(&["construct", "sensitive", "--vertices", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["certificate"]["vertices"].as_array().unwrap().len(), 7);
}
