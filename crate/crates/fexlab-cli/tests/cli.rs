use std::process::{Command, Output};

use serde_json::Value;

fn fexlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fexlab"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data"))
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = fexlab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn pi0_prints_the_documented_document() {
    let out = fexlab(&[
        "ext", "pi0", "--ring", "Z", "--A", "2", "--B", "2", "-n", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"classes":2,"group":"Z/2"}"#
    );
}

#[test]
fn fsd_gen_two_has_ten_objects() {
    let v = json_of(&["fsd", "gen", "2", "--format", "json"]);
    assert_eq!(v["objects"], 10);
    assert_eq!(v["elements"].as_array().unwrap().len(), 10);
    assert_eq!(v["generators"].as_array().unwrap().len(), 18);
    let c = json_of(&["fsd", "gen", "3", "--classify"]);
    assert_eq!(c["objects"], 49);
    assert_eq!(c["classes"]["0123"], "central");
}

#[test]
fn dot_output_for_posets_only() {
    let out = fexlab(&["fsd", "gen", "1", "--format", "dot"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("digraph") && s.contains("\"0\" -> \"01\""));
    assert_eq!(
        fexlab(&["homology", "circle", "--format", "dot"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fexlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        fexlab(&["ext", "pi0", "--A", "x", "--B", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fexlab(&["homology", "missing.json"]).status.code(), Some(2));
    assert_eq!(
        fexlab(&["verify-paper", "--only", "13"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_reproducible() {
    let args = ["extri", "check-additive", "--samples", "5", "--seed", "7"];
    let (a, b) = (fexlab(&args), fexlab(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], 5);
}

#[test]
fn homology_of_files_and_builtins() {
    assert_eq!(
        json_of(&["homology", "circle.json"]),
        json_of(&["homology", "circle"])
    );
    let v = json_of(&["homology", "boundary:2", "--degree", "1"]);
    assert_eq!(v["H"][0]["rank"], 1);
}

#[test]
fn baer_sum_of_the_nonsplit_class_with_itself_splits() {
    let v = json_of(&["ext", "baer", "z2_z4_z2.json", "z2_z4_z2.json"]);
    assert_eq!(v["middles"][0], serde_json::json!([2, 2]));
    let w = json_of(&["ext", "baer", "z2_z4_z2.json", "split_z2.json"]);
    assert_eq!(w["middles"][0], serde_json::json!([4]));
}

#[test]
fn et4_on_a_composable_pair() {
    let v = json_of(&["extri", "et4", "z2_z4_z2.json", "z4_z8_z2.json"]);
    assert_eq!(v["third"]["middles"][0], serde_json::json!([8]));
    assert!(
        v["et4_1"].as_bool().unwrap()
            && v["et4_2"].as_bool().unwrap()
            && v["et4_3"].as_bool().unwrap()
    );
    // second sequence not starting at the middle term
    assert_eq!(
        fexlab(&["extri", "et4", "z2_z4_z2.json", "z2_z4_z2.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn module_and_map_commands() {
    let v = json_of(&["mod", "hom", "Z/4:4,2", "Z/4:2", "--list"]);
    assert_eq!(v["count"], "4");
    assert_eq!(v["morphisms"].as_array().unwrap().len(), 4);
    let k = json_of(&["mod", "kernel", "z4_times2.json"]);
    assert_eq!(k["kernel"]["invariants"], serde_json::json!([2]));
    let c = json_of(&["ext", "cyl", "ext_id.json"]);
    assert!(c["cyl"]["middles"].is_array());
}

#[test]
fn higher_ext_and_oracle_agree() {
    let h = json_of(&[
        "coend",
        "higher-ext",
        "--ring",
        "Z/4",
        "--A",
        "2",
        "--B",
        "2",
        "-n",
        "2",
    ]);
    let o = json_of(&[
        "ext", "oracle", "--ring", "Z/4", "--A", "2", "--B", "2", "-n", "2",
    ]);
    assert_eq!(h["group"], o["group"]);
    assert_eq!(h["stable"], true);
}

#[test]
fn fex_commands() {
    let a = json_of(&["fex", "adjunction", "simplex:1", "simplex:1"]);
    assert_eq!(a["lhs"], 5);
    assert_eq!(a["bijective"], true);
    assert!(fexlab(&["fex", "unit", "boundary:2"]).status.success());
    let k = json_of(&["fex", "kan", "simplex:1", "--dim", "2"]);
    assert_eq!(k["kan"], false);
}

#[test]
fn verify_single_criterion() {
    let v = json_of(&["verify-paper", "--quick", "--only", "1"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["criteria"][0]["id"], 1);
}
