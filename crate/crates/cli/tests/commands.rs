use std::path::PathBuf;
use std::process::Command as Process;

use minmodel_cli::workspace::{load_workspace, parse_workspace, serialize_workspace, WorkspaceError};
use minmodel_cli::{invoke, Invocation};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn call(ws: &str, args: &[&str]) -> Invocation {
    let path = fixture(ws);
    let mut argv = vec!["minmodel".to_string(), path.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    invoke(argv)
}

fn report(inv: &Invocation) -> Value {
    serde_json::from_str(&inv.stdout).unwrap_or_else(|e| panic!("bad report ({e}): {}{}", inv.stdout, inv.stderr))
}

#[test]
fn fixtures_load_with_expected_contents() {
    let ws = load_workspace(&fixture("finset_i1.ws")).unwrap();
    assert_eq!(ws.base.objects(), ["pt"]);
    assert_eq!(ws.presheaves.keys().collect::<Vec<_>>(), ["0", "1", "2", "3"]);
    assert_eq!(ws.genset("I1").unwrap().maps.len(), 1);

    let ws = load_workspace(&fixture("gph_ig.ws")).unwrap();
    assert_eq!(ws.base.objects(), ["v", "e"]);
    for name in ["P", "dA", "A"] {
        assert!(ws.presheaves.contains_key(name), "{name}");
    }
    assert_eq!(ws.genset("IG").unwrap().maps.len(), 2);

    let ws = load_workspace(&fixture("finset_i2.ws")).unwrap();
    assert_eq!(ws.genset("I2").unwrap().maps.len(), 2);
}

#[test]
fn fixtures_round_trip() {
    for name in ["finset_i1.ws", "finset_i2.ws", "gph_ig.ws"] {
        let ws = load_workspace(&fixture(name)).unwrap();
        let text = serialize_workspace(&ws);
        let again = parse_workspace(&text).unwrap();
        assert_eq!(again, ws, "{name}");
        assert_eq!(serialize_workspace(&again), text, "{name}");
    }
}

#[test]
fn missing_workspace_is_a_usage_error() {
    let inv = call("does_not_exist.ws", &["validate"]);
    assert_eq!(inv.code, 3);
    assert!(inv.stderr.contains("cannot read"), "{}", inv.stderr);
    let err = load_workspace(&fixture("does_not_exist.ws")).unwrap_err();
    assert!(matches!(err, WorkspaceError::Io { .. }));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(call("finset_i1.ws", &["no-such-command"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["factor", "fold"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["factor", "nope", "I1"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["check-main", "nope"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["homotopic", "iota0", "iota1", "with", "empty1", "I1"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["homotopic", "iota0", "fold", "I1"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["check-main", "I1", "--bound", "q:2"]).code, 3);
    assert_eq!(call("finset_i1.ws", &["check-main", "I1", "--fuel", "lots"]).code, 3);
    let unknown = call("finset_i1.ws", &["factor", "nope", "I1"]);
    assert!(unknown.stderr.contains("unknown map `nope`"), "{}", unknown.stderr);
}

#[test]
fn validate_summarizes_workspace() {
    let inv = call("gph_ig.ws", &["validate"]);
    assert_eq!(inv.code, 0);
    let r = report(&inv);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["witnesses"]["gensets"][0]["maps"], serde_json::json!(["point", "boundary"]));
}

#[test]
fn report_keys_are_in_fixed_order() {
    let inv = call("finset_i1.ws", &["validate", "--timing"]);
    let keys: Vec<String> = report(&inv).as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["command", "parameters", "verdict", "witnesses", "bounds", "fuel_used", "timing_ms"]);
    let without: Vec<String> =
        report(&call("finset_i1.ws", &["validate"])).as_object().unwrap().keys().cloned().collect();
    assert_eq!(without.last().unwrap(), "fuel_used");
}

#[test]
fn check_main_on_sets_passes() {
    let inv = call("finset_i1.ws", &["check-main", "I1"]);
    assert_eq!(inv.code, 0, "{}", inv.stdout);
    let r = report(&inv);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["bounds"]["universe"]["objects"], 4);
    assert_eq!(r["bounds"]["universe"]["maps"], 60);
}

#[test]
fn classify_iota0() {
    let inv = call("finset_i1.ws", &["classify", "iota0", "I1"]);
    assert_eq!(inv.code, 0);
    let c = &report(&inv)["witnesses"]["classification"];
    assert_eq!(c["cofibration"], true);
    assert_eq!(c["weak_equivalence"], true);
    assert_eq!(c["trivial_cofibration"], true);
    assert_eq!(c["strong_deformation_retract"], true);
    assert_eq!(c["trivial_fibration"], false);

    let c = &report(&call("finset_i1.ws", &["classify", "empty1", "I1"]))["witnesses"]["classification"];
    assert_eq!(c["cofibration"], true);
    assert_eq!(c["weak_equivalence"], false);
    assert_eq!(c["pure"], false);
}

#[test]
fn factor_fold_logs_one_attachment() {
    let inv = call("finset_i2.ws", &["factor", "fold", "I2"]);
    assert_eq!(inv.code, 0);
    let r = report(&inv);
    let f = &r["witnesses"]["factorization"];
    assert_eq!(f["status"], "complete");
    assert_eq!(f["log"].as_array().unwrap().len(), 1);
    assert_eq!(r["fuel_used"], 1);
    // the right map is the identity of a point
    assert_eq!(f["right"]["map"]["components"], serde_json::json!([["pt", [["a", "a"]]]]));
}

#[test]
fn factor_out_of_fuel_is_inconclusive() {
    // the generator itself needs one attachment
    assert_eq!(call("gph_ig.ws", &["factor", "point", "IG", "--fuel", "0"]).code, 2);
    assert_eq!(call("gph_ig.ws", &["factor", "point", "IG", "--fuel", "1"]).code, 0);
    let inv = call("finset_i1.ws", &["factor", "empty2", "I1", "--fuel", "1"]);
    assert_eq!(inv.code, 2);
    assert_eq!(report(&inv)["witnesses"]["factorization"]["status"], "fuel_exhausted");
}

#[test]
fn homotopic_exit_codes() {
    assert_eq!(call("finset_i1.ws", &["homotopic", "iota0", "iota1", "I1"]).code, 0);
    assert_eq!(call("finset_i2.ws", &["homotopic", "iota0", "iota1", "I2"]).code, 1);
    // rel the identity-on-2 inclusion they differ on the relative part
    let inv = call("finset_i1.ws", &["homotopic", "id2", "swap", "rel", "id2", "I1"]);
    assert_eq!(inv.code, 1);
    let r = report(&inv);
    assert_eq!(r["witnesses"]["description"], "the maps differ on the relative part");
}

#[test]
fn cross_check_agrees_on_fixtures() {
    for (ws, set, f0, f1) in [
        ("finset_i1.ws", "I1", "iota0", "iota1"),
        ("finset_i2.ws", "I2", "iota0", "iota1"),
        ("gph_ig.ws", "IG", "source", "target"),
    ] {
        let r = report(&call(ws, &["homotopic", f0, f1, set, "--cross-check"]));
        assert_eq!(r["parameters"]["cross_check"], true);
        assert_eq!(r["witnesses"]["cross_check"]["agrees"], true, "{ws}");
    }
}

#[test]
fn config_flags_override_workspace() {
    let r = report(&call("finset_i1.ws", &["enumerate-we", "I1", "--bound", "2", "--fuel", "50"]));
    assert_eq!(r["parameters"]["bound"], "pt:2");
    assert_eq!(r["parameters"]["fuel"], 50);
    // |hom(m, n)| = n^m over m, n in 0..=2
    let total: u32 = (0..3u32).flat_map(|m| (0..3u32).map(move |n| n.pow(m))).sum();
    assert_eq!(r["witnesses"]["listing"]["total_maps"], total);
}

#[test]
fn output_flag_writes_file_atomically() {
    let dir = std::env::temp_dir().join(format!("minmodel-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let inv = call("finset_i1.ws", &["validate", "--output", out.to_str().unwrap()]);
    assert_eq!(inv.code, 0);
    assert!(inv.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, call("finset_i1.ws", &["validate"]).stdout);
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_minmodel");
    let run = |args: &[&str]| Process::new(exe).args(args).output().expect("spawn");
    let ws = fixture("finset_i1.ws");
    let ws = ws.to_str().unwrap();
    let ok = run(&[ws, "check-main", "I1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), call("finset_i1.ws", &["check-main", "I1"]).stdout);
    assert_eq!(run(&[ws, "frobnicate"]).status.code(), Some(3));
    let gph = fixture("gph_ig.ws");
    assert_eq!(run(&[gph.to_str().unwrap(), "check-main", "IG"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumerate_we_on_sets_matches_formula() {
    let r = report(&call("finset_i1.ws", &["enumerate-we", "I1"]));
    let sizes: std::collections::HashMap<String, usize> = r["witnesses"]["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| {
            let carrier = &o["presheaf"]["carriers"][0][1];
            (o["label"].as_str().unwrap().to_string(), carrier.as_array().unwrap().len())
        })
        .collect();
    let listed = r["witnesses"]["listing"]["weak_equivalences"].as_array().unwrap();
    for m in listed {
        let (x, y) = (sizes[m["source"].as_str().unwrap()], sizes[m["target"].as_str().unwrap()]);
        assert!(x != 0 || y == 0, "{m}");
    }
    // every map out of a nonempty set, plus the identity of the empty set
    let expected: usize = 1 + (1..=3u32).map(|m| (0..=3usize).map(|n| n.pow(m)).sum::<usize>()).sum::<usize>();
    assert_eq!(listed.len(), expected);
}
