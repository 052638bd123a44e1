use std::path::PathBuf;

use shimura_lab::cli::{run, EXIT_USAGE};
use shimura_lab::formats::{GraphFile, SignatureFile};
use shimura_lab::manifest::RunManifest;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn lab(args: &[&str]) -> shimura_lab::cli::Outcome {
    run(std::iter::once("shimura-lab").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn signature_of_the_maximal_group() {
    let (f, d, cm) = (
        fixture("F.json"),
        fixture("D.json"),
        fixture("cmorders.json"),
    );
    let out = lab(&[
        "fuchsian",
        "signature",
        "--field",
        &f,
        "--quat",
        &d,
        "--cm",
        &cm,
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().next(), Some("(16; 2^17, 3^9, 32^1)"));
}

#[test]
fn unit_group_claim_is_checked() {
    let (d, cm) = (fixture("D.json"), fixture("cmorders.json"));
    let ok = lab(&[
        "fuchsian",
        "signature",
        "--quat",
        &d,
        "--cm",
        &cm,
        "--group",
        "unit",
        "--claim",
        "(40; 3^18, 16^1)",
    ]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert!(ok.stdout.starts_with("(40; 3^18, 16^1)"));
    let bad = lab(&[
        "fuchsian",
        "signature",
        "--quat",
        &d,
        "--cm",
        &cm,
        "--group",
        "unit",
        "--claim",
        "(39; 3^18, 16^1)",
    ]);
    assert_eq!(bad.code, 2);
    let missing = lab(&[
        "fuchsian",
        "signature",
        "--quat",
        &d,
        "--cm",
        &cm,
        "--group",
        "unit",
    ]);
    assert_eq!(missing.code, 3);
}

#[test]
fn tree_has_betti_zero() {
    let out = lab(&["graph", "betti", "--in", &fixture("tree.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "0");
    let js = lab(&["--json", "graph", "betti", "--in", &fixture("tree.json")]);
    let v: serde_json::Value = serde_json::from_str(&js.stdout).unwrap();
    assert_eq!(v["betti"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&["--no-such-flag"]).code, EXIT_USAGE);
    assert_eq!(
        lab(&[
            "graph",
            "betti",
            "--in",
            &fixture("tree.json"),
            "--frobnicate"
        ])
        .code,
        EXIT_USAGE
    );
    assert_eq!(lab(&["teleport"]).code, EXIT_USAGE);
    assert_eq!(lab(&["--help"]).code, 0);
    // missing file and genus below 2 are validation errors
    assert_eq!(
        lab(&["graph", "betti", "--in", "/nonexistent/graph.json"]).code,
        2
    );
    assert_eq!(lab(&["fuchsian", "weierstrass", "--genus", "1"]).code, 2);
}

#[test]
fn weierstrass_verdict() {
    let out = lab(&[
        "fuchsian",
        "weierstrass",
        "--genus",
        "16",
        "--cm-count",
        "17",
        "--galois-degree",
        "34",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("hyperelliptic, #W = 34"));
}

#[test]
fn number_field_info() {
    let out = lab(&["--json", "nf", "info", &fixture("L_f.json"), "--prime", "5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["degree"], 4);
    assert_eq!(v["signature"], serde_json::json!([4, 0]));
    assert_eq!(v["splitting"][0]["ef"], serde_json::json!([[4, 1]]));
}

#[test]
fn quaternion_fixtures_validate() {
    for q in ["D.json", "B.json"] {
        let out = lab(&["quat", "validate", &fixture(q)]);
        assert_eq!(out.code, 0, "{q}: {}", out.stderr);
        assert!(out.stdout.contains("consistent"));
    }
}

#[test]
fn declared_congruences_connect() {
    let out = lab(&[
        "--json",
        "hecke",
        "connect",
        "--declared",
        &fixture("congruences.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
}

#[test]
fn census_command() {
    let out = lab(&["--json", "paper", "census", "--bound", "1000"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["all_allowed"], true);
    assert!(v["first_prime"]["17"].is_u64());
}

#[test]
fn graph_outputs_reload() {
    let out_path = scratch("stable_tree.json");
    let out = lab(&[
        "graph",
        "stabilize",
        "--in",
        &fixture("tree.json"),
        "--out",
        &out_path.display().to_string(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let text = std::fs::read_to_string(&out_path).unwrap();
    let g: GraphFile = serde_json::from_str(&text).unwrap();
    g.to_graph().unwrap();
    let dot = lab(&["graph", "export", "--in", &fixture("tree.json"), "--dot"]);
    assert!(dot.stdout.starts_with("graph ") && dot.stdout.contains("label=\"4\""));
}

#[test]
fn json_signature_payload_parses() {
    let (d, cm) = (fixture("D.json"), fixture("cmorders.json"));
    let out = lab(&[
        "--json",
        "fuchsian",
        "signature",
        "--quat",
        &d,
        "--cm",
        &cm,
        "--prime-bound",
        "1000",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let s: SignatureFile = serde_json::from_value(v["signature"].clone()).unwrap();
    assert_eq!(
        s.to_signature().unwrap().to_string(),
        "(16; 2^17, 3^9, 32^1)"
    );
}

#[test]
fn manifest_is_stable_across_runs() {
    let path = scratch("manifest.json");
    let tree = fixture("tree.json");
    let args = [
        "--manifest",
        &path.display().to_string(),
        "graph",
        "aut",
        "--in",
        &tree,
    ]
    .map(String::from);
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = lab(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.code, 0, "{}", out.stderr);
        runs.push((out.stdout, std::fs::read(&path).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    let m: RunManifest = serde_json::from_slice(&runs[0].1).unwrap();
    assert_eq!(m.inputs.len(), 1);
    assert_eq!(
        m.output_sha256,
        shimura_lab::manifest::sha256_hex(runs[0].0.as_bytes())
    );
}
