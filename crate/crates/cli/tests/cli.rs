use std::path::{Path, PathBuf};
use std::process::Command;

use hyperorient::format::InstanceFile;
use hyperorient_cli::{Report, Verdict};
use serde_json::json;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperorient"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_on(command: &str, instance: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec![command, "--instance", instance.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, stdout, _) = run(&args);
    (code, stdout)
}

fn report(stdout: &str) -> Report {
    Report::parse(stdout).expect("report parses")
}

#[test]
fn check_exit_codes() {
    let (code, out) = run_on("check", &fixture("feasible.json"), &[]);
    assert_eq!((code, report(&out).verdict), (0, Verdict::Feasible));

    let (code, out) = run_on("check", &fixture("infeasible.json"), &[]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (1, Verdict::Infeasible));
    assert_eq!(r.detail["certificate"]["subpartition"], json!([["a"], ["b"]]));
    assert_eq!(r.detail["certificate"]["deficiency"], json!(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let (code, ..) = run(&["check", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, ..) = run(&["check", "--instance", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, ..) = run(&["check"]);
    assert_eq!(code, 2);
    let (code, ..) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn golden_report_is_bit_exact() {
    let (_, out) = run_on("check", &fixture("infeasible.json"), &[]);
    let masked: String = out
        .lines()
        .map(|l| {
            if l.trim_start().starts_with("\"elapsed_us\"") {
                "  \"elapsed_us\": 0".to_string()
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/check_infeasible.json"),
    )
    .unwrap();
    assert_eq!(masked, golden);
}

#[test]
fn top_level_field_order() {
    let (_, out) = run_on("check", &fixture("feasible.json"), &["--seed", "9"]);
    let keys = ["\"command\"", "\"verdict\"", "\"detail\"", "\"seed\"", "\"caps\"", "\"elapsed_us\""];
    let positions: Vec<usize> = keys.iter().map(|k| out.find(k).expect(k)).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{out}");
    let r = report(&out);
    assert_eq!(r.seed, Some(9));
    assert_eq!(r.caps.max_vertices, 12);
}

#[test]
fn orient_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let oriented = dir.path().join("oriented.json");
    let (code, out) = run_on("orient", &fixture("feasible.json"), &["--out", oriented.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r.detail["steps"][0]["head"], json!("b"));

    let file = InstanceFile::parse(&std::fs::read_to_string(&oriented).unwrap()).unwrap();
    assert!(file.hyperedges.is_empty());
    assert_eq!(file.dyperedges.len(), 1);
    assert_eq!((file.dyperedges[0].tails.clone(), file.dyperedges[0].head.as_str()), (vec!["a".to_string()], "b"));

    let (code, out) = run_on("verify", &oriented, &[]);
    assert_eq!((code, report(&out).verdict), (0, Verdict::Verified));

    // verify refuses instances that still have hyperedges
    let (code, _) = run_on("verify", &fixture("feasible.json"), &[]);
    assert_eq!(code, 2);
}

#[test]
fn orient_keeps_dyperedges_verbatim() {
    let input = InstanceFile::parse(&std::fs::read_to_string(fixture("dyper_only.json")).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let oriented = dir.path().join("o.json");
    let (code, _) = run_on("orient", &fixture("dyper_only.json"), &["--out", oriented.to_str().unwrap()]);
    assert_eq!(code, 0);
    let output = InstanceFile::parse(&std::fs::read_to_string(&oriented).unwrap()).unwrap();
    assert_eq!(
        serde_json::to_string(&output.dyperedges).unwrap(),
        serde_json::to_string(&input.dyperedges).unwrap()
    );
}

#[test]
fn orient_infeasible_and_debug_recheck() {
    let (code, out) = run_on("orient", &fixture("infeasible.json"), &[]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (1, Verdict::Infeasible));
    assert!(r.detail["certificate"].is_object());

    let (code, out) = run_on("orient", &fixture("feasible.json"), &["--debug-recheck", "--parallel", "2"]);
    let r = report(&out);
    assert_eq!(code, 0);
    assert!(r.caps.debug_recheck);
    assert_eq!(r.caps.parallel, 2);
}

#[test]
fn funcs_verdicts() {
    let (code, out) = run_on("funcs", &fixture("modular_b.json"), &[]);
    assert_eq!((code, report(&out).verdict), (0, Verdict::Verified));

    let (code, out) = run_on("funcs", &fixture("non_submodular.json"), &[]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (1, Verdict::Refuted));
    let w = &r.detail["b"]["witness"];
    assert_eq!((w["x"].clone(), w["y"].clone()), (json!(["a"]), json!(["b"])));
    assert_eq!((w["lhs"].clone(), w["rhs"].clone()), (json!(0), json!(2)));
}

#[test]
fn uncross_pairs() {
    let instance = fixture("transfer.json");
    let pair = fixture("pair.json");
    let (code, out) = run_on("uncross", &instance, &["--pair", pair.to_str().unwrap()]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (0, Verdict::Verified));
    assert_eq!(r.detail["transfer"]["p3_tight"], json!(true));
    assert_eq!(r.detail["p3"], json!([["b"], ["c"], ["d"]]));
    assert_eq!(r.detail["steps"], json!(1));

    let crossing = fixture("crossing_pair.json");
    let (code, out) = run_on("uncross", &instance, &["--pair", crossing.to_str().unwrap()]);
    let r = report(&out);
    assert_eq!(code, 0);
    assert_eq!(r.detail["p3"], json!([["b"]]));
    assert_eq!(r.detail["p4"], json!([["a", "b", "c"]]));
    assert_eq!(r.detail["steps"], json!(1));
}

#[test]
fn packing_commands() {
    let (code, out) = run_on("pack-search", &fixture("single_arc.json"), &[]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (0, Verdict::Feasible));
    let arc = &r.detail["witness"][0]["arcs"][0];
    assert_eq!((arc["tail"].clone(), arc["head"].clone()), (json!("r"), json!("v")));

    let (code, out) = run_on("pack-check", &fixture("single_arc.json"), &[]);
    assert_eq!((code, report(&out).verdict), (0, Verdict::Feasible));

    // The same instance read as k-regular with k = 2 is infeasible.
    let text = std::fs::read_to_string(fixture("single_arc.json")).unwrap().replace("\"k\": 1", "\"k\": 2");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k2.json");
    std::fs::write(&path, text).unwrap();
    let (code, out) = run_on("pack-check", &path, &["--mode", "k_regular"]);
    let r = report(&out);
    assert_eq!((code, r.verdict), (1, Verdict::Infeasible));
    assert_eq!(r.detail["violation"]["condition"], json!("regular_in_degree"));

    let (code, _) = run_on("pack-check", &fixture("feasible.json"), &[]);
    assert_eq!(code, 2);
    let (code, _) = run_on("pack-check", &fixture("single_arc.json"), &["--mode", "bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--seed", "1", "--vertices", "4"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other, _) = run(&["gen", "--seed", "2", "--vertices", "4"]);
    assert_ne!(a, other);
    InstanceFile::parse(&a).unwrap().to_instance().unwrap();

    let (code, ..) = run(&["gen", "--vertices", "40"]);
    assert_eq!(code, 2);
}

#[test]
fn gen_infeasible_is_refused_by_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inf.json");
    let (code, ..) = run(&["gen", "--seed", "3", "--infeasible", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _) = run_on("check", &path, &[]);
    assert_eq!(code, 1);
}

#[test]
fn gen_packing_instance() {
    let (code, out, _) = run(&["gen", "--seed", "5", "--mode", "m_rooted_fgk_mixed"]);
    assert_eq!(code, 0);
    let inst = InstanceFile::parse(&out).unwrap().to_instance().unwrap();
    assert!(inst.packing.is_some());
}

#[test]
fn report_copy_written_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (_, out) = run_on("check", &fixture("feasible.json"), &["--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
}
