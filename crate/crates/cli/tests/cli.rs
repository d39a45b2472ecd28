use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mpc_core::chambers;
use mpc_core::model::{fmt_point, parse_space};
use serde_json::json;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn mpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let o = mpc(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    mpc(args).status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_shipped_data() {
    for f in ["sphere.json", "cp2.json", "tolman.json", "su3_rho.json"] {
        let out = run_ok(&["validate", path(&data(f))]);
        assert!(out.starts_with("valid"), "{f}: {out}");
    }
    assert!(run_ok(&["validate", path(&data("su3_rho.json"))]).contains("index census: (1,2,2,1)"));
}

#[test]
fn invalid_documents_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let doc = json!({
        "version": "mpc-1", "name": "bad", "rank": 1,
        "fixed_points": [
            {"id": "A", "moment": [0], "weights": [[0]]},
            {"id": "B", "moment": [1], "weights": [[-1]]}
        ],
        "edges": []
    });
    std::fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(code(&["validate", path(&bad)]), 2);
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&["validate", path(&bad)]), 2);
    assert_eq!(code(&["validate", path(&dir.path().join("missing.json"))]), 2);
    assert_eq!(code(&["integrate", path(&data("cp2.json")), "--class", "nope", "--point", "1/4,1/4"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn integrate_and_dendrite_agree_on_small_spaces() {
    let cp2 = run_ok(&["integrate", path(&data("cp2.json")), "--class", "one", "--point", "1/4,1/4"]);
    assert!(cp2.trim() == "1" || cp2.trim() == "-1", "{cp2}");
    let sphere = run_ok(&["integrate", path(&data("sphere.json")), "--class", "one", "--point", "1/2"]);
    assert_eq!(sphere.trim(), "-1");
    assert_eq!(run_ok(&["dendrite", path(&data("sphere.json")), "--class", "one", "--point", "1/2"]), sphere);
    let sub_top = run_ok(&["integrate", path(&data("su3_21.json")), "--class", "one", "--point", "1/3,1/5"]);
    assert_eq!(sub_top.trim(), "0");
}

#[test]
fn singular_points_exit_with_three() {
    assert_eq!(code(&["integrate", path(&data("cp2.json")), "--class", "one", "--point", "1/2,0"]), 3);
    assert_eq!(code(&["fingerprint", path(&data("su3_rho.json")), "--point", "0,0"]), 3);
}

#[test]
fn rank_three_chambers_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("cp3.json");
    let vertex = |i: usize| -> Vec<i64> { (0..3).map(|k| i64::from(k + 1 == i)).collect() };
    let diff = |i: usize, j: usize| -> Vec<i64> { vertex(j).iter().zip(vertex(i)).map(|(a, b)| a - b).collect() };
    let fps: Vec<_> = (0..4)
        .map(|i| json!({"id": format!("P{i}"), "moment": vertex(i), "weights": (0..4).filter(|&j| j != i).map(|j| diff(i, j)).collect::<Vec<_>>()}))
        .collect();
    let edges: Vec<_> = (0..4)
        .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
        .map(|(i, j)| json!({"from": format!("P{i}"), "to": format!("P{j}"), "weight": diff(i, j)}))
        .collect();
    let doc = json!({"version": "mpc-1", "name": "cp3", "rank": 3, "fixed_points": fps, "edges": edges});
    std::fs::write(&f, doc.to_string()).unwrap();
    assert_eq!(run_ok(&["validate", path(&f)]).lines().next(), Some("valid"));
    assert_eq!(code(&["chambers", path(&f)]), 4);
    let v = run_ok(&["integrate", path(&f), "--class", "one", "--point", "1/5,1/5,1/5"]);
    assert!(v.trim() == "1" || v.trim() == "-1", "{v}");
}

#[test]
fn su3_chamber_counts() {
    let rho = run_ok(&["count-chambers", path(&data("su3_rho.json"))]);
    assert!(rho.contains("chambers: 6 (geometry) / 6 (ideals)"), "{rho}");
    let generic = run_ok(&["count-chambers", path(&data("su3_21.json")), "--method", "both"]);
    assert!(generic.contains("chambers: 7 (geometry) / 7 (ideals)"), "{generic}");
    let geometry = run_ok(&["count-chambers", path(&data("su3_21.json")), "--method", "geometry"]);
    assert!(geometry.contains('7'), "{geometry}");
}

#[test]
fn fingerprints_report_reduced_betti_numbers() {
    let out = run_ok(&["fingerprint", path(&data("su3_21.json")), "--point", "1/3,1/5"]);
    assert!(out.contains("reduced betti: (1,1)"), "{out}");
    let cp2 = run_ok(&["fingerprint", path(&data("cp2.json")), "--point", "1/4,1/4"]);
    assert!(cp2.contains("reduced betti: (1)"), "{cp2}");
}

#[test]
fn distinguish_certifies_the_tolman_pair() {
    let out = run_ok(&["distinguish", path(&data("tolman.json")), "--p", "2,3/2", "--q", "3/2,2"]);
    let cert = out.lines().find(|l| l.starts_with("certificate:")).expect("certificate line");
    assert!(cert.ends_with("integral at q = 0"), "{cert}");
    assert!(!cert.contains("integral at p = 0,"), "{cert}");
}

#[test]
fn cross_reports_matching_differences() {
    let space = parse_space(&std::fs::read_to_string(data("su3_21.json")).unwrap()).unwrap();
    let arr = chambers::arrangement(&space).unwrap();
    let (_, _, p, q) = arr.crossing_pairs().into_iter().next().unwrap();
    let json_out = tempfile::NamedTempFile::new().unwrap();
    run_ok(&[
        "--json",
        path(json_out.path()),
        "cross",
        path(&data("su3_21.json")),
        "--p",
        &fmt_point(&p),
        "--q",
        &fmt_point(&q),
        "--class",
        "mt:s1",
    ]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json_out.path()).unwrap()).unwrap();
    assert_eq!(report["difference"], report["direct"], "{report}");
    assert_eq!(code(&["cross", path(&data("su3_21.json")), "--p", "1/3,1/5", "--q", "1/3,1/4", "--class", "one"]), 1);
}

#[test]
fn gen_reproduces_the_data_files() {
    let dir = tempfile::tempdir().unwrap();
    for (args, file) in [(vec!["su3", "2,1"], "su3_21.json"), (vec!["hirzebruch", "2"], "hirzebruch2.json"), (vec!["tolman"], "tolman.json")] {
        let out = dir.path().join(file);
        let mut full = vec!["gen"];
        full.extend(args);
        full.extend(["-o", path(&out)]);
        run_ok(&full);
        assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(data(file)).unwrap(), "{file}");
    }
    assert_eq!(code(&["gen", "hirzebruch", "-1"]), 2);
    assert_eq!(code(&["gen", "su3", "0,1"]), 2);
}

#[test]
fn reports_and_svgs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    let first = run_ok(&["chambers", path(&data("tolman.json")), "--svg", path(&a)]);
    let second = run_ok(&["chambers", path(&data("tolman.json")), "--svg", path(&b)]);
    assert_eq!(first, second);
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().starts_with("<svg"));
    let su3 = data("su3_rho.json");
    let args = ["--seed", "7", "--jobs", "2", "fingerprint", path(&su3), "--point", "1/3,1/5"];
    assert_eq!(run_ok(&args), run_ok(&args));
}

#[test]
fn schubert_restrictions() {
    assert_eq!(run_ok(&["schubert", "--lambda", "1,1", "--sigma", "s1", "--tau", "s1"]).trim(), "2*x1 - x2");
    assert_eq!(run_ok(&["schubert", "--lambda", "2,1", "--sigma", "w0", "--tau", "s1"]).trim(), "0");
    assert_eq!(code(&["schubert", "--lambda", "1,-1", "--sigma", "s1", "--tau", "s1"]), 2);
}
