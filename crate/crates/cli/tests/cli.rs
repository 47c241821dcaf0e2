//! End-to-end checks of the binary: suites pass, reports are
//! deterministic for a fixed seed, bad flags exit 2.

use std::process::Command;

fn ddg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddg"))
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "abs", "--samples", "15"],
        vec!["verify", "abs", "--exact", "--samples", "10"],
        vec!["verify", "yb", "--samples", "15"],
        vec!["verify", "patterns", "--suite", "zpow", "--a", "0.8", "--n", "8"],
        vec!["verify", "patterns", "--suite", "log", "--n", "8"],
        vec!["verify", "patterns", "--suite", "laplace", "--a", "0.6", "--n", "8"],
        vec!["verify", "dca", "--n", "12"],
        vec!["verify", "nets", "--samples", "25"],
    ] {
        let out = ddg().args(&args).output().expect("spawn");
        assert!(
            out.status.success(),
            "{args:?} failed:\n{}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn reports_are_deterministic_for_fixed_seed() {
    let dir = std::env::temp_dir();
    let (p1, p2) = (dir.join("ddg_rep1.json"), dir.join("ddg_rep2.json"));
    for p in [&p1, &p2] {
        let out = ddg()
            .args([
                "--seed",
                "42",
                "verify",
                "yb",
                "--samples",
                "10",
                "--json",
                p.to_str().unwrap(),
            ])
            .output()
            .expect("spawn");
        assert!(out.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b, "reports differ for the same seed");
}

#[test]
fn bad_flag_exits_2() {
    let out = ddg().args(["verify", "abs", "--bogus"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
    // unknown sub-suite is a configuration error as well
    let out = ddg()
        .args(["verify", "patterns", "--suite", "nope"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_writes_outputs() {
    let dir = std::env::temp_dir();
    let svg = dir.join("ddg_t.svg");
    let obj = dir.join("ddg_t.obj");
    let csv = dir.join("ddg_t.csv");
    let gj = dir.join("ddg_t_graph.json");
    let out = ddg()
        .args([
            "gen",
            "zpow",
            "--a",
            "0.8",
            "--n",
            "6",
            "--svg",
            svg.to_str().unwrap(),
            "--graph-json",
            gj.to_str().unwrap(),
        ])
        .output()
        .expect("spawn");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"));
    // n^2 kites
    assert_eq!(body.matches("<polygon").count(), 36);
    let graph: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&gj).unwrap()).unwrap();
    assert!(graph["vertices"].as_array().unwrap().len() == 49);
    assert!(graph["faces"].as_array().unwrap().len() == 36);
    let out = ddg()
        .args(["gen", "knet", "--steps", "8", "--obj", obj.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert!(out.status.success());
    let body = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(body.lines().filter(|l| l.starts_with("v ")).count(), 81);
    assert_eq!(body.lines().filter(|l| l.starts_with("f ")).count(), 64);
    let out = ddg()
        .args(["gen", "greens", "--radius", "8", "--csv", csv.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.lines().next().unwrap().starts_with("x,y,value"));
    // gen with no output selected is a configuration error
    let out = ddg().args(["gen", "zpow", "--a", "0.5"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}
