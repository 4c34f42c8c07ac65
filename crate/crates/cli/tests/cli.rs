use std::process::{Command, Output};

use serde_json::Value;

fn hexalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexalab"))
        .args(args)
        .env_remove("HEXALAB_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn char2_suite_rejects_odd_field() {
    let out = hexalab(&["verify", "cocycle4char2", "--field", "p=7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("binary field"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "pentachoron", "--trials", "0"],
        vec!["verify", "pentachoron", "--field", "p=15"],
        vec!["verify", "pentachoron", "--field", "gf2=4"],
        vec!["verify", "nosuch"],
        vec!["verify", "pachner", "--cluster", "omit=77"],
        vec!["verify", "exotic", "--complex", "/nonexistent/complex.txt"],
    ] {
        assert_eq!(hexalab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exotic_over_rationals_is_acyclic() {
    let out = hexalab(&["verify", "exotic", "--field", "q", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["field"], "q");
    let five = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "exotic.pentachoron")
        .unwrap();
    for c in five["data"]["trials"][0]["complexes"].as_array().unwrap() {
        assert_eq!(c["profile"]["homology"], serde_json::json!([0, 0, 0, 0, 0]));
    }
}

#[test]
fn reports_are_byte_identical_and_seed_env_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..3)
        .map(|i| dir.path().join(format!("r{i}.json")).display().to_string())
        .collect();
    for p in &paths[..2] {
        let out = hexalab(&[
            "verify", "cocycle4", "--seed", "9", "--trials", "2", "--out", p,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_hexalab"))
        .args(["verify", "cocycle4", "--trials", "2", "--out", &paths[2]])
        .env("HEXALAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let read = |p: &str| std::fs::read(p).unwrap();
    assert_eq!(read(&paths[0]), read(&paths[1]));
    assert_eq!(read(&paths[0]), read(&paths[2]));
}

#[test]
fn large_seeds_are_strings() {
    let out = hexalab(&["verify", "cocycle3", "--seed", "18446744073709551615"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["seed"], "18446744073709551615");
    assert_eq!(
        r["checks"][0]["data"]["trials"][0]["seed"],
        "18446744073709551615"
    );
}

#[test]
fn complex_file_and_cluster_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    std::fs::write(&path, "# two pentachora\n1 2 3 4 5\n1 2 3 4 6\n").unwrap();
    let out = hexalab(&["verify", "exotic", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let general = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "exotic.general")
        .unwrap();
    assert_eq!(general["data"]["trials"][0]["pentachora"], 2);

    let out = hexalab(&["verify", "pachner", "--cluster", "omit=6,5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["cluster"], "omit=6,5");
    let clusters = &r["checks"][0]["data"]["trials"][0]["clusters"];
    assert_eq!(clusters[0]["cluster"], "omit=6,5");
    assert_eq!(clusters[0]["boundary_dim"], 8);
}

#[test]
fn unattainable_field_exits_one() {
    let out = hexalab(&["verify", "cocycle4", "--field", "p=3"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["checks"][0]["status"], "error");
    assert_eq!(r["summary"]["ok"], false);
}

#[test]
fn full_run_passes_with_31_splittings() {
    let out = hexalab(&[
        "verify",
        "all",
        "--field",
        "p=2147483647",
        "--seed",
        "42",
        "--trials",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"cocycle4char2") && names.contains(&"hexagon.generic"));
    for c in r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("hexagon."))
    {
        assert_eq!(c["status"], "pass");
        for t in c["data"]["trials"].as_array().unwrap() {
            assert_eq!(t["splittings_passed"], 31);
        }
    }
    assert_eq!(r["summary"]["ok"], true);
}
