use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use abundance_core::abundance::Certificate;
use abundance_core::graphs::ColouredGraph;
use serde_json::Value;

fn abund(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abund")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn genus_of_a_nonconvex_genus_one_equation() {
    let out = abund(&["eq", "genus", "2,2,2,-3,-3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "1");
    let out = abund(&["eq", "classify", "-1,1,-2,2"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["genus"], 2);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&abund(&["eq", "genus", "1,2"])), 2);
    assert_eq!(code(&abund(&["eq", "genus", "1,x,-1"])), 2);
    assert_eq!(code(&abund(&["no-such-command"])), 2);
    assert_eq!(code(&abund(&["abundance", "verify", "--cert", "/nonexistent.json"])), 2);
}

#[test]
fn resource_bounds_exit_with_three() {
    let out = abund(&["eq", "avoid", "1,1,-2", "--N", "1000"]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn version_is_printed() {
    let out = abund(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("abund "));
}

#[test]
fn certificates_verify_and_corruptions_are_reported() {
    for name in ["fig1_c5.json", "fig2_petersen.json"] {
        let out = abund(&["abundance", "verify", "--cert", fixture(name).to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}");
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["valid"], true);
    }
    let dir = tempfile::tempdir().unwrap();
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(fixture("fig1_c5.json")).unwrap()).unwrap();
    let node = &mut cert["nodes"][1];
    let sigma = node["output_graph"]["sigma"].as_array_mut().unwrap();
    let last = sigma.len() - 1;
    sigma[last] = Value::from((sigma[last].as_u64().unwrap() + 1) % 3);
    let path = write(&dir, "bad.json", &cert.to_string());
    let out = abund(&["abundance", "verify", "--cert", &path]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["error"]["node"].is_string());
    assert!(String::from_utf8_lossy(&out.stderr).contains("node `"));
}

#[test]
fn json_inputs_round_trip() {
    let text = std::fs::read_to_string(fixture("fig2_petersen.json")).unwrap();
    let cert: Certificate = serde_json::from_str(&text).unwrap();
    let again: Certificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert, again);

    let out = abund(&["construct", "fig5"]);
    let g: ColouredGraph = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(serde_json::to_string(&g).unwrap(), stdout(&out).trim());

    let out = abund(&["construct", "behrend", "--n", "1000"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let members: Vec<i64> = serde_json::from_value(v["members"].clone()).unwrap();
    assert!(members.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn identical_seeds_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = abund(&["construct", "rs", "--N", "12", "--set", &write(&dir, "a.json", "[1,2,4,5,10,11]")]);
    assert_eq!(code(&out), 0);
    let rs: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let graph = write(&dir, "g.json", &rs["graph"].to_string());
    let run = |seed: &str| stdout(&abund(&["--seed", seed, "removal", "uniformize", "--graph", &graph, "--eps", "0.01"]));
    let first = run("7");
    assert!(!first.is_empty());
    assert_eq!(first, run("7"));
    let core = |jobs: &str| stdout(&abund(&["--jobs", jobs, "removal", "dense-core", "--graph", &graph]));
    assert_eq!(core("1"), core("3"));
}

#[test]
fn check_all_emits_one_line_per_class_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(&dir, "c5.json", r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4],[0,4]]}"#);
    let run = |jobs: &str| abund(&["--jobs", jobs, "cyceq", "check-all", "--graph", &c5, "--check", "genus1"]);
    let out = run("1");
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["classes"].as_u64().unwrap() as usize, lines.len() - 1);
    assert!(lines[..lines.len() - 1].iter().all(|r| r["verdict"].is_string()));
    assert_eq!(stdout(&out), stdout(&run("4")));
    let pretty = abund(&["--pretty", "cyceq", "check-all", "--graph", &c5]);
    assert!(stdout(&pretty).contains("classes"));
}

#[test]
fn line_hom_reports_wrapped_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#;
    let rainbow = write(&dir, "t.json", &format!(r#"{{"pattern":{k3},"host":{k3},"sigma":[0,1,2]}}"#));
    let out = abund(&["graph", "line-hom", "--graph", &rainbow]);
    assert_eq!(code(&out), 1);
    let path = write(&dir, "p.json", &format!(r#"{{"pattern":{k3},"host":{{"n":3,"edges":[[0,1],[1,2]]}},"sigma":[0,1,2]}}"#));
    assert_eq!(code(&abund(&["graph", "line-hom", "--graph", &path])), 0);
}

#[test]
fn distinct_solutions_check_out() {
    let dir = tempfile::tempdir().unwrap();
    let set: Vec<i64> = (1..=400).filter(|x| x % 7 != 3).collect();
    let path = write(&dir, "a.json", &serde_json::to_string(&set).unwrap());
    let out = abund(&["solve", "distinct", "--eq", "1,-1,1,1,-2", "--set", &path, "--N", "400"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let x: Vec<String> = v["assignment"].as_array().unwrap().iter().map(|a| a.to_string()).collect();
    let check = abund(&["eq", "solution", "1,-1,1,1,-2", "--values", &x.join(",")]);
    assert_eq!(stdout(&check).trim(), "\"all_distinct\"");
}

#[test]
fn hm_has_the_expected_order() {
    let out = abund(&["abundance", "hm", "--pattern", "k3", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let g: ColouredGraph = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(g.host().n(), 24);
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "h.json", &stdout(&out));
    let split = abund(&["abundance", "split", "--graph", &path]);
    assert!([0, 1, 3].contains(&code(&split)));
}
