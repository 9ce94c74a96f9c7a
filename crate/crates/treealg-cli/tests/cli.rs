use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn treealg(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_treealg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(bytes) = stdin {
        pipe.write_all(bytes).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn zoo_piped_into_hatpi() {
    let alg = treealg(&["zoo", "MIN2"], None);
    assert!(alg.status.success());
    let lasso = data("lasso1.json");
    let out = treealg(&["hatpi", "--graph", &lasso, "--omega", "1:0"], Some(&alg.stdout));
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["value"], "0@");
    assert_eq!(r["result"]["class"], "thin-regular");
    assert_eq!(r["inputs"]["algebra"]["path"], "-");
    assert_eq!(r["inputs"]["algebra"]["sha256"].as_str().unwrap().len(), 64);

    let out = treealg(&["hatpi", "--graph", &lasso, "--omega", "1:1"], Some(&alg.stdout));
    assert_eq!(report(&out)["result"]["value"], "1@");
}

#[test]
fn min2_has_two_omega_tables() {
    let out = treealg(&["expand-wilke", "--zoo", "MIN2"], None);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["count"], 2);
}

#[test]
fn unamb7_two_node_presentation_has_two_labellings() {
    let g = data("atree2.json");
    let out = treealg(&["labellings", "--zoo", "UNAMB7", "--graph", &g, "--level", "thin"], None);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["count"], 2);
    let out = treealg(&["unambiguous", "--zoo", "UNAMB7", "--graph", &g], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "fail");
}

#[test]
fn unlawful_omega_table_fails() {
    let out = treealg(&["laws", "--zoo", "MIN2", "--omega", "0:1"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = treealg(&["laws", "--zoo", "MIN2", "--omega", "1:1"], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("treealg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"nodes\": [").unwrap();
    let out = treealg(&["hatpi", "--zoo", "MIN2", "--graph", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["verdict"], "error");
    let out = treealg(&["hatpi", "--zoo", "MIN2", "--graph", "/nonexistent/g.json"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = treealg(&["laws", "--criterion", "12"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let g = data("comb.json");
    for args in [
        vec!["rewire", "--zoo", "MIN2", "--graph", &g],
        vec!["evaluate", "--zoo", "MIN2", "--graph", &g],
        vec!["laws", "--criterion", "3", "--seed", "5"],
    ] {
        let a = treealg(&args, None);
        let b = treealg(&args, None);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn arena_solution_matches_brute_force() {
    let out = treealg(&["game", "--arena", &data("arena.json")], None);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["brute_force_agrees"], true);
    assert_eq!(r["result"]["winner"]["a"], "even");
}

#[test]
fn criterion_suite_runs_in_parallel_order() {
    let out = treealg(&["laws", "--criterion", "all", "--jobs", "3", "--size", "3"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let ks: Vec<u64> =
        r["result"]["criteria"].as_array().unwrap().iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    assert_eq!(ks, (1..=11).collect::<Vec<_>>());
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("treealg-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = treealg(&["expand-wilke", "--zoo", "MIN2", "--out", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["count"], 2);
}

#[test]
fn split_commands_on_shipped_files() {
    let (s, t, e) = (data("min2-omega.json"), data("shape.json"), data("edges.json"));
    let base = ["--semigroup", &s, "--tree", &t, "--labelling", &e];
    let out = treealg(&[&["reconstruct"], &base[..]].concat(), None);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["pairs"].as_array().unwrap().len(), 7);
    let out = treealg(&[&["split"], &base[..]].concat(), None);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["verified"], true);
    let out = treealg(&["limits", "--semigroup", &s, "--graph", &data("edge-lasso.json")], None);
    assert_eq!(report(&out)["result"]["limits"], serde_json::json!(["0", "1"]));
}

#[test]
fn xor2_is_not_meet_distributive() {
    let g = data("upsets.json");
    let out = treealg(&["distributivity", "--zoo", "XOR2", "--graph", &g], None);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["product_of_meets"], "1@");
    assert_eq!(r["result"]["meet_of_products"], "0@");
    let out = treealg(&["distributivity", "--zoo", "MIN2", "--graph", &g], None);
    assert_eq!(out.status.code(), Some(0));
}
