use std::process::{Command, Output};

fn minfes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minfes")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn minimal_system_on_the_cube_of_degree_four() {
    let out = minfes(&["build", "mcfes", "--n", "3", "--r", "4", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let b = &v["builds"][0];
    let top = b["certificate"]["boundary_dims"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(top, serde_json::json!([0, 11, 45, 35]));
    assert_eq!(b["fes"]["format"], "minfes-fes/1");
}

#[test]
fn tensor_system_on_the_square() {
    let out = minfes(&["build", "tnt", "--n", "2", "--r", "1", "--format", "json"]);
    assert!(out.status.success());
    let dims = &json(&out)["builds"][0]["certificate"]["boundary_dims"];
    let top = dims.as_array().unwrap().last().unwrap();
    assert_eq!(top[1], 3);
}

#[test]
fn pretty_build_ends_with_the_certificate() {
    let out = minfes(&["build", "mcfes", "--n", "2", "--r", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("certificate: all checks pass\n"), "{text}");
}

#[test]
fn table_is_reproducible() {
    let a = minfes(&["table1", "--format", "csv"]);
    let b = minfes(&["table1", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 29);
    assert!(text.lines().any(|l| l.starts_with("2,7,204,204,204,")), "{text}");
}

#[test]
fn suites_exit_zero_when_every_case_passes() {
    for suite in ["serendipity", "zeroce", "kunneth"] {
        let out = minfes(&["verify", suite, "--n", "1..2", "--r", "1..3", "--format", "json"]);
        assert!(out.status.success(), "{suite}");
        let v = json(&out);
        assert_eq!(v["failed"], 0);
        assert!(v["passed"].as_u64().unwrap() > 0);
    }
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("minfes-cli-{}.csv", std::process::id()));
    let out = minfes(&["verify", "vem", "--n", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("suite,n,r,k,check,left,right,pass\n"));
}

#[test]
fn cost_guard_and_bad_input_exit_two() {
    assert_eq!(minfes(&["verify", "zeroce", "--n", "5"]).status.code(), Some(2));
    assert_eq!(minfes(&["build", "tnt", "--cell", "simplex"]).status.code(), Some(2));
    assert_eq!(minfes(&["verify", "nonsense"]).status.code(), Some(2));
}
