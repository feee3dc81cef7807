use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn optproof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optproof"))
        .args(args)
        .env_remove("OPTPROOF_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn contradiction(dir: &Path) -> PathBuf {
    write(dir, "x.cnf", "p cnf 1 2\n1 0\n-1 0\n")
}

#[test]
fn backtracking_size_of_x_and_not_x() {
    let dir = TempDir::new().unwrap();
    let out = optproof(&["opt", s(&contradiction(dir.path())), "--method", "bt", "--size"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1");
}

#[test]
fn regular_resolution_size_of_p_and_not_p() {
    let dir = TempDir::new().unwrap();
    let out = optproof(&["res", s(&contradiction(dir.path())), "--min-size", "--budget", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1");
}

#[test]
fn only_variable_is_an_optimal_root() {
    let dir = TempDir::new().unwrap();
    let out = optproof(&["opt", s(&contradiction(dir.path())), "--obv", "1"]);
    assert_eq!(stdout(&out), "true");
}

#[test]
fn tree_validation() {
    let dir = TempDir::new().unwrap();
    let f = contradiction(dir.path());
    let good = write(dir.path(), "good.txt", "(1 () ())\n");
    let bad = write(dir.path(), "bad.txt", "()\n");
    assert_eq!(stdout(&optproof(&["opt", s(&f), "--validate", s(&good)])), "true");
    assert_eq!(stdout(&optproof(&["opt", s(&f), "--validate", s(&bad)])), "false");
}

#[test]
fn sum_of_files_adds_sizes() {
    let dir = TempDir::new().unwrap();
    let f = contradiction(dir.path());
    let h = write(dir.path(), "y.cnf", "p cnf 2 2\n2 0\n-2 0\n");
    let sum = dir.path().join("sum.cnf");
    assert!(optproof(&["combine", "sum", s(&f), s(&h), "-o", s(&sum)]).status.success());
    assert_eq!(stdout(&optproof(&["opt", s(&sum), "--size"])), "3");
    assert_eq!(optproof(&["combine", "sum", s(&f), s(&f)]).status.code(), Some(1));
}

#[test]
fn generated_exact_size_formula() {
    let dir = TempDir::new().unwrap();
    let out = optproof(&["gen", "im", "5"]);
    let path = write(dir.path(), "i5.cnf", &String::from_utf8(out.stdout).unwrap());
    assert_eq!(stdout(&optproof(&["opt", s(&path), "--size"])), "5");
}

#[test]
fn dpll_image_tree_maps_back() {
    let dir = TempDir::new().unwrap();
    let f = contradiction(dir.path());
    let (image, sidecar) = (dir.path().join("m.cnf"), dir.path().join("m.json"));
    assert!(optproof(&["transform", "lemma1", s(&f), "-o", s(&image), "--sidecar", s(&sidecar)]).status.success());
    let tree = optproof(&["opt", s(&image), "--tree", "--method", "dpll"]);
    let tree = write(dir.path(), "t.txt", &String::from_utf8(tree.stdout).unwrap());
    let back = optproof(&["transform", "lemma1-back", s(&tree), "--mirror", s(&sidecar)]);
    let back = write(dir.path(), "back.txt", &String::from_utf8(back.stdout).unwrap());
    assert_eq!(stdout(&optproof(&["opt", s(&f), "--validate", s(&back)])), "true");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(optproof(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(optproof(&["opt", "missing.cnf", "--size"]).status.code(), Some(1));
    assert_eq!(optproof(&["verify", "sum", "--samples", "5"]).status.code(), Some(0));
    assert_eq!(optproof(&["verify", "ex-size"]).status.code(), Some(2));
    let hard = dir.path().join("k.cnf");
    let k = optproof(&["gen", "completek", "4"]);
    fs::write(&hard, k.stdout).unwrap();
    assert_eq!(optproof(&["opt", s(&hard), "--size", "--budget", "3"]).status.code(), Some(3));
}

#[test]
fn suite_json_is_reproducible() {
    let a = optproof(&["verify", "union", "--samples", "20", "--seed", "9", "--json"]);
    let b = optproof(&["verify", "union", "--samples", "20", "--seed", "9", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["instances"], 20);
}
