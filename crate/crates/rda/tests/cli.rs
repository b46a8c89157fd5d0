use std::path::PathBuf;
use std::process::{Command, Output};

fn rda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rda"))
        .args(args)
        .env_remove("IRIS_PATH")
        .env_remove("MNIST_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = rda(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    rda(args).status.code().expect("exit code")
}

fn iris() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/iris.data")
        .display()
        .to_string()
}

#[test]
fn polynomials() {
    assert_eq!(stdout(&["poly", "copy ; and"]), "x1^2\n");
    assert_eq!(stdout(&["poly", "id 1"]), "x1\n");
    assert_eq!(stdout(&["poly", "zero"]), "0\n");
}

#[test]
fn safety_reports() {
    assert_eq!(
        stdout(&["safety", "copy ; and"]),
        "unsafe: and@0 reachable-from input 1\n"
    );
    assert_eq!(stdout(&["safety", "and"]), "safe\n");
}

#[test]
fn reverse_derivative_of_identity() {
    let circuit = stdout(&["rdiff", "id 1"]);
    assert_eq!(stdout(&["equiv", circuit.trim(), "discard | id 1"]), "yes\n");
    assert_eq!(stdout(&["rdiff", "--brute", "id 1"]), "00 0\n01 1\n10 0\n11 1\n");
}

#[test]
fn equivalence_exit_codes() {
    assert_eq!(code(&["equiv", "copy ; and", "id 1"]), 0);
    assert_eq!(code(&["equiv", "--mod", "A", "copy ; and", "id 1"]), 1);
    assert_eq!(stdout(&["equiv", "--mod", "A", "copy ; swap", "copy"]), "yes\n");
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&["poly", "copy ;"]), 2);
    assert_eq!(code(&["poly", "copy ; copy"]), 2);
    assert_eq!(code(&["rdiff", "--brute", "id 11"]), 3);
    assert_eq!(code(&["equiv", "id 1", "id 2"]), 4);
    assert_eq!(code(&["train", "iris2", "--iris-path", "/nonexistent/iris.data"]), 5);
    assert_eq!(code(&["train", "mnist01", "--mnist-dir", "/nonexistent"]), 5);
}

#[test]
fn train_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        stdout(&[
            "train",
            "iris2",
            "--encoding",
            "one-hot",
            "--iris-path",
            &iris(),
            "--out",
            p,
        ]);
        std::fs::read_to_string(path).unwrap()
    };
    let (first, second) = (run("a.tsv"), run("b.tsv"));
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(
        lines[0],
        "dataset\tmodel\tencoding\ttrain_acc\ttest_acc\tepochs\tseed\tseconds"
    );
    let fields: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!(&fields[..3], ["iris2", "eval", "one-hot"]);
    assert_eq!(&fields[5..7], ["16", "1"]);
    // everything but the wall-clock column repeats exactly
    let stable = |s: &str| s.lines().nth(1).unwrap().rsplit_once('\t').unwrap().0.to_owned();
    assert_eq!(stable(&first), stable(&second));
}

#[test]
fn train_writes_the_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.hex");
    let p = path.to_str().unwrap();
    stdout(&[
        "train",
        "iris2",
        "--epochs",
        "1",
        "--iris-path",
        &iris(),
        "--trajectory",
        p,
    ]);
    let dump = std::fs::read_to_string(&path).unwrap();
    // 80 training records plus the starting point, 16 parameters each
    assert_eq!(dump.lines().count(), 81);
    assert!(dump.lines().all(|l| l.len() == 4));
    assert_eq!(dump.lines().next(), Some("0000"));
}
