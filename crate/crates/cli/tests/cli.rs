use std::path::PathBuf;
use std::process::{Command, Output};

fn ehs(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ehs"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("EHS_THREADS", t),
        None => cmd.env_remove("EHS_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{name}-{}.json", std::process::id()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_shows_the_whole_catalog() {
    let out = ehs(&["list"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = text.lines().filter(|l| l.starts_with("  ")).count();
    assert_eq!(rows, 16 + 6 + 6);
    for name in ["dr-quartic", "quartic-r1", "bcr-geom", "dr-cubic-pair"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn verify_passes_on_the_quartic_example() {
    let args = ["verify", "--identity", "dr-quartic", "--r", "2", "--n", "1,1", "--trials", "10", "--tol", "1e-8", "--seed", "42"];
    let out = ehs(&args, None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("10 pass, 0 fail"));
}

#[test]
fn failures_exit_with_one() {
    let out = ehs(&["verify", "--identity", "dr-quartic", "--r", "1", "--n", "2", "--trials", "3", "--tol", "1e-17"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 8] = [
        &["verify", "--identity", "no-such-identity", "--r", "1", "--n", "1"],
        &["verify", "--identity", "dr-quartic", "--r", "2", "--n", "1"],
        &["verify", "--identity", "dr-quartic", "--r", "1"],
        &["verify", "--identity", "dr-quartic", "--r", "1", "--n", "1", "--p-max", "1.5"],
        &["verify", "--identity", "dr-cubic-simplex-a", "--r", "1", "--n", "1"],
        &["invert", "--kind", "tri", "--r", "1", "--n", "1"],
        &["invert", "--kind", "ar", "--r", "1", "--n", "1", "--l", "2"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = ehs(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = ehs(&["verify", "--identity", "dr-quartic", "--r", "1", "--n", "1"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invert_checks_every_column_by_default() {
    let path = scratch("invert");
    let p = path.to_str().unwrap();
    let out = ehs(&["invert", "--kind", "ar-geom-neg", "--m", "2", "--r", "2", "--n", "1,2", "--trials", "4", "--seed", "5", "--json", p], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"link_error\""));
    assert!(text.contains("\"target\": \"ar-geom-neg:m=2\""));
    std::fs::remove_file(path).ok();
}

#[test]
fn reports_are_byte_identical_at_one_thread() {
    let args = |p: &str| {
        ["verify", "--identity", "ar-quadratic-ii", "--r", "2", "--n", "2,1", "--trials", "6", "--seed", "17", "--json", p]
            .map(String::from)
    };
    let run = |name: &str, threads: &str| {
        let path = scratch(name);
        let a = args(path.to_str().unwrap());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let out = ehs(&a, Some(threads));
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(path).ok();
        // The command echo names the output path; drop it before comparing.
        text.lines().filter(|l| !l.contains(".json\"")).collect::<Vec<_>>().join("\n")
    };
    let first = run("det-a", "1");
    assert_eq!(first, run("det-b", "1"));
    assert_eq!(first, run("det-c", "3"));
}

#[test]
fn quick_selftest_reports_are_reproducible() {
    let run = |name: &str| {
        let path = scratch(name);
        let out = ehs(&["selftest", "--quick", "--seed", "3", "--json", path.to_str().unwrap()], Some("1"));
        let text = std::fs::read(&path).unwrap();
        std::fs::remove_file(path).ok();
        (out, text)
    };
    let (a, ja) = run("self-a");
    let (b, jb) = run("self-b");
    assert_eq!(ja, jb);
    assert_eq!(a.stdout, b.stdout);
    assert!(matches!(a.status.code(), Some(0 | 1)));
    let lines: Vec<_> = stdout(&a).lines().filter(|l| l.starts_with("criterion ")).map(String::from).collect();
    assert_eq!(lines.len(), 9);
}
