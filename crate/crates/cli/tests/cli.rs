use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmcycles"))
        .args(args)
        .env("CMCYCLES_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE: [&str; 7] = ["--curve", "-3440,77658", "--p", "11", "--D", "43", "--json"];

#[test]
fn fields_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["fields"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 9);
    let o = run(dir.path(), &["fields", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
}

#[test]
fn admissible_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["admissible", "--D", "43", "--max-p", "1000"]);
    assert_eq!(stdout(&o).trim(), "11 97 269");
    let o = run(dir.path(), &["admissible", "--D", "7", "--max-p", "1000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| run(d, args).status.code().unwrap();
    assert_eq!(code(&["fields"]), 0);
    // usage errors
    assert_eq!(code(&["fields", "--bogus"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["--precision", "9", "fields"]), 2);
    assert_eq!(code(&["--jobs", "0", "fields"]), 2);
    assert_eq!(
        code(&[
            "check-point",
            "--curve",
            "-3440,77658",
            "--p",
            "11",
            "--D",
            "43",
            "--x",
            "1/0",
            "--y",
            "1"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "check-point",
            "--curve",
            "-3440",
            "--p",
            "11",
            "--D",
            "43",
            "--x",
            "1",
            "--y",
            "1"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "family",
            "--curve",
            "-3440,77658",
            "--p",
            "11",
            "--D",
            "43",
            "--gen",
            "12a/4,1",
            "--b-start",
            "2",
            "--b-step",
            "121",
            "--count",
            "1"
        ]),
        2
    );
    // domain errors
    assert_eq!(code(&["admissible", "--D", "10"]), 1);
    assert_eq!(
        code(&["torsion", "--D", "1", "--p", "7", "--A", "3", "--B", "0"]),
        1
    );
    assert_eq!(
        code(&["torsion", "--D", "1", "--p", "5", "--A", "1", "--B", "0"]),
        1
    );
    assert_eq!(
        code(&[
            "check-point",
            "--curve",
            "-3440,77658",
            "--p",
            "11",
            "--D",
            "43",
            "--x",
            "1",
            "--y",
            "1"
        ]),
        1
    );
    assert_eq!(
        code(&["revalidate", d.join("missing.json").to_str().unwrap()]),
        1
    );
}

#[test]
fn torsion_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "torsion", "--D", "1", "--p", "5", "--A", "3", "--B", "0", "--json",
    ];
    let first = run(dir.path(), &args);
    assert!(first.status.success());
    let entries = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "json")
        })
        .count();
    assert_eq!(entries, 1);
    let second = run(dir.path(), &args);
    let mut fresh_args = args.to_vec();
    fresh_args.push("--no-cache");
    let fresh = run(dir.path(), &fresh_args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);

    let text = stdout(&run(dir.path(), &args[..9]));
    assert!(text.contains("roots mod 25: 16 9"), "{text}");
}

#[test]
fn conjugate_does_not_alias() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "torsion", "--D", "1", "--p", "5", "--A", "3", "--B", "0", "--json",
    ];
    let a = run(dir.path(), &args);
    let mut conj = args.to_vec();
    conj.push("--conjugate");
    let b = run(dir.path(), &conj);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
    let count = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "json")
        })
        .count();
    assert_eq!(count, 2);
}

#[test]
fn example_point_and_family() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["check-point"];
    args.extend(EXAMPLE);
    args.extend(["--x", "129/4", "--y", "129/8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(dir.path(), &args))).unwrap();
    assert_eq!(v["nontrivial"], true);

    let mut args = vec!["family"];
    args.extend(EXAMPLE);
    args.extend([
        "--gen",
        "129/4,129/8",
        "--b-start",
        "2",
        "--b-step",
        "121",
        "--count",
        "10",
    ]);
    let o_scan = run(dir.path(), &args);
    assert!(o_scan.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o_scan)).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 10);

    // every emitted certificate revalidates through the CLI
    for (i, c) in certs.iter().enumerate() {
        let path = dir.path().join(format!("cert{i}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(c).unwrap()).unwrap();
        let o = run(dir.path(), &["revalidate", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    // and so does the whole scan output
    let path = dir.path().join("scan.json");
    std::fs::write(&path, stdout(&o_scan)).unwrap();
    let o = run(dir.path(), &["revalidate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("ok: ")).count(),
        10
    );
}

#[test]
fn density_and_split() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "density", "--curve", "3,0", "--p", "5", "--D", "1", "--json",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["density"], "4/5");
    let o = run(
        dir.path(),
        &[
            "split-test",
            "--curve",
            "3,0",
            "--p",
            "5",
            "--D",
            "1",
            "--b",
            "50",
        ],
    );
    assert!(stdout(&o).contains("splits: true"));
}
