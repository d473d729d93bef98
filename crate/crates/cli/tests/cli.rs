use std::path::Path;
use std::process::{Command, Output};

fn ffdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn distset_of_full_plane_is_whole_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("ffdist-v1\np=3 k=1 d=2 s=2 a=1,1\n");
    for a in 0..3 {
        for b in 0..3 {
            text.push_str(&format!("{a} {b}\n"));
        }
    }
    let x = write(dir.path(), "x.txt", &text);
    let o = ffdist(&["distset", &x]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "size 3\nvalues 0 1 2\n");

    let o = ffdist(&["--format", "json", "distset", &x, &x]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 3);
}

#[test]
fn count_reports_known_chain() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("ffdist-v1\np=3 k=1 d=2 s=2 a=1,1\n");
    for a in 0..3 {
        for b in 0..3 {
            text.push_str(&format!("{a} {b}\n"));
        }
    }
    let x = write(dir.path(), "x.txt", &text);
    for method in ["naive", "fft"] {
        let o = ffdist(&["--format", "json", "count", &x, "--method", method]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["delta"], 3);
        assert_eq!(v["quadruples"], "2673");
        assert_eq!(v["spectrum"][0][1], 9);
        assert_eq!(v["spectrum"][1][1], 36);
    }
}

#[test]
fn extension_field_pair_file() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(
        dir.path(),
        "e.txt",
        "ffdist-v1\np=3 k=2 d=1 s=2 a=1:0\nmodulus=1:0:1\n# two pairs\n0:0 0:0\n1:0 0:1\n",
    );
    let o = ffdist(&["twoparam", &e]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("size "));
    // (0,0) from identical pairs; (1, t^2 = -1 = 2) from the difference
    assert!(out.contains("\n0:0 0:0\n"));
    assert!(out.contains("\n1:0 2:0\n"));
}

#[test]
fn generate_then_certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.txt");
    let p = path.to_str().unwrap();
    let o = ffdist(&[
        "--field", "5", "--seed", "9", "generate", "--size", "400", "--out", p,
    ]);
    assert!(o.status.success());
    let o = ffdist(&["--format", "json", "certify", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["heavy"].as_u64().unwrap() > 0);
    let o = ffdist(&["certify", p, "--exhaustive", "--tau", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# certificate tau=3 mode=exhaustive"));
    let o = ffdist(&["fibers", p, "--tau", "3"]);
    assert!(stdout(&o).starts_with("|E| 400"));
}

#[test]
fn sweep_is_byte_identical_and_seed_sensitive() {
    let args = [
        "--field",
        "5",
        "--seed",
        "3",
        "sweep",
        "--theorem",
        "lemma21",
        "--sizes",
        "6,12",
        "--trials",
        "4",
    ];
    let a = ffdist(&args);
    let b = ffdist(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 9);
    let mut other = args;
    other[3] = "4";
    assert_ne!(ffdist(&other).stdout, a.stdout);

    let plot = ffdist(&[
        "--field",
        "5",
        "--format",
        "plot-data",
        "sweep",
        "--theorem",
        "lemma21",
        "--sizes",
        "3,6,12",
        "--trials",
        "10",
    ]);
    assert_eq!(stdout(&plot).lines().count(), 3);
}

#[test]
fn threshold_values() {
    let o = ffdist(&["threshold", "--theorem", "thm11"]);
    assert_eq!(stdout(&o), "46.765372\n");
    let o = ffdist(&["--field", "3", "threshold", "--theorem", "lemma21"]);
    assert_eq!(stdout(&o), "27.000000\n");
    let o = ffdist(&["threshold", "--theorem", "thm14", "--q", "5"]);
    assert_eq!(stdout(&o), "186.918598\n");
}

#[test]
fn exit_codes() {
    assert_eq!(ffdist(&["--help"]).status.code(), Some(0));
    assert_eq!(ffdist(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        ffdist(&["threshold", "--theorem", "thm99"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ffdist(&["--dim", "3", "threshold", "--theorem", "thm12"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ffdist(&["distset", "/nonexistent/x.txt"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ffdist(&[
            "--field",
            "3",
            "sweep",
            "--theorem",
            "thm11",
            "--sizes",
            "82"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        ffdist(&["--field", "65537", "threshold", "--theorem", "thm11"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.txt",
        "ffdist-v1\np=5 k=1 d=2 s=2 a=1,1\n0 0\n7 1\n",
    );
    let o = ffdist(&["distset", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let good = write(
        dir.path(),
        "x.txt",
        "ffdist-v1\np=5 k=1 d=2 s=2 a=1,1\n0 0\n",
    );
    assert_eq!(
        ffdist(&["--field", "7", "distset", &good]).status.code(),
        Some(1)
    );
    assert_eq!(
        ffdist(&["--field", "5", "distset", &good]).status.code(),
        Some(0)
    );
}
