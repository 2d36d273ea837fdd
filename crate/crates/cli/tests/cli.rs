use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plusform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plusform")).args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn build(out: &Path, weight: &str, bound: &str) -> Output {
    plusform(&["build", "--weight", weight, "--bound", bound, "--lift-depth", "60", "--out", out.to_str().unwrap()])
}

#[test]
fn rejected_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for w in ["15", "14", "11", "63"] {
        let o = plusform(&["build", "--weight", w, "--out", out]);
        assert_eq!(code(&o), 2, "{w}: {}", text(&o));
    }
    assert_eq!(code(&plusform(&["build", "--weight", "13", "--bound", "99", "--out", out])), 2);
    assert_eq!(code(&plusform(&["build", "--out", out])), 2);
    let o = plusform(&["analyze", "--widths", "0.001,-1", dir.path().join("x.txt").to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    let o = plusform(&["analyze", "--models", "Gumbel", "x.txt"]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    let o = plusform(&["analyze", "--out", out, dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", text(&o));
}

#[test]
fn empty_directory_has_nothing_to_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = plusform(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(text(&o).contains("nothing to report"));
}

#[test]
fn build_writes_one_file_per_eigenform() {
    let dir = tempfile::tempdir().unwrap();
    let o = build(dir.path(), "25", "10000");
    assert_eq!(code(&o), 0, "{}", text(&o));
    let coeffs = dir.path().join("coefficients");
    let mut names: Vec<String> = fs::read_dir(&coeffs).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["25_2-1.txt", "25_2-2.txt"]);
    let first = fs::read_to_string(coeffs.join("25_2-1.txt")).unwrap();
    assert!(first.starts_with("# label=25/2(1)\n# two_k=25\n# ell=12\n# bound=10000\n"));
    let report = fs::read_to_string(dir.path().join("build/25_2.toml")).unwrap();
    assert!(report.contains("dimension = 2"));
    assert_eq!(report.matches("passed = true").count(), 6);
    assert!(!report.contains("passed = false"));
}

#[test]
fn build_analyze_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let o = build(&run, "13", "10000");
    assert_eq!(code(&o), 0, "{}", text(&o));
    let report = fs::read_to_string(run.join("build/13_2.toml")).unwrap();
    assert!(report.contains("charpoly = \"x - 252\""), "{report}");
    assert!(report.contains("3 = \"252\"") && report.contains("5 = \"4830\""), "{report}");

    let file = run.join("coefficients/13_2-1.txt");
    let analyze = |out: &Path, f: &Path| {
        plusform(&[
            "analyze",
            "--widths",
            "0.05,0.1",
            "--models",
            "GGG,GG,Laplace",
            "--subsets",
            "3",
            "--prime-only",
            "--out",
            out.to_str().unwrap(),
            f.to_str().unwrap(),
        ])
    };
    let o = analyze(&run, &file);
    assert!(matches!(code(&o), 0 | 4), "{}", text(&o));
    let a = fs::read_to_string(run.join("analysis/13_2-1/analysis.toml")).unwrap();
    assert_eq!(a.matches("model = \"GG\"").count(), 2 + 3 + 2);
    assert!(run.join("analysis/13_2-1/hist-0.05.txt").is_file());
    assert!(run.join("analysis/13_2-1/rms.txt").is_file());

    // the same file analysed from elsewhere gives the same bytes
    let copy_dir = dir.path().join("elsewhere");
    fs::create_dir_all(&copy_dir).unwrap();
    let copy = copy_dir.join("13_2-1.txt");
    fs::copy(&file, &copy).unwrap();
    let other = dir.path().join("other");
    analyze(&other, &copy);
    let b = fs::read_to_string(other.join("analysis/13_2-1/analysis.toml")).unwrap();
    assert_eq!(a, b);

    let o = plusform(&["report", run.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = fs::read_to_string(run.join("report.txt")).unwrap();
    assert_eq!(r.matches("\n## Builds").count(), 1);
    assert!(r.contains("13/2(1)"));
    assert!(r.contains("## Consecutive subsets") && r.contains("## Squarefree against prime indices"));
    assert!(run.join("plots/13_2-1-0.05.gp").is_file());

    fs::remove_file(run.join("analysis/13_2-1/hist-0.1.txt")).unwrap();
    let o = plusform(&["report", run.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("analysis/13_2-1/hist-0.1.txt"), "{}", text(&o));
}

#[test]
fn builds_are_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = plusform(&[
            "build", "--weight", "25", "--bound", "3000", "--lift-depth", "30", "--threads", threads, "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", text(&o));
        files.push((
            fs::read(out.join("coefficients/25_2-2.txt")).unwrap(),
            fs::read(out.join("build/25_2.toml")).unwrap(),
        ));
    }
    assert_eq!(files[0], files[1]);
}
