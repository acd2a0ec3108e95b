//! Acceptance run: one verdict line per criterion, driven through the `toral` binary.
//!
//! Tolerances live in the verification suites and are echoed with every check. A
//! criterion listed in `KNOWN_FAILURES` must fail on exactly the named check; anything
//! else failing, or a known failure starting to pass, fails this target.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

const BIN: &str = env!("CARGO_BIN_EXE_toral");

/// `(criterion, check name)` pairs that fail by analysis, not by defect.
const KNOWN_FAILURES: &[(u32, &str)] = &[(5, "λ_s ≤ |N|")];

const SUITES: [&str; 11] = [
    "rotation",
    "denjoy",
    "blowup",
    "radial",
    "da-bounds",
    "graph-transform",
    "da-pipeline",
    "classifier",
    "example3",
    "example4",
    "determinism",
];

struct Verdict {
    criterion: u32,
    name: String,
    passed: bool,
    failed_checks: Vec<String>,
}

fn verify(criterion: u32, suite: &str) -> Verdict {
    let out = Command::new(BIN).args(["verify", suite, "--stages", "4"]).output().expect("run toral");
    let stdout = String::from_utf8_lossy(&out.stdout);
    for line in stdout.lines().filter(|l| l.starts_with('[')) {
        println!("    {line}");
    }
    if !out.stderr.is_empty() {
        println!("    stderr: {}", String::from_utf8_lossy(&out.stderr).trim());
    }
    let failed_checks = stdout
        .lines()
        .filter_map(|l| l.strip_prefix("[FAIL] "))
        .filter_map(|l| l.split_once(": ").map(|(_, rest)| rest.split(" (measured").next().unwrap_or(rest).to_string()))
        .collect();
    let code = out.status.code();
    let passed = code == Some(0);
    assert!(code == Some(0) || code == Some(1), "verify {suite} exited with {code:?}");
    Verdict { criterion, name: suite.into(), passed, failed_checks }
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).expect("read dir") {
            let p = e.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).expect("prefix").to_path_buf(), std::fs::read(&p).expect("read"));
            }
        }
    }
    out
}

/// Every CLI artifact at default size, produced twice and compared byte for byte.
fn cli_determinism() -> (bool, String) {
    let root = std::env::temp_dir().join(format!("toral-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&root);
    let mut trees = Vec::new();
    let mut stdouts = Vec::new();
    for run in ["a", "b"] {
        let dir = root.join(run);
        let ex = Command::new(BIN).args(["example", "all", "--out"]).arg(&dir).output().expect("run toral");
        assert!(ex.status.success(), "example all failed: {}", String::from_utf8_lossy(&ex.stderr));
        let mut extra = Vec::new();
        for args in [
            vec!["estimate-rho", "--map", "denjoy", "-n", "20000"],
            vec!["wedge-check"],
        ] {
            extra.push(Command::new(BIN).args(&args).output().expect("run toral").stdout);
        }
        let grid = dir.join("type2_with_disks/grids/occupancy_256.pgm");
        for (cmd, file) in [("classify", "classify.csv"), ("render", "render.ppm")] {
            let flag = if cmd == "classify" { "--csv" } else { "--out" };
            let st = Command::new(BIN).arg(cmd).arg(&grid).arg(flag).arg(dir.join(file)).status().expect("run toral");
            assert!(st.success(), "{cmd} failed");
        }
        trees.push(files_under(&dir));
        stdouts.push(extra);
    }
    let differing: Vec<String> = trees[0]
        .iter()
        .filter(|(k, v)| trees[1].get(*k) != Some(*v))
        .map(|(k, _)| k.display().to_string())
        .collect();
    let same_set = trees[0].keys().eq(trees[1].keys());
    let same_stdout = stdouts[0] == stdouts[1];
    let _ = std::fs::remove_dir_all(&root);
    let ok = differing.is_empty() && same_set && same_stdout;
    let msg = format!(
        "{} files across two `example all` runs plus classify/render outputs, {} differing; printed estimates identical: {same_stdout}",
        trees[0].len(),
        differing.len()
    );
    (ok, msg)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut verdicts = Vec::new();
    for (i, suite) in SUITES.iter().enumerate() {
        let criterion = i as u32 + 1;
        println!("criterion {criterion} ({suite})");
        let mut v = verify(criterion, suite);
        if *suite == "determinism" {
            let (ok, msg) = cli_determinism();
            println!("    [{}] criterion 11 determinism: CLI artifacts byte-identical ({msg})", if ok { "PASS" } else { "FAIL" });
            if !ok {
                v.passed = false;
                v.failed_checks.push("CLI artifacts byte-identical".into());
            }
        }
        verdicts.push(v);
    }

    println!();
    let mut unexpected = Vec::new();
    for v in &verdicts {
        let known: Vec<&str> =
            KNOWN_FAILURES.iter().filter(|(c, _)| *c == v.criterion).map(|(_, n)| *n).collect();
        let note = if !known.is_empty() { " (known failure, see the decision ledger)" } else { "" };
        println!("ACCEPTANCE criterion {:>2} {:<16} {}{note}", v.criterion, v.name, if v.passed { "PASS" } else { "FAIL" });
        let mut failing: Vec<&str> = v.failed_checks.iter().map(String::as_str).collect();
        failing.sort();
        let mut expected = known.clone();
        expected.sort();
        if failing != expected {
            unexpected.push(format!("criterion {}: failing {:?}, expected {:?}", v.criterion, failing, expected));
        }
    }
    let passed = verdicts.iter().filter(|v| v.passed).count();
    println!("ACCEPTANCE {passed}/{} criteria pass in {:.1} s", verdicts.len(), start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        println!("ACCEPTANCE outcome matches the recorded analysis");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("ACCEPTANCE unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
