//! End-to-end tests against the compiled binary: exact report lines, exit
//! codes, and byte stability of every command.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIVE_CYCLE: &str = "digraph 5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
const COMPLETE_COUNTABLE: &str = "blockgraph\nblock a omega\natom all(a) -> all(a) nodiag\n";
const STAR: &str = "blockgraph\nblock c finite 1\nblock a omega\n\
                    atom all(c) -> all(a)\natom all(a) -> all(c)\n";
const STAIRCASE_4: &str =
    "relation 4 4\n0 0\n0 1\n0 2\n0 3\n1 1\n1 2\n1 3\n2 2\n2 3\n3 3\n";
const FAMILY_WITH_CORE: &str = "universe 4\n0 1 2\n1 2 3\n1 2\n";
const DISJOINT_FAMILY: &str = "universe 3\n0\n1\n";
const TALL_3: &str = "relation 3 1\n0 0\n1 0\n2 0\n";
const WIDE_3: &str = "relation 1 3\n0 0\n0 1\n0 2\n";

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_betagraph"))
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

/// All off-diagonal pairs: the fooling bound is provably below the cover
/// number here, which keeps the bounds-vs-exact paths distinguishable.
fn inequality_relation(n: usize) -> String {
    let mut out = format!("relation {n} {n}\n");
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push_str(&format!("{i} {j}\n"));
            }
        }
    }
    out
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = binary();
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[track_caller]
fn assert_line(out: &Output, line: &str) {
    let text = stdout(out);
    assert!(
        text.lines().any(|l| l == line),
        "missing line {line:?} in output:\n{text}"
    );
}

#[track_caller]
fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_digraph_invariants() {
    let dir = TempDir::new().unwrap();
    let cycle = write(&dir, "cycle.txt", FIVE_CYCLE);
    let out = run(&["analyze", path_str(&cycle)]);
    assert_exit(&out, 0);
    for line in [
        "vertices = 5",
        "edges = 5",
        "loop_free = true",
        "weakly_connected = true",
        "proper = true",
        "gamma_diameter = 4",
        "chromatic = 3",
    ] {
        assert_line(&out, line);
    }
}

#[test]
fn analyze_dispatches_on_the_header() {
    let dir = TempDir::new().unwrap();

    let bg = write(&dir, "bg.txt", STAR);
    let out = run(&["analyze", path_str(&bg)]);
    assert_exit(&out, 0);
    assert_line(&out, "[blockgraph]");
    assert_line(&out, "countable_blocks = 1");

    let rel = write(&dir, "rel.txt", STAIRCASE_4);
    let out = run(&["analyze", path_str(&rel)]);
    assert_exit(&out, 0);
    assert_line(&out, "pairs = 10");
    assert_line(&out, "min_cover_in_grid = 4");

    let fam = write(&dir, "fam.txt", FAMILY_WITH_CORE);
    let out = run(&["analyze", path_str(&fam)]);
    assert_exit(&out, 0);
    assert_line(&out, "[fip]");
    assert_line(&out, "holds = true");
}

#[test]
fn beta_report_flags_the_uncolourable_presentation() {
    let dir = TempDir::new().unwrap();
    let bg = write(&dir, "complete.txt", COMPLETE_COUNTABLE);
    let out = run(&["beta-report", path_str(&bg)]);
    assert_exit(&out, 0);
    for line in [
        "beta_loop = generic a",
        "finitely_colourable = false",
        "e_small = false",
        "strongly_connected = true",
    ] {
        assert_line(&out, line);
    }
}

#[test]
fn beta_report_certifies_the_star() {
    let dir = TempDir::new().unwrap();
    let bg = write(&dir, "star.txt", STAR);
    let out = run(&["beta-report", path_str(&bg)]);
    assert_exit(&out, 0);
    for line in [
        "beta_loop = none",
        "finitely_colourable = true",
        "colours = 2",
        "strongly_connected = true",
    ] {
        assert_line(&out, line);
    }
}

#[test]
fn fip_reports_the_witnesses() {
    let dir = TempDir::new().unwrap();

    let fam = write(&dir, "core.txt", FAMILY_WITH_CORE);
    let out = run(&["fip", path_str(&fam)]);
    assert_exit(&out, 0);
    assert_line(&out, "holds = true");
    assert_line(&out, "intersection = 1,2");
    assert_line(&out, "extends = true");
    assert_line(&out, "principal_at = 1");

    let fam = write(&dir, "disjoint.txt", DISJOINT_FAMILY);
    let out = run(&["fip", path_str(&fam)]);
    assert_exit(&out, 0);
    assert_line(&out, "holds = false");
    assert_line(&out, "refuting_members = 0,1");
    assert_line(&out, "extends = false");
}

#[test]
fn cover_certifies_the_staircase() {
    let dir = TempDir::new().unwrap();
    let rel = write(&dir, "stairs.txt", STAIRCASE_4);
    let out = run(&["cover", path_str(&rel)]);
    assert_exit(&out, 0);
    assert_line(&out, "ambient = 4 x 4");
    assert_line(&out, "sub = self");
    assert_line(&out, "q_pairs = 10");
    assert_line(&out, "min_cover = 4");
    assert_line(&out, "certified = exact");
    let rects = stdout(&out)
        .lines()
        .filter(|l| l.starts_with("rectangle."))
        .count();
    assert_eq!(rects, 4);
}

#[test]
fn cover_accepts_a_separate_subrelation() {
    let dir = TempDir::new().unwrap();
    let ambient = write(&dir, "full.txt", "relation 2 2\n0 0\n0 1\n1 0\n1 1\n");
    let sub = write(&dir, "diag.txt", "relation 2 2\n0 0\n1 1\n");
    let out = run(&["cover", path_str(&ambient), "--sub", path_str(&sub)]);
    assert_exit(&out, 0);
    assert_line(&out, &format!("sub = {}", path_str(&sub)));
    assert_line(&out, "q_pairs = 2");
    // The off-diagonal cells separate the two diagonal points.
    assert_line(&out, "min_cover = 2");
    assert_line(&out, "certified = exact");
}

#[test]
fn greedy_skips_the_solver_and_reports_bounds() {
    let dir = TempDir::new().unwrap();
    let rel = write(&dir, "ne4.txt", &inequality_relation(4));

    let out = run(&["cover", path_str(&rel)]);
    assert_exit(&out, 0);
    assert_line(&out, "min_cover = 4");
    assert_line(&out, "certified = exact");

    let out = run(&["cover", path_str(&rel), "--greedy"]);
    assert_exit(&out, 0);
    assert_line(&out, "min_cover = 2..4");
    assert_line(&out, "certified = bounds");
}

#[test]
fn exact_flag_raises_the_instance_cap() {
    let dir = TempDir::new().unwrap();
    let rel = write(&dir, "ne7.txt", &inequality_relation(7));

    // 49 ambient cells sit above the default exact-solver cap.
    let out = run(&["cover", path_str(&rel)]);
    assert_exit(&out, 0);
    assert_line(&out, "certified = bounds");

    let out = run(&["cover", path_str(&rel), "--exact"]);
    assert_exit(&out, 0);
    assert_line(&out, "min_cover = 5");
    assert_line(&out, "certified = exact");
}

#[test]
fn family_growth_tables() {
    let out = run(&["family", "staircase", "--max-n", "4"]);
    assert_exit(&out, 0);
    for n in 1..=4 {
        assert_line(&out, &format!("size.{n} = {n}"));
    }

    let out = run(&["family", "full", "--max-n", "3"]);
    assert_exit(&out, 0);
    assert_line(&out, "worst.3 = 3 (exhaustive)");
    assert_line(&out, "bound.3 = 3");

    let out = run(&["family", "compose-counterexample", "--max-n", "3"]);
    assert_exit(&out, 0);
    assert_line(&out, "factors.3 = 1");
    assert_line(&out, "composite.3 = 3");

    let out = run(&["family", "zigzag"]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("unknown family"));
}

#[test]
fn compose_relations_multiplies_them() {
    let dir = TempDir::new().unwrap();
    let tall = write(&dir, "tall.txt", TALL_3);
    let wide = write(&dir, "wide.txt", WIDE_3);

    let out = run(&["compose", path_str(&tall), path_str(&wide)]);
    assert_exit(&out, 0);
    assert_eq!(
        stdout(&out),
        "relation 3 3\n0 0\n0 1\n0 2\n1 0\n1 1\n1 2\n2 0\n2 1\n2 2\n"
    );

    let out = run(&["compose", path_str(&wide), path_str(&tall)]);
    assert_exit(&out, 0);
    assert_eq!(stdout(&out), "relation 1 1\n0 0\n");

    let star = write(&dir, "star.txt", STAR);
    let out = run(&["compose", path_str(&tall), path_str(&star)]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("cannot compose"));
}

#[test]
fn compose_blockgraphs_cross_checks() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.txt", STAR);
    let out = run(&["compose", path_str(&star), path_str(&star)]);
    assert_exit(&out, 0);
    assert_line(&out, "atoms = 2");
    assert_line(&out, "truncation_agrees = true");
    assert_line(&out, "type_agrees = true");
    // The squared star keeps each side within itself.
    assert_line(&out, "atom all(c) -> all(c)");
    assert_line(&out, "atom all(a) -> all(a)");
}

#[test]
fn check_theorems_reports_agreement() {
    let out = run(&["check-theorems", "--seed", "7", "--count", "6"]);
    assert_exit(&out, 0);
    assert_line(&out, "seed = 7");
    assert_line(&out, "count = 6");
    assert_line(&out, "[loop-theorem]");
    assert_line(&out, "[finite-extension-identity]");
    assert_line(&out, "verdict = agree");
}

#[test]
fn corrupting_a_suite_flips_the_verdict() {
    let out = run_with_env(
        &["check-theorems", "--seed", "7", "--count", "6"],
        &[("BETAGRAPH_CORRUPT", "loop-theorem")],
    );
    assert_exit(&out, 1);
    assert_line(&out, "verdict = disagree");
    assert!(stdout(&out).contains("negative control"));
}

#[test]
fn unreadable_inputs_exit_two() {
    let dir = TempDir::new().unwrap();

    let out = run(&["analyze", path_str(&dir.path().join("absent.txt"))]);
    assert_exit(&out, 2);
    assert!(stderr(&out).starts_with("error: "));

    let bad = write(&dir, "bad.txt", "digraph 3\n0 9\n");
    let out = run(&["analyze", path_str(&bad)]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("line 2"), "stderr: {}", stderr(&out));

    let weird = write(&dir, "weird.txt", "frobnicate 3\n");
    let out = run(&["analyze", path_str(&weird)]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("unrecognized input header"));
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let bg = write(&dir, "complete.txt", COMPLETE_COUNTABLE);
    let first = run(&["beta-report", path_str(&bg)]);
    let second = run(&["beta-report", path_str(&bg)]);
    assert_eq!(stdout(&first), stdout(&second));

    let first = run(&["check-theorems", "--seed", "3", "--count", "5"]);
    let second = run(&["check-theorems", "--seed", "3", "--count", "5"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn budget_controls_are_accepted() {
    let dir = TempDir::new().unwrap();
    let cycle = write(&dir, "cycle.txt", FIVE_CYCLE);
    let out = run_with_env(
        &["analyze", path_str(&cycle)],
        &[("BETAGRAPH_BUDGET_MS", "10000")],
    );
    assert_exit(&out, 0);
    assert_line(&out, "chromatic = 3");

    let rel = write(&dir, "stairs.txt", STAIRCASE_4);
    let out = run(&["cover", path_str(&rel), "--budget", "10000"]);
    assert_exit(&out, 0);
    assert_line(&out, "min_cover = 4");
}

#[test]
fn closing_the_output_pipe_early_is_not_an_error() {
    use std::io::Read;
    use std::process::Stdio;

    let dir = TempDir::new().unwrap();
    let mut full = String::from("relation 40 40\n");
    for i in 0..40 {
        for j in 0..40 {
            full.push_str(&format!("{i} {j}\n"));
        }
    }
    let rel = write(&dir, "full.txt", &full);

    // Read one line's worth and walk away; the writer must finish quietly.
    let mut child = binary()
        .args(["compose", path_str(&rel), path_str(&rel)])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdout.take().unwrap();
    let mut byte = [0u8; 1];
    pipe.read_exact(&mut byte).unwrap();
    drop(pipe);
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0), "status: {status:?}");
}

#[test]
fn an_unwritable_stdout_is_a_clean_error() {
    use std::process::Stdio;

    let Ok(sink) = std::fs::OpenOptions::new().write(true).open("/dev/full") else {
        return; // no such device on this platform; nothing to test
    };
    let dir = TempDir::new().unwrap();
    let cycle = write(&dir, "cycle.txt", FIVE_CYCLE);
    let out = binary()
        .args(["analyze", path_str(&cycle)])
        .stdout(Stdio::from(sink))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "status: {:?}", out.status);
    assert!(
        stderr(&out).contains("cannot write to stdout"),
        "stderr: {}",
        stderr(&out)
    );
}
