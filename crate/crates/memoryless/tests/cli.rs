//! End-to-end runs of the command-line interface against temp files.

use memoryless::cli::run_with_output;
use memoryless::files;
use memoryless::synth::VarMap;
use memoryless::{Context, Transformation};
use std::path::Path;

fn run(args: &[&str]) -> (i32, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let code = run_with_output(&args, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn swap_table() -> Transformation {
    let ctx = Context::new(2, 2).unwrap();
    Transformation::from_image(ctx, vec![0, 2, 1, 3]).unwrap()
}

#[test]
fn synth_swap_reports_the_tight_bound() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "swap.fn", &files::write_function(&swap_table()));
    let out_path = dir.path().join("swap.prog");
    let (code, report) = run(&["synth", &table, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("method: perm"), "{report}");
    assert!(report.contains("length: 3"), "{report}");
    assert!(report.contains("bound: 2n-1 = 3"), "{report}");
    assert!(report.contains("verified: exhaustive over 4 states"), "{report}");
    let program = files::parse_program(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert!(program.computes(&swap_table()));
}

#[test]
fn synth_shuffles_from_cycle_notation() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("shuffle.prog");
    let (code, report) = run(&[
        "synth", "(1 2)(3 4)", "--n", "4", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("method: varmap"), "{report}");
    assert!(report.contains("length: 6"), "{report}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 7); // header + 6 steps

    // the one-cell variant drops to five steps
    let (code, report) = run(&[
        "synth", "(1 2)(3 4)", "--n", "4", "--method", "memory",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("length: 5"), "{report}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("q=2 n=4 m=1\n"), "{text}");
}

#[test]
fn synth_accepts_image_lists() {
    let (code, report) = run(&["synth", "2 1 4 3"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("length: 6"), "{report}");
}

#[test]
fn synth_memory_budget() {
    // a cell budget picks the memory method and is enforced
    let (code, report) = run(&["synth", "2 1 4 3", "--memory", "1"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("length: 5"), "{report}");
    let (code, report) = run(&["synth", "2 1 4 3", "--memory", "0"]);
    assert_eq!(code, 2, "{report}");
    assert!(report.contains("budget"), "{report}");
}

#[test]
fn verify_the_rotation_program() {
    // rotate three ternary registers: y1 <- y1+y2+y3 then peel downwards
    let dir = tempfile::tempdir().unwrap();
    let prog = write(
        dir.path(),
        "rot.prog",
        "q=3 n=3 m=0\nlin 1: 1 1 1\nlin 3: 1 2 2\nlin 2: 1 2 2\nlin 1: 1 2 2\n",
    );
    let shuffle = VarMap::from_images_one_based(&[2, 3, 1]).unwrap();
    let table = write(
        dir.path(),
        "rot.fn",
        &files::write_function(&shuffle.transformation(3).unwrap()),
    );
    let (code, report) = run(&["verify", &prog, &table]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("verified"), "{report}");
}

#[test]
fn verify_the_seven_move_shuffle() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(
        dir.path(),
        "moves.prog",
        "q=2 n=6 m=0\nmov 6 1\nmov 1 2\nmov 2 6\nmov 6 3\nmov 3 4\nmov 4 6\nmov 6 5\n",
    );
    let shuffle = VarMap::from_images_one_based(&[2, 1, 4, 3, 5, 5]).unwrap();
    let table = write(
        dir.path(),
        "moves.fn",
        &files::write_function(&shuffle.transformation(2).unwrap()),
    );
    let (code, report) = run(&["verify", &prog, &table]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("7 steps"), "{report}");
}

#[test]
fn verify_rejects_a_truncated_swap() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(dir.path(), "cut.prog", "q=2 n=2 m=0\nlin 1: 1 1\nlin 2: 1 1\n");
    let table = write(dir.path(), "swap.fn", &files::write_function(&swap_table()));
    let (code, report) = run(&["verify", &prog, &table]);
    assert_eq!(code, 1, "{report}");
    assert!(report.contains("counterexamples"), "{report}");
}

#[test]
fn complexity_of_the_swap() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "swap.fn", &files::write_function(&swap_table()));
    let (code, report) = run(&["complexity", &table]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("L = 3"), "{report}");
    assert!(report.contains("certificate"), "{report}");
}

#[test]
fn census_and_count() {
    let (code, report) = run(&["census", "--q", "2", "--n", "2"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("256 elements, max L = 3"), "{report}");

    let (code, report) = run(&["census", "--q", "2", "--n", "2", "--perm", "--format", "csv"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.starts_with("L,count\n0,1\n"), "{report}");

    let (code, report) = run(&["census", "--q", "2", "--n", "2", "--linear"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("diameter 3"), "{report}");

    let (code, report) = run(&["count", "--q", "2", "--n", "2", "--perm"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("= 7"), "{report}");

    let (code, report) = run(&["count", "--q", "2", "--n", "2"]);
    assert!(report.contains("= 31"), "{report}");
    assert_eq!(code, 0);
}

#[test]
fn infeasible_census_is_refused() {
    let (code, report) = run(&["census", "--q", "3", "--n", "3", "--perm"]);
    assert_eq!(code, 3, "{report}");
    assert!(report.contains("error"), "{report}");
}

#[test]
fn blackbox_refuses_real_permutations() {
    let (code, report) = run(&["synth", "(1 2)(3 4)", "--n", "4", "--method", "blackbox"]);
    assert_eq!(code, 2, "{report}");
    assert!(report.contains("black-box"), "{report}");
}

#[test]
fn linear_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "swap.mat", "q=2 n=2\n0 1\n1 0\n");
    let (code, report) = run(&["linear", &matrix]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("length: 3"), "{report}");
    assert!(report.contains("bound: 2n-1 = 3"), "{report}");

    let (code, report) = run(&["linear", &matrix, "--memory"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("memory: 1"), "{report}");

    // singular input is unsupported
    let singular = write(dir.path(), "sing.mat", "q=2 n=2\n1 1\n1 1\n");
    let (code, report) = run(&["linear", &singular]);
    assert_eq!(code, 2, "{report}");
    assert!(report.contains("singular"), "{report}");
}

#[test]
fn binary_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = Context::new(2, 3).unwrap();
    let toffoli = Transformation::from_fn(ctx, |s| {
        let (a, b, t) = (s & 1, s >> 1 & 1, s >> 2 & 1);
        (a ^ (b & t)) | (b << 1) | (t << 2)
    });
    let table = write(dir.path(), "toffoli.fn", &files::write_function(&toffoli));
    let out_path = dir.path().join("toffoli.prog");
    let (code, report) = run(&["binary", &table, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("memory: 1"), "{report}");
    let program = files::parse_program(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert!(program.steps().iter().all(memoryless::synth::is_binary));
    assert!(program.computes(&toffoli));
}

#[test]
fn synth_auto_picks_the_matrix_route() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "m.mat", "q=3 n=2\n1 1\n1 2\n");
    let (code, report) = run(&["synth", &matrix]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("method: linear"), "{report}");
}

#[test]
fn usage_and_unknown_commands() {
    let (code, report) = run(&["help"]);
    assert_eq!(code, 0);
    assert!(report.contains("usage"));
    let (code, _) = run(&[]);
    assert_eq!(code, 2);
    let (code, report) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(report.contains("unknown command"));
}
