use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const NATURAL: &str = ">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcjindel")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

#[test]
fn census_rows() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let o = run(&["census", s(&f)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "1  1  3  -2"));
    assert!(out.lines().any(|l| l == "5  2  0  2"));
    assert_eq!(field(&out, "n_star"), "5");

    let tsv = stdout(&run(&["census", "--tsv", s(&f)]));
    assert_eq!(tsv.lines().next(), Some("family\tocc_a\tocc_b\tdelta"));
    assert!(tsv.lines().any(|l| l == "#n_star\t5"));
}

#[test]
fn oracle_distance_of_the_natural_pair() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let o = run(&["dist", "--mode", "oracle", s(&f)]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "distance"), "6");
    assert_eq!(field(&stdout(&run(&["dist", s(&f)])), "distance"), "6");
}

#[test]
fn identical_genomes_are_at_distance_zero() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", ">A\n1 2 3 |\n4 5 )\n>B\n4 5 )\n1 2 3 |\n");
    let out = stdout(&run(&["dist", s(&f)]));
    assert_eq!(field(&out, "mode"), "formula");
    assert_eq!(field(&out, "distance"), "0");
}

fn ilp_round_trip(text: &str) -> Output {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", text);
    let lp = dir.path().join("m.lp");
    let sol = dir.path().join("s.txt");
    assert!(run(&["ilp", s(&f), "--out", s(&lp)]).status.success());
    let model = fs::read_to_string(&lp).unwrap();
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.lp.meta.json")).unwrap()).unwrap();
    assert!(model.starts_with(&format!("\\ fingerprint: {}", meta["fingerprint"].as_str().unwrap())));
    assert!(run(&["dist", "--mode", "ilp", "--write-sol", s(&sol), s(&f)]).status.success());
    run(&["solve-file", s(&f), "--sol", s(&sol), "--model", s(&lp)])
}

#[test]
fn solve_file_on_the_identity() {
    let o = ilp_round_trip(">A\n1 2 3 |\n>B\n1 2 3 |\n");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "distance"), "0");
}

#[test]
fn solve_file_on_disjoint_singletons() {
    let o = ilp_round_trip(">A\n1 |\n>B\n2 |\n");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "distance"), "2");
}

#[test]
fn solve_file_rejects_an_empty_assignment() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let sol = file(&dir, "s.txt", "# nothing chosen\n");
    let o = run(&["solve-file", s(&f), "--sol", s(&sol)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn optimal_assignment_of_the_natural_pair() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let sol = dir.path().join("s.txt");
    let lp = dir.path().join("m.lp");
    let o = run(&["dist", "--mode", "ilp", "--write-sol", s(&sol), s(&f)]);
    assert_eq!(field(&stdout(&o), "distance"), "6");
    assert!(run(&["ilp", s(&f), "--out", s(&lp)]).status.success());
    let o = run(&["solve-file", s(&f), "--sol", s(&sol), "--model", s(&lp)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "distance"), "6");
}

#[test]
fn fingerprint_mismatch_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let other = file(&dir, "h.txt", ">A\n1 2 |\n>B\n2 1 |\n");
    let lp = dir.path().join("m.lp");
    let sol = dir.path().join("s.txt");
    assert!(run(&["ilp", s(&other), "--out", s(&lp)]).status.success());
    run(&["dist", "--mode", "ilp", "--write-sol", s(&sol), s(&f)]);
    let o = run(&["solve-file", s(&f), "--sol", s(&sol), "--model", s(&lp)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fingerprint"));
}

#[test]
fn matrix_of_identical_genomes() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", ">x\n1 2 3 |\n>y\n1 2 3 |\n");
    let o = run(&["matrix", s(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\nx         \ny          0\n");
}

#[test]
fn matrix_matches_pairwise_distances() {
    let dir = TempDir::new().unwrap();
    let genomes = [("p", "1 2 3 4 |"), ("q", "1 -3 -2 4 |"), ("r", "4 1 2 3 )")];
    let text: String = genomes.iter().map(|(n, c)| format!(">{n}\n{c}\n")).collect();
    let f = file(&dir, "all.txt", &text);
    let o = run(&["matrix", "--jobs", "3", s(&f)]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().skip(1).collect()).collect();
    for i in 1..genomes.len() {
        for j in 0..i {
            let pair = file(
                &dir,
                "pair.txt",
                &format!(">{}\n{}\n>{}\n{}\n", genomes[i].0, genomes[i].1, genomes[j].0, genomes[j].1),
            );
            let back = file(
                &dir,
                "back.txt",
                &format!(">{}\n{}\n>{}\n{}\n", genomes[j].0, genomes[j].1, genomes[i].0, genomes[i].1),
            );
            let d = field(&stdout(&run(&["dist", s(&pair)])), "distance");
            assert_eq!(d, field(&stdout(&run(&["dist", s(&back)])), "distance"));
            assert_eq!(rows[i][j], d);
        }
    }
}

#[test]
fn matrix_needs_two_genomes() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", ">x\n1 2 3 |\n");
    assert_eq!(run(&["matrix", s(&f)]).status.code(), Some(2));
}

#[test]
fn matrix_reports_failed_cells() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    let o = run(&["matrix", "--mode", "oracle", "--budget", "1", s(&f)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("NA"));
}

#[test]
fn budget_exceeded_exit_code() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", NATURAL);
    assert_eq!(run(&["dist", "--mode", "oracle", "--budget", "1", s(&f)]).status.code(), Some(3));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "g.txt", ">A\n1 2\n>B\n1 2 |\n");
    assert_eq!(run(&["census", s(&f)]).status.code(), Some(2));
}

#[test]
fn simulation_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let out = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        let log = dir.path().join(format!("{name}.log"));
        let args = ["sim", "--root-length", "200", "--dcj", "10", "--seed", seed, "--out", s(&p), "--log", s(&log)];
        assert!(run(&args).status.success());
        (fs::read_to_string(&p).unwrap(), fs::read_to_string(&log).unwrap())
    };
    let first = out("a.txt", "5");
    assert_eq!(first, out("b.txt", "5"));
    assert_ne!(first, out("c.txt", "6"));
    assert!(first.0.starts_with("# seed: 5\n"));
    assert!(first.1.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn simulation_without_events_keeps_the_root() {
    let o = run(&["sim", "--root-length", "12", "--dcj", "0", "--rates", "0", "--chromosomes", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, [">A", "1 2 3 4 5 6 |", "7 8 9 10 11 12 |", ">B", "1 2 3 4 5 6 |", "7 8 9 10 11 12 |"]);
}
