use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cycleforge"));
    c.env_remove("CYCLEFORGE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header line `H n m w` of an edge-list file.
fn header(text: &str) -> (usize, usize, u8) {
    let h = text.lines().find(|l| l.starts_with("H ")).expect("header present");
    let t: Vec<usize> = h[2..].split_whitespace().map(|x| x.parse().unwrap()).collect();
    (t[0], t[1], t[2] as u8)
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines().find_map(|l| l.strip_prefix(&format!("{key}: "))).unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn gen_k4_chain_size() {
    let o = run(&["gen", "--family", "k4-chain", "--M", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(header(&stdout(&o)), (7, 24, 0));
}

#[test]
fn gen_bs_tree_size() {
    let o = run(&["gen", "--family", "bs-tree", "--l", "2"]);
    assert_eq!(code(&o), 0);
    let (n, _, weighted) = header(&stdout(&o));
    assert_eq!(n, (4usize.pow(3) - 1) / 3);
    assert_eq!(weighted, 1);
}

#[test]
fn gen_perm_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        let o = run(&["gen", "--family", "perm", "--n", "50", "--d", "5", "--seed", "7", "--out", s(p)]);
        assert_eq!(code(&o), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.contains("# seed: 7"));
    assert_eq!(header(&text), (50, 250, 0));

    let env = bin()
        .args(["gen", "--family", "perm", "--n", "50", "--d", "5"])
        .env("CYCLEFORGE_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), text);
}

#[test]
fn gen_usage_errors() {
    assert_eq!(code(&run(&["gen", "--family", "k4-chain"])), 2);
    assert_eq!(code(&run(&["gen", "--family", "k4-chain", "--M", "0"])), 2);
    assert_eq!(code(&run(&["gen", "--family", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn decompose_triangle_and_k4() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    let out = dir.path().join("tri.dec");
    let o = run(&["decompose", s(&tri), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,m,delta,Delta,cycles,case1,case2,longest,budget_ok,seconds"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[4], "1");
    assert_eq!(code(&run(&["verify", s(&tri), s(&out)])), 0);

    let k4 = dir.path().join("k4.txt");
    assert_eq!(code(&run(&["gen", "--family", "k-symmetric", "--r", "3", "--out", s(&k4)])), 0);
    for strategy in ["potential", "random", "greedy"] {
        let o = run(&["decompose", s(&k4), "--strategy", strategy, "--seed", "3"]);
        assert_eq!(code(&o), 0);
        let cycles: usize = stdout(&o).lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
        assert!((4..=6).contains(&cycles), "{strategy}: {cycles}");
    }
}

#[test]
fn decompose_exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "path.txt", "0 1\n1 2\n");
    let o = run(&["decompose", s(&path)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not balanced"));
    assert_eq!(code(&run(&["decompose", s(&dir.path().join("missing.txt"))])), 4);
    let junk = write(&dir, "junk.txt", "0 x\n");
    assert_eq!(code(&run(&["decompose", s(&junk)])), 4);
    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    assert_eq!(code(&run(&["decompose", s(&tri), "--xi", "-1"])), 2);
}

#[test]
fn decompose_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    run(&["gen", "--family", "perm", "--n", "40", "--d", "6", "--seed", "1", "--out", s(&g)]);
    let (a, b) = (dir.path().join("a.dec"), dir.path().join("b.dec"));
    for p in [&a, &b] {
        assert_eq!(code(&run(&["decompose", s(&g), "--strategy", "random", "--seed", "9", "--out", s(p)])), 0);
    }
    assert_eq!(fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(code(&run(&["verify", s(&g), s(&a)])), 0);
}

#[test]
fn heavy_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    let o = run(&["heavy", s(&tri)]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "weight").parse::<f64>().unwrap(), 3.0);
}

#[test]
fn heavy_bs_tree_with_oracle() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("bs.txt");
    run(&["gen", "--family", "bs-tree", "--l", "2", "--out", s(&g)]);
    let o = run(&["heavy", s(&g), "--oracle"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let w: f64 = field(&out, "weight").parse().unwrap();
    let bound: f64 = field(&out, "bound").parse().unwrap();
    let best: f64 = field(&out, "oracle").parse().unwrap();
    assert!(w >= bound);
    assert!(w <= best + 1e-12);
    assert!((best - 1.0).abs() < 1e-12);
}

#[test]
fn heavy_backward_path_needs_reweighting() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("bp.txt");
    run(&["gen", "--family", "backward-path", "--n", "8", "--out", s(&g)]);
    assert_eq!(code(&run(&["heavy", s(&g)])), 3);
    let trace = dir.path().join("trace.csv");
    let o = run(&["heavy", s(&g), "--reweight", "inverse-degree", "--trace", s(&trace)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(field(&out, "weight").parse::<f64>().unwrap() >= field(&out, "bound").parse::<f64>().unwrap());
    let t = fs::read_to_string(&trace).unwrap();
    assert!(t.lines().any(|l| l == "t,chosen,rd,rw,A,B"));
}

#[test]
fn heavy_walk_trace() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("k.txt");
    run(&["gen", "--family", "k-symmetric", "--r", "200", "--out", s(&g)]);
    let trace = dir.path().join("trace.csv");
    let o = run(&["heavy", s(&g), "--reweight", "inverse-degree", "--trace", s(&trace)]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "case"), "walk");
    let t = fs::read_to_string(&trace).unwrap();
    let rows: Vec<&str> = t.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,chosen,rd,rw,A,B");
    assert!(rows.len() > 2);
}

#[test]
fn verify_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("k4.txt");
    run(&["gen", "--family", "k-symmetric", "--r", "3", "--out", s(&g)]);
    let dec = dir.path().join("k4.dec");
    assert_eq!(code(&run(&["decompose", s(&g), "--out", s(&dec)])), 0);
    assert_eq!(code(&run(&["verify", s(&g), s(&dec)])), 0);
    let text = fs::read_to_string(&dec).unwrap();

    // drop the last cycle so some arcs are uncovered
    let mut lines: Vec<&str> = text.lines().collect();
    lines.truncate(lines.len() - 2);
    let dropped = write(&dir, "dropped.dec", &(lines.join("\n") + "\n"));
    let o = run(&["verify", s(&g), s(&dropped)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing edge"));

    // a cycle that revisits a vertex
    let tri = write(&dir, "bowtie.txt", "0 1\n1 0\n0 2\n2 0\n");
    let bad = write(&dir, "bowtie.dec", "heavy 1 : 0 1 0 2\n# edges: 0 1 2 3\n");
    let o = run(&["verify", s(&tri), s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("repeated vertex"));
}

#[test]
fn oracle_subcommands() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("k4.txt");
    run(&["gen", "--family", "k-symmetric", "--r", "3", "--out", s(&g)]);
    let o = run(&["oracle", "min-decomp", s(&g)]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "min_cycles"), "4");
    let o = run(&["oracle", "cycles", s(&g)]);
    // 6 digons, 8 triangles, 6 four-cycles
    assert_eq!(field(&stdout(&o), "cycles"), "20");
    let o = run(&["oracle", "heaviest", s(&g)]);
    assert_eq!(field(&stdout(&o), "weight"), "4");

    let big = dir.path().join("big.txt");
    run(&["gen", "--family", "k-symmetric", "--r", "5", "--out", s(&big)]);
    assert_eq!(code(&run(&["oracle", "min-decomp", s(&big)])), 3);
    let acyclic = write(&dir, "path.txt", "0 1\n1 2\n");
    assert_eq!(code(&run(&["oracle", "heaviest", s(&acyclic)])), 3);
}

#[test]
fn mc_tail_runs() {
    let o = run(&["mc-tail", "--lambda", "1", "--c", "2", "--trials", "2000", "--seed", "5", "--process", "adaptive"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("trials,violations,rate,bound,within_slack\n2000,"));
    assert!(out.trim_end().ends_with(",true"));
    assert_eq!(code(&run(&["mc-tail", "--lambda", "1", "--c", "2", "--p", "1.5"])), 2);
}

#[test]
fn manifest_on_stderr() {
    let o = run(&["gen", "--family", "k4-chain", "--M", "1"]);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("# command: gen"));
    assert!(err.contains("# seconds: "));
    assert!(err.lines().any(|l| l.starts_with("# input: ") && l.len() == "# input: ".len() + 16));
}
