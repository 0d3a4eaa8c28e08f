use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quicklex::plant_epistasis;
use tempfile::TempDir;

const EXAMPLE_D: &str = "1,1,1,2,1\n1,1,1,2,0\n0,0,0,3,0\n1,1,1,2,0\n1,0,1,1,1\n\
                         1,1,1,1,1\n1,1,1,3,0\n1,1,0,2,1\n1,0,1,1,0\n1,1,1,1,1\n";

fn quicklex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quicklex"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn planted(dir: &TempDir) -> PathBuf {
    let d = plant_epistasis(200, 50, (3, 17), 0.05, 17).unwrap();
    let mut body = String::new();
    for r in 0..d.rows() {
        let row: Vec<&str> = (0..d.cols()).map(|c| d.decode(r, c)).collect();
        body.push_str(&row.join(","));
        body.push('\n');
    }
    write(dir, "planted.csv", &body)
}

#[test]
fn sort_emits_ranks_counts_and_order() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", EXAMPLE_D);
    assert_eq!(
        stdout(&quicklex(&["sort", s(&d), "--cols", "0,3,4"])),
        "4 3 0 3 2 2 5 4 1 2\n"
    );
    assert_eq!(
        stdout(&quicklex(&["sort", s(&d), "--cols", "0,3,4", "--emit", "counts"])),
        "1 1 3 2 2 1\n"
    );
    assert_eq!(
        stdout(&quicklex(&["sort", s(&d), "--cols", "0,3,4", "--emit", "order"])),
        "0\t2\n1\t8\n2\t4,5,9\n3\t1,3\n4\t0,7\n5\t6\n"
    );
}

#[test]
fn sort_reads_tsv_with_header() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "e.tsv", "a\tb\tc\n0\t1\t0\n1\t1\t0\n1\t0\t0\n0\t1\t1\n0\t0\t1\n");
    let out = quicklex(&["sort", s(&d), "--format", "tsv", "--header", "--cols", "2,1"]);
    assert_eq!(stdout(&out), "1 1 0 3 2\n");
}

#[test]
fn sort_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", EXAMPLE_D);
    assert_eq!(quicklex(&["sort", s(&d), "--cols", "0,5"]).status.code(), Some(2));
    assert_eq!(quicklex(&["sort", s(&d), "--cols", "x"]).status.code(), Some(2));
    assert_eq!(quicklex(&["sort", s(&d)]).status.code(), Some(2));

    let ragged = write(&dir, "ragged.csv", "1,2\n3\n");
    let out = quicklex(&["sort", s(&ragged), "--cols", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let missing = dir.path().join("missing.csv");
    assert_eq!(quicklex(&["sort", s(&missing), "--cols", "0"]).status.code(), Some(1));
}

#[test]
fn enumerate_counts_nodes() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.csv", "0,1,0\n1,1,0\n1,0,0\n0,1,1\n0,0,1\n");
    let count = |mode: &str| {
        stdout(&quicklex(&[
            "enumerate",
            s(&e),
            "--mode",
            mode,
            "--max-card",
            "3",
            "--emit",
            "count-only",
        ]))
    };
    assert_eq!(count("subsets"), "7\n");
    assert_eq!(count("sequences"), "15\n");
    assert_eq!(
        quicklex(&["enumerate", s(&e), "--max-card", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        quicklex(&["enumerate", s(&e), "--max-card", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn enumerate_streams_records() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.csv", "0,1,0\n1,1,0\n1,0,0\n0,1,1\n0,0,1\n");
    let ranks = stdout(&quicklex(&["enumerate", s(&e), "--max-card", "2"]));
    let lines: Vec<&str> = ranks.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "0\t0 1 1 0 0");
    assert!(lines.contains(&"1,2\t2 2 0 3 1"));

    let counts = stdout(&quicklex(&["enumerate", s(&e), "--max-card", "2", "--emit", "counts"]));
    assert!(counts.lines().any(|l| l == "1,2\t1 1 2 1"));
    let seqs = stdout(&quicklex(&[
        "enumerate",
        s(&e),
        "--mode",
        "sequences",
        "--max-card",
        "2",
    ]));
    assert!(seqs.lines().any(|l| l == "2,1\t1 1 0 3 2"));
}

#[test]
fn epistasis_finds_planted_pair() {
    let dir = TempDir::new().unwrap();
    let p = planted(&dir);
    let out = stdout(&quicklex(&[
        "epistasis",
        s(&p),
        "--pheno-col",
        "50",
        "--k",
        "2",
        "--ess",
        "1.0",
        "--top",
        "1",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "rank\tcolumns\tlog_score");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!(&fields[..2], &["1", "3,17"]);
    let pair: f64 = fields[2].parse().unwrap();

    let singles = stdout(&quicklex(&[
        "epistasis",
        s(&p),
        "--pheno-col",
        "50",
        "--k",
        "1",
        "--top",
        "50",
    ]));
    for l in singles.lines().skip(1) {
        let f: Vec<&str> = l.split('\t').collect();
        if f[1] == "3" || f[1] == "17" {
            assert!(f[2].parse::<f64>().unwrap() < pair);
        }
    }
}

#[test]
fn epistasis_rejects_bad_arguments() {
    let dir = TempDir::new().unwrap();
    let p = planted(&dir);
    for ess in ["0", "-1"] {
        let out = quicklex(&["epistasis", s(&p), "--pheno-col", "50", "--ess", ess]);
        assert_eq!(out.status.code(), Some(2));
    }
    assert_eq!(
        quicklex(&["epistasis", s(&p), "--pheno-col", "51"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("bench.csv");
    let run = || {
        let out = quicklex(&[
            "bench",
            "--synthetic",
            "2000,4,3,42",
            "--max-card",
            "4",
            "--fractions",
            "0.5..1.0",
            "--reps",
            "1",
            "--out",
            s(&out_path),
        ]);
        assert!(out.status.success());
        fs::read_to_string(&out_path).unwrap()
    };
    let first = run();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "fraction,m,n,k,nodes,qls_seconds,sls_seconds,ratio");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.5,1000,4,4,15,"));
    assert!(lines[2].starts_with("1,2000,4,4,15,"));
    let second = run();
    let head = |t: &str| {
        t.lines()
            .map(|l| l.split(',').take(5).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
    };
    assert_eq!(head(&first), head(&second));
}

#[test]
fn bench_reads_files_and_rejects_bad_fractions() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.csv", EXAMPLE_D);
    let out = stdout(&quicklex(&[
        "bench",
        s(&d),
        "--max-card",
        "2",
        "--fractions",
        "1",
        "--reps",
        "1",
    ]));
    assert!(out.lines().nth(1).unwrap().starts_with("1,10,5,2,15,"));
    let bad = quicklex(&[
        "bench",
        "--synthetic",
        "100,3,2,1",
        "--max-card",
        "2",
        "--fractions",
        "1.5",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let neither = quicklex(&["bench", "--max-card", "2"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn adtree_bounds() {
    assert_eq!(
        stdout(&quicklex(&["adtree-bound", "--rows", "8", "--cols", "4"])),
        "time_bound=40 space_bound=15\n"
    );
    assert_eq!(
        stdout(&quicklex(&["adtree-bound", "--rows", "1", "--cols", "9"])),
        "time_bound=1 space_bound=1\n"
    );
    let big = stdout(&quicklex(&["adtree-bound", "--rows", "1000", "--cols", "50000"]));
    let space: f64 = big.trim().split("space_bound=").nth(1).unwrap().parse().unwrap();
    assert!(big.contains('e') && space > 1e30);
    assert_eq!(
        quicklex(&["adtree-bound", "--rows", "0", "--cols", "3"]).status.code(),
        Some(2)
    );
}
