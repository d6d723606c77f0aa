use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const NUMERIC: &str = "S1: (1)(2)(1 2)(3)(1 3)(4 5)(6)\n\
                      S2: (3 4)(3)(2 3)(1 4)\n\
                      S3: (4 5)(2)(2 3 4)(3)(1)\n\
                      S4: (4)(5)(1 6)(3)(2)(7)(1)\n";

fn seqmine(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqmine"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fraction_above_one_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("numeric.seq"), NUMERIC).unwrap();
    let o = seqmine(
        dir.path(),
        &["mine", "--input", "numeric.seq", "--min-support", "1.5"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("min-support fraction must be in (0,1]"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn both_miners_write_identical_pattern_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("numeric.seq"), NUMERIC).unwrap();
    for miner in ["prefixspan", "spam"] {
        let o = seqmine(
            dir.path(),
            &[
                "mine",
                "--input",
                "numeric.seq",
                "--min-support",
                "2",
                "--miner",
                miner,
                "--out",
                miner,
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(String::from_utf8_lossy(&o.stdout).contains("patterns from 4 sequences"));
    }
    let a = fs::read(dir.path().join("prefixspan/patterns.csv")).unwrap();
    let b = fs::read(dir.path().join("spam/patterns.csv")).unwrap();
    assert!(a.starts_with(b"pattern,support_count,relative_support\n"));
    assert_eq!(a, b);
}

#[test]
fn support_sort_is_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("numeric.seq"), NUMERIC).unwrap();
    let args = [
        "mine",
        "--input",
        "numeric.seq",
        "--min-support",
        "1",
        "--max-length",
        "3",
        "--sort",
        "support",
        "--report-length",
        "any",
    ];
    let o = seqmine(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let supports: Vec<f64> = report
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(supports.len() > 10);
    assert!(supports.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn generate_is_deterministic_and_mines_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = seqmine(
            dir.path(),
            &["generate", "--users", "10", "--seed", "1", "--out", name],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert!(
        a.starts_with(b"checkin_id,user_id,timestamp,lat,lon,category,subcategory,gender,origin\n")
    );

    let o = seqmine(
        dir.path(),
        &[
            "mine",
            "--input",
            "a.csv",
            "--min-support",
            "2",
            "--report-length",
            "2",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(report.starts_with("activity_sequence,frequency,support,confidence\n"));
    assert!(!report.to_lowercase().contains("airport"));
}

#[test]
fn inverted_checkin_range_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqmine(
        dir.path(),
        &["generate", "--checkins-min", "10", "--checkins-max", "8"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--checkins-min"));
}

#[test]
fn bms_shape_has_expected_mean() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqmine(
        dir.path(),
        &[
            "generate", "--shape", "bms", "--seed", "7", "--out", "bms.spmf",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("bms.spmf")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let elements: usize = lines
        .iter()
        .map(|l| l.split_whitespace().filter(|t| *t == "-1").count())
        .sum();
    let mean = elements as f64 / lines.len() as f64;
    assert!((28_500..=31_500).contains(&lines.len()));
    assert!((2.185..=2.415).contains(&mean), "{mean}");
}

#[test]
fn bench_writes_six_rows_with_matching_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqmine(
        dir.path(),
        &[
            "bench",
            "--sequences",
            "2000",
            "--repeats",
            "3",
            "--supports",
            "0.01,0.02,0.05",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for pair in rows.chunks(2) {
        assert_eq!((pair[0][0], pair[1][0]), ("prefixspan", "spam"));
        assert_eq!(pair[0][8], pair[1][8]);
    }
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("miner"));
}

#[test]
fn unreachable_support_yields_no_patterns() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("numeric.seq"), NUMERIC).unwrap();
    let o = seqmine(
        dir.path(),
        &[
            "bench",
            "--input",
            "numeric.seq",
            "--supports",
            "5,1.0",
            "--repeats",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let counts: Vec<(&str, &str)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[4], f[8])
        })
        .collect();
    assert_eq!(counts[..2], [("5", "0"), ("5", "0")], "{csv}");
    assert_eq!(counts[2].0, "1.0");
}

#[test]
fn input_problems_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqmine(dir.path(), &["mine", "--input", "missing.csv"]);
    assert_eq!(o.status.code(), Some(3));
    fs::write(dir.path().join("bad.csv"), "a,b\n1,2\n").unwrap();
    let o = seqmine(dir.path(), &["mine", "--input", "bad.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("header"), "{}", stderr(&o));
}

#[test]
fn bad_config_files_name_flag_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = seqmine(dir.path(), &["generate", "--users", "5", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(0));
    fs::write(
        dir.path().join("map.txt"),
        "Park = Nature\nno equals sign\n",
    )
    .unwrap();
    let o = seqmine(
        dir.path(),
        &["mine", "--input", "c.csv", "--activity-map", "map.txt"],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("--activity-map") && err.contains("line 2"),
        "{err}"
    );
}

#[test]
fn rejected_rows_are_reported_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let csv = "checkin_id,user_id,timestamp,lat,lon,category,subcategory,gender,origin\n\
               c1,u1,2019-01-01T01:00:00Z,1.3,103.8,Park,Park,F,Japan\n\
               c2,u1,2019-01-01T02:00:00Z,95,103.8,Park,Park,F,Japan\n\
               c3,u1,2019-01-01T03:00:00Z,1.3,103.8,Zoo,Zoo,F,Japan\n";
    fs::write(dir.path().join("c.csv"), csv).unwrap();
    let o = seqmine(
        dir.path(),
        &[
            "mine",
            "--input",
            "c.csv",
            "--min-support",
            "1",
            "--report-length",
            "2",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rejects = fs::read_to_string(dir.path().join("out/rejects.csv")).unwrap();
    assert!(
        rejects.lines().nth(1).unwrap().starts_with("3,"),
        "{rejects}"
    );
}
