// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use nibmul_core::netlist::{build_netlist, parse_verilog};
use nibmul_core::ArchKind;
use nibmul_harness::bench::{ratio_text, CSV_HEADER};
use nibmul_harness::exit;
use nibmul_harness::stimulus::random_jobs;

fn nibmul(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nibmul"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn nibmul")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_default_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = nibmul(&["verify"], dir.path());
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(dir.path().join("verify.txt")).unwrap();
    assert!(report.contains("0 failed"));
    assert!(!report.contains("FAIL"));
}

#[test]
fn verify_single_architecture_reports_every_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = nibmul(
        &[
            "verify",
            "--arch",
            "nibble",
            "--n",
            "1",
            "--stimulus",
            "exhaustive",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), exit::OK);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(
        text.contains("PASS functional nibble n=1: 65536/65536 matches"),
        "{text}"
    );
    assert!(text.contains("PASS netlist nibble n=1: 65536/65536 matches"));
    assert!(!text.contains("wallace"));
}

#[test]
fn usage_and_io_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&nibmul(&["verify", "--n", "0"], dir.path())),
        exit::USAGE
    );
    assert_eq!(
        code(&nibmul(
            &["emit", "--arch", "karatsuba", "--n", "1"],
            dir.path()
        )),
        exit::USAGE
    );
    assert_eq!(
        code(&nibmul(&["bench", "--stimulus", "sometimes"], dir.path())),
        exit::USAGE
    );
    assert_eq!(code(&nibmul(&["frobnicate"], dir.path())), exit::USAGE);
    assert_eq!(
        code(&nibmul(
            &["trace", "--arch", "nibble", "--n", "4", "--mode", "unrolled", "--lanes", "0"],
            dir.path()
        )),
        exit::USAGE
    );
    let missing = dir.path().join("missing.cfg");
    let o = nibmul(
        &["bench", "--config", missing.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&o), exit::IO);
    // A regular file where the output directory should be.
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = nibmul(
        &["emit", "--arch", "wallace", "--n", "1"],
        &blocker.join("w.v"),
    );
    assert_eq!(code(&o), exit::IO);
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "arch = booth\nn = 2\nstimulus = random:3\nseed = 4\n").unwrap();
    let o = nibmul(&["bench", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), exit::OK);
    let csv = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let archs: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(archs, ["shiftadd", "booth"]);
}

#[test]
fn bench_csv_schema_and_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let o = nibmul(
        &["bench", "--stimulus", "random:16", "--seed", "3"],
        dir.path(),
    );
    assert_eq!(code(&o), exit::OK);
    let csv = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 15);
    let find = |arch: &str, n: &str| rows.iter().find(|r| r[0] == arch && r[1] == n).unwrap();
    assert_eq!(find("nibble", "16")[2], "32");
    assert_eq!(find("lutarray", "16")[6], "2954.20");
    assert_eq!(find("shiftadd", "16")[6], "");
    for r in &rows {
        let base = find("shiftadd", r[1]);
        assert_eq!(r[8], ratio_text(base[3], r[3]));
        assert_eq!(r[9], ratio_text(base[5], r[5]));
    }
    let ratio = |arch| find(arch, "16")[8].parse::<f64>().unwrap();
    assert!(ratio("nibble") > ratio("lutarray"));
    assert!(dir.path().join("bench.txt").exists());
}

#[test]
fn traces_have_the_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = nibmul(
        &["trace", "--arch", "nibble", "--n", "8", "--seed", "5"],
        dir.path(),
    );
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trace_nibble_n8.csv")).unwrap();
    let writes: Vec<u64> = csv
        .lines()
        .filter(|l| l.contains(",write_output,"))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(writes, vec![2, 4, 6, 8, 10, 12, 14, 16]);
    let vcd = std::fs::read_to_string(dir.path().join("trace_nibble_n8.vcd")).unwrap();
    assert!(vcd.contains("$enddefinitions $end"));
    assert!(vcd.contains("\n#16\n"));

    let o = nibmul(
        &["trace", "--arch", "shiftadd", "--a", "200", "--b", "3"],
        dir.path(),
    );
    assert_eq!(code(&o), exit::OK);
    let csv = std::fs::read_to_string(dir.path().join("trace_shiftadd_n1.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "8,0,write_output,600"));

    let o = nibmul(&["trace", "--arch", "lutarray", "--n", "8"], dir.path());
    assert_eq!(code(&o), exit::OK);
    let csv = std::fs::read_to_string(dir.path().join("trace_lutarray_n8.csv")).unwrap();
    let writes: Vec<&str> = csv
        .lines()
        .filter(|l| l.contains(",write_output,"))
        .collect();
    assert_eq!(writes.len(), 8);
    assert!(writes.iter().all(|l| l.starts_with("1,")));
}

#[test]
fn trace_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let read = |sub: &str| {
        let out = dir.path().join(sub);
        assert_eq!(
            code(&nibmul(
                &["trace", "--arch", "booth", "--n", "3", "--seed", "9"],
                &out
            )),
            exit::OK
        );
        (
            std::fs::read(out.join("trace_booth_n3.csv")).unwrap(),
            std::fs::read(out.join("trace_booth_n3.vcd")).unwrap(),
        )
    };
    assert_eq!(read("a"), read("b"));
}

#[test]
fn emitted_verilog_round_trips_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("n4a.v");
    let second = dir.path().join("n4b.v");
    assert_eq!(
        code(&nibmul(&["emit", "--arch", "nibble", "--n", "4"], &first)),
        exit::OK
    );
    assert_eq!(
        code(&nibmul(&["emit", "--arch", "nibble", "--n", "4"], &second)),
        exit::OK
    );
    let text = std::fs::read_to_string(&first).unwrap();
    assert_eq!(text.as_bytes(), std::fs::read(&second).unwrap().as_slice());
    let parsed = parse_verilog(&text).unwrap();
    let design = build_netlist(ArchKind::Nibble, 4, None).unwrap();
    let jobs = random_jobs(4, 500, 77);
    let got = design.run_jobs_on(&parsed, &jobs).unwrap();
    for (j, g) in jobs.iter().zip(got) {
        assert_eq!(g, j.oracle());
    }

    let w = dir.path().join("w.v");
    assert_eq!(
        code(&nibmul(&["emit", "--arch", "wallace", "--n", "1"], &w)),
        exit::OK
    );
    let text = std::fs::read_to_string(&w).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.trim_start().starts_with("AND2 g"))
            .count(),
        64
    );
}
