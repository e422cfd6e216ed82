use std::path::Path;
use std::process::{Command, Output};

fn sssst(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sssst")).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn simulate_then_verify_passes() {
    let d = tempfile::tempdir().unwrap();
    let o = sssst(&["simulate", "--stages", "2", "--decisions", "22", "--out", "s.snap", "--trace", "t.json"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for (file, mode) in [("s.snap", "safety"), ("t.json", "safety"), ("t.json", "determinism"), ("t.json", "all")] {
        let o = sssst(&["verify", "--trace", file, "--mode", mode], d.path());
        assert_eq!(code(&o), 0, "{file} {mode}: {}", String::from_utf8_lossy(&o.stdout));
        assert!(String::from_utf8_lossy(&o.stdout).contains("summary {"));
    }
}

#[test]
fn flipped_cell_fails_verification() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&sssst(&["simulate", "--stages", "2", "--decisions", "31", "--out", "s.snap"], d.path())), 0);
    let text = std::fs::read_to_string(d.path().join("s.snap")).unwrap();
    // Flip the first OFF cell.
    let flipped = text.replacen(" OFF\n", " ON\n", 1);
    assert_ne!(flipped, text);
    std::fs::write(d.path().join("bad.snap"), flipped).unwrap();
    let o = sssst(&["verify", "--trace", "bad.snap", "--mode", "safety"], d.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL at"));
}

#[test]
fn oracle_prints_the_twelve_pattern() {
    let d = tempfile::tempdir().unwrap();
    let o = sssst(&["oracle", "--decisions", "12", "--format", "ascii", "--out", "-"], d.path());
    assert_eq!(code(&o), 0);
    // Decision 1 masks the north quarter: x-1 is read with bit 0 flipped.
    let want: String = (1..=4u64)
        .rev()
        .map(|y| (1..=4u64).map(|x| if ((x - 1) ^ 1) & (y - 1) == 0 { '#' } else { '.' }).collect::<String>() + "\n")
        .collect();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), want);
    assert_eq!(want, ".#..\n##..\n.#.#\n####\n");
}

#[test]
fn oracle_pbm_is_bit_exact() {
    let d = tempfile::tempdir().unwrap();
    let o = sssst(&["oracle", "--decisions", "2", "--format", "pbm", "--out", "-"], d.path());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "P1\n2 2\n10\n11\n");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    for i in 0..2 {
        let o = sssst(&["simulate", "--stages", "2", "--out", &format!("s{i}"), "--trace", &format!("t{i}")], d.path());
        assert_eq!(code(&o), 0);
        assert_eq!(code(&sssst(&["gen-tileset", "--out", &format!("ts{i}")], d.path())), 0);
    }
    for f in ["s", "t", "ts"] {
        let a = std::fs::read(d.path().join(format!("{f}0"))).unwrap();
        let b = std::fs::read(d.path().join(format!("{f}1"))).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let a = sssst(&["fairness", "--stages", "1", "--runs", "60"], d.path());
    let b = sssst(&["fairness", "--stages", "1", "--runs", "60"], d.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stats_on_a_trace() {
    let d = tempfile::tempdir().unwrap();
    sssst(&["simulate", "--stages", "2", "--out", "s", "--trace", "t.json"], d.path());
    let o = sssst(&["stats", "--trace", "t.json", "--what", "decisions"], d.path());
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).matches("placement ok").count(), 2);
    let o = sssst(&["stats", "--trace", "t.json", "--what", "zeta"], d.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("count bound: holds"));
    assert_eq!(code(&sssst(&["stats", "--trace", "s", "--what", "zeta"], d.path())), 2);
}

#[test]
fn usage_and_format_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let o = sssst(&["simulate", "--stages", "1", "--out", "x", "--frobnicate"], d.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(code(&sssst(&["oracle", "--decisions", "14", "--out", "-"], d.path())), 2);
    assert_eq!(code(&sssst(&["simulate", "--stages", "1", "--decisions", "12", "--out", "x"], d.path())), 2);
    assert_eq!(code(&sssst(&["fairness", "--stages", "1", "--runs", "0"], d.path())), 2);
    assert_eq!(code(&sssst(&["verify", "--trace", "missing"], d.path())), 2);

    std::fs::write(d.path().join("bad.toml"), "format_version = 1\ntemperature = 3\nseed = \"s\"\n").unwrap();
    let o = sssst(&["simulate", "--stages", "1", "--out", "x", "--tileset", "bad.toml"], d.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    sssst(&["simulate", "--stages", "1", "--out", "s.snap"], d.path());
    assert_eq!(code(&sssst(&["verify", "--trace", "s.snap", "--mode", "determinism"], d.path())), 2);
}

#[test]
fn runs_past_the_base_case_fail_cleanly() {
    let d = tempfile::tempdir().unwrap();
    let o = sssst(&["simulate", "--stages", "3", "--out", "x"], d.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage-3"));
}
