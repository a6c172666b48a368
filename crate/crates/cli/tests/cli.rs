use std::fs;
use std::process::{Command, Output};

fn delaychan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delaychan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_writes_versioned_csv() {
    let o = delaychan(&[
        "simulate",
        "--M",
        "8",
        "--T",
        "4",
        "--k",
        "4",
        "--dmax",
        "4",
        "--adversary",
        "random",
        "--trials",
        "6",
        "--seed",
        "9",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# delaychan-csv v1"));
    assert_eq!(
        lines.next(),
        Some("trial,success,corrupted_fraction,spent,form_id")
    );
    assert_eq!(lines.count(), 6);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = delaychan(&[
            "simulate",
            "--M",
            "8",
            "--T",
            "4",
            "--davg",
            "1",
            "--codec",
            "avg_concat",
            "--c",
            "1/4",
            "--outer",
            "none",
            "--adversary",
            "random",
            "--trials",
            "20",
            "--seed",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn budget_flags_are_exclusive_and_required() {
    assert!(
        !delaychan(&["simulate", "--M", "8", "--T", "4", "--dmax", "1", "--davg", "1"])
            .status
            .success()
    );
    assert!(!delaychan(&["simulate", "--M", "8", "--T", "4"])
        .status
        .success());
}

#[test]
fn bad_spec_fails_without_invariant_status() {
    let o = delaychan(&[
        "simulate",
        "--M",
        "8",
        "--T",
        "4",
        "--dmax",
        "1",
        "--adversary",
        "banking",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn attack_writes_schedule_received_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cw.txt");
    let sched = dir.path().join("s.txt");
    let rx = dir.path().join("rx.txt");
    let trace = dir.path().join("trace.txt");
    let word: String = (0..64)
        .map(|i| if i % 3 == 0 { '1' } else { '0' })
        .collect();
    fs::write(&input, format!("# one word\n{word}\n")).unwrap();
    let o = delaychan(&[
        "attack",
        "--M",
        "16",
        "--T",
        "4",
        "--davg",
        "16",
        "--codec",
        "avg_concat",
        "--c",
        "1/4",
        "--outer",
        "none",
        "--adversary",
        "banking",
        "--input",
        input.to_str().unwrap(),
        "--out",
        sched.to_str().unwrap(),
        "--received",
        rx.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let schedules =
        delaychan::format::parse_schedules(&fs::read_to_string(&sched).unwrap(), Some(64)).unwrap();
    assert_eq!(schedules.len(), 1);
    let received = fs::read_to_string(&rx).unwrap();
    assert_eq!(received.trim().split(',').count(), 64);
    let entries = delaychan::format::parse_trace(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!entries.is_empty());
    assert!(entries.windows(2).all(|w| w[0].spent <= w[1].spent));
}

#[test]
fn attack_rejects_wrong_length() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cw.txt");
    fs::write(&input, "0101\n").unwrap();
    let o = delaychan(&[
        "attack",
        "--M",
        "4",
        "--T",
        "2",
        "--dmax",
        "1",
        "--adversary",
        "block_end",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("sweep.csv");
    let o = delaychan(&[
        "sweep",
        "--M",
        "16",
        "--T",
        "8",
        "--k",
        "4",
        "--davg",
        "1",
        "--codec",
        "avg_concat",
        "--outer",
        "none",
        "--adversary",
        "collision_point",
        "--trials",
        "4",
        "--axis",
        "c",
        "--values",
        "1/2,1/4,1/8",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("# delaychan-sweep v1\n"));
    assert_eq!(text.lines().count(), 5);
    let o = delaychan(&[
        "fit",
        "--input",
        table.to_str().unwrap(),
        "--y",
        "max_spent",
    ]);
    // zero costs cannot be fitted; anything else must give an exponent
    let out = stdout(&o);
    assert!(o.status.success() == out.starts_with("exponent="));
}

#[test]
fn fit_exact_power_law() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.csv");
    fs::write(&table, "ell,cost\n16,64\n64,512\n256,4096\n").unwrap();
    let o = delaychan(&[
        "fit",
        "--input",
        table.to_str().unwrap(),
        "--x",
        "ell",
        "--y",
        "cost",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let exponent: f64 = out
        .lines()
        .next()
        .unwrap()
        .strip_prefix("exponent=")
        .unwrap()
        .parse()
        .unwrap();
    assert!((exponent - 1.5).abs() < 1e-9);
    assert!(
        !delaychan(&["fit", "--input", table.to_str().unwrap(), "--y", "missing"])
            .status
            .success()
    );
}

#[test]
fn oracle_reports_collisions() {
    let dir = tempfile::tempdir().unwrap();
    let book = dir.path().join("book.txt");
    let witness = dir.path().join("w.txt");
    fs::write(&book, "10\n01\n").unwrap();
    let o = delaychan(&[
        "oracle",
        "--M",
        "2",
        "--T",
        "1",
        "--k",
        "1",
        "--dmax",
        "1",
        "--codebook",
        book.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "# delaychan-oracle v1\ncodeword,received_set_size\n10,2\n01,2\n"
    );
    let w = fs::read_to_string(&witness).unwrap();
    assert!(w.contains("received=0,1"));
}

#[test]
fn oracle_codec_codebook_and_max_size() {
    let o = delaychan(&[
        "oracle",
        "--M",
        "4",
        "--T",
        "2",
        "--k",
        "2",
        "--dmax",
        "1",
        "--codec",
        "max_unary",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("valid"));
    let o = delaychan(&[
        "oracle",
        "--M",
        "3",
        "--T",
        "1",
        "--k",
        "2",
        "--dmax",
        "0",
        "--max-size",
    ]);
    assert!(stdout(&o).starts_with("max_codebook_size=8 "));
}
