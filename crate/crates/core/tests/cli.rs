use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dribbling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dribbling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn train_in(dir: &Path, extra: &[&str]) -> Output {
    let snapshots = dir.join("snaps");
    let log = dir.join("train.csv");
    let hist = dir.join("hist.csv");
    let mut args = vec![
        "train",
        "--episodes",
        "120",
        "--runs",
        "2",
        "--seed",
        "5",
        "--histogram-bin",
        "40",
        "--snapshot-path",
        snapshots.to_str().unwrap(),
        "--log-path",
        log.to_str().unwrap(),
        "--histogram-path",
        hist.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    dribbling(&args)
}

#[test]
fn train_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = train_in(dir.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("best run:"));

    let log = fs::read_to_string(dir.path().join("train.csv")).unwrap();
    assert_eq!(
        log.lines().next(),
        Some("run,episode,winner,cause,smdp_steps,sim_steps")
    );
    assert_eq!(log.lines().count(), 1 + 240);
    let hist = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    assert_eq!(hist.lines().count(), 1 + 3);

    let best = dir.path().join("snaps").join("best.cmac");
    let eval_log = dir.path().join("eval.csv");
    let out = dribbling(&[
        "eval",
        "--episodes",
        "50",
        "--seed",
        "5",
        "--snapshot-path",
        best.to_str().unwrap(),
        "--log-path",
        eval_log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("episodes: 50"));
    assert!(stdout.contains("success rate:"));
    assert_eq!(fs::read_to_string(eval_log).unwrap().lines().count(), 51);
}

#[test]
fn repeated_training_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(train_in(a.path(), &[]).status.success());
    assert!(train_in(b.path(), &[]).status.success());
    for file in [
        "train.csv",
        "hist.csv",
        "snaps/run-0.cmac",
        "snaps/run-1.cmac",
        "snaps/best.cmac",
    ] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("exp.cfg");
    fs::write(&file, "# small\nepisodes = 500\nruns = 3\ncmac_mode = one\n").unwrap();
    let out = train_in(dir.path(), &["--config", file.to_str().unwrap()]);
    assert!(out.status.success());
    let log = fs::read_to_string(dir.path().join("train.csv")).unwrap();
    // --episodes and --runs win over the file
    assert_eq!(log.lines().count(), 1 + 240);
    let bytes = fs::read(dir.path().join("snaps/best.cmac")).unwrap();
    let snapshot = soccer_dribbling::cmac::load_weights(&mut bytes.as_slice()).unwrap();
    assert_eq!(snapshot.spec().mode, soccer_dribbling::cmac::CmacMode::OneDim);
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["train".into(), "--alpha".into(), "lots".into()],
        vec!["train".into(), "--epsilon".into(), "2".into()],
        vec![
            "eval".into(),
            "--snapshot-path".into(),
            dir.path().join("missing.cmac").display().to_string(),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = dribbling(&args);
        assert!(!out.status.success(), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert_eq!(stderr.trim_end().lines().count(), 1, "{stderr}");
        assert!(stderr.starts_with("error: "));
    }
}

#[test]
fn unwritable_output_fails_before_training() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let log = blocker.join("train.csv");
    let snapshots = dir.path().join("snaps");
    let out = dribbling(&[
        "train",
        "--episodes",
        "1000000",
        "--log-path",
        log.to_str().unwrap(),
        "--snapshot-path",
        snapshots.to_str().unwrap(),
        "--histogram-path",
        dir.path().join("h.csv").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains(blocker.to_str().unwrap()));
    assert!(!snapshots.join("run-0.cmac").exists());
}
