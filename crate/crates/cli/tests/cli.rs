//! Drives the installed binary end to end: exit codes, the output
//! directory lock, cache reuse, and staged invocations matching `run`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn nids(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nids"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should spawn")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Sample CSVs plus a config sized so every pipeline stage stays quick:
/// two tuning candidates over two folds, and curve fractions large enough
/// that the smallest split still leaves the oversampler enough rows.
struct SmallData {
    #[allow(dead_code)]
    keep: tempfile::TempDir,
    config: PathBuf,
}

static SMALL: OnceLock<SmallData> = OnceLock::new();

fn small_data() -> &'static SmallData {
    SMALL.get_or_init(|| {
        let keep = tempfile::tempdir().unwrap();
        let dir = keep.path();
        let out = nids(dir, &["synth-data", "--rows", "6000", "--dir", "data"]);
        assert_ok(&out);
        let config = dir.join("small.toml");
        fs::write(
            &config,
            format!(
                "unsw_csv = {}\n\
                 kdd_csv = {}\n\
                 n_iter = 2\n\
                 k_folds = 2\n\
                 curve_fractions = 0.05,0.1\n",
                dir.join("data/unsw.csv").display(),
                dir.join("data/kdd.csv").display()
            ),
        )
        .unwrap();
        SmallData { keep, config }
    })
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().into_string().unwrap();
        files.insert(name, fs::read(entry.path()).unwrap());
    }
    files
}

#[test]
fn missing_input_paths_exit_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = nids(dir.path(), &["run"]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("unsw_csv"), "stderr: {}", stderr(&out));
}

#[test]
fn tune_before_preprocess_exits_with_precondition_error() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
            "tune",
        ],
    );
    assert_eq!(exit_code(&out), 4, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("run preprocess first"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn held_lock_turns_away_other_invocations() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    fs::create_dir(&out_dir).unwrap();
    fs::write(out_dir.join(".lock"), "").unwrap();
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "preprocess",
        ],
    );
    assert_eq!(exit_code(&out), 4, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("another invocation"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn bad_scope_value_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = nids(dir.path(), &["--smote-scope", "banana", "run"]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn dry_run_lists_the_plan_and_writes_nothing() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--dry-run",
            "run",
        ],
    );
    assert_ok(&out);
    let text = stdout(&out);
    assert!(text.contains("metrics.csv"), "plan missing files: {text}");
    assert!(text.contains("search_gbm.csv"), "plan missing ledgers: {text}");
    assert!(!out_dir.exists(), "dry run created the output directory");

    let synth = nids(
        dir.path(),
        &["--dry-run", "synth-data", "--dir", dir.path().join("d").to_str().unwrap()],
    );
    assert_ok(&synth);
    assert!(!dir.path().join("d").exists(), "dry run wrote sample data");
}

#[test]
fn dry_run_under_fixed_params_plans_no_ledgers() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--fixed-params",
            "--dry-run",
            "run",
        ],
    );
    assert_ok(&out);
    let text = stdout(&out);
    assert!(!text.contains("search_"), "fixed plan lists ledgers: {text}");
    assert!(text.contains("best_params.txt"), "plan missing params: {text}");
}

#[test]
fn preprocess_reuses_an_intact_cache() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let args = [
        "--config",
        data.config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "preprocess",
    ];
    let first = nids(dir.path(), &args);
    assert_ok(&first);
    let before = snapshot(&out_dir);

    let second = nids(dir.path(), &args);
    assert_ok(&second);
    assert!(
        stdout(&second).contains("cached outputs are current"),
        "stdout: {}",
        stdout(&second)
    );
    assert_eq!(snapshot(&out_dir), before, "a skipped rebuild changed files");

    // Touching a product invalidates the cache and the stage rebuilds.
    fs::write(out_dir.join("fused_columns.csv"), "tampered").unwrap();
    let third = nids(dir.path(), &args);
    assert_ok(&third);
    assert!(
        !stdout(&third).contains("cached outputs are current"),
        "tampered cache was still trusted"
    );
    assert_eq!(snapshot(&out_dir), before, "rebuild differs from first run");
}

#[test]
fn staged_invocations_match_a_single_run() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let staged = dir.path().join("staged");
    let single = dir.path().join("single");

    for stage in ["preprocess", "tune", "train", "evaluate"] {
        let out = nids(
            dir.path(),
            &[
                "--config",
                data.config.to_str().unwrap(),
                "--out",
                staged.to_str().unwrap(),
                "--fixed-params",
                stage,
            ],
        );
        assert_ok(&out);
    }
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--out",
            single.to_str().unwrap(),
            "--fixed-params",
            "run",
        ],
    );
    assert_ok(&out);

    let staged_files = snapshot(&staged);
    let mut single_files = snapshot(&single);
    assert!(
        single_files.remove("timings.txt").is_some(),
        "run did not record stage timings"
    );
    let staged_names: Vec<&String> = staged_files.keys().collect();
    let single_names: Vec<&String> = single_files.keys().collect();
    assert_eq!(staged_names, single_names);
    for (name, bytes) in &single_files {
        assert_eq!(&staged_files[name], bytes, "{name} differs between paths");
    }
}

#[test]
fn oversized_sample_keeps_every_row() {
    let data = small_data();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = nids(
        dir.path(),
        &[
            "--config",
            data.config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--sample-per-dataset",
            "999999",
            "preprocess",
        ],
    );
    assert_ok(&out);
    let train = nids_cli::matio::read_matrix(&out_dir.join("fused_train.mat")).unwrap();
    let test = nids_cli::matio::read_matrix(&out_dir.join("fused_test.mat")).unwrap();
    let counts = fs::read_to_string(out_dir.join("class_counts.csv")).unwrap();
    let mut before = 0usize;
    for line in counts.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        before += cells[1].parse::<usize>().unwrap() + cells[2].parse::<usize>().unwrap();
    }
    // Train rows exceed the pre-balance count by the synthetic rows; the
    // original row total is the untouched 2 x 6000.
    assert!(train.n_samples() >= before);
    assert_eq!(before + test.n_samples(), 12000);
}
