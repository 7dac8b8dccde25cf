use std::fs;
use std::path::Path;
use std::process::Command;

use codeball::experiments::{main_with_args, EXIT_BAD_CONFIG, EXIT_FAILURE, EXIT_OK};

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("codeball").chain(args.iter().copied()))
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_codeball");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["nonsense"]), EXIT_BAD_CONFIG);
    assert_eq!(status(&["walk", "--k", "2000"]), EXIT_BAD_CONFIG);
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert_eq!(status(&["oracle-verify", "--trials", "10", "--out", &out]), EXIT_OK);
    assert_eq!(status(&["oracle-verify", "--trials", "10", "--inject-fault", "--out", &out]), EXIT_FAILURE);
}

#[test]
fn spectrum_on_a_small_code_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(&["spectrum", "--n", "16", "--k", "4", "--b", "2", "--steps", "1e7", "--out", &out_arg(dir.path())]);
    assert_eq!(code, EXIT_OK);
    for f in ["ideal.csv", "ideal_exact.csv", "sampled.csv", "walk_trial_1.csv", "walk_trial_1.json", "spectrum.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let summary = json(&dir.path().join("spectrum.json"));
    let tv = summary["exact_total_variation"].as_f64().unwrap();
    assert!(tv <= 0.02, "TV {tv}");
    assert_eq!(data_lines(&dir.path().join("sampled.csv"))[0], "h,value");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# small walk\nn = 30\nk = 10\nb = 2\nsteps = 1e5\n").unwrap();
    let out = dir.path().join("out");
    let code = run(&["walk", "--config", cfg.to_str().unwrap(), "--b", "3", "--out", &out_arg(&out)]);
    assert_eq!(code, EXIT_OK);
    let meta = &json(&out.join("walk.json"))["metadata"];
    assert_eq!((meta["n"].as_u64(), meta["b"].as_u64()), (Some(30), Some(3)));

    fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(run(&["walk", "--config", cfg.to_str().unwrap()]), EXIT_BAD_CONFIG);
}

#[test]
fn sweeps_are_reproducible() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let code = run(&[
            "fidelity-sweep",
            "--n", "80",
            "--b-values", "2,4,6",
            "--trials", "2",
            "--steps", "2e5",
            "--out", &out_arg(d.path()),
        ]);
        assert_eq!(code, EXIT_OK);
    }
    let a = fs::read(dirs[0].path().join("fidelity_sweep.csv")).unwrap();
    let b = fs::read(dirs[1].path().join("fidelity_sweep.csv")).unwrap();
    assert_eq!(a, b);
    let lines = data_lines(&dirs[0].path().join("fidelity_sweep.csv"));
    assert_eq!(lines.len(), 1 + 3 * 2);
}

#[test]
fn runtime_table_schema() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(&[
        "runtime-compare", "--n", "200", "--k", "20", "--b", "4", "--steps", "1e5", "--trials", "2", "--out",
        &out_arg(dir.path()),
    ]);
    assert_eq!(code, EXIT_OK);
    let lines = data_lines(&dir.path().join("runtime_compare.csv"));
    assert_eq!(
        lines[0],
        "delta,log10_bruteforce,log10_hadamard_ideal,log10_hadamard_sampled_trial_1,\
         log10_hadamard_sampled_trial_2,log10_isd,log10_bruteforce_grover,log10_isd_grover"
    );
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
}

#[test]
fn region_map_marks_the_reference_points() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["region-map", "--out", &out_arg(dir.path())]), EXIT_OK);
    let lines = data_lines(&dir.path().join("region_map.csv"));
    assert_eq!(lines[0], "k,b,class");
    assert!(lines.contains(&"100,20,convergent".to_string()));
    assert!(lines.contains(&"300,60,cutoff".to_string()));
    assert!(lines.contains(&"100,200,overlapping".to_string()));
}

#[test]
fn failed_runs_leave_no_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    // A code file whose dimensions disagree with nothing on disk yet: the
    // run fails while loading, before any output exists.
    let missing = dir.path().join("absent.code");
    let out = dir.path().join("out");
    let code = run(&["walk", "--code", missing.to_str().unwrap(), "--out", &out_arg(&out)]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}
