use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reality-steer"))
        .args(args)
        .env_remove("REALITY_STEER_THREADS")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn canonical_run_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[scenario]\nrng_seed = 1\n[run]\nnum_trials = 10000\n");
    let out = bin(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let alive = v["payload"]["summary"]["post_frequencies"][0].as_f64().unwrap();
    assert!((alive - 0.5).abs() < 0.015);
    assert_eq!(v["payload"]["summary"]["memory_consistent_fraction"], 1.0);
    assert_eq!(v["payload"]["config"]["scenario"]["rng_seed"], 1);
    assert!(v["metadata"]["generated_unix_seconds"].is_u64());
}

#[test]
fn lambda_zero_is_always_alive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "l.toml",
        "[scenario]\nnonlinear_lambda = 0.0\n[run]\nnum_trials = 2000\n",
    );
    let v = json(&bin(&["run", &cfg]));
    assert_eq!(v["payload"]["summary"]["post_frequencies"][0], 1.0);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "[scenario]\nnonlinear_lambda = -1\n[run]\nnum_trials = 5\n",
    );
    let out = bin(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nonlinear_lambda") && err.contains("line 2"), "{err}");

    let big = write(dir.path(), "big.toml", "[scenario]\nenv_qubits = 26\n[run]\nnum_trials = 5\n");
    let out = bin(&["run", &big]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    assert_eq!(bin(&["run", "/nonexistent/config.toml"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[scenario]\n[run]\nnum_trials = 5\n");
    let out = bin(&["run", &cfg, "--out", "/nonexistent/dir/report.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_single_check() {
    let out = bin(&["verify", "--suite", "no_signalling"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("no_signalling"));
}

#[test]
fn verify_all_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = bin(&["verify", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["payload"]["verdicts"].as_array().unwrap().len(), 6);
    assert_eq!(v["payload"]["all_passed"], true);
}

#[test]
fn lambda_sweep_csv_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "[scenario]\n[sweep]\naxis = \"lambda\"\nvalues = [0.5, 1.0, 2.0]\ntrials_per_point = 2000\n",
    );
    let out = bin(&["sweep", &cfg, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "predicted_dead0").unwrap();
    let predicted: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[col].parse().unwrap())
        .collect();
    for (p, want) in predicted.iter().zip([0.2, 0.5, 0.8]) {
        assert!((p - want).abs() < 1e-12);
    }
}

#[test]
fn env_sweep_erasure_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.toml",
        "[scenario]\nencoding = \"tagged\"\n[sweep]\naxis = \"env_qubits\"\nvalues = [1, 2, 4]\ntrials_per_point = 1000\n",
    );
    let v = json(&bin(&["sweep", &cfg]));
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["erasure_passed"] == true));
}

#[test]
fn wrong_subcommand_for_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[scenario]\n[run]\nnum_trials = 5\n");
    assert_eq!(bin(&["sweep", &cfg]).status.code(), Some(2));
}

#[test]
fn per_trial_csv_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[scenario]\n[run]\nnum_trials = 10\nemit_per_trial = true\n",
    );
    let out_path = dir.path().join("r.csv");
    let out = bin(&["run", &cfg, "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let trials = std::fs::read_to_string(dir.path().join("r.trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 11);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        reality_steer_cli::parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
