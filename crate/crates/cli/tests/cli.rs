//! End-to-end tests through the compiled binary: file round trips,
//! determinism, exit codes, and agreement with the library API.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use tempfile::TempDir;

fn corrspec(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_corrspec"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn simulate(dir: &Path, config_body: &str, out_name: &str) -> PathBuf {
    let config = write_config(dir, "config.toml", config_body);
    let out = dir.join(out_name);
    let res = corrspec(
        &["simulate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()],
        &[],
    );
    assert_exit(&res, 0);
    out
}

#[test]
fn simulate_writes_the_documented_shape_deterministically() {
    let dir = TempDir::new().unwrap();
    let config = "n = 5\nseed = 42\n\n[model]\nfamily = \"enp\"\np = 3\nl = 1.0\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "a.csv");

    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header + 5 observation rows");
    assert_eq!(lines[0], "v1,v2,v3");
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 3);
    }

    // rerun lands byte-identical, sidecar included
    let out2 = simulate(dir.path(), config, "b.csv");
    assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
    let meta = fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap();
    let meta2 = fs::read_to_string(dir.path().join("b.csv.meta.json")).unwrap();
    assert_eq!(meta, meta2);
    assert!(meta.contains("corrspec.simulate/1"));
    assert!(meta.contains("\"seed\": 42"));
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        "n = 4\nseed = 1\n\n[model]\nfamily = \"pure_noise\"\np = 2\nsigma = 1.0\n",
    );
    let out1 = dir.path().join("s1.csv");
    let out2 = dir.path().join("s2.csv");
    for (out, seed) in [(&out1, "9"), (&out2, "9")] {
        let res = corrspec(
            &[
                "simulate",
                "--config",
                config.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                seed,
            ],
            &[],
        );
        assert_exit(&res, 0);
    }
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
    let meta = fs::read_to_string(dir.path().join("s1.csv.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 9"));
}

#[test]
fn reingested_file_yields_an_identical_report() {
    let dir = TempDir::new().unwrap();
    let config = "n = 60\nseed = 3\n\n[model]\nfamily = \"enp\"\np = 8\nl = 1.0\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "d.csv");

    let first = corrspec(&["estimate", out.to_str().unwrap(), "--json"], &[]);
    let second = corrspec(&["estimate", out.to_str().unwrap(), "--json"], &[]);
    assert_exit(&first, 0);
    assert_eq!(first.stdout, second.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(doc["schema"], "corrspec.estimate/1");
    assert_eq!(doc["report"]["p"], 8);
    assert_eq!(doc["report"]["n"], 60);
}

#[test]
fn flat_spectrum_data_counts_zero_components() {
    let dir = TempDir::new().unwrap();
    let config = "n = 1000\nseed = 5\n\n[model]\nfamily = \"pure_noise\"\np = 100\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "noise.csv");
    let res = corrspec(&["estimate", out.to_str().unwrap(), "--json"], &[]);
    assert_exit(&res, 0);
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["report"]["bs"], 0);
    assert_eq!(doc["report"]["act"], 0);
}

#[test]
fn one_factor_data_reports_one_component() {
    let dir = TempDir::new().unwrap();
    let config = "n = 800\nseed = 8\n\n[model]\nfamily = \"enp\"\np = 200\nl = 1.0\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "enp.csv");
    let res = corrspec(&["estimate", out.to_str().unwrap(), "--json"], &[]);
    assert_exit(&res, 0);
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    let lambda1_over_p = doc["report"]["lambda1_over_p"].as_f64().unwrap();
    assert_abs_diff_eq!(lambda1_over_p, 0.5, epsilon = 0.04);
    assert_eq!(doc["report"]["bs"], 1);

    // table layout: n, p/n, lambda1(C)/p to 3 decimals, p, then counts
    let table = corrspec(&["estimate", out.to_str().unwrap()], &[]);
    assert_exit(&table, 0);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("lambda1(C)/p"), "table:\n{text}");
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(fields[0], "800");
    assert_eq!(fields[1], "0.250");
    assert_eq!(fields[3], "200");
}

#[test]
fn zero_variance_column_is_named_unless_cleaned() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("flat.csv");
    fs::write(&path, "alpha,beta,gamma\n1.0,2.0,3.0\n1.0,2.5,3.5\n1.0,2.2,3.1\n").unwrap();

    let rejected = corrspec(&["estimate", path.to_str().unwrap()], &[]);
    assert_exit(&rejected, 1);
    let err = String::from_utf8_lossy(&rejected.stderr);
    assert!(err.contains("alpha"), "stderr: {err}");

    let cleaned = corrspec(&["estimate", path.to_str().unwrap(), "--clean"], &[]);
    assert_exit(&cleaned, 0);
}

#[test]
fn spectrum_matches_the_library_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let config = "n = 80\nseed = 21\n\n[model]\nfamily = \"enp\"\np = 12\nl = 1.0\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "spec.csv");

    let res = corrspec(&["spectrum", out.to_str().unwrap(), "--which", "corr"], &[]);
    assert_exit(&res, 0);
    let text = String::from_utf8(res.stdout).unwrap();
    let cli_values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(cli_values.len(), 12);

    // same ingestion path as the binary: parse the CSV back into p x n
    let raw = fs::read_to_string(&out).unwrap();
    let mut columns = vec![Vec::new(); 12];
    for line in raw.lines().skip(1) {
        for (j, field) in line.split(',').enumerate() {
            columns[j].push(field.parse::<f64>().unwrap());
        }
    }
    let entries: Vec<f64> = columns.concat();
    let x = corrspec::Matrix::new(12, 80, entries).unwrap();
    let corr = corrspec::sample_stats::sample_matrices(&x, corrspec::sample_stats::Centering::Data)
        .unwrap()
        .corr;
    let lib_values = corrspec::linalg::sym_eigvals(&corr).unwrap();
    for (cli, lib) in cli_values.iter().zip(lib_values.values()) {
        assert_eq!(cli.to_bits(), lib.to_bits());
    }

    // unit diagonal: correlation spectrum sums to p
    let total: f64 = cli_values.iter().sum();
    assert_abs_diff_eq!(total, 12.0, epsilon = 1e-8);
}

#[test]
fn hpfilter_reproduces_trivial_series() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("const.csv");
    fs::write(&path, "r\n0.4\n0.4\n0.4\n0.4\n0.4\n").unwrap();
    let res = corrspec(&["hpfilter", path.to_str().unwrap()], &[]);
    assert_exit(&res, 0);
    let text = String::from_utf8(res.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_abs_diff_eq!(f[1], 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(f[2], 0.0, epsilon = 1e-12);
    }

    let wiggly = dir.path().join("w.csv");
    fs::write(&wiggly, "r\n0.1\n-0.2\n0.5\n0.3\n-0.4\n").unwrap();
    let res = corrspec(&["hpfilter", wiggly.to_str().unwrap(), "--lambda", "0"], &[]);
    assert_exit(&res, 0);
    let text = String::from_utf8(res.stdout).unwrap();
    let inputs = ["0.1", "-0.2", "0.5", "0.3", "-0.4"];
    for (line, expect) in text.lines().skip(1).zip(inputs) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], expect);
        assert_eq!(f[1], expect, "lambda 0 keeps the input as trend");
        assert_eq!(f[2], "0");
    }
}

#[test]
fn fisher_z_rejects_out_of_range_values() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rho.csv");
    fs::write(&path, "rho\n0.5\n1.0\n0.2\n").unwrap();
    let res = corrspec(&["hpfilter", path.to_str().unwrap(), "--fisher-z"], &[]);
    assert_exit(&res, 1);
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line 3"), "stderr: {err}");

    let ok = dir.path().join("ok.csv");
    fs::write(&ok, "rho\n0.5\n0.9\n0.2\n-0.3\n0.0\n").unwrap();
    let res = corrspec(&["hpfilter", ok.to_str().unwrap(), "--fisher-z", "--lambda", "1"], &[]);
    assert_exit(&res, 0);
    let text = String::from_utf8(res.stdout).unwrap();
    let first: f64 = text.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert_abs_diff_eq!(first, 0.5f64.atanh(), epsilon = 1e-15);
}

#[test]
fn verify_exit_codes_and_thread_invariance() {
    let dir = TempDir::new().unwrap();
    let job = write_config(
        dir.path(),
        "job.toml",
        "theorem = \"spike_ratio\"\nreplicates = 4\nmaster_seed = 11\n\n\
         [model]\nfamily = \"enp\"\np = 40\nl = 1.0\nsigma = 1.0\n\n\
         [[grid]]\np = 40\nn = 160\n",
    );
    let o1 = dir.path().join("t1.json");
    let o8 = dir.path().join("t8.json");
    let r1 = corrspec(
        &["verify", "--job", job.to_str().unwrap(), "--out", o1.to_str().unwrap()],
        &[("RAYON_NUM_THREADS", "1")],
    );
    assert_exit(&r1, 0);
    let r8 = corrspec(
        &["verify", "--job", job.to_str().unwrap(), "--out", o8.to_str().unwrap(), "--json"],
        &[("RAYON_NUM_THREADS", "8")],
    );
    assert_exit(&r8, 0);
    assert_eq!(fs::read(&o1).unwrap(), fs::read(&o8).unwrap());

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&o1).unwrap()).unwrap();
    assert_eq!(doc["schema"], "corrspec.verify/1");

    let strict = write_config(
        dir.path(),
        "strict.toml",
        "theorem = \"spike_ratio\"\nreplicates = 4\nmaster_seed = 11\n\n\
         [model]\nfamily = \"enp\"\np = 40\nl = 1.0\nsigma = 1.0\n\n\
         [[grid]]\np = 40\nn = 160\n\n\
         [tolerances]\nrel = 1e-9\n",
    );
    let res = corrspec(&["verify", "--job", strict.to_str().unwrap()], &[]);
    assert_exit(&res, 2);
}

#[test]
fn mp_overlay_emits_monotone_cdfs() {
    let dir = TempDir::new().unwrap();
    let config = "n = 400\nseed = 2\n\n[model]\nfamily = \"pure_noise\"\np = 40\nsigma = 1.0\n";
    let out = simulate(dir.path(), config, "z.csv");
    let res = corrspec(&["mp-overlay", out.to_str().unwrap(), "--points", "64"], &[]);
    assert_exit(&res, 0);
    let text = String::from_utf8(res.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,esd,mp"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() >= 64);
    for pair in rows.windows(2) {
        assert!(pair[0][0] < pair[1][0]);
        assert!(pair[0][1] <= pair[1][1], "esd nondecreasing");
        assert!(pair[0][2] <= pair[1][2] + 1e-12, "mp nondecreasing");
    }
    assert_abs_diff_eq!(rows.last().unwrap()[1], 1.0, epsilon = 1e-12);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let res = corrspec(&["no-such-command"], &[]);
    assert_exit(&res, 1);
    let res = corrspec(&["--help"], &[]);
    assert_exit(&res, 0);
    assert!(String::from_utf8_lossy(&res.stdout).contains("simulate"));
    let res = corrspec(&["estimate", "/nonexistent/input.csv"], &[]);
    assert_exit(&res, 1);
}
