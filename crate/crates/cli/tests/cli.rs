//! End-to-end tests of the binary: exit codes, output trees, and
//! reproducibility across runs and worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn entsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entsim")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path
}

const PARITY_CFG: &str = "\
[experiment]
protocol = parity_scan_L
phi_a = 0.0, 0.5235987755982988, 1.0471975511965976, 1.5707963267948966
targets = 40

[noise]
nbar_m = 0
atom_coherence_time_us = inf
comb_coherence_time_us = inf
detect_bright_mean = 10000
detect_dark_mean = 0
rng_seed = 7
";

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn simulate_writes_identical_trees_for_identical_seeds_and_any_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), PARITY_CFG);
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    let out_c = tmp.path().join("c");

    let run_a = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    assert!(run_a.status.success(), "stderr: {}", String::from_utf8_lossy(&run_a.stderr));
    let run_b = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_b.to_str().unwrap()]);
    assert!(run_b.status.success());
    let run_c = entsim(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--out", out_c.to_str().unwrap(),
        "--workers", "4",
    ]);
    assert!(run_c.status.success());

    let tree_a = read_tree(&out_a);
    assert_eq!(tree_a, read_tree(&out_b), "same seed must give byte-identical outputs");
    assert_eq!(tree_a, read_tree(&out_c), "worker count must not change outputs");
    assert_eq!(tree_a.len(), 2, "records.csv and summary.txt");

    let out_d = tmp.path().join("d");
    let run_d = entsim(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--out", out_d.to_str().unwrap(),
        "--seed", "8",
    ]);
    assert!(run_d.status.success());
    assert!(tree_a != read_tree(&out_d), "--seed overrides the config seed");
}

#[test]
fn simulate_rejects_bad_configs_with_exit_2_and_a_line_diagnostic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[experiment]\nprotocol = psi_L\nphl_a = 0\n");
    let out = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "diagnostic names the line: {err}");
    assert!(err.contains("phl_a"), "diagnostic names the key: {err}");

    let missing = entsim(&["simulate", "--config", "/nonexistent.cfg", "--out", tmp.path().join("o2").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn exhausted_budget_writes_partial_results_and_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[experiment]\nprotocol = parity_scan_L\nphi_a = 0.0, 1.0\ntargets = 50\nbudget = 9\n\
         [noise]\nnbar_m = 0\natom_coherence_time_us = inf\ncomb_coherence_time_us = inf\n\
         detect_bright_mean = 10000\ndetect_dark_mean = 0\nrng_seed = 3\n",
    );
    let out_dir = tmp.path().join("o");
    let out = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let csv = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10, "header plus the 9 budgeted rows");
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert!(summary.contains("termination: budget exhausted"), "{summary}");
}

#[test]
fn motional_truncation_overflow_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    // Three pulses that deterministically march population onto the last
    // motional level and then demand another rung.
    let cfg = write_config(
        tmp.path(),
        "[experiment]\nprotocol = custom\ntargets = 5\nn_max = 2\n\
         pulses = atom_bsb_swap 1 0 45; atom_carrier 1 0 5; atom_bsb_swap 1 0 45\n\
         [noise]\nnbar_m = 0\natom_coherence_time_us = inf\ncomb_coherence_time_us = inf\n\
         detect_bright_mean = 10000\ndetect_dark_mean = 0\nrng_seed = 5\n",
    );
    let out = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fit_reports_the_fringe_from_simulated_records() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), PARITY_CFG);
    let out_dir = tmp.path().join("o");
    let sim = entsim(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(sim.status.success());

    let records = out_dir.join("records.csv");
    let fit = entsim(&["fit", "--records", records.to_str().unwrap(), "--qubit", "low", "--resamples", "200"]);
    assert!(fit.status.success(), "stderr: {}", String::from_utf8_lossy(&fit.stderr));
    let text = String::from_utf8_lossy(&fit.stdout);
    assert!(text.contains("points: 4"), "{text}");
    assert!(text.contains("contrast: "), "{text}");
    assert!(text.contains("bootstrap_sigma_contrast: "), "{text}");

    let fit2 = entsim(&["fit", "--records", records.to_str().unwrap(), "--qubit", "low", "--resamples", "200"]);
    assert_eq!(fit.stdout, fit2.stdout, "fit output is deterministic");

    let missing = entsim(&["fit", "--records", "/nonexistent.csv", "--qubit", "low"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn comb_checks_the_drive_arithmetic() {
    let ok = entsim(&[
        "comb", "--frep-hz", "78995979", "--faom-hz", "164997544", "--n", "10825",
        "--delta-faom-hz", "5412500", "--delta-frep-hz", "1000", "--brot-hz", "142500000000",
    ]);
    assert!(ok.status.success());
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(text.contains("raman_frequency_hz: 854801477587"), "{text}");
    assert!(text.contains("recovered_n: 10825"), "{text}");
    assert!(text.contains("n_matches: true"), "{text}");
    assert!(text.contains("rotational_consistent: true"), "{text}");

    let bad = entsim(&[
        "comb", "--frep-hz", "78995979", "--faom-hz", "164997544", "--n", "10825",
        "--delta-faom-hz", "5412600", "--delta-frep-hz", "1000", "--brot-hz", "142500000000",
    ]);
    assert_eq!(bad.status.code(), Some(2), "ambiguous knob ratio is a usage error");
}

#[test]
fn report_combines_population_and_parity_records() {
    let tmp = tempfile::tempdir().unwrap();
    let parity_cfg = write_config(tmp.path(), PARITY_CFG);
    let parity_dir = tmp.path().join("parity");
    assert!(entsim(&["simulate", "--config", parity_cfg.to_str().unwrap(), "--out", parity_dir.to_str().unwrap()])
        .status
        .success());

    let pop_body = "\
[experiment]
protocol = population_L
targets = 202

[noise]
nbar_m = 0
atom_coherence_time_us = inf
comb_coherence_time_us = inf
detect_bright_mean = 10000
detect_dark_mean = 0
rng_seed = 9
";
    let pop_cfg = tmp.path().join("pop.cfg");
    std::fs::write(&pop_cfg, pop_body).unwrap();
    let pop_dir = tmp.path().join("pop");
    assert!(entsim(&["simulate", "--config", pop_cfg.to_str().unwrap(), "--out", pop_dir.to_str().unwrap()])
        .status
        .success());

    // Concatenate the two record files under one header.
    let parity_csv = std::fs::read_to_string(parity_dir.join("records.csv")).unwrap();
    let pop_csv = std::fs::read_to_string(pop_dir.join("records.csv")).unwrap();
    let mut combined = parity_csv;
    combined.push_str(pop_csv.split_once('\n').unwrap().1);
    let combined_path = tmp.path().join("combined.csv");
    std::fs::write(&combined_path, combined).unwrap();

    let rep = entsim(&["report", "--records", combined_path.to_str().unwrap(), "--resamples", "200"]);
    assert!(rep.status.success(), "stderr: {}", String::from_utf8_lossy(&rep.stderr));
    let text = String::from_utf8_lossy(&rep.stdout);
    assert!(text.contains("qubit: low"), "{text}");
    assert!(text.contains("population S|-3/2:"), "{text}");
    assert!(text.contains("contrast: "), "{text}");
    assert!(text.contains("fidelity: "), "{text}");
    assert!(text.contains("entangled: true"), "{text}");

    let none = entsim(&["report", "--records", combined_path.to_str().unwrap(), "--resamples", "50"]);
    assert_eq!(none.status.code(), Some(2), "too few resamples is a usage error");
}
