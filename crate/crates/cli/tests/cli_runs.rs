//! End-to-end runs of the ladder-sim binary: output contracts, byte-level
//! determinism, manifest round-trips, and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_ladder-sim")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ladder-sim-it-{}-{tag}", std::process::id()));
    fs::remove_dir_all(&dir).ok();
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(subcommand: &str, config: &Path, out: &Path) -> Output {
    let output = Command::new(binary())
        .args([subcommand, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "run failed: {}\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn presets_listing() {
    let output = Command::new(binary()).arg("presets").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("three_photon_rb87"));
    assert!(text.contains("two_photon_rb87"));
    let again = Command::new(binary()).arg("presets").output().unwrap();
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn rabi_run_is_deterministic_and_peaks_correctly() {
    let dir = scratch("rabi");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "rabi", "scheme": "three_photon_rb87",
            "rabi": {"t_end_us": 0.25, "n_points": 2001}}"#,
    )
    .unwrap();
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    run_ok("rabi", &config_path, &out_a);
    run_ok("rabi", &config_path, &out_b);

    let csv_a = fs::read_to_string(out_a.join("rabi_trace.csv")).unwrap();
    let csv_b = fs::read_to_string(out_b.join("rabi_trace.csv")).unwrap();
    assert_eq!(
        csv_a, csv_b,
        "identical configs must emit byte-identical data"
    );
    let manifest_a = fs::read_to_string(out_a.join("run_manifest.json")).unwrap();
    let manifest_b = fs::read_to_string(out_b.join("run_manifest.json")).unwrap();
    assert_eq!(manifest_a, manifest_b);

    // column contract and the physics headline: n4 peaks near 0.9957 at
    // 0.125 us
    let mut lines = csv_a.lines();
    assert!(lines.next().unwrap().starts_with("# scheme_fingerprint="));
    assert_eq!(lines.next().unwrap(), "t_us,n1,n2,n3,n4,norm");
    let mut best = (0.0f64, 0.0f64);
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
        if fields[4] > best.1 {
            best = (fields[0], fields[4]);
        }
    }
    assert!((best.1 - 0.9957).abs() < 2e-3, "peak n4 {}", best.1);
    assert!(
        (best.0 - 0.125).abs() < 0.125 * 0.01,
        "peak time {} us",
        best.0
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn spectrum_run_finds_the_stark_shift() {
    let dir = scratch("spectrum");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "spectrum", "scheme": "two_photon_rb87",
            "spectrum": {"swept_transition": 2,
                         "offsets": {"span_mhz": 30.0, "step_mhz": 0.2},
                         "t_int_us": 0.125}}"#,
    )
    .unwrap();
    let out = dir.join("out");
    run_ok("spectrum", &config_path, &out);

    let csv = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "detuning_mhz,n_final");
    assert_eq!(csv.lines().count(), 2 + 301);

    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("spectrum_fit.json")).unwrap()).unwrap();
    let center = fit["peak_center_mhz"].as_f64().unwrap();
    assert!(
        ((center - (-5.775)) / 5.775).abs() < 0.10,
        "peak center {center} MHz vs expected -5.775"
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn coverage_single_entry_matches_library() {
    let dir = scratch("coverage");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "coverage", "scheme": "three_photon_rb87",
            "cloud": {"radius_um": 1.0},
            "coverage": {"xi_values": [2.0]}}"#,
    )
    .unwrap();
    let out = dir.join("out");
    run_ok("coverage", &config_path, &out);

    let csv = fs::read_to_string(out.join("coverage.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "xi,a1_numeric,a1_analytic");
    assert_eq!(lines.len(), 3);
    let fields: Vec<&str> = lines[2].split(',').collect();
    let a1: f64 = fields[1].parse().unwrap();

    let scheme = ladder_sim_core::scheme::preset_three_photon();
    let coverage_scheme =
        ladder_sim_core::spatial::scheme_for_coverage(&scheme, 2.0, 1e-6).unwrap();
    let cloud = ladder_sim_core::scheme::AtomCloud::coaxial(1e-6).unwrap();
    let direct = ladder_sim_core::spatial::averaged_a1_numeric(&coverage_scheme, &cloud).unwrap();
    assert_eq!(
        a1, direct,
        "CSV value must equal the library result exactly"
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn manifest_round_trip_reproduces_outputs() {
    let dir = scratch("roundtrip");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "effective", "scheme": "three_photon_rb87",
            "effective": {"r_um": 0.5, "w_um": 2.0}}"#,
    )
    .unwrap();
    let out_a = dir.join("a");
    run_ok("effective", &config_path, &out_a);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("run_manifest.json")).unwrap())
            .unwrap();
    let resolved = &manifest["resolved_config"];
    let config2_path = dir.join("config2.json");
    fs::write(
        &config2_path,
        serde_json::to_string_pretty(resolved).unwrap(),
    )
    .unwrap();
    let out_b = dir.join("b");
    run_ok("effective", &config2_path, &out_b);

    let report_a = fs::read_to_string(out_a.join("effective.json")).unwrap();
    let report_b = fs::read_to_string(out_b.join("effective.json")).unwrap();
    assert_eq!(report_a, report_b, "resolved config must reproduce the run");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn crosstalk_run_reports_value_and_grid() {
    let dir = scratch("crosstalk");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "crosstalk", "scheme": "three_photon_rb87",
            "cloud": {"radius_um": 1.0, "center_offset_um": 8.0},
            "crosstalk": {"w_um": 2.0, "t_end_us": 0.25, "n_times": 201}}"#,
    )
    .unwrap();
    let out = dir.join("out");
    let output = run_ok("crosstalk", &config_path, &out);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(
        stdout.contains("crosstalk"),
        "summary line expected, got: {stdout}"
    );

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("crosstalk.json")).unwrap()).unwrap();
    assert!(doc["max_population"].as_f64().unwrap() >= 0.0);
    assert_eq!(doc["grid"]["azimuthal_nodes"].as_u64().unwrap(), 16);
    assert!(doc["grid"]["radial_nodes_um"].as_array().unwrap().len() >= 8);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn error_paths_and_exit_codes() {
    let dir = scratch("errors");

    // malformed document: exit 2 with a machine-readable object on stderr
    let bad = dir.join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let output = Command::new(binary())
        .args(["rabi", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&output.stderr).expect("stderr carries an error object");
    assert_eq!(err["error"]["kind"], "config");

    // invalid physics value: exit 2, field named
    let negative = dir.join("negative.json");
    fs::write(
        &negative,
        r#"{"experiment": "rabi", "scheme": "three_photon_rb87",
            "rabi": {"t_end_us": -1.0, "n_points": 101}}"#,
    )
    .unwrap();
    let output = Command::new(binary())
        .args(["rabi", "--config"])
        .arg(&negative)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("t_end_us"));

    // subcommand/config mismatch: exit 2
    let rabi = dir.join("rabi.json");
    fs::write(
        &rabi,
        r#"{"experiment": "rabi", "scheme": "three_photon_rb87",
            "rabi": {"t_end_us": 1.0, "n_points": 11}}"#,
    )
    .unwrap();
    let output = Command::new(binary())
        .args(["spectrum", "--config"])
        .arg(&rabi)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // validity refusal: the reduced model needs a 4-level ladder: exit 4
    let unsupported = dir.join("unsupported.json");
    fs::write(
        &unsupported,
        r#"{"experiment": "effective", "scheme": "two_photon_rb87",
            "effective": {"r_um": 0.0}}"#,
    )
    .unwrap();
    let output = Command::new(binary())
        .args(["effective", "--config"])
        .arg(&unsupported)
        .arg("--out")
        .arg(dir.join("x"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&output.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "validity");

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_dir_from_environment() {
    let dir = scratch("envdir");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "effective", "scheme": "three_photon_rb87",
            "effective": {"r_um": 0.0}}"#,
    )
    .unwrap();
    let out = dir.join("from-env");
    let output = Command::new(binary())
        .args(["effective", "--config"])
        .arg(&config_path)
        .env("LADDER_SIM_OUT", &out)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(out.join("effective.json").exists());
    assert!(out.join("run_manifest.json").exists());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = scratch("threads");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"experiment": "spectrum", "scheme": "three_photon_rb87",
            "spectrum": {"swept_transition": 3,
                         "offsets": {"span_mhz": 10.0, "step_mhz": 0.5},
                         "t_int_us": 0.125}}"#,
    )
    .unwrap();
    let out_one = dir.join("one");
    let out_many = dir.join("many");
    let run_with = |threads: &str, out: &Path| {
        let output = Command::new(binary())
            .args(["spectrum", "--config"])
            .arg(&config_path)
            .args(["--out"])
            .arg(out)
            .args(["--threads", threads])
            .output()
            .unwrap();
        assert!(
            output.status.success(),
            "{}",
            String::from_utf8_lossy(&output.stderr)
        );
    };
    run_with("1", &out_one);
    run_with("4", &out_many);
    assert_eq!(
        fs::read_to_string(out_one.join("spectrum.csv")).unwrap(),
        fs::read_to_string(out_many.join("spectrum.csv")).unwrap(),
        "results must not depend on the worker count"
    );
    fs::remove_dir_all(&dir).ok();
}
