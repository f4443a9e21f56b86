//! Experiment runners: dispatch a validated config to the corresponding
//! library operation and emit deterministic data files plus a run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use ladder_sim_core::effective::{adiabatic_eliminate, validity_report};
use ladder_sim_core::export::{coverage_csv, spectrum_csv, trajectory_csv};
use ladder_sim_core::propagator::rabi_trace;
use ladder_sim_core::spatial::{
    coverage_sweep_with, crosstalk_report, reference_rabi, spectrum, DEFAULT_RADIAL_NODES,
    DEFAULT_TRACE_POINTS,
};
use ladder_sim_core::units::{to_mhz, to_um, to_us, um};

use crate::config::{apply_spot, offsets_rad, t_seconds, Experiment, ExperimentConfig};
use crate::error::CliError;

/// Runtime knobs that come from the command line rather than the config.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Radial quadrature nodes for averaged quantities.
    pub nodes: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_RADIAL_NODES,
        }
    }
}

/// Files produced by a run, in emission order.
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    /// One-line human summary per experiment.
    pub summary: String,
}

/// Atomic write: the file appears complete or not at all.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn manifest(
    config: &ExperimentConfig,
    options: &RunOptions,
    outputs: &[&str],
) -> Result<String, CliError> {
    let resolved = ExperimentConfig {
        scheme: config.scheme.resolved()?,
        ..config.clone()
    };
    let doc = json!({
        "tool": "ladder-sim",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": config.experiment.name(),
        "resolved_config": resolved,
        "quadrature": {
            "radial_nodes": options.nodes,
            "trace_points": DEFAULT_TRACE_POINTS,
        },
        "outputs": outputs,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Serialize)]
struct SpectrumFit {
    flat: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_center_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fwhm_mhz: Option<f64>,
}

/// Run one experiment and write its outputs under `out_dir`. Identical
/// configs produce byte-identical files.
pub fn run(
    config: &ExperimentConfig,
    options: &RunOptions,
    out_dir: &Path,
) -> Result<RunOutput, CliError> {
    fs::create_dir_all(out_dir)?;
    let scheme = config.scheme.resolve()?;
    let mut files = Vec::new();
    let mut emit = |name: &str, contents: &str| -> Result<PathBuf, CliError> {
        let path = out_dir.join(name);
        write_atomic(&path, contents)?;
        files.push(path.clone());
        Ok(path)
    };

    let summary = match config.experiment {
        Experiment::Rabi => {
            let section = config.rabi.as_ref().unwrap();
            let scheme = apply_spot(&scheme, section.w_um)?;
            let trace = rabi_trace(
                &scheme,
                um(section.r_um),
                t_seconds(section.t_end_us),
                section.n_points,
            )?;
            emit("rabi_trace.csv", &trajectory_csv(&trace, &scheme))?;
            let peak = trace
                .target_population()
                .iter()
                .copied()
                .fold(0.0, f64::max);
            format!(
                "rabi trace: {} points to {} us, max target population {:.6}{}",
                section.n_points,
                section.t_end_us,
                peak,
                if trace.fallback {
                    " (integrator fallback)"
                } else {
                    ""
                },
            )
        }
        Experiment::Spectrum => {
            let section = config.spectrum.as_ref().unwrap();
            let scheme = apply_spot(&scheme, section.w_um)?;
            let offsets = offsets_rad(&section.offsets)?;
            let result = spectrum(
                &scheme,
                section.swept_transition - 1,
                &offsets,
                t_seconds(section.t_int_us),
                um(section.r_um),
            )?;
            emit("spectrum.csv", &spectrum_csv(&result, &scheme))?;
            let fit = match result.peak {
                Some(peak) => SpectrumFit {
                    flat: false,
                    peak_center_mhz: Some(to_mhz(peak.center)),
                    peak_height: Some(peak.height),
                    fwhm_mhz: peak.fwhm.map(to_mhz),
                },
                None => SpectrumFit {
                    flat: true,
                    peak_center_mhz: None,
                    peak_height: None,
                    fwhm_mhz: None,
                },
            };
            let fit_json =
                serde_json::to_string_pretty(&fit).map_err(|e| CliError::Config(e.to_string()))?;
            emit("spectrum_fit.json", &fit_json)?;
            match &fit.peak_center_mhz {
                Some(center) => format!(
                    "spectrum: {} points, peak center {:+.4} MHz, height {:.6}",
                    result.detunings.len(),
                    center,
                    fit.peak_height.unwrap(),
                ),
                None => format!("spectrum: {} points, flat", result.detunings.len()),
            }
        }
        Experiment::Coverage => {
            let section = config.coverage.as_ref().unwrap();
            let cloud = config.cloud.as_ref().unwrap().to_cloud()?;
            let sweep = coverage_sweep_with(
                &scheme,
                cloud.radius,
                &section.xi_values,
                options.nodes,
                DEFAULT_TRACE_POINTS,
            )?;
            emit("coverage.csv", &coverage_csv(&sweep, &scheme))?;
            format!(
                "coverage sweep over {} spot ratios: A1 from {:.6} to {:.6}",
                sweep.xi_values.len(),
                sweep.a1_numeric.first().unwrap(),
                sweep.a1_numeric.last().unwrap(),
            )
        }
        Experiment::Crosstalk => {
            let section = config.crosstalk.as_ref().unwrap();
            let scheme = apply_spot(&scheme, Some(section.w_um))?;
            let neighbor = config.cloud.as_ref().unwrap().to_cloud()?;
            let t_end = match section.t_end_us {
                Some(t) => t_seconds(t),
                None => std::f64::consts::TAU / reference_rabi(&scheme)?,
            };
            let report = crosstalk_report(
                &scheme,
                &neighbor,
                t_end,
                options.nodes,
                section.n_azimuthal,
                section.n_times,
            )?;
            let doc = json!({
                "max_population": report.max_population,
                "time_of_max_us": to_us(report.time_of_max),
                "center_offset_um": to_um(report.center_offset),
                "t_end_us": to_us(t_end),
                "scheme_fingerprint": format!("{:016x}", scheme.fingerprint()),
                "grid": {
                    "radial_nodes_um": report.radial_nodes.iter().map(|r| to_um(*r)).collect::<Vec<_>>(),
                    "radial_weights": report.radial_weights,
                    "azimuthal_nodes": report.azimuthal_nodes,
                    "time_samples": report.time_samples,
                },
            });
            let body =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
            emit("crosstalk.json", &body)?;
            format!(
                "crosstalk: max averaged neighbor population {:.3e} at {:.4} us",
                report.max_population,
                to_us(report.time_of_max),
            )
        }
        Experiment::Effective => {
            let section = config.effective.as_ref().unwrap();
            let scheme = apply_spot(&scheme, section.w_um)?;
            let eff = adiabatic_eliminate(&scheme, um(section.r_um))?;
            let validity = validity_report(&scheme, um(section.r_um))?;
            let doc = json!({
                "r_um": section.r_um,
                "reduced_rabi_mhz": to_mhz(eff.reduced_rabi),
                "three_photon_detuning_mhz": to_mhz(eff.three_photon_detuning),
                "generalized_rabi_mhz": to_mhz(eff.generalized_rabi),
                "gamma1_per_s": eff.gamma1,
                "gamma4_per_s": eff.gamma4,
                "gamma_bar_per_s": eff.gamma_bar,
                "decay_total_per_s": eff.decay_total,
                "pi_time_us": to_us(std::f64::consts::PI / eff.reduced_rabi),
                "validity": validity,
            });
            let body =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
            emit("effective.json", &body)?;
            format!(
                "effective model: reduced Rabi {:.4} MHz, decay {:.3e} 1/s, elimination valid: {}",
                to_mhz(eff.reduced_rabi),
                eff.decay_total,
                validity.elimination_valid,
            )
        }
    };

    let names: Vec<String> = files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let manifest_body = manifest(config, options, &name_refs)?;
    let manifest_path = out_dir.join("run_manifest.json");
    write_atomic(&manifest_path, &manifest_body)?;
    files.push(manifest_path);

    Ok(RunOutput { files, summary })
}

/// Preset catalogue for `ladder-sim presets`: names with headline
/// parameters, sorted, stable across runs.
pub fn list_presets() -> String {
    let mut out = String::new();
    out.push_str(
        "three_photon_rb87  5s1/2 -> 5p3/2 -> 6s1/2 -> 70p3/2, resonant; \
         Rabi/2pi = 126.5 MHz, 4 GHz, 126.5 MHz; effective 4.0006 MHz\n",
    );
    out.push_str(
        "two_photon_rb87    5s1/2 -> 6p3/2 -> 70s1/2, 1 GHz off the intermediate; \
         Rabi/2pi = 160 MHz, 50 MHz; effective 4 MHz, Stark-compensated\n",
    );
    out
}
