//! Deterministic data emission: CSV writers for trajectories, spectra, and
//! coverage sweeps, and serializable report objects. Identical inputs
//! produce byte-identical text.

use std::fmt::Write as _;

use crate::propagator::AmplitudeTrajectory;
use crate::scheme::LadderScheme;
use crate::spatial::{CoverageSweepResult, SpectrumResult};
use crate::units::{to_mhz, to_us};

// shortest round-trip form: parsing the field recovers the exact f64
fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        String::from("nan")
    }
}

/// Trajectory CSV: `t_us, n1, ..., nN, norm`, headed by the scheme
/// fingerprint.
pub fn trajectory_csv(trajectory: &AmplitudeTrajectory, scheme: &LadderScheme) -> String {
    let n = scheme.n_levels();
    let mut out = String::new();
    let _ = writeln!(out, "# scheme_fingerprint={:016x}", scheme.fingerprint());
    let levels: Vec<String> = (1..=n).map(|j| format!("n{j}")).collect();
    let _ = writeln!(out, "t_us,{},norm", levels.join(","));
    for (i, t) in trajectory.times.iter().enumerate() {
        let row: Vec<String> = trajectory.populations[i]
            .iter()
            .map(|p| fmt_value(*p))
            .collect();
        let _ = writeln!(
            out,
            "{:.9},{},{}",
            to_us(*t),
            row.join(","),
            fmt_value(trajectory.norm(i))
        );
    }
    out
}

/// Spectrum CSV: `detuning_mhz, n_final` on the total-detuning axis.
pub fn spectrum_csv(spectrum: &SpectrumResult, scheme: &LadderScheme) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# scheme_fingerprint={:016x}", scheme.fingerprint());
    let _ = writeln!(out, "detuning_mhz,n_final");
    for (d, p) in spectrum.detunings.iter().zip(&spectrum.populations) {
        let _ = writeln!(out, "{:.6},{}", to_mhz(*d), fmt_value(*p));
    }
    out
}

/// Coverage CSV: `xi, a1_numeric, a1_analytic`; the analytic column is empty
/// where the formula does not apply.
pub fn coverage_csv(sweep: &CoverageSweepResult, scheme: &LadderScheme) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# scheme_fingerprint={:016x}", scheme.fingerprint());
    let _ = writeln!(out, "xi,a1_numeric,a1_analytic");
    for ((xi, num), ana) in sweep
        .xi_values
        .iter()
        .zip(&sweep.a1_numeric)
        .zip(&sweep.a1_analytic)
    {
        let ana = ana.map(fmt_value).unwrap_or_default();
        let _ = writeln!(out, "{:.6},{},{}", xi, fmt_value(*num), ana);
    }
    out
}
