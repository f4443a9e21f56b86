//! Spatial physics: Gaussian beam averaging over the thermal atom position
//! distribution, the radial decay-constant profile, coverage-parameter
//! analytics, excitation spectra, and neighbor-atom crosstalk.
//!
//! Radial averages use Gauss-Laguerre quadrature after the substitution
//! s = 2 r^2 / a^2, whose weight e^{-s} matches the cloud density exactly,
//! so smooth integrands converge spectrally. Crosstalk breaks the azimuthal
//! symmetry and adds a uniform angular grid around the displaced cloud.

use rayon::prelude::*;
use serde::Serialize;

use crate::effective::{adiabatic_eliminate, analytic_population};
use crate::error::{Error, Result};
use crate::propagator::{
    build_hamiltonian, dressed_ground_state, propagate, uniform_grid, AmplitudeTrajectory,
};
use crate::scheme::{AtomCloud, LadderScheme};

/// Default number of radial quadrature nodes. Tight-focus scenarios make
/// the averaged trace mildly oscillatory across the cloud at late times;
/// 64 nodes keep the node-doubling change below 1e-6 there.
pub const DEFAULT_RADIAL_NODES: usize = 64;
/// Default number of azimuthal nodes for displaced-cloud averages.
pub const DEFAULT_AZIMUTHAL_NODES: usize = 16;
/// Default number of time samples for first-peak extraction.
pub const DEFAULT_TRACE_POINTS: usize = 1201;

// --- quadrature --------------------------------------------------------------

/// Gauss-Laguerre nodes and weights for the weight function e^{-s} on
/// [0, inf): sum_k w_k f(s_k) integrates polynomials up to degree 2n-1
/// exactly.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > 180 {
        return Err(Error::InvalidInput(format!(
            "Gauss-Laguerre order must be in 1..=180, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // initial guesses from the standard asymptotic starts
        let mut z: f64 = match i {
            0 => 3.0 / (1.0 + 2.4 * n as f64),
            1 => nodes[0] + 15.0 / (1.0 + 2.5 * n as f64),
            _ => {
                let ai = (i - 1) as f64;
                nodes[i - 1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (nodes[i - 1] - nodes[i - 2])
            }
        };
        // Newton iteration on L_n; near the root the iterates limit-cycle
        // across a couple of ulp, so a step that stops shrinking counts as
        // converged once it is already tiny
        let mut converged = false;
        let mut prev_step = f64::INFINITY;
        for _ in 0..100 {
            let (ln, ln1) = laguerre_pair(n, z);
            let deriv = n as f64 * (ln - ln1) / z;
            let step = ln / deriv;
            z -= step;
            let small = step.abs() <= 1e-14 * z.abs();
            let cycling = step.abs() >= prev_step && prev_step <= 1e-12 * z.abs();
            if small || cycling {
                converged = true;
                break;
            }
            prev_step = step.abs();
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "Laguerre root {i} of order {n} did not converge"
            )));
        }
        let lnp1 = laguerre_value(n + 1, z);
        nodes[i] = z;
        weights[i] = z / ((n as f64 + 1.0) * lnp1).powi(2);
    }
    Ok((nodes, weights))
}

/// L_n(x) and L_{n-1}(x) by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0; // L_0
    let mut cur = 1.0 - x; // L_1
    if n == 0 {
        return (1.0, f64::NAN);
    }
    for k in 1..n {
        let next = ((2.0 * k as f64 + 1.0 - x) * cur - k as f64 * prev) / (k as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn laguerre_value(n: usize, x: f64) -> f64 {
    laguerre_pair(n, x).0
}

/// Radial quadrature adapted to the atom-cloud density: nodes are radii,
/// weights sum to one under the normalized Gaussian distribution.
#[derive(Debug, Clone, Serialize)]
pub struct RadialQuadrature {
    /// Radii from the cloud center, meters, strictly increasing.
    pub nodes: Vec<f64>,
    /// Density weights, summing to 1.
    pub weights: Vec<f64>,
}

impl RadialQuadrature {
    /// Quadrature for averages \<f\> = int f(r) rho(r) 2 pi r dr over the
    /// cloud: substituting s = 2 r^2 / a^2 gives int e^{-s} f(a sqrt(s/2)) ds.
    pub fn for_cloud(cloud: &AtomCloud, n_nodes: usize) -> Result<Self> {
        let (s, w) = gauss_laguerre(n_nodes)?;
        let nodes = s.iter().map(|s| cloud.radius * (s / 2.0).sqrt()).collect();
        Ok(Self { nodes, weights: w })
    }
}

// --- densities and simple estimates -------------------------------------------

/// Transverse atom density rho(r) = 2/(pi a^2) e^{-2 r^2/a^2} about the
/// cloud center, 1/m^2; normalized so that int rho 2 pi r dr = 1.
pub fn atom_density(r: f64, cloud: &AtomCloud) -> f64 {
    let a2 = cloud.radius * cloud.radius;
    2.0 / (std::f64::consts::PI * a2) * (-2.0 * r * r / a2).exp()
}

/// Thermal atom-spot radius a = w0 sqrt(T/U0) for a trap of waist `w0` and
/// depth `trap_depth`, both temperatures in the same units.
pub fn estimate_atom_spot(w0: f64, temperature: f64, trap_depth: f64) -> Result<f64> {
    let all_positive = [w0, temperature, trap_depth]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0);
    if !all_positive {
        return Err(Error::InvalidInput(
            "atom-spot estimate needs positive waist, temperature, and trap depth".into(),
        ));
    }
    Ok(w0 * (temperature / trap_depth).sqrt())
}

// --- decay-constant profile ----------------------------------------------------

/// Waist `w` when the scheme satisfies the uniform-Rabi relation
/// w1 = w3 = sqrt(2) w2 within rounding.
fn uniform_rabi_waist(scheme: &LadderScheme) -> Option<f64> {
    let t = scheme.transitions();
    if t.len() != 3 {
        return None;
    }
    let (w1, w2, w3) = (t[0].waist?, t[1].waist?, t[2].waist?);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
    if close(w1, w3) && close(w2, w1 / std::f64::consts::SQRT_2) {
        Some(w1)
    } else {
        None
    }
}

/// Radial profile of the effective decay constant of a four-level ladder.
/// Under the uniform-Rabi waist relation the oscillation frequency is
/// position independent and only the decay grows off axis:
/// Gamma(r) = Gamma_rad(0) e^{2 r^2/w^2} + 1/tau4. For general waists the
/// local elimination rates are used instead.
pub fn gamma_profile(scheme: &LadderScheme, r: f64) -> Result<f64> {
    if scheme.n_levels() != 4 {
        return Err(Error::UnsupportedScheme(format!(
            "decay profile needs a 4-level ladder, got {}",
            scheme.n_levels()
        )));
    }
    match uniform_rabi_waist(scheme) {
        Some(w) => {
            let eff0 = adiabatic_eliminate(scheme, 0.0)?;
            let rydberg_rate = scheme.levels()[3].decay_rate();
            let radiative = eff0.decay_total - rydberg_rate;
            Ok(radiative * (2.0 * r * r / (w * w)).exp() + rydberg_rate)
        }
        None => Ok(adiabatic_eliminate(scheme, r)?.decay_total),
    }
}

// --- spatially averaged traces --------------------------------------------------

/// Effective Rabi frequency setting the oscillation time scale of a scheme:
/// the bare coupling for two levels, the far-detuned two-photon reduction
/// for three, the strong-second-step reduction for four.
pub fn reference_rabi(scheme: &LadderScheme) -> Result<f64> {
    let t = scheme.transitions();
    match scheme.n_levels() {
        2 => Ok(t[0].peak_rabi),
        3 => {
            if t[0].detuning == 0.0 {
                return Err(Error::ZeroDetuning);
            }
            Ok((t[0].peak_rabi * t[1].peak_rabi / (2.0 * t[0].detuning)).abs())
        }
        4 => {
            if t[1].peak_rabi == 0.0 {
                return Err(Error::EliminationUndefined);
            }
            Ok(t[0].peak_rabi * t[2].peak_rabi / t[1].peak_rabi)
        }
        n => Err(Error::UnsupportedScheme(format!(
            "no effective Rabi frequency defined for {n}-level ladders"
        ))),
    }
}

/// Density-weighted average of full-propagator traces over a coaxial cloud,
/// exploiting azimuthal symmetry with a 1-D radial quadrature. Populations
/// are averaged directly; the amplitude columns hold the density-weighted
/// mean amplitude, which is only meaningful for ensemble coherences.
pub fn averaged_trace(
    scheme: &LadderScheme,
    cloud: &AtomCloud,
    t_end: f64,
    n_points: usize,
    n_nodes: usize,
) -> Result<AmplitudeTrajectory> {
    if cloud.center_offset != 0.0 {
        return Err(Error::InvalidInput(
            "averaged trace needs a coaxial cloud; use the crosstalk operation off axis".into(),
        ));
    }
    if n_nodes < 8 {
        return Err(Error::InvalidInput(format!(
            "need at least 8 radial nodes, got {n_nodes}"
        )));
    }
    if !t_end.is_finite() || t_end <= 0.0 || n_points < 2 {
        return Err(Error::InvalidInput("invalid trace grid".into()));
    }
    let quad = RadialQuadrature::for_cloud(cloud, n_nodes)?;
    let times = uniform_grid(t_end, n_points);
    let traces: Vec<AmplitudeTrajectory> = quad
        .nodes
        .par_iter()
        .map(|&r| {
            let h = build_hamiltonian(scheme, r)?;
            propagate(&h, &dressed_ground_state(&h), &times)
        })
        .collect::<Result<_>>()?;

    let n = scheme.n_levels();
    let mut populations = vec![vec![0.0; n]; times.len()];
    let mut amplitudes = vec![vec![num_complex::Complex64::ZERO; n]; times.len()];
    // fixed reduction order over the node index keeps results independent of
    // the worker count
    for (trace, &w) in traces.iter().zip(&quad.weights) {
        for (i, (pop_row, amp_row)) in trace.populations.iter().zip(&trace.amplitudes).enumerate() {
            for j in 0..n {
                populations[i][j] += w * pop_row[j];
                amplitudes[i][j] += w * amp_row[j];
            }
        }
    }
    Ok(AmplitudeTrajectory {
        times,
        amplitudes,
        populations,
        fallback: traces.iter().any(|t| t.fallback),
    })
}

/// Peak of a damped oscillation sampled on a window chosen to contain its
/// first maximum: the global maximum of the samples, refined by a parabola
/// through the bracketing points. Searching for the global maximum rather
/// than the first local one keeps fast residual beats of far-detuned dressed
/// states (periods of ~1/Omega2) from masquerading as the oscillation peak.
/// Returns (position, height), or `None` when the maximum sits on the
/// window edge.
pub fn first_peak(times: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let i = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if i == 0 || i == n - 1 {
        return None;
    }
    let (pm, p0, pp) = (values[i - 1], values[i], values[i + 1]);
    let curvature = pp - 2.0 * p0 + pm;
    if curvature >= 0.0 {
        return Some((times[i], p0));
    }
    let h = times[i + 1] - times[i];
    let offset = 0.5 * h * (pm - pp) / curvature;
    let height = p0 - (pp - pm).powi(2) / (8.0 * curvature);
    Some((times[i] + offset, height))
}

/// Spatially averaged first-peak amplitude A1 of the target-level
/// oscillation, from the full propagator, with the default quadrature.
pub fn averaged_a1_numeric(scheme: &LadderScheme, cloud: &AtomCloud) -> Result<f64> {
    averaged_a1_numeric_with(scheme, cloud, DEFAULT_RADIAL_NODES, DEFAULT_TRACE_POINTS)
}

/// [`averaged_a1_numeric`] with explicit quadrature and grid sizes. The
/// search window spans two periods of the effective Rabi frequency.
pub fn averaged_a1_numeric_with(
    scheme: &LadderScheme,
    cloud: &AtomCloud,
    n_nodes: usize,
    n_points: usize,
) -> Result<f64> {
    let omega = reference_rabi(scheme)?;
    if omega <= 0.0 {
        return Err(Error::NoOscillation);
    }
    let t_end = 2.0 * std::f64::consts::TAU / omega;
    let trace = averaged_trace(scheme, cloud, t_end, n_points, n_nodes)?;
    let target = trace.target_population();
    first_peak(&trace.times, &target)
        .map(|(_, height)| height)
        .ok_or(Error::DegenerateDynamics)
}

/// Averaged first-peak amplitude from the coverage-parameter formula
/// A1 = 1 - pi/(2 Omega) [Gamma(0) xi^2/(xi^2-1) - (1/tau4)/(xi^2-1)],
/// xi = w/a. The formula integrates the linearized peak envelope against
/// the cloud density and has a pole at xi = 1; requests at or below
/// xi = 1.05 are refused in favor of the numeric average.
pub fn averaged_a1_analytic(scheme: &LadderScheme, cloud: &AtomCloud) -> Result<f64> {
    if scheme.n_levels() != 4 {
        return Err(Error::UnsupportedScheme(
            "the coverage-parameter formula applies to 4-level ladders".into(),
        ));
    }
    let w = uniform_rabi_waist(scheme).ok_or_else(|| {
        Error::OutOfValidity(
            "the coverage-parameter formula needs the uniform-Rabi waist relation".into(),
        )
    })?;
    let xi = w / cloud.radius;
    if xi <= 1.05 {
        return Err(Error::OutOfValidity(format!(
            "coverage parameter xi = {xi:.3} is at or below the pole guard 1.05; \
             use the numeric average"
        )));
    }
    let eff = adiabatic_eliminate(scheme, 0.0)?;
    if eff.reduced_rabi == 0.0 {
        return Err(Error::NoOscillation);
    }
    let rydberg_rate = scheme.levels()[3].decay_rate();
    let xi2 = xi * xi;
    let averaged_gamma = eff.decay_total * xi2 / (xi2 - 1.0) - rydberg_rate / (xi2 - 1.0);
    Ok(1.0 - std::f64::consts::PI / (2.0 * eff.reduced_rabi) * averaged_gamma)
}

/// Beam waist parameter per unit of quoted coverage spot: the reported spot
/// radius w of a focused addressing setup is the rms (Gaussian-sigma) width
/// of the Rabi-frequency profile, while the waist parameter in
/// Omega exp(-r^2/W^2) is its 1/e radius, a factor sqrt(2) larger.
pub const COVERAGE_WAIST_FACTOR: f64 = std::f64::consts::SQRT_2;

/// Apply coverage-spot waists for xi = w/a: the uniform-Rabi relation for
/// three-step ladders, equal waists otherwise, with each beam's 1/e waist
/// parameter set to [`COVERAGE_WAIST_FACTOR`] times the quoted spot xi * a.
pub fn scheme_for_coverage(scheme: &LadderScheme, xi: f64, a: f64) -> Result<LadderScheme> {
    if !(xi.is_finite() && xi > 0.0 && a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(
            "coverage needs positive xi and cloud radius".into(),
        ));
    }
    let w = COVERAGE_WAIST_FACTOR * xi * a;
    if scheme.transitions().len() == 3 {
        scheme.with_uniform_rabi_waists(w)
    } else {
        scheme.with_equal_waists(w)
    }
}

/// A1 versus the coverage parameter xi = w/a.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageSweepResult {
    pub xi_values: Vec<f64>,
    pub a1_numeric: Vec<f64>,
    /// Analytic values where the formula applies (4-level scheme, xi above
    /// the pole guard); `None` elsewhere.
    pub a1_analytic: Vec<Option<f64>>,
}

/// Sweep the coverage parameter at fixed cloud radius `a`: per xi the beam
/// waists are set to w = xi a (uniform-Rabi relation for three-step
/// ladders, equal waists otherwise) and the averaged first peak is
/// extracted numerically, with the analytic value alongside where valid.
pub fn coverage_sweep(
    scheme: &LadderScheme,
    a: f64,
    xi_values: &[f64],
) -> Result<CoverageSweepResult> {
    coverage_sweep_with(
        scheme,
        a,
        xi_values,
        DEFAULT_RADIAL_NODES,
        DEFAULT_TRACE_POINTS,
    )
}

/// [`coverage_sweep`] with explicit quadrature and grid sizes.
pub fn coverage_sweep_with(
    scheme: &LadderScheme,
    a: f64,
    xi_values: &[f64],
    n_nodes: usize,
    n_points: usize,
) -> Result<CoverageSweepResult> {
    if xi_values.is_empty() {
        return Err(Error::InvalidInput("empty coverage grid".into()));
    }
    if xi_values.iter().any(|x| !x.is_finite() || *x <= 0.0)
        || xi_values.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidInput(
            "coverage grid must be positive and ascending".into(),
        ));
    }
    let cloud = AtomCloud::coaxial(a)?;
    let per_xi: Vec<(f64, Option<f64>)> = xi_values
        .iter()
        .map(|&xi| {
            let scheme_xi = scheme_for_coverage(scheme, xi, a)?;
            let numeric = averaged_a1_numeric_with(&scheme_xi, &cloud, n_nodes, n_points)?;
            let analytic = if scheme.n_levels() == 4 {
                averaged_a1_analytic(&scheme_xi, &cloud).ok()
            } else {
                None
            };
            Ok((numeric, analytic))
        })
        .collect::<Result<_>>()?;
    Ok(CoverageSweepResult {
        xi_values: xi_values.to_vec(),
        a1_numeric: per_xi.iter().map(|p| p.0).collect(),
        a1_analytic: per_xi.iter().map(|p| p.1).collect(),
    })
}

// --- crosstalk -------------------------------------------------------------------

/// Crosstalk report: the transient excitation of a neighbor cloud displaced
/// from the beam axis, with the quadrature grid that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct CrosstalkReport {
    /// Time-maximal cloud-averaged target-level population.
    pub max_population: f64,
    /// Time of the maximum, seconds.
    pub time_of_max: f64,
    /// Neighbor displacement from the beam axis, meters.
    pub center_offset: f64,
    /// Radial quadrature about the neighbor cloud center.
    pub radial_nodes: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub azimuthal_nodes: usize,
    pub time_samples: usize,
}

/// Time-maximal averaged target-level population of a displaced neighbor
/// cloud over (0, t_end], from the full propagator. Adiabatic elimination
/// is invalid off axis, where the beam hierarchy inverts, so each node runs
/// the complete ladder dynamics on a 2-D polar grid around the neighbor
/// center; the local beam radius at radial node u and angle phi is
/// sqrt(d^2 + u^2 + 2 d u cos phi).
pub fn crosstalk(scheme: &LadderScheme, neighbor: &AtomCloud, t_end: f64) -> Result<f64> {
    crosstalk_report(
        scheme,
        neighbor,
        t_end,
        DEFAULT_RADIAL_NODES,
        DEFAULT_AZIMUTHAL_NODES,
        601,
    )
    .map(|r| r.max_population)
}

/// [`crosstalk`] with explicit grids and full metadata in the result.
pub fn crosstalk_report(
    scheme: &LadderScheme,
    neighbor: &AtomCloud,
    t_end: f64,
    n_radial: usize,
    n_azimuthal: usize,
    n_times: usize,
) -> Result<CrosstalkReport> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if n_radial < 8 || n_azimuthal < 4 || n_times < 16 {
        return Err(Error::InvalidInput("crosstalk grids too coarse".into()));
    }
    let quad = RadialQuadrature::for_cloud(neighbor, n_radial)?;
    let d = neighbor.center_offset;
    let times = uniform_grid(t_end, n_times);

    // polar grid around the neighbor center; the azimuthal average is a
    // plain mean over equally spaced angles
    let mut node_radii = Vec::with_capacity(n_radial * n_azimuthal);
    let mut node_weights = Vec::with_capacity(n_radial * n_azimuthal);
    for (&u, &w) in quad.nodes.iter().zip(&quad.weights) {
        for i in 0..n_azimuthal {
            let phi = std::f64::consts::TAU * i as f64 / n_azimuthal as f64;
            let r = (d * d + u * u + 2.0 * d * u * phi.cos()).sqrt();
            node_radii.push(r);
            node_weights.push(w / n_azimuthal as f64);
        }
    }

    let node_targets: Vec<Vec<f64>> = node_radii
        .par_iter()
        .map(|&r| {
            let h = build_hamiltonian(scheme, r)?;
            Ok(propagate(&h, &dressed_ground_state(&h), &times)?.target_population())
        })
        .collect::<Result<_>>()?;

    let mut averaged = vec![0.0; times.len()];
    for (target, &w) in node_targets.iter().zip(&node_weights) {
        for (avg, value) in averaged.iter_mut().zip(target) {
            *avg += w * value;
        }
    }
    let (idx, max) = averaged
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .expect("nonempty grid");
    Ok(CrosstalkReport {
        max_population: max,
        time_of_max: times[idx],
        center_offset: d,
        radial_nodes: quad.nodes,
        radial_weights: quad.weights,
        azimuthal_nodes: n_azimuthal,
        time_samples: n_times,
    })
}

/// The same displaced-cloud average evaluated with the reduced-model
/// population formula instead of the full propagator. Off axis the
/// elimination assumptions fail, so this is a diagnostic only: it
/// demonstrates how far the reduced model strays where its validity
/// conditions break.
pub fn crosstalk_effective_estimate(
    scheme: &LadderScheme,
    neighbor: &AtomCloud,
    t_end: f64,
    n_radial: usize,
    n_azimuthal: usize,
    n_times: usize,
) -> Result<f64> {
    let quad = RadialQuadrature::for_cloud(neighbor, n_radial)?;
    let d = neighbor.center_offset;
    let times = uniform_grid(t_end, n_times);
    let mut best = 0.0f64;
    for &t in times.iter().skip(1) {
        let mut acc = 0.0;
        for (&u, &w) in quad.nodes.iter().zip(&quad.weights) {
            for k in 0..n_azimuthal {
                let phi = std::f64::consts::TAU * k as f64 / n_azimuthal as f64;
                let r = (d * d + u * u + 2.0 * d * u * phi.cos()).sqrt();
                let eff = adiabatic_eliminate(scheme, r)?;
                acc += w / n_azimuthal as f64 * analytic_population(&eff, t);
            }
        }
        best = best.max(acc);
    }
    Ok(best)
}

// --- spectra ----------------------------------------------------------------------

/// A fitted spectral peak on the total-detuning axis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralPeak {
    /// Fitted peak center: the total detuning at maximal transfer, rad/s.
    /// This is the measured light shift of the multi-photon resonance.
    pub center: f64,
    pub height: f64,
    /// Full width at half maximum, rad/s; `None` when a half-height
    /// crossing falls outside the grid.
    pub fwhm: Option<f64>,
}

/// Excitation spectrum: terminal target-level population against the total
/// detuning.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Total detuning (sum over all transitions) per grid point, rad/s.
    pub detunings: Vec<f64>,
    /// Terminal target-level population per grid point.
    pub populations: Vec<f64>,
    /// Fitted peak; `None` when the spectrum is flat.
    pub peak: Option<SpectralPeak>,
}

/// Sweep the detuning of one transition and record the terminal
/// target-level population after an interaction time `t_int` at radius `r`.
/// `offsets` are added to the scheme's nominal detuning on the swept
/// transition (0-based index); the result is reported against the total
/// detuning so the fitted center reads directly as the light shift. The
/// peak is refined parabolically; a peak on the grid edge is an error.
pub fn spectrum(
    scheme: &LadderScheme,
    swept_transition: usize,
    offsets: &[f64],
    t_int: f64,
    r: f64,
) -> Result<SpectrumResult> {
    if swept_transition >= scheme.transitions().len() {
        return Err(Error::InvalidInput(format!(
            "transition index {swept_transition} out of range for {} transitions",
            scheme.transitions().len()
        )));
    }
    if offsets.len() < 3 || offsets.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "detuning grid must be ascending with >= 3 points".into(),
        ));
    }
    if !t_int.is_finite() || t_int <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "t_int must be positive, got {t_int}"
        )));
    }
    let nominal = scheme.transitions()[swept_transition].detuning;
    let base_total = scheme.total_detuning();
    let populations: Vec<f64> = offsets
        .par_iter()
        .map(|&offset| {
            let detuned = scheme.with_detuning(swept_transition, nominal + offset);
            let h = build_hamiltonian(&detuned, r)?;
            let trajectory = propagate(&h, &dressed_ground_state(&h), &[t_int])?;
            Ok(*trajectory.populations[0].last().unwrap())
        })
        .collect::<Result<_>>()?;
    let detunings: Vec<f64> = offsets.iter().map(|o| base_total + o).collect();

    let max = populations.iter().copied().fold(0.0, f64::max);
    if max < 1e-12 {
        return Ok(SpectrumResult {
            detunings,
            populations,
            peak: None,
        });
    }
    let imax = populations
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if imax == 0 || imax == populations.len() - 1 {
        return Err(Error::ShiftUnresolved);
    }
    let (center, height) = first_peak(
        &detunings[imax - 1..=imax + 1],
        &populations[imax - 1..=imax + 1],
    )
    .unwrap_or((detunings[imax], populations[imax]));
    let fwhm = fwhm_about(&detunings, &populations, imax, height);
    Ok(SpectrumResult {
        detunings,
        populations,
        peak: Some(SpectralPeak {
            center,
            height,
            fwhm,
        }),
    })
}

/// Linear-interpolated half-maximum crossings around the peak index.
fn fwhm_about(x: &[f64], y: &[f64], imax: usize, height: f64) -> Option<f64> {
    let half = height / 2.0;
    let mut left = None;
    for i in (1..=imax).rev() {
        if y[i - 1] <= half && y[i] > half {
            let f = (half - y[i - 1]) / (y[i] - y[i - 1]);
            left = Some(x[i - 1] + f * (x[i] - x[i - 1]));
            break;
        }
    }
    let mut right = None;
    for i in imax..x.len() - 1 {
        if y[i] > half && y[i + 1] <= half {
            let f = (y[i] - half) / (y[i] - y[i + 1]);
            right = Some(x[i] + f * (x[i + 1] - x[i]));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Some(r - l),
        _ => None,
    }
}

/// Evenly spaced detuning offsets covering [-span, span], step-aligned.
pub fn symmetric_offsets(span: f64, step: f64) -> Result<Vec<f64>> {
    if !(span.is_finite() && span > 0.0 && step.is_finite() && step > 0.0 && step <= span) {
        return Err(Error::InvalidInput(
            "offset grid needs 0 < step <= span".into(),
        ));
    }
    let n = (span / step).round() as i64;
    Ok((-n..=n).map(|i| i as f64 * step).collect())
}
