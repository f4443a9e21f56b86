//! Shared test oracles, independent of the propagation path they validate.

use num_complex::Complex64 as C64;

use ladder_sim_core::ode::{integrate_samples, OdeOptions};
use ladder_sim_core::scheme::LadderScheme;

/// Integrate the laboratory-phase amplitude equations directly: couplings
/// carry explicit phases e^{+i delta_j t} (upward) / e^{-i delta_j t}
/// (downward) and decay sits on the diagonal as -i/(2 tau_j). This is the
/// time-dependent form of the equations of motion, solved without any frame
/// transformation, and serves as the oracle for the constant-coefficient
/// rotating-frame propagator: populations must agree because the two forms
/// differ only by per-level phase factors.
pub fn explicit_phase_populations(
    scheme: &LadderScheme,
    r: f64,
    initial: &[C64],
    times: &[f64],
) -> Vec<Vec<f64>> {
    let n = scheme.n_levels();
    let decay: Vec<f64> = scheme.levels().iter().map(|l| l.decay_rate()).collect();
    let couplings: Vec<f64> = (0..n - 1)
        .map(|j| 0.5 * scheme.local_rabi(j, r).expect("waist configured"))
        .collect();
    let detunings: Vec<f64> = scheme.transitions().iter().map(|t| t.detuning).collect();

    let max_scale = 2.0 * couplings.iter().fold(0.0f64, |m, c| m.max(*c))
        + detunings.iter().map(|d| d.abs()).sum::<f64>()
        + decay.iter().fold(0.0f64, |m, d| m.max(*d));
    let t_end = *times.last().unwrap();
    let opts = OdeOptions::default().with_rate_ceiling(max_scale, t_end.max(1e-12));

    let states = integrate_samples(
        |t, y, dy| {
            for i in 0..n {
                let mut acc = C64::new(0.0, -0.5 * decay[i]) * y[i];
                if i > 0 {
                    let phase = C64::new(0.0, -detunings[i - 1] * t).exp();
                    acc += couplings[i - 1] * phase * y[i - 1];
                }
                if i + 1 < n {
                    let phase = C64::new(0.0, detunings[i] * t).exp();
                    acc += couplings[i] * phase * y[i + 1];
                }
                dy[i] = -C64::i() * acc;
            }
        },
        initial,
        times,
        opts,
    )
    .expect("explicit-phase integration");
    states
        .into_iter()
        .map(|amps| amps.iter().map(|a| a.norm_sqr()).collect())
        .collect()
}
