//! Analytic reductions of ladder dynamics: adiabatic elimination of the
//! strongly coupled intermediate pair of a four-level ladder, the analogous
//! far-detuned two-photon model, the damped-oscillation population formula,
//! and peak-height analytics with validity diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::LadderScheme;

/// Effective two-level model of a four-level ladder with a dominant second
/// step. All rates are evaluated with the local Rabi frequencies at the
/// radius passed to [`adiabatic_eliminate`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EffectiveTwoLevel {
    /// Reduced Rabi frequency Omega = Omega1 Omega3 / Omega2, rad/s.
    pub reduced_rabi: f64,
    /// Three-photon detuning delta-bar = delta1 + delta2 + delta3, rad/s.
    pub three_photon_detuning: f64,
    /// Ground-level relaxation constant gamma1-bar = gamma-bar (Omega1/Omega2)^2, 1/s.
    pub gamma1: f64,
    /// Target-level relaxation constant gamma4-bar = gamma-bar (Omega3/Omega2)^2 + 1/tau4, 1/s.
    pub gamma4: f64,
    /// Mean intermediate decay rate gamma-bar = (1/tau2 + 1/tau3)/2, 1/s.
    pub gamma_bar: f64,
    /// Oscillation decay constant Gamma = gamma-bar (Omega1^2+Omega3^2)/Omega2^2 + 1/tau4, 1/s.
    pub decay_total: f64,
    /// Generalized Rabi frequency sqrt(Omega^2 + delta-bar^2), rad/s.
    pub generalized_rabi: f64,
}

/// Far-detuned two-photon effective model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoPhotonEffective {
    /// Reduced Rabi frequency Omega = Omega1 Omega2 / (2 delta1), rad/s.
    pub reduced_rabi: f64,
    /// Differential ac Stark shift Delta = (Omega2^2 - Omega1^2)/(4 delta1), rad/s.
    pub light_shift: f64,
    /// Advisory: true when |delta1| exceeds ten times both couplings, the
    /// regime the reduction assumes. Percent-level corrections appear
    /// already below that.
    pub far_detuned: bool,
}

/// Adiabatic elimination of the intermediate pair of a four-level ladder,
/// valid when the second-step coupling dominates everything else. The
/// intermediate amplitudes are slaved to the outer ones, leaving a two-level
/// model between levels 1 and 4 whose relaxation constants carry the small
/// admixture of the short-lived intermediate states.
pub fn adiabatic_eliminate(scheme: &LadderScheme, r: f64) -> Result<EffectiveTwoLevel> {
    if scheme.n_levels() != 4 {
        return Err(Error::UnsupportedScheme(format!(
            "adiabatic elimination of the intermediate pair needs a 4-level ladder, got {}",
            scheme.n_levels()
        )));
    }
    let omega1 = scheme.local_rabi(0, r)?;
    let omega2 = scheme.local_rabi(1, r)?;
    let omega3 = scheme.local_rabi(2, r)?;
    if omega2 == 0.0 {
        return Err(Error::EliminationUndefined);
    }
    let gamma_bar = 0.5 * (scheme.levels()[1].decay_rate() + scheme.levels()[2].decay_rate());
    let rydberg_rate = scheme.levels()[3].decay_rate();
    let r1 = omega1 / omega2;
    let r3 = omega3 / omega2;
    let reduced_rabi = omega1 * r3;
    let detuning = scheme.total_detuning();
    Ok(EffectiveTwoLevel {
        reduced_rabi,
        three_photon_detuning: detuning,
        gamma1: gamma_bar * r1 * r1,
        gamma4: gamma_bar * r3 * r3 + rydberg_rate,
        gamma_bar,
        decay_total: gamma_bar * (r1 * r1 + r3 * r3) + rydberg_rate,
        generalized_rabi: (reduced_rabi * reduced_rabi + detuning * detuning).sqrt(),
    })
}

/// Target-level population of the reduced model at time `t` from the ground
/// state: n(t) = Omega^2/(2 Omega-bar^2) [1 - cos(Omega-bar t)] e^{-Gamma t/2}.
pub fn analytic_population(eff: &EffectiveTwoLevel, t: f64) -> f64 {
    let gen = eff.generalized_rabi;
    if gen == 0.0 {
        return 0.0;
    }
    let contrast = eff.reduced_rabi * eff.reduced_rabi / (2.0 * gen * gen);
    contrast * (1.0 - (gen * t).cos()) * (-eff.decay_total * t / 2.0).exp()
}

/// Far-detuned two-photon reduction: reduced Rabi frequency and differential
/// light shift of the outer levels. Requires a nonzero single-photon
/// detuning; the model assumes |delta1| well above both Rabi frequencies.
pub fn two_photon_effective(omega1: f64, omega2: f64, delta1: f64) -> Result<TwoPhotonEffective> {
    if delta1 == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    Ok(TwoPhotonEffective {
        reduced_rabi: omega1 * omega2 / (2.0 * delta1),
        light_shift: (omega2 * omega2 - omega1 * omega1) / (4.0 * delta1),
        far_detuned: delta1.abs() > 10.0 * omega1.max(omega2),
    })
}

/// Height of the first oscillation peak at resonance, the exact envelope
/// value e^{-Gamma pi/(2 Omega)} at t = pi/Omega.
pub fn first_peak_height(eff: &EffectiveTwoLevel) -> Result<f64> {
    if eff.reduced_rabi == 0.0 {
        return Err(Error::NoOscillation);
    }
    Ok((-eff.decay_total * std::f64::consts::PI / (2.0 * eff.reduced_rabi)).exp())
}

/// Linearized form 1 - pi Gamma/(2 Omega) of [`first_peak_height`], the
/// expansion the coverage-parameter formula is built on.
pub fn first_peak_height_linearized(eff: &EffectiveTwoLevel) -> Result<f64> {
    if eff.reduced_rabi == 0.0 {
        return Err(Error::NoOscillation);
    }
    Ok(1.0 - eff.decay_total * std::f64::consts::PI / (2.0 * eff.reduced_rabi))
}

/// Elimination-validity diagnostics for a four-level ladder at radius `r`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ValidityReport {
    /// Omega1(r)/Omega2(r).
    pub ratio_omega1: f64,
    /// Omega3(r)/Omega2(r).
    pub ratio_omega3: f64,
    /// Radiative part of gamma1-bar over the reduced Rabi frequency.
    pub ratio_gamma1: f64,
    /// Radiative part of gamma4-bar over the reduced Rabi frequency.
    pub ratio_gamma4: f64,
    /// |delta-bar| / Omega2(r).
    pub ratio_detuning: f64,
    /// True when every ratio is below 0.1.
    pub elimination_valid: bool,
}

/// Evaluate the smallness ratios underpinning adiabatic elimination. The
/// relaxation ratios use only the intermediate-state admixture (the target
/// level's own radiative rate does not enter the elimination argument);
/// ratios with a vanishing numerator count as zero even when the reduced
/// Rabi frequency vanishes with them.
pub fn validity_report(scheme: &LadderScheme, r: f64) -> Result<ValidityReport> {
    if scheme.n_levels() != 4 {
        return Err(Error::UnsupportedScheme(format!(
            "validity diagnostics need a 4-level ladder, got {}",
            scheme.n_levels()
        )));
    }
    let omega1 = scheme.local_rabi(0, r)?;
    let omega2 = scheme.local_rabi(1, r)?;
    let omega3 = scheme.local_rabi(2, r)?;
    let gamma_bar = 0.5 * (scheme.levels()[1].decay_rate() + scheme.levels()[2].decay_rate());
    let reduced = if omega2 > 0.0 {
        omega1 * omega3 / omega2
    } else {
        0.0
    };
    let ratio = |num: f64, den: f64| -> f64 {
        if num == 0.0 {
            0.0
        } else if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    };
    let g1 = if omega2 > 0.0 {
        gamma_bar * (omega1 / omega2).powi(2)
    } else {
        f64::INFINITY
    };
    let g4 = if omega2 > 0.0 {
        gamma_bar * (omega3 / omega2).powi(2)
    } else {
        f64::INFINITY
    };
    let report = ValidityReport {
        ratio_omega1: ratio(omega1, omega2),
        ratio_omega3: ratio(omega3, omega2),
        ratio_gamma1: ratio(g1, reduced),
        ratio_gamma4: ratio(g4, reduced),
        ratio_detuning: ratio(scheme.total_detuning().abs(), omega2),
        elimination_valid: false,
    };
    let valid = [
        report.ratio_omega1,
        report.ratio_omega3,
        report.ratio_gamma1,
        report.ratio_gamma4,
        report.ratio_detuning,
    ]
    .iter()
    .all(|v| *v < 0.1);
    Ok(ValidityReport {
        elimination_valid: valid,
        ..report
    })
}
