//! Excitation-ladder descriptions: levels, transitions, atom clouds, and the
//! two built-in rubidium schemes.
//!
//! A ladder couples N levels by N-1 lasers, each described by its peak Rabi
//! frequency, signed detuning, and optionally a Gaussian beam waist (the
//! 1/e^2 radius of the Rabi-frequency profile). Schemes are immutable after
//! construction and safe to share across worker threads; the `with_*`
//! builders return modified copies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{mhz, ns, to_mhz, to_um, to_us, um, us};

/// One atomic level of the ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    /// Radiative lifetime in seconds; `f64::INFINITY` means no decay.
    pub lifetime: f64,
}

impl Level {
    pub fn new(label: impl Into<String>, lifetime: f64) -> Self {
        Self {
            label: label.into(),
            lifetime,
        }
    }

    /// Amplitude decay enters the Hamiltonian as -i/(2 tau); an infinite
    /// lifetime contributes nothing.
    pub fn decay_rate(&self) -> f64 {
        if self.lifetime.is_finite() {
            1.0 / self.lifetime
        } else {
            0.0
        }
    }
}

/// One laser coupling between adjacent levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    /// Peak Rabi frequency Omega at the beam center, rad/s.
    pub peak_rabi: f64,
    /// Signed single-photon detuning delta, rad/s.
    pub detuning: f64,
    /// 1/e^2 radius of the Rabi-frequency profile, meters. `None` models a
    /// spatially uniform (wide) beam.
    pub waist: Option<f64>,
}

impl Transition {
    pub fn new(peak_rabi: f64, detuning: f64, waist: Option<f64>) -> Self {
        Self {
            peak_rabi,
            detuning,
            waist,
        }
    }

    /// Local Rabi frequency Omega(r) = Omega exp(-r^2/w^2) at transverse
    /// radius `r` from the beam axis. Uniform beams are position
    /// independent; evaluating an off-axis point without a waist is an
    /// error, except at r = 0 where the profile factor is exactly 1.
    pub fn local_rabi(&self, r: f64, index: usize) -> Result<f64> {
        if r == 0.0 {
            return Ok(self.peak_rabi);
        }
        match self.waist {
            Some(w) => Ok(self.peak_rabi * (-r * r / (w * w)).exp()),
            None => Err(Error::MissingWaist { transition: index }),
        }
    }
}

/// An N-level excitation ladder: level 1 is the initial state, level N the
/// target (Rydberg) state.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderScheme {
    levels: Vec<Level>,
    transitions: Vec<Transition>,
}

impl LadderScheme {
    /// Validated construction. Requires N >= 2 levels, exactly N-1
    /// transitions, positive (or infinite) lifetimes, nonnegative Rabi
    /// frequencies, and positive waists where set.
    pub fn new(levels: Vec<Level>, transitions: Vec<Transition>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidScheme(format!(
                "need at least 2 levels, got {}",
                levels.len()
            )));
        }
        if transitions.len() != levels.len() - 1 {
            return Err(Error::InvalidScheme(format!(
                "{} levels require {} transitions, got {}",
                levels.len(),
                levels.len() - 1,
                transitions.len()
            )));
        }
        for (i, level) in levels.iter().enumerate() {
            if level.lifetime.is_nan() || level.lifetime <= 0.0 {
                return Err(Error::InvalidScheme(format!(
                    "level {} ({}) has non-positive lifetime {}",
                    i + 1,
                    level.label,
                    level.lifetime
                )));
            }
        }
        for (i, tr) in transitions.iter().enumerate() {
            if !tr.peak_rabi.is_finite() || tr.peak_rabi < 0.0 {
                return Err(Error::InvalidScheme(format!(
                    "transition {} has invalid Rabi frequency {}",
                    i + 1,
                    tr.peak_rabi
                )));
            }
            if !tr.detuning.is_finite() {
                return Err(Error::InvalidScheme(format!(
                    "transition {} has non-finite detuning",
                    i + 1
                )));
            }
            if let Some(w) = tr.waist {
                if !w.is_finite() || w <= 0.0 {
                    return Err(Error::InvalidScheme(format!(
                        "transition {} has non-positive waist {}",
                        i + 1,
                        w
                    )));
                }
            }
        }
        Ok(Self {
            levels,
            transitions,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Sum of detunings accumulated below level `j` (0-based); this is the
    /// rotating-frame diagonal energy of level `j` up to the decay term.
    pub fn cumulative_detuning(&self, j: usize) -> f64 {
        self.transitions[..j].iter().map(|t| t.detuning).sum()
    }

    /// Total multi-photon detuning, the sum over all transitions.
    pub fn total_detuning(&self) -> f64 {
        self.cumulative_detuning(self.transitions.len())
    }

    pub fn max_rabi(&self) -> f64 {
        self.transitions.iter().fold(0.0, |m, t| m.max(t.peak_rabi))
    }

    /// Local Rabi frequency of transition `index` (0-based) at radius `r`.
    pub fn local_rabi(&self, index: usize, r: f64) -> Result<f64> {
        self.transitions[index].local_rabi(r, index + 1)
    }

    /// Copy with the detuning of transition `index` (0-based) replaced.
    pub fn with_detuning(&self, index: usize, detuning: f64) -> Self {
        let mut out = self.clone();
        out.transitions[index].detuning = detuning;
        out
    }

    /// Copy with the peak Rabi frequency of transition `index` replaced.
    pub fn with_peak_rabi(&self, index: usize, peak_rabi: f64) -> Self {
        let mut out = self.clone();
        out.transitions[index].peak_rabi = peak_rabi;
        out
    }

    /// Copy with all waists replaced by the given values.
    pub fn with_waists(&self, waists: &[Option<f64>]) -> Result<Self> {
        if waists.len() != self.transitions.len() {
            return Err(Error::InvalidScheme(format!(
                "expected {} waists, got {}",
                self.transitions.len(),
                waists.len()
            )));
        }
        let mut out = self.clone();
        for (tr, w) in out.transitions.iter_mut().zip(waists) {
            tr.waist = *w;
        }
        LadderScheme::new(out.levels, out.transitions)
    }

    /// Copy with the three-step waist relation applied (see
    /// [`waists_for_uniform_rabi`]).
    pub fn with_uniform_rabi_waists(&self, w: f64) -> Result<Self> {
        let (w1, w2, w3) = waists_for_uniform_rabi(self, w)?;
        self.with_waists(&[Some(w1), Some(w2), Some(w3)])
    }

    /// Copy with every beam set to the same waist `w`.
    pub fn with_equal_waists(&self, w: f64) -> Result<Self> {
        self.with_waists(&vec![Some(w); self.transitions.len()])
    }

    /// Stable hash of the physical parameters, used to tag exported data.
    pub fn fingerprint(&self) -> u64 {
        let mut canon = String::new();
        for level in &self.levels {
            canon.push_str(&format!("L:{}:{:e};", level.label, level.lifetime));
        }
        for tr in &self.transitions {
            canon.push_str(&format!(
                "T:{:e}:{:e}:{};",
                tr.peak_rabi,
                tr.detuning,
                tr.waist
                    .map(|w| format!("{w:e}"))
                    .unwrap_or_else(|| "inf".into())
            ));
        }
        fnv1a(canon.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Transverse position distribution of a trapped atom, a normalized Gaussian
/// of 1/e^2 probability radius `radius`. `center_offset` displaces the cloud
/// center from the common beam axis (zero for the addressed atom, the array
/// spacing for a neighbor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCloud {
    /// 1/e^2 probability radius a, meters.
    pub radius: f64,
    /// Transverse displacement of the cloud center from the beam axis, meters.
    pub center_offset: f64,
}

impl AtomCloud {
    pub fn new(radius: f64, center_offset: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "cloud radius must be positive, got {radius}"
            )));
        }
        if !center_offset.is_finite() || center_offset < 0.0 {
            return Err(Error::InvalidInput(format!(
                "cloud center offset must be nonnegative, got {center_offset}"
            )));
        }
        Ok(Self {
            radius,
            center_offset,
        })
    }

    /// Coaxial cloud of radius `a`.
    pub fn coaxial(a: f64) -> Result<Self> {
        Self::new(a, 0.0)
    }
}

/// Waists that make the three-step effective Rabi frequency position
/// independent: with w1 = w3 = sqrt(2) w2 = w the product profile of steps 1
/// and 3 matches the step-2 profile, so Omega(r) = Omega1 Omega3 / Omega2 is
/// constant across the beam.
pub fn waists_for_uniform_rabi(scheme: &LadderScheme, w: f64) -> Result<(f64, f64, f64)> {
    if scheme.transitions.len() != 3 {
        return Err(Error::UnsupportedScheme(format!(
            "position-independent waist relation needs exactly 3 transitions, scheme has {}",
            scheme.transitions.len()
        )));
    }
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "waist must be positive, got {w}"
        )));
    }
    Ok((w, w / std::f64::consts::SQRT_2, w))
}

/// Four-level rubidium ladder 5s1/2 -> 5p3/2 -> 6s1/2 -> 70p3/2 with a
/// strong second step: Omega/(2 pi) = 126.5 MHz, 4 GHz, 126.5 MHz, all
/// lasers resonant. The intermediate lifetimes default to the standard
/// rubidium values tau(5p3/2) = 26.2 ns and tau(6s1/2) = 45 ns; the Rydberg
/// lifetime is tau(70p3/2) = 190 us at room temperature. Waists are unset
/// (wide beams); supply them with [`LadderScheme::with_uniform_rabi_waists`]
/// or through configuration.
pub fn preset_three_photon() -> LadderScheme {
    LadderScheme::new(
        vec![
            Level::new("5s1/2", f64::INFINITY),
            Level::new("5p3/2", ns(26.2)),
            Level::new("6s1/2", ns(45.0)),
            Level::new("70p3/2", us(190.0)),
        ],
        vec![
            Transition::new(mhz(126.5), 0.0, None),
            Transition::new(mhz(4000.0), 0.0, None),
            Transition::new(mhz(126.5), 0.0, None),
        ],
    )
    .expect("three-photon preset is structurally valid")
}

/// Three-level rubidium ladder 5s1/2 -> 6p3/2 -> 70s1/2 driven far off the
/// intermediate resonance: Omega1/(2 pi) = 160 MHz, Omega2/(2 pi) = 50 MHz,
/// delta1/(2 pi) = 1 GHz. The second-step detuning is tuned to the
/// light-shifted two-photon resonance, delta2 = -delta1 + (Omega2^2 -
/// Omega1^2)/(4 delta1), the operating point of a calibrated experiment;
/// the bare two-photon resonance would leave an effective detuning equal to
/// the differential ac Stark shift and collapse the oscillation contrast.
/// Lifetimes: tau(6p3/2) = 120 ns, tau(70s1/2) = 152 us.
pub fn preset_two_photon() -> LadderScheme {
    let omega1 = mhz(160.0);
    let omega2 = mhz(50.0);
    let delta1 = mhz(1000.0);
    let light_shift = (omega2 * omega2 - omega1 * omega1) / (4.0 * delta1);
    LadderScheme::new(
        vec![
            Level::new("5s1/2", f64::INFINITY),
            Level::new("6p3/2", ns(120.0)),
            Level::new("70s1/2", us(152.0)),
        ],
        vec![
            Transition::new(omega1, delta1, None),
            Transition::new(omega2, -delta1 + light_shift, None),
        ],
    )
    .expect("two-photon preset is structurally valid")
}

/// Preset lookup by configuration name.
pub fn preset_by_name(name: &str) -> Option<LadderScheme> {
    match name {
        "three_photon_rb87" => Some(preset_three_photon()),
        "two_photon_rb87" => Some(preset_two_photon()),
        _ => None,
    }
}

/// Available preset names, sorted.
pub fn preset_names() -> &'static [&'static str] {
    &["three_photon_rb87", "two_photon_rb87"]
}

// --- JSON configuration form ------------------------------------------------
//
// Schemes are ingested from documents of the shape
//   {"levels":[{"label":"5s1/2","lifetime_us":"inf"}, ...],
//    "transitions":[{"rabi_mhz":126.5,"detuning_mhz":0.0,"waist_um":1.0}, ...]}
// with unknown fields rejected.

/// Lifetime field of the config format: microseconds or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LifetimeConfig {
    Finite(f64),
    Keyword(String),
}

impl LifetimeConfig {
    fn to_seconds(&self) -> Result<f64> {
        match self {
            LifetimeConfig::Finite(v) => Ok(us(*v)),
            LifetimeConfig::Keyword(s) if s == "inf" => Ok(f64::INFINITY),
            LifetimeConfig::Keyword(s) => Err(Error::Config(format!(
                "lifetime_us must be a number or \"inf\", got \"{s}\""
            ))),
        }
    }

    fn from_seconds(t: f64) -> Self {
        if t.is_finite() {
            LifetimeConfig::Finite(to_us(t))
        } else {
            LifetimeConfig::Keyword("inf".into())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub label: String,
    pub lifetime_us: LifetimeConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    pub rabi_mhz: f64,
    pub detuning_mhz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waist_um: Option<f64>,
}

/// Serialized form of a [`LadderScheme`] with boundary units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub levels: Vec<LevelConfig>,
    pub transitions: Vec<TransitionConfig>,
}

impl SchemeConfig {
    pub fn to_scheme(&self) -> Result<LadderScheme> {
        let levels = self
            .levels
            .iter()
            .map(|l| Ok(Level::new(l.label.clone(), l.lifetime_us.to_seconds()?)))
            .collect::<Result<Vec<_>>>()?;
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition::new(mhz(t.rabi_mhz), mhz(t.detuning_mhz), t.waist_um.map(um)))
            .collect();
        LadderScheme::new(levels, transitions)
    }

    pub fn from_scheme(scheme: &LadderScheme) -> Self {
        SchemeConfig {
            levels: scheme
                .levels()
                .iter()
                .map(|l| LevelConfig {
                    label: l.label.clone(),
                    lifetime_us: LifetimeConfig::from_seconds(l.lifetime),
                })
                .collect(),
            transitions: scheme
                .transitions()
                .iter()
                .map(|t| TransitionConfig {
                    rabi_mhz: to_mhz(t.peak_rabi),
                    detuning_mhz: to_mhz(t.detuning),
                    waist_um: t.waist.map(to_um),
                })
                .collect(),
        }
    }
}

/// Parse a scheme from its JSON configuration document.
pub fn scheme_from_json(document: &str) -> Result<LadderScheme> {
    let config: SchemeConfig =
        serde_json::from_str(document).map_err(|e| Error::Config(e.to_string()))?;
    config.to_scheme()
}

/// Serialize a scheme to its JSON configuration document.
pub fn scheme_to_json(scheme: &LadderScheme) -> String {
    serde_json::to_string_pretty(&SchemeConfig::from_scheme(scheme))
        .expect("scheme config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::TAU;
    use approx::assert_relative_eq;

    #[test]
    fn three_photon_preset_values() {
        let s = preset_three_photon();
        assert_eq!(s.n_levels(), 4);
        assert_relative_eq!(to_mhz(s.transitions()[0].peak_rabi), 126.5);
        assert_relative_eq!(to_mhz(s.transitions()[1].peak_rabi), 4000.0);
        assert_relative_eq!(to_mhz(s.transitions()[2].peak_rabi), 126.5);
        assert_relative_eq!(s.levels()[3].lifetime, 190e-6);
        assert_eq!(s.total_detuning(), 0.0);
        // derived three-photon Rabi frequency 126.5^2/4000 = 4.0006 MHz
        let omega = s.transitions()[0].peak_rabi * s.transitions()[2].peak_rabi
            / s.transitions()[1].peak_rabi;
        assert_relative_eq!(to_mhz(omega), 126.5 * 126.5 / 4000.0, max_relative = 1e-12);
        assert_relative_eq!(to_mhz(omega), 4.0006, max_relative = 1e-4);
    }

    #[test]
    fn two_photon_preset_values() {
        let s = preset_two_photon();
        assert_eq!(s.n_levels(), 3);
        assert_relative_eq!(to_mhz(s.transitions()[0].peak_rabi), 160.0);
        assert_relative_eq!(to_mhz(s.transitions()[1].peak_rabi), 50.0);
        assert_relative_eq!(s.levels()[2].lifetime, 152e-6);
        // derived two-photon Rabi frequency 160*50/(2*1000) = 4 MHz
        let omega = s.transitions()[0].peak_rabi * s.transitions()[1].peak_rabi
            / (2.0 * s.transitions()[0].detuning);
        assert_relative_eq!(to_mhz(omega), 4.0, max_relative = 1e-12);
        // the drive sits on the light-shifted resonance
        assert_relative_eq!(to_mhz(s.total_detuning()), -5.775, max_relative = 1e-12);
    }

    #[test]
    fn uniform_rabi_waists() {
        let s = preset_three_photon();
        let (w1, w2, w3) = waists_for_uniform_rabi(&s, 1e-6).unwrap();
        assert_eq!(w1, 1e-6);
        assert_eq!(w3, 1e-6);
        assert_relative_eq!(w2, 0.7071e-6, max_relative = 1e-4);
        let (w1, w2, _) = waists_for_uniform_rabi(&s, 2e-6).unwrap();
        assert_eq!(w1, 2e-6);
        assert_relative_eq!(w2, 1.4142e-6, max_relative = 1e-4);
    }

    #[test]
    fn uniform_rabi_waists_rejects_non_three_step() {
        let s = preset_two_photon();
        assert!(matches!(
            waists_for_uniform_rabi(&s, 1e-6),
            Err(Error::UnsupportedScheme(_))
        ));
    }

    #[test]
    fn uniform_rabi_profile_is_position_independent() {
        // Omega1(r) Omega3(r) / Omega2(r) must equal its on-axis value at any r.
        let s = preset_three_photon()
            .with_uniform_rabi_waists(1e-6)
            .unwrap();
        let on_axis = s.local_rabi(0, 0.0).unwrap() * s.local_rabi(2, 0.0).unwrap()
            / s.local_rabi(1, 0.0).unwrap();
        for r in [0.5e-6, 1e-6, 2e-6] {
            let local = s.local_rabi(0, r).unwrap() * s.local_rabi(2, r).unwrap()
                / s.local_rabi(1, r).unwrap();
            assert_relative_eq!(local, on_axis, max_relative = 1e-14);
        }
        // pointwise identity of the profiles themselves
        for r in [0.1e-6, 0.7e-6, 1.3e-6, 3e-6] {
            let p13 = (s.local_rabi(0, r).unwrap() / s.local_rabi(0, 0.0).unwrap())
                * (s.local_rabi(2, r).unwrap() / s.local_rabi(2, 0.0).unwrap());
            let p2 = s.local_rabi(1, r).unwrap() / s.local_rabi(1, 0.0).unwrap();
            assert_relative_eq!(p13, p2, max_relative = 1e-14);
        }
    }

    #[test]
    fn construction_rejects_mismatched_counts() {
        let levels = vec![Level::new("a", f64::INFINITY), Level::new("b", 1e-6)];
        let transitions = vec![
            Transition::new(mhz(1.0), 0.0, None),
            Transition::new(mhz(1.0), 0.0, None),
        ];
        assert!(matches!(
            LadderScheme::new(levels, transitions),
            Err(Error::InvalidScheme(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_values() {
        let mk = |lifetime: f64, rabi: f64, waist: Option<f64>| {
            LadderScheme::new(
                vec![Level::new("a", f64::INFINITY), Level::new("b", lifetime)],
                vec![Transition::new(rabi, 0.0, waist)],
            )
        };
        assert!(mk(-1.0, mhz(1.0), None).is_err());
        assert!(mk(0.0, mhz(1.0), None).is_err());
        assert!(mk(1e-6, -mhz(1.0), None).is_err());
        assert!(mk(1e-6, mhz(1.0), Some(0.0)).is_err());
        assert!(mk(1e-6, mhz(1.0), Some(1e-6)).is_ok());
    }

    #[test]
    fn local_rabi_waist_rules() {
        let s = preset_three_photon();
        // r = 0 works without waists
        assert_eq!(s.local_rabi(0, 0.0).unwrap(), mhz(126.5));
        // r > 0 without waists is a configuration error
        assert!(matches!(
            s.local_rabi(0, 1e-6),
            Err(Error::MissingWaist { transition: 1 })
        ));
        // at r = w the profile factor is 1/e
        let s = s.with_uniform_rabi_waists(1e-6).unwrap();
        assert_relative_eq!(
            s.local_rabi(0, 1e-6).unwrap(),
            mhz(126.5) * (-1.0f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn config_round_trip_is_value_identical() {
        for scheme in [
            preset_three_photon(),
            preset_two_photon(),
            preset_three_photon()
                .with_uniform_rabi_waists(1.7e-6)
                .unwrap(),
        ] {
            let json = scheme_to_json(&scheme);
            let back = scheme_from_json(&json).unwrap();
            assert_eq!(scheme, back, "round trip changed the scheme:\n{json}");
        }
    }

    #[test]
    fn config_round_trip_is_idempotent() {
        // After one trip through the config format the representation is a
        // fixed point: trips two and three agree bit for bit.
        let doc = r#"{
            "levels": [
                {"label": "g", "lifetime_us": "inf"},
                {"label": "e", "lifetime_us": 0.119999},
                {"label": "r", "lifetime_us": 151.3}
            ],
            "transitions": [
                {"rabi_mhz": 159.123456789, "detuning_mhz": 999.87654321},
                {"rabi_mhz": 49.87654321, "detuning_mhz": -1005.4321, "waist_um": 0.9137}
            ]
        }"#;
        let s1 = scheme_from_json(doc).unwrap();
        let s2 = scheme_from_json(&scheme_to_json(&s1)).unwrap();
        let s3 = scheme_from_json(&scheme_to_json(&s2)).unwrap();
        assert_eq!(s2, s3);
    }

    #[test]
    fn config_rejects_unknown_fields() {
        let doc = r#"{
            "levels": [{"label": "g", "lifetime_us": "inf"}, {"label": "e", "lifetime_us": 1.0}],
            "transitions": [{"rabi_mhz": 1.0, "detuning_mhz": 0.0}],
            "extra": 1
        }"#;
        assert!(matches!(scheme_from_json(doc), Err(Error::Config(_))));
        let doc = r#"{
            "levels": [{"label": "g", "lifetime_us": "inf"}, {"label": "e", "lifetime_us": 1.0}],
            "transitions": [{"rabi_mhz": 1.0, "detuning_mhz": 0.0, "waist_nm": 5.0}]
        }"#;
        assert!(matches!(scheme_from_json(doc), Err(Error::Config(_))));
    }

    #[test]
    fn config_unit_conversion() {
        let doc = r#"{
            "levels": [{"label": "g", "lifetime_us": "inf"}, {"label": "e", "lifetime_us": 0.0262}],
            "transitions": [{"rabi_mhz": 126.5, "detuning_mhz": -3.5, "waist_um": 2.0}]
        }"#;
        let s = scheme_from_json(doc).unwrap();
        assert_relative_eq!(
            s.transitions()[0].peak_rabi,
            TAU * 126.5e6,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            s.transitions()[0].detuning,
            -TAU * 3.5e6,
            max_relative = 1e-15
        );
        assert_eq!(s.transitions()[0].waist, Some(2e-6));
        assert_relative_eq!(s.levels()[1].lifetime, 26.2e-9, max_relative = 1e-15);
    }

    #[test]
    fn preset_lookup() {
        assert!(preset_by_name("three_photon_rb87").is_some());
        assert!(preset_by_name("two_photon_rb87").is_some());
        assert!(preset_by_name("unknown").is_none());
        let mut sorted = preset_names().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, preset_names());
    }

    #[test]
    fn fingerprint_tracks_physics() {
        let a = preset_three_photon();
        let b = a.with_detuning(2, mhz(1.0));
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), preset_three_photon().fingerprint());
    }

    #[test]
    fn atom_cloud_validation() {
        assert!(AtomCloud::new(1e-6, 0.0).is_ok());
        assert!(AtomCloud::new(0.0, 0.0).is_err());
        assert!(AtomCloud::new(1e-6, -1e-6).is_err());
    }
}
