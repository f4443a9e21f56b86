//! Experiment configuration: strict JSON schema with boundary units,
//! validated and converted to SI at ingestion.

use serde::{Deserialize, Serialize};

use ladder_sim_core::scheme::{preset_by_name, AtomCloud, LadderScheme, SchemeConfig};
use ladder_sim_core::units::{mhz, um, us};
use ladder_sim_core::Error as CoreError;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Spectrum,
    Rabi,
    Coverage,
    Crosstalk,
    Effective,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::Rabi => "rabi",
            Experiment::Coverage => "coverage",
            Experiment::Crosstalk => "crosstalk",
            Experiment::Effective => "effective",
        }
    }
}

/// Scheme reference: preset name or inline definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeRef {
    Preset(String),
    Inline(SchemeConfig),
}

impl SchemeRef {
    pub fn resolve(&self) -> Result<LadderScheme, CliError> {
        match self {
            SchemeRef::Preset(name) => preset_by_name(name).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown preset \"{name}\"; available: {}",
                    ladder_sim_core::scheme::preset_names().join(", ")
                ))
            }),
            SchemeRef::Inline(config) => config.to_scheme().map_err(CliError::from),
        }
    }

    /// Fully resolved form for the run manifest.
    pub fn resolved(&self) -> Result<SchemeRef, CliError> {
        Ok(SchemeRef::Inline(SchemeConfig::from_scheme(
            &self.resolve()?,
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudConfig {
    pub radius_um: f64,
    #[serde(default)]
    pub center_offset_um: f64,
}

impl CloudConfig {
    pub fn to_cloud(&self) -> Result<AtomCloud, CliError> {
        AtomCloud::new(um(self.radius_um), um(self.center_offset_um)).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetsGrid {
    pub span_mhz: f64,
    pub step_mhz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// 1-based index of the swept transition.
    pub swept_transition: usize,
    pub offsets: OffsetsGrid,
    pub t_int_us: f64,
    #[serde(default)]
    pub r_um: f64,
    /// Optional beam spot applied scheme-wide before the sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_um: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RabiSection {
    pub t_end_us: f64,
    pub n_points: usize,
    #[serde(default)]
    pub r_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_um: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageSection {
    /// Spot/cloud ratios w/a; the cloud radius comes from the top-level
    /// `cloud` section.
    pub xi_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosstalkSection {
    /// Beam spot parameter applied through the uniform-Rabi relation
    /// (3-step schemes) or as equal waists. The neighbor cloud (radius and
    /// displacement from the beam axis) comes from the top-level `cloud`
    /// section.
    pub w_um: f64,
    /// Defaults to one full period of the effective Rabi frequency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end_us: Option<f64>,
    #[serde(default = "default_azimuthal")]
    pub n_azimuthal: usize,
    #[serde(default = "default_time_samples")]
    pub n_times: usize,
}

fn default_azimuthal() -> usize {
    ladder_sim_core::spatial::DEFAULT_AZIMUTHAL_NODES
}

fn default_time_samples() -> usize {
    601
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveSection {
    #[serde(default)]
    pub r_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_um: Option<f64>,
}

/// Top-level experiment configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub scheme: SchemeRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cloud: Option<CloudConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<RabiSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crosstalk: Option<CrosstalkSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective: Option<EffectiveSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    /// Validate cross-field consistency: exactly the section matching the
    /// selected experiment must be present, the cloud exactly where the
    /// experiment averages over one, and all physics values must be sane.
    pub fn validate(&self) -> Result<(), CliError> {
        let sections = [
            ("spectrum", self.spectrum.is_some()),
            ("rabi", self.rabi.is_some()),
            ("coverage", self.coverage.is_some()),
            ("crosstalk", self.crosstalk.is_some()),
            ("effective", self.effective.is_some()),
        ];
        for (name, present) in sections {
            let wanted = name == self.experiment.name();
            if wanted && !present {
                return Err(CliError::Config(format!(
                    "experiment \"{name}\" requires a \"{name}\" section"
                )));
            }
            if !wanted && present {
                return Err(CliError::Config(format!(
                    "section \"{name}\" does not belong to experiment \"{}\"",
                    self.experiment.name()
                )));
            }
        }
        let needs_cloud = matches!(
            self.experiment,
            Experiment::Coverage | Experiment::Crosstalk
        );
        if needs_cloud && self.cloud.is_none() {
            return Err(CliError::Config(format!(
                "experiment \"{}\" requires a \"cloud\" section",
                self.experiment.name()
            )));
        }
        if !needs_cloud && self.cloud.is_some() {
            return Err(CliError::Config(format!(
                "experiment \"{}\" takes no \"cloud\" section",
                self.experiment.name()
            )));
        }
        if let Some(cloud) = &self.cloud {
            cloud.to_cloud()?;
            if self.experiment == Experiment::Coverage && cloud.center_offset_um != 0.0 {
                return Err(CliError::Config(
                    "coverage averages a coaxial cloud; cloud.center_offset_um must be 0".into(),
                ));
            }
            if self.experiment == Experiment::Crosstalk && cloud.center_offset_um <= 0.0 {
                return Err(CliError::Config(
                    "crosstalk needs a displaced neighbor; cloud.center_offset_um must be positive"
                        .into(),
                ));
            }
        }
        let scheme = self.scheme.resolve()?;
        match self.experiment {
            Experiment::Spectrum => {
                let s = self.spectrum.as_ref().unwrap();
                if s.swept_transition == 0 || s.swept_transition > scheme.transitions().len() {
                    return Err(CliError::Config(format!(
                        "swept_transition must be in 1..={}, got {}",
                        scheme.transitions().len(),
                        s.swept_transition
                    )));
                }
                require_positive(s.t_int_us, "spectrum.t_int_us")?;
                require_positive(s.offsets.span_mhz, "spectrum.offsets.span_mhz")?;
                require_positive(s.offsets.step_mhz, "spectrum.offsets.step_mhz")?;
                require_nonnegative(s.r_um, "spectrum.r_um")?;
            }
            Experiment::Rabi => {
                let r = self.rabi.as_ref().unwrap();
                require_positive(r.t_end_us, "rabi.t_end_us")?;
                if r.n_points < 2 {
                    return Err(CliError::Config("rabi.n_points must be at least 2".into()));
                }
                require_nonnegative(r.r_um, "rabi.r_um")?;
            }
            Experiment::Coverage => {
                let c = self.coverage.as_ref().unwrap();
                if c.xi_values.is_empty() {
                    return Err(CliError::Config(
                        "coverage.xi_values must be non-empty".into(),
                    ));
                }
                if c.xi_values.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                    return Err(CliError::Config(
                        "coverage.xi_values must be positive".into(),
                    ));
                }
                if c.xi_values.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(CliError::Config(
                        "coverage.xi_values must be ascending".into(),
                    ));
                }
            }
            Experiment::Crosstalk => {
                let x = self.crosstalk.as_ref().unwrap();
                require_positive(x.w_um, "crosstalk.w_um")?;
                if let Some(t) = x.t_end_us {
                    require_positive(t, "crosstalk.t_end_us")?;
                }
            }
            Experiment::Effective => {
                let e = self.effective.as_ref().unwrap();
                require_nonnegative(e.r_um, "effective.r_um")?;
            }
        }
        Ok(())
    }
}

fn require_positive(value: f64, field: &str) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{field} must be positive and finite, got {value}"
        )))
    }
}

fn require_nonnegative(value: f64, field: &str) -> Result<(), CliError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{field} must be nonnegative and finite, got {value}"
        )))
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(document: &str) -> Result<ExperimentConfig, CliError> {
    let config: ExperimentConfig =
        serde_json::from_str(document).map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Apply an optional scheme-wide spot to a scheme: uniform-Rabi relation for
/// three-step ladders, equal waists otherwise.
pub fn apply_spot(scheme: &LadderScheme, w_um: Option<f64>) -> Result<LadderScheme, CliError> {
    match w_um {
        None => Ok(scheme.clone()),
        Some(w) => {
            if !(w > 0.0 && w.is_finite()) {
                return Err(CliError::Config(format!("w_um must be positive, got {w}")));
            }
            let w = um(w);
            let applied = if scheme.transitions().len() == 3 {
                scheme.with_uniform_rabi_waists(w)
            } else {
                scheme.with_equal_waists(w)
            };
            applied.map_err(CliError::from)
        }
    }
}

/// Convenience conversions used by the runners.
pub fn offsets_rad(grid: &OffsetsGrid) -> Result<Vec<f64>, CoreError> {
    ladder_sim_core::spatial::symmetric_offsets(mhz(grid.span_mhz), mhz(grid.step_mhz))
}

pub fn t_seconds(t_us: f64) -> f64 {
    us(t_us)
}
