//! Scenario files: TOML with one flat section per model family.
//!
//! ```toml
//! model = "static-noise"
//! seed = 7
//! measures = ["concurrence", "eof", "average-entanglement"]
//!
//! [initial_state]
//! kind = "bell"
//! label = "1-"
//!
//! [grid]          # in units of σt for the dephasing models
//! start = 0.0
//! stop = 8.0
//! points = 161
//!
//! [static_noise]
//! sigma = 1.0
//! echo_time = 4.0
//! ```
//!
//! Unknown keys and sections that the chosen model does not read are errors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, DensityOperator};
use crate::noise::{RTNParams, RandomFieldParams, StaticNoiseParams, StroboscopicParams};
use crate::quadrature::DEFAULT_ORDER;
use crate::states::{
    bell_density, bell_state, ewl_state, xyz_state, BellLabel, EWLParams, Excitation, Ket2,
    XYZParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    RandomField,
    RandomFieldGaussian,
    StaticNoise,
    OuNoise,
    Rtn,
    Stroboscopic,
    TripartiteFlows,
}

impl Model {
    pub fn is_monte_carlo(self) -> bool {
        matches!(self, Model::OuNoise | Model::Stroboscopic)
    }

    pub fn uses_random_field(self) -> bool {
        matches!(
            self,
            Model::RandomField | Model::RandomFieldGaussian | Model::TripartiteFlows
        )
    }

    pub fn uses_static_noise(self) -> bool {
        matches!(self, Model::StaticNoise | Model::OuNoise)
    }

    /// Header of the time column.
    pub fn time_label(self) -> &'static str {
        match self {
            Model::RandomField | Model::RandomFieldGaussian | Model::TripartiteFlows => "omega_t",
            Model::StaticNoise | Model::OuNoise => "sigma_t",
            Model::Rtn => "gamma_t",
            Model::Stroboscopic => "step",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::RandomField => "random-field",
            Model::RandomFieldGaussian => "random-field-gaussian",
            Model::StaticNoise => "static-noise",
            Model::OuNoise => "ou-noise",
            Model::Rtn => "rtn",
            Model::Stroboscopic => "stroboscopic",
            Model::TripartiteFlows => "tripartite-flows",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Concurrence,
    Eof,
    Tripartite,
    InfoDecomposition,
    HiddenEntanglement,
    AverageEntanglement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialState {
    Bell {
        label: String,
    },
    Xyz {
        x: f64,
        y: f64,
        z: f64,
    },
    /// `a = a_abs · e^{i a_phase}`; `excitation` is 1 or 2.
    Ewl {
        r: f64,
        a_abs: f64,
        #[serde(default)]
        a_phase: f64,
        excitation: u8,
    },
}

/// A validated initial state.
#[derive(Clone, Debug)]
pub struct PreparedState {
    pub density: DensityOperator,
    /// Present when the state is pure.
    pub ket: Option<Ket2>,
}

impl InitialState {
    pub fn prepare(&self) -> Result<PreparedState> {
        let field = "initial_state";
        let wrap = |e: Error| Error::config(field, e.to_string());
        match self {
            InitialState::Bell { label } => {
                let label: BellLabel = label.parse().map_err(wrap)?;
                Ok(PreparedState {
                    density: bell_density(label),
                    ket: Some(bell_state(label)),
                })
            }
            InitialState::Xyz { x, y, z } => {
                let p = XYZParams::new(*x, *y, *z).map_err(wrap)?;
                Ok(PreparedState {
                    density: xyz_state(&p),
                    ket: None,
                })
            }
            InitialState::Ewl {
                r,
                a_abs,
                a_phase,
                excitation,
            } => {
                let kind = match excitation {
                    1 => Excitation::One,
                    2 => Excitation::Two,
                    other => {
                        return Err(Error::config(
                            "initial_state.excitation",
                            format!("must be 1 or 2, got {other}"),
                        ))
                    }
                };
                if !(*a_abs >= 0.0) {
                    return Err(Error::config("initial_state.a_abs", "must be nonnegative"));
                }
                let a = c(a_abs * a_phase.cos(), a_abs * a_phase.sin());
                let p = EWLParams::new(*r, a, kind).map_err(wrap)?;
                Ok(PreparedState {
                    density: ewl_state(&p),
                    ket: (*r == 1.0).then(|| p.ket()),
                })
            }
        }
    }

    /// The EWL parameters, when the state is of that family.
    pub fn ewl(&self) -> Option<Result<EWLParams>> {
        match self {
            InitialState::Ewl {
                r,
                a_abs,
                a_phase,
                excitation,
            } => Some(
                EWLParams::new(
                    *r,
                    c(a_abs * a_phase.cos(), a_abs * a_phase.sin()),
                    if *excitation == 2 {
                        Excitation::Two
                    } else {
                        Excitation::One
                    },
                )
                .map_err(|e| Error::config("initial_state", e.to_string())),
            ),
            _ => None,
        }
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive, in the
/// model's dimensionless time unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFieldSection {
    pub rabi: f64,
    pub width: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticNoiseSection {
    pub sigma: f64,
    pub echo_time: Option<f64>,
    /// Omitted or `inf` for static noise.
    pub correlation_time: Option<f64>,
}

/// Give exactly one of `coupling` and `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtnSection {
    pub rate: f64,
    pub coupling: Option<f64>,
    pub g: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StroboscopicSection {
    pub phase_sigma: f64,
    pub autocorrelation: f64,
    pub echo_after_step: Option<usize>,
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: Model,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<usize>,
    #[serde(default = "default_measures")]
    pub measures: Vec<Measure>,
    pub initial_state: InitialState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_field: Option<RandomFieldSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_noise: Option<StaticNoiseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtn: Option<RtnSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stroboscopic: Option<StroboscopicSection>,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_measures() -> Vec<Measure> {
    vec![Measure::Concurrence, Measure::Eof]
}

/// Model parameters after validation.
#[derive(Clone, Copy, Debug)]
pub enum ModelParams {
    RandomField(RandomFieldParams),
    StaticNoise(StaticNoiseParams),
    Rtn(RTNParams),
    Stroboscopic(StroboscopicParams),
}

fn section<'a, T>(value: &'a Option<T>, name: &str, model: Model) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::config(name, format!("section is required for model {model}")))
}

fn forbid<T>(value: &Option<T>, name: &str, model: Model) -> Result<()> {
    if value.is_some() {
        return Err(Error::config(name, format!("not used by model {model}")));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_string();
            let field = unknown_field_name(&msg).unwrap_or_else(|| "toml".to_string());
            Error::config(field, msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical TOML rendering, used for the config echo and hash.
    pub fn to_canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.model;
        if self.quadrature_order < 2 {
            return Err(Error::config("quadrature_order", "must be at least 2"));
        }
        if self.measures.is_empty() {
            return Err(Error::config(
                "measures",
                "at least one measure is required",
            ));
        }
        for (i, a) in self.measures.iter().enumerate() {
            if self.measures[..i].contains(a) {
                return Err(Error::config("measures", format!("{a:?} listed twice")));
            }
        }
        match (m.is_monte_carlo(), self.trajectories) {
            (true, None) => {
                return Err(Error::config(
                    "trajectories",
                    format!("required for model {m}"),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::config(
                    "trajectories",
                    format!("not used by model {m}"),
                ))
            }
            (true, Some(0)) => return Err(Error::config("trajectories", "must be positive")),
            _ => {}
        }
        if m == Model::Stroboscopic {
            forbid(&self.grid, "grid", m)?;
        } else {
            let g = section(&self.grid, "grid", m)?;
            if g.points < 2 {
                return Err(Error::config("grid.points", "must be at least 2"));
            }
            if !g.start.is_finite() || !g.stop.is_finite() || g.start < 0.0 {
                return Err(Error::config(
                    "grid",
                    "start and stop must be finite and start >= 0",
                ));
            }
            if !(g.stop > g.start) {
                return Err(Error::config("grid.stop", "must exceed grid.start"));
            }
        }
        if !m.uses_random_field() {
            forbid(&self.random_field, "random_field", m)?;
        }
        if !m.uses_static_noise() {
            forbid(&self.static_noise, "static_noise", m)?;
        }
        if m != Model::Rtn {
            forbid(&self.rtn, "rtn", m)?;
        }
        if m != Model::Stroboscopic {
            forbid(&self.stroboscopic, "stroboscopic", m)?;
        }
        let tripartite = self
            .measures
            .iter()
            .any(|x| matches!(x, Measure::Tripartite | Measure::InfoDecomposition));
        if tripartite && !m.uses_random_field() {
            return Err(Error::config(
                "measures",
                format!("tripartite measures need a random-field model, not {m}"),
            ));
        }
        let state = self.initial_state.prepare()?;
        let ensemble = self.measures.iter().any(|x| {
            matches!(
                x,
                Measure::HiddenEntanglement | Measure::AverageEntanglement
            )
        });
        if ensemble && state.ket.is_none() {
            return Err(Error::config(
                "measures",
                "hidden and average entanglement need a pure initial state",
            ));
        }
        self.model_params()?;
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let m = self.model;
        match m {
            Model::RandomField | Model::RandomFieldGaussian | Model::TripartiteFlows => {
                let s = section(&self.random_field, "random_field", m)?;
                if m == Model::RandomFieldGaussian && s.width.is_none() {
                    return Err(Error::config(
                        "random_field.width",
                        format!("required for model {m}"),
                    ));
                }
                RandomFieldParams::new(s.rabi, s.width.unwrap_or(0.0))
                    .map(ModelParams::RandomField)
                    .map_err(|e| Error::config("random_field", e.to_string()))
            }
            Model::StaticNoise | Model::OuNoise => {
                let s = section(&self.static_noise, "static_noise", m)?;
                let tau = s.correlation_time.unwrap_or(f64::INFINITY);
                if m == Model::OuNoise && !tau.is_finite() {
                    return Err(Error::config(
                        "static_noise.correlation_time",
                        "ou-noise needs a finite correlation time",
                    ));
                }
                if m == Model::StaticNoise && tau.is_finite() {
                    return Err(Error::config(
                        "static_noise.correlation_time",
                        "static-noise needs an infinite correlation time; use ou-noise",
                    ));
                }
                if !(s.sigma > 0.0) {
                    return Err(Error::config(
                        "static_noise.sigma",
                        "must be positive, since the grid is in units of σt",
                    ));
                }
                StaticNoiseParams::new(s.sigma, s.echo_time, tau)
                    .map(ModelParams::StaticNoise)
                    .map_err(|e| Error::config("static_noise", e.to_string()))
            }
            Model::Rtn => {
                let s = section(&self.rtn, "rtn", m)?;
                let coupling = match (s.coupling, s.g) {
                    (Some(v), None) => v,
                    (None, Some(g)) => g * s.rate,
                    _ => {
                        return Err(Error::config(
                            "rtn",
                            "give exactly one of `coupling` and `g`",
                        ))
                    }
                };
                RTNParams::new(s.rate, coupling)
                    .map(ModelParams::Rtn)
                    .map_err(|e| Error::config("rtn", e.to_string()))
            }
            Model::Stroboscopic => {
                let s = section(&self.stroboscopic, "stroboscopic", m)?;
                let p = StroboscopicParams {
                    steps: s.steps.unwrap_or(crate::noise::stroboscopic::DEFAULT_STEPS),
                    phase_sigma: s.phase_sigma,
                    autocorrelation: s.autocorrelation,
                    sequences: self.trajectories.unwrap_or(0),
                    echo_after_step: s.echo_after_step,
                    seed: self.seed,
                };
                p.validate()
                    .map_err(|e| Error::config("stroboscopic", e.to_string()))?;
                Ok(ModelParams::Stroboscopic(p))
            }
        }
    }

    /// Names accepted by [`ScenarioConfig::with_parameter`] for this model.
    pub fn sweepable(&self) -> &'static [&'static str] {
        match self.model {
            Model::RandomField | Model::RandomFieldGaussian | Model::TripartiteFlows => {
                &["rabi", "width"]
            }
            Model::StaticNoise => &["sigma", "echo_time"],
            Model::OuNoise => &["sigma", "echo_time", "correlation_time"],
            Model::Rtn => &["rate", "coupling", "g"],
            Model::Stroboscopic => &["phase_sigma", "autocorrelation"],
        }
    }

    /// A copy with one numeric model parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        if !self.sweepable().contains(&name) {
            return Err(Error::config(
                "parameter",
                format!(
                    "unknown parameter `{name}` for model {}; expected one of {:?}",
                    self.model,
                    self.sweepable()
                ),
            ));
        }
        let mut cfg = self.clone();
        let missing =
            |s: &str| Error::config(s, format!("section is required for model {}", self.model));
        match name {
            "rabi" | "width" => {
                let s = cfg
                    .random_field
                    .as_mut()
                    .ok_or_else(|| missing("random_field"))?;
                if name == "rabi" {
                    s.rabi = value;
                } else {
                    s.width = Some(value);
                }
            }
            "sigma" | "echo_time" | "correlation_time" => {
                let s = cfg
                    .static_noise
                    .as_mut()
                    .ok_or_else(|| missing("static_noise"))?;
                match name {
                    "sigma" => s.sigma = value,
                    "echo_time" => s.echo_time = Some(value),
                    _ => s.correlation_time = Some(value),
                }
            }
            "rate" | "coupling" | "g" => {
                let s = cfg.rtn.as_mut().ok_or_else(|| missing("rtn"))?;
                match name {
                    "rate" => s.rate = value,
                    "coupling" => {
                        s.coupling = Some(value);
                        s.g = None;
                    }
                    _ => {
                        s.g = Some(value);
                        s.coupling = None;
                    }
                }
            }
            _ => {
                let s = cfg
                    .stroboscopic
                    .as_mut()
                    .ok_or_else(|| missing("stroboscopic"))?;
                if name == "phase_sigma" {
                    s.phase_sigma = value;
                } else {
                    s.autocorrelation = value;
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn unknown_field_name(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}
