//! JSON configuration for fluid pairs and Riemann problems.
//!
//! A pair is either looked up in a saturation table by temperature:
//!
//! ```json
//! { "kind": "water", "temperature": 373.15, "liquid": { "kind": "linear_tait" } }
//! ```
//!
//! or given with explicit equations of state (`"kind": "custom"`). States
//! carry exactly one of `rho` or `p`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{Connector, EosError, EosModel, FluidPair, LiquidLimit};
use crate::riemann::{Mode, RiemannProblem, DEFAULT_REL_TOL};
use crate::saturation::{SaturationError, SaturationTable};
use crate::sweep::LiquidFamily;
use crate::waves::{Phase, PhaseState};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    /// Ideal-gas vapor and Tait liquid from the saturation table.
    Water {
        temperature: f64,
        #[serde(default = "default_liquid")]
        liquid: LiquidFamily,
    },
    Custom {
        vapor: EosModel,
        liquid: EosModel,
        temperature: f64,
        p0: f64,
        #[serde(default)]
        tau: Option<f64>,
        #[serde(default)]
        liquid_limit: Option<LiquidLimit>,
        #[serde(default)]
        connector: Option<Connector>,
        #[serde(default)]
        p_tilde: Option<f64>,
    },
}

fn default_liquid() -> LiquidFamily {
    LiquidFamily::LinearTait
}

impl PairSpec {
    pub fn build(&self, table: &SaturationTable) -> Result<FluidPair, ConfigError> {
        match self {
            Self::Water { temperature, liquid } => Ok(table.water_pair(*temperature, liquid.nu())?),
            Self::Custom { vapor, liquid, temperature, p0, tau, liquid_limit, connector, p_tilde } => {
                let mut b = FluidPair::builder(vapor.clone(), liquid.clone(), *temperature, *p0);
                if let Some(t) = tau {
                    b = b.tau(*t);
                }
                if let Some(l) = liquid_limit {
                    b = b.liquid_limit(*l);
                }
                if let Some(c) = connector {
                    b = b.connector(*c);
                }
                if let Some(p) = p_tilde {
                    b = b.p_tilde(*p);
                }
                Ok(b.build()?)
            }
        }
    }
}

/// Inline pair or a path to a JSON file holding one, relative to the
/// referring file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairRef {
    Inline(PairSpec),
    Path(PathBuf),
}

impl PairRef {
    pub fn resolve(&self, base: &Path) -> Result<PairSpec, ConfigError> {
        match self {
            Self::Inline(spec) => Ok(spec.clone()),
            Self::Path(p) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                let spec: PairFile = read_json(&path)?;
                Ok(spec.into_spec())
            }
        }
    }
}

/// A pair file may hold the pair directly or under a `pair` key.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PairFile {
    Wrapped { pair: PairSpec },
    Bare(PairSpec),
}

impl PairFile {
    fn into_spec(self) -> PairSpec {
        match self {
            Self::Wrapped { pair } | Self::Bare(pair) => pair,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default)]
    pub u: f64,
}

impl StateSpec {
    pub fn to_state(&self, pair: &FluidPair) -> Result<PhaseState, ConfigError> {
        let eos = pair.eos(self.phase);
        match (self.rho, self.p) {
            (Some(rho), None) => Ok(PhaseState::from_density(eos, self.phase, rho, self.u)?),
            (None, Some(p)) => Ok(PhaseState::from_pressure(eos, self.phase, p, self.u)?),
            _ => Err(ConfigError::Invalid(format!(
                "{} state needs exactly one of \"rho\" or \"p\"",
                self.phase.as_str()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleGrid {
    pub xi_min: f64,
    pub xi_max: f64,
    pub count: usize,
}

impl SampleGrid {
    pub fn points(&self) -> Vec<f64> {
        crate::numerics::linspace(self.xi_min, self.xi_max, self.count)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.count >= 1 && self.xi_min.is_finite() && self.xi_max.is_finite() && self.xi_min <= self.xi_max {
            Ok(())
        } else {
            Err(ConfigError::Invalid(format!("bad sampling grid {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub profile: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub pair: PairRef,
    pub left: StateSpec,
    pub right: StateSpec,
    #[serde(default = "default_true")]
    pub phase_transition: bool,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub rel_tol: Option<f64>,
    #[serde(default)]
    pub grid: Option<SampleGrid>,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_true() -> bool {
    true
}

impl ProblemConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        read_json(path)
    }

    /// Builds the pair and the problem. `base` resolves a pair given by path.
    pub fn build(&self, table: &SaturationTable, base: &Path) -> Result<(FluidPair, RiemannProblem), ConfigError> {
        let pair = self.pair.resolve(base)?.build(table)?;
        let left = self.left.to_state(&pair)?;
        let right = self.right.to_state(&pair)?;
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        let problem = RiemannProblem::new(left, right)
            .with_phase_transition(self.phase_transition)
            .with_mode(self.mode)
            .with_rel_tol(self.rel_tol.unwrap_or(DEFAULT_REL_TOL));
        Ok((pair, problem))
    }
}

/// Reads a pair from a file holding either a pair or a problem config.
pub fn read_pair_spec(path: &Path) -> Result<PairSpec, ConfigError> {
    let base = path.parent().unwrap_or(Path::new("."));
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Any {
        Problem(Box<ProblemConfig>),
        Pair(PairFile),
    }
    match read_json::<Any>(path)? {
        Any::Problem(p) => p.pair.resolve(base),
        Any::Pair(p) => Ok(p.into_spec()),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Json { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water() -> &'static str {
        r#"{ "kind": "water", "temperature": 373.15 }"#
    }

    #[test]
    fn parses_problem_with_inline_pair() {
        let text = format!(
            r#"{{ "pair": {}, "left": {{ "phase": "vapor", "p": 90000, "u": 0 }},
                 "right": {{ "phase": "liquid", "rho": 958.4 }} }}"#,
            water()
        );
        let cfg: ProblemConfig = serde_json::from_str(&text).unwrap();
        assert!(cfg.phase_transition);
        let (pair, prob) = cfg.build(&SaturationTable::bundled_water(), Path::new(".")).unwrap();
        assert_eq!(prob.left.p, 90000.0);
        assert!((pair.liquid.volume(prob.right.p).unwrap() * 958.4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_both_rho_and_p() {
        let s = StateSpec { phase: Phase::Vapor, rho: Some(1.0), p: Some(1.0), u: 0.0 };
        let pair = SaturationTable::bundled_water().water_pair(373.15, None).unwrap();
        assert!(matches!(s.to_state(&pair), Err(ConfigError::Invalid(_))));
        let s = StateSpec { rho: None, p: None, ..s };
        assert!(s.to_state(&pair).is_err());
    }

    #[test]
    fn unknown_fields_are_errors() {
        let text = r#"{ "kind": "water", "temperature": 373.15, "colour": 1 }"#;
        assert!(serde_json::from_str::<PairSpec>(text).is_err());
    }

    #[test]
    fn custom_pair_round_trips() {
        let spec = PairSpec::Custom {
            vapor: EosModel::ideal_gas(373.15, 461.526).unwrap(),
            liquid: EosModel::linear_tait(101_418.0, 2.2e9, 1.0435e-3).unwrap(),
            temperature: 373.15,
            p0: 101_418.0,
            tau: Some(5e-9),
            liquid_limit: None,
            connector: None,
            p_tilde: None,
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: PairSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let pair = back.build(&SaturationTable::bundled_water()).unwrap();
        assert_eq!(pair.tau, 5e-9);
    }
}
