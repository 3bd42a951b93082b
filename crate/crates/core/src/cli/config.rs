//! JSON run configuration.

use serde::Deserialize;

use super::CliError;
use crate::closedform::DEFAULT_REGIME_TOL;
use crate::field::FieldSpec;
use crate::kinetics::{Generator, StateVector};
use crate::levels::LevelSystem;

pub const SCHEMA_VERSION: u32 = 1;

/// Default step as a fraction of the stability scale `1/max|L_ii|`.
pub const DEFAULT_DT_FACTOR: f64 = 0.05;
/// Default horizon in units of the slowest line rate.
pub const DEFAULT_T_FINAL_FACTOR: f64 = 50.0;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: SystemConfig,
    pub field: FieldConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    /// Initial populations for `evolve`; defaults to the ground state.
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub energies: Vec<f64>,
    pub dipole: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub mode: String,
    #[serde(default)]
    pub beta0: Option<f64>,
    pub entries: Vec<EntryConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub omega: f64,
    pub intensity: f64,
    #[serde(default)]
    pub occupation: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub t_final: Option<f64>,
    /// Half-width of the equilibrium band of the regime classifier.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Minimum separation of coupled Bohr frequencies.
    #[serde(default)]
    pub generic_tol: Option<f64>,
    /// Write every k-th integrator step in `evolve`.
    #[serde(default)]
    pub sample_every: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `"beta1"`, `"beta2"` or `"beta3"`: the local inverse temperature at
    /// `omega1 = e2 - e1`, `omega2 = e3 - e1` or `omega3 = e3 - e2`.
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepConfig {
    /// Index 0, 1, 2 of the swept line.
    pub fn line_index(&self) -> Result<usize, CliError> {
        match self.param.as_str() {
            "beta1" => Ok(0),
            "beta2" => Ok(1),
            "beta3" => Ok(2),
            other => Err(CliError::config(format!(
                "sweep.param: expected beta1, beta2 or beta3, got {other:?}"
            ))),
        }
    }

    /// Evenly spaced points from `from` to `to` inclusive.
    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => vec![],
            1 => vec![self.from],
            n => (0..n)
                .map(|k| {
                    if k == n - 1 {
                        self.to
                    } else {
                        self.from + (self.to - self.from) * k as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// A parsed configuration turned into model objects.
#[derive(Debug, Clone)]
pub struct Model {
    pub config: RunConfig,
    pub system: LevelSystem,
    pub field: FieldSpec,
    pub generic_tol: f64,
    pub regime_tol: f64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "schema_version: unsupported version {}, expected {SCHEMA_VERSION}",
                config.schema_version
            )));
        }
        Ok(config)
    }
}

fn entry_rows(field: &FieldConfig, key: &str) -> Result<Vec<(f64, f64, f64)>, CliError> {
    field
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let value = match key {
                "occupation" => e.occupation,
                _ => e.beta,
            };
            value
                .map(|v| (e.omega, e.intensity, v))
                .ok_or_else(|| CliError::config(format!("field.entries[{k}]: missing \"{key}\"")))
        })
        .collect()
}

fn build_field(field: &FieldConfig) -> Result<FieldSpec, CliError> {
    let located = |e: crate::Error| CliError::config(format!("field: {e}"));
    match field.mode.as_str() {
        "table-N" => FieldSpec::from_occupations(entry_rows(field, "occupation")?).map_err(located),
        "table-beta" => FieldSpec::from_betas(entry_rows(field, "beta")?).map_err(located),
        "gibbs" => {
            let beta0 = field
                .beta0
                .ok_or_else(|| CliError::config("field.beta0: required for mode \"gibbs\""))?;
            FieldSpec::gibbs(beta0, field.entries.iter().map(|e| (e.omega, e.intensity)))
                .map_err(located)
        }
        other => Err(CliError::config(format!(
            "field.mode: expected \"gibbs\", \"table-beta\" or \"table-N\", got {other:?}"
        ))),
    }
}

impl Model {
    pub fn from_config(config: RunConfig) -> Result<Self, CliError> {
        let system = LevelSystem::new(config.system.energies.clone(), config.system.dipole.clone())
            .map_err(|e| CliError::config(format!("system: {e}")))?;
        let field = build_field(&config.field)?;
        let generic_tol = config
            .numerics
            .generic_tol
            .unwrap_or_else(|| system.default_generic_tol());
        let regime_tol = config.numerics.tol.unwrap_or(DEFAULT_REGIME_TOL);
        if !(regime_tol >= 0.0) {
            return Err(CliError::config(format!("numerics.tol: must be >= 0, got {regime_tol}")));
        }
        Ok(Self {
            config,
            system,
            field,
            generic_tol,
            regime_tol,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_config(RunConfig::parse(text)?)
    }

    pub fn initial_state(&self) -> Result<StateVector, CliError> {
        match &self.config.initial {
            None => Ok(StateVector::pure(self.system.len(), 0)),
            Some(rho) => {
                if rho.len() != self.system.len() {
                    return Err(CliError::config(format!(
                        "initial: expected {} entries, got {}",
                        self.system.len(),
                        rho.len()
                    )));
                }
                StateVector::new(rho.clone()).map_err(|e| CliError::config(format!("initial: {e}")))
            }
        }
    }

    /// `(dt, t_final)` with defaults filled in from the generator.
    pub fn time_grid(&self, gen: &Generator) -> Result<(f64, f64), CliError> {
        let dt = match self.config.numerics.dt {
            Some(dt) => dt,
            None => {
                let diag = gen.max_abs_diagonal();
                if diag == 0.0 {
                    return Err(CliError::config(
                        "numerics.dt: required when every transition rate is zero",
                    ));
                }
                DEFAULT_DT_FACTOR / diag
            }
        };
        let t_final = match self.config.numerics.t_final {
            Some(t) => t,
            None => match gen.min_nonzero_rate() {
                Some(r) => DEFAULT_T_FINAL_FACTOR / r,
                None => {
                    return Err(CliError::config(
                        "numerics.t_final: required when every transition rate is zero",
                    ))
                }
            },
        };
        Ok((dt, t_final))
    }

    /// Local inverse temperatures at the three Bohr frequencies of a
    /// three-level system, when the field specifies all of them.
    pub fn three_level_betas(&self, field: &FieldSpec) -> Option<[f64; 3]> {
        if self.system.len() != 3 {
            return None;
        }
        let e = self.system.energies();
        let omegas = [e[1] - e[0], e[2] - e[0], e[2] - e[1]];
        let mut betas = [0.0; 3];
        for (b, w) in betas.iter_mut().zip(omegas) {
            *b = field.entry(w)?.beta()?;
        }
        Some(betas)
    }
}
