//! Experiment configuration: a TOML file, overridden by command-line flags.
//!
//! ```toml
//! algorithms = ["csr", "if"]
//! horizons = [1000, 2000, 3000]
//! runs = 20000
//! seed = 7
//! threads = "auto"
//! instance = "instance-a"
//! ```
//!
//! `instance` may instead be a table describing arms inline:
//!
//! ```toml
//! [instance]
//! name = "two-arm"
//! tau = 1.0
//! means = [[1.0, 0.9], [2.0, 0.95]]
//! covariance = [[1.0, 0.0], [0.0, 1.0]]   # shared by all arms
//! # covariances = [...]                  # or one matrix per arm
//! # a1 = 0.5                             # optional overrides
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use conbandit::{classify_instance, Algorithm, BanditInstance, BivariateGaussianArm, Sampling, Threads};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presets;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error in {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Instance(#[from] conbandit::Error),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

/// Inline instance description as written in a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDesc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<[[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariances: Option<Vec<[[f64; 2]; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
}

impl InstanceDesc {
    /// Builds the instance, naming the offending field on failure.
    pub fn build(&self) -> Result<BanditInstance, ConfigError> {
        let tau = self.tau.ok_or_else(|| invalid("instance.tau", "missing field"))?;
        let means = self
            .means
            .as_ref()
            .ok_or_else(|| invalid("instance.means", "missing field"))?;
        if means.is_empty() {
            return Err(invalid("instance.means", "at least one arm is required"));
        }
        let covs: Vec<[[f64; 2]; 2]> = match (&self.covariance, &self.covariances) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "instance.covariance",
                    "give either `covariance` or `covariances`, not both",
                ))
            }
            (Some(c), None) => vec![*c; means.len()],
            (None, Some(cs)) if cs.len() == means.len() => cs.clone(),
            (None, Some(cs)) => {
                return Err(invalid(
                    "instance.covariances",
                    format!("{} matrices for {} arms", cs.len(), means.len()),
                ))
            }
            (None, None) => return Err(invalid("instance.covariance", "missing field")),
        };
        let arms = means
            .iter()
            .zip(covs)
            .map(|(&m, c)| BivariateGaussianArm::new(m, c))
            .collect();
        BanditInstance::with_concentration(arms, tau, self.a1, self.a2).map_err(|e| match e {
            conbandit::Error::InvalidArm { arm, reason } => invalid(format!("instance.means[{arm}]"), reason),
            conbandit::Error::InvalidThreshold(_) => invalid("instance.tau", e.to_string()),
            conbandit::Error::InvalidConcentration { name, .. }
            | conbandit::Error::ConcentrationUndetermined { name, .. } => {
                invalid(format!("instance.{name}"), e.to_string())
            }
            other => ConfigError::Instance(other),
        })
    }

    pub fn from_instance(name: &str, instance: &BanditInstance) -> Self {
        let covs: Vec<[[f64; 2]; 2]> = instance.arms().iter().map(|a| a.covariance()).collect();
        let shared = covs.windows(2).all(|w| w[0] == w[1]);
        Self {
            name: Some(name.to_string()),
            tau: Some(instance.tau()),
            means: Some(
                instance
                    .arms()
                    .iter()
                    .map(|a| [a.mean().objective, a.mean().constraint])
                    .collect(),
            ),
            covariance: shared.then(|| covs[0]),
            covariances: (!shared).then_some(covs),
            a1: Some(instance.a1()),
            a2: Some(instance.a2()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InstanceRef {
    Preset(String),
    Inline(InstanceDesc),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ThreadsValue {
    Count(u64),
    Named(String),
}

/// Raw config file contents; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: Option<InstanceRef>,
    pub algorithms: Option<Vec<String>>,
    pub horizons: Option<Vec<u64>>,
    pub runs: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<ThreadsValue>,
    pub sampling: Option<String>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub instance: Option<String>,
    pub algorithms: Option<String>,
    pub horizons: Option<String>,
    pub runs: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<String>,
    pub sampling: Option<String>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instance_id: String,
    pub instance: BanditInstance,
    pub algorithms: Vec<Algorithm>,
    /// Sorted ascending, no duplicates.
    pub horizons: Vec<u64>,
    pub runs: u64,
    pub seed: u64,
    pub threads: Threads,
    pub sampling: Sampling,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 1;

pub fn default_horizons() -> Vec<u64> {
    (1..=10).map(|i| i * 1000).collect()
}

/// Parses `"csr,if"`.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>, ConfigError> {
    let algs = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Algorithm>().map_err(|e| invalid("algorithms", e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    dedup_algorithms(algs)
}

fn dedup_algorithms(algs: Vec<Algorithm>) -> Result<Vec<Algorithm>, ConfigError> {
    let mut out: Vec<Algorithm> = Vec::with_capacity(algs.len());
    for a in algs {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(invalid("algorithms", "no algorithm selected"));
    }
    Ok(out)
}

/// Parses `"1000,2000"` or a range `"start:stop:step"` (inclusive).
pub fn parse_horizons(arg: &str) -> Result<Vec<u64>, ConfigError> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| invalid("horizons", format!("`{s}` is not a non-negative integer")))
    };
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').filter(|s| !s.trim().is_empty()).map(num).collect(),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step == 0 {
                return Err(invalid("horizons", "range step must be positive"));
            }
            Ok((start..=stop).step_by(step as usize).collect())
        }
        _ => Err(invalid("horizons", format!("cannot parse `{arg}`"))),
    }
}

fn normalise_horizons(mut horizons: Vec<u64>) -> Result<Vec<u64>, ConfigError> {
    horizons.sort_unstable();
    horizons.dedup();
    if horizons.is_empty() {
        return Err(invalid("horizons", "no horizon given"));
    }
    Ok(horizons)
}

/// Resolves an instance given by preset name or by a path to a TOML file
/// holding an `[instance]` table (or the bare table fields).
pub fn resolve_instance_ref(name: &str) -> Result<(String, BanditInstance, Option<u64>), ConfigError> {
    if let Some(p) = presets::find(name) {
        return Ok((p.name.to_string(), p.instance(), Some(p.default_runs)));
    }
    let path = Path::new(name);
    if !path.exists() {
        let known: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
        return Err(invalid(
            "instance",
            format!("`{name}` is neither a preset ({}) nor a file", known.join(", ")),
        ));
    }
    let file = ConfigFile::read(path)?;
    match file.instance {
        Some(r) => resolve_config_instance(&r),
        None => Err(invalid(
            "instance",
            format!("{} has no [instance] table", path.display()),
        )),
    }
}

fn resolve_config_instance(r: &InstanceRef) -> Result<(String, BanditInstance, Option<u64>), ConfigError> {
    match r {
        InstanceRef::Preset(name) => match presets::find(name) {
            Some(p) => Ok((p.name.to_string(), p.instance(), Some(p.default_runs))),
            None => Err(invalid("instance", format!("unknown preset `{name}`"))),
        },
        InstanceRef::Inline(desc) => {
            let inst = desc.build()?;
            let name = desc.name.clone().unwrap_or_else(|| "custom".to_string());
            validate_id(&name)?;
            Ok((name, inst, None))
        }
    }
}

fn validate_id(name: &str) -> Result<(), ConfigError> {
    if name.is_empty() || name.contains([',', '"', '\n', '\r']) {
        return Err(invalid(
            "instance.name",
            "must be non-empty without commas, quotes or newlines",
        ));
    }
    Ok(())
}

/// Merges a config file (if any) with command-line overrides and validates the result.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let file = match path {
        Some(p) => ConfigFile::read(p)?,
        None => ConfigFile::default(),
    };
    resolve(file, overrides)
}

pub fn resolve(file: ConfigFile, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let (instance_id, instance, preset_runs) = match (&overrides.instance, &file.instance) {
        (Some(name), _) => resolve_instance_ref(name)?,
        (None, Some(r)) => resolve_config_instance(r)?,
        (None, None) => return Err(invalid("instance", "missing field")),
    };

    let algorithms = match (&overrides.algorithms, &file.algorithms) {
        (Some(list), _) => parse_algorithms(list)?,
        (None, Some(list)) => dedup_algorithms(
            list.iter()
                .map(|s| s.parse::<Algorithm>().map_err(|e| invalid("algorithms", e.to_string())))
                .collect::<Result<Vec<_>, _>>()?,
        )?,
        (None, None) => vec![Algorithm::ConstrainedSr, Algorithm::InfeasibleFirst],
    };

    let horizons = match (&overrides.horizons, &file.horizons) {
        (Some(arg), _) => parse_horizons(arg)?,
        (None, Some(h)) => h.clone(),
        (None, None) => default_horizons(),
    };
    let horizons = normalise_horizons(horizons)?;

    let runs = match overrides.runs.or(file.runs).or(preset_runs) {
        Some(r) => r,
        None => {
            // Same convention as the presets: fewer runs for infeasible instances.
            if classify_instance(&instance).map(|a| a.feasible).unwrap_or(true) {
                100_000
            } else {
                10_000
            }
        }
    };
    if runs == 0 {
        return Err(invalid("runs", "must be at least 1"));
    }

    let threads = match (&overrides.threads, &file.threads) {
        (Some(s), _) => s.parse::<Threads>().map_err(|e| invalid("threads", e))?,
        (None, Some(ThreadsValue::Count(n))) => format!("{n}").parse().map_err(|e| invalid("threads", e))?,
        (None, Some(ThreadsValue::Named(s))) => s.parse().map_err(|e| invalid("threads", e))?,
        (None, None) => Threads::Auto,
    };

    let sampling = match overrides.sampling.as_ref().or(file.sampling.as_ref()) {
        Some(s) => s.parse::<Sampling>().map_err(|e| invalid("sampling", e))?,
        None => Sampling::PerPull,
    };

    Ok(ExperimentConfig {
        instance_id,
        instance,
        algorithms,
        horizons,
        runs,
        seed: overrides.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        threads,
        sampling,
        out: overrides.out.clone().or(file.out),
        json: overrides.json.clone().or(file.json),
        trace: overrides.trace.clone().or(file.trace),
    })
}
