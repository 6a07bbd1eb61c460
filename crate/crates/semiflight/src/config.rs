//! Flat `key = value` experiment configuration with `--key value` overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

/// Environment variable consulted when `workers` is not configured.
pub const WORKERS_ENV: &str = "SEMIFLIGHT_WORKERS";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    Duplicate(String),
    #[error("override `{0}` has no value")]
    MissingValue(String),
    #[error("unexpected argument {0:?}; overrides take the form --key value")]
    StrayArgument(String),
    #[error("invalid value {value:?} for `{key}`: {reason}")]
    Invalid {
        key: &'static str,
        value: String,
        reason: String,
    },
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("config names experiment `{file}` but `{cli}` was requested")]
    ExperimentMismatch { file: String, cli: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Flight,
    Limit,
    Scaled,
    Telegraph,
    WaveRepr,
    VerifyLaws,
    SymbolCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Flight,
        Experiment::Limit,
        Experiment::Scaled,
        Experiment::Telegraph,
        Experiment::WaveRepr,
        Experiment::VerifyLaws,
        Experiment::SymbolCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Flight => "flight",
            Experiment::Limit => "limit",
            Experiment::Scaled => "scaled",
            Experiment::Telegraph => "telegraph",
            Experiment::WaveRepr => "wave-repr",
            Experiment::VerifyLaws => "verify-laws",
            Experiment::SymbolCheck => "symbol-check",
        }
    }

    fn default_output(self) -> &'static str {
        match self {
            Experiment::VerifyLaws => "verify-laws.jsonl",
            Experiment::Flight => "flight.csv",
            Experiment::Limit => "limit.csv",
            Experiment::Scaled => "scaled.csv",
            Experiment::Telegraph => "telegraph.csv",
            Experiment::WaveRepr => "wave-repr.csv",
            Experiment::SymbolCheck => "symbol-check.csv",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub alpha: f64,
    pub theta: f64,
    pub dimension: usize,
    pub t_grid: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
    pub workers: usize,
    /// Jump truncation for passage sampling, as a fraction of the level.
    pub eps: f64,
    pub output_path: PathBuf,
    /// Space-time scale `c` of the `scaled` experiment.
    pub scale: f64,
    /// Evaluation point of the `wave-repr` experiment.
    pub x: f64,
}

const KEYS: [&str; 13] = [
    "experiment",
    "alpha",
    "theta",
    "dimension",
    "t_grid",
    "n_paths",
    "seed",
    "workers",
    "eps",
    "output_path",
    "scale",
    "x",
    "config",
];

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

fn insert(
    map: &mut BTreeMap<String, String>,
    key: String,
    value: String,
) -> Result<(), ConfigError> {
    if !KEYS.contains(&key.as_str()) {
        return Err(ConfigError::UnknownKey(key));
    }
    if map.insert(key.clone(), value).is_some() {
        return Err(ConfigError::Duplicate(key));
    }
    Ok(())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            text: raw.to_string(),
        })?;
        insert(&mut map, normalize(k), v.trim().to_string())?;
    }
    Ok(map)
}

/// Parses `--key value` and `--key=value` pairs.
pub fn parse_overrides(args: &[String]) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let flag = arg
            .strip_prefix("--")
            .ok_or_else(|| ConfigError::StrayArgument(arg.clone()))?;
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (normalize(k), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| ConfigError::MissingValue(flag.to_string()))?;
                (normalize(flag), v.clone())
            }
        };
        insert(&mut map, key, value)?;
    }
    Ok(map)
}

fn parse_value<T: FromStr>(key: &'static str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| ConfigError::Invalid {
            key,
            value: value.to_string(),
            reason: e.to_string(),
        })
}

fn invalid(key: &'static str, value: impl fmt::Display, reason: &str) -> ConfigError {
    ConfigError::Invalid {
        key,
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn default_workers() -> Result<usize, ConfigError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => parse_value("workers", &v),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

impl ExperimentConfig {
    /// Defaults for `experiment`, before any file or override is applied.
    pub fn defaults(experiment: Experiment) -> Self {
        let verify = experiment == Experiment::VerifyLaws;
        ExperimentConfig {
            experiment,
            alpha: 0.6,
            theta: 1.0,
            dimension: if verify { 3 } else { 1 },
            t_grid: if verify {
                vec![0.5, 1.0, 2.0]
            } else {
                vec![1.0]
            },
            n_paths: if verify { 100_000 } else { 1_000 },
            seed: 0,
            workers: 1,
            eps: 1e-4,
            output_path: PathBuf::from(experiment.default_output()),
            scale: 100.0,
            x: 0.0,
        }
    }

    /// Merges the config file (if any) with command-line overrides, which win.
    pub fn load(
        experiment: &str,
        config_path: Option<&Path>,
        overrides: &[String],
    ) -> Result<Self, ConfigError> {
        let experiment: Experiment = experiment.parse()?;
        let mut cli = parse_overrides(overrides)?;
        let path = match (config_path, cli.remove("config")) {
            (Some(p), _) => Some(p.to_path_buf()),
            (None, Some(p)) => Some(PathBuf::from(p)),
            (None, None) => None,
        };
        let mut pairs = match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| ConfigError::Read {
                    path: p.clone(),
                    message: e.to_string(),
                })?;
                parse_pairs(&text)?
            }
            None => BTreeMap::new(),
        };
        pairs.extend(cli);
        Self::from_pairs(experiment, &pairs)
    }

    pub fn from_pairs(
        experiment: Experiment,
        pairs: &BTreeMap<String, String>,
    ) -> Result<Self, ConfigError> {
        let mut c = Self::defaults(experiment);
        let mut workers = None;
        for (k, v) in pairs {
            match k.as_str() {
                "experiment" => {
                    if v.trim() != experiment.name() {
                        return Err(ConfigError::ExperimentMismatch {
                            file: v.clone(),
                            cli: experiment.name().into(),
                        });
                    }
                }
                "alpha" => c.alpha = parse_value("alpha", v)?,
                "theta" => c.theta = parse_value("theta", v)?,
                "dimension" => c.dimension = parse_value("dimension", v)?,
                "t_grid" => {
                    c.t_grid = v
                        .split(',')
                        .map(|s| parse_value("t_grid", s))
                        .collect::<Result<_, _>>()?;
                }
                "n_paths" => c.n_paths = parse_value("n_paths", v)?,
                "seed" => c.seed = parse_value("seed", v)?,
                "workers" => workers = Some(parse_value("workers", v)?),
                "eps" => c.eps = parse_value("eps", v)?,
                "output_path" => c.output_path = PathBuf::from(v.trim()),
                "scale" => c.scale = parse_value("scale", v)?,
                "x" => c.x = parse_value("x", v)?,
                _ => return Err(ConfigError::UnknownKey(k.clone())),
            }
        }
        c.workers = match workers {
            Some(w) => w,
            None => default_workers()?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid("alpha", self.alpha, "must lie in (0, 1]"));
        }
        let stable_only = [
            Experiment::Limit,
            Experiment::SymbolCheck,
            Experiment::VerifyLaws,
        ];
        if stable_only.contains(&self.experiment) && self.alpha >= 1.0 {
            return Err(invalid(
                "alpha",
                self.alpha,
                "this experiment needs alpha < 1",
            ));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(invalid("theta", self.theta, "must be positive"));
        }
        if self.dimension == 0 {
            return Err(invalid("dimension", self.dimension, "must be at least 1"));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(invalid(
                "t_grid",
                format!("{:?}", self.t_grid),
                "times must be positive and finite",
            ));
        }
        if self.n_paths == 0 {
            return Err(invalid("n_paths", self.n_paths, "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers", self.workers, "must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(invalid("eps", self.eps, "must lie in (0, 0.5)"));
        }
        if !(self.scale >= 1.0 && self.scale.is_finite()) {
            return Err(invalid("scale", self.scale, "must be at least 1"));
        }
        if !self.x.is_finite() {
            return Err(invalid("x", self.x, "must be finite"));
        }
        Ok(())
    }
}
