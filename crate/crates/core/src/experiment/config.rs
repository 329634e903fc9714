use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::bandit::{Policy, QuantileSchedule, DEFAULT_MC_SAMPLES};
use crate::io::Format;
use crate::oracle::DEFAULT_PATH_CAP;

/// Every accepted configuration key, in manifest order.
pub const KEYS: [&str; 20] = [
    "graph",
    "format",
    "directed",
    "source",
    "target",
    "agents",
    "horizon",
    "reps",
    "seed",
    "noise_sd",
    "prior_sd",
    "env_prior_sd",
    "ucb_schedule",
    "mc_samples",
    "regret",
    "path_cap",
    "fixed_instance",
    "workers",
    "out",
    "exact_mc_samples",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
}

/// A query endpoint: a vertex name from the graph file, or drawn at random.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Vertex(String),
    Random,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vertex(v) => f.write_str(v),
            Self::Random => f.write_str("random"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegretMode {
    /// Max of hidden means against the minimax optimum.
    Approx,
    /// Expected maximum against the best expected-maximum path.
    Exact,
}

impl FromStr for RegretMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "approx" => Ok(Self::Approx),
            "exact" => Ok(Self::Exact),
            other => Err(format!("expected `approx` or `exact`, got `{other}`")),
        }
    }
}

impl fmt::Display for RegretMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Approx => "approx",
            Self::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    /// `None` means guess from the file extension.
    pub format: Option<Format>,
    /// Only used for edge lists.
    pub directed: bool,
    pub source: Endpoint,
    pub target: Endpoint,
    pub agents: Vec<Policy>,
    pub horizon: u64,
    pub reps: usize,
    pub seed: u64,
    /// Replaces every edge's noise sd when set.
    pub noise_sd: Option<f64>,
    /// Replaces every edge's agent prior sd when set.
    pub prior_sd: Option<f64>,
    /// Spread of the distribution hidden means are drawn from, when it
    /// differs from the agents' prior.
    pub env_prior_sd: Option<f64>,
    pub ucb_schedule: QuantileSchedule,
    pub mc_samples: usize,
    pub regret: RegretMode,
    pub path_cap: usize,
    /// Reuse the first repetition's hidden means in every repetition.
    pub fixed_instance: bool,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    pub out: PathBuf,
    /// Draws per path when scoring long paths for exact regret.
    pub exact_mc_samples: usize,
}

/// Raw `key = value` entries before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEntries(BTreeMap<String, String>);

impl ConfigEntries {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .filter(|(k, _)| !k.is_empty())
                .ok_or_else(|| ConfigError::Syntax { line, text: raw.to_string() })?;
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey(key.to_string()));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
            }
        }
        Ok(Self(entries))
    }

    /// Reads a config file; a relative `graph` is resolved against the file's directory.
    pub fn from_file(path: &FsPath) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let mut entries = Self::parse(&text)?;
        if let Some(graph) = entries.0.get_mut("graph") {
            let p = PathBuf::from(&*graph);
            if p.is_relative() {
                let base = path.parent().unwrap_or(FsPath::new(""));
                *graph = base.join(p).to_string_lossy().into_owned();
            }
        }
        Ok(entries)
    }

    /// Sets or replaces one key, as a command-line override does.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

fn invalid(key: &str, value: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::InvalidValue { key: key.to_string(), value: value.to_string(), reason: reason.to_string() }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| invalid(key, value, e))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

fn parse_sd(key: &str, value: &str) -> Result<f64, ConfigError> {
    let sd: f64 = parse_value(key, value)?;
    if sd.is_finite() && sd > 0.0 {
        Ok(sd)
    } else {
        Err(invalid(key, value, "must be positive and finite"))
    }
}

fn parse_endpoint(value: &str) -> Endpoint {
    if value == "random" {
        Endpoint::Random
    } else {
        Endpoint::Vertex(value.to_string())
    }
}

impl ExperimentConfig {
    pub fn from_entries(entries: &ConfigEntries) -> Result<Self, ConfigError> {
        let get = |k: &'static str| entries.get(k);
        let need = |k: &'static str| get(k).ok_or(ConfigError::Missing(k));

        let agents_raw = need("agents")?;
        let mut agents = Vec::new();
        for name in agents_raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let policy: Policy = parse_value("agents", name)?;
            if agents.contains(&policy) {
                return Err(invalid("agents", agents_raw, format!("agent `{policy}` listed twice")));
            }
            agents.push(policy);
        }
        if agents.is_empty() {
            return Err(invalid("agents", agents_raw, "no agents listed"));
        }

        let positive = |k: &'static str, default: u64| -> Result<u64, ConfigError> {
            match get(k) {
                None => Ok(default),
                Some(v) => match parse_value::<u64>(k, v)? {
                    0 => Err(invalid(k, v, "must be at least 1")),
                    n => Ok(n),
                },
            }
        };

        let config = Self {
            graph: PathBuf::from(need("graph")?),
            format: get("format").map(|v| parse_value("format", v)).transpose()?,
            directed: get("directed").map(|v| parse_bool("directed", v)).transpose()?.unwrap_or(true),
            source: parse_endpoint(need("source")?),
            target: parse_endpoint(need("target")?),
            agents,
            horizon: positive("horizon", 1000)?,
            reps: positive("reps", 5)? as usize,
            seed: get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0),
            noise_sd: get("noise_sd").map(|v| parse_sd("noise_sd", v)).transpose()?,
            prior_sd: get("prior_sd").map(|v| parse_sd("prior_sd", v)).transpose()?,
            env_prior_sd: get("env_prior_sd").map(|v| parse_sd("env_prior_sd", v)).transpose()?,
            ucb_schedule: get("ucb_schedule").map(|v| parse_value("ucb_schedule", v)).transpose()?.unwrap_or_default(),
            mc_samples: positive("mc_samples", DEFAULT_MC_SAMPLES as u64)? as usize,
            regret: get("regret").map(|v| parse_value("regret", v)).transpose()?.unwrap_or(RegretMode::Approx),
            path_cap: positive("path_cap", DEFAULT_PATH_CAP as u64)? as usize,
            fixed_instance: get("fixed_instance")
                .map(|v| parse_bool("fixed_instance", v))
                .transpose()?
                .unwrap_or(false),
            workers: get("workers").map(|v| parse_value("workers", v)).transpose()?.unwrap_or(0),
            out: PathBuf::from(get("out").unwrap_or("results")),
            exact_mc_samples: positive("exact_mc_samples", 1_000_000)? as usize,
        };
        if config.source != Endpoint::Random && config.source == config.target {
            return Err(invalid("target", &config.target.to_string(), "equals the source"));
        }
        Ok(config)
    }

    pub fn from_file(path: &FsPath) -> Result<Self, ConfigError> {
        Self::from_entries(&ConfigEntries::from_file(path)?)
    }

    /// Canonical `key = value` rendering; parsing it gives back this config.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string());
        let format = self.format.map(|f| match f {
            Format::EdgeList => "edgelist".to_string(),
            Format::Pajek => "pajek".to_string(),
        });
        let agents = self.agents.iter().map(|a| a.name()).collect::<Vec<_>>().join(",");
        let rows: [(&str, Option<String>); 20] = [
            ("graph", Some(self.graph.display().to_string())),
            ("format", format),
            ("directed", Some(self.directed.to_string())),
            ("source", Some(self.source.to_string())),
            ("target", Some(self.target.to_string())),
            ("agents", Some(agents)),
            ("horizon", Some(self.horizon.to_string())),
            ("reps", Some(self.reps.to_string())),
            ("seed", Some(self.seed.to_string())),
            ("noise_sd", opt(self.noise_sd)),
            ("prior_sd", opt(self.prior_sd)),
            ("env_prior_sd", opt(self.env_prior_sd)),
            ("ucb_schedule", Some(self.ucb_schedule.to_string())),
            ("mc_samples", Some(self.mc_samples.to_string())),
            ("regret", Some(self.regret.to_string())),
            ("path_cap", Some(self.path_cap.to_string())),
            ("fixed_instance", Some(self.fixed_instance.to_string())),
            ("workers", Some(self.workers.to_string())),
            ("out", Some(self.out.display().to_string())),
            ("exact_mc_samples", Some(self.exact_mc_samples.to_string())),
        ];
        let mut text = String::new();
        for (key, value) in rows {
            if let Some(v) = value {
                text.push_str(&format!("{key} = {v}\n"));
            }
        }
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "graph = g.edges\nsource = s\ntarget = t\nagents = ts, greedy\n";

    #[test]
    fn defaults_and_round_trip() {
        let c = ExperimentConfig::from_entries(&ConfigEntries::parse(BASE).unwrap()).unwrap();
        assert_eq!(c.agents, vec![Policy::TsApprox, Policy::Greedy]);
        assert_eq!((c.horizon, c.reps, c.seed, c.directed), (1000, 5, 0, true));
        assert_eq!(c.regret, RegretMode::Approx);
        let again = ExperimentConfig::from_entries(&ConfigEntries::parse(&c.to_text()).unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn comments_and_overrides() {
        let text = format!("# experiment\n{BASE}horizon = 20 # short\nnoise_sd = 0.4\n");
        let mut entries = ConfigEntries::parse(&text).unwrap();
        entries.set("horizon", "7").unwrap();
        let c = ExperimentConfig::from_entries(&entries).unwrap();
        assert_eq!(c.horizon, 7);
        assert_eq!(c.noise_sd, Some(0.4));
        assert!(entries.set("hoizon", "7").is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(ConfigEntries::parse("horizn = 3"), Err(ConfigError::UnknownKey(k)) if k == "horizn"));
        assert!(matches!(ConfigEntries::parse("seed = 1\nseed = 2"), Err(ConfigError::DuplicateKey { line: 2, .. })));
        assert!(matches!(ConfigEntries::parse("just text"), Err(ConfigError::Syntax { line: 1, .. })));
        let bad =
            |extra: &str| ExperimentConfig::from_entries(&ConfigEntries::parse(&format!("{BASE}{extra}")).unwrap());
        assert!(bad("horizon = 0").is_err());
        assert!(bad("reps = -1").is_err());
        assert!(bad("noise_sd = 0").is_err());
        assert!(bad("regret = both").is_err());
        let dup = "graph = g\nsource = s\ntarget = t\nagents = ts,ts_approx\n";
        assert!(ExperimentConfig::from_entries(&ConfigEntries::parse(dup).unwrap()).is_err());
        let missing = ConfigEntries::parse("graph = g\nsource = s\ntarget = t").unwrap();
        assert!(matches!(ExperimentConfig::from_entries(&missing), Err(ConfigError::Missing("agents"))));
    }
}
