//! Run configuration and its validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::checks;

/// Catalog keys accepted by `--metric`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricId {
    Ads,
    SchwarzschildAds,
    Shooting,
    FgTruncated,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Ads,
        MetricId::SchwarzschildAds,
        MetricId::Shooting,
        MetricId::FgTruncated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Ads => "ads",
            MetricId::SchwarzschildAds => "schwarzschild-ads",
            MetricId::Shooting => "shooting",
            MetricId::FgTruncated => "fg-truncated",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            ConfigError(format!(
                "unknown metric id `{s}` (expected one of ads, schwarzschild-ads, shooting, fg-truncated)"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyEinstein,
    FgExpand,
    Static,
    Twist,
    Compactify,
    Obata,
    All,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::VerifyEinstein => "verify-einstein",
            Command::FgExpand => "fg-expand",
            Command::Static => "static",
            Command::Twist => "twist",
            Command::Compactify => "compactify",
            Command::Obata => "obata",
            Command::All => "all",
        }
    }

    /// Metrics the command can be restricted to.
    pub fn supported_metrics(self) -> &'static [MetricId] {
        match self {
            Command::VerifyEinstein | Command::Compactify => &[MetricId::Ads, MetricId::SchwarzschildAds],
            Command::FgExpand => &[MetricId::Ads, MetricId::SchwarzschildAds, MetricId::FgTruncated],
            Command::Static => &[MetricId::Ads, MetricId::SchwarzschildAds, MetricId::Shooting],
            Command::Twist => &[MetricId::Ads],
            Command::Obata | Command::All => &[],
        }
    }

    /// Names of the CSV tables the command writes.
    pub fn tables(self) -> &'static [&'static str] {
        match self {
            Command::FgExpand => &["fg"],
            Command::Static => &["static"],
            Command::Obata => &["obata"],
            Command::All => &["fg", "static", "obata"],
            _ => &[],
        }
    }
}

/// A configuration problem; the CLI maps it to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Physical and numerical parameters (`--param key=value`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    /// `M`
    #[serde(rename = "M")]
    pub mass: f64,
    /// `lambda`, rotation rate of the helical Killing field.
    pub lambda: f64,
    /// `V0`, lapse at the regular center.
    #[serde(rename = "V0")]
    pub v0: f64,
    /// `N`, FG expansion order.
    #[serde(rename = "N")]
    pub order: usize,
    /// `eps`, ladder of sphere parameters (comma separated).
    pub eps: Vec<f64>,
    /// `t0`, time slice of the flux integral.
    pub t0: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            mass: 1.0,
            lambda: 0.3,
            v0: 1.0,
            order: 6,
            eps: vec![1e-1, 1e-2, 1e-3],
            t0: 0.0,
        }
    }
}

pub const PARAM_KEYS: [&str; 6] = ["M", "lambda", "V0", "N", "eps", "t0"];

fn parse_real(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("parameter {key}: `{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(ConfigError(format!("parameter {key}: `{v}` is not finite")));
    }
    Ok(x)
}

fn split_pair(s: &str) -> Result<(&str, &str), ConfigError> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| ConfigError(format!("expected key=value, got `{s}`")))
}

impl Params {
    pub fn set(&mut self, pair: &str) -> Result<(), ConfigError> {
        let (key, v) = split_pair(pair)?;
        match key {
            "M" => self.mass = parse_real(key, v)?,
            "lambda" => self.lambda = parse_real(key, v)?,
            "V0" => {
                self.v0 = parse_real(key, v)?;
                if self.v0 <= 0.0 {
                    return Err(ConfigError("parameter V0 must be positive".into()));
                }
            }
            "N" => {
                let n = parse_real(key, v)?;
                if n.fract() != 0.0 || !(1.0..=24.0).contains(&n) {
                    return Err(ConfigError(format!("parameter N: `{v}` must be an integer in 1..=24")));
                }
                self.order = n as usize;
            }
            "eps" => {
                let eps = v
                    .split(',')
                    .map(|e| parse_real(key, e))
                    .collect::<Result<Vec<_>, _>>()?;
                if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e <= 0.2)) {
                    return Err(ConfigError("parameter eps: values must lie in (0, 0.2]".into()));
                }
                self.eps = eps;
            }
            "t0" => self.t0 = parse_real(key, v)?,
            _ => {
                return Err(ConfigError(format!(
                    "unknown parameter `{key}` (expected one of {})",
                    PARAM_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }
}

/// Everything that determines a run. Two runs with equal configs produce the
/// same report apart from `wall_time_s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub metric: Option<MetricId>,
    pub params: Params,
    pub seed: u64,
    /// Tolerance overrides keyed by check name or check-name prefix.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 3,
            metric: None,
            params: Params::default(),
            seed: 42,
            tolerances: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    /// Builds and validates a configuration from raw command-line pieces.
    pub fn parse(
        command: Command,
        n: usize,
        metric: Option<&str>,
        params: &[String],
        seed: u64,
        tolerances: &[String],
    ) -> Result<Self, ConfigError> {
        if !(3..=5).contains(&n) {
            return Err(ConfigError(format!("--n {n}: boundary dimension must be 3, 4 or 5")));
        }
        let metric = metric.map(MetricId::from_str).transpose()?;
        if let Some(m) = metric {
            if !command.supported_metrics().contains(&m) {
                return Err(ConfigError(format!(
                    "command {} does not take --metric {m}",
                    command.as_str()
                )));
            }
        }
        let mut p = Params::default();
        for pair in params {
            p.set(pair)?;
        }
        let mut tol = BTreeMap::new();
        for pair in tolerances {
            let (key, v) = split_pair(pair)?;
            let x = parse_real(key, v)?;
            if x <= 0.0 {
                return Err(ConfigError(format!("tolerance {key} must be positive")));
            }
            if !checks::is_known_prefix(key) {
                return Err(ConfigError(format!("tolerance key `{key}` matches no check")));
            }
            tol.insert(key.to_string(), x);
        }
        Ok(RunConfig {
            n,
            metric,
            params: p,
            seed,
            tolerances: tol,
        })
    }

    /// Whether checks on `m` should run.
    pub fn wants(&self, m: MetricId) -> bool {
        self.metric.is_none_or(|x| x == m)
    }

    /// The tolerance for a check, honouring the longest matching override.
    pub fn tolerance(&self, check: &str) -> f64 {
        self.tolerances
            .iter()
            .filter(|(k, _)| check == k.as_str() || check.starts_with(&format!("{k}.")))
            .max_by_key(|(k, _)| k.len())
            .map(|(_, v)| *v)
            .unwrap_or_else(|| checks::default_tolerance(check))
    }
}
