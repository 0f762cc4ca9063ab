//! Run configuration: flag values, the key-value config file, and their
//! conversion into typed parameters.
//!
//! Every setting is first gathered as text in a [`RawConfig`] (from the
//! config file, then overridden by flags) and parsed once by
//! [`RunConfig::from_raw`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use shuffle_blanket_core::params::{ShuffleParams, TargetPair};
use shuffle_blanket_core::tightness::DEFAULT_SCAN_POINTS;

use crate::error::{CliError, CliResult};

/// Keys accepted in a config file; they match the long flag names.
pub const CONFIG_KEYS: &[&str] = &[
    "eps0",
    "n",
    "k",
    "pi",
    "eps",
    "pair",
    "others",
    "samples",
    "seed",
    "scan-points",
    "format",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PiSpec {
    Uniform,
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OthersSpec {
    /// Two runs per pair: everyone else holds `x0`, then everyone holds `x1`.
    PairConstants,
    /// Everyone else holds the given element.
    Constant(usize),
    Explicit(Vec<usize>),
}

impl OthersSpec {
    /// The concrete `others` lists to evaluate for `pair`, with labels.
    pub fn resolve(&self, pair: TargetPair, n: u64) -> Vec<(String, Vec<usize>)> {
        let len = n.saturating_sub(1) as usize;
        match self {
            OthersSpec::PairConstants => vec![
                (format!("all:{}", pair.x0), vec![pair.x0; len]),
                (format!("all:{}", pair.x1), vec![pair.x1; len]),
            ],
            OthersSpec::Constant(c) => vec![(format!("all:{c}"), vec![*c; len])],
            OthersSpec::Explicit(list) => vec![(join(list.iter()), list.clone())],
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Unparsed settings keyed by flag name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `other` wins on every key it sets.
    pub fn overridden_by(mut self, other: RawConfig) -> RawConfig {
        self.values.extend(other.values);
        self
    }
}

/// Parses a config file: a flat TOML table whose keys are flag names.
/// Values may be strings in flag syntax, numbers, or arrays of numbers.
pub fn parse_config_text(text: &str) -> CliResult<RawConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Invalid(format!("config: {}", e.message())))?;
    let mut raw = RawConfig::default();
    for (key, value) in table {
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Invalid(format!("config: unknown key `{key}`")));
        }
        let text = toml_value_text(&value)
            .ok_or_else(|| CliError::Invalid(format!("config: unsupported value for `{key}`")))?;
        raw.set(&key, text);
    }
    Ok(raw)
}

fn toml_value_text(value: &toml::Value) -> Option<String> {
    match value {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(format!("{f:?}")),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| match v {
                toml::Value::Integer(i) => Some(i.to_string()),
                toml::Value::Float(f) => Some(format!("{f:?}")),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|parts| parts.join(",")),
        _ => None,
    }
}

fn invalid(field: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{field}: {detail}"))
}

fn split_list(field: &str, text: &str) -> CliResult<Vec<String>> {
    let parts: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    if parts.iter().any(String::is_empty) {
        return Err(invalid(field, format!("empty item in list `{text}`")));
    }
    Ok(parts)
}

/// Comma-separated reals. Non-finite values are rejected.
pub fn parse_f64_list(field: &str, text: &str) -> CliResult<Vec<f64>> {
    split_list(field, text)?
        .iter()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(v) => Err(invalid(field, format!("value {v} is not finite"))),
            Err(_) => Err(invalid(field, format!("`{s}` is not a number"))),
        })
        .collect()
}

pub fn parse_u64_list(field: &str, text: &str) -> CliResult<Vec<u64>> {
    split_list(field, text)?
        .iter()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| invalid(field, format!("`{s}` is not a non-negative integer")))
        })
        .collect()
}

fn parse_usize(field: &str, text: &str) -> CliResult<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| invalid(field, format!("`{text}` is not a non-negative integer")))
}

/// `uniform` or a comma list of `k` probabilities. Only syntax is checked
/// here; the probability constraints are checked with the instance.
pub fn parse_pi(text: &str, k: usize) -> CliResult<PiSpec> {
    if text.trim() == "uniform" {
        return Ok(PiSpec::Uniform);
    }
    let values = parse_f64_list("pi", text)?;
    if values.len() != k {
        return Err(invalid("pi", format!("expected {k} entries, got {}", values.len())));
    }
    Ok(PiSpec::Explicit(values))
}

/// One or more `x0,x1` pairs separated by `;`.
pub fn parse_pairs(text: &str, k: usize) -> CliResult<Vec<TargetPair>> {
    text.split(';')
        .map(|part| {
            let items = parse_u64_list("pair", part)?;
            if items.len() != 2 {
                return Err(invalid("pair", format!("`{part}` is not of the form x0,x1")));
            }
            let (x0, x1) = (items[0] as usize, items[1] as usize);
            TargetPair::new(x0, x1, k).map_err(|e| invalid("pair", e))
        })
        .collect()
}

/// `all:c` or a comma list of `n - 1` element indices.
pub fn parse_others(text: &str, k: usize) -> CliResult<OthersSpec> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("all:") {
        let c = parse_usize("others", rest)?;
        if c >= k {
            return Err(invalid("others", format!("element {c} out of range for k = {k}")));
        }
        return Ok(OthersSpec::Constant(c));
    }
    if text.is_empty() {
        return Ok(OthersSpec::Explicit(Vec::new()));
    }
    let list = parse_u64_list("others", text)?;
    if let Some(bad) = list.iter().find(|&&x| x >= k as u64) {
        return Err(invalid("others", format!("element {bad} out of range for k = {k}")));
    }
    Ok(OthersSpec::Explicit(list.into_iter().map(|x| x as usize).collect()))
}

pub fn parse_format(text: &str) -> CliResult<Format> {
    match text.trim() {
        "csv" => Ok(Format::Csv),
        "text" => Ok(Format::Text),
        other => Err(invalid("format", format!("`{other}` is not one of csv, text"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eps0: Vec<f64>,
    pub n: Vec<u64>,
    pub k: usize,
    pub pi: PiSpec,
    pub eps: Vec<f64>,
    pub pairs: Vec<TargetPair>,
    pub others: OthersSpec,
    pub samples: usize,
    pub seed: u64,
    pub scan_points: usize,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> CliResult<RunConfig> {
        let required = |key: &str| {
            raw.get(key)
                .ok_or_else(|| CliError::Invalid(format!("{key}: missing (pass --{key})")))
        };
        let eps0 = parse_f64_list("epsilon0", required("eps0")?)?;
        let n = parse_u64_list("n", required("n")?)?;
        let k = match raw.get("k") {
            Some(t) => parse_usize("k", t)?,
            None => 2,
        };
        if k < 2 {
            return Err(invalid("k", format!("alphabet size must be at least 2, got {k}")));
        }
        let pi = match raw.get("pi") {
            Some(t) => parse_pi(t, k)?,
            None => PiSpec::Uniform,
        };
        let eps = match raw.get("eps") {
            Some(t) => parse_f64_list("eps", t)?,
            None => Vec::new(),
        };
        let pairs = match raw.get("pair") {
            Some(t) => parse_pairs(t, k)?,
            None => vec![TargetPair { x0: 0, x1: 1 }],
        };
        let others = match raw.get("others") {
            Some(t) => parse_others(t, k)?,
            None => OthersSpec::PairConstants,
        };
        let samples = match raw.get("samples") {
            Some(t) => parse_usize("samples", t)?,
            None => 0,
        };
        let seed = match raw.get("seed") {
            Some(t) => t
                .trim()
                .parse::<u64>()
                .map_err(|_| invalid("seed", format!("`{t}` is not a 64-bit unsigned integer")))?,
            None => 0,
        };
        let scan_points = match raw.get("scan-points") {
            Some(t) => parse_usize("scan-points", t)?,
            None => DEFAULT_SCAN_POINTS,
        };
        if scan_points == 0 {
            return Err(invalid("scan-points", "must be at least 1"));
        }
        let format = raw.get("format").map(parse_format).transpose()?;
        let out = raw.get("out").map(PathBuf::from);

        let config = RunConfig {
            eps0,
            n,
            k,
            pi,
            eps,
            pairs,
            others,
            samples,
            seed,
            scan_points,
            format,
            out,
        };
        // Surface instance errors (naming the offending field) up front.
        for &e0 in &config.eps0 {
            for &n in &config.n {
                config.params_for(e0, n)?;
            }
        }
        Ok(config)
    }

    pub fn pi_vector(&self) -> Vec<f64> {
        match &self.pi {
            PiSpec::Uniform => vec![1.0 / self.k as f64; self.k],
            PiSpec::Explicit(v) => v.clone(),
        }
    }

    pub fn params_for(&self, eps0: f64, n: u64) -> CliResult<ShuffleParams> {
        Ok(ShuffleParams::new(eps0, n, self.k, self.pi_vector())?)
    }

    /// The single instance for commands that do not sweep.
    pub fn params(&self) -> CliResult<ShuffleParams> {
        match (self.eps0.as_slice(), self.n.as_slice()) {
            ([e0], [n]) => self.params_for(*e0, *n),
            _ => Err(CliError::Invalid(
                "eps0 and n take a single value here; use `sweep` for grids".into(),
            )),
        }
    }

    pub fn require_eps(&self) -> CliResult<&[f64]> {
        if self.eps.is_empty() {
            Err(CliError::Invalid("eps: missing (pass --eps)".into()))
        } else {
            Ok(&self.eps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> RawConfig {
        let mut r = RawConfig::default();
        for (k, v) in pairs {
            r.set(k, *v);
        }
        r
    }

    #[test]
    fn minimal_config_defaults() {
        let c = RunConfig::from_raw(&raw(&[("eps0", "0.5"), ("n", "100")])).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.pi_vector(), vec![0.5, 0.5]);
        assert_eq!(c.pairs, vec![TargetPair { x0: 0, x1: 1 }]);
        assert_eq!(c.scan_points, DEFAULT_SCAN_POINTS);
        assert_eq!(c.others, OthersSpec::PairConstants);
        assert!(c.eps.is_empty());
    }

    #[test]
    fn zero_epsilon0_names_the_field() {
        let err = RunConfig::from_raw(&raw(&[("eps0", "0"), ("n", "100")])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("epsilon0"));
    }

    #[test]
    fn list_syntax() {
        assert_eq!(parse_f64_list("eps", "0.5, 1,2e-1").unwrap(), vec![0.5, 1.0, 0.2]);
        assert!(parse_f64_list("eps", "0.5,,1").is_err());
        assert!(parse_f64_list("eps", "inf").is_err());
        assert!(parse_f64_list("eps", "abc").is_err());
        assert_eq!(parse_pi("uniform", 3).unwrap(), PiSpec::Uniform);
        assert!(parse_pi("0.5,0.5", 3).is_err());
        assert_eq!(
            parse_pairs("0,1;2,0", 3).unwrap(),
            vec![TargetPair { x0: 0, x1: 1 }, TargetPair { x0: 2, x1: 0 }]
        );
        assert!(parse_pairs("1,1", 3).is_err());
        assert!(parse_pairs("0,1,2", 3).is_err());
        assert_eq!(parse_others("all:1", 2).unwrap(), OthersSpec::Constant(1));
        assert!(parse_others("all:2", 2).is_err());
        assert_eq!(parse_others("0,1,1", 2).unwrap(), OthersSpec::Explicit(vec![0, 1, 1]));
        assert!(parse_others("0,5", 2).is_err());
    }

    #[test]
    fn config_file_and_overrides() {
        let text = r#"
            eps0 = 0.5
            n = 100
            k = 3
            pi = [0.2, 0.3, 0.5]
            eps = "0.5,1.0"
            scan-points = 500
        "#;
        let file = parse_config_text(text).unwrap();
        let flags = raw(&[("n", "10")]);
        let c = RunConfig::from_raw(&file.overridden_by(flags)).unwrap();
        assert_eq!(c.n, vec![10]);
        assert_eq!(c.k, 3);
        assert_eq!(c.pi, PiSpec::Explicit(vec![0.2, 0.3, 0.5]));
        assert_eq!(c.eps, vec![0.5, 1.0]);
        assert_eq!(c.scan_points, 500);
    }

    #[test]
    fn config_file_rejects_unknown_keys_and_tables() {
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("[eps0]\nx = 1").is_err());
        assert!(parse_config_text("eps0 = true").is_err());
        assert!(parse_config_text("eps0 = ").is_err());
    }

    #[test]
    fn others_resolution() {
        let pair = TargetPair { x0: 0, x1: 1 };
        let lists = OthersSpec::PairConstants.resolve(pair, 4);
        assert_eq!(lists[0], ("all:0".to_string(), vec![0, 0, 0]));
        assert_eq!(lists[1], ("all:1".to_string(), vec![1, 1, 1]));
        assert_eq!(
            OthersSpec::Explicit(vec![1, 0]).resolve(pair, 3)[0].0,
            "1;0".to_string()
        );
    }

    #[test]
    fn grid_needs_sweep() {
        let c = RunConfig::from_raw(&raw(&[("eps0", "0.1,0.2"), ("n", "10")])).unwrap();
        assert!(c.params().is_err());
        assert!(c.require_eps().is_err());
    }
}
