//! Run settings layered as: command-line flag > `PARAMETRA_*` environment variable >
//! config file (`key = value` lines) > built-in default.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use parametra_core::genericity::SignConstraint;
use parametra_core::ordering::ModOrder;

use crate::interp::Options;

pub const ENV_PREFIX: &str = "PARAMETRA_";

/// Keys accepted in config files; the environment variable is `PARAMETRA_<KEY>` uppercased.
pub const KEYS: [&str; 7] = ["format", "order", "max_ext", "constraints", "seed", "samples", "out_dir"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected text or json)")),
        }
    }
}

/// Values as given by the user, before defaults.
#[derive(Clone, Debug, Default)]
pub struct RawSettings {
    pub values: BTreeMap<String, String>,
}

impl RawSettings {
    /// Fills keys that are still unset from `other`.
    pub fn fallback(&mut self, other: &RawSettings) {
        for (k, v) in &other.values {
            self.values.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }
}

pub fn parse_config(text: &str, origin: &Path) -> Result<RawSettings, String> {
    let mut out = RawSettings::default();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("{}:{}: expected `key = value`", origin.display(), n + 1))?;
        let k = k.trim().to_ascii_lowercase().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(format!("{}:{}: unknown key `{k}`", origin.display(), n + 1));
        }
        out.values.insert(k, v.trim().to_string());
    }
    Ok(out)
}

pub fn from_env(vars: impl Iterator<Item = (String, String)>) -> RawSettings {
    let mut out = RawSettings::default();
    for (k, v) in vars {
        if let Some(key) = k.strip_prefix(ENV_PREFIX) {
            let key = key.to_ascii_lowercase();
            if KEYS.contains(&key.as_str()) {
                out.values.insert(key, v);
            }
        }
    }
    out
}

/// `pos=g,m1;nonneg=d1;nonzero=z`; also accepts `positive`, `nonnegative`.
pub fn parse_constraints(text: &str) -> Result<Vec<(String, SignConstraint)>, String> {
    let mut out = Vec::new();
    for group in text.split(';').map(str::trim).filter(|g| !g.is_empty()) {
        let (kind, names) = group.split_once('=').ok_or_else(|| format!("constraint group `{group}` lacks `=`"))?;
        let c = match kind.trim() {
            "pos" | "positive" => SignConstraint::Positive,
            "nonneg" | "nonnegative" => SignConstraint::NonNegative,
            "nonzero" => SignConstraint::NonZero,
            k => return Err(format!("unknown constraint kind `{k}` (expected pos, nonneg or nonzero)")),
        };
        for n in names.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            out.push((n.to_string(), c));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub format: Format,
    pub out_dir: Option<PathBuf>,
    pub options: Options,
}

pub const DEFAULT_SAMPLES: usize = 20;

pub fn resolve(raw: &RawSettings) -> Result<Settings, String> {
    let get = |k: &str| raw.values.get(k).map(String::as_str);
    let format = get("format").map(str::parse).transpose()?.unwrap_or(Format::Text);
    let order = get("order").map(ModOrder::parse).transpose()?;
    let max_ext = get("max_ext").map(|v| v.parse::<usize>().map_err(|_| format!("max_ext: `{v}` is not a count"))).transpose()?;
    let constraints = get("constraints").map(parse_constraints).transpose()?.unwrap_or_default();
    let seed = get("seed").map(|v| v.parse::<u64>().map_err(|_| format!("seed: `{v}` is not an unsigned integer"))).transpose()?.unwrap_or(0);
    let samples = get("samples")
        .map(|v| v.parse::<usize>().map_err(|_| format!("samples: `{v}` is not a count")))
        .transpose()?
        .unwrap_or(DEFAULT_SAMPLES);
    Ok(Settings {
        format,
        out_dir: get("out_dir").map(PathBuf::from),
        options: Options { order, max_ext, constraints, seed, samples },
    })
}
