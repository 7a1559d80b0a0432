//! Option resolution: command-line flags override `key = value` lines from
//! an optional config file, which override built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Parsed config file: UTF-8 lines of `key = value`, `#` comments allowed.
/// Keys match the CLI flag names (without the leading dashes).
#[derive(Clone, Debug, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected `key = value`, got `{raw}`", lineno + 1);
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse::<T>() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key `{key}`: cannot parse `{raw}`: {e}"),
            },
        }
    }

    /// Canonical text of the entries, the input to the config content hash.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// CLI flag, then config file, then default.
pub fn pick<T: FromStr>(cli: Option<T>, file: &ConfigMap, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = cli {
        return Ok(v);
    }
    Ok(file.get::<T>(key)?.unwrap_or(default))
}

/// Same, but without a default: the value must come from somewhere.
pub fn pick_required<T: FromStr>(cli: Option<T>, file: &ConfigMap, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = cli {
        return Ok(v);
    }
    match file.get::<T>(key)? {
        Some(v) => Ok(v),
        None => bail!("missing required option `--{key}` (flag or config file)"),
    }
}

/// Parse `a:b` pairs such as `--window 1e2:1e4` or `--t-decades 2:4`.
pub fn parse_pair(raw: &str) -> Result<(f64, f64)> {
    let Some((a, b)) = raw.split_once(':') else {
        bail!("expected `lo:hi`, got `{raw}`");
    };
    let lo: f64 = a.trim().parse().with_context(|| format!("parsing `{a}`"))?;
    let hi: f64 = b.trim().parse().with_context(|| format!("parsing `{b}`"))?;
    if !(hi > lo) {
        bail!("range must satisfy lo < hi, got {lo}:{hi}");
    }
    Ok((lo, hi))
}
