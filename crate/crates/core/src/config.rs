//! Flat `section.key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Values run to the end
//! of the line and are trimmed. A key may appear only once per file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::data::{GenSpec, SizeDist};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn valid_key(key: &str) -> bool {
    let mut parts = key.split('.');
    let ok = |p: Option<&str>| {
        p.is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
    };
    ok(parts.next()) && ok(parts.next()) && parts.next().is_none()
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected 'section.key = value'", i + 1)));
            };
            let key = key.trim();
            if !valid_key(key) {
                return Err(Error::Config(format!("line {}: malformed key '{key}'", i + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets or replaces a value, as command-line overrides do.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(valid_key(key), "{key}");
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    /// Drops every key of a section, e.g. `gen`.
    pub fn remove_section(&mut self, section: &str) {
        let prefix = format!("{section}.");
        self.entries.retain(|k, _| !k.starts_with(&prefix));
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("cannot parse '{v}' for {key}")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Fails on the first key not in `known`.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        match self.keys().find(|k| !known.contains(k)) {
            Some(k) => Err(Error::Config(format!("unknown key '{k}'"))),
            None => Ok(()),
        }
    }

    /// Reads a generator spec from the `gen.*` keys, falling back to `base`.
    pub fn gen_spec(&self, base: GenSpec) -> Result<GenSpec> {
        Ok(GenSpec {
            m: self.get_or("gen.m", base.m)?,
            t: self.get_or("gen.t", base.t)?,
            q: self.get_or("gen.q", base.q)?,
            size: self.get_or::<SizeDist>("gen.size", base.size)?,
            seed: self.get_or("gen.seed", base.seed)?,
        })
    }

    /// True when any `gen.*` key is present.
    pub fn has_gen(&self) -> bool {
        self.keys().any(|k| k.starts_with("gen."))
    }
}

/// Expands an inline generator spec such as `q=0.2,size=lognormal:1:1.2,M=500,T=96`
/// into `gen.*` keys. Keys are case-insensitive.
pub fn apply_gen_flag(config: &mut Config, spec: &str) -> Result<()> {
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return Err(Error::Config(format!("generator item '{item}' is not key=value")));
        };
        let key = match k.trim().to_ascii_lowercase().as_str() {
            "q" => "gen.q",
            "size" => "gen.size",
            "m" => "gen.m",
            "t" => "gen.t",
            "seed" => "gen.seed",
            other => return Err(Error::Config(format!("unknown generator key '{other}'"))),
        };
        config.set(key, v.trim());
    }
    Ok(())
}
