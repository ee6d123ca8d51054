//! Flat `key = value` config files. Keys are the long flag names without the
//! leading dashes (`alpha`, `p1`, `absorption-table`, ...). Blank lines and
//! lines starting with `#` are ignored. A flag given on the command line
//! always wins over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let k = k.trim().trim_start_matches("--").to_string();
            if entries.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key `{k}`", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Ingest(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fails on any key outside `known`.
    pub fn check_keys(&self, known: &[&str]) -> CliResult<()> {
        match self.entries.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::Usage(format!("unknown config key `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`: {e}")))
            })
            .transpose()
    }

    /// `flag` if given, else the config value, else `None`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn resolve_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let c = Config::parse("# comment\nalpha = 4\n\n--zeta=0.5\n").unwrap();
        assert_eq!(c.resolve(Some(3.0), "alpha").unwrap(), Some(3.0));
        assert_eq!(c.resolve::<f64>(None, "alpha").unwrap(), Some(4.0));
        assert_eq!(c.resolve::<f64>(None, "zeta").unwrap(), Some(0.5));
        assert_eq!(c.resolve::<f64>(None, "p1").unwrap(), None);
        assert!(c.check_keys(&["alpha"]).is_err());
        assert!(c.check_keys(&["alpha", "zeta"]).is_ok());
    }

    #[test]
    fn malformed_lines() {
        assert!(Config::parse("alpha 4").is_err());
        assert!(Config::parse("a=1\na=2").is_err());
        assert!(Config::parse("alpha=x").unwrap().get::<f64>("alpha").is_err());
    }
}
