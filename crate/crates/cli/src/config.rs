//! Optional TOML config. Top-level keys apply everywhere (`threads`), and a
//! table named after the subcommand holds its parameters, spelled like the
//! long flags with `_` for `-`:
//!
//! ```toml
//! threads = 4
//! [phi]
//! sigma = 0.75
//! prime_cutoff_p = 100000
//! ```
//!
//! Flags given on the command line win.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::de::DeserializeOwned;

#[derive(Debug, Default)]
pub struct Config {
    root: toml::Table,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            root: text.parse::<toml::Table>()?,
        })
    }

    pub fn section(&self, name: &str) -> Result<Section> {
        let table = match self.root.get(name) {
            None => toml::Table::new(),
            Some(toml::Value::Table(t)) => t.clone(),
            Some(_) => return Err(anyhow!("config key `{name}` must be a table")),
        };
        Ok(Section {
            name: name.to_string(),
            table,
        })
    }

    pub fn top<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        lookup(&self.root, key).with_context(|| format!("config key `{key}`"))
    }
}

#[derive(Debug)]
pub struct Section {
    name: String,
    table: toml::Table,
}

impl Section {
    /// `flag`, else the config value, else `default`.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        lookup(&self.table, key).with_context(|| format!("config key `{}.{key}`", self.name))
    }

    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.pick_opt(flag, key)?.ok_or_else(|| {
            anyhow!(
                "missing `--{}` (or `{key}` under [{}] in the config)",
                key.replace('_', "-"),
                self.name
            )
        })
    }
}

fn lookup<T: DeserializeOwned>(table: &toml::Table, key: &str) -> Result<Option<T>> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => Ok(Some(v.clone().try_into()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_config() {
        let cfg = Config::parse("threads = 3\n[phi]\nsigma = 0.75\nys = [0.5, 1.0]\n").unwrap();
        let phi = cfg.section("phi").unwrap();
        assert_eq!(cfg.top::<usize>("threads").unwrap(), Some(3));
        assert_eq!(phi.pick(None, "sigma", 1.0).unwrap(), 0.75);
        assert_eq!(phi.pick(Some(2.0), "sigma", 1.0).unwrap(), 2.0);
        assert_eq!(phi.pick(None, "prime_cutoff_p", 7u64).unwrap(), 7);
        assert_eq!(phi.require::<Vec<f64>>(None, "ys").unwrap(), vec![0.5, 1.0]);
        assert!(cfg
            .section("density")
            .unwrap()
            .require::<f64>(None, "sigma")
            .is_err());
        assert!(phi.pick::<u64>(None, "sigma", 0).is_err());
    }
}
