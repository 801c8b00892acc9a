//! `key = value` configuration files and the data directory variable.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use xling_core::{Error, Result};

/// Relative paths are resolved against this directory when it is set.
pub const DATA_DIR_ENV: &str = "XLING_DATA_DIR";

pub const KNOWN_KEYS: &[&str] = &[
    "source_lang",
    "target_lang",
    "kind",
    "side",
    "k",
    "train_fraction",
    "seed",
    "oversampling",
    "power_iterations",
    "n",
    "top_n",
    "k_values",
    "method",
    "measure",
    "provider",
    "dictionary",
    "translations",
    "group_by",
    "mutual_best",
    "lowercase",
    "min_frequency",
    "reducer_source",
    "reducer_target",
    "stopwords",
    "prefixes",
    "suffixes",
    "lemmas",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    origin: String,
    values: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Blank lines and `#` comments are skipped; values may be quoted.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::Precondition(format!("{origin}:{line_no}: {reason}"));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value".into()))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(bad(format!("unknown key {key:?}")));
            }
            let value = value.trim();
            let value = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .unwrap_or(value);
            if values.insert(key.to_string(), (line_no, value.to_string())).is_some() {
                return Err(bad(format!("duplicate key {key:?}")));
            }
        }
        Ok(Self {
            origin: origin.to_string(),
            values,
        })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        debug_assert!(KNOWN_KEYS.contains(&key), "{key}");
        match self.values.get(key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|e| {
                Error::Precondition(format!("{}:{line}: invalid value for {key}: {e}", self.origin))
            }),
        }
    }

    pub fn path(&self, key: &str) -> Result<Option<PathBuf>> {
        Ok(self.get::<String>(key)?.map(|p| data_path(Path::new(&p))))
    }

    /// Flag value, else file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_path(&self, flag: Option<&Path>, key: &str) -> Result<Option<PathBuf>> {
        match flag {
            Some(p) => Ok(Some(data_path(p))),
            None => self.path(key),
        }
    }
}

pub fn data_path(path: &Path) -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Comma-separated list such as `1,5,10`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KList(pub Vec<usize>);

impl FromStr for KList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let ks = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if ks.is_empty() || ks.contains(&0) {
            return Err("k values must be positive".into());
        }
        Ok(KList(ks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quotes_and_comments() {
        let c = ConfigFile::parse("# run\nk = 50\nstopwords = \"stop words.txt\"\n\n", "t").unwrap();
        assert_eq!(c.get::<usize>("k").unwrap(), Some(50));
        assert_eq!(c.get::<String>("stopwords").unwrap().as_deref(), Some("stop words.txt"));
        assert_eq!(c.pick(Some(7usize), "k", 300).unwrap(), 7);
        assert_eq!(c.pick(None, "seed", 42u64).unwrap(), 42);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = ConfigFile::parse("k = 1\nrank = 2", "cfg").unwrap_err();
        assert!(err.to_string().contains("cfg:2: unknown key \"rank\""), "{err}");
        assert!(ConfigFile::parse("k = 1\nk = 2", "cfg").is_err());
        assert!(ConfigFile::parse("just words", "cfg").is_err());
    }

    #[test]
    fn bad_value_names_key() {
        let c = ConfigFile::parse("k = many", "cfg").unwrap();
        assert!(c.get::<usize>("k").unwrap_err().to_string().contains("cfg:1: invalid value for k"));
    }

    #[test]
    fn k_lists() {
        assert_eq!("1, 5".parse::<KList>().unwrap(), KList(vec![1, 5]));
        assert!("0".parse::<KList>().is_err());
    }
}
