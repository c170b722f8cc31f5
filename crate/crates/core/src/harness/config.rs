use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A verification suite, one per algebraic module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GradedCore,
    OddSymmetricAlgebra,
    Hochschild,
    AtiyahFormal,
    LieDictionary,
    RiemannRoch,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::GradedCore,
        Suite::OddSymmetricAlgebra,
        Suite::Hochschild,
        Suite::AtiyahFormal,
        Suite::LieDictionary,
        Suite::RiemannRoch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GradedCore => "graded-core",
            Suite::OddSymmetricAlgebra => "odd-symmetric-algebra",
            Suite::Hochschild => "hochschild",
            Suite::AtiyahFormal => "atiyah-formal",
            Suite::LieDictionary => "lie-dictionary",
            Suite::RiemannRoch => "riemann-roch",
        }
    }

    /// Prefix of every check id in this suite.
    pub fn prefix(self) -> &'static str {
        match self {
            Suite::GradedCore => "graded",
            Suite::OddSymmetricAlgebra => "odd",
            Suite::Hochschild => "hoch",
            Suite::AtiyahFormal => "atiyah",
            Suite::LieDictionary => "lie",
            Suite::RiemannRoch => "rr",
        }
    }

    /// Parse a comma-separated list; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::invalid("no suite selected"));
        }
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || x.prefix() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite {s:?}")))
    }
}

/// Everything a run depends on. Two runs with equal configs produce
/// byte-identical reports unless `timings` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    /// Largest `m` for the odd-algebra and formal Atiyah suites.
    pub dim: usize,
    /// Largest `n` for projective spaces.
    pub rr_dim: usize,
    /// Largest matrix size for the Lie suite.
    pub lie_dim: usize,
    /// Longest exhaustively enumerated Hochschild word.
    pub word_len: usize,
    /// Truncation order of formal series.
    pub order: usize,
    /// Overrides every per-check random sample count when set.
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
    /// Adds a check that always fails; used to test the exit status.
    #[serde(skip)]
    pub inject_failure: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            dim: 4,
            rr_dim: 4,
            lie_dim: 5,
            word_len: 4,
            order: 12,
            samples: None,
            seed: 0,
            out: None,
            timings: false,
            inject_failure: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::invalid("no suite selected"));
        }
        let caps = [
            ("dim", self.dim, 1, 4),
            ("rr-dim", self.rr_dim, 1, 8),
            ("lie-dim", self.lie_dim, 2, 8),
            ("word-len", self.word_len, 1, 5),
            ("order", self.order, 1, 40),
        ];
        for (name, v, lo, hi) in caps {
            if v < lo || v > hi {
                return Err(Error::invalid(format!("{name} must lie in {lo}..={hi}, got {v}")));
            }
        }
        if self.samples == Some(0) {
            return Err(Error::invalid("samples must be positive"));
        }
        Ok(())
    }

    /// Sample count for a check whose default is `default`.
    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    /// Apply one `key = value` setting, as found in a config file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| Error::invalid(format!("{key}: expected a non-negative integer, got {v:?}")))
        };
        let flag = |v: &str| -> Result<bool> {
            match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(Error::invalid(format!("{key}: expected true or false, got {v:?}"))),
            }
        };
        match key {
            "suite" | "suites" => self.suites = Suite::parse_list(value)?,
            "dim" => self.dim = num(value)?,
            "rr-dim" => self.rr_dim = num(value)?,
            "lie-dim" => self.lie_dim = num(value)?,
            "word-len" => self.word_len = num(value)?,
            "order" => self.order = num(value)?,
            "samples" => self.samples = Some(num(value)?),
            "seed" => self.seed = value.parse().map_err(|_| Error::invalid(format!("seed: bad value {value:?}")))?,
            "out" => self.out = Some(PathBuf::from(value)),
            "timings" => self.timings = flag(value)?,
            _ => return Err(Error::invalid(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parse a config file: one `key = value` per line, `#` comments.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v.trim()).map_err(|e| Error::parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(s.prefix().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap(), Suite::ALL.to_vec());
        assert!(Suite::parse_list(" , ").is_err());
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn config_file() {
        let mut c = SuiteConfig::default();
        c.apply_file_text("# comment\nsuite = rr, lie\ndim = 2\nseed=9\n").unwrap();
        assert_eq!(c.suites, vec![Suite::LieDictionary, Suite::RiemannRoch]);
        assert_eq!((c.dim, c.seed), (2, 9));
        assert!(c.apply_file_text("dim 2").is_err());
        assert!(c.apply_file_text("colour = red").is_err());
        c.dim = 9;
        assert!(c.validate().is_err());
    }
}
