//! Run configuration.
//!
//! The file format is one `key = value` pair per line; blank lines and
//! lines starting with `#` are ignored. Keys: `lll_delta`, `hmax`,
//! `enum_cap`, `mc_seed`, `threads` (`auto` or a count), `round_places`,
//! `cert_primes` (comma-separated), `unit_effort`, `candidates`
//! (`max_f` or `all`).

use crate::error::{Error, Result};
use crate::lattice::SearchBounds;
use crate::nf::default_cert_primes;
use crate::tau::CandidatePolicy;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub lll_delta: f64,
    pub hmax: u32,
    pub enum_cap: u64,
    pub mc_seed: u64,
    /// None = one worker per core
    pub threads: Option<usize>,
    pub round_places: u32,
    pub cert_primes: Vec<u64>,
    /// element budget for the internal unit search
    pub unit_effort: u64,
    pub candidates: CandidatePolicy,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lll_delta: 0.99,
            hmax: 12,
            enum_cap: 10_000_000,
            mc_seed: 3_405_691_582,
            threads: None,
            round_places: 1,
            cert_primes: default_cert_primes(),
            unit_effort: 20_000,
            candidates: CandidatePolicy::MaxF,
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Invalid(format!("config: bad value {value:?} for {key}"))
}

impl Config {
    pub fn bounds(&self) -> SearchBounds {
        SearchBounds {
            lll_delta: self.lll_delta,
            hmax: self.hmax,
            enum_cap: self.enum_cap,
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "lll_delta" => self.lll_delta = v.parse().map_err(|_| bad(key, v))?,
            "hmax" => self.hmax = v.parse().map_err(|_| bad(key, v))?,
            "enum_cap" => {
                self.enum_cap = match v.parse::<u64>() {
                    Ok(x) => x,
                    // accept 1e7 style
                    Err(_) => v.parse::<f64>().map_err(|_| bad(key, v))? as u64,
                }
            }
            "mc_seed" => self.mc_seed = v.parse().map_err(|_| bad(key, v))?,
            "threads" => {
                self.threads = if v == "auto" {
                    None
                } else {
                    Some(v.parse().map_err(|_| bad(key, v))?)
                }
            }
            "round_places" => self.round_places = v.parse().map_err(|_| bad(key, v))?,
            "cert_primes" => {
                self.cert_primes = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse().map_err(|_| bad(key, v)))
                    .collect::<Result<_>>()?
            }
            "unit_effort" => self.unit_effort = v.parse().map_err(|_| bad(key, v))?,
            "candidates" => {
                self.candidates = match v {
                    "max_f" => CandidatePolicy::MaxF,
                    "all" => CandidatePolicy::All,
                    _ => return Err(bad(key, v)),
                }
            }
            other => return Err(Error::Invalid(format!("config: unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut c = Config::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Invalid(format!("config line {}: expected key = value", i + 1))
            })?;
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lll_delta > 0.25 && self.lll_delta < 1.0) {
            return Err(Error::Invalid(
                "config: lll_delta must lie in (0.25, 1)".into(),
            ));
        }
        if self.hmax < 1 {
            return Err(Error::Invalid("config: hmax must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective configuration in the file format. `threads` is left out
    /// because it never affects results.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lll_delta = {}", self.lll_delta);
        let _ = writeln!(s, "hmax = {}", self.hmax);
        let _ = writeln!(s, "enum_cap = {}", self.enum_cap);
        let _ = writeln!(s, "mc_seed = {}", self.mc_seed);
        let _ = writeln!(s, "round_places = {}", self.round_places);
        let primes: Vec<String> = self.cert_primes.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "cert_primes = {}", primes.join(","));
        let _ = writeln!(s, "unit_effort = {}", self.unit_effort);
        let pol = match self.candidates {
            CandidatePolicy::MaxF => "max_f",
            CandidatePolicy::All => "all",
        };
        let _ = writeln!(s, "candidates = {pol}");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::default();
        assert_eq!(Config::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn parse_overrides() {
        let c =
            Config::parse("# comment\nhmax = 3\nenum_cap = 1e5\nthreads = 4\ncandidates = all\n")
                .unwrap();
        assert_eq!(c.hmax, 3);
        assert_eq!(c.enum_cap, 100_000);
        assert_eq!(c.threads, Some(4));
        assert_eq!(c.candidates, CandidatePolicy::All);
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(Config::parse("lll_delta = 0.2").is_err());
        assert!(Config::parse("colour = blue").is_err());
    }
}
