//! Flag / config-file / default resolution.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qcausal_core::experiment::{ExperimentConfig, Measure};
use qcausal_core::StrategyKind;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

pub fn parse_strategy(s: &str) -> Result<StrategyKind, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "cyclic" => Ok(StrategyKind::Cyclic),
        "random" => Ok(StrategyKind::Random),
        other => Err(format!("unknown strategy `{other}` (expected cyclic or random)")),
    }
}

/// Angle in radians. Accepts plain numbers and multiples of pi: `pi`, `2pi`, `0.5*pi`, `-pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let value = match t.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad angle `{s}`"))?,
            };
            c * PI
        }
        None => t.parse::<f64>().map_err(|_| format!("bad angle `{s}`"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle `{s}` is not finite"))
    }
}

pub fn parse_measures(s: &str) -> Result<Vec<Measure>, String> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let m = part.parse::<Measure>().map_err(|e| e.to_string())?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

/// Inclusive integer range: `3` or `1..4` (both ends included).
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let t = s.trim();
    let (lo, hi) = match t.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim(), b.trim())
        }
        None => (t, t),
    };
    let lo: usize = lo.parse().map_err(|_| format!("bad range `{s}`"))?;
    let hi: usize = hi.parse().map_err(|_| format!("bad range `{s}`"))?;
    if lo > hi {
        return Err(format!("range `{s}` is empty"));
    }
    Ok(lo..=hi)
}

/// `key = value` lines; `#` starts a comment. Keys may use `-` or `_`.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "k", "d", "r", "theta_start", "theta_end", "steps", "measures", "seed", "strategy", "format", "out",
    "dump_circuit",
];

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// `flag`, else the file's value for `key`, else `default`.
    pub fn pick<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
        default: T,
    ) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => parse(raw).map_err(|e| CliError::Usage(format!("config `{key}`: {e}"))),
            None => Ok(default),
        }
    }

    pub fn pick_opt<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|raw| parse(raw).map_err(|e| CliError::Usage(format!("config `{key}`: {e}"))))
            .transpose()
    }
}

pub fn parse_usize(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim().parse().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
}

pub fn parse_path(s: &str) -> Result<PathBuf, String> {
    Ok(PathBuf::from(s.trim()))
}

/// Where the output goes; `None` is stdout.
#[derive(Debug, Clone)]
pub struct Sink {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    pub fn resolve(file: &ConfigFile, out: Option<PathBuf>, format: Option<Format>) -> Result<Self, CliError> {
        let path = file.pick_opt(out, "out", parse_path)?.filter(|p| p.as_os_str() != "-");
        let format = file.pick(format, "format", Format::from_str, Format::Csv)?;
        Ok(Sink { path, format })
    }
}

pub fn experiment_config(
    file: &ConfigFile,
    flags: &crate::ExperimentFlags,
) -> Result<ExperimentConfig, CliError> {
    let def = ExperimentConfig::default();
    Ok(ExperimentConfig {
        k: file.pick(flags.k, "k", parse_usize, def.k)?,
        d: file.pick(flags.d, "d", parse_usize, def.d)?,
        r: file.pick(flags.r, "r", parse_usize, def.r)?,
        theta_start: file.pick(flags.theta_start, "theta_start", parse_angle, def.theta_start)?,
        theta_end: file.pick(flags.theta_end, "theta_end", parse_angle, def.theta_end)?,
        theta_steps: file.pick(flags.steps, "steps", parse_usize, def.theta_steps)?,
        measures: file.pick(
            flags.measures.as_deref().map(parse_measures).transpose().map_err(CliError::Usage)?,
            "measures",
            parse_measures,
            def.measures,
        )?,
        seed: file.pick(flags.seed, "seed", parse_u64, def.seed)?,
        strategy: file.pick(flags.strategy, "strategy", parse_strategy, def.strategy)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("4pi").unwrap(), 4.0 * PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("inf").is_err());
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..4").unwrap(), 1..=4);
        assert_eq!(parse_range("1..=4").unwrap(), 1..=4);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("4..1").is_err());
    }

    #[test]
    fn measures_are_canonical() {
        assert_eq!(parse_measures("hs,trace,hs").unwrap(), vec![Measure::Trace, Measure::Hs]);
        assert!(parse_measures("none").unwrap().is_empty());
        assert!(parse_measures("l1").is_err());
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let file = ConfigFile::parse("k = 3\n# comment\nsteps=9 # trailing\n").unwrap();
        assert_eq!(file.pick(Some(5), "k", parse_usize, 4).unwrap(), 5);
        assert_eq!(file.pick(None, "k", parse_usize, 4).unwrap(), 3);
        assert_eq!(file.pick(None, "d", parse_usize, 1).unwrap(), 1);
        assert!(ConfigFile::parse("bogus=1").is_err());
        assert!(ConfigFile::parse("k").is_err());
    }
}
