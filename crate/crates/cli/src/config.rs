//! `key = value` parameter files for the `example` subcommand.

use std::path::PathBuf;

use toral_core::IntegerMatrix;

use crate::CliError;

/// Parameters read from a config file; every field is optional and overridden by flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub matrix: Option<IntegerMatrix>,
    pub stages: Option<usize>,
    pub resolution: Option<Vec<usize>>,
    pub orbit_steps: Option<u64>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

pub const KEYS: [&str; 8] = ["alpha", "beta", "matrix", "stages", "resolution", "orbit_steps", "seed", "out_dir"];

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse {v:?}")))
}

/// Parses `a,b,c,d` as `[[a, b], [c, d]]`.
pub fn parse_matrix(v: &str) -> Result<IntegerMatrix, CliError> {
    let parts = v.split(',').map(|s| number::<i64>("matrix", s.trim())).collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [a, b, c, d] => Ok(IntegerMatrix { a, b, c, d }),
        _ => Err(CliError::Usage(format!("matrix: expected four integers a,b,c,d, got {v:?}"))),
    }
}

/// Parses a comma-separated resolution list.
pub fn parse_resolutions(v: &str) -> Result<Vec<usize>, CliError> {
    v.split(',').map(|s| number("resolution", s.trim())).collect()
}

impl Config {
    /// Blank lines and `#` comments are skipped; unknown or repeated keys are rejected.
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut c = Config::default();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {k:?} (known: {})",
                    n + 1,
                    KEYS.join(", ")
                )));
            }
            if seen.contains(&k) {
                return Err(CliError::Usage(format!("config line {}: key {k:?} repeated", n + 1)));
            }
            seen.push(k);
            match k {
                "alpha" => c.alpha = Some(number(k, v)?),
                "beta" => c.beta = Some(number(k, v)?),
                "matrix" => c.matrix = Some(parse_matrix(v)?),
                "stages" => c.stages = Some(number(k, v)?),
                "resolution" => c.resolution = Some(parse_resolutions(v)?),
                "orbit_steps" => c.orbit_steps = Some(number(k, v)?),
                "seed" => c.seed = Some(number(k, v)?),
                "out_dir" => c.out_dir = Some(PathBuf::from(v)),
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(c)
    }
}
