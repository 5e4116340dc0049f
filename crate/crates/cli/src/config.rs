//! Run configuration: built-in defaults, then an optional `key=value` file,
//! then the term-budget environment variable, then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use padic_kernel::{Place, Rat};

pub const BUDGET_ENV: &str = "PADIC_KERNEL_TERM_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputMode {
    Json,
    Table,
}

impl FromStr for OutputMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputMode::Json),
            "table" => Ok(OutputMode::Table),
            _ => Err(format!("output must be json or table, got {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub place: Option<Place>,
    pub h: Rat,
    /// `h` was set by the config file or a flag.
    pub h_given: bool,
    pub tolerance: f64,
    pub term_budget: u64,
    pub seed: u64,
    pub output: OutputMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            place: None,
            h: Rat::one(),
            h_given: false,
            tolerance: 1e-9,
            term_budget: 10_000_000,
            seed: 0,
            output: OutputMode::Json,
        }
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub place: Option<Place>,
    pub h: Option<Rat>,
    pub tolerance: Option<f64>,
    pub term_budget: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<OutputMode>,
}

fn parse_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn field<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("config key {key}: {e}"))
}

impl RunConfig {
    pub fn resolve(
        file: Option<&Path>,
        env_budget: Option<String>,
        flags: Overrides,
    ) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text =
                fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
            for (k, v) in parse_file(&text)? {
                match k.as_str() {
                    "place" | "p" => cfg.place = Some(field(&k, &v)?),
                    "h" => {
                        cfg.h = field(&k, &v)?;
                        cfg.h_given = true;
                    }
                    "tolerance" | "tol" => cfg.tolerance = field(&k, &v)?,
                    "term_budget" | "budget" => cfg.term_budget = field(&k, &v)?,
                    "seed" => cfg.seed = field(&k, &v)?,
                    "output" => cfg.output = field(&k, &v)?,
                    _ => return Err(format!("unknown config key {k:?}")),
                }
            }
        }
        if let Some(v) = env_budget {
            cfg.term_budget = field(BUDGET_ENV, &v)?;
        }
        let Overrides {
            place,
            h,
            tolerance,
            term_budget,
            seed,
            output,
        } = flags;
        cfg.place = place.or(cfg.place);
        if let Some(h) = h {
            cfg.h = h;
            cfg.h_given = true;
        }
        cfg.tolerance = tolerance.unwrap_or(cfg.tolerance);
        cfg.term_budget = term_budget.unwrap_or(cfg.term_budget);
        cfg.seed = seed.unwrap_or(cfg.seed);
        cfg.output = output.unwrap_or(cfg.output);
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        if self.term_budget < 1 {
            return Err("term budget must be at least 1".into());
        }
        if self.h.is_zero() {
            return Err("h must be nonzero".into());
        }
        Ok(())
    }
}
