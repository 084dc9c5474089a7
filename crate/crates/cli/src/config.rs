//! Training configuration files.
//!
//! One `key = value` pair per line; `#` starts a comment; blank lines are
//! ignored. Keys may appear once. `alpha` and `dataset` are required, the rest
//! default to [`TrainConfig::new`]. Datasets are written as
//!
//! ```text
//! gaussian1d(mean, std)
//! mixture1d(weight, mean, std; weight, mean, std; ...)
//! ring2d(n_modes, radius, mode_std)
//! ```
//!
//! and hidden layer widths as comma lists (`gen_hidden = 16, 16`).

use std::collections::HashSet;
use std::path::Path;

use alphagan::prob::MixtureComponent;
use alphagan::train::TrainConfig;
use alphagan::{AlphaParam, ToyContinuousDist};

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 15] = [
    "alpha",
    "dataset",
    "latent_dim",
    "batch_size",
    "disc_steps",
    "lr_disc",
    "lr_gen",
    "momentum",
    "total_gen_steps",
    "seed",
    "eval_every",
    "eval_samples",
    "gen_hidden",
    "disc_hidden",
    "mode_threshold_std",
];

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Config {
            line: self.line,
            field: self.key.to_string(),
            message: message.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, what: &str) -> CliResult<T> {
        self.value
            .parse()
            .map_err(|_| self.err(format!("expected {what}, found {:?}", self.value)))
    }

    fn list(&self) -> CliResult<Vec<usize>> {
        self.value
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| self.err(format!("expected a comma list of widths, found {:?}", self.value)))
            })
            .collect()
    }
}

fn numbers(args: &str) -> Option<Vec<f64>> {
    args.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Parses `gaussian1d(..)`, `mixture1d(..)` or `ring2d(..)`.
pub fn parse_dataset(s: &str) -> Result<ToyContinuousDist, String> {
    let s = s.trim();
    let (name, rest) = s.split_once('(').ok_or("expected name(arguments)")?;
    let args = rest.strip_suffix(')').ok_or("missing closing parenthesis")?;
    let bad = |n: usize| format!("{} takes {n} numbers, got {args:?}", name.trim());
    let result = match name.trim() {
        "gaussian1d" => match numbers(args).as_deref() {
            Some(&[m, sd]) => ToyContinuousDist::gaussian1d(m, sd),
            _ => return Err(bad(2)),
        },
        "ring2d" => match numbers(args).as_deref() {
            Some(&[n, r, sd]) if n >= 1.0 && n.fract() == 0.0 => ToyContinuousDist::ring2d(n as usize, r, sd),
            _ => return Err(bad(3)),
        },
        "mixture1d" => {
            let components = args
                .split(';')
                .map(|c| match numbers(c).as_deref() {
                    Some(&[weight, mean, std]) => Ok(MixtureComponent { weight, mean, std }),
                    _ => Err(format!("mixture component {:?} needs weight, mean, std", c.trim())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            ToyContinuousDist::mixture1d(components)
        }
        other => return Err(format!("unknown dataset {other:?}")),
    };
    result.map_err(|e| e.to_string())
}

pub fn parse_train_config(text: &str) -> CliResult<TrainConfig> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: i + 1,
            field: line.to_string(),
            message: "expected `key = value`".into(),
        })?;
        let entry = Entry {
            line: i + 1,
            key: key.trim(),
            value: value.trim(),
        };
        if !KEYS.contains(&entry.key) {
            return Err(entry.err("unknown field"));
        }
        if !seen.insert(entry.key) {
            return Err(entry.err("given more than once"));
        }
        entries.push(entry);
    }

    let find = |k: &str| entries.iter().find(|e| e.key == k);
    let alpha_entry = find("alpha").ok_or(CliError::MissingField("alpha"))?;
    let alpha: AlphaParam = alpha_entry
        .value
        .parse()
        .map_err(|e: alphagan::Error| alpha_entry.err(e.to_string()))?;
    let ds_entry = find("dataset").ok_or(CliError::MissingField("dataset"))?;
    let dataset = parse_dataset(ds_entry.value).map_err(|m| ds_entry.err(m))?;

    let mut cfg = TrainConfig::new(alpha, dataset);
    for e in &entries {
        match e.key {
            "latent_dim" => cfg.latent_dim = e.parse("a count")?,
            "batch_size" => cfg.batch_size = e.parse("a count")?,
            "disc_steps" => cfg.disc_steps = e.parse("a count")?,
            "lr_disc" => cfg.lr_disc = e.parse("a number")?,
            "lr_gen" => cfg.lr_gen = e.parse("a number")?,
            "momentum" => cfg.momentum = e.parse("a number")?,
            "total_gen_steps" => cfg.total_gen_steps = e.parse("a count")?,
            "seed" => cfg.seed = e.parse("an unsigned integer")?,
            "eval_every" => cfg.eval_every = e.parse("a count")?,
            "eval_samples" => cfg.eval_samples = e.parse("a count")?,
            "gen_hidden" => cfg.gen_hidden = e.list()?,
            "disc_hidden" => cfg.disc_hidden = e.list()?,
            "mode_threshold_std" => cfg.mode_threshold_std = e.parse("a number")?,
            _ => {}
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_train_config(path: &Path) -> CliResult<TrainConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_train_config(&text)
}
