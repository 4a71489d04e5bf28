use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dwpf_core::ModelKind;

use crate::commands::CliError;

pub const SEED_VAR: &str = "DWPF_SEED";

#[derive(Debug, Parser)]
#[command(name = "dwpf", version, about = "Domain wall partition functions for elliptic height models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Brute force against the closed form
    Dwpf,
    /// Yang-Baxter residuals over random draws
    Ybe,
    /// Locate partition-function zeros in the first rapidity
    Zeros,
    /// Every property check for the model
    Suite,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Dwpf => "dwpf",
            Command::Ybe => "ybe",
            Command::Zeros => "zeros",
            Command::Suite => "suite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Felderhof,
    Ps,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Felderhof => ModelKind::Felderhof,
            Model::Ps => ModelKind::PerkSchultz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Emit {
    #[default]
    Json,
    Csv,
    Text,
}

/// Flags shared by every command. Unset flags fall back to the config
/// file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    #[arg(long, global = true, value_enum)]
    pub model: Option<Model>,
    /// Lattice size
    #[arg(long = "L", global = true)]
    pub size: Option<usize>,
    /// Sampling seed; falls back to the config file, then DWPF_SEED
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub nome: Option<f64>,
    /// Replaces every check tolerance
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub emit: Option<Emit>,
    /// Plain-text key=value file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma-separated horizontal rapidities
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub v: Option<Vec<f64>>,
    /// Felderhof row fields
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    /// Felderhof column fields
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Base height (Felderhof), or the real part of the corner scalar (PS)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<f64>,
}

/// Explicit parameters overriding sampled ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Explicit {
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub h: Option<f64>,
}

impl Explicit {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelKind,
    pub size: usize,
    pub seed: u64,
    pub samples: usize,
    pub nome: f64,
    pub tolerance: Option<f64>,
    pub emit: Emit,
    pub explicit: Explicit,
}

impl RunConfig {
    /// Merges flags, the optional config file and the environment.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.options.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let env_seed = std::env::var(SEED_VAR).ok();
        Self::merge(cli.command, cli.options, &file, env_seed.as_deref())
    }

    pub fn merge(
        command: Command,
        o: Options,
        file: &BTreeMap<String, String>,
        env_seed: Option<&str>,
    ) -> Result<Self, CliError> {
        let model = match o.model {
            Some(m) => m,
            None => lookup_enum(file, "model")?.unwrap_or(Model::Felderhof),
        };
        let seed = match o.seed {
            Some(s) => s,
            None => match lookup::<u64>(file, "seed")? {
                Some(s) => s,
                None => env_seed
                    .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_VAR}={s} is not a seed"))))
                    .transpose()?
                    .unwrap_or(0),
            },
        };
        let explicit = Explicit {
            u: pick_list(o.u, file, "u")?,
            v: pick_list(o.v, file, "v")?,
            p: pick_list(o.p, file, "p")?,
            q: pick_list(o.q, file, "q")?,
            h: pick(o.h, file, "h")?,
        };
        let size = match pick(o.size, file, "L")? {
            Some(l) => l,
            None => explicit.u.as_ref().map_or(2, Vec::len),
        };
        let cfg = Self {
            command,
            model: model.into(),
            size,
            seed,
            samples: pick(o.samples, file, "samples")?.unwrap_or(1),
            nome: pick(o.nome, file, "nome")?.unwrap_or(0.1),
            tolerance: pick(o.tolerance, file, "tolerance")?,
            emit: match o.emit {
                Some(e) => e,
                None => lookup_enum(file, "emit")?.unwrap_or_default(),
            },
            explicit,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.size == 0 {
            return Err(CliError::Usage("L must be positive".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be positive".into()));
        }
        if !(self.nome > 0.0 && self.nome < 1.0) {
            return Err(CliError::Usage(format!("nome {} outside (0, 1)", self.nome)));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(CliError::Usage("tolerance must be positive".into()));
            }
        }
        let e = &self.explicit;
        for (name, list) in [("u", &e.u), ("v", &e.v), ("p", &e.p), ("q", &e.q)] {
            if let Some(list) = list {
                if list.len() != self.size {
                    return Err(CliError::Usage(format!(
                        "--{name} has {} values but L = {}",
                        list.len(),
                        self.size
                    )));
                }
            }
        }
        if self.model == ModelKind::PerkSchultz && (e.p.is_some() || e.q.is_some()) {
            return Err(CliError::Usage("--p/--q apply to the felderhof model only".into()));
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", n + 1)));
        };
        let key = k.trim().trim_start_matches("--").to_string();
        const KEYS: [&str; 12] = ["model", "L", "seed", "samples", "nome", "tolerance", "emit", "u", "v", "p", "q", "h"];
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key}", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn lookup<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    file.get(key)
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("config {key}: cannot parse {s:?}"))))
        .transpose()
}

fn lookup_enum<T: ValueEnum>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    file.get(key)
        .map(|s| T::from_str(s, true).map_err(|_| CliError::Usage(format!("config {key}: unknown value {s:?}"))))
        .transpose()
}

fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(x) => Ok(Some(x)),
        None => lookup(file, key),
    }
}

fn pick_list(flag: Option<Vec<f64>>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<f64>>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("config {key}: expected comma-separated numbers")))
        })
        .transpose()
}
