//! Experiment configuration: optional JSON config file, explicit flags on
//! top, defaults underneath. Flags always win over the file.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Semantic configuration problems are reported as usage errors (exit 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage_bail {
    ($($arg:tt)*) => {
        return Err(UsageError(format!($($arg)*)).into())
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Shape of the JSON config file. Every field is optional; flags override.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<usize>,
    pub shots: Option<ShotsField>,
    pub reps: Option<u64>,
    pub seed: Option<u64>,
    pub bits_per_stage: Option<usize>,
    /// Hidden key as a hex string.
    pub key: Option<String>,
    pub perm_seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub threads: Option<usize>,
}

/// `"shots": 200` or `"shots": [200, 400]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ShotsField {
    One(u64),
    Many(Vec<u64>),
}

impl ShotsField {
    fn into_vec(self) -> Vec<u64> {
        match self {
            ShotsField::One(v) => vec![v],
            ShotsField::Many(v) => v,
        }
    }
}

/// Flags shared by the experiment subcommands.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonArgs {
    /// Key length in bits
    #[arg(long)]
    pub n: Option<usize>,

    /// Shots per stage; `sweep` accepts a comma-separated list
    #[arg(long)]
    pub shots: Option<String>,

    /// Repetitions per sweep point
    #[arg(long)]
    pub reps: Option<u64>,

    /// Master seed; every random quantity derives from it
    #[arg(long)]
    pub seed: Option<u64>,

    /// Flag bits consumed per stage (1 or 2)
    #[arg(long)]
    pub bits_per_stage: Option<usize>,

    /// Fix the hidden key (hex)
    #[arg(long)]
    pub key: Option<String>,

    /// Draw the bit permutation from a separate seed
    #[arg(long)]
    pub perm_seed: Option<u64>,

    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format (default: json for run/baseline, csv for sweep)
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// JSON config file; explicit flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Worker threads for sweep repetitions (0 = automatic)
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Fully resolved experiment parameters.
#[derive(Clone, Debug, Serialize)]
pub struct Experiment {
    pub n: usize,
    pub shots_list: Vec<u64>,
    pub reps: u64,
    pub seed: u64,
    pub bits_per_stage: usize,
    pub key: Option<u64>,
    pub perm_seed: Option<u64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: OutputFormat,
    #[serde(skip)]
    pub threads: usize,
}

/// Highest repetition count per sweep point; keeps the per-repetition seed
/// streams disjoint.
pub const MAX_REPS: u64 = 4096;

pub fn resolve(args: &CommonArgs, default_format: OutputFormat) -> Result<Experiment> {
    let file = match &args.config {
        Some(path) => load_config_file(path)?,
        None => ConfigFile::default(),
    };

    let shots_list = match (&args.shots, file.shots) {
        (Some(flag), _) => parse_shots_list(flag)?,
        (None, Some(field)) => field.into_vec(),
        (None, None) => vec![1000],
    };

    let n = match args.n.or(file.n) {
        Some(n) => n,
        None => usage_bail!("--n is required (flag or config file)"),
    };
    let key = match args.key.as_deref().or(file.key.as_deref()) {
        Some(hex) => Some(parse_hex_key(hex, n)?),
        None => None,
    };

    let exp = Experiment {
        n,
        shots_list,
        reps: args.reps.or(file.reps).unwrap_or(20),
        seed: args.seed.or(file.seed).unwrap_or(0),
        bits_per_stage: args.bits_per_stage.or(file.bits_per_stage).unwrap_or(1),
        key,
        perm_seed: args.perm_seed.or(file.perm_seed),
        out: args.out.clone().or(file.out),
        format: args.format.or(file.format).unwrap_or(default_format),
        threads: args.threads.or(file.threads).unwrap_or(0),
    };

    if exp.n < 2 {
        usage_bail!("--n must be at least 2, got {}", exp.n);
    }
    if exp.shots_list.is_empty() {
        usage_bail!("--shots list must not be empty");
    }
    if exp.shots_list.contains(&0) {
        usage_bail!("--shots values must be positive");
    }
    if exp.reps == 0 {
        usage_bail!("--reps must be at least 1");
    }
    if exp.reps > MAX_REPS {
        usage_bail!("--reps is limited to {MAX_REPS}");
    }
    if !(exp.bits_per_stage == 1 || exp.bits_per_stage == 2) {
        usage_bail!(
            "--bits-per-stage must be 1 or 2, got {}",
            exp.bits_per_stage
        );
    }
    Ok(exp)
}

impl Experiment {
    /// The single shots value for commands that take exactly one.
    pub fn single_shots(&self) -> Result<u64> {
        if self.shots_list.len() != 1 {
            usage_bail!("this command takes a single --shots value");
        }
        Ok(self.shots_list[0])
    }

    pub fn spec(&self) -> Result<posearch_core::ScramblerSpec> {
        posearch_core::ScramblerSpec::generate(self.n, self.seed, self.key, self.perm_seed)
            .context("building scrambler instance")
    }
}

fn load_config_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing config file {}", path.display()))?;
    Ok(file)
}

fn parse_shots_list(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.trim().parse::<u64>() {
            Ok(v) => out.push(v),
            Err(_) => usage_bail!("invalid --shots value '{part}'"),
        }
    }
    Ok(out)
}

fn parse_hex_key(hex: &str, n: usize) -> Result<u64> {
    let digits = hex.trim_start_matches("0x");
    let value = match u64::from_str_radix(digits, 16) {
        Ok(v) => v,
        Err(_) => usage_bail!("invalid --key '{hex}': expected hex digits"),
    };
    if n < 64 && value >= (1u64 << n) {
        usage_bail!("--key {hex} does not fit in {n} bits");
    }
    Ok(value)
}
