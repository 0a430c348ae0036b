//! Run configuration: command-line flags layered over an optional JSON file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A degree, or `n` for the rank of each root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeSpec {
    Fixed(usize),
    Rank,
}

impl DegreeSpec {
    pub fn resolve(self, rank: usize) -> usize {
        match self {
            DegreeSpec::Fixed(d) => d,
            DegreeSpec::Rank => rank,
        }
    }
}

impl FromStr for DegreeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "n" => Ok(DegreeSpec::Rank),
            t => t
                .parse()
                .map(DegreeSpec::Fixed)
                .map_err(|_| CliError::Usage(format!("bad degree '{s}': expected an integer or 'n'"))),
        }
    }
}

/// `a..b` inclusive; an empty range when `a > b`.
pub fn parse_degrees(s: &str) -> Result<Vec<DegreeSpec>, CliError> {
    let Some((a, b)) = s.split_once("..") else {
        return Err(CliError::Usage(format!("bad degree range '{s}': expected a..b")));
    };
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad degree range '{s}': '{t}' is not an integer")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    Ok((a..=b).map(DegreeSpec::Fixed).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lemma43,
    Lemma45,
    Lemma48,
    Lemma52,
    Thm11,
    Cor63,
    Tau,
}

impl Suite {
    pub const DEFAULT: [Suite; 6] =
        [Suite::Lemma43, Suite::Lemma45, Suite::Lemma48, Suite::Lemma52, Suite::Thm11, Suite::Cor63];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma43 => "lemma43",
            Suite::Lemma45 => "lemma45",
            Suite::Lemma48 => "lemma48",
            Suite::Lemma52 => "lemma52",
            Suite::Thm11 => "thm11",
            Suite::Cor63 => "cor63",
            Suite::Tau => "tau",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim() {
            "lemma43" => Suite::Lemma43,
            "lemma45" => Suite::Lemma45,
            "lemma48" => Suite::Lemma48,
            "lemma51" | "lemma52" => Suite::Lemma52,
            "thm11" => Suite::Thm11,
            "cor63" => Suite::Cor63,
            "tau" => Suite::Tau,
            other => return Err(CliError::Usage(format!("unknown suite '{other}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// JSON config file; flags given on the command line take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Root systems, comma separated (B3, D4, ...)
    #[arg(long)]
    pub rs: Option<String>,
    /// Formal group law spec; repeat for several laws
    #[arg(long)]
    pub fgl: Vec<String>,
    /// Second law, the target of comparisons
    #[arg(long)]
    pub fgl2: Option<String>,
    /// Source law of a deformation exponent
    #[arg(long)]
    pub from: Option<String>,
    /// Target law of a deformation exponent
    #[arg(long)]
    pub to: Option<String>,
    /// A single degree, or `n` for the rank
    #[arg(long)]
    pub d: Option<String>,
    /// Inclusive degree range a..b
    #[arg(long)]
    pub degrees: Option<String>,
    /// Truncation degree (default: largest degree + 2)
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Suites, comma separated
    #[arg(long, alias = "suite")]
    pub suites: Option<String>,
    /// Worker threads
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Multiplier for the n-series query
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i64>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Accept a truncation below the largest degree + 2
    #[arg(long)]
    pub allow_low_trunc: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    rs: Option<String>,
    fgl: Option<Vec<String>>,
    fgl2: Option<String>,
    from: Option<String>,
    to: Option<String>,
    d: Option<String>,
    degrees: Option<String>,
    trunc: Option<usize>,
    suites: Option<Vec<String>>,
    jobs: Option<usize>,
    m: Option<i64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    allow_low_trunc: Option<bool>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Fully resolved settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub root_systems: Vec<String>,
    pub fgls: Vec<String>,
    pub fgl2: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub degrees: Vec<DegreeSpec>,
    pub trunc: Option<usize>,
    pub suites: Vec<Suite>,
    pub jobs: Option<usize>,
    pub m: i64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub allow_low_trunc: bool,
}

impl RunConfig {
    pub fn from_flags(flags: Flags) -> Result<RunConfig, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let rs = flags.rs.or(file.rs);
        let root_systems = rs
            .map(|s| s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect())
            .unwrap_or_default();
        let fgls = if flags.fgl.is_empty() { file.fgl.unwrap_or_default() } else { flags.fgl };
        let degrees = match (flags.d.or(file.d), flags.degrees.or(file.degrees)) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --d or --degrees, not both".into())),
            (Some(d), None) => vec![d.parse()?],
            (None, Some(r)) => parse_degrees(&r)?,
            (None, None) => Vec::new(),
        };
        let suites = match flags.suites {
            Some(s) => s.split(',').map(str::parse).collect::<Result<Vec<Suite>, _>>()?,
            None => file.suites.unwrap_or_default().iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        };
        if flags.jobs == Some(0) || file.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            root_systems,
            fgls,
            fgl2: flags.fgl2.or(file.fgl2),
            from: flags.from.or(file.from),
            to: flags.to.or(file.to),
            degrees,
            trunc: flags.trunc.or(file.trunc),
            suites,
            jobs: flags.jobs.or(file.jobs),
            m: flags.m.or(file.m).unwrap_or(2),
            out: flags.out.or(file.out),
            format: flags.format.or(file.format),
            allow_low_trunc: flags.allow_low_trunc || file.allow_low_trunc.unwrap_or(false),
        })
    }

    pub fn require_rs(&self) -> Result<&[String], CliError> {
        if self.root_systems.is_empty() {
            return Err(CliError::Usage("missing --rs".into()));
        }
        Ok(&self.root_systems)
    }

    pub fn require_degree(&self) -> Result<DegreeSpec, CliError> {
        match self.degrees.as_slice() {
            [d] => Ok(*d),
            [] => Err(CliError::Usage("missing --d".into())),
            _ => Err(CliError::Usage("this query takes a single degree (--d)".into())),
        }
    }

    /// The truncation to use for degrees up to `max_degree`, enforcing the headroom rule.
    pub fn trunc_for(&self, max_degree: usize) -> Result<usize, CliError> {
        let need = max_degree + 2;
        match self.trunc {
            None => Ok(need),
            Some(t) if t >= need || self.allow_low_trunc => Ok(t),
            Some(t) => Err(CliError::Usage(format!(
                "truncation {t} is too small: need at least {need} (largest degree {max_degree} + 2), \
                 or pass --allow-low-trunc"
            ))),
        }
    }

    /// Installs the `--jobs` worker pool around `f`.
    pub fn with_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            b = b.num_threads(j);
        }
        let pool = b.build().map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}
