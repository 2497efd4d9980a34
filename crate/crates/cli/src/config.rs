use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

/// Largest rank swept from the catalogue.
pub const CATALOGUE_MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Print a system's Gramm data, dual weights and parabolic subspaces
    Build,
    /// Run verification suites
    Verify,
    /// Generate admissible traces and check divergence
    Simulate,
    /// Re-check an exported trace
    Replay,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `((w_a, w_b))` times the Gramm matrix is the identity
    GrammInverse,
    /// `(a,a) d_a + sum (a,b) d_b = 1` and the dual expansion round trip
    #[value(name = "identity-2d")]
    #[serde(rename = "identity-2d")]
    Identity2d,
    /// Coefficient expansion reproduces `alpha` with nonpositive off-terms
    ExpansionSigns,
    /// Conic-combination certificate for `alpha >= w̄_alpha`
    BoundConstructive,
    /// Extreme-ray oracle for `alpha >= w̄_alpha`
    BoundRays,
    /// Connected subdiagrams are catalogue Dynkin diagrams
    Subdiagrams,
    /// The inverse Gramm matrix of an irreducible system is positive
    InversePositive,
    /// Torus subspace lemmas over all subset tuples
    ParabolicLemmas,
    /// Dropping hypotheses produces violating rays
    Controls,
    /// Sum of positive roots containing `alpha` is a multiple of `w_alpha`
    Character,
    /// Rescaling factors of the inner product leaves `w̄` fixed
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::GrammInverse,
        Suite::Identity2d,
        Suite::ExpansionSigns,
        Suite::BoundConstructive,
        Suite::BoundRays,
        Suite::Subdiagrams,
        Suite::InversePositive,
        Suite::ParabolicLemmas,
        Suite::Controls,
        Suite::Character,
        Suite::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GrammInverse => "gramm-inverse",
            Suite::Identity2d => "identity-2d",
            Suite::ExpansionSigns => "expansion-signs",
            Suite::BoundConstructive => "bound-constructive",
            Suite::BoundRays => "bound-rays",
            Suite::Subdiagrams => "subdiagrams",
            Suite::InversePositive => "inverse-positive",
            Suite::ParabolicLemmas => "parabolic-lemmas",
            Suite::Controls => "controls",
            Suite::Character => "character",
            Suite::Scaling => "scaling",
        }
    }

    /// Rank cap used when no systems and no `--max-rank` are given.
    pub fn default_cap(self) -> usize {
        match self {
            Suite::BoundConstructive | Suite::BoundRays | Suite::ParabolicLemmas => 5,
            Suite::ExpansionSigns => 6,
            Suite::Controls => 3,
            _ => 8,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rootcert", version, about = "Exact checks on root systems and weighted dual weights")]
pub struct Cli {
    /// build | verify | simulate | replay (may also come from the config file)
    pub command: Option<Command>,
    /// TOML file with the same keys as the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Root system such as A3 or B2xA1; repeat or separate with commas
    #[arg(long, value_delimiter = ',')]
    pub system: Vec<String>,
    /// Sweep the catalogue of irreducible systems up to this rank
    #[arg(long)]
    pub max_rank: Option<usize>,
    /// Only consider subsets I with at most this many roots
    #[arg(long)]
    pub max_subset: Option<usize>,
    /// Verification suite; repeat or separate with commas (default: all)
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds per selection
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Selection of simple roots such as 1,2 (repeatable; default: all)
    #[arg(long)]
    pub selection: Vec<String>,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Trace document for `replay`
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

/// Contents of a config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub system: Option<Vec<String>>,
    pub max_rank: Option<usize>,
    pub max_subset: Option<usize>,
    pub suite: Option<Vec<Suite>>,
    pub seed: Option<u64>,
    pub seeds: Option<u64>,
    pub horizon: Option<u64>,
    pub selection: Option<Vec<Vec<usize>>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub trace: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// `None`: sweep the catalogue
    pub systems: Option<Vec<String>>,
    pub max_rank: Option<usize>,
    pub max_subset: Option<usize>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub seeds: u64,
    pub horizon: u64,
    /// 1-based root labels
    pub selections: Option<Vec<Vec<usize>>>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub trace: Option<PathBuf>,
}

fn parse_selection(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad selection {s:?}"))
        })
        .collect()
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self, String> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let command = cli
            .command
            .or(file.command)
            .ok_or("no command given (build, verify, simulate or replay)")?;
        let selections = if cli.selection.is_empty() {
            file.selection
        } else {
            Some(
                cli.selection
                    .iter()
                    .map(|s| parse_selection(s))
                    .collect::<Result<_, _>>()?,
            )
        };
        let cfg = RunConfig {
            command,
            systems: if cli.system.is_empty() {
                file.system
            } else {
                Some(cli.system)
            },
            max_rank: cli.max_rank.or(file.max_rank),
            max_subset: cli.max_subset.or(file.max_subset),
            suites: if cli.suite.is_empty() {
                file.suite.unwrap_or_else(|| Suite::ALL.to_vec())
            } else {
                cli.suite
            },
            seed: cli.seed.or(file.seed).unwrap_or(0),
            seeds: cli.seeds.or(file.seeds).unwrap_or(1),
            horizon: cli.horizon.or(file.horizon).unwrap_or(16),
            selections,
            out: cli.out.or(file.out),
            format: cli.format.or(file.format).unwrap_or_default(),
            jobs: cli.jobs.or(file.jobs).unwrap_or(1),
            trace: cli.trace.or(file.trace),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        if self.max_rank.is_some_and(|r| r == 0 || r > CATALOGUE_MAX_RANK) {
            return Err(format!("max-rank must be between 1 and {CATALOGUE_MAX_RANK}"));
        }
        if self.max_subset == Some(0) {
            return Err("max-subset must be at least 1".into());
        }
        if self.jobs == 0 {
            return Err("jobs must be at least 1".into());
        }
        if self.seeds == 0 {
            return Err("seeds must be at least 1".into());
        }
        if self.command == Command::Replay && self.trace.is_none() {
            return Err("replay needs --trace".into());
        }
        if let Some(sel) = &self.selections {
            if sel.iter().any(|s| s.is_empty() || s.contains(&0)) {
                return Err("selections list roots from 1".into());
            }
        }
        Ok(())
    }
}
