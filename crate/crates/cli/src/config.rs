use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use slc_core::solver::DEFAULT_BUDGET;
use slc_core::zoo::{AlgebraName, DeformTerm};

#[derive(Debug, Parser)]
#[command(name = "slc", version, about = "Exact invariant computations for Lie superalgebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Valuation of the quantization defect on all monomial pairs.
    VerifyLemma4,
    /// Lowest component of the trace moments against (1/k) ∫ f^k.
    VerifyStar3,
    /// Invariant polynomials of degrees 0..=degree.
    Invariants,
    /// Invariants against lowest components of moment products.
    Conjecture6,
    /// Radial parts of the invariants of po(0|m).
    Radial,
    /// Span membership among products of the r_k.
    Membership {
        /// `exceptional`, a product such as `r2*r2`, or polynomial text.
        #[arg(long, env = "SLC_CANDIDATE")]
        candidate: String,
        /// Comma-separated r_k indices; defaults to 1..=degree.
        #[arg(long, env = "SLC_GENERATORS")]
        generators: Option<String>,
    },
    /// Structure constants in JSON.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// Quick end-to-end checks at small sizes.
    Selftest,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ZooAction {
    Export,
    Import {
        #[arg(long, env = "SLC_FILE")]
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleArg {
    Adjoint,
    Coadjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeformArg {
    Top,
    Pair,
}

impl From<DeformArg> for DeformTerm {
    fn from(d: DeformArg) -> Self {
        match d {
            DeformArg::Top => DeformTerm::Top,
            DeformArg::Pair => DeformTerm::Pair,
        }
    }
}

fn parse_algebra(s: &str) -> Result<AlgebraName, String> {
    AlgebraName::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    #[arg(long, global = true, env = "SLC_M")]
    pub m: Option<usize>,
    #[arg(long, global = true, env = "SLC_N")]
    pub n: Option<usize>,
    #[arg(long, global = true, env = "SLC_K")]
    pub k: Option<u32>,
    #[arg(long, global = true, env = "SLC_DEGREE")]
    pub degree: Option<u32>,
    #[arg(long, global = true, env = "SLC_ALGEBRA", value_parser = parse_algebra)]
    pub algebra: Option<AlgebraName>,
    /// Defaults to adjoint for the vector-field algebras and coadjoint otherwise.
    #[arg(long, global = true, env = "SLC_MODULE")]
    pub module: Option<ModuleArg>,
    #[arg(long, global = true, env = "SLC_WEIGHT_FILTER", default_value = "on")]
    pub weight_filter: Switch,
    #[arg(long, global = true, env = "SLC_DEFORM_TERM", default_value = "top")]
    pub deform_term: DeformArg,
    #[arg(long, global = true, env = "SLC_OUTPUT", default_value = "json")]
    pub output: OutputFormat,
    #[arg(long, global = true, env = "SLC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "SLC_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "SLC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Cap on stored monomials and per-block matrix nonzeros.
    #[arg(long, global = true, env = "SLC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true, env = "SLC_TIMING")]
    pub timing: bool,
}

/// The part of the invocation that determines the mathematical content.
/// Threads, output format, cache location and timing are left out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub algebra: Option<AlgebraName>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<u32>,
    pub degree: Option<u32>,
    pub module: Option<ModuleArg>,
    pub weight_filter: Switch,
    pub deform_term: String,
    pub seed: u64,
    pub budget: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub file: Option<String>,
}

impl RunConfig {
    pub fn new(command: &Command, o: &Options) -> Self {
        let (name, candidate, generators, file) = match command {
            Command::VerifyLemma4 => ("verify-lemma4", None, None, None),
            Command::VerifyStar3 => ("verify-star3", None, None, None),
            Command::Invariants => ("invariants", None, None, None),
            Command::Conjecture6 => ("conjecture6", None, None, None),
            Command::Radial => ("radial", None, None, None),
            Command::Membership { candidate, generators } => {
                ("membership", Some(candidate.clone()), generators.clone(), None)
            }
            Command::Zoo { action: ZooAction::Export } => ("zoo-export", None, None, None),
            Command::Zoo { action: ZooAction::Import { file } } => {
                ("zoo-import", None, None, Some(file.display().to_string()))
            }
            Command::Selftest => ("selftest", None, None, None),
        };
        let module = o.module.or(match (name, o.algebra) {
            ("invariants", Some(a)) => Some(default_module(a)),
            _ => None,
        });
        RunConfig {
            command: name.into(),
            algebra: o.algebra,
            m: o.m,
            n: o.n,
            k: o.k,
            degree: o.degree,
            module,
            weight_filter: o.weight_filter,
            deform_term: DeformTerm::from(o.deform_term).as_str().into(),
            seed: o.seed,
            budget: o.budget,
            candidate,
            generators,
            file,
        }
    }

    pub fn deform(&self) -> DeformTerm {
        DeformTerm::parse(&self.deform_term).unwrap_or_default()
    }
}

pub fn default_module(a: AlgebraName) -> ModuleArg {
    match a {
        AlgebraName::Vect | AlgebraName::Svect | AlgebraName::SvectTilde => ModuleArg::Adjoint,
        _ => ModuleArg::Coadjoint,
    }
}
