//! `khtail`: Khovanov homology of twisted and colored links from the command line.

mod commands;
mod error;
mod input;
mod manifest;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khtail_core::algebra::RingKind;
use khtail_core::engine::Method;
use khtail_core::tangle::Handedness;

#[derive(Parser, Debug)]
#[command(name = "khtail", version = khtail_core::VERSION, about = "Khovanov homology of twisted and colored links")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Result cache directory.
    #[arg(long, global = true, env = "KHTAIL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Write a JSON run manifest here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Coefficient ring.
    #[arg(long, global = true, default_value = "z", value_parser = parse_ring)]
    pub ring: RingKind,
    /// Live-object budget of one scan.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_objects: usize,
    /// Largest twist count any sequence may reach.
    #[arg(long, global = true, default_value_t = 32)]
    pub k_limit: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Raw,
    Scan,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Raw => Method::Raw,
            MethodArg::Scan => Method::Scan,
        }
    }
}

fn parse_ring(s: &str) -> Result<RingKind, String> {
    s.parse()
}

fn parse_handedness(s: &str) -> Result<Handedness, String> {
    s.parse().map_err(|e: khtail_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Khovanov homology of a diagram.
    Compute {
        /// Diagram file, or an inline braid such as `B2:1,1`.
        diagram: String,
        /// Restrict to these normalized quantum degrees.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value = "scan")]
        method: MethodArg,
    },
    /// Stabilized colored homology in some colored quantum degrees.
    Colored {
        diagram: String,
        /// One color per component, or one color for all.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        colors: Vec<usize>,
        /// Colored quantum degrees; defaults to six degrees at the extreme end.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degree: Option<Vec<i64>>,
        #[arg(long, default_value = "right", value_parser = parse_handedness)]
        handedness: Handedness,
    },
    /// A twist sequence in normalized degrees, with its predicted bound.
    Sequence {
        diagram: String,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        colors: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        j: Option<Vec<i64>>,
        #[arg(long, default_value = "right", value_parser = parse_handedness)]
        handedness: Handedness,
        /// Last twist count; defaults to the bound plus two.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// The tail of the colored unknot in homological degree shifted by j.
    TailUnknot {
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Also cross-check columns against full twists up to this n.
        #[arg(long, default_value_t = 3)]
        full_twist_upto: usize,
        /// Experimental: tabulate the unlink with this many components
        /// instead, colors 1 to n-max, with no expected values asserted.
        #[arg(long)]
        unlink: Option<usize>,
    },
    /// Tail of the colored homology of a B-adequate link.
    TailBadequate {
        diagram: String,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 2)]
        n_max: usize,
    },
    /// Evaluate a spin network.
    Spin {
        /// File, or inline text such as `theta 2 2 2`.
        network: String,
    },
    /// Colored Jones polynomial, unnormalized (the unknot colored 1 is q + q^-1).
    Jones {
        diagram: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        color: Vec<usize>,
    },
    /// Run one verification suite by name or number, or `all`.
    Verify { suite: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
