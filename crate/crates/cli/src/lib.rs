//! The `ppf` command line: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 negative verification, 2 usage or input error.

pub mod commands;
pub mod funcspec;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppf_core::FieldSpec;

/// Everything that determines a run. Equal configurations give byte-identical
/// reports; `jobs` only affects wall time.
#[derive(Parser, Debug, Clone)]
#[command(
    name = "ppf",
    version,
    about = "Quadratic pseudo-planar functions over GF(2^n)"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "PPF_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Field: n=<int>[,poly=0x<hex>][,m=<int>].
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,

    /// Function: "k,i=0xC;..", "generic:i,j=0xC;..", or a named family.
    #[arg(long, alias = "family")]
    pub function: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Criterion,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchSpace {
    /// c1 x^(q+1) + c2 x^(q^2+q) + c3 x^(q^2+1) over GF(2^(3m)).
    TrinomialT3,
    /// sum_i c_i x^(2^i (q+1)) over GF(2^(2m)).
    T2General,
    /// c x^(q+1) over GF(2^(2m)).
    MonoT2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    /// Union of the mutually unbiased bases.
    Mub,
    /// Characters of the Galois ring restricted to the difference set.
    Rds,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Decide pseudo-planarity of one function, or compare methods on a random sample.
    Verify {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, required_unless_present = "sample")]
        function: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Number of random family-form functions to test instead of --function.
        #[arg(long, conflicts_with = "function")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count (and list) pseudo-planar members of a coefficient space.
    Search {
        #[arg(value_enum)]
        space: SearchSpace,
        /// Subfield degree: q = 2^m.
        #[arg(long)]
        m: u32,
        /// Defining polynomial of GF(2^n); default is the least irreducible.
        #[arg(long)]
        poly: Option<String>,
        /// Acknowledge a long-running scan.
        #[arg(long)]
        long_run: bool,
        /// JSON file recording finished prefix ranges; resumed when present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Write the member listing here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the relative difference set of a pseudo-planar function.
    Rds {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        verify: bool,
    },
    /// Build the (4^n + 2^n, 2^n) codebook.
    Codebook {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Source::Mub)]
        source: Source,
    },
    /// Build the complete set of 2^n + 1 mutually unbiased bases.
    Mub {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the semifield of a pseudo-planar function.
    Semifield {
        #[command(flatten)]
        target: Target,
        /// The nonzero element e fixing the isotope.
        #[arg(long, default_value = "0x1")]
        e: String,
        #[arg(long)]
        nuclei: bool,
    },
    /// Welch and Levenstein bounds for N unit vectors in dimension K.
    Bounds {
        #[arg(value_name = "N")]
        n: u64,
        #[arg(value_name = "K")]
        k: u64,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: ppf_core::Error| e.to_string())
}

/// Result of a command that ran to completion.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Success
        } else {
            Outcome::Negative
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Negative => 1,
        }
    }
}

/// Parses `args`, runs the command, prints the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(&config) {
        Ok((text, outcome)) => {
            print!("{text}");
            outcome.code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
