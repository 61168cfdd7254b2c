//! Flag parsing.
//!
//! One subcommand per invocation. Every flag has a documented default, the
//! seed included, so a bare subcommand is a complete, reproducible run;
//! the resolved values are echoed into the output header by the runner.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default RNG seed for every subcommand.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "lpgh",
    version,
    about = "Numerical laboratory for distances between l^p unit balls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measure the empirical distortion of the signed-power pairing
    /// between a p-ball and the 1-ball, against its proved ceiling.
    Distortion(DistortionArgs),
    /// Balance random ball points by signs and print the stepwise
    /// certificate.
    Balance(BalanceArgs),
    /// Tabulate both distance bounds along an exponent sequence: the
    /// classical distance collapses while the quantum bound stays put.
    Separation(SeparationArgs),
    /// Compare the exact Gromov-Hausdorff oracle with the signed-power
    /// pairing upper bound on small sampled spaces.
    Gh(GhArgs),
    /// Draw sample points from a ball, or emit a grid net.
    Sample(SampleArgs),
    /// Run the internal verification suites and report per-suite counts.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DistortionArgs {
    /// Single exponent in [1, 2]; default sweeps 1.1, 1.25, 1.5, 1.75, 2.
    #[arg(long, conflicts_with = "p_seq")]
    pub p: Option<f64>,

    /// Comma-separated exponent list instead of the default sweep.
    #[arg(long = "p-seq", value_delimiter = ',')]
    pub p_seq: Option<Vec<f64>>,

    /// Single dimension; default sweeps 2, 4, 8, 16.
    #[arg(long)]
    pub n: Option<usize>,

    /// Points sampled per configuration, half from the ball and half from
    /// the sphere; 448 points make 100128 pairs.
    #[arg(long, default_value_t = 448)]
    pub count: usize,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct BalanceArgs {
    /// Exponent of the ball the points come from.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,

    /// Dimension of the ball.
    #[arg(long, default_value_t = 8)]
    pub n: usize,

    /// Number of points to balance.
    #[arg(long, default_value_t = 16)]
    pub count: usize,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SeparationArgs {
    /// Single exponent in (1, 2]; default sweeps 1 + 1/n for n = 1..10.
    #[arg(long, conflicts_with = "p_seq")]
    pub p: Option<f64>,

    /// Comma-separated exponent list instead of the default sweep.
    #[arg(long = "p-seq", value_delimiter = ',')]
    pub p_seq: Option<Vec<f64>>,

    /// Separation threshold in (0, 1/2): dimensions are chosen so the
    /// quantum lower bound stays at or above 1/2 minus this.
    #[arg(long, default_value_t = 0.25)]
    pub threshold: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct GhArgs {
    /// Exponent of the sampled ball.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,

    /// Dimension of the sampled ball.
    #[arg(long, default_value_t = 2)]
    pub n: usize,

    /// Points per space; the exact oracle is limited to small counts.
    #[arg(long, default_value_t = 5)]
    pub count: usize,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Exponent of the ball.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,

    /// Dimension of the ball.
    #[arg(long, default_value_t = 2)]
    pub n: usize,

    /// Number of points to draw (ignored in grid mode).
    #[arg(long, default_value_t = 10)]
    pub count: usize,

    /// Emit the grid net at this resolution instead of random points.
    #[arg(long)]
    pub resolution: Option<u32>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, hide = true)]
    pub inject_fault: bool,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_documented_values() {
        let cli = Cli::try_parse_from(["lpgh", "separation"]).unwrap();
        match cli.command {
            Command::Separation(args) => {
                assert_eq!(args.common.seed, 42);
                assert_eq!(args.threshold, 0.25);
                assert_eq!(args.common.format, OutputFormat::Csv);
                assert!(args.p.is_none() && args.p_seq.is_none());
            }
            other => panic!("wrong subcommand {other:?}"),
        }
    }

    #[test]
    fn p_seq_splits_on_commas() {
        let cli = Cli::try_parse_from(["lpgh", "separation", "--p-seq", "1.5,1.25,1.1"]).unwrap();
        match cli.command {
            Command::Separation(args) => {
                assert_eq!(args.p_seq.unwrap(), vec![1.5, 1.25, 1.1]);
            }
            other => panic!("wrong subcommand {other:?}"),
        }
    }

    #[test]
    fn p_and_p_seq_conflict() {
        assert!(Cli::try_parse_from(["lpgh", "distortion", "--p", "1.5", "--p-seq", "1.1"])
            .is_err());
    }

    #[test]
    fn fault_hook_parses_but_stays_out_of_help() {
        let cli = Cli::try_parse_from(["lpgh", "verify", "--inject-fault"]).unwrap();
        match cli.command {
            Command::Verify(args) => assert!(args.inject_fault),
            other => panic!("wrong subcommand {other:?}"),
        }
        let help = Cli::try_parse_from(["lpgh", "verify", "--help"]).unwrap_err();
        assert!(!help.to_string().contains("inject-fault"));
    }

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["lpgh", "gh", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["lpgh"]).is_err());
    }
}
