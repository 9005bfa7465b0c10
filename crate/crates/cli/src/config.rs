//! Command-line surface. Every subcommand is serializable so reports can
//! echo their configuration losslessly: re-running an echoed config
//! reproduces the payload byte-for-byte (wall time aside).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Default seed when none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Parser)]
#[command(
    name = "charwalk",
    version,
    about = "Character-sum walk statistics over finite fields, exact walk-model baselines, and verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker thread cap (falls back to CHARWALK_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// File format for --out.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Rademacher,
    Bernoulli01,
}

impl From<KindArg> for charwalk_core::WalkKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rademacher => charwalk_core::WalkKind::Rademacher,
            KindArg::Bernoulli01 => charwalk_core::WalkKind::Bernoulli01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatArg {
    Signed,
    Residue,
    Nonresidue,
}

impl From<StatArg> for charwalk_core::StatisticKind {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Signed => charwalk_core::StatisticKind::SignedSum,
            StatArg::Residue => charwalk_core::StatisticKind::ResidueCount,
            StatArg::Nonresidue => charwalk_core::StatisticKind::NonResidueCount,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyLevel {
    /// Oracle-equivalence and exact-identity checks (< 1 minute).
    Fast,
    /// Fast plus the large-scale empirical checks.
    Full,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Exact k-step law of the walk mod m.
    WalkExact(WalkExactArgs),
    /// Monte Carlo estimate of the occupation variance, with the closed
    /// form for comparison.
    WalkMc(WalkMcArgs),
    /// Residue-class distribution of a prefix character-sum statistic.
    CharDist(CharDistArgs),
    /// Sign-pattern census over consecutive blocks.
    BlockCensus(BlockCensusArgs),
    /// Fixed-length symbol walk over the primes up to a limit.
    PrimeWalk(PrimeWalkArgs),
    /// Twisted character sum against its Weil-type bound.
    WeilCheck(WeilCheckArgs),
    /// Run the bundled verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WalkExactArgs {
    /// Step model.
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Step count.
    #[arg(long)]
    pub k: u64,
    /// Modulus.
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WalkMcArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Walk length.
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CharDistArgs {
    /// Odd prime modulus.
    #[arg(long)]
    pub p: u64,
    /// Polynomial coefficients, lowest degree first (e.g. `--poly 1,0,1`
    /// for 1 + X²).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Vec<i64>,
    #[arg(long)]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = StatArg::Signed)]
    pub stat: StatArg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BlockCensusArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Vec<i64>,
    /// Block length L (1..=20).
    #[arg(long = "len")]
    pub block_len: u32,
    /// Relative tolerance for the per-pattern verdict.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PrimeWalkArgs {
    /// Upper limit of the prime ensemble.
    #[arg(long)]
    pub limit: u64,
    /// Walk length (number of leading primes used as steps).
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: u64,
    /// Also tally all 2^k sign patterns.
    #[arg(long, default_value_t = false)]
    #[serde(default)]
    pub patterns: bool,
    /// Verdict tolerance on max |frequency − model|.
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    /// Relative verdict tolerance on pattern fractions vs 2^−k.
    #[arg(long, default_value_t = 0.10)]
    pub pattern_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WeilCheckArgs {
    /// Odd prime modulus (single-check mode).
    #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
    pub p: Option<u64>,
    /// Square-free multiplicative polynomial P1, lowest degree first.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required_unless_present = "sweep"
    )]
    pub poly1: Option<Vec<i64>>,
    /// Additive twist P2 (defaults to zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly2: Option<Vec<i64>>,
    /// Interval start (defaults to 0).
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub start: u64,
    /// Interval length (defaults to the full range).
    #[arg(long)]
    pub length: Option<u64>,
    /// Exhaustive sweep over small primes instead of a single check.
    #[arg(long, default_value_t = false)]
    #[serde(default)]
    pub sweep: bool,
    /// Sweep bound.
    #[arg(long, default_value_t = 97)]
    pub max_p: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyLevel::Fast)]
    pub level: VerifyLevel,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_char_dist() {
        let cli = Cli::parse_from([
            "charwalk", "char-dist", "--p", "7", "--poly", "0,1", "--m", "2", "--stat", "signed",
        ]);
        match cli.command {
            Command::CharDist(args) => {
                assert_eq!(args.p, 7);
                assert_eq!(args.poly, vec![0, 1]);
                assert_eq!(args.m, 2);
                assert_eq!(args.stat, StatArg::Signed);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_negative_poly_coefficients() {
        let cli = Cli::parse_from([
            "charwalk", "char-dist", "--p", "13", "--poly", "-1,0,1", "--m", "3",
        ]);
        match cli.command {
            Command::CharDist(args) => assert_eq!(args.poly, vec![-1, 0, 1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seed_defaults_to_documented_constant() {
        let cli = Cli::parse_from([
            "charwalk", "walk-mc", "--kind", "rademacher", "--n", "4", "--m", "3",
        ]);
        match cli.command {
            Command::WalkMc(args) => assert_eq!(args.seed, 0xC0FFEE),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn weil_check_requires_p_or_sweep() {
        assert!(Cli::try_parse_from(["charwalk", "weil-check"]).is_err());
        assert!(Cli::try_parse_from(["charwalk", "weil-check", "--sweep"]).is_ok());
        assert!(Cli::try_parse_from([
            "charwalk", "weil-check", "--p", "5", "--poly1", "0,1"
        ])
        .is_ok());
    }

    #[test]
    fn command_echo_roundtrips_through_json() {
        let cli = Cli::parse_from([
            "charwalk",
            "prime-walk",
            "--limit",
            "1000",
            "--k",
            "3",
            "--m",
            "3",
            "--patterns",
        ]);
        let json = serde_json::to_string(&cli.command).unwrap();
        let back: Command = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cli.command);
    }
}
