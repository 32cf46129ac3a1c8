use clap::{Parser, Subcommand, ValueEnum};
use knodel_core::series::Rational;
use knodel_core::walk::{StateId, WalkParams};

/// Exact state probabilities of the Knödel walk in an alternating environment.
#[derive(Debug, Parser)]
#[command(name = "knodel", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability of one state after each step.
    Prob(ProbArgs),
    /// Expected index after each double step.
    ExpectedEnd(ExpectedEndArgs),
    /// Cross-check every route against the Markov chain.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Markov-chain evolution.
    Dp,
    /// Four-function kernel solve with forward reconstruction.
    Kernel2,
    /// Double-step kernel with powers of the small root.
    Kernel3,
    /// Closed forms in v with coefficient transfer.
    Closed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dp => "dp",
            Method::Kernel2 => "kernel2",
            Method::Kernel3 => "kernel3",
            Method::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct ProbArgs {
    /// Probability of moving up from the top layer, as p/q in (0, 1).
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: WalkParams,
    /// Last step to report; double steps with --double.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// State: top:N, bottom:N, P or Q.
    #[arg(long, value_parser = parse_state)]
    pub state: StateId,
    /// Count double steps. Only top:even, bottom:odd and Q are visited then.
    #[arg(long)]
    pub double: bool,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Add a decimal rendering of each value.
    #[arg(long)]
    pub float: bool,
    /// Recompute with a second method and exit 3 on disagreement.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, clap::Args)]
pub struct ExpectedEndArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: WalkParams,
    /// Number of double steps n. The estimate 4 sqrt(ab) sqrt(n / pi) counts
    /// double steps, not single steps.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Add the estimate 4 sqrt(ab) sqrt(n / pi) and the ratio to it.
    #[arg(long)]
    pub asymptotic: bool,
    /// Report every k-th double step (the last one is always reported).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Comma-separated values of alpha.
    #[arg(long, value_delimiter = ',', value_parser = parse_alpha, default_value = "1/2,1/3,2/5")]
    pub alpha_list: Vec<WalkParams>,
    /// Order, in double steps, of every compared series.
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    /// Largest double-step index compared.
    #[arg(long, default_value_t = 8)]
    pub max_index: usize,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn parse_alpha(s: &str) -> Result<WalkParams, String> {
    let r: Rational = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a rational p/q"))?;
    WalkParams::new(r).map_err(|e| e.to_string())
}

fn parse_state(s: &str) -> Result<StateId, String> {
    s.parse()
        .map_err(|e: knodel_core::walk::ParseStateError| e.to_string())
}
