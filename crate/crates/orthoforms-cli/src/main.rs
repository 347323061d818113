use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Outcome;

/// Exact computations with lattice-index Jacobi forms, their lifts to
/// orthogonal modular forms, and the generator tables of the resulting
/// algebras.
#[derive(Debug, Parser)]
#[command(name = "orthoforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; `csv` is only available for `tables weights`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lattice invariants.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Theta blocks and Hecke operators.
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Additive and multiplicative lifts.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Heegner-divisor arrangements.
    #[command(subcommand)]
    Arrange(ArrangeCmd),
    /// Generator tables, Hilbert series and classifications.
    #[command(subcommand)]
    Tables(TablesCmd),
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Rank, determinant, discriminant classes and δ.
    Info {
        #[arg(long)]
        lattice: String,
    },
}

/// A theta block given by a named family or a classical exponent vector.
#[derive(Debug, Clone, Args)]
pub struct BlockArgs {
    /// `D` or `A`.
    #[arg(long, value_enum, conflicts_with = "classical")]
    pub family: Option<BlockFamily>,
    /// Rank of the family member.
    #[arg(long, requires = "family")]
    pub n: Option<usize>,
    /// Classical block exponents `f(0),f(1),...`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub classical: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlockFamily {
    #[value(name = "D")]
    D,
    #[value(name = "A")]
    A,
}

#[derive(Debug, Subcommand)]
enum JacobiCmd {
    /// Expands a theta block and reports weight, index, q-order and class.
    ThetaBlock {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
    },
    /// Applies `T₋(m)` to a theta block.
    Hecke {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
    },
}

#[derive(Debug, Subcommand)]
enum LiftCmd {
    /// Fourier-Jacobi expansion of the additive lift of a theta block.
    Grit {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[arg(long, default_value_t = 3)]
        ximax: i64,
    },
    /// Borcherds product of `-Θ|T₋(2)/Θ` for a theta block `Θ`.
    Borch {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[arg(long, default_value_t = 3)]
        ximax: i64,
    },
    /// Compares the additive lift of `Θ` with the Borcherds product of
    /// `-Θ|T₋(2)/Θ` coefficient by coefficient.
    VerifyTheta {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[arg(long, default_value_t = 3)]
        ximax: i64,
    },
}

#[derive(Debug, Subcommand)]
enum ArrangeCmd {
    /// Builds `𝓗_L` for `L0:L1` and certifies the Looijenga condition.
    Check {
        #[arg(long)]
        lattice: String,
        /// Accept splits outside the families (any sum of `A_m` as `L0`).
        #[arg(long)]
        allow_nonfamily: bool,
    },
}

#[derive(Debug, Subcommand)]
enum TablesCmd {
    /// Generator weights of one family lattice or the whole table.
    Weights {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        lattice: Option<String>,
        #[arg(long)]
        all: bool,
        /// Append the predicted rows to `--all`.
        #[arg(long, requires = "all")]
        include_predicted: bool,
    },
    /// Coefficients of the Hilbert-Poincaré series.
    Hilbert {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Minimal generators of the algebra of modular forms.
    Generators {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 12)]
        tmax: i64,
    },
    /// Root lattices other than `E8` with `δ_L <= 2`.
    Norm2,
    /// Principal part of the Borcherds input of the Jacobian.
    PrincipalPart {
        #[arg(long)]
        lattice: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Root lattice such as `A1+A4`, or `A1(N)`.
    #[arg(long, conflicts_with = "paramodular", required_unless_present = "paramodular")]
    pub lattice: Option<String>,
    /// Shorthand for `--lattice "A1(N)"`.
    #[arg(long)]
    pub paramodular: Option<i64>,
}

fn dispatch(cli: &Cli) -> Result<Outcome, commands::Failure> {
    let f = cli.format;
    match &cli.command {
        Command::Lattice(LatticeCmd::Info { lattice }) => commands::lattice_info(lattice, f),
        Command::Jacobi(JacobiCmd::ThetaBlock { block, qmax }) => commands::theta_block(block, *qmax, f),
        Command::Jacobi(JacobiCmd::Hecke { block, m, qmax }) => commands::hecke(block, *m, *qmax, f),
        Command::Lift(LiftCmd::Grit { block, qmax, ximax }) => commands::grit(block, *ximax, *qmax, f),
        Command::Lift(LiftCmd::Borch { block, qmax, ximax }) => commands::borch(block, *ximax, *qmax, f),
        Command::Lift(LiftCmd::VerifyTheta { block, qmax, ximax }) => commands::verify_theta(block, *ximax, *qmax, f),
        Command::Arrange(ArrangeCmd::Check {
            lattice,
            allow_nonfamily,
        }) => commands::arrange_check(lattice, *allow_nonfamily, f),
        Command::Tables(TablesCmd::Weights {
            lattice,
            all,
            include_predicted,
        }) => commands::weights(lattice.as_deref(), *all, *include_predicted, f),
        Command::Tables(TablesCmd::Hilbert { algebra, order }) => commands::hilbert(algebra, *order, f),
        Command::Tables(TablesCmd::Generators { algebra, tmax }) => commands::generators(algebra, *tmax, f),
        Command::Tables(TablesCmd::Norm2) => commands::norm2(f),
        Command::Tables(TablesCmd::PrincipalPart { lattice }) => commands::principal_part(lattice, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
