use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g2ricci::numgeom::Stencil;
use g2ricci::Scalar;

#[derive(Debug, Parser)]
#[command(
    name = "g2ricci",
    version,
    about = "Exact and numerical checks for cocalibrated G2-structures"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a 3-form into its Λ³₁, Λ³₇ and Λ³₂₇ components.
    Decompose {
        /// Form file with lines like `+1 e127 -1/2 e146`.
        file: PathBuf,
    },
    /// Solve for the Λ³₂₇ torsions with prescribed eigenvalues on Ψ₁, Ψ₂, Ψ₃.
    Lemma {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        m1: Scalar,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        m2: Scalar,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        m3: Scalar,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu: Scalar,
    },
    /// Enumerate T(θ₁, θ₂, θ₃) over the eigenvalue patterns.
    Values {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu: Scalar,
    },
    /// Dimensions of the 3-forms annihilating Ψ₀, …, Ψₖ₋₁.
    Kernels,
    /// Determinant of θ₃⨼T on the θ₃-complement.
    DetE2 {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        b: Scalar,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu: Scalar,
    },
    /// Characteristic connection of a left-invariant G2-structure.
    GroupReport(GroupArgs),
    /// Ricci eigenvalues of the Kähler example.
    Kahler(NumArgs),
    /// Build the 5-dimensional bundle over the Kähler example and check it.
    Theorem1(NumArgs),
    /// Run the built-in consistency suite.
    Selftest,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Algebra file with lines `i j k c` meaning `[e_i, e_j] = c e_k + …`.
    /// Without a file, ℝ⁴ ⊕ su(2) is used.
    pub file: Option<PathBuf>,

    /// 1-based frame slot for each algebra index, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub placement: Option<Vec<usize>>,

    /// Structure constant of the built-in ℝ⁴ ⊕ su(2).
    #[arg(long, value_parser = rational, allow_hyphen_values = true, conflicts_with = "file")]
    pub lambda: Option<Scalar>,
}

#[derive(Debug, Args)]
pub struct NumArgs {
    /// TOML file with any of the fields below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// `x₀,x₁` with `0 < x₀ < x₁`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub domain: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub boundary: Option<Vec<f64>>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub stencil: Option<StencilArg>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StencilArg {
    Central,
    Numerov,
}

impl From<StencilArg> for Stencil {
    fn from(s: StencilArg) -> Self {
        match s {
            StencilArg::Central => Stencil::Central,
            StencilArg::Numerov => Stencil::Numerov,
        }
    }
}

fn rational(s: &str) -> Result<Scalar, String> {
    g2ricci::scalar::parse(s).map_err(|e| e.message)
}
