use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "circlelab",
    version,
    about = "Lattice-point remainder laboratory for the circle and divisor problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Circle,
    Divisor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Specfun,
    Eulermac,
    Series,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialFn {
    J1,
    Y1,
    K1,
    /// -Y_1 - (2/pi) K_1
    I1,
    Si,
    Ci,
    /// d/du ber(u)
    Berd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Star-convention lattice or divisor count at x, with its remainder.
    Count {
        /// Decimal string; integers get the half-weight boundary term.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value = "circle")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run an identity battery; exits 1 if any identity fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tabulate P(x) exactly, from the Bessel-type series, and from the
    /// arctangent sum over a grid.
    ///
    /// Grid points that land on integers are moved up by 1e-6 so that no row
    /// sits on a jump of the summatory function; pass --exact-integers to keep
    /// them.
    Perror {
        #[arg(long, default_value = "1")]
        x_min: String,
        #[arg(long, default_value = "100")]
        x_max: String,
        #[arg(long, default_value = "0.5")]
        step: String,
        /// Evaluate at the integers themselves instead of shifting by 1e-6.
        #[arg(long)]
        exact_integers: bool,
        /// Outer terms of the series; 0 leaves only its constant term.
        #[arg(long, default_value_t = 4000)]
        series_n: usize,
        /// Terms of the arctangent sum.
        #[arg(long, default_value_t = 10_000)]
        phi_k: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Scan the mean-value points xi_n and the roots lambda_n for n <= n_max.
    Theorem5 {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate one special function.
    Special {
        #[arg(long = "fn", value_enum)]
        function: SpecialFn,
        #[arg(long, allow_hyphen_values = true)]
        arg: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare four estimates of P(x) side by side.
    Report {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 4000)]
        series_n: usize,
        #[arg(long, default_value_t = 10_000)]
        phi_k: u64,
        #[arg(long, default_value_t = 4000)]
        voronoi_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}
