mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sailkit_core::Error;

#[derive(Parser, Debug)]
#[command(name = "sailkit", version, about = "Integer geometry, continued fractions and sails of cones")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integer lengths, sines, areas, distances and simplex invariants.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Congruence classes of empty lattice tetrahedra.
    EmptySimplices {
        #[arg(long)]
        max_volume: i64,
    },
    /// Continued fractions.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Integer angles in the plane.
    #[command(subcommand)]
    Angle(AngleCmd),
    /// Klein sail of a rational simplicial cone.
    Klein {
        /// Generators as rows, e.g. "1,0;5,7".
        #[arg(long)]
        generators: String,
        #[arg(long, default_value_t = 0)]
        window: i64,
        /// Write an OFF mesh (cones in space only).
        #[arg(long)]
        off: bool,
    },
    /// Minkowski-Voronoi staircase of a symmetrized lattice.
    Mv {
        /// Basis vectors as rows; entries may be rationals.
        #[arg(long)]
        basis: String,
        #[arg(long)]
        window: i64,
    },
    /// Periodic sails of a totally real unimodular matrix.
    Algebraic {
        #[arg(long)]
        matrix: String,
        /// Scan bound; the default depends on the dimension.
        #[arg(long)]
        window: Option<i64>,
        /// Index of the eigen-cone, 0 .. 2^n - 1.
        #[arg(long, default_value_t = 0)]
        cone: usize,
        #[arg(long, default_value_t = sailkit_core::algebraic::DEFAULT_GROUP_BOX)]
        group_box: i64,
        #[arg(long)]
        off: bool,
    },
    /// Minimum of |L1 L2| over integer points, read off the sails.
    Markov {
        /// Two forms "a,b" meaning a x + b y.
        #[arg(long = "form", num_args = 1, required = true)]
        forms: Vec<String>,
        #[arg(long, default_value_t = 40)]
        bound: i64,
    },
    /// Gauss-Kuzmin statistics.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Jacobi-Perron expansion of (1, y, z).
    Jp {
        /// Defining polynomial of the field; rationals when omitted.
        #[arg(long)]
        field: Option<String>,
        /// Index of the real root generating the field, ascending; the
        /// largest root when omitted.
        #[arg(long)]
        root: Option<usize>,
        /// Elements as polynomials in the generator t, e.g. "t^2-1".
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        /// Also report the approximation from this many digits.
        #[arg(long)]
        reconstruct: Option<usize>,
        /// Exit with status 4 when no verdict is reached.
        #[arg(long)]
        require_conclusion: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum InvariantCmd {
    Length {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Sine {
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        ray1: String,
        #[arg(long)]
        ray2: String,
    },
    Area {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
    },
    Distance {
        #[arg(long)]
        point: String,
        /// Points spanning the subspace, separated by ';'.
        #[arg(long)]
        span: String,
    },
    /// Emptiness, width and normal form of a lattice simplex.
    Simplex {
        /// Vertices separated by ';'.
        #[arg(long)]
        vertices: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParityArg {
    Any,
    Odd,
    Even,
}

#[derive(Subcommand, Debug)]
pub enum CfCmd {
    /// Expansion of a rational number.
    Expand {
        #[arg(long)]
        value: String,
        #[arg(long, value_enum, default_value_t = ParityArg::Any)]
        parity: ParityArg,
        /// Number of convergents to list.
        #[arg(long, default_value_t = 0)]
        convergents: usize,
    },
    /// Value of a finite or periodic continued fraction such as "[1;(2)]".
    Eval {
        #[arg(long)]
        cf: String,
    },
    /// Periodic expansion of a quadratic irrational such as "sqrt(2)".
    Quadratic {
        #[arg(long)]
        value: String,
        #[arg(long, default_value_t = 0)]
        convergents: usize,
    },
}

#[derive(Args, Debug)]
pub struct AngleArgs {
    #[arg(long, default_value = "0,0")]
    pub vertex: String,
    #[arg(long, default_value = "1,0")]
    pub ray1: String,
    #[arg(long)]
    pub ray2: Option<String>,
    /// Irrational slope of the second ray: an exact number or a polynomial
    /// whose largest real root is taken.
    #[arg(long)]
    pub slope: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum AngleCmd {
    Lls(AngleArgs),
    Itan(AngleArgs),
    Isin(AngleArgs),
    Icos(AngleArgs),
    Sail {
        #[command(flatten)]
        angle: AngleArgs,
        #[arg(long, default_value_t = 100)]
        window: i64,
    },
    /// Normal-form angle with a given LLS sequence such as "(1,2,2)".
    FromLls {
        #[arg(long)]
        lls: String,
    },
    /// Searches for a triangle with three prescribed angle LLS sequences.
    Ikea {
        #[arg(long = "lls", num_args = 1, required = true)]
        lls: Vec<String>,
        #[arg(long, default_value_t = sailkit_core::planar::DEFAULT_IKEA_BUDGET)]
        budget: i64,
        #[arg(long)]
        require_conclusion: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum StatsCmd {
    Gk {
        #[arg(long)]
        k: u64,
    },
    /// Telescoping residual of the cross-ratio identity up to K.
    Telescoping {
        #[arg(long)]
        k: u64,
    },
    CrossRatio {
        /// Four points, e.g. "-1,0,1,inf".
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    Empirical {
        #[arg(long)]
        qmax: u64,
        #[arg(long, default_value_t = sailkit_core::stats::DEFAULT_K_MAX)]
        kmax: usize,
    },
    FaceCensus {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        gen_bound: i64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit statuses: 2 input error, 3 resource limit, 4 inconclusive.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) | Error::WindowTooSmall(_) | Error::GeneratorsNotFound(_) | Error::Overflow => 3,
        Error::Inconclusive(_) => 4,
        Error::IncompleteOrbitCoverage(_) | Error::InconsistentMinima(_) => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SAILKIT_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("SAILKIT_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("SAILKIT_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(commands::Failure::Inconclusive(out)) => {
            print!("{out}");
            eprintln!("error: no conclusion reached");
            ExitCode::from(4)
        }
    }
}
