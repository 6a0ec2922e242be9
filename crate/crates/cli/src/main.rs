//! `rieszcheck`: batch front-end writing CSV.
//!
//! Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or input error.

mod commands;
mod sink;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rieszcheck::Tolerances64;

#[derive(Parser)]
#[command(name = "rieszcheck", version, about = "Discrete checks for ball maximizers of Riesz-type functionals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Tolerance for sampled integrand properties and bounds.
    #[arg(long, global = true)]
    tol_prop: Option<f64>,
    /// Relative tolerance between evaluation paths.
    #[arg(long, global = true)]
    tol_eval: Option<f64>,
    /// Constant C of the 2D chain tolerance C*h.
    #[arg(long, global = true)]
    tol_chain_c: Option<f64>,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EvalPath {
    Naive,
    Layercake,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Check {
    Lemma21,
    Lemma23,
    Chain,
    Truncation,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Ascent,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Full,
    Knapsack,
}

#[derive(Subcommand)]
enum Command {
    /// Schwarz rearrangement of f and g.
    Rearrange { instance: PathBuf },
    /// Polarization of f and g in the hyperplane x[axis] = offset.
    Polarize {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        axis: usize,
        #[arg(long)]
        offset: f64,
    },
    /// The functional J(f, g).
    Eval {
        instance: PathBuf,
        #[arg(long, default_value = "product")]
        psi: String,
        #[arg(long, default_value = "exp")]
        kernel: String,
        #[arg(long, value_enum, default_value_t = EvalPath::Naive)]
        path: EvalPath,
    },
    /// Sampled checks of the integrand hypotheses.
    CheckIntegrand {
        #[arg(long)]
        psi: String,
    },
    /// Rectifying maps and reconstruction residual; unbounded integrands are truncated at vlimit.
    Decompose {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        vlimit: f64,
        /// Number of tabulation points on [0, vlimit].
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Inequality checks on one instance or on seeded random instances.
    Verify(VerifyArgs),
    /// Search for maximizers over a finite slice of the constraint set.
    Maximize(MaximizeArgs),
    /// Wall times of both evaluation paths.
    Bench {
        instance: PathBuf,
        #[arg(long, default_value = "product")]
        psi: String,
        #[arg(long, default_value = "exp")]
        kernel: String,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    /// Instance file; omit with --random.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub instance: Option<PathBuf>,
    /// Number of random instances.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value = "product")]
    pub psi: String,
    /// Kernel; lemma21 random runs default to dyadic step kernels.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Gamma profile for lemma23: linear, square, xmin1, sqrt.
    #[arg(long, default_value = "linear")]
    pub gamma: String,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
    #[arg(long, default_value_t = 8.0)]
    pub halfwidth: f64,
    #[arg(long, default_value_t = 1.0)]
    pub cap: f64,
    #[arg(long, default_value_t = 4.0)]
    pub mass: f64,
}

#[derive(Args)]
pub struct MaximizeArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Instance template: domain and constraints; f and g give the ascent start.
    pub template: PathBuf,
    /// Allowed values as fractions of the cap.
    #[arg(long, default_value = "0,1", value_delimiter = ',')]
    pub levels: Vec<f64>,
    #[arg(long, default_value = "powerprod:2:2")]
    pub psi: String,
    #[arg(long, default_value = "exp")]
    pub kernel: String,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
}

pub struct Context {
    pub tol: Tolerances64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

fn configure_workers() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("RIESZCHECK_WORKERS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("RIESZCHECK_WORKERS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let defaults = Tolerances64::default();
    let ctx = Context {
        tol: Tolerances64 {
            prop: cli.global.tol_prop.unwrap_or(defaults.prop),
            eval: cli.global.tol_eval.unwrap_or(defaults.eval),
            chain_c: cli.global.tol_chain_c,
            ..defaults
        },
        seed: cli.global.seed,
        output: cli.global.output,
    };
    let result = configure_workers().and_then(|_| match cli.command {
        Command::Rearrange { instance } => commands::rearrange(&ctx, &instance),
        Command::Polarize { instance, axis, offset } => commands::polarize(&ctx, &instance, axis, offset),
        Command::Eval { instance, psi, kernel, path } => commands::eval(&ctx, &instance, &psi, &kernel, path),
        Command::CheckIntegrand { psi } => commands::check_integrand(&ctx, &psi),
        Command::Decompose { psi, vlimit, points } => commands::decompose(&ctx, &psi, vlimit, points),
        Command::Verify(args) => commands::verify(&ctx, &args),
        Command::Maximize(args) => commands::maximize(&ctx, &args),
        Command::Bench { instance, psi, kernel, repeats } => {
            commands::bench(&ctx, &instance, &psi, &kernel, repeats)
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
