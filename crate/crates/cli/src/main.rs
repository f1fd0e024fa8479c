mod config;
mod count;
mod forms;
mod geom;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;

/// Exit status 1 marks a failed verification, 2 a usage error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) | CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hypglue", version, about = "Quadratic forms, hyperbolic Voronoi demos and glueing-graph counts")]
struct Cli {
    /// Output directory (default: out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling (default: 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON object of parameters; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissible forms and the six-form counting family.
    #[command(subcommand)]
    Forms(FormsCommand),
    /// Ball-model figures with the numbers behind them.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Glueing-graph counts, growth fit and assembly checks.
    Count(CountArgs),
}

#[derive(Subcommand, Debug)]
pub enum FormsCommand {
    /// The six forms f_(n-1) + p·x_n² with pairwise certificates.
    Family(FamilyArgs),
    /// Admissibility of a diagonal form.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Q or Q(sqrt2).
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Comma separated coefficients, e.g. "-1,1,1" or "-r2,1,1".
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum GeomCommand {
    /// Sparse versus spaced point sets on two marked geodesics.
    Admissible(AdmissibleArgs),
    /// Nesting of the factor cells of two crossing translations.
    Nesting(NestingArgs),
    /// Boundary-circle radii of the factor cells as R grows.
    Shrink(ShrinkArgs),
    /// Orthogonal extension of the factor cells one dimension up.
    Extension(ExtensionArgs),
}

#[derive(Args, Debug)]
pub struct AdmissibleArgs {
    /// Distance between the two axes.
    #[arg(long)]
    pub dist: Option<f64>,
    #[arg(long = "len1")]
    pub len1: Option<f64>,
    #[arg(long = "len2")]
    pub len2: Option<f64>,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Args, Debug)]
pub struct NestingArgs {
    /// Angle between the axes in degrees.
    #[arg(long)]
    pub angle: Option<f64>,
    #[arg(long = "lenH")]
    pub len_h: Option<f64>,
    #[arg(long = "lenV")]
    pub len_v: Option<f64>,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Also bisect the V-length threshold (orthogonal axes only).
    #[arg(long)]
    pub bisect: bool,
}

#[derive(Args, Debug)]
pub struct ShrinkArgs {
    #[arg(long = "lenH")]
    pub len_h: Option<f64>,
    /// Comma separated, strictly increasing.
    #[arg(long = "R")]
    pub r: Option<String>,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ExtensionArgs {
    #[arg(long)]
    pub angle: Option<f64>,
    #[arg(long = "lenH")]
    pub len_h: Option<f64>,
    #[arg(long = "lenV")]
    pub len_v: Option<f64>,
    /// Coefficient of the appended coordinate.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long = "m-max")]
    pub m_max: Option<usize>,
    /// free, proper or both.
    #[arg(long)]
    pub mode: Option<String>,
    /// Assemble and check graphs: every proper graph up to m = 6, seeded
    /// random samples beyond.
    #[arg(long = "check-assemblies")]
    pub check_assemblies: bool,
    /// Random graphs per (mode, m) for the assembly checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Scale in the fit ln N = c·v ln v + b with v = alpha·m.
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// Shared run context handed to each command.
pub struct Run {
    pub config: Config,
    pub out: output::Output,
    pub seed: u64,
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut config = Config::load(cli.config.as_deref())?;
    let out_dir = config.out_dir(cli.out)?;
    let seed = config.seed(cli.seed)?;
    let (name, allowed): (&str, &[&str]) = match &cli.command {
        Command::Forms(FormsCommand::Family(_)) => ("forms family", &["n", "field"]),
        Command::Forms(FormsCommand::Check(_)) => ("forms check", &["coeffs", "field"]),
        Command::Geom(GeomCommand::Admissible(_)) => ("geom admissible", &["dist", "len1", "len2", "cutoff"]),
        Command::Geom(GeomCommand::Nesting(_)) => ("geom nesting", &["angle", "lenH", "lenV", "cutoff", "bisect"]),
        Command::Geom(GeomCommand::Shrink(_)) => ("geom shrink", &["lenH", "R", "cutoff"]),
        Command::Geom(GeomCommand::Extension(_)) => ("geom extension", &["angle", "lenH", "lenV", "q", "cutoff"]),
        Command::Count(_) => ("count", &["m-max", "mode", "check-assemblies", "samples", "alpha"]),
    };
    config.restrict(allowed)?;
    let out = output::Output::create(out_dir)?;
    let mut ctx = Run { config, out, seed };
    let verdict = match cli.command {
        Command::Forms(FormsCommand::Family(a)) => forms::family(&mut ctx, a),
        Command::Forms(FormsCommand::Check(a)) => forms::check(&mut ctx, a),
        Command::Geom(GeomCommand::Admissible(a)) => geom::admissible(&mut ctx, a),
        Command::Geom(GeomCommand::Nesting(a)) => geom::nesting(&mut ctx, a),
        Command::Geom(GeomCommand::Shrink(a)) => geom::shrink(&mut ctx, a),
        Command::Geom(GeomCommand::Extension(a)) => geom::extension(&mut ctx, a),
        Command::Count(a) => count::count(&mut ctx, a),
    };
    // the manifest is written for failed verifications too
    let text = match &verdict {
        Ok(v) => v.clone(),
        Err(CliError::Failed(m)) => format!("FAILED: {m}"),
        Err(_) => return verdict,
    };
    let Run { config, out, .. } = ctx;
    out.finish(name, config.resolved(), &text)?;
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(verdict) => {
            println!("{verdict}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
