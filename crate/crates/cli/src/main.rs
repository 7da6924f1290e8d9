use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harness::config::Layer;
use harness::field::{emit_field, FieldConfig};
use harness::{run_suites, HarnessError, SuiteConfig};

#[derive(Parser)]
#[command(name = "gqweyl", version, about = "Property suites and Weyl field export for the massless spin-1/2 particle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report every check.
    Verify(VerifyArgs),
    /// Evaluate a transformed momentum profile on a spacetime lattice.
    Field(FieldArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable, comma-separated, or `all`)
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count for every scalable check
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance override `name=value` (repeatable)
    #[arg(long = "tol")]
    tol: Vec<String>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i32>,
    #[arg(long)]
    e_min: Option<f64>,
    #[arg(long)]
    e_max: Option<f64>,
    #[arg(long)]
    n_radial: Option<usize>,
    #[arg(long)]
    n_angular: Option<usize>,
    /// Extra Poincare element for the covariance checks (repeatable)
    #[arg(long = "element")]
    elements: Vec<String>,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    report: Option<PathBuf>,
    /// Flat TOML configuration file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0: one per core)
    #[arg(long)]
    threads: Option<usize>,
    /// Zero all timings so reports compare byte for byte
    #[arg(long)]
    no_timestamps: bool,
    /// Suppress the per-check table
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct FieldArgs {
    /// `bump:a=..,b=..`, `gaussian:center=..,width=..,a=..,b=..`, `shell:energy=..,width=..`, `zero`
    #[arg(long, default_value = "bump:a=0.5,b=2.5")]
    profile: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
    chi: i32,
    /// `AxBxCxD:step`, centered at the origin
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Energy window of the quadrature; defaults to the profile support
    #[arg(long, num_args = 2, value_names = ["E_MIN", "E_MAX"])]
    window: Option<Vec<f64>>,
    #[arg(long)]
    n_radial: Option<usize>,
    #[arg(long)]
    n_angular: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Apply a Poincare element to the field, e.g. `boost:axis=0/0/1,rapidity=0.5`
    #[arg(long)]
    act: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Metadata path; defaults to the CSV path with a `.json` extension
    #[arg(long)]
    meta: Option<PathBuf>,
}

fn verify(args: VerifyArgs) -> Result<bool, HarnessError> {
    let file = args.config.as_deref().map(Layer::from_file).transpose()?;
    let cli = Layer {
        suite: (!args.suites.is_empty()).then_some(args.suites),
        seed: args.seed,
        samples: args.samples,
        tol: (!args.tol.is_empty()).then_some(args.tol),
        chi: args.chi,
        hbar: args.hbar,
        e_min: args.e_min,
        e_max: args.e_max,
        n_radial: args.n_radial,
        n_angular: args.n_angular,
        element: (!args.elements.is_empty()).then_some(args.elements),
        report: args.report,
        threads: args.threads,
        no_timestamps: args.no_timestamps.then_some(true),
    };
    let cfg = SuiteConfig::resolve(file, cli)?;
    let report = run_suites(&cfg)?;
    if !args.quiet {
        eprint!("{}", report.table());
    }
    match &cfg.report {
        Some(path) => report.write(path)?,
        None => print!("{}", report.to_json()),
    }
    for r in report.failures() {
        eprintln!("failed: {} (error {:e}, tolerance {:e})", r.name, r.max_abs_error, r.tolerance);
    }
    Ok(report.all_passed())
}

fn field(args: FieldArgs) -> Result<(), HarnessError> {
    let window = args.window.map(|w| (w[0], w[1]));
    let cfg = FieldConfig::new(
        &args.profile,
        args.chi,
        args.hbar,
        args.grid.as_deref(),
        window,
        (args.n_radial, args.n_angular),
        args.seed,
        args.act,
        args.out,
        args.meta,
    )?;
    let meta = emit_field(&cfg)?;
    for w in &meta.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("wrote {} points to {} ({} active nodes)", meta.grid.points, cfg.out.display(), meta.active_nodes);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Field(a) => field(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
