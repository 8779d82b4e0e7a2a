use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hyperlat_cli::{run, CliError, Command, Manifest, Parameters, CACHE_ENV};

/// Exact lattice counts, spherical transforms and exponent tables.
///
/// Either name a command and pass its flags, or pass `--manifest` with a JSON
/// manifest. Exit status: 0 success, 2 invalid manifest, 3 numeric failure or
/// corrupt cache.
#[derive(Debug, Parser)]
#[command(name = "hyperlat", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum, required_unless_present = "manifest", conflicts_with = "manifest")]
    command: Option<Command>,
    /// JSON manifest describing the whole run.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Exact squared radius "p/q".
    #[arg(long)]
    radius_sq: Option<String>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Points on the geometric T grid.
    #[arg(long)]
    t_steps: Option<usize>,
    /// Radius for TRANSFORM.
    #[arg(long)]
    t: Option<f64>,
    /// Count method (row_recursive, generic_form, naive) or transform method
    /// (contour, residues, direct, envelope).
    #[arg(long)]
    method: Option<String>,
    /// Spectral parameter as "re,im;re,im;...".
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    theorem: Option<u8>,
    /// Output directory for CSV, JSON lines and the manifest copy.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    precision_bits: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Residue series depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Regime exponent for the envelope.
    #[arg(long)]
    kappa: Option<f64>,
    /// Last dimension of the BASELINES table.
    #[arg(long)]
    n_max: Option<usize>,
}

fn manifest(args: Args) -> Result<Manifest, CliError> {
    if let Some(path) = &args.manifest {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Manifest(format!("{}: {e}", path.display())))?;
        let mut m = Manifest::from_json(&text)?;
        // flags fill in locations the manifest leaves open
        m.output_path = m.output_path.or(args.out);
        m.cache_dir = m.cache_dir.or(args.cache_dir);
        return Ok(m);
    }
    let command = args.command.expect("clap enforces a command");
    let parameters = Parameters {
        n: args.n,
        radius_sq: args.radius_sq,
        t_min: args.t_min,
        t_max: args.t_max,
        t_steps: args.t_steps,
        t: args.t,
        method: args.method,
        mu: args.mu,
        theorem: args.theorem,
        workers: args.workers,
        precision_bits: args.precision_bits,
        tol: args.tol,
        depth: args.depth,
        kappa: args.kappa,
        n_max: args.n_max,
        ..Parameters::default()
    };
    Ok(Manifest {
        command,
        parameters,
        output_path: args.out,
        cache_dir: args.cache_dir,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    match manifest(args).and_then(|m| run(&m)) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hyperlat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
