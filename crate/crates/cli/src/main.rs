use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use dirackit_cli::{CliError, Options, Outcome, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "dirackit", version, about = "Dirac structures, reduction and monodromy on polynomial scenes")]
struct Cli {
    /// Print the JSON Schema of the scene format and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropy, involutivity, action, moment and regularity checks.
    Validate(Common),
    /// Pointwise reduction, smoothness probe and reduction diamond.
    Reduce(Common),
    /// Monodromy verdict for the leaves S^2 x {r}.
    Obstruct(Common),
    /// Curvature integrals and area variations.
    Area(Common),
    /// Print a canonical preset scene.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scene: PathBuf,
    /// Report destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-node gaps or (r, g(r)) samples.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long = "grid-res")]
    grid_res: Option<usize>,
    #[arg(long = "quadrature-order")]
    quadrature_order: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DIRACKIT_THREADS") {
        let n: usize = v.parse().context("DIRACKIT_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring thread pool")?;
    }
    Ok(())
}

fn write_out(path: Option<&PathBuf>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_common(c: &Common, f: fn(&dirackit::Scene, &Options) -> Result<Outcome, CliError>) -> anyhow::Result<i32> {
    let text = match std::fs::read_to_string(&c.scene) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("input error: cannot read {}: {e}", c.scene.display());
            return Ok(2);
        }
    };
    let opts = Options {
        grid_res: c.grid_res,
        quadrature_order: c.quadrature_order,
        seed: c.seed,
    };
    let outcome = match dirackit_cli::load_scene(&text).and_then(|s| f(&s, &opts)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return Ok(e.exit_code());
        }
    };
    write_out(c.out.as_ref(), &outcome.json)?;
    if let (Some(path), Some(csv)) = (&c.csv, &outcome.csv) {
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(outcome.status.exit_code())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    configure_threads()?;
    if cli.schema {
        print!("{}", dirackit_cli::schema());
        return Ok(0);
    }
    let Some(cmd) = cli.command else {
        eprintln!("no subcommand given; see --help");
        return Ok(2);
    };
    match cmd {
        Command::Validate(c) => run_common(&c, dirackit_cli::validate),
        Command::Reduce(c) => run_common(&c, dirackit_cli::reduce),
        Command::Obstruct(c) => run_common(&c, dirackit_cli::obstruct),
        Command::Area(c) => run_common(&c, dirackit_cli::area),
        Command::Preset { name, out } => match dirackit_cli::preset(&name) {
            Ok(json) => write_out(out.as_ref(), &json).map(|_| 0),
            Err(e) => {
                eprintln!("{e}");
                Ok(e.exit_code())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
