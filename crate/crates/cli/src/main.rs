use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sphlab_cli::accept::{accept_report, corrupted_tables, exact_tables, AcceptOptions, Selector};
use sphlab_cli::config::{parse_delta, parse_list, GammaSpec, Order};
use sphlab_cli::{experiments, Command, ConfigError, Error, ExperimentConfig, Report};

#[derive(Parser)]
#[command(
    name = "sphlab",
    version,
    about = "Riesz means on the sphere: kernel, means, interpolation and maximal experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Riesz and Cesaro kernels against the interior bound
    Kernel(Common),
    /// Riesz means of zonal profiles by kernel quadrature and by coefficients
    Means(Common),
    /// Interpolation of Riesz means of step functions
    Interp(Common),
    /// Maximal Riesz operator against f*(pole) + f*(antipode)
    Maximal(Common),
    /// Run the acceptance suite
    Accept(AcceptArgs),
}

#[derive(Args)]
struct Common {
    /// Sphere dimension N (S^N in R^{N+1})
    #[arg(long)]
    dim: Option<usize>,
    /// Order alpha; complex literals like 0.5+1i for interp
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Upper order zeta for interp
    #[arg(long)]
    zeta: Option<String>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma-separated distances: 1.2, pi/2, 3*pi/4, pi-1/n
    #[arg(long)]
    gamma: Option<String>,
    /// Profile NAME[:ARGS]; repeat for several
    #[arg(long)]
    profile: Vec<String>,
    /// Comma-separated deltas for maximal, e.g. 1,1/2,1/4
    #[arg(long)]
    delta: Option<String>,
    /// Write the CSV report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature nodes per panel
    #[arg(long)]
    quad_nodes: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    CorruptMultiplicity,
}

#[derive(Args)]
struct AcceptArgs {
    /// Comma-separated groups (tables, means, kernel, interp, maximal,
    /// determinism) or criterion numbers
    #[arg(long)]
    only: Option<String>,
    #[arg(long, default_value = "accept-report.csv")]
    out: PathBuf,
    #[arg(long, hide = true)]
    fault: Option<Fault>,
}

fn build_config(command: Command, c: Common) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::new(command);
    if let Some(d) = c.dim {
        cfg.dim = d;
    }
    if let Some(a) = c.alpha {
        cfg.alpha = a.parse()?;
    }
    if let Some(z) = c.zeta {
        cfg.zeta = z.parse::<Order>().map_err(|_| ConfigError::Invalid {
            flag: "zeta",
            value: z.clone(),
            expected: "a real number or a complex literal like 1+0.5i".into(),
        })?;
    }
    if let Some(n) = c.n_max {
        cfg.n_max = n;
    }
    if let Some(n) = c.n_min {
        cfg.n_min = n;
    }
    if let Some(g) = c.gamma {
        cfg.gammas = parse_list(&g, str::parse::<GammaSpec>)?;
    }
    if !c.profile.is_empty() {
        cfg.profiles = c.profile;
    }
    if let Some(d) = c.delta {
        cfg.deltas = parse_list(&d, parse_delta)?;
    }
    cfg.out = c.out;
    cfg.seed = c.seed;
    cfg.quad_nodes = c.quad_nodes;
    cfg.validate()?;
    Ok(cfg)
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => {
            report.write_to(path)?;
            for (k, v) in &report.summary {
                println!("{k}: {v}");
            }
            println!("wrote {}", path.display());
        }
        None => {
            print!("{}", report.render()?);
        }
    }
    Ok(())
}

fn run_experiment(command: Command, c: Common) -> Result<ExitCode, Error> {
    let cfg = build_config(command, c)?;
    let report = experiments::run(&cfg)?;
    emit(&report, cfg.out.as_ref())?;
    Ok(match report.summary_value("status") {
        Some("FAIL") => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn run_accept(a: AcceptArgs) -> Result<ExitCode, Error> {
    let only = match &a.only {
        Some(s) => parse_list(s, str::parse::<Selector>).map_err(|e| ConfigError::Invalid {
            flag: "only",
            value: s.clone(),
            expected: e,
        })?,
        None => Vec::new(),
    };
    let tables = match a.fault {
        Some(Fault::CorruptMultiplicity) => corrupted_tables(),
        None => exact_tables(),
    };
    let opts = AcceptOptions { only, tables };
    let outcomes = sphlab_cli::run_accept(&opts);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let report = accept_report(&outcomes, &opts.only);
    report.write_to(&a.out)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} passed, {failed} failed; report {}",
        outcomes.len() - failed,
        a.out.display()
    );
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::Kernel(c) => run_experiment(Command::Kernel, c),
        Sub::Means(c) => run_experiment(Command::Means, c),
        Sub::Interp(c) => run_experiment(Command::Interp, c),
        Sub::Maximal(c) => run_experiment(Command::Maximal, c),
        Sub::Accept(a) => run_accept(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
