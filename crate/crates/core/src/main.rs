use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use markov_curves::curve::{builtin_germ, BUILTIN_GERMS};
use markov_curves::experiments::{load_config, run_study, write_outputs, ExperimentError, ScenarioConfig, Study};

const THREADS_VAR: &str = "MARKOV_CURVES_THREADS";

/// Tangential Markov inequalities on real algebraic curve germs.
#[derive(Parser)]
#[command(name = "markov-curves", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario configuration file.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Directory for the CSV reports.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Seed for the random polynomial suites; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Markov factor scan over degrees and radii, with the exponent fit.
    MarkovScan(RunArgs),
    /// Green function values from the Siciak LP.
    GreenEval(RunArgs),
    /// Geodesic distance exponent at the basepoint.
    GeodesicFit(RunArgs),
    /// Hölder exponent of the Green function.
    HcpFit(RunArgs),
    /// The acceptance suite; `--config` may rename the scenario or set the seed.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Lists the built-in germs.
    ListGerms {
        /// Accepted for uniformity; unused.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), String> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{THREADS_VAR} must be a nonnegative integer, got `{text}`"))?,
        Err(std::env::VarError::NotPresent) => 0,
        Err(e) => return Err(format!("{THREADS_VAR}: {e}")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn list_germs() -> Result<bool, ExperimentError> {
    println!("id\tk\tclass\tdim\ttangent");
    for id in BUILTIN_GERMS {
        let germ = builtin_germ(id).map_err(ExperimentError::numeric)?;
        let tangent: Vec<String> = germ.tangent_vector().iter().map(|x| x.to_string()).collect();
        println!(
            "{id}\t{}\t{}\t{}\t({})",
            germ.branch().k(),
            germ.point_class().as_str(),
            germ.ambient_dim(),
            tangent.join(", ")
        );
    }
    Ok(true)
}

fn run(config: ScenarioConfig, common: &CommonArgs) -> Result<bool, ExperimentError> {
    let output = run_study(&config, common.seed)?;
    let (raw, fit) = write_outputs(&config.name, &output, &common.out_dir)?;
    let violations = output.violations();
    for row in output.fit.iter().chain(&output.raw) {
        if row.status == markov_curves::experiments::RowStatus::Violation {
            eprintln!("violation: {} {} value={}", row.scenario, row.study, row.value);
        }
    }
    println!("{}", raw.display());
    println!("{}", fit.display());
    Ok(violations == 0)
}

fn load_for(path: &Path, study: Study) -> Result<ScenarioConfig, ExperimentError> {
    let config = load_config(path)?;
    if config.study != study {
        return Err(ExperimentError::Invalid(format!(
            "{} declares study `{}`, but the subcommand runs `{}`",
            path.display(),
            config.study.as_str(),
            study.as_str()
        )));
    }
    Ok(config)
}

fn dispatch(command: Command) -> Result<bool, ExperimentError> {
    let study_run = |args: RunArgs, study: Study| run(load_for(&args.config, study)?, &args.common);
    match command {
        Command::MarkovScan(args) => study_run(args, Study::MarkovScan),
        Command::GreenEval(args) => study_run(args, Study::GreenEval),
        Command::GeodesicFit(args) => study_run(args, Study::GeodesicFit),
        Command::HcpFit(args) => study_run(args, Study::HcpFit),
        Command::Verify { config, common } => {
            let config = match config {
                Some(path) => load_for(&path, Study::VerifyAll)?,
                None => ScenarioConfig::with_study("verify", Study::VerifyAll),
            };
            run(config, &common)
        }
        Command::ListGerms { .. } => list_germs(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
