use clap::{Parser, Subcommand};
use dunklkit_cli::config::{ExperimentConfig, Multiplicity};
use dunklkit_cli::experiments::{experiments, run_experiment};
use dunklkit_cli::report::{emit_report, from_json, Format, RunResults};
use dunklkit_cli::suites::{run_verify, suites, SuiteContext};
use dunklkit_cli::{exit, CliError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dunklkit", version, about = "Rational Dunkl analysis: verification suites and experiments")]
struct Cli {
    /// Worker threads for grid fan-out.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed overriding the configured one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory overriding the configured one.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: symbolic, translation, poisson, means, area, boundary or all.
    Verify {
        suite: String,
        /// TOML configuration supplying multiplicities and tolerances.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated Z2^d multiplicities, e.g. "1/2,1".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Run the experiment described by a TOML configuration.
    Run { config: PathBuf },
    /// Convert a JSON report to CSV or JSON, chosen by the output extension.
    Report { input: PathBuf, output: PathBuf },
    /// List suites and experiments.
    List,
}

fn read_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ExperimentConfig::from_toml(&text).map_err(|e| match e {
        dunklkit::Error::Parse { column, msg } => {
            dunklkit::Error::Parse { column, msg: format!("{}: {msg}", path.display()) }.into()
        }
        e => e.into(),
    })
}

fn write(results: &RunResults, dir: &Path, stem: &str) -> Result<(), CliError> {
    for (fmt, ext) in [(Format::Json, "json"), (Format::Csv, "csv")] {
        let path = dir.join(format!("{stem}.{ext}"));
        for p in emit_report(results, fmt, &path).map_err(|e| CliError::io(&path, e))? {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn status(passed: bool) -> i32 {
    if passed {
        exit::PASS
    } else {
        exit::CHECK_FAILURE
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::Verify { suite, config, lambda } => {
            let cfg = match &config {
                Some(p) => read_config(p)?,
                None => ExperimentConfig::default(),
            };
            let lambda = lambda
                .map(|s| s.split(',').map(|v| Multiplicity::Text(v.trim().to_string())).collect::<Vec<_>>());
            if let Some(m) = &lambda {
                for v in m {
                    v.to_rat()?;
                }
            }
            let ctx = SuiteContext::new(cfg, lambda, cli.seed)?;
            let results = run_verify(&suite, &ctx)?;
            for row in &results.tables[0].rows {
                let mark = if row[3].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                println!("{mark} {}::{} value={} tol={}", row[0].as_str().unwrap_or(""), row[1].as_str().unwrap_or(""), row[4], row[5]);
            }
            let dir = cli.out.unwrap_or_else(|| PathBuf::from(&ctx.config.output.dir));
            write(&results, &dir, &format!("verify_{suite}"))?;
            Ok(status(results.passed))
        }
        Command::Run { config } => {
            let mut cfg = read_config(&config)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let results = run_experiment(&cfg)?;
            for (k, v) in &results.summary {
                println!("{k} = {v}");
            }
            let dir = cli.out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
            write(&results, &dir, &cfg.output.stem)?;
            Ok(status(results.passed))
        }
        Command::Report { input, output } => {
            let text = std::fs::read_to_string(&input).map_err(|e| CliError::io(&input, e))?;
            let results = from_json(&text).map_err(|e| {
                dunklkit::Error::Parse { column: e.column(), msg: format!("{}: line {}: {e}", input.display(), e.line()) }
            })?;
            let fmt = Format::from_path(&output)
                .ok_or_else(|| CliError::Usage(format!("output {} must end in .csv or .json", output.display())))?;
            for p in emit_report(&results, fmt, &output).map_err(|e| CliError::io(&output, e))? {
                println!("wrote {}", p.display());
            }
            Ok(exit::PASS)
        }
        Command::List => {
            println!("suites:");
            for s in suites() {
                println!("  {:<14} {}", s.name(), s.description());
            }
            println!("  {:<14} every suite above", "all");
            println!("experiments:");
            for e in experiments() {
                println!("  {:<14} {}", e.name(), e.description());
            }
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DUNKLKIT_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::PASS as u8 });
        }
    };
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
