use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hvlab::scenario::{
    emit_trace, report_file_name, run_manifest, run_scenario, write_report, RunOptions,
    ScenarioConfig, ScenarioKind, OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(
    name = "hvlab",
    version,
    about = "Run hidden-variable verification scenarios"
)]
struct Cli {
    /// Absolute tolerance for hidden-variable vs quantum comparisons.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Evenly spaced ω samples per trace (breakpoints are always added).
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Normalize every branching level, not just the earlier ones.
    #[arg(long, global = true)]
    normalize_all_levels: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config and print its JSON report.
    Run {
        config: PathBuf,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Randomized invariant sweep.
    Sweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Run every *.toml config in a directory.
    Manifest {
        dir: PathBuf,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Write omega,value CSV traces for a scenario's step functions.
    Trace {
        config: PathBuf,
        #[arg(long, env = OUT_DIR_ENV)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let options = RunOptions {
        tolerance: cli.tolerance,
        grid_points: cli.grid_points,
        normalize_all_levels: cli.normalize_all_levels,
    };
    match execute(cli.command, &options) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command, options: &RunOptions) -> hvlab::Result<bool> {
    match command {
        Command::Run { config, out } => {
            let mut c = ScenarioConfig::from_file(&config)?;
            options.apply(&mut c)?;
            let report = run_scenario(&c)?;
            print!("{}", report.to_json());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| hvlab::Error::Io {
                    path: dir.display().to_string(),
                    message: e.to_string(),
                })?;
                write_report(&report, &dir.join(report_file_name(&config)))?;
            }
            Ok(report.pass)
        }
        Command::Sweep { seed, trials, out } => {
            let mut c = ScenarioConfig::new(ScenarioKind::Sweep).with_sweep(seed, trials);
            options.apply(&mut c)?;
            let report = run_scenario(&c)?;
            print!("{}", report.to_json());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| hvlab::Error::Io {
                    path: dir.display().to_string(),
                    message: e.to_string(),
                })?;
                write_report(
                    &report,
                    &dir.join(format!("sweep_{seed}_{trials}.report.json")),
                )?;
            }
            Ok(report.pass)
        }
        Command::Manifest { dir, out } => {
            let summary = run_manifest(&dir, options, out.as_deref())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
            Ok(summary.pass)
        }
        Command::Trace { config, out } => {
            let mut c = ScenarioConfig::from_file(&config)?;
            options.apply(&mut c)?;
            let result = emit_trace(&c, &out)?;
            if let Some(notice) = result.notice {
                println!("{notice}");
            }
            for f in result.files {
                println!("{}", f.display());
            }
            Ok(true)
        }
    }
}
