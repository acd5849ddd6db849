use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use er_refine::app::{
    cmd_eval, cmd_generate, cmd_init, cmd_report, cmd_resolve, exit_code, ConfigOverrides, RunConfig,
};

#[derive(Parser)]
#[command(name = "er-refine", version, about = "Refine entity-resolution results with budgeted oracle questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; flags override its keys.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: ConfigOverrides,
}

#[derive(Subcommand)]
enum Command {
    /// Build the initial partition distribution and its top-K table.
    Init(Common),
    /// Ask the oracle under the token budget and refine the distribution.
    Resolve(Common),
    /// Print the saved distribution and question log.
    Report(Common),
    /// Sweep budgets and strategies over synthetic corpora.
    Eval(Common),
    /// Write a synthetic records CSV and its ground truth.
    Generate(Common),
    /// Print the effective configuration as TOML.
    ShowConfig(Common),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (Command::Init(c)
    | Command::Resolve(c)
    | Command::Report(c)
    | Command::Eval(c)
    | Command::Generate(c)
    | Command::ShowConfig(c)) = &cli.command;
    let config = RunConfig::load(c.config.as_deref(), &c.overrides)?;
    match cli.command {
        Command::Init(_) => {
            let out = cmd_init(&config)?;
            println!(
                "initial entropy: {:.6} bits over {} components",
                out.entropy_bits,
                out.distribution.components().len()
            );
            println!("wrote {}", config.out_dir.display());
        }
        Command::Resolve(_) => {
            let out = cmd_resolve(&config)?;
            if let Some((correct, asked)) = out.estimate {
                println!("theta estimated at {:.4} ({correct}/{asked} correct)", out.theta.value());
            }
            let s = &out.trace.summary;
            println!(
                "stopped: {:?} after {} iterations; entropy {:.6} -> {:.6} bits; tokens billed {}",
                s.stop_reason, s.iterations, s.initial_entropy, s.final_entropy, s.tokens_billed
            );
            println!("MAP partition: {}", s.map_partition);
            println!("wrote {}", config.out_dir.display());
        }
        Command::Report(_) => print!("{}", cmd_report(&config)?),
        Command::Eval(_) => {
            let report = cmd_eval(&config)?;
            report.write_csv(std::io::stdout()).context("writing report")?;
        }
        Command::Generate(_) => {
            let (records, truth) = cmd_generate(&config)?;
            println!("wrote {} and {}", records.display(), truth.display());
        }
        Command::ShowConfig(_) => print!("{}", config.to_toml()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<er_refine::Error>().map_or(1, exit_code);
            ExitCode::from(code as u8)
        }
    }
}
