use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hurwitz_tr::cli::{self, Format, RunConfig};

/// Weighted double Hurwitz numbers from a TOML run configuration.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    /// Run configuration (TOML).
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Override the output format of the config.
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Print the normalized configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match go(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn go(args: &Args) -> hurwitz_tr::Result<i32> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| hurwitz_tr::Error::Config(format!("{}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    if args.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(0);
    }
    let format = match args.format.as_deref() {
        Some("csv") => Format::Csv,
        Some(_) => Format::Json,
        None => cfg.output,
    };
    let report = cli::run(&cfg)?;
    let text = report.render(format)?;
    match &args.out {
        Some(p) => std::fs::write(p, text).map_err(|e| hurwitz_tr::Error::Config(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}
