use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use multcorr::expcli::{run, Kind, RunOptions};

/// Run one experiment from a TOML config.
#[derive(Parser, Debug)]
#[command(name = "multcorr", version)]
struct Cli {
    /// sieve | correlate | predict-corollary | predict-theorem | partition |
    /// majorant-scan | linear-forms-ratio | char-identity | stability-scan | sato-tate
    kind: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let kind: Kind = match cli.kind.parse() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        out: cli.out,
        threads: cli.threads,
        seed: cli.seed,
    };
    match run(kind, &cli.config, &opts) {
        Ok(outcome) => {
            print!("{}", outcome.report.summary());
            println!("wall time {:.1} s", outcome.seconds);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
