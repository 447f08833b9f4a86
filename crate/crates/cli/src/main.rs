use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use innergrowth_cli::config::Kind;
use innergrowth_cli::{plot, run, CliError, EXIT_ASSERTION, EXIT_ERROR, EXIT_PASS};

#[derive(Parser)]
#[command(name = "innergrowth", version, about = "Run and plot innergrowth experiments")]
struct Cli {
    /// Overrides the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for result files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Render a result CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn plot_file(csv: &PathBuf, kind: &str, output: &PathBuf) -> Result<(), CliError> {
    let kind: Kind = kind.parse().map_err(CliError::Plot)?;
    let bytes = std::fs::read(csv).map_err(|e| CliError::Io(format!("cannot read {}: {e}", csv.display())))?;
    let svg = plot::render(&bytes, kind)?;
    std::fs::write(output, svg).map_err(|e| CliError::Io(format!("cannot write {}: {e}", output.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => run(config, &cli.out_dir, cli.seed).map(|s| {
            println!("all-pass={}", s.all_pass);
            for f in &s.files {
                eprintln!("wrote {}", f.display());
            }
            if s.all_pass { EXIT_PASS } else { EXIT_ASSERTION }
        }),
        Command::Plot { csv, kind, output } => plot_file(csv, kind, output).map(|_| EXIT_PASS),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
