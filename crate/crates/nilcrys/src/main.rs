use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilcrys::commands::{self, DemoArgs, Report};
use nilcrys::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Nilpotent Lie algebras, affine motions and the g5_4 obstruction demo.
#[derive(Debug, Parser)]
#[command(name = "nilcrys", version)]
struct Cli {
    /// Residual threshold for reported verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (the certificate for `demo`, the report otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomly sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension, class, center and lower central series of an algebra.
    Algebra {
        /// Catalog name or path to an algebra JSON file.
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        file: Option<PathBuf>,
    },
    /// Splitting of an automorphism into contracting, unit and expanding parts.
    Split {
        algebra: String,
        /// Matrix (inline JSON or file); a random exp-derivation when omitted.
        matrix: Option<String>,
    },
    /// Omega class and invariant line of a motion.
    Line { algebra: String, motion: String },
    /// Transversality and positivity of two motions.
    Pair { algebra: String, first: String, second: String },
    /// Runs the g5_4 case study and writes a certificate.
    Demo {
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long = "mh", default_value = "[[2,1],[1,1]]")]
        m_h: String,
        #[arg(long = "i-max", default_value_t = 40)]
        i_max: usize,
        /// Log of the translation part of the conjugating element.
        #[arg(long = "h-translation", default_value = "[0,1,0,0,0]")]
        h_translation: String,
        #[arg(long = "max-index", default_value_t = 1_000_000)]
        max_index: i64,
    },
    /// Re-checks a certificate file.
    Verify { certificate: PathBuf },
    /// Class and derivation-algebra report for every catalog algebra of dimension at most 5.
    Dim5,
}

fn run(cli: &Cli) -> CliResult<Report> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Algebra { name, file } => match (name, file) {
            (Some(n), None) => commands::algebra(n),
            (None, Some(f)) => commands::algebra(&f.to_string_lossy()),
            _ => Err(CliError::Input("give a catalog name or --file".into())),
        },
        Command::Split { algebra, matrix } => commands::split(algebra, matrix.as_deref(), cli.seed, cli.tol),
        Command::Line { algebra, motion } => commands::line(algebra, motion, cli.tol),
        Command::Pair { algebra, first, second } => commands::pair(algebra, first, second),
        Command::Demo { lambda, m_h, i_max, h_translation, max_index } => {
            let args = DemoArgs {
                lambda: *lambda,
                m_h: m_h.clone(),
                i_max: *i_max,
                h_translation: h_translation.clone(),
                max_index: *max_index,
            };
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("certificate.json"));
            commands::demo(&args, &out)
        }
        Command::Verify { certificate } => commands::verify(certificate),
        Command::Dim5 => commands::dim5(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text.clone(),
                Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
            };
            let is_demo = matches!(cli.command, Command::Demo { .. });
            match (&cli.out, is_demo) {
                (Some(path), false) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                _ => print!("{body}"),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
