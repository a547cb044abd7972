mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use report::{Report, Status};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum ReportKind {
    Human,
    Machine,
}

#[derive(Parser, Debug)]
#[command(name = "pdgca", version, about = "Poincaré DGCAs of Hodge type over the rationals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Algebra file in the interchange format.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Built-in algebra by name.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Where to write the command's artifact (algebra, decomposition, export directory).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the machine-readable report to this path.
    #[arg(long, global = true)]
    pub report_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub report: ReportKind,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the DGCA axioms and Poincaré duality.
    Validate,
    /// Betti numbers and class representatives.
    Cohomology,
    /// Search for a Hodge-type decomposition.
    Hodge,
    /// Small algebra and small quotient with their structure checks.
    Small,
    /// Transferred A-infinity operations by tree summation.
    Transfer {
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// The ternary operation from the closed formula, and its pairing tensor.
    Mu3,
    /// Decide whether the ternary operation is a Hochschild coboundary.
    Formality,
    /// Compare two algebras along a cohomology isomorphism.
    Compare {
        /// Second algebra: a file path or a catalog name.
        #[arg(long)]
        other: String,
        /// Isomorphism as lines `1; class; class; p/q`; identity when omitted.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Massey products of cocycles, or a degree screen when no algebra is given.
    Massey {
        /// Comma-separated basis ids of cocycles.
        #[arg(long, value_delimiter = ',')]
        elements: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Degree screens for triviality of Massey products.
    Screen {
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Assert Hodge type with simply connected base up to degree-1 exterior factors.
        #[arg(long)]
        hodge_product: bool,
    },
    /// Tensor with closed degree-1 exterior variables.
    Extend {
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
    /// List built-in algebras, or export them with transcripts to `--output`.
    Catalog,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (status, report) = match commands::run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            let mut r = Report::new(commands::name(&cli.command));
            r.push("status", Status::InputError.label());
            r.push("error", e.to_string().replace('\n', " "));
            (Status::InputError, r)
        }
    };
    let text = match cli.report {
        ReportKind::Human => report.human(),
        ReportKind::Machine => report.machine(),
    };
    print!("{text}");
    if let Some(p) = &cli.report_file {
        if let Err(e) = std::fs::write(p, report.machine()) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return ExitCode::from(Status::InputError.code() as u8);
        }
    }
    ExitCode::from(status.code() as u8)
}
