//! `qradius`: generate inputs, compute radii, sector angles and means, and run
//! the inequality harness. Results go to stdout as JSON.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qradius", version, about = "q-numerical radii, sectorial matrices and matrix means")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Seeded matrix generation.
    Mat {
        #[command(subcommand)]
        cmd: MatCmd,
    },
    /// q-numerical radius and range.
    Qnr {
        #[command(subcommand)]
        cmd: QnrCmd,
    },
    /// Sector angle of an accretive matrix.
    Sector {
        #[command(subcommand)]
        cmd: SectorCmd,
    },
    /// Matrix means of accretive matrices.
    Means {
        #[command(subcommand)]
        cmd: MeansCmd,
    },
    /// Operator monotone function of an accretive matrix.
    Funcalc(FuncalcArgs),
    /// Inequality harness.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum MatCmd {
    Gen(GenArgs),
}

#[derive(Subcommand)]
enum QnrCmd {
    Radius(RadiusArgs),
    Range(RangeArgs),
}

#[derive(Subcommand)]
enum SectorCmd {
    Angle(AngleArgs),
}

#[derive(Subcommand)]
enum MeansCmd {
    Compute(MeansArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    Run(RunArgs),
    /// Registered predicates and mean axioms.
    List,
    Stress(StressArgs),
}

#[derive(Args, Serialize)]
pub struct GenArgs {
    /// psd | sectorial | accretive | hermitian | ginibre | dominated_quadruple
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct RadiusArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Positive semidefinite weight; identity when omitted.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    /// Real, or complex as `re+imi`.
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    #[arg(long, default_value_t = 2048)]
    pub oracle_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize)]
pub struct RangeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub metric: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct AngleArgs {
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Args, Serialize)]
pub struct MeansArgs {
    /// harmonic | geometric | weighted_geometric | arithmetic | log | heinz
    #[arg(long)]
    pub op: String,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// Also write the result matrix here.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct FuncalcArgs {
    /// `power:T`, `harmonic:S`, `identity`, `arithmetic`, or a JSON measure.
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
pub struct RunArgs {
    /// all | section2 | section3 | means-axioms
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file; the full report goes to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Serialize)]
pub struct StressArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Fix the sector angle instead of letting the search move it.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Label of the single bound to minimize.
    #[arg(long)]
    pub target: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let res = match cli.cmd {
        Cmd::Mat { cmd: MatCmd::Gen(a) } => commands::mat_gen(&a),
        Cmd::Qnr { cmd: QnrCmd::Radius(a) } => commands::qnr_radius(&a),
        Cmd::Qnr { cmd: QnrCmd::Range(a) } => commands::qnr_range(&a),
        Cmd::Sector { cmd: SectorCmd::Angle(a) } => commands::sector_angle(&a),
        Cmd::Means { cmd: MeansCmd::Compute(a) } => commands::means_compute(&a),
        Cmd::Funcalc(a) => commands::funcalc(&a),
        Cmd::Verify { cmd: VerifyCmd::Run(a) } => commands::verify_run(&a),
        Cmd::Verify { cmd: VerifyCmd::List } => commands::verify_list(),
        Cmd::Verify { cmd: VerifyCmd::Stress(a) } => commands::verify_stress(&a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
