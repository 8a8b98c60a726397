//! Command-line front end: reads a dual matrix from JSON, runs one
//! factorization and writes a self-describing report.

pub mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualmat::{Eta, Fallback, Pivoting, Quaternion};

use crate::error::CliError;
use crate::format::{read_json, read_matrix_file, Ctx};
use crate::report::{Command, Mode, Options};

#[derive(Parser, Debug)]
#[command(name = "dualmat", version, about = "Factorizations of dual matrices")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Dual Takagi factorization of a complex symmetric dual matrix.
    Takagi(Common),
    /// η-Takagi factorization of a quaternion η-Hermitian dual matrix.
    EtaTakagi {
        #[command(flatten)]
        common: Common,
        /// η as i, j, k or w,x,y,z; overrides the input file.
        #[arg(long, value_parser = parse_eta)]
        eta: Option<Eta>,
        #[arg(long)]
        cluster_tol: Option<f64>,
    },
    /// Singular value style factorization of a real symmetric dual matrix.
    Atdsvd {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::Signed)]
        mode: ModeArg,
        #[arg(long)]
        cluster_tol: Option<f64>,
    },
    /// Rank-k dual LU factorization.
    Dlu {
        #[command(flatten)]
        common: Common,
        /// Rank: `auto` or an integer.
        #[arg(long, default_value = "auto", value_parser = parse_k)]
        k: RankArg,
        #[arg(long, value_enum, default_value_t = PivotArg::None)]
        pivoting: PivotArg,
        #[arg(long, value_enum, default_value_t = FallbackArg::Project)]
        fallback: FallbackArg,
    },
    /// Dual Cholesky factorization.
    Dcholesky {
        #[command(flatten)]
        common: Common,
        /// Accept a positive semidefinite standard part.
        #[arg(long)]
        semidefinite: bool,
    },
    /// Dual Moore-Penrose generalized inverse.
    Dmpgi(Common),
    /// Cross-check the existence conditions for DMPGI, rank-k and DLU.
    Equivalence(Common),
    /// Recompute the residuals of a report and check them.
    Verify { report: PathBuf },
}

#[derive(Args, Debug)]
struct Common {
    /// Input matrix file.
    input: PathBuf,
    /// Absolute tolerance; defaults to 1e-10 · max(1, ‖A‖_F).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Signed,
    Strict,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PivotArg {
    None,
    Rows,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FallbackArg {
    Project,
    Fail,
}

/// `--k`: `None` is `auto`.
#[derive(Clone, Copy, Debug)]
struct RankArg(Option<usize>);

fn parse_k(s: &str) -> Result<RankArg, String> {
    if s == "auto" {
        return Ok(RankArg(None));
    }
    s.parse().map(|k| RankArg(Some(k))).map_err(|_| format!("expected `auto` or a nonnegative integer, got {s:?}"))
}

fn parse_eta(s: &str) -> Result<Eta, String> {
    let q = match s {
        "i" => Quaternion::I,
        "j" => Quaternion::J,
        "k" => Quaternion::K,
        _ => {
            let c: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("expected i, j, k or w,x,y,z, got {s:?}"))?;
            let [w, x, y, z] = c[..] else { return Err(format!("expected four components, got {}", c.len())) };
            Quaternion::new(w, x, y, z)
        }
    };
    Eta::new(q).map_err(|e| e.to_string())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut opts = Options::default();
    let (cmd, common) = match cli.command {
        Sub::Verify { report } => return verify(&report),
        Sub::Takagi(c) => (Command::Takagi, c),
        Sub::EtaTakagi { common, eta, cluster_tol } => {
            opts.eta = eta;
            opts.cluster_tol = cluster_tol;
            (Command::EtaTakagi, common)
        }
        Sub::Atdsvd { common, mode, cluster_tol } => {
            opts.mode = match mode {
                ModeArg::Signed => Mode::Signed,
                ModeArg::Strict => Mode::Strict,
            };
            opts.cluster_tol = cluster_tol;
            (Command::Atdsvd, common)
        }
        Sub::Dlu { common, k, pivoting, fallback } => {
            opts.k = k.0;
            opts.pivoting = match pivoting {
                PivotArg::None => Pivoting::None,
                PivotArg::Rows => Pivoting::Rows,
            };
            opts.fallback = match fallback {
                FallbackArg::Project => Fallback::Project,
                FallbackArg::Fail => Fallback::Fail,
            };
            (Command::Dlu, common)
        }
        Sub::Dcholesky { common, semidefinite } => {
            opts.semidefinite = semidefinite;
            (Command::Dcholesky, common)
        }
        Sub::Dmpgi(c) => (Command::Dmpgi, c),
        Sub::Equivalence(c) => (Command::Equivalence, c),
    };
    opts.tol = common.tol;
    if let Some(t) = opts.tol {
        if !(t.is_finite() && t > 0.0) {
            eprintln!("error: --tol must be a positive finite number");
            return 1;
        }
    }

    let input = match read_matrix_file(&common.input) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let (report, code) = report::run(cmd, &input, &opts);
    let text = match common.format {
        OutFormat::Json => report::to_json(&report),
        OutFormat::Text => report::to_text(&report),
    };
    if let Err(e) = write_out(common.output.as_deref(), &text) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if code != 0 {
        eprintln!("error: {}", report["status"].as_str().unwrap_or("failed"));
    }
    code
}

fn verify(path: &Path) -> i32 {
    let result = read_json(path).and_then(|v| report::verify(&Ctx { path }, &v));
    match result {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
