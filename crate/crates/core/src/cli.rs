//! The `morse` command line: argument definitions and subcommand bodies.
//!
//! Each `cmd_*` function writes to the given streams and returns the process
//! exit status: 0 on success (or an optimal verdict), 1 on usage, I/O or
//! parse errors, 2 when the optimizer exhausts its budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cell::Matching;
use crate::complex::{build_matching_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::gvf::GradientVectorField;
use crate::homology::simplicial_homology;
use crate::optimizer::{
    optimize, verify_certificate, SearchConfig, Strategy, Verdict, DEFAULT_MAX_CANCELLATIONS, DEFAULT_MAX_RESTARTS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "morse", version, about = "Discrete Morse theory on matching complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Lex,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build M_n, print its f-vector and Euler characteristic.
    Build {
        #[arg(short = 'n')]
        n: usize,
        /// Write the complex (maximal cells) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the integer homology of a complex file and the derived bounds.
    Homology { complex: PathBuf },
    /// Search for an optimal gradient vector field and write a certificate.
    Optimize {
        /// Complex file; alternatively give `-n`.
        complex: Option<PathBuf>,
        #[arg(short = 'n', conflicts_with = "complex")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "random")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_RESTARTS)]
        max_restarts: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_CANCELLATIONS)]
        max_cancellations: usize,
        #[arg(long, value_enum, default_value = "on")]
        simultaneous: Toggle,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate gradient paths from a critical cell of a field.
    Paths {
        complex: PathBuf,
        gvf: PathBuf,
        /// Source cell in `a-b,c-d` form.
        source: String,
    },
    /// Write the modified Hasse diagram of a field as a Graphviz digraph.
    ExportDot {
        complex: PathBuf,
        /// Field file; the empty field when omitted.
        gvf: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn load_complex(path: &Path) -> Result<Arc<SimplicialComplex>> {
    let text = read(path)?;
    SimplicialComplex::from_text(&text)
        .map(Arc::new)
        .map_err(|e| annotate(path, e))
}

fn load_field(complex: Arc<SimplicialComplex>, path: &Path) -> Result<GradientVectorField> {
    let text = read(path)?;
    GradientVectorField::from_text(complex, &text).map_err(|e| annotate(path, e))
}

fn annotate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, reason } => Error::Parse {
            line,
            reason: format!("{}: {reason}", path.display()),
        },
        other => other,
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_ERROR
}

fn debug_from_env() -> bool {
    std::env::var("MORSE_DEBUG_ASSERT").is_ok_and(|v| v == "1")
}

pub fn cmd_build(n: usize, out_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = build_matching_complex(n).and_then(|c| {
        if let Some(p) = out_path {
            write_file(p, &c.to_text())?;
        }
        Ok(c)
    });
    match result {
        Ok(c) => {
            let f: Vec<String> = c.f_vector().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "f = ({}), chi = {}", f.join(", "), c.euler_characteristic());
            EXIT_OK
        }
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_homology(complex_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match load_complex(complex_path).and_then(|c| simplicial_homology(&c)) {
        Ok(h) => {
            let _ = writeln!(out, "{}", h.summary_line());
            let _ = write!(out, "{}", h.report());
            EXIT_OK
        }
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_optimize(
    complex: Arc<SimplicialComplex>,
    config: &SearchConfig,
    cert_out: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cert = match optimize(&complex, config) {
        Ok(c) => c,
        Err(e) => return fail(err, &e),
    };
    let text = cert.to_text();
    if let Some(p) = cert_out {
        if let Err(e) = write_file(p, &text) {
            return fail(err, &e);
        }
    } else {
        let _ = write!(out, "{text}");
    }
    let verified = verify_certificate(&complex, &cert);
    let _ = writeln!(
        out,
        "verdict = {}, vector = {}, bounds = {}, verified = {}",
        cert.verdict, cert.critical, cert.bounds, verified
    );
    if !verified {
        let _ = writeln!(err, "error: certificate failed verification");
        return EXIT_ERROR;
    }
    match cert.verdict {
        Verdict::Optimal => EXIT_OK,
        Verdict::BudgetExhausted => {
            let _ = writeln!(err, "budget exhausted; best vector {}", cert.critical);
            EXIT_BUDGET
        }
    }
}

pub fn cmd_paths(complex_path: &Path, gvf_path: &Path, source: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut run = || -> Result<()> {
        let source: Matching = source.parse()?;
        let c = load_complex(complex_path)?;
        let field = load_field(Arc::clone(&c), gvf_path)?;
        let paths = field.enumerate_paths(&source)?;
        let _ = writeln!(out, "{} paths from {source}", paths.len());
        for p in &paths {
            let _ = writeln!(out, "  {}", p.describe(&c));
        }
        let _ = writeln!(out, "endpoints:");
        for (cell, count) in field.path_endpoints(&source)? {
            let _ = writeln!(out, "  {cell}: {count}");
        }
        Ok(())
    };
    match run() {
        Ok(()) => EXIT_OK,
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_export_dot(
    complex_path: &Path,
    gvf_path: Option<&Path>,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let run = || -> Result<String> {
        let c = load_complex(complex_path)?;
        let field = match gvf_path {
            Some(p) => load_field(c, p)?,
            None => GradientVectorField::empty(c),
        };
        Ok(field.to_dot())
    };
    match run() {
        Ok(dot) => match out_path {
            Some(p) => match write_file(p, &dot) {
                Ok(()) => EXIT_OK,
                Err(e) => fail(err, &e),
            },
            None => {
                let _ = write!(out, "{dot}");
                EXIT_OK
            }
        },
        Err(e) => fail(err, &e),
    }
}

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Build { n, out: path } => cmd_build(n, path.as_deref(), out, err),
        Command::Homology { complex } => cmd_homology(&complex, out, err),
        Command::Optimize {
            complex,
            n,
            strategy,
            seed,
            max_restarts,
            max_cancellations,
            simultaneous,
            out: cert_out,
        } => {
            let c = match (complex, n) {
                (Some(p), _) => load_complex(&p),
                (None, Some(n)) => build_matching_complex(n).map(Arc::new),
                (None, None) => Err(Error::InvalidRequest(
                    "optimize needs a complex file or -n".into(),
                )),
            };
            let c = match c {
                Ok(c) => c,
                Err(e) => return fail(err, &e),
            };
            let config = SearchConfig {
                strategy: match strategy {
                    StrategyArg::Lex => Strategy::Lexicographic,
                    StrategyArg::Random => Strategy::Random,
                },
                seed,
                max_restarts,
                max_cancellations,
                simultaneous: simultaneous == Toggle::On,
                debug_assert: debug_from_env(),
            };
            cmd_optimize(c, &config, cert_out.as_deref(), out, err)
        }
        Command::Paths { complex, gvf, source } => cmd_paths(&complex, &gvf, &source, out, err),
        Command::ExportDot { complex, gvf, out: path } => {
            cmd_export_dot(&complex, gvf.as_deref(), path.as_deref(), out, err)
        }
    }
}
