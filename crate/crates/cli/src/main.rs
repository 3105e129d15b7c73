mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdeforge_core::exec::Strategy;

use input::CliError;

#[derive(Debug, Parser)]
#[command(name = "pdeforge", version, about = "Build, evaluate and verify partial differential encodings")]
struct Cli {
    /// Run every exhaustive loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// Print JSON on a single line.
    #[arg(long, global = true)]
    compact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InterpMethod {
    Sumproduct,
    Binary,
    Lagrange,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RingArg {
    Q,
    Gf2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyMode {
    /// Coefficient extraction (the encoding semantics).
    Pde,
    /// Ordinary evaluation on the cube.
    Eval,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CardKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphKind {
    Iso,
    Sub,
    Super,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DetMethodArg {
    Grassmann,
    Vandermonde,
    Cofactor,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Full,
}

/// One of the accepted encodings of a polynomial.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PolySource {
    /// Multilinear polynomial JSON.
    #[arg(long)]
    poly: Option<String>,
    /// Exact hypermatrix circuit JSON.
    #[arg(long)]
    circuit: Option<String>,
    /// Floating-point hypermatrix circuit JSON.
    #[arg(long)]
    numeric: Option<String>,
}

#[derive(Debug, Subcommand)]
enum CircuitCommand {
    /// prod_{i in S} (1 + x_i).
    Subset {
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        n: usize,
    },
    /// prod_{i in S} x_i * prod_{i not in S} (1 + x_i).
    Superset {
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long)]
        n: usize,
    },
    /// One product per monomial of a polynomial.
    Trivial {
        #[arg(long)]
        poly: String,
    },
    /// Expands a hypermatrix circuit.
    Expand {
        #[arg(long)]
        circuit: String,
        /// Keep exponents instead of reducing x^2 to x.
        #[arg(long)]
        no_reduce: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a truth table as a polynomial.
    Interpolate {
        /// Truth table JSON: inline, a file path, or - for stdin.
        #[arg(long)]
        table: String,
        #[arg(long, value_enum, default_value = "sumproduct")]
        method: InterpMethod,
        #[arg(long, value_enum)]
        ring: Option<RingArg>,
    },
    /// Boole's arithmetic form of a formula such as "x0 & !(x1 | x2)".
    Boole {
        #[arg(long)]
        formula: String,
        /// Variable count; defaults to one past the largest index used.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Extract the coefficient at x^T and read it as a bit.
    PdeEval {
        #[command(flatten)]
        source: PolySource,
        /// Comma-separated variable indices of T.
        #[arg(long, default_value = "")]
        t: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Check an encoding against a truth table on every input.
    PdeVerify {
        #[command(flatten)]
        source: PolySource,
        #[arg(long)]
        table: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value = "pde")]
        mode: VerifyMode,
    },
    /// Build or expand sum-of-products circuits.
    Circuit {
        #[command(subcommand)]
        action: CircuitCommand,
    },
    /// Numeric search for a small circuit expanding to a target.
    PdpSearch {
        /// Target polynomial JSON.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        poly: Option<String>,
        /// Target truth table, encoded by the sum-product construction.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 8)]
        starts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 400)]
        max_iters: usize,
        /// Pin an entry: u,v,w=value. Repeatable.
        #[arg(long)]
        fix: Vec<String>,
    },
    /// Encodings of |T| <= s, >= s or = s.
    Cardinality {
        #[arg(long, value_enum)]
        kind: CardKind,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        n: usize,
        /// Also factor the polynomial in l = sum x_i.
        #[arg(long)]
        roots: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Orbit data of a graph, or the isomorphism classes on n vertices.
    Orbit {
        /// Graph JSON.
        #[arg(long, conflicts_with = "classes", required_unless_present = "classes")]
        graph: Option<String>,
        /// List the classes on this many vertices instead.
        #[arg(long)]
        classes: Option<usize>,
        /// Only classes with at most this many edges.
        #[arg(long, requires = "classes")]
        max_size: Option<usize>,
    },
    /// Evaluate the iso, sub or super encoding of S at T.
    IsoPde {
        #[arg(long, value_enum)]
        kind: GraphKind,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Include the polynomial itself.
        #[arg(long)]
        polynomial: bool,
    },
    /// Isomorphism certificate for (S, T).
    Certificate {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
    /// Size lower bounds and class counts.
    Bounds {
        #[arg(long)]
        n: usize,
        /// Build the constraint system for this kind (needs --s, --rho, --d).
        #[arg(long, value_enum, requires_all = ["s", "rho", "d"])]
        kind: Option<GraphKind>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Symbolic check of the orbital product identity.
    Prop3Verify {
        #[arg(long)]
        nvars: usize,
        /// Comma-separated variable indices of S.
        #[arg(long)]
        s: String,
    },
    /// Coset resolvent coefficients of a graph.
    ResolventCheck {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 2)]
        t_max: usize,
    },
    /// Exact determinant.
    Det {
        #[arg(long, value_enum, default_value = "grassmann")]
        method: DetMethodArg,
        /// Matrix JSON: rows of integers or "p/q" strings.
        #[arg(long)]
        matrix: String,
    },
    /// Exact permanent.
    Perm {
        #[arg(long)]
        matrix: String,
    },
    /// Spanning-tree indicator of a 0/1 adjacency matrix.
    Ftree {
        #[arg(long)]
        matrix: String,
    },
    /// Cycle-cover indicator of a 0/1 matrix.
    Fcycles {
        #[arg(long)]
        matrix: String,
    },
    /// GF(2) invertibility of the matrix with bit n*i+j = entry (i, j).
    Fdet2 {
        #[arg(long)]
        bits: u64,
        #[arg(long)]
        n: usize,
    },
    /// Zeros of (e^{2 pi i x} - 1) / (e^{2 pi i x / d} - 1).
    RootsTranscendental {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
    },
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only these criteria. Repeatable.
        #[arg(long)]
        criterion: Vec<u8>,
        /// Include wall-clock seconds (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PDEFORGE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("PDEFORGE_THREADS must be a positive integer, got {raw:?}")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

/// Writes one line to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}

fn print_error(e: &CliError) -> ExitCode {
    emit(&e.to_json().to_string());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            return print_error(&CliError::Input(first.to_string()));
        }
    };
    if let Err(e) = configure_threads() {
        return print_error(&e);
    }
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::default() };
    match commands::run(cli.command, strategy) {
        Ok(out) => {
            let text = if cli.compact {
                out.body.to_string()
            } else {
                serde_json::to_string_pretty(&out.body).expect("JSON values serialise")
            };
            emit(&text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => print_error(&e),
    }
}
