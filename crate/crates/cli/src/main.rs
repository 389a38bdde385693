use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod parse;

/// Exact computations with Mahler systems f(z) = A(z) f(z^q).
#[derive(Parser, Debug)]
#[command(name = "mahler", version, about, propagate_version = true)]
struct Cli {
    /// Print a single JSON document on stdout instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power-series solution modulo z^N.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 32)]
        order: usize,
    },
    /// Order to which user-supplied series satisfy the system.
    Verify {
        #[arg(long)]
        system: PathBuf,
        /// JSON file holding an array of series, each an array of rational strings.
        #[arg(long)]
        series: PathBuf,
    },
    /// Cocycle A_k(z), optionally evaluated at alpha.
    Cocycle {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Certificate that alpha is regular for every k.
    Regular {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Rank profile d(delta1, delta2) of the evaluation matrices.
    Dims {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        delta1: u32,
        /// Range such as 1..8 or a list such as 1,2,5.
        #[arg(long)]
        delta2: String,
        /// Also compare with the ranks at 2 * delta1.
        #[arg(long)]
        doubling: bool,
    },
    /// Stabilized kernel of one (delta1, delta2) box.
    Kernel {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        delta1: u32,
        #[arg(long)]
        delta2: u32,
        /// Shifts k for the shift check, e.g. 1,2.
        #[arg(long)]
        shift_k: Option<String>,
        /// Orbit indices l for the shift check, e.g. 5..8.
        #[arg(long, default_value = "5..8")]
        ells: String,
    },
    /// Polynomial linear relations among the solution series.
    Guess {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// Lift a linear value relation at alpha to a functional relation.
    Lift {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        /// Comma-separated rationals, e.g. 1,-1,1/2.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 1)]
        deg: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Largest coefficient degree tried when escalating.
        #[arg(long, default_value_t = 16)]
        max_deg: usize,
    },
    /// Kronecker power system of degree d.
    Kron {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Lift a homogeneous algebraic value relation at alpha.
    ///
    /// Polynomial grammar: rational numbers, variables X1..Xm, `*`, `/` by a
    /// number, `^` with a non-negative integer exponent, `+`, `-` and
    /// parentheses, e.g. "X1*X3 - X2*X3 + 1/2*X3^2". Every term must have the
    /// same total degree; for an inhomogeneous relation, add a unit coordinate
    /// to the system (block diagonal with a 1) and homogenize with it.
    KronLift {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        deg: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// Hilbert function of the solution family and transcendence degree.
    Hilbert {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
        /// Largest coefficient degree of the relations searched.
        #[arg(long, default_value_t = 3)]
        reldeg: usize,
        #[arg(long, default_value_t = 128)]
        order: usize,
        /// Transcendence degree for the bound report (default: the estimate).
        #[arg(long)]
        trdeg: Option<usize>,
    },
    /// Heights of the entries of A_k(alpha).
    Heights {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// Auxiliary function, held-out checks and decay table.
    Prove {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long)]
        delta1: u32,
        #[arg(long)]
        delta2: u32,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        /// Orbit indices used as exact constraints.
        #[arg(long, default_value = "2..6")]
        kset: String,
        /// Series order for partial sums and tail bounds.
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
}

fn configure(cli: &Cli) -> Result<(), String> {
    if let Ok(mb) = std::env::var("MAHLER_BUDGET_MB") {
        let mb: u64 = mb.trim().parse().map_err(|_| format!("MAHLER_BUDGET_MB must be a positive integer, got {mb:?}"))?;
        mahler_core::budget::set_bit_budget(mahler_core::budget::bits_for_megabytes(mb));
    }
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure(&cli) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match commands::run(&cli.command) {
        Ok(out) => {
            if cli.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable")));
            } else {
                emit(&out.text);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            let code = if e.is_negative_result() { 1 } else { 2 };
            if cli.json {
                let doc = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string(), "detail": format!("{e:?}") } });
                emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")));
            }
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::from(code)
        }
    }
}
