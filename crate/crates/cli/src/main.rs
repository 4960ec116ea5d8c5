use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frobenius::commands::{self, Output, Protocol};
use frobenius::InputError;
use frobenius_core::classical::ClassicalStructure;

/// Checks equations in dagger-compact categories with classical objects,
/// symbolically and in finite-dimensional Hilbert spaces.
#[derive(Parser)]
#[command(name = "frobenius", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every `assert` in a source file.
    Check {
        file: PathBuf,
        /// Decide `Unknown` verdicts in this interpretation instead of random ones.
        #[arg(long)]
        interp: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the normal form of an expression.
    Normalize {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Source file supplying declarations and definitions.
        #[arg(long)]
        decls: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate an expression to a matrix.
    Eval {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long)]
        interp: PathBuf,
        #[arg(long)]
        decls: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide equality: symbolic first, numeric when the verdict is Unknown.
    Eq {
        lhs: String,
        rhs: String,
        /// Number of random interpretations for the numeric check.
        #[arg(long = "numeric", default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        decls: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classical-object checks.
    Classical {
        #[command(subcommand)]
        cmd: ClassicalCmd,
    },
    /// Spectrum checks.
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
    /// Protocol suites.
    Protocol {
        #[command(subcommand)]
        cmd: ProtocolCmd,
    },
    /// Write an expression's diagram as Graphviz DOT.
    ExportDot {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        #[arg(long)]
        decls: Option<PathBuf>,
        /// Export the normal form rather than the raw diagram.
        #[arg(long)]
        normalize: bool,
    },
    /// The full axiom battery.
    Axioms {
        #[arg(long, default_value_t = 4)]
        dim_max: usize,
        #[arg(long, default_value_t = 100)]
        generators: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ClassicalCmd {
    /// Verify a candidate `{"delta": ..., "eps": ...}` file, or a standard structure.
    Verify {
        #[arg(required_unless_present = "standard")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        standard: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Verify `{"projectors": [...]}` or `{"m": ..., "classical_dim": k}`.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ProtocolCmd {
    Teleport {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Densecode {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

fn run(cmd: Cmd) -> Result<Output, InputError> {
    match cmd {
        Cmd::Check {
            file,
            interp,
            trials,
            seed,
        } => commands::check(&file, interp.as_deref(), trials, seed),
        Cmd::Normalize { expr, decls, trace } => commands::normalize_expr(&expr, decls.as_deref(), trace),
        Cmd::Eval {
            expr,
            interp,
            decls,
            json,
        } => commands::eval_expr(&expr, &interp, decls.as_deref(), json),
        Cmd::Eq {
            lhs,
            rhs,
            trials,
            decls,
            seed,
        } => commands::eq_exprs(&lhs, &rhs, decls.as_deref(), trials, seed),
        Cmd::Classical {
            cmd: ClassicalCmd::Verify { file, standard },
        } => match (file, standard) {
            (Some(f), _) => commands::classical_verify_file(&f),
            (None, Some(n)) => commands::classical_verify(&ClassicalStructure::standard(n)),
            (None, None) => unreachable!("clap requires one of them"),
        },
        Cmd::Spectrum {
            cmd: SpectrumCmd::Verify { file, seed },
        } => commands::spectrum_verify(&file, seed),
        Cmd::Protocol { cmd } => match cmd {
            ProtocolCmd::Teleport { dim, seed } => commands::protocol(Protocol::Teleport, dim, seed),
            ProtocolCmd::Densecode { dim } => commands::protocol(Protocol::DenseCoding, dim, 0),
        },
        Cmd::ExportDot {
            expr,
            out,
            decls,
            normalize,
        } => commands::export_dot_file(&expr, &out, decls.as_deref(), normalize),
        Cmd::Axioms {
            dim_max,
            generators,
            seed,
        } => commands::axioms(dim_max, generators, seed),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, matching input errors below.
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
