//! Command-line front end: build graphs, certify forcing numbers through
//! the rank pipeline, run the brute-force oracle, and execute the
//! verification suite.
//!
//! Exit codes: 0 success / EXACT, 2 parse error, 3 precondition failure,
//! 4 verification failure, 5 budget truncation, 6 internal inconsistency.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use forcing_core::fields::FieldSpec;
use forcing_core::forcing::Closure;
use forcing_core::graphs::{write_graph, FamilyExpr};
use forcing_core::pipeline::{
    run_certify, run_oracle, CertifyMode, CertifyRequest, PipelineError, StageLog,
};
use forcing_core::report::GraphDescriptor;
use forcing_core::suite::run_suite;

#[derive(Parser)]
#[command(
    name = "forcing",
    version,
    about = "Exact minimum forcing numbers of perfect matchings in bipartite graph products",
    long_about = "Certifies minimum forcing numbers by combining exact corank lower bounds \
                  (Gaussian elimination over Q, GF(p), or Q(sqrt(d))) with uniquely \
                  extendable matchings as upper bounds, cross-checked by a brute-force \
                  oracle at small sizes.\n\n\
                  Family expressions: K2, C:2k, P:n, Kmn:m,n, star:n, Q:d, FQ:d, \
                  blowup:n, bcp:n, s14, gprime, prod(G;H), bd(G), union(G1;G2;...)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a family expression and write its graph file.
    Build {
        /// Family expression, e.g. "prod(Kmn:2,2;C:6)".
        expr: String,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the certification pipeline for G x C_2k or G x K2.
    ///
    /// Default fields per family: Q for K_{n,n}, hypercubes/prism lifts and
    /// s14; GF(p) with the smallest valid p for Fourier pairs (K_{m,n},
    /// m < n) and stars; Q(sqrt(2)) for gprime and star unions; GF(101)
    /// for the random search behind FQ:d, blowup:n, bcp:n.
    Certify {
        /// Base family expression (the factor G, not the product).
        expr: Option<String>,
        /// Certify G x C_{2k} for this k (k >= 2).
        #[arg(long)]
        k: Option<usize>,
        /// Certify the prism G x K2.
        #[arg(long)]
        prism: bool,
        /// Field override: "Q", "GFp:7", or "Qsqrt:2".
        #[arg(long)]
        field: Option<String>,
        /// Trial budget for the random certificate search.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Seed for the random certificate search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Load the certificate from a file instead of constructing one.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Write the certificate that was used to this path.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        /// Write the report document to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force oracle: exact minimum forcing number by exhaustion.
    Oracle {
        /// Family expression for the graph itself (not a base factor).
        expr: String,
        /// Certified lower bound enabling early exit.
        #[arg(long)]
        known_lower: Option<usize>,
        /// Cap on enumerated perfect matchings; exceeding it truncates.
        #[arg(long)]
        cap: Option<usize>,
        /// Include the per-matching forcing table in the report.
        #[arg(long)]
        table: bool,
        /// Write the report document to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance grid and print one line per criterion.
    VerifySuite {
        /// Only run cells whose name contains this substring, e.g. "case4".
        #[arg(long)]
        grid: Option<String>,
        /// Worker threads (0 = one per logical CPU).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the JSON outcome to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), PipelineError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| PipelineError::Precondition(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Build { expr, out } => {
            let parsed =
                FamilyExpr::parse(&expr).map_err(|e| PipelineError::Parse(e.to_string()))?;
            let graph = parsed.build().map_err(PipelineError::from)?;
            write_out(&out, &write_graph(&graph))?;
            let d = GraphDescriptor::new(&expr, &graph);
            eprintln!(
                "{}: {} vertices, {} edges, |X| = {}, |Y| = {}",
                d.expr, d.vertices, d.edges, d.x_size, d.y_size
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            expr,
            k,
            prism,
            field,
            trials,
            seed,
            cert,
            emit_cert,
            out,
        } => {
            let mode = match (k, prism) {
                (Some(k), false) => {
                    if k < 2 {
                        return Err(PipelineError::Precondition(format!(
                            "circular certification needs k >= 2, got {k}"
                        )));
                    }
                    CertifyMode::Circular(k)
                }
                (None, true) => CertifyMode::Prism,
                _ => {
                    return Err(PipelineError::Parse(
                        "pass exactly one of --k <int> or --prism".into(),
                    ))
                }
            };
            let expr = expr
                .map(|e| FamilyExpr::parse(&e).map_err(|err| PipelineError::Parse(err.to_string())))
                .transpose()?;
            let field = field
                .map(|f| FieldSpec::parse(&f).map_err(PipelineError::from))
                .transpose()?;
            let cert_text = cert
                .map(|p| {
                    fs::read_to_string(&p).map_err(|e| {
                        PipelineError::Precondition(format!("cannot read {}: {e}", p.display()))
                    })
                })
                .transpose()?;
            let request = CertifyRequest {
                expr,
                mode,
                field,
                trials,
                seed,
                cert_text,
                command: command_line(),
            };
            let outcome = run_certify(&request);
            if let (Some(path), Some(text)) = (&emit_cert, &outcome.certificate_text) {
                fs::write(path, text).map_err(|e| {
                    PipelineError::Precondition(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            write_out(&out, &outcome.document.to_json())?;
            eprintln!("{}", outcome.document.verdict);
            outcome.result?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            expr,
            known_lower,
            cap,
            table,
            out,
        } => {
            let parsed =
                FamilyExpr::parse(&expr).map_err(|e| PipelineError::Parse(e.to_string()))?;
            let graph = parsed.build().map_err(PipelineError::from)?;
            let mut log = StageLog::new();
            let result = run_oracle(&mut log, &graph, known_lower, cap, table);
            let (verdict, code) = match &result {
                Ok(o) => match o.closure {
                    Closure::Truncated => (
                        format!("PARTIAL f <= {} (enumeration capped)", o.value),
                        ExitCode::from(5),
                    ),
                    Closure::MetKnownLower => (
                        format!("EXACT f = {} (met known lower bound)", o.value),
                        ExitCode::SUCCESS,
                    ),
                    Closure::Exhausted => (
                        format!("EXACT f = {} (exhausted)", o.value),
                        ExitCode::SUCCESS,
                    ),
                },
                Err(e) => (format!("FAILED: {e}"), ExitCode::from(e.exit_code() as u8)),
            };
            let doc = log.into_document(
                command_line(),
                Some(GraphDescriptor::new(&expr, &graph)),
                None,
                verdict.clone(),
            );
            write_out(&out, &doc.to_json())?;
            eprintln!("{verdict}");
            result?;
            Ok(code)
        }
        Command::VerifySuite { grid, jobs, out } => {
            let outcome = run_suite(grid.as_deref(), jobs);
            for line in outcome.summary_lines() {
                println!("{line}");
            }
            for failure in outcome.failures() {
                println!("  failed cell {}: {}", failure.name, failure.detail);
                println!(
                    "  reproduce with: forcing verify-suite --grid {}",
                    failure.name
                );
            }
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&outcome).expect("suite serializes");
                fs::write(&path, json).map_err(|e| {
                    PipelineError::Precondition(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            if outcome.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
    }
}
