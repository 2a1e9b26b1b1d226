//! Command-line front end: parses curve or parametrization inputs, runs
//! the analysis pipeline, and prints deterministic text or JSON reports.

use clap::{Parser, ValueEnum};
use singcurve_cli::pipeline::{run_batch, run_command, Options, RunError};
use singcurve_cli::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "singcurve",
    about = "Exact analysis of plane curve germs: branches, Puiseux characteristics, \
             semigroups, intersection numbers, contact, equisingularity, and the knot \
             invariants of the branches (cabling, Alexander polynomials).",
    after_help = "Commands: expand, branches, char, semigroup, implicitize, intersect, \
                  contact, equisingular, cabling, alexander, recover.\n\
                  Inputs are implicit polynomials like \"x^2 - y^3\" or parametrizations \
                  like \"param: t^4, t^6 + t^7\"; 'recover' takes a symbol \
                  \"S(6)+S(1)-S(2)-S(3)\" or an integer polynomial in t."
)]
struct Cli {
    /// Command to run
    command: String,
    /// Inputs (one for most commands, two for intersect/contact/equisingular);
    /// escape inputs starting with '-' as `-- "-4*x^4 + ..."`
    inputs: Vec<String>,
    /// Expansion depth bound in x-degree (default: automatic deepening)
    #[arg(long)]
    order: Option<u32>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Evaluate inputs from a file, one per line (';' separates the two
    /// inputs of two-input commands); results are reported per line
    #[arg(long)]
    batch: Option<std::path::PathBuf>,
    /// Include derivations: intersection routes, contact multisets, the
    /// minimum contact reading, intersection matrices
    #[arg(long)]
    verbose: bool,
    /// Strip repeated factors from implicit inputs instead of rejecting
    /// non-reduced curves
    #[arg(long)]
    reduce: bool,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let opts = Options { order: cli.order, verbose: cli.verbose, reduce: cli.reduce };
    let (body, code) = match &cli.batch {
        Some(path) => {
            let contents = match std::fs::read_to_string(path) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: cannot read batch file {}: {e}", path.display());
                    std::process::exit(2);
                }
            };
            let lines: Vec<String> = contents.lines().map(|l| l.to_string()).collect();
            let results = run_batch(&cli.command, &lines, &opts);
            render_batch(results, cli.format)
        }
        None => {
            if cli.inputs.is_empty() {
                eprintln!("error: no input given (or use --batch FILE)");
                std::process::exit(2);
            }
            match run_command(&cli.command, &cli.inputs, &opts) {
                Ok(report) => {
                    let body = match cli.format {
                        Format::Text => report.to_text(),
                        Format::Json => format!("{:#}\n", report.to_json()),
                    };
                    (body, 0)
                }
                Err(e) => {
                    eprintln!("error: {}", e.message());
                    std::process::exit(e.exit_code());
                }
            }
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{body}"),
    }
    std::process::exit(code);
}

fn render_batch(results: Vec<Result<report::Report, RunError>>, format: Format) -> (String, i32) {
    let mut code = 0;
    let body = match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = results
                .into_iter()
                .map(|r| match r {
                    Ok(rep) => rep.to_json(),
                    Err(e) => {
                        code = code.max(e.exit_code());
                        serde_json::json!({ "error": e.message(), "exit_code": e.exit_code() })
                    }
                })
                .collect();
            format!("{:#}\n", serde_json::Value::Array(items))
        }
        Format::Text => {
            let mut out = String::new();
            for (i, r) in results.into_iter().enumerate() {
                out.push_str(&format!("--- batch item {} ---\n", i + 1));
                match r {
                    Ok(rep) => out.push_str(&rep.to_text()),
                    Err(e) => {
                        code = code.max(e.exit_code());
                        out.push_str(&format!("error: {}\n", e.message()));
                    }
                }
            }
            out
        }
    };
    (body, code)
}
