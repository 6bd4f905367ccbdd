//! `bgsplit`: splitting types of `T_X|_C` and `N_{C/X}` from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 user or precondition error,
//! 3 internal certification failure.

mod compute;
mod error;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bgsplit::{expected_max, predicted_splitting, FieldSpec, SplittingType};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use compute::{compute_text, extend_text, Compute, Extend, Source};
use error::{CliError, CliResult};
use verify::{verify, Theorem, VerifyConfig};

#[derive(Parser)]
#[command(name = "bgsplit", version, about = "Exact splitting types of restricted tangent and normal bundles of rational normal curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct HypersurfaceArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Hypersurface file (`d = ..`, `e = ..`, `n = ..`, then `Q i j : poly` / `X k : poly` lines).
    #[arg(long, value_name = "FILE")]
    poly: Option<PathBuf>,
    /// `rational` or `prime:<p>`; defaults to the file's `field` header, else rational.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Splittings of T_X|_C and N_{C/X} for a given or generated hypersurface.
    Compute(HypersurfaceArgs),
    /// Regenerate a theorem's table and compare it with the catalog.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Degree, required for `general`.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        min_n: Option<u32>,
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value = "prime:32003")]
        field: String,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// One dimension-extension step from P^n to P^(n+1).
    Extend {
        #[command(flatten)]
        input: HypersurfaceArgs,
        /// Target splitting at n+1; defaults to the catalog's prediction.
        #[arg(long)]
        target: Option<String>,
        /// Where to write the extended hypersurface file.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Index-wise gluing bound of two splitting types.
    Glue { a: String, b: String },
    /// Whether the first type specializes to the second.
    Dominates { general: String, special: String },
    /// Interpolation count a_1 + 1, with the balanced maximum when d, e, n are given.
    Interp {
        splitting: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Catalog prediction for a general hypersurface.
    Predict {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        n: u32,
    },
}

fn parse_splitting(s: &str) -> CliResult<SplittingType> {
    s.parse()
        .map_err(|e| CliError::User(format!("malformed splitting type `{s}`: {e}")))
}

fn parse_field(s: &str) -> CliResult<FieldSpec> {
    s.parse().map_err(CliError::from)
}

fn source(args: &HypersurfaceArgs) -> CliResult<(Source, FieldSpec)> {
    let hsf = match &args.poly {
        Some(path) => Some(
            fs::read_to_string(path)
                .map_err(|e| CliError::User(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let src = Source {
        hsf,
        d: args.d,
        e: args.e,
        n: args.n,
    };
    let field = match &args.field {
        Some(f) => parse_field(f)?,
        None => src.declared_field()?.unwrap_or(FieldSpec::Rational),
    };
    Ok((src, field))
}

/// A report in both renderings.
struct Report {
    json: Value,
    text: String,
}

impl Report {
    fn plain(json: Value, text: impl Into<String>) -> Self {
        Report { json, text: text.into() }
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Compute(args) => {
            let (src, field) = source(args)?;
            let json = field.dispatch(Compute(&src))??;
            let text = compute_text(&json);
            Ok(Report { json, text })
        }
        Command::Verify {
            theorem,
            d,
            min_n,
            max_n,
            field,
            jobs,
        } => {
            let cfg = VerifyConfig {
                theorem: *theorem,
                d: *d,
                min_n: *min_n,
                max_n: *max_n,
                field: parse_field(field)?,
                jobs: *jobs,
            };
            let r = verify(&cfg)?;
            if r.mismatches > 0 {
                emit(cli.format, &Report { json: r.json, text: r.text });
                return Err(CliError::Mismatch(format!("{} mismatching cases", r.mismatches)));
            }
            Ok(Report { json: r.json, text: r.text })
        }
        Command::Extend { input, target, output } => {
            let (src, field) = source(input)?;
            let target = target.as_deref().map(parse_splitting).transpose()?;
            let (json, hsf) = field.dispatch(Extend { source: &src, target })??;
            if let Some(path) = output {
                fs::write(path, &hsf)
                    .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?;
            }
            let text = extend_text(&json);
            Ok(Report { json, text })
        }
        Command::Glue { a, b } => {
            let (a, b) = (parse_splitting(a)?, parse_splitting(b)?);
            let g = a.glue_bound(&b)?;
            Ok(Report::plain(
                json!({ "op": "glue", "inputs": [a, b], "result": g, "balanced": g.is_balanced(), "provenance": "lemma:gluing" }),
                format!("{}\n{g}\nprovenance: lemma:gluing\n", g.to_json()),
            ))
        }
        Command::Dominates { general, special } => {
            let (a, b) = (parse_splitting(general)?, parse_splitting(special)?);
            let (result, reason) = match a.check_specialization(&b) {
                Ok(r) => (r, None),
                Err(why) => (false, Some(why.to_string())),
            };
            let mut text = format!("{result}\n");
            if let Some(why) = &reason {
                text.push_str(&format!("incomparable: {why}\n"));
            }
            text.push_str("provenance: lemma:specialization\n");
            Ok(Report::plain(
                json!({ "op": "dominates", "inputs": [a, b], "result": result, "incomparable": reason, "provenance": "lemma:specialization" }),
                text,
            ))
        }
        Command::Interp { splitting, d, e, n } => {
            let s = parse_splitting(splitting)?;
            let count = s.interpolation_count()?;
            let mut text = format!("interpolation: {count}\n");
            let mut json = json!({ "op": "interp", "input": s, "interpolation": count, "provenance": "interpolation:a1+1" });
            match (d, e, n) {
                (Some(d), Some(e), Some(n)) => {
                    let max = expected_max(*d, *e, *n)?;
                    let rank_ok = s.rank() + 1 == *n as usize;
                    let degree_ok = s.degree() == *e as i64 * (*n as i64 + 1 - *d as i64);
                    if !(rank_ok && degree_ok) {
                        return Err(CliError::User(format!(
                            "{s} is not a possible T_X|_C at (d,e,n) = ({d},{e},{n}): needs rank {} and degree {}",
                            n - 1,
                            *e as i64 * (*n as i64 + 1 - *d as i64)
                        )));
                    }
                    text.push_str(&format!("expected: {max}\n"));
                    json["expected"] = json!(max);
                }
                (None, None, None) => {}
                _ => return Err(CliError::User("give all of --d, --e, --n or none".into())),
            }
            text.push_str("provenance: interpolation:a1+1\n");
            Ok(Report::plain(json, text))
        }
        Command::Predict { d, e, n } => {
            let p = predicted_splitting(*d, *e, *n)?;
            let text = format!("{p}\n");
            Ok(Report::plain(
                json!({ "op": "predict", "params": { "d": d, "e": e, "n": n }, "prediction": p }),
                text,
            ))
        }
    }
}

fn emit(format: Format, report: &Report) {
    match format {
        Format::Text => print!("{}", report.text),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("reports serialize")
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            emit(cli.format, &report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
