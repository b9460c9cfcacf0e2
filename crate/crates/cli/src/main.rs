use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use logpart::difference::{self, empirical_sign_threshold_logp, threshold_constants, Family};
use logpart::partition::empirical_sign_threshold_p;
use logpart::report::VerificationReport;
use logpart::special::solve_g_roots;
use logpart::sweep::{self, Statement};
use logpart::{p_exact, Error, PrecisionLadder};

/// First rung of the precision ladder for command-line runs.
const CLI_START_BITS: u32 = 128;

#[derive(Parser)]
#[command(
    name = "logpart",
    version,
    about = "Certified checks of inequalities for the partition function p(n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print p(n) exactly.
    Partition { n: u64 },
    /// Check a statement for every n in [from, to].
    Verify {
        /// Statement id, e.g. thm1.1, conj1.3, thm3.1, bo, lemma:L4, roots:g.
        statement: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Difference order for thm3.1, thm3.2 and thm4.1.
        #[arg(long)]
        r: Option<u32>,
        /// First rung of the precision ladder, in bits.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the constants behind the explicit threshold n(r) as JSON.
    Thresholds {
        #[arg(long)]
        r: u32,
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        precision: Option<u32>,
        /// Terms kept from the a_2 / a_3 series before the tail bound.
        #[arg(long, default_value_t = difference::DEFAULT_SERIES_TERMS)]
        terms: u32,
    },
    /// Print both positive roots of g with certified brackets.
    RootsG {
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Empirical sign-stabilization threshold of Δ^r p(n) or Δ^r log p(n).
    Scan {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n_max: u64,
        /// Scan (-1)^(r-1) Δ^r log p(n) instead of Δ^r p(n).
        #[arg(long)]
        log: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit 2 for bad input, 1 for everything else that went wrong.
fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        Error::Precondition(_)
        | Error::Hypothesis { .. }
        | Error::Domain(_)
        | Error::Budget { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn ladder(precision: Option<u32>) -> Result<PrecisionLadder, Error> {
    PrecisionLadder::from_env(precision.unwrap_or(CLI_START_BITS))
}

fn write_report(
    report: &VerificationReport,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<(), Error> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match format {
        Format::Csv => report.write_csv(&mut sink)?,
        Format::Json => {
            let text = serde_json::to_string_pretty(&report.to_json())
                .map_err(|e| Error::Format(e.to_string()))?;
            writeln!(sink, "{text}").map_err(|e| Error::Format(e.to_string()))?;
        }
    }
    sink.flush().map_err(|e| Error::Format(e.to_string()))
}

fn verify(
    statement: &str,
    from: u64,
    to: u64,
    r: Option<u32>,
    precision: Option<u32>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let statement: Statement = statement.parse().map_err(|_| {
        Error::Precondition(format!(
            "unknown statement id {statement:?}; expected one of {}",
            Statement::all_ids().join(", ")
        ))
    })?;
    let report = sweep::run(statement, from, to, r, &ladder(precision)?)?;
    write_report(&report, format, out.as_ref())?;
    let s = report.summary();
    eprintln!(
        "{}: total={} holds={} fails={} undecided={} boundary={}",
        report.statement, s.total, s.holds, s.fails, s.undecided, s.boundary
    );
    Ok(if s.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn thresholds(
    r: u32,
    family: Family,
    precision: Option<u32>,
    terms: u32,
) -> Result<ExitCode, Error> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let value = if family == Family::Positivity && r <= 2 {
        let reason = if r == 1 {
            "Δ log p(n) > 0 for n >= 1 since p(n+1) > p(n)"
        } else {
            "-Δ^2 log p(n) = p_2(n+1) > 0 for n >= 25, by log-concavity of p(n) for n > 25"
        };
        json!({ "r": r, "family": family, "direct": reason })
    } else {
        let prec = ladder(precision)?.first();
        let constants = threshold_constants(r, family, terms, prec)?;
        serde_json::to_value(&constants).map_err(|e| Error::Format(e.to_string()))?
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&value).map_err(|e| Error::Format(e.to_string()))?
    );
    Ok(ExitCode::SUCCESS)
}

fn roots_g(precision: Option<u32>) -> Result<ExitCode, Error> {
    let prec = ladder(precision)?.first();
    let (x1, x2) = solve_g_roots(prec)?;
    println!("x1 = {x1}");
    println!("x2 = {x2}");
    let rows = sweep::g_root_rows(&ladder(precision)?)?;
    for row in &rows {
        let what = match row.n {
            1 => "sign change of g across x1",
            2 => "sign change of g across x2",
            _ => "g(5000) < 0",
        };
        println!("{what}: {}", row.verdict);
    }
    let clean = rows
        .iter()
        .all(|row| row.verdict == logpart::Verdict::Holds);
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn scan(r: u32, n_max: u64, log: bool) -> Result<ExitCode, Error> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let found = if log {
        empirical_sign_threshold_logp(r, n_max, &ladder(None)?)?
    } else {
        empirical_sign_threshold_p(r, n_max)
    };
    println!("{found}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Partition { n } => {
            println!("{}", p_exact(n));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            statement,
            from,
            to,
            r,
            precision,
            format,
            out,
        } => verify(&statement, from, to, r, precision, format, out),
        Command::Thresholds {
            r,
            family,
            precision,
            terms,
        } => thresholds(r, family, precision, terms),
        Command::RootsG { precision } => roots_g(precision),
        Command::Scan { r, n_max, log } => scan(r, n_max, log),
    };
    outcome.unwrap_or_else(fail)
}
