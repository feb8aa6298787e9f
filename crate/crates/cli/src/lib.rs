//! Command-line front end. [`run`] takes the argument vector and two output
//! streams and returns the process exit status:
//!
//! * `0` success (for `verify-tables`: every record passed)
//! * `1` a record failed verification
//! * `2` usage, parse or argument error

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use num_traits::Signed;
use serde::Serialize;

use qlag::thomtables::{builtin_records, verify_record};
use qlag::wire::{
    texpansion_to_json, Coefficient, RecordJson, ReportJson, SchubertJson, SymPolyJson, TTermJson,
};
use qlag::{schur_q, LGRing, Partition, SchubertClass, StrictPartition};

#[derive(Debug, Parser)]
#[command(name = "qlag", version, about = "Q-tilde functions, LG(n) Schubert calculus and Thom polynomial tables")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print Q~_I as a polynomial in the Chern classes c1, c2, ...
    Qtilde {
        /// Partition such as "3,2,1"; "[]" is the empty partition.
        partition: Partition,
    },
    /// Print the Schur Q-function Q_I = Q~_I(E - E*).
    SchurQ { partition: Partition },
    /// Expand an expression in the Q~ basis, one t-power at a time.
    Expand {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Work in n variables: only Q~_I with parts at most N.
        #[arg(long = "max-part", value_name = "N")]
        max_part: Option<usize>,
    },
    /// Product of two Schubert classes in H*(LG(n)).
    Mul {
        i: StrictPartition,
        j: StrictPartition,
        #[arg(long = "n")]
        n: usize,
    },
    /// Duality pairing: the degree of Omega_I * Omega_J in LG(n).
    Pair {
        i: StrictPartition,
        j: StrictPartition,
        #[arg(long = "n")]
        n: usize,
    },
    /// Betti numbers of LG(n).
    Betti {
        #[arg(long = "n")]
        n: usize,
    },
    /// Check the built-in Thom polynomial tables.
    VerifyTables {
        /// Only records of this codimension.
        #[arg(long)]
        codim: Option<usize>,
    },
}

#[derive(Serialize)]
struct PolyOutput {
    partition: Vec<usize>,
    polynomial: SymPolyJson,
}

#[derive(Serialize)]
struct ExpandOutput {
    input: String,
    expansion: Vec<TTermJson>,
    text: String,
    nonnegative: bool,
    violators: Vec<TTermJson>,
}

#[derive(Serialize)]
struct PairOutput {
    n: usize,
    i: Vec<usize>,
    j: Vec<usize>,
    value: Coefficient,
}

#[derive(Serialize)]
struct BettiOutput {
    n: usize,
    betti: Vec<usize>,
}

#[derive(Serialize)]
struct VerifyOutput {
    total: usize,
    passed: usize,
    records: Vec<RecordJson>,
    reports: Vec<ReportJson>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<qlag::Error> for Failure {
    fn from(e: qlag::Error) -> Self {
        Failure {
            code: 2,
            message: format!("error: {e}"),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("error: {e}"),
        }
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: 2,
        message: format!("error: {e}"),
    })?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Qtilde { partition } | Command::SchurQ { partition } => {
            let poly = match cli.command {
                Command::Qtilde { .. } => qlag::qtilde(partition),
                _ => schur_q(partition),
            };
            if cli.json {
                emit_json(
                    out,
                    &PolyOutput {
                        partition: partition.parts().to_vec(),
                        polynomial: SymPolyJson::from(&poly),
                    },
                )?;
            } else {
                writeln!(out, "{poly}")?;
            }
        }
        Command::Expand { expr, max_part } => {
            let expansion = qlag::exprio::parse_tpoly(expr)?.to_texpansion(*max_part)?;
            let mut negative = qlag::TExpansion::new();
            for (i, j, c) in expansion.terms() {
                if c.is_negative() {
                    negative.add_term(i.clone(), j, c.clone());
                }
            }
            if cli.json {
                emit_json(
                    out,
                    &ExpandOutput {
                        input: expr.clone(),
                        expansion: texpansion_to_json(&expansion),
                        text: expansion.to_string(),
                        nonnegative: negative.is_empty(),
                        violators: texpansion_to_json(&negative),
                    },
                )?;
            } else {
                writeln!(out, "{expansion}")?;
                if negative.is_empty() {
                    writeln!(out, "positivity: nonnegative")?;
                } else {
                    writeln!(out, "positivity: negative terms {negative}")?;
                }
            }
        }
        Command::Mul { i, j, n } => {
            let ring = LGRing::new(*n)?;
            let a = SchubertClass::schubert(ring, i.clone())?;
            let b = SchubertClass::schubert(ring, j.clone())?;
            let product = a.multiply(&b)?;
            if cli.json {
                emit_json(out, &SchubertJson::from(&product))?;
            } else {
                writeln!(out, "{product}")?;
            }
        }
        Command::Pair { i, j, n } => {
            let value = qlag::pair(i, j, LGRing::new(*n)?)?;
            if cli.json {
                emit_json(
                    out,
                    &PairOutput {
                        n: *n,
                        i: i.parts().to_vec(),
                        j: j.parts().to_vec(),
                        value: Coefficient(value),
                    },
                )?;
            } else {
                writeln!(out, "{value}")?;
            }
        }
        Command::Betti { n } => {
            let betti = qlag::betti(LGRing::new(*n)?);
            if cli.json {
                emit_json(out, &BettiOutput { n: *n, betti })?;
            } else {
                let line = betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
                writeln!(out, "{line}")?;
            }
        }
        Command::VerifyTables { codim } => {
            let records: Vec<_> = builtin_records()
                .into_iter()
                .filter(|r| codim.is_none_or(|k| r.codim == k))
                .collect();
            let reports: Vec<_> = records.iter().map(verify_record).collect();
            let passed = reports.iter().filter(|r| r.passed()).count();
            if cli.json {
                emit_json(
                    out,
                    &VerifyOutput {
                        total: reports.len(),
                        passed,
                        records: records.iter().map(RecordJson::from).collect(),
                        reports: reports.iter().map(ReportJson::from).collect(),
                    },
                )?;
            } else {
                for (record, report) in records.iter().zip(&reports) {
                    write!(out, "{report}")?;
                    writeln!(out, "  legendre: {}", record.legendre)?;
                }
                writeln!(out, "{passed}/{} records pass", reports.len())?;
            }
            if passed != reports.len() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}
