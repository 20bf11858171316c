//! Command-line driver.
//!
//! Subcommands:
//!
//! * `certify --n A..B` — certificates that `E_st(M_2n)` is not a
//!   polynomial for each `n` in the (inclusive) range;
//! * `table1 --max-n N` — the table of low Hilbert-scheme coefficients
//!   `c_1..c_4`, including the stabilized `n >= N` column;
//! * `series --n N --order K` — the singular series through `z^(2K)`;
//! * `hilbert --n N` — the Poincare polynomial `p(X^[n]; t)`;
//! * `eval-spec PATH` — stringy E-function of a user-supplied JSON
//!   stratification.
//!
//! Exit codes: 0 success (and, for `certify`, every `n` certified
//! non-polynomial); 2 usage or input-schema errors; 3 domain errors
//! (e.g. a non-log-terminal discrepancy); 4 internal invariant violations.
//! JSON output is deterministic: equal inputs give byte-identical reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{certify_range, CaseTag, Certificate, Verdict};
use crate::k3::hilb_poincare;
use crate::poly::Poly;
use crate::stringy::{stringy_e, s_series, StratificationSpec};
use crate::Error;

/// An inclusive range of moduli parameters, parsed from `"A..B"` or a
/// single `"N"`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<NRange, String> {
        let parse_bound = |b: &str| -> Result<u64, String> {
            b.trim().parse::<u64>().map_err(|_| format!("invalid bound {b:?} in range {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            None => {
                let n = parse_bound(s)?;
                (n, n)
            }
            Some((a, b)) => (parse_bound(a)?, parse_bound(b)?),
        };
        if lo > hi {
            return Err(format!("empty range {s:?}: lower bound exceeds upper bound"));
        }
        if lo < 3 {
            return Err(format!(
                "the moduli spaces M_2n are defined for n >= 3; range {s:?} starts at {lo}"
            ));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "stringy-k3",
    version,
    about = "Stringy E-functions of moduli of sheaves on a K3 surface, with non-polynomiality certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify that E_st(M_2n) is not a polynomial for each n in a range.
    Certify {
        /// Inclusive range "A..B" (or a single "N"), with A >= 3.
        #[arg(long, default_value = "3..20")]
        n: NRange,
    },
    /// Low coefficients c_1..c_4 of p(X^[n]; t), with the stabilized column.
    Table1 {
        /// Columns run n = 3 .. N-1 plus the stabilized "n >= N" column.
        #[arg(long = "max-n", default_value_t = 8, value_parser = clap::value_parser!(u64).range(3..))]
        max_n: u64,
    },
    /// Expand the singular series S(z) of M_2n through z^(2K).
    Series {
        #[arg(long)]
        n: u64,
        /// Highest retained power of t = z^2.
        #[arg(long)]
        order: u64,
    },
    /// Print the Hilbert-scheme Poincare polynomial p(X^[n]; t).
    Hilbert {
        #[arg(long)]
        n: u64,
    },
    /// Evaluate the stringy E-function of a JSON stratification spec.
    EvalSpec {
        /// Path to the spec file; see the README for the schema.
        path: PathBuf,
        /// Also expand the result as a power series through t^K.
        #[arg(long)]
        order: Option<u64>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvariantViolation(_) => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Execute a parsed invocation; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Certify { n } => run_certify(*n, cli.emit),
        Command::Table1 { max_n } => run_table(*max_n, cli.emit),
        Command::Series { n, order } => run_series(*n, *order, cli.emit),
        Command::Hilbert { n } => run_hilbert(*n, cli.emit),
        Command::EvalSpec { path, order } => run_eval_spec(path, *order, cli.emit),
    };
    match result {
        Ok((report, code)) => match &cli.out {
            None => {
                print!("{report}");
                code
            }
            Some(path) => match std::fs::write(path, &report) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    1
                }
            },
        },
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn render_certificate_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let case_label = match cert.case {
        CaseTag::SeriesDegreeArgument => "series degree argument",
        CaseTag::NNotDivisibleBy3 => "3 does not divide n",
        CaseTag::NDivisibleBy3 => "3 divides n",
    };
    let verdict_label = match cert.verdict {
        Verdict::NotPolynomial => "NOT POLYNOMIAL",
        Verdict::Polynomial => "POLYNOMIAL",
    };
    let _ = writeln!(out, "n = {}: {verdict_label} ({case_label})", cert.n);
    let row = &cert.table_row;
    let _ = writeln!(out, "  c_1..c_4: {}, {}, {}, {}", row.c1, row.c2, row.c3, row.c4);
    match cert.direct_remainder.degree() {
        None => {
            let _ = writeln!(out, "  direct division: remainder 0 (exact)");
        }
        Some(d) => {
            let _ = writeln!(out, "  direct division: nonzero remainder of degree {d}");
        }
    }
    if let Some(head) = &cert.series_head {
        let bound_z = 2 * (head.0.len() - 2);
        let witness_exp = 2 * (head.0.len() - 1);
        let witness = head.0.last().expect("series head is nonempty");
        let _ = writeln!(out, "  degree bound for a polynomial outcome: {bound_z} in z");
        let _ = writeln!(out, "  coefficient of z^{witness_exp} = {witness} (nonzero, beyond the bound)");
    }
    if let Some(modular) = &cert.modular {
        let gcd = cert.gcd.as_ref().expect("modular certificates carry a gcd");
        let _ = writeln!(out, "  gcd(1 - t^(2n-3), sbar) = {gcd}");
        let div = &modular.divisibility;
        match &div.violated {
            Some(eq) if eq.rhs == "0" => {
                let _ = writeln!(out, "  cofactor does not divide p(X^[n]; t): {} = {}, expected 0", eq.lhs, eq.lhs_value);
            }
            Some(eq) => {
                let _ = writeln!(
                    out,
                    "  cofactor does not divide p(X^[n]; t): {} = {} differs from {} = {}",
                    eq.lhs, eq.lhs_value, eq.rhs, eq.rhs_value
                );
            }
            None => {
                let _ = writeln!(out, "  cofactor divides p(X^[n]; t)");
            }
        }
    }
    out
}

fn run_certify(range: NRange, emit: Emit) -> Result<(String, i32), Failure> {
    let certs = certify_range(range.lo as usize, range.hi as usize)?;
    let all_negative = certs.iter().all(|c| c.verdict == Verdict::NotPolynomial);
    let code = if all_negative { 0 } else { 1 };
    let report = match emit {
        Emit::Json => {
            let mut text = serde_json::to_string_pretty(&certs).expect("certificates serialize");
            text.push('\n');
            text
        }
        Emit::Text => {
            let mut out = String::new();
            for cert in &certs {
                out.push_str(&render_certificate_text(cert));
            }
            if all_negative {
                let _ = writeln!(
                    out,
                    "all n in {}..{} certified: E_st(M_2n) is not a polynomial, so M_2n admits no crepant resolution",
                    range.lo, range.hi
                );
            } else {
                let _ = writeln!(out, "some n in {}..{} came out polynomial; see above", range.lo, range.hi);
            }
            out
        }
    };
    Ok((report, code))
}

#[derive(Serialize)]
struct TableReport {
    columns: Vec<String>,
    c1: Vec<u64>,
    c2: Vec<u64>,
    c3: Vec<u64>,
    c4: Vec<u64>,
}

fn run_table(max_n: u64, emit: Emit) -> Result<(String, i32), Failure> {
    use crate::certify::TableRow;
    let max_n = max_n as usize;
    hilb_poincare(max_n)?;
    let mut columns: Vec<String> = (3..max_n).map(|n| format!("n={n}")).collect();
    columns.push(format!("n>={max_n}"));
    let rows: Vec<TableRow> = (3..=max_n)
        .map(|n| TableRow::from_poincare(&hilb_poincare(n)?))
        .collect::<Result<_, Error>>()?;
    let report = TableReport {
        columns,
        c1: rows.iter().map(|r| r.c1).collect(),
        c2: rows.iter().map(|r| r.c2).collect(),
        c3: rows.iter().map(|r| r.c3).collect(),
        c4: rows.iter().map(|r| r.c4).collect(),
    };
    let text = match emit {
        Emit::Json => {
            let mut text = serde_json::to_string_pretty(&report).expect("table serializes");
            text.push('\n');
            text
        }
        Emit::Text => {
            let mut out = String::new();
            let _ = write!(out, "{:<6}", "");
            for c in &report.columns {
                let _ = write!(out, "{c:<8}");
            }
            out.push('\n');
            for (label, values) in
                [("c_1", &report.c1), ("c_2", &report.c2), ("c_3", &report.c3), ("c_4", &report.c4)]
            {
                let _ = write!(out, "{label:<6}");
                for v in values {
                    let _ = write!(out, "{v:<8}");
                }
                out.push('\n');
            }
            out
        }
    };
    Ok((text, 0))
}

#[derive(Serialize)]
struct SeriesReport {
    n: u64,
    order: usize,
    coeffs: Vec<String>,
}

fn run_series(n: u64, order: u64, emit: Emit) -> Result<(String, i32), Failure> {
    if n < 3 {
        return Err(Failure::usage(format!("series requires n >= 3 (M_2n is defined for n >= 3), got {n}")));
    }
    let window = s_series(n as usize, order as usize)?;
    let text = match emit {
        Emit::Json => {
            let report = SeriesReport {
                n,
                order: window.order,
                coeffs: window.coeffs.iter().map(|c| c.to_string()).collect(),
            };
            let mut text = serde_json::to_string_pretty(&report).expect("series serializes");
            text.push('\n');
            text
        }
        Emit::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "S(z) for M_{}, coefficients of z^0 .. z^{}:", 2 * n, 2 * window.order);
            for (m, c) in window.coeffs.iter().enumerate() {
                let _ = writeln!(out, "z^{}: {c}", 2 * m);
            }
            out
        }
    };
    Ok((text, 0))
}

#[derive(Serialize)]
struct HilbertReport {
    n: u64,
    poly: Poly,
}

fn run_hilbert(n: u64, emit: Emit) -> Result<(String, i32), Failure> {
    let poly = hilb_poincare(n as usize)?;
    let text = match emit {
        Emit::Json => {
            let report = HilbertReport { n, poly };
            let mut text = serde_json::to_string_pretty(&report).expect("polynomial serializes");
            text.push('\n');
            text
        }
        Emit::Text => {
            let coeffs: Vec<String> = poly.coeffs().iter().map(crate::poly::rat_to_string).collect();
            format!("p(X^[{n}]; t) = {poly}\ncoefficients: {}\n", coeffs.join(", "))
        }
    };
    Ok((text, 0))
}

#[derive(Serialize)]
struct EvalReport {
    numerator: Poly,
    denominator: Poly,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Vec<String>>,
}

fn run_eval_spec(path: &PathBuf, order: Option<u64>, emit: Emit) -> Result<(String, i32), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let spec = StratificationSpec::from_json_str(&text)
        .map_err(|e| Failure::usage(format!("invalid stratification spec: {e}")))?;
    let result = stringy_e(&spec)?;
    let verdict = if result.den() == &Poly::one() { "polynomial" } else { "not_polynomial" };
    let series = match order {
        None => None,
        Some(k) => {
            let coeffs = result.power_series_coeffs(k as usize)?;
            Some(coeffs.iter().map(crate::poly::rat_to_string).collect::<Vec<String>>())
        }
    };
    let report = EvalReport {
        numerator: result.num().clone(),
        denominator: result.den().clone(),
        verdict,
        series,
    };
    let out = match emit {
        Emit::Json => {
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            text
        }
        Emit::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "stringy E-function (normalized):");
            let _ = writeln!(out, "  numerator:   {}", report.numerator);
            let _ = writeln!(out, "  denominator: {}", report.denominator);
            let _ = writeln!(out, "verdict: {}", report.verdict);
            if let Some(series) = &report.series {
                let _ = writeln!(out, "series through t^{}: {}", order.expect("series implies order"), series.join(", "));
            }
            out
        }
    };
    Ok((out, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!("3..20".parse::<NRange>().unwrap(), NRange { lo: 3, hi: 20 });
        assert_eq!("7".parse::<NRange>().unwrap(), NRange { lo: 7, hi: 7 });
        assert!("5..4".parse::<NRange>().is_err());
        assert!("2..6".parse::<NRange>().unwrap_err().contains("n >= 3"));
        assert!("x..4".parse::<NRange>().is_err());
    }

    #[test]
    fn certify_text_mentions_the_degree_witness() {
        let (report, code) = run_certify(NRange { lo: 3, hi: 3 }, Emit::Text).unwrap();
        assert_eq!(code, 0);
        assert!(report.contains("coefficient of z^32 = 299"), "report was:\n{report}");
        assert!(report.contains("NOT POLYNOMIAL"));
    }

    #[test]
    fn table_text_matches_the_published_low_coefficients() {
        let (report, _) = run_table(8, Emit::Text).unwrap();
        let mut lines = report.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split_whitespace().collect::<Vec<_>>(), vec!["n=3", "n=4", "n=5", "n=6", "n=7", "n>=8"]);
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
        assert_eq!(rows[0], vec!["c_1", "23", "23", "23", "23", "23", "23"]);
        assert_eq!(rows[1], vec!["c_2", "299", "300", "300", "300", "300", "300"]);
        assert_eq!(rows[2], vec!["c_3", "2554", "2852", "2875", "2876", "2876", "2876"]);
        assert_eq!(rows[3], vec!["c_4", "299", "19298", "22127", "22426", "22449", "22450"]);
    }
}
