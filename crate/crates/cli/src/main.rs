mod args;
mod output;
mod routes;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use knodel_core::asympt::asymptotic_estimates;
use knodel_core::series::{to_f64, PowerSeries};
use knodel_core::verify::{verify, VerifyOptions};
use knodel_core::walk::expected_end_series;
use serde_json::json;

use args::{Cli, Command, ExpectedEndArgs, Method, ProbArgs, VerifyArgs};
use output::{float_cell, Cell, Table};

/// Largest double-step count for which `expected-end` computes exact rationals.
const EXACT_LIMIT: usize = 256;

/// Exit status for a failed cross-check.
const CHECK_FAILED: u8 = 3;
/// Exit status for invalid flags, matching clap's own usage errors.
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Prob(a) => prob(&a),
        Command::ExpectedEnd(a) => expected_end(&a),
        Command::Verify(a) => run_verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("cross-check failed: {msg}");
            ExitCode::from(CHECK_FAILED)
        }
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<knodel_core::Error> for Failure {
    fn from(e: knodel_core::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Check(format!("writing output: {e}"))
    }
}

fn compute(a: &ProbArgs, method: Method) -> Result<PowerSeries, Failure> {
    if a.double {
        let target = a.state.to_double().ok_or_else(|| {
            Failure::Usage(format!(
                "state {} is never occupied after a whole number of double steps",
                a.state
            ))
        })?;
        Ok(routes::double_series(method, target, a.steps, &a.alpha)?)
    } else {
        Ok(routes::single_series(method, a.state, a.steps, &a.alpha)?)
    }
}

fn prob(a: &ProbArgs) -> Result<(), Failure> {
    let values = compute(a, a.method)?;
    if a.verify {
        let other = if a.method == Method::Dp {
            Method::Closed
        } else {
            Method::Dp
        };
        let check = compute(a, other)?;
        if let Some(k) = values.first_difference(&check) {
            return Err(Failure::Check(format!(
                "{} and {} differ at step {k}: {} vs {}",
                a.method.name(),
                other.name(),
                values.coeff(k),
                check.coeff(k)
            )));
        }
    }
    let alpha = a.alpha.alpha().to_string();
    let state = a.state.to_string();
    let mut columns = vec!["method", "alpha", "state", "step", "value"];
    let mut table_columns = vec!["step", "value"];
    if a.float {
        columns.push("value_float");
        table_columns.push("value_float");
    }
    let rows = (0..=a.steps)
        .map(|k| {
            let v = values.coeff(k);
            let mut row = vec![
                Cell::Text(a.method.name().into()),
                Cell::Text(alpha.clone()),
                Cell::Text(state.clone()),
                Cell::Int(k),
                Cell::Text(v.to_string()),
            ];
            if a.float {
                row.push(float_cell(to_f64(v)));
            }
            row
        })
        .collect();
    let table = Table {
        meta: vec![
            ("alpha", json!(alpha)),
            ("method", json!(a.method.name())),
            ("order", json!(a.steps)),
            ("state", json!(state)),
            ("unit", json!(if a.double { "double" } else { "single" })),
        ],
        columns,
        table_columns,
        rows,
    };
    table.write(a.format, &mut io::stdout().lock())?;
    Ok(())
}

fn expected_end(a: &ExpectedEndArgs) -> Result<(), Failure> {
    if !a.asymptotic && a.steps > EXACT_LIMIT {
        return Err(Failure::Usage(format!(
            "exact values are limited to {EXACT_LIMIT} double steps; pass --asymptotic for larger n"
        )));
    }
    let stride = a.stride as usize;
    let mut ns: Vec<usize> = (0..=a.steps).step_by(stride).collect();
    if ns.last() != Some(&a.steps) {
        ns.push(a.steps);
    }
    let exact_max = ns
        .iter()
        .copied()
        .filter(|&n| n <= EXACT_LIMIT)
        .max()
        .unwrap_or(0);
    let exact = expected_end_series(exact_max, &a.alpha);
    let estimates = if a.asymptotic {
        asymptotic_estimates(&ns, &a.alpha, 0)
    } else {
        Vec::new()
    };
    let alpha = a.alpha.alpha().to_string();
    let mut columns = vec!["alpha", "step", "value"];
    let mut table_columns = vec!["step", "value"];
    if a.asymptotic {
        columns.extend(["value_float", "estimate", "ratio"]);
        table_columns.extend(["value_float", "estimate", "ratio"]);
    }
    let rows = ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let value = if n <= EXACT_LIMIT {
                Cell::Text(exact.coeff(n).to_string())
            } else {
                Cell::Empty
            };
            let mut row = vec![Cell::Text(alpha.clone()), Cell::Int(n), value];
            if let Some(e) = estimates.get(i) {
                row.push(float_cell(e.value));
                row.push(float_cell(e.estimate));
                row.push(if n == 0 {
                    Cell::Empty
                } else {
                    float_cell(e.ratio())
                });
            }
            row
        })
        .collect();
    let table = Table {
        meta: vec![
            ("alpha", json!(alpha)),
            ("method", json!("dp")),
            ("order", json!(a.steps)),
        ],
        columns,
        table_columns,
        rows,
    };
    table.write(a.format, &mut io::stdout().lock())?;
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let opts = VerifyOptions {
        order: a.order,
        max_index: a.max_index,
        inject_fault: a.inject_fault,
    };
    let report = verify(&a.alpha_list, &opts)?;
    let mut out = io::stdout().lock();
    write!(out, "{report}")?;
    out.flush()?;
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Check(format!(
            "{} at alpha = {}: {}",
            c.name, c.alpha, c.detail
        ))),
    }
}
