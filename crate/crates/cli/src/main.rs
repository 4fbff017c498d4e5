//! `ostrowski` command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check (or a numeric routine)
//! failed, 2 bad arguments, 3 I/O error.

mod args;
mod emit;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use ostrowski::classical::classical_report;
use ostrowski::majorant::refined_majorant;
use ostrowski::numerics::QuadConfig;
use ostrowski::verify::battery::{run_battery, BatteryConfig};
use ostrowski::verify::{erratum_report, table1, ErratumFinding};
use ostrowski::weighted::{bound_report, sharpness_witness};
use ostrowski::{Error, FunctionSpec, Interval, ReportOptions, Weight, WeightKind};

use args::{BoundsArgs, ClassicalArgs, Cli, Command, DomainArgs, MajorantArgs, OutputArgs, Table1Args, VerifyArgs};
use emit::{fmt_g, fmt_opt, Format, Table};

enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::NoBracket { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let nums: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .or_else(|_| usage(format!("{what} must be two comma-separated numbers, got {s:?}")))?;
    match nums.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => usage(format!("{what} must be two comma-separated numbers, got {s:?}")),
    }
}

fn parse_interval(s: &str) -> Result<Interval, Failure> {
    let (a, b) = parse_pair(s, "--interval")?;
    Ok(Interval::new(a, b)?)
}

fn parse_weight(d: &DomainArgs) -> Result<Weight, Failure> {
    let iv = parse_interval(&d.interval)?;
    if !(d.tol > 0.0 && d.tol.is_finite()) {
        return usage(format!("--tol must be positive, got {}", d.tol));
    }
    let w = Weight::parse(&d.weight, iv)?;
    if matches!(w.kind(), WeightKind::Beta { .. }) && iv != Interval::unit() {
        return usage("Beta weights live on [0, 1]; drop --interval or set it to 0,1");
    }
    Ok(w.with_quad_config(QuadConfig::with_tol(d.tol)))
}

fn parse_coeffs(body: &str) -> Result<Vec<f64>, Failure> {
    body.split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .or_else(|_| usage(format!("bad coefficient list {body:?}")))
}

/// `poly:...`, `witness` (needs a weight and both derivative bounds) or,
/// where `allow_sine` is set, `sin:<k>`.
fn parse_function(
    spec: &str,
    iv: Interval,
    weight: Option<&Weight>,
    range: (Option<f64>, Option<f64>),
    allow_sine: bool,
) -> Result<FunctionSpec, Failure> {
    let spec = spec.trim();
    if spec == "witness" {
        let (Some(g), Some(big_g)) = range else {
            return usage("witness needs both --gamma and --Gamma");
        };
        let Some(w) = weight else {
            return usage("witness is only available with a weight");
        };
        return Ok(sharpness_witness(w, g, big_g)?);
    }
    if range.0.is_some() || range.1.is_some() {
        return usage("--gamma/--Gamma only apply to --f witness; polynomial ranges are computed exactly");
    }
    if let Some(body) = spec.strip_prefix("poly:") {
        return Ok(FunctionSpec::polynomial(parse_coeffs(body)?, iv)?);
    }
    if let Some(body) = spec.strip_prefix("sin:") {
        if !allow_sine {
            return usage("sin:<k> is only accepted by the majorant subcommand");
        }
        let k: f64 = body.trim().parse().or_else(|_| usage(format!("bad frequency {body:?}")))?;
        return Ok(FunctionSpec::sine(k, iv));
    }
    usage(format!("unknown function {spec:?}; expected poly:<c0>,<c1>,... or witness"))
}

fn parse_points(s: &str, iv: Interval, sigma: Option<f64>) -> Result<Vec<f64>, Failure> {
    let s = s.trim();
    if s == "sigma" {
        return sigma.map(|v| vec![v]).map_or_else(|| usage("x = sigma needs a weight"), Ok);
    }
    if let Some(n) = s.strip_prefix("grid:") {
        let n: usize = n.trim().parse().or_else(|_| usage(format!("bad grid size {n:?}")))?;
        if n < 2 {
            return usage("grid needs at least 2 points");
        }
        return Ok(iv.grid(n));
    }
    let xs: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .or_else(|_| usage(format!("--x must be a number, a comma list, grid:<n> or sigma; got {s:?}")))?;
    for &x in &xs {
        iv.check_contains(x, "x")?;
    }
    Ok(xs)
}

fn write_to(path: Option<&Path>, text: &str) -> Outcome {
    let result = match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    };
    result.map_err(Failure::Io)
}

fn emit(table: &Table, output: &OutputArgs) -> Outcome {
    write_to(output.out.as_deref(), &table.render(output.format))
}

fn bounds(a: BoundsArgs) -> Outcome {
    if !(0.0..=1.0).contains(&a.c) {
        return usage(format!(
            "c = {} is outside [0, 1] for weighted bounds; use the classical subcommand for c up to 2",
            a.c
        ));
    }
    let w = parse_weight(&a.domain)?;
    let iv = w.interval();
    let f = parse_function(
        &a.function.function,
        iv,
        Some(&w),
        (a.function.gamma, a.function.big_gamma),
        false,
    )?;
    let xs = parse_points(&a.x, iv, Some(w.sigma()))?;
    let opts = ReportOptions {
        majorant_grid: (a.n_grid > 0).then_some(a.n_grid),
        l2: true,
    };
    let mut table = Table::new(&[
        "x",
        "c",
        "l_value",
        "lower",
        "upper",
        "t_star",
        "nu",
        "kernel_l1",
        "majorant_bound",
        "l2_bound",
    ]);
    for x in xs {
        let r = bound_report(&f, x, a.c, &w, opts)?;
        table.push(vec![
            fmt_g(r.x),
            fmt_g(r.c),
            fmt_g(r.l_value),
            fmt_g(r.lower),
            fmt_g(r.upper),
            fmt_g(r.t_star),
            fmt_g(r.nu),
            fmt_g(r.kernel_l1),
            fmt_opt(r.majorant_bound),
            fmt_opt(r.l2_bound),
        ]);
    }
    emit(&table, &a.output)
}

fn classical(a: ClassicalArgs) -> Outcome {
    if !(0.0..=2.0).contains(&a.c) {
        return usage(format!("c = {} is outside [0, 2]", a.c));
    }
    let iv = parse_interval(&a.interval)?;
    if a.function.function.trim() == "witness" {
        return usage("witness needs a weight; use the bounds subcommand");
    }
    let f = parse_function(&a.function.function, iv, None, (a.function.gamma, a.function.big_gamma), false)?;
    let sup = f.derivative_sup_norm().unwrap_or(f64::NAN);
    let mut table = Table::new(&[
        "x",
        "c",
        "l_value",
        "e33_lower",
        "e33_upper",
        "cheng",
        "matic",
        "dragomir_wang",
        "anastassiou",
    ]);
    for x in parse_points(&a.x, iv, None)? {
        let r = classical_report(&f, x, a.c, iv)?;
        table.push(vec![
            fmt_g(r.x),
            fmt_g(r.c),
            fmt_g(r.l_value),
            fmt_g(r.e33_lower),
            fmt_g(r.e33_upper),
            fmt_g(r.cheng),
            fmt_g(r.matic),
            fmt_g(r.dragomir_wang),
            fmt_g(r.anastassiou * sup),
        ]);
    }
    emit(&table, &a.output)
}

fn majorant(a: MajorantArgs) -> Outcome {
    if a.n_grid < 2 {
        return usage("--n-grid must be at least 2");
    }
    let w = parse_weight(&a.domain)?;
    let iv = w.interval();
    let f = parse_function(&a.function, iv, Some(&w), (a.gamma, a.big_gamma), true)?;
    let refined = refined_majorant(&f, iv, a.n_grid)?;
    if !refined.converged {
        eprintln!("warning: majorant still moving at the largest grid");
    }
    let mut table = Table::new(&["s", "omega_tilde"]);
    for &(s, v) in refined.curve.knots() {
        table.push(vec![fmt_g(s), fmt_g(v)]);
    }
    emit(&table, &a.output)
}

fn errata_table(errata: &[ErratumFinding], format: Format) -> Table {
    let mut table = match format {
        Format::Csv => Table::new(&["id", "location", "computed", "paper"]),
        Format::Text => Table::new(&["id", "location", "computed", "paper", "description"]),
    };
    for e in errata {
        let mut row = vec![e.id.clone(), e.location.clone(), fmt_opt(e.computed), fmt_opt(e.printed)];
        if format == Format::Text {
            row.push(e.description.clone());
        }
        table.push(row);
    }
    table
}

fn table1_cmd(a: Table1Args) -> Outcome {
    let (rows, errata) = table1(a.step)?;
    let mut table = Table::new(&[
        "x",
        "nu_corrected",
        "nu_table_convention",
        "lhs",
        "rhs",
        "actual",
        "paper_nu",
        "paper_lhs",
        "paper_rhs",
        "paper_actual",
    ]);
    for r in &rows {
        table.push(vec![
            fmt_g(r.x),
            fmt_g(r.nu_corrected),
            fmt_g(r.nu_table_convention),
            fmt_g(r.lhs),
            fmt_g(r.rhs),
            fmt_g(r.actual),
            fmt_opt(r.paper_nu),
            fmt_opt(r.paper_lhs),
            fmt_opt(r.paper_rhs),
            fmt_opt(r.paper_actual),
        ]);
    }
    let mut text = table.render(a.output.format);
    let errata_text = errata_table(&errata, a.output.format).render(a.output.format);
    match &a.errata_out {
        Some(p) => write_to(Some(p), &errata_text)?,
        None => {
            text.push('\n');
            text.push_str(&errata_text);
        }
    }
    write_to(a.output.out.as_deref(), &text)
}

fn verify(a: VerifyArgs) -> Outcome {
    let summary = run_battery(&BatteryConfig {
        seed: a.seed,
        trials: a.trials,
        slack_tol: a.slack,
        n_grid: a.n_grid,
        parallel: !a.serial,
    })?;
    let mut table = Table::new(&["check", "passed", "failed", "worst_slack", "worst_case"]);
    for c in &summary.checks {
        table.push(vec![
            c.name.to_string(),
            c.passed.to_string(),
            c.failed.to_string(),
            fmt_g(c.worst_slack),
            c.worst_case.clone(),
        ]);
    }
    emit(&table, &a.output)?;
    if summary.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = summary.checks.iter().filter(|c| c.failed > 0).map(|c| c.name).collect();
        Err(Failure::Check(format!("checks failed: {}", failed.join(", "))))
    }
}

fn erratum(a: OutputArgs) -> Outcome {
    let errata = erratum_report()?;
    emit(&errata_table(&errata, a.format), &a)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let outcome = match cli.command {
        Command::Bounds(a) => bounds(a),
        Command::Table1(a) => table1_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Majorant(a) => majorant(a),
        Command::Classical(a) => classical(a),
        Command::Erratum(a) => erratum(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Check(m) | Failure::Io(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
