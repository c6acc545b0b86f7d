//! Command-line front end: run flows and emit exact time series, run the
//! verification suites, and classify flow singularities.
//!
//! Exit codes: 0 success, 1 verification/cross-check failure, 2 usage or
//! domain error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use g2ccy::flows::{
    classify_singularity, quantities, Direction, FlowKind, FlowSolution, PowerScalar,
};
use g2ccy::scalar::{rat_nth_root, Rat};
use g2ccy::verify::{run_suite, SuiteConfig, SUITE_NAMES};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(
    name = "g2ccy",
    about = "Exact computations for flows of coclosed G2-structures on the Heisenberg contact Calabi-Yau model",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flow computations.
    Flow {
        #[command(subcommand)]
        command: FlowCommand,
    },
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Classify the singularity type of a flow in both time directions.
    Classify(ClassifyArgs),
}

#[derive(Subcommand)]
enum FlowCommand {
    /// Evaluate the closed-form solution on a sample grid and emit a
    /// time series.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FlowName {
    Coflow,
    Laplacian,
    Hitchin,
}

impl FlowName {
    fn kind(self) -> FlowKind {
        match self {
            FlowName::Coflow => FlowKind::LaplacianCoflow,
            FlowName::Laplacian => FlowKind::LaplacianFlow,
            FlowName::Hitchin => FlowKind::Hitchin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Mode {
    Exact,
    Float,
}

#[derive(Args)]
struct RunArgs {
    /// Which flow to run.
    #[arg(long, value_enum)]
    flow: FlowName,
    /// Initial value f(0) = epsilon > 0; "p/q" or an exact decimal.
    #[arg(long, default_value = "1")]
    epsilon: String,
    /// Start of the sample interval.
    #[arg(long, default_value = "0")]
    t0: String,
    /// End of the sample interval.
    #[arg(long, default_value = "1")]
    t1: String,
    /// Number of sample rows (>= 1), evenly spaced over [t0, t1].
    #[arg(long, default_value_t = 11)]
    samples: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Arithmetic mode: exact rationals or f64 (overridable via G2CCY_MODE).
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Cross-check tolerance in float mode (overridable via G2CCY_TOLERANCE).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (or "all").
    suite: String,
    /// RNG seed for the randomized instances.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of random instances per randomized family.
    #[arg(long, default_value_t = 20)]
    cases: usize,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Which flow to classify.
    #[arg(long, value_enum)]
    flow: FlowName,
    /// Initial value f(0) = epsilon > 0; "p/q" or an exact decimal.
    #[arg(long, default_value = "1")]
    epsilon: String,
    /// Synthetic transverse-curvature scale K >= 0 injected into Lambda
    /// (the model itself has flat transverse geometry, K = 0).
    #[arg(long = "synthetic-K", default_value = "0")]
    synthetic_k: String,
    /// Emit the JSON report instead of the human-readable one.
    #[arg(long)]
    json: bool,
}

/// Parse "p/q", an integer, or an exact base-10 decimal into a rational
/// without going through floating point.
fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator '{num}': {e}"))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator '{den}': {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let digits = format!(
            "{}{}",
            if int_digits.is_empty() { "0" } else { int_digits },
            frac_part
        );
        let n = BigInt::from_str(&digits).map_err(|e| format!("bad decimal '{s}': {e}"))?;
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Rat::new(n, d);
        return Ok(if negative { -v } else { v });
    }
    let n = BigInt::from_str(s).map_err(|e| format!("bad rational '{s}': {e}"))?;
    Ok(Rat::from_integer(n))
}

/// Render an exact power law at rational t: a reduced fraction when the
/// value is rational, otherwise the closed-form expression itself.
fn render_exact(p: &PowerScalar, t: &Rat) -> String {
    match p.eval_rat(t) {
        Some(v) => v.to_string(),
        None => {
            let mut terms = String::new();
            for (c, u, alpha) in p.eval_terms(t) {
                if !terms.is_empty() {
                    terms.push_str(" + ");
                }
                let _ = write!(terms, "{c}*({u})^({alpha})");
            }
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms
            }
        }
    }
}

/// Render sqrt of an exact nonnegative power law value.
fn render_exact_sqrt(p: &PowerScalar, t: &Rat) -> String {
    if let Some(v) = p.eval_rat(t) {
        if let Some(r) = rat_nth_root(&v, 2) {
            return r.to_string();
        }
        return format!("sqrt({v})");
    }
    format!("sqrt({})", render_exact(p, t))
}

fn rfc4180(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn emit(output: &Option<String>, text: &str) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write stdout: {e}"))
        }
    }
}

const COLUMNS: [&str; 12] = [
    "t",
    "f",
    "h",
    "coeff_eta2",
    "coeff_gD",
    "normT2",
    "normGradT2",
    "normRm2",
    "Lambda",
    "volDensity",
    "HitchinRatio",
    "cohomCoeff",
];

fn cmd_flow_run(args: &RunArgs) -> Result<(), (u8, String)> {
    let usage = |m: String| (2u8, m);
    let mode = resolve_mode(args.mode).map_err(usage)?;
    let tolerance = resolve_tolerance(args.tolerance).map_err(usage)?;
    let epsilon = parse_rat(&args.epsilon).map_err(usage)?;
    let t0 = parse_rat(&args.t0).map_err(usage)?;
    let t1 = parse_rat(&args.t1).map_err(usage)?;
    if args.samples < 1 {
        return Err(usage("samples must be >= 1".into()));
    }
    let sol = FlowSolution::new(args.flow.kind(), epsilon.clone())
        .map_err(|e| usage(e.to_string()))?;
    let grid: Vec<Rat> = if args.samples == 1 {
        vec![t0.clone()]
    } else {
        let n = Rat::from_integer((args.samples as i64 - 1).into());
        (0..args.samples)
            .map(|i| &t0 + (&t1 - &t0) * Rat::from_integer((i as i64).into()) / &n)
            .collect()
    };
    for t in &grid {
        sol.check_time(t).map_err(|e| usage(e.to_string()))?;
    }

    let q = quantities(&sol);
    // Internal cross-check: |T|^2 along two independent routes — the
    // metric norm of the full torsion vs the torsion reconstructed from
    // the covariant derivative of phi.
    let m = sol.model();
    let t_alt = m.full_torsion_from_nabla_phi();
    let norm_t2_alt = m.metric().tensor2_norm2(&t_alt);
    let cross_ok = match mode {
        Mode::Exact => q.norm_t2 == norm_t2_alt,
        Mode::Float => grid.iter().all(|t| {
            let tf = ToPrimitive::to_f64(t).unwrap();
            (q.norm_t2.eval_f64(tf) - norm_t2_alt.eval_f64(tf)).abs() <= tolerance
        }),
    };
    if !cross_ok {
        return Err((1, "internal cross-check failed: |T|^2 differs between routes".into()));
    }

    let cols: [&PowerScalar; 8] = [
        &q.f,
        &q.h,
        &q.coeff_eta2,
        &q.coeff_gd,
        &q.norm_t2,
        &q.norm_grad_t2,
        &q.norm_rm2,
        &q.lambda2, // rendered as Lambda = sqrt
    ];
    let tail: [&PowerScalar; 3] = [&q.vol_density, &q.hitchin_ratio, &q.cohom_coeff];

    let render_row = |t: &Rat| -> Vec<String> {
        let mut row = Vec::with_capacity(12);
        match mode {
            Mode::Exact => {
                row.push(t.to_string());
                for (i, p) in cols.iter().enumerate() {
                    if i == 7 {
                        row.push(render_exact_sqrt(p, t));
                    } else {
                        row.push(render_exact(p, t));
                    }
                }
                for p in tail {
                    row.push(render_exact(p, t));
                }
            }
            Mode::Float => {
                let tf = ToPrimitive::to_f64(t).unwrap();
                row.push(format!("{tf}"));
                for (i, p) in cols.iter().enumerate() {
                    let v = p.eval_f64(tf);
                    row.push(format!("{}", if i == 7 { v.sqrt() } else { v }));
                }
                for p in tail {
                    row.push(format!("{}", p.eval_f64(tf)));
                }
            }
        }
        row
    };

    let text = match args.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(&COLUMNS.join(","));
            out.push_str("\r\n");
            for t in &grid {
                let row: Vec<String> = render_row(t).iter().map(|f| rfc4180(f)).collect();
                out.push_str(&row.join(","));
                out.push_str("\r\n");
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = grid
                .iter()
                .map(|t| {
                    let row = render_row(t);
                    let obj: serde_json::Map<String, serde_json::Value> = COLUMNS
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "flow-run",
                "flow": sol.kind.name(),
                "epsilon": epsilon.to_string(),
                "mode": match mode { Mode::Exact => "exact", Mode::Float => "float" },
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    emit(&args.output, &text).map_err(usage)
}

fn resolve_mode(flag: Option<Mode>) -> Result<Mode, String> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match std::env::var("G2CCY_MODE") {
        Ok(v) => match v.as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("G2CCY_MODE must be 'exact' or 'float', got '{other}'")),
        },
        Err(_) => Ok(Mode::Exact),
    }
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("G2CCY_TOLERANCE") {
        Ok(v) => v
            .parse::<f64>()
            .map_err(|e| format!("G2CCY_TOLERANCE must be a float: {e}")),
        Err(_) => Ok(1e-12),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), (u8, String)> {
    if args.suite != "all" && !SUITE_NAMES.contains(&args.suite.as_str()) {
        return Err((
            2,
            format!("unknown suite '{}'; expected one of {SUITE_NAMES:?} or 'all'", args.suite),
        ));
    }
    let corrupt = std::env::var("G2CCY_CORRUPT").map(|v| v == "1").unwrap_or(false);
    let cfg = SuiteConfig { seed: args.seed, cases: args.cases, corrupt };
    let cases = run_suite(&args.suite, &cfg).map_err(|e| (2u8, e))?;
    let passed = cases.iter().filter(|c| c.passed).count();
    let results: Vec<serde_json::Value> = cases
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "inputs": c.provenance,
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "cases": args.cases,
        "total": cases.len(),
        "passed": passed,
        "all_passed": passed == cases.len(),
        "results": results,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).unwrap());
    emit(&args.output, &text).map_err(|e| (2u8, e))?;
    if passed != cases.len() {
        let first = cases.iter().find(|c| !c.passed).unwrap();
        return Err((1, format!("{} of {} cases failed; first: {}", cases.len() - passed, cases.len(), first.name)));
    }
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), (u8, String)> {
    let usage = |m: String| (2u8, m);
    let epsilon = parse_rat(&args.epsilon).map_err(usage)?;
    let k = parse_rat(&args.synthetic_k).map_err(usage)?;
    if k.is_negative() {
        return Err(usage("synthetic-K must be >= 0".into()));
    }
    let sol = FlowSolution::new(args.flow.kind(), epsilon.clone())
        .map_err(|e| usage(e.to_string()))?;
    let reports = classify_singularity(&sol, &k);
    if args.json {
        let entries: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "direction": match r.direction { Direction::Forward => "forward", Direction::Backward => "backward" },
                    "t_sing": r.t_sing.as_ref().map(|t| t.to_string()),
                    "type": r.sing_type.map(|s| s.to_string()),
                    "lambda2_exponents": r.lambda2_exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "controlling_exponent": r.controlling_exponent.as_ref().map(|e| e.to_string()),
                    "note": r.note,
                })
            })
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "classify",
            "flow": sol.kind.name(),
            "epsilon": epsilon.to_string(),
            "synthetic_K": k.to_string(),
            "directions": entries,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("flow: {}  epsilon = {}  K = {}", sol.kind.name(), epsilon, k);
        for r in &reports {
            let dir = match r.direction {
                Direction::Forward => "forward ",
                Direction::Backward => "backward",
            };
            let t_sing = r
                .t_sing
                .as_ref()
                .map(|t| format!("T = {t}"))
                .unwrap_or_else(|| "infinite time".into());
            let ty = r
                .sing_type
                .map(|s| format!("Type {s}"))
                .unwrap_or_else(|| "no singularity".into());
            println!("  {dir}: {t_sing}, {ty}");
            println!("           Lambda^2 exponents {:?}, controlling {:?}",
                r.lambda2_exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                r.controlling_exponent.as_ref().map(|e| e.to_string()));
            println!("           {}", r.note);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Flow { command: FlowCommand::Run(args) } => cmd_flow_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Classify(args) => cmd_classify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
