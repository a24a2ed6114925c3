//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use wickstar::arith::parse_rational;
use wickstar::json::{
    disk_from_json, disk_to_json, fourier_from_json, fourier_to_json, operator_to_json, rational_to_json,
    ratfun_to_json, series_from_json, series_to_json, star_element_to_json, symbol_to_json, to_canonical_string,
    torus_quotient_to_json,
};
use wickstar::models::disk::disk_product;
use wickstar::models::torus::{moyal_product, torus_quotient};
use wickstar::quotient::{quotient_map, substitute, AlphaValue};
use wickstar::star::{extract_structure, star_symbols, star_u, StarElement};
use wickstar::tensor::SymbolTensor;

use crate::checks::{run_checks, CheckParams, Suite};
use crate::eval::{Binding, Session};
use crate::expr::parse;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "wickstar", version, about = "Exact star products on complex projective space and companion models")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// JSON input file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Star product of two symbols or structured elements: {"left": …, "right": …}.
    Star(Input),
    /// Evaluate an expression over named values.
    Eval(EvalArgs),
    /// Class of an element in the matrix-algebra quotient at ν = 1/K.
    Quotient {
        #[arg(long = "K")]
        k: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Substitute ν = α into a structured element.
    Subst {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[command(flatten)]
        input: Input,
    },
    /// Moyal product of two Fourier sums, and optionally its class at λ = 1/K.
    Torus {
        #[arg(long = "K")]
        k: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Product of two disk elements.
    Disk(Input),
    /// Search for a structured element with the given ν-series expansion.
    Extract {
        #[arg(long, default_value_t = 6)]
        level_bound: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Run a property-check suite.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    expr: String,
    /// Session file: {"bindings": {…}, "seed", "n", "level_bound", "order_bound"}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Bind NAME to a JSON value; a bare array is a matrix.
    #[arg(long = "let", value_name = "NAME=JSON")]
    bindings: Vec<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    level_bound: Option<usize>,
    #[arg(long)]
    order_bound: Option<usize>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    #[arg(long = "K", default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long, default_value_t = 3)]
    max_index: usize,
    /// Run only the instance with this index.
    #[arg(long)]
    only: Option<usize>,
}

type Failure = String;

fn read_input(input: &Input) -> Result<Json, Failure> {
    let text = match &input.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON input: {e}"))
}

fn field<'a>(v: &'a Json, key: &str) -> Result<&'a Json, Failure> {
    v.get(key).ok_or_else(|| format!("input needs a {key:?} field"))
}

fn element_of(v: &Json) -> Result<(StarElement, Option<SymbolTensor>), Failure> {
    match Binding::from_json(v).map_err(|e| e.to_string())? {
        Binding::Matrix(m) => {
            let s = SymbolTensor::from_matrix(&m).map_err(|e| e.to_string())?;
            Ok((StarElement::lift(&s), Some(s)))
        }
        Binding::Symbol(s) => Ok((StarElement::lift(&s), Some(s))),
        Binding::Element(e) => Ok((e, None)),
        _ => Err("expected a matrix, symbol or element".into()),
    }
}

fn element_json(e: &StarElement) -> Json {
    let m = e.minimized();
    json!({"type": "element", "value": star_element_to_json(&m), "expansion": series_to_json(&m.expand())})
}

fn star_cmd(input: &Input) -> Result<Json, Failure> {
    let v = read_input(input)?;
    let (x, fx) = element_of(field(&v, "left")?)?;
    let (y, fy) = element_of(field(&v, "right")?)?;
    let mut out = element_json(&star_u(&x, &y).map_err(|e| e.to_string())?);
    if let (Some(f), Some(g)) = (fx, fy) {
        let r = star_symbols(&f, &g).map_err(|e| e.to_string())?;
        out["terms"] = r
            .terms
            .iter()
            .map(|t| json!({"r": t.r, "coeff": ratfun_to_json(&t.coeff), "tensor": symbol_to_json(&t.tensor)}))
            .collect();
    }
    Ok(out)
}

fn eval_cmd(args: &EvalArgs) -> Result<Json, Failure> {
    let mut session = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let v: Json = serde_json::from_str(&text).map_err(|e| format!("invalid session JSON: {e}"))?;
            Session::from_json(&v).map_err(|e| e.to_string())?
        }
        None => Session::default(),
    };
    for b in &args.bindings {
        let (name, body) = b.split_once('=').ok_or_else(|| format!("--let expects NAME=JSON, got {b:?}"))?;
        let v: Json = serde_json::from_str(body).map_err(|e| format!("--let {name}: {e}"))?;
        let value = Binding::from_json(&v).map_err(|e| format!("--let {name}: {e}"))?;
        session.bind(name.trim(), value).map_err(|e| e.to_string())?;
    }
    if let Some(n) = args.n {
        match session.n {
            Some(m) if m != n => return Err(format!("--n {n} disagrees with the bindings (n = {m})")),
            _ => session.n = Some(n),
        }
    }
    if let Some(s) = args.seed {
        session.config.seed = s;
    }
    if let Some(b) = args.level_bound {
        session.config.level_bound = b;
    }
    if let Some(b) = args.order_bound {
        session.config.order_bound = b;
    }
    let e = parse(&args.expr).map_err(|e| e.to_string())?;
    session.evaluate_to_json(&e).map_err(|e| e.to_string())
}

fn quotient_cmd(k: usize, input: &Input) -> Result<Json, Failure> {
    let (e, _) = element_of(&read_input(input)?)?;
    let op = quotient_map(&e, k).map_err(|e| e.to_string())?;
    Ok(json!({"type": "operator", "value": operator_to_json(&op)}))
}

fn subst_cmd(alpha: &str, input: &Input) -> Result<Json, Failure> {
    let a = parse_rational(alpha).map_err(|e| e.to_string())?;
    let av = AlphaValue::new(a.clone()).map_err(|e| e.to_string())?;
    let (e, _) = element_of(&read_input(input)?)?;
    let f = substitute(&e, &av).minimal();
    Ok(json!({"type": "function", "alpha": rational_to_json(&a), "value": symbol_to_json(&f)}))
}

fn torus_cmd(k: Option<usize>, input: &Input) -> Result<Json, Failure> {
    let v = read_input(input)?;
    let f = fourier_from_json(field(&v, "left")?).map_err(|e| e.to_string())?;
    let g = fourier_from_json(field(&v, "right")?).map_err(|e| e.to_string())?;
    let fg = moyal_product(&f, &g).map_err(|e| e.to_string())?;
    let mut out = json!({"type": "fourier", "value": fourier_to_json(&fg)});
    if let Some(k) = k {
        let q = (|| torus_quotient(&f, k)?.product(&torus_quotient(&g, k)?))().map_err(|e| e.to_string())?;
        out["quotient"] = torus_quotient_to_json(&q);
    }
    Ok(out)
}

fn disk_cmd(input: &Input) -> Result<Json, Failure> {
    let v = read_input(input)?;
    let f = disk_from_json(field(&v, "left")?).map_err(|e| e.to_string())?;
    let g = disk_from_json(field(&v, "right")?).map_err(|e| e.to_string())?;
    Ok(json!({"type": "disk", "value": disk_to_json(&disk_product(&f, &g))}))
}

fn extract_cmd(level_bound: usize, input: &Input) -> Result<Json, Failure> {
    let s = series_from_json(&read_input(input)?).map_err(|e| e.to_string())?;
    for k in 0..=level_bound {
        if let Some(e) = extract_structure(&s, k) {
            return Ok(json!({"member": true, "level": k, "value": star_element_to_json(&e)}));
        }
    }
    Ok(json!({"member": false, "level_bound": level_bound}))
}

fn check_cmd(args: &CheckArgs) -> Result<(bool, Json), Failure> {
    let params = CheckParams {
        n: args.n,
        max_degree: args.max_degree,
        k: args.k,
        instances: args.instances,
        order: args.order,
        max_index: args.max_index,
        only: args.only,
    };
    run_checks(args.suite, args.seed, &params).map_err(|e| e.to_string())
}

fn emit(v: &Json, cli: &Cli) -> Result<(), Failure> {
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    } else {
        to_canonical_string(v)
    };
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| format!("stdout: {e}")),
    }
}

fn dispatch(cli: &Cli) -> Result<(bool, Json), Failure> {
    let ok = |v| Ok((true, v));
    match &cli.command {
        Command::Star(i) => ok(star_cmd(i)?),
        Command::Eval(a) => ok(eval_cmd(a)?),
        Command::Quotient { k, input } => ok(quotient_cmd(*k, input)?),
        Command::Subst { alpha, input } => ok(subst_cmd(alpha, input)?),
        Command::Torus { k, input } => ok(torus_cmd(*k, input)?),
        Command::Disk(i) => ok(disk_cmd(i)?),
        Command::Extract { level_bound, input } => ok(extract_cmd(*level_bound, input)?),
        Command::Check(a) => check_cmd(a),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli).and_then(|(passed, v)| emit(&v, &cli).map(|_| passed)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}
