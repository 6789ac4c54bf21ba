//! Command-line front end for exact Witt-vector arithmetic, complex tables,
//! log coefficients, and the relation sweeps.
//!
//! Exit codes: 0 success, 1 a check suite found a failing relation, 2 usage
//! or parse errors, 3 a ghost vector that does not lift.

use clap::{Args, Parser, Subcommand, ValueEnum};
use drwitt::check::{
    check_drw_axioms, check_filtration, check_log_axioms, check_pd_failure,
    check_poly_assoc_sweep, check_witt_identities, ExecMode, RelationReport,
};
use drwitt::log::{dlog_torsion_order, solve_log_coefficients};
use drwitt::polyext::{oracle_mul, poly_lambda, poly_lambda_ghost};
use drwitt::{
    DrwElement, GhostVector, LogDrwElement, PolyDrwElement, WittError, WittVector, MAX_CLI_LEVEL,
    SUPPORTED_PRIMES,
};
use num_bigint::BigInt;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "drwitt",
    about = "Exact Witt vectors and de Rham-Witt complexes over Z_(p)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witt-vector arithmetic on raw component lists.
    Witt {
        #[arg(value_enum)]
        op: WittOp,
        #[command(flatten)]
        common: Common,
        /// Component list; one op-dependent group of p-local scalars or
        /// polynomials (use `--` before negative values).
        #[arg(trailing_var_arg = true)]
        args: Vec<String>,
    },
    /// Operations on elements of the plain complex.
    Drw {
        #[arg(value_enum)]
        op: ElemOp,
        #[command(flatten)]
        common: Common,
        /// Elements like "3·V(1) + dV^2(1)" (the "@ {p=…, n=…}" trailer is
        /// filled in from the flags when omitted); lambda takes components.
        #[arg(trailing_var_arg = true)]
        args: Vec<String>,
    },
    /// Operations on elements of the log complex (adds dlog[p]).
    Log {
        #[arg(value_enum)]
        op: LogOp,
        #[command(flatten)]
        common: Common,
        #[arg(trailing_var_arg = true)]
        args: Vec<String>,
    },
    /// Operations in the polynomial extension over Z_(2)[X].
    Poly {
        #[arg(value_enum)]
        op: PolyOp,
        #[command(flatten)]
        common: Common,
        /// Term specs like "t1:j=2:[1]; t3:r=1,l=3:V(1)"; lambda takes
        /// polynomial components.
        #[arg(trailing_var_arg = true)]
        args: Vec<String>,
    },
    /// Structure tables of the complex at one level.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[command(flatten)]
        common: Common,
        /// Extend by the log differential dlog[p].
        #[arg(long)]
        log: bool,
    },
    /// Relation sweeps and the tail-coefficient solver.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Include the log complex in the axiom suite.
        #[arg(long)]
        log: bool,
        /// RNG seed governing all sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampled instances per relation.
        #[arg(long, default_value_t = 50)]
        fuel: u64,
        /// Number of tail coefficients the solver computes.
        #[arg(long, default_value_t = 6)]
        jmax: usize,
    },
}

#[derive(Args)]
struct Common {
    /// The prime p (2, 3, or 5).
    #[arg(long = "p", default_value_t = 2)]
    p: u32,
    /// The level n (1..=16).
    #[arg(long = "n", default_value_t = 4)]
    n: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum WittOp {
    Add,
    Mul,
    Teich,
    Ghost,
    Unghost,
    Decompose,
}

#[derive(Copy, Clone, ValueEnum)]
enum ElemOp {
    Add,
    Mul,
    D,
    Iota,
    F,
    V,
    R,
    Lambda,
}

#[derive(Copy, Clone, ValueEnum)]
enum LogOp {
    Add,
    Mul,
    D,
    Iota,
    F,
    V,
    R,
    Lambda,
    Dlog,
}

#[derive(Copy, Clone, ValueEnum)]
enum PolyOp {
    Add,
    Mul,
    Oracle,
    D,
    Iota,
    F,
    V,
    R,
    Lambda,
    Ghost,
}

#[derive(Copy, Clone, ValueEnum)]
enum TableKind {
    Groups,
    Products,
    Operators,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Axioms,
    Associativity,
    Filtration,
    Pd,
    Logcoeffs,
}

/// A failure routed to a specific exit code.
enum Failure {
    /// Bad flags or unparsable arguments (exit 2).
    Usage(String),
    /// A sweep reported at least one failing relation (exit 1).
    Check,
    /// A ghost vector outside the image of the ghost map (exit 3).
    Ghost(String),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn from_witt_err<T>(e: WittError) -> Result<T, Failure> {
    match e {
        WittError::NonIntegralGhost { .. } => Err(Failure::Ghost(e.to_string())),
        other => Err(Failure::Usage(other.to_string())),
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`drwitt table … | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Ghost(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Witt { op, common, args } => cmd_witt(op, &common, &args),
        Command::Drw { op, common, args } => cmd_drw(op, &common, &args),
        Command::Log { op, common, args } => cmd_log(op, &common, &args),
        Command::Poly { op, common, args } => cmd_poly(op, &common, &args),
        Command::Table { kind, common, log } => cmd_table(kind, &common, log),
        Command::Check {
            suite,
            common,
            log,
            seed,
            fuel,
            jmax,
        } => cmd_check(suite, &common, log, seed, fuel, jmax),
    }
}

fn validate(common: &Common) -> Result<(), Failure> {
    if !SUPPORTED_PRIMES.contains(&common.p) {
        return usage(format!("unsupported prime {} (use 2, 3, or 5)", common.p));
    }
    if common.n < 1 || common.n > MAX_CLI_LEVEL as usize {
        return usage(format!("level {} out of range 1..={MAX_CLI_LEVEL}", common.n));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// witt

/// Builds a Witt vector from raw component strings via the canonical vector
/// grammar, so scalars, fractions, and polynomials all parse uniformly.
fn witt_from_components(p: u32, n: usize, parts: &[String]) -> Result<WittVector, Failure> {
    let body: Vec<String> = parts.iter().map(|c| format!("({c})")).collect();
    let s = format!("W{{p={p},n={n}}}[{}]", body.join(","));
    s.parse::<WittVector>().or_else(from_witt_err)
}

fn ghost_from_components(p: u32, n: usize, parts: &[String]) -> Result<GhostVector, Failure> {
    let body: Vec<String> = parts.iter().map(|c| format!("({c})")).collect();
    let s = format!("G{{p={p},n={n}}}[{}]", body.join(","));
    s.parse::<GhostVector>().or_else(from_witt_err)
}

/// Renders components as a bare tuple like `(2,0,0)`.
fn tuple<T: std::fmt::Display>(items: &[T]) -> String {
    let inner: Vec<String> = items.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

fn emit_vector(
    common: &Common,
    op: &str,
    display: String,
    result: serde_json::Value,
) -> Result<(), Failure> {
    if common.json {
        let payload = json!({
            "op": op,
            "p": common.p,
            "n": common.n,
            "result": result,
            "display": display,
        });
        println!("{payload}");
    } else {
        println!("{display}");
    }
    Ok(())
}

fn cmd_witt(op: WittOp, common: &Common, args: &[String]) -> Result<(), Failure> {
    validate(common)?;
    let (p, n) = (common.p, common.n);
    let expect = |k: usize| -> Result<(), Failure> {
        if args.len() != k {
            return usage(format!("expected {k} component(s), got {}", args.len()));
        }
        Ok(())
    };
    match op {
        WittOp::Add | WittOp::Mul => {
            expect(2 * n)?;
            let x = witt_from_components(p, n, &args[..n])?;
            let y = witt_from_components(p, n, &args[n..])?;
            let z = match op {
                WittOp::Add => x.add(&y),
                _ => x.mul(&y),
            };
            let name = if matches!(op, WittOp::Add) { "add" } else { "mul" };
            emit_vector(
                common,
                name,
                tuple(z.components()),
                serde_json::to_value(&z).unwrap(),
            )
        }
        WittOp::Teich => {
            expect(1)?;
            let a = witt_from_components(p, 1, args)?;
            let t = WittVector::teichmuller(a.components()[0].clone(), n);
            emit_vector(
                common,
                "teich",
                tuple(t.components()),
                serde_json::to_value(&t).unwrap(),
            )
        }
        WittOp::Ghost => {
            expect(n)?;
            let x = witt_from_components(p, n, args)?;
            let g = x.ghost();
            emit_vector(
                common,
                "ghost",
                tuple(g.components()),
                serde_json::to_value(&g).unwrap(),
            )
        }
        WittOp::Unghost => {
            expect(n)?;
            let g = ghost_from_components(p, n, args)?;
            let x = WittVector::from_ghost(&g).or_else(from_witt_err)?;
            emit_vector(
                common,
                "unghost",
                tuple(x.components()),
                serde_json::to_value(&x).unwrap(),
            )
        }
        WittOp::Decompose => {
            expect(n)?;
            let x = witt_from_components(p, n, args)?;
            let coeffs = x.v_basis_decompose().or_else(from_witt_err)?;
            let mut terms = Vec::new();
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let basis = match i {
                    0 => "[1]".to_string(),
                    1 => "V(1)".to_string(),
                    i => format!("V^{i}(1)"),
                };
                terms.push((c.to_string(), basis));
            }
            let display = if terms.is_empty() {
                "0".to_string()
            } else {
                let mut out = String::new();
                for (i, (c, basis)) in terms.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&format!("{c}\u{b7}{basis}"));
                    } else if let Some(mag) = c.strip_prefix('-') {
                        out.push_str(&format!(" - {mag}\u{b7}{basis}"));
                    } else {
                        out.push_str(&format!(" + {c}\u{b7}{basis}"));
                    }
                }
                out
            };
            if common.json {
                let payload = json!({
                    "op": "decompose",
                    "p": p,
                    "n": n,
                    "coefficients": serde_json::to_value(&coeffs).unwrap(),
                    "display": display,
                });
                println!("{payload}");
            } else {
                println!("{display}");
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// drw / log

/// Fills in the level trailer when the user passed a bare basis expansion.
fn with_trailer(arg: &str, p: u32, n: usize, log: bool) -> String {
    if arg.contains('@') {
        arg.to_string()
    } else if log {
        format!("{arg} @ {{p={p}, n={n}, log}}")
    } else {
        format!("{arg} @ {{p={p}, n={n}}}")
    }
}

fn parse_drw(arg: &str, p: u32, n: usize) -> Result<DrwElement, Failure> {
    let e: DrwElement = with_trailer(arg, p, n, false)
        .parse()
        .or_else(from_witt_err)?;
    Ok(e)
}

fn parse_log_elem(arg: &str, p: u32, n: usize) -> Result<LogDrwElement, Failure> {
    let e: LogDrwElement = with_trailer(arg, p, n, true)
        .parse()
        .or_else(from_witt_err)?;
    Ok(e)
}

fn require_same_level(a: usize, b: usize) -> Result<(), Failure> {
    if a != b {
        return usage(format!("operands live at different levels ({a} vs {b})"));
    }
    Ok(())
}

fn emit_elem<T: std::fmt::Display>(
    common: &Common,
    op: &str,
    e: &T,
    value: serde_json::Value,
) -> Result<(), Failure> {
    if common.json {
        let payload = json!({
            "op": op,
            "p": common.p,
            "n": common.n,
            "result": value,
            "display": e.to_string(),
        });
        println!("{payload}");
    } else {
        println!("{e}");
    }
    Ok(())
}

fn op_name_elem(op: ElemOp) -> &'static str {
    match op {
        ElemOp::Add => "add",
        ElemOp::Mul => "mul",
        ElemOp::D => "d",
        ElemOp::Iota => "iota",
        ElemOp::F => "f",
        ElemOp::V => "v",
        ElemOp::R => "r",
        ElemOp::Lambda => "lambda",
    }
}

fn cmd_drw(op: ElemOp, common: &Common, args: &[String]) -> Result<(), Failure> {
    validate(common)?;
    let (p, n) = (common.p, common.n);
    match op {
        ElemOp::Add | ElemOp::Mul => {
            if args.len() != 2 {
                return usage(format!("expected 2 elements, got {}", args.len()));
            }
            let x = parse_drw(&args[0], p, n)?;
            let y = parse_drw(&args[1], p, n)?;
            require_same_level(x.level(), y.level())?;
            let z = if matches!(op, ElemOp::Add) {
                x.add(&y)
            } else {
                x.mul(&y)
            };
            let v = serde_json::to_value(&z).unwrap();
            emit_elem(common, op_name_elem(op), &z, v)
        }
        ElemOp::D | ElemOp::Iota | ElemOp::F | ElemOp::V | ElemOp::R => {
            if args.len() != 1 {
                return usage(format!("expected 1 element, got {}", args.len()));
            }
            let x = parse_drw(&args[0], p, n)?;
            let z = match op {
                ElemOp::D => x.d(),
                ElemOp::Iota => x.iota(),
                ElemOp::F | ElemOp::R => {
                    if x.level() < 2 {
                        return usage("F and R need level >= 2");
                    }
                    if matches!(op, ElemOp::F) {
                        x.frobenius()
                    } else {
                        x.restriction()
                    }
                }
                ElemOp::V => {
                    if x.level() as u8 >= MAX_CLI_LEVEL {
                        return usage(format!("V would exceed the level cap {MAX_CLI_LEVEL}"));
                    }
                    x.verschiebung()
                }
                _ => unreachable!(),
            };
            let v = serde_json::to_value(&z).unwrap();
            emit_elem(common, op_name_elem(op), &z, v)
        }
        ElemOp::Lambda => {
            if args.len() != n {
                return usage(format!("lambda expects {n} components, got {}", args.len()));
            }
            let w = witt_from_components(p, n, args)?;
            let e = DrwElement::lambda(&w).or_else(from_witt_err)?;
            let v = serde_json::to_value(&e).unwrap();
            emit_elem(common, "lambda", &e, v)
        }
    }
}

fn cmd_log(op: LogOp, common: &Common, args: &[String]) -> Result<(), Failure> {
    validate(common)?;
    let (p, n) = (common.p, common.n);
    let unary = |args: &[String]| -> Result<LogDrwElement, Failure> {
        if args.len() != 1 {
            return usage(format!("expected 1 element, got {}", args.len()));
        }
        parse_log_elem(&args[0], p, n)
    };
    match op {
        LogOp::Add | LogOp::Mul => {
            if args.len() != 2 {
                return usage(format!("expected 2 elements, got {}", args.len()));
            }
            let x = parse_log_elem(&args[0], p, n)?;
            let y = parse_log_elem(&args[1], p, n)?;
            require_same_level(x.level(), y.level())?;
            let z = if matches!(op, LogOp::Add) {
                x.add(&y)
            } else {
                x.mul(&y)
            };
            emit_log(common, if matches!(op, LogOp::Add) { "add" } else { "mul" }, &z)
        }
        LogOp::D => emit_log(common, "d", &unary(args)?.d()),
        LogOp::Iota => emit_log(common, "iota", &unary(args)?.iota()),
        LogOp::F => {
            let x = unary(args)?;
            if x.level() < 2 {
                return usage("F needs level >= 2");
            }
            emit_log(common, "f", &x.frobenius())
        }
        LogOp::R => {
            let x = unary(args)?;
            if x.level() < 2 {
                return usage("R needs level >= 2");
            }
            emit_log(common, "r", &x.restriction())
        }
        LogOp::V => {
            let x = unary(args)?;
            if x.level() as u8 >= MAX_CLI_LEVEL {
                return usage(format!("V would exceed the level cap {MAX_CLI_LEVEL}"));
            }
            emit_log(common, "v", &x.verschiebung())
        }
        LogOp::Lambda => {
            if args.len() != n {
                return usage(format!("lambda expects {n} components, got {}", args.len()));
            }
            let w = witt_from_components(p, n, args)?;
            let e = LogDrwElement::lambda(&w).or_else(from_witt_err)?;
            emit_log(common, "lambda", &e)
        }
        LogOp::Dlog => {
            if !args.is_empty() {
                return usage("dlog takes no arguments");
            }
            emit_log(common, "dlog", &LogDrwElement::dlog_gen(p, n))
        }
    }
}

fn emit_log(common: &Common, op: &str, e: &LogDrwElement) -> Result<(), Failure> {
    let v = serde_json::to_value(e).unwrap();
    emit_elem(common, op, e, v)
}

// ---------------------------------------------------------------------------
// poly

/// Parses a term spec, inferring the homogeneous degree: an explicit
/// `q=<d>;` prefix wins, otherwise the unique degree whose coefficient
/// grading matches.
fn parse_poly(arg: &str, n: usize) -> Result<PolyDrwElement, Failure> {
    let arg = arg.trim();
    if let Some(rest) = arg.strip_prefix("q=") {
        let (d, spec) = rest
            .split_once(';')
            .ok_or_else(|| Failure::Usage("expected q=<degree>; <spec>".into()))?;
        let q: u8 = d
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("bad degree {d:?}")))?;
        if q > 2 {
            return usage("degree must be 0, 1, or 2");
        }
        return PolyDrwElement::parse_spec(spec, n, q).map_err(Failure::Usage);
    }
    let mut last_err = String::new();
    for q in 0..=2u8 {
        match PolyDrwElement::parse_spec(arg, n, q) {
            Ok(e) => return Ok(e),
            Err(e) => last_err = e,
        }
    }
    usage(format!("no homogeneous degree fits: {last_err}"))
}

fn emit_poly(common: &Common, op: &str, e: &PolyDrwElement) -> Result<(), Failure> {
    if common.json {
        let payload = json!({
            "op": op,
            "n": common.n,
            "q": e.degree(),
            "spec": e.spec_string(),
            "display": e.to_string(),
        });
        println!("{payload}");
    } else {
        println!("{e}");
    }
    Ok(())
}

fn cmd_poly(op: PolyOp, common: &Common, args: &[String]) -> Result<(), Failure> {
    validate(common)?;
    if common.p != 2 {
        return usage("the polynomial extension is 2-typical (pass --p 2)");
    }
    let n = common.n;
    let unary = |args: &[String]| -> Result<PolyDrwElement, Failure> {
        if args.len() != 1 {
            return usage(format!("expected 1 element, got {}", args.len()));
        }
        parse_poly(&args[0], n)
    };
    let binary = |args: &[String]| -> Result<(PolyDrwElement, PolyDrwElement), Failure> {
        if args.len() != 2 {
            return usage(format!("expected 2 elements, got {}", args.len()));
        }
        Ok((parse_poly(&args[0], n)?, parse_poly(&args[1], n)?))
    };
    match op {
        PolyOp::Add => {
            let (x, y) = binary(args)?;
            if !x.is_zero() && !y.is_zero() && x.degree() != y.degree() {
                return usage("cannot add elements of different degrees");
            }
            emit_poly(common, "add", &x.add(&y))
        }
        PolyOp::Mul => {
            let (x, y) = binary(args)?;
            emit_poly(common, "mul", &x.mul(&y))
        }
        PolyOp::Oracle => {
            let (x, y) = binary(args)?;
            emit_poly(common, "oracle", &oracle_mul(&x, &y))
        }
        PolyOp::D => emit_poly(common, "d", &unary(args)?.d()),
        PolyOp::Iota => emit_poly(common, "iota", &unary(args)?.iota()),
        PolyOp::F => {
            let x = unary(args)?;
            if x.level() < 2 {
                return usage("F needs level >= 2");
            }
            emit_poly(common, "f", &x.frobenius())
        }
        PolyOp::R => {
            let x = unary(args)?;
            if x.level() < 2 {
                return usage("R needs level >= 2");
            }
            emit_poly(common, "r", &x.restriction())
        }
        PolyOp::V => {
            let x = unary(args)?;
            if x.level() as u8 >= MAX_CLI_LEVEL {
                return usage(format!("V would exceed the level cap {MAX_CLI_LEVEL}"));
            }
            emit_poly(common, "v", &x.verschiebung())
        }
        PolyOp::Lambda => {
            if args.len() != n {
                return usage(format!("lambda expects {n} components, got {}", args.len()));
            }
            let w = witt_from_components(2, n, args)?;
            let e = poly_lambda(&w).or_else(from_witt_err)?;
            emit_poly(common, "lambda", &e)
        }
        PolyOp::Ghost => {
            let x = unary(args)?;
            let g = poly_lambda_ghost(&x).or_else(from_witt_err)?;
            if common.json {
                let payload = json!({
                    "op": "ghost",
                    "n": n,
                    "result": serde_json::to_value(&g).unwrap(),
                    "display": g.to_string(),
                });
                println!("{payload}");
            } else {
                println!("{g}");
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// table

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn v_name(i: usize) -> String {
    match i {
        0 => "[1]".into(),
        1 => "V(1)".into(),
        i => format!("V^{i}(1)"),
    }
}

fn dv_name(i: usize) -> String {
    match i {
        1 => "dV(1)".into(),
        i => format!("dV^{i}(1)"),
    }
}

/// Drops the "@ {…}" trailer from an element display.
fn body_of(s: String) -> String {
    match s.rsplit_once(" @ ") {
        Some((b, _)) => b.to_string(),
        None => s,
    }
}

fn p_pow(p: u32, k: usize) -> u64 {
    (p as u64).pow(k as u32)
}

fn cmd_table(kind: TableKind, common: &Common, log: bool) -> Result<(), Failure> {
    validate(common)?;
    let (p, n) = (common.p, common.n);
    match kind {
        TableKind::Groups => {
            let rank = if n == 1 {
                "ℤ".to_string()
            } else {
                format!("ℤ{}", superscript(n))
            };
            let mut torsion: Vec<u64> = (1..n).map(|i| p_pow(p, i)).collect();
            let mut deg1_parts: Vec<String> = torsion.iter().map(|m| format!("ℤ/{m}")).collect();
            let dlog = if log {
                let m = dlog_torsion_order(p, n);
                deg1_parts.push(format!("ℤ/{m}·dlog[{p}]"));
                Some(m)
            } else {
                None
            };
            let deg1 = if deg1_parts.is_empty() {
                "0".to_string()
            } else {
                deg1_parts.join(" ⊕ ")
            };
            if common.json {
                torsion.shrink_to_fit();
                let payload = json!({
                    "kind": "groups",
                    "p": p,
                    "n": n,
                    "log": log,
                    "deg0_rank": n,
                    "deg1_torsion": torsion,
                    "dlog_torsion": dlog,
                });
                println!("{payload}");
            } else {
                println!("deg0: {rank}; deg1: {deg1}");
            }
            Ok(())
        }
        TableKind::Products => {
            let mut rows: Vec<(String, String, String)> = Vec::new();
            for i in 0..n {
                for j in i..n {
                    let x = DrwElement::v_basis_elem(p, n, i);
                    let y = DrwElement::v_basis_elem(p, n, j);
                    rows.push((v_name(i), v_name(j), body_of(x.mul(&y).to_string())));
                }
            }
            for i in 0..n {
                for j in 1..n {
                    let x = DrwElement::v_basis_elem(p, n, i);
                    let y = DrwElement::dv_basis_elem(p, n, j);
                    rows.push((v_name(i), dv_name(j), body_of(x.mul(&y).to_string())));
                }
            }
            for i in 1..n {
                for j in i..n {
                    let x = DrwElement::dv_basis_elem(p, n, i);
                    let y = DrwElement::dv_basis_elem(p, n, j);
                    rows.push((dv_name(i), dv_name(j), body_of(x.mul(&y).to_string())));
                }
            }
            if log {
                let g = LogDrwElement::dlog_gen(p, n);
                for i in 0..n {
                    let x = LogDrwElement::from_base(DrwElement::v_basis_elem(p, n, i));
                    rows.push((
                        v_name(i),
                        format!("dlog[{p}]"),
                        body_of(x.mul(&g).to_string()),
                    ));
                }
            }
            emit_rows(common, "products", log, rows, |(a, b, r)| {
                (format!("{a}\u{b7}{b}"), r)
            })
        }
        TableKind::Operators => {
            let mut rows: Vec<(String, String, String)> = Vec::new();
            for i in 0..n {
                let x = DrwElement::v_basis_elem(p, n, i);
                rows.push(("d".into(), v_name(i), body_of(x.d().to_string())));
                rows.push(("iota".into(), v_name(i), body_of(x.iota().to_string())));
                if n >= 2 {
                    rows.push(("F".into(), v_name(i), body_of(x.frobenius().to_string())));
                    rows.push(("R".into(), v_name(i), body_of(x.restriction().to_string())));
                }
            }
            for i in 1..n {
                let x = DrwElement::dv_basis_elem(p, n, i);
                rows.push(("d".into(), dv_name(i), body_of(x.d().to_string())));
                rows.push(("iota".into(), dv_name(i), body_of(x.iota().to_string())));
                if n >= 2 {
                    rows.push(("F".into(), dv_name(i), body_of(x.frobenius().to_string())));
                    rows.push(("R".into(), dv_name(i), body_of(x.restriction().to_string())));
                }
            }
            if n >= 2 {
                // V maps level n-1 into level n.
                for i in 0..n - 1 {
                    let x = DrwElement::v_basis_elem(p, n - 1, i);
                    rows.push(("V".into(), v_name(i), body_of(x.verschiebung().to_string())));
                }
                for i in 1..n - 1 {
                    let x = DrwElement::dv_basis_elem(p, n - 1, i);
                    rows.push((
                        "V".into(),
                        dv_name(i),
                        body_of(x.verschiebung().to_string()),
                    ));
                }
            }
            if log {
                let g = LogDrwElement::dlog_gen(p, n);
                let name = format!("dlog[{p}]");
                rows.push(("d".into(), name.clone(), body_of(g.d().to_string())));
                rows.push(("iota".into(), name.clone(), body_of(g.iota().to_string())));
                if n >= 2 {
                    rows.push(("F".into(), name.clone(), body_of(g.frobenius().to_string())));
                    rows.push(("R".into(), name.clone(), body_of(g.restriction().to_string())));
                    let low = LogDrwElement::dlog_gen(p, n - 1);
                    rows.push(("V".into(), name, body_of(low.verschiebung().to_string())));
                }
            }
            emit_rows(common, "operators", log, rows, |(op, a, r)| {
                (format!("{op}({a})"), r)
            })
        }
    }
}

/// Prints rows as `lhs = rhs` lines or as a JSON row array.
fn emit_rows(
    common: &Common,
    kind: &str,
    log: bool,
    rows: Vec<(String, String, String)>,
    render: impl Fn((String, String, String)) -> (String, String),
) -> Result<(), Failure> {
    if common.json {
        let json_rows: Vec<serde_json::Value> = rows
            .into_iter()
            .map(|(a, b, r)| json!({ "lhs": a, "arg": b, "result": r }))
            .collect();
        let payload = json!({
            "kind": kind,
            "p": common.p,
            "n": common.n,
            "log": log,
            "rows": json_rows,
        });
        println!("{payload}");
    } else {
        for row in rows {
            let (lhs, rhs) = render(row);
            println!("{lhs} = {rhs}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check

struct Group {
    scope: String,
    reports: Vec<RelationReport>,
}

fn emit_check(
    common: &Common,
    suite: &str,
    seed: u64,
    fuel: u64,
    groups: Vec<Group>,
) -> Result<(), Failure> {
    let passed = groups.iter().all(|g| g.reports.iter().all(|r| r.passed()));
    if common.json {
        let json_groups: Vec<serde_json::Value> = groups
            .iter()
            .map(|g| {
                json!({
                    "scope": g.scope,
                    "reports": serde_json::to_value(&g.reports).unwrap(),
                })
            })
            .collect();
        let payload = json!({
            "suite": suite,
            "p": common.p,
            "n": common.n,
            "seed": seed,
            "fuel": fuel,
            "passed": passed,
            "groups": json_groups,
        });
        println!("{payload}");
    } else {
        let mut total = 0usize;
        let mut failed = 0usize;
        for g in &groups {
            for r in &g.reports {
                total += 1;
                if r.passed() {
                    println!("PASS {}/{} ({} cases)", g.scope, r.name, r.cases);
                } else {
                    failed += 1;
                    println!(
                        "FAIL {}/{} ({}/{} cases): {}",
                        g.scope,
                        r.name,
                        r.failures,
                        r.cases,
                        r.first_failure.as_deref().unwrap_or("")
                    );
                }
            }
        }
        if failed == 0 {
            println!("all {total} relations passed");
        } else {
            println!("{failed} of {total} relations FAILED");
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_check(
    suite: Suite,
    common: &Common,
    log: bool,
    seed: u64,
    fuel: u64,
    jmax: usize,
) -> Result<(), Failure> {
    validate(common)?;
    let (p, n) = (common.p, common.n);
    let mode = ExecMode::Parallel;
    match suite {
        Suite::Axioms => {
            let mut groups = vec![Group {
                scope: "witt".into(),
                reports: check_witt_identities(p, n, fuel, seed, mode),
            }];
            for k in 1..=n {
                groups.push(Group {
                    scope: format!("drw[n={k}]"),
                    reports: check_drw_axioms(p, k, fuel, seed, mode),
                });
            }
            if log {
                for k in 1..=n {
                    groups.push(Group {
                        scope: format!("log[n={k}]"),
                        reports: check_log_axioms(p, k, fuel, seed, mode),
                    });
                }
            }
            emit_check(common, "axioms", seed, fuel, groups)
        }
        Suite::Associativity => {
            if p != 2 {
                return usage("the associativity sweep is 2-typical (pass --p 2)");
            }
            if n < 4 {
                return usage("the associativity sweep needs --n >= 4");
            }
            let groups = vec![Group {
                scope: format!("poly[n={n}]"),
                reports: check_poly_assoc_sweep(n, fuel, seed, mode),
            }];
            emit_check(common, "associativity", seed, fuel, groups)
        }
        Suite::Filtration => {
            if n < 2 {
                return usage("the filtration suite needs --n >= 2");
            }
            let mut groups = Vec::new();
            for k in 2..=n {
                groups.push(Group {
                    scope: format!("fil[n={k}]"),
                    reports: check_filtration(p, k, fuel, seed, mode),
                });
            }
            emit_check(common, "filtration", seed, fuel, groups)
        }
        Suite::Pd => {
            if n < 2 {
                return usage("the pd suite needs --n >= 2");
            }
            let groups = vec![Group {
                scope: format!("pd[n<={n}]"),
                reports: check_pd_failure(n, fuel, seed, mode),
            }];
            emit_check(common, "pd", seed, fuel, groups)
        }
        Suite::Logcoeffs => {
            if jmax < 1 || jmax > 16 {
                return usage("--jmax must be in 1..=16");
            }
            let sol = solve_log_coefficients(jmax);
            let ok = drwitt::log::log_coefficient_congruences_hold(&sol.balanced)
                && drwitt::log::log_coefficient_congruences_hold(&sol.exact);
            let moduli: Vec<BigInt> = (1..=jmax).map(|j| BigInt::from(1u8) << j).collect();
            let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            if common.json {
                let payload = json!({
                    "suite": "logcoeffs",
                    "jmax": jmax,
                    "exact": strs(&sol.exact),
                    "canonical": strs(&sol.canonical),
                    "balanced": strs(&sol.balanced),
                    "moduli": strs(&moduli),
                    "passed": ok,
                });
                println!("{payload}");
            } else {
                println!(
                    "a = ({}) mod ({})",
                    strs(&sol.balanced).join(", "),
                    strs(&moduli).join(", ")
                );
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}
