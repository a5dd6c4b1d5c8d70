//! `psi`: command-line front end for the ψ-umbral engine.
//!
//! Every command prints one document (JSON by default) and exits with 0 on
//! success, 1 when a verification fails or a residual is nonzero, and 2 on a
//! usage or input error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use psi_umbral::expansion::{classical_bt, delta_bt, maclaurin_bt, psi_bt, Engine};
use psi_umbral::identities::{verify_operator_identity, GhwPair, IdentityParams, IDENTITIES};
use psi_umbral::integration::{jackson_definite, psi_integral, JacksonStop, QuadratureValue};
use psi_umbral::rational::{from_f64, int, parse_rational, to_f64};
use psi_umbral::sampling;
use psi_umbral::star::{exp_psi, non_associativity_witness, star_capped, star_power, star_power_applied, verify_star_axiom, StarParams, AXIOMS};
use psi_umbral::transport::{verify_transported, GradedBasis, TransportParams, TransportSuite};
use psi_umbral::{parse_expr, Error, GridFunction, Operand, Polynomial, PsiSequence, Rational, Verdict};

use output::Format;

const DEFAULT_CAP: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "psi", version, about = "Exact ψ-umbral calculus: expansions, identity suites, integration, star products")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a Bernoulli–Taylor engine and report terms, remainder and residual.
    Expand(ExpandArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// ψ/q-integrate a polynomial, exactly or by the Jackson series.
    Integrate(IntegrateArgs),
    /// Star products, star powers and the ψ-exponential.
    Star(StarArgs),
    /// Tabulate n_ψ, n_ψ! and n!/n_ψ!.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long, value_parser = ["classical", "delta", "maclaurin", "psi"])]
    engine: String,
    /// Polynomial in x, e.g. "x^3 - 1/2*x".
    #[arg(long = "fn", conflicts_with = "grid")]
    function: Option<String>,
    /// Comma-separated values f(0), f(1), ... (delta and maclaurin only).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value = "classical")]
    psi: String,
    #[arg(long, default_value = "0")]
    alpha: String,
    #[arg(long, default_value = "0")]
    point: String,
    #[arg(long, default_value_t = 2)]
    order: usize,
    #[arg(long, default_value = "0")]
    center: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name; see --list.
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// Print every suite name and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value = "classical")]
    psi: String,
    /// Highest basis degree checked (truncation for star suites).
    #[arg(long, default_value_t = 10)]
    degree: usize,
    /// Order n for telescoping and Bernoulli suites.
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value = "0")]
    center: String,
    #[arg(long, default_value = "0")]
    alpha: String,
    /// Operator pair for ghw and bernoulli-viskov: psi, classical:Y, difference, mixed, falling.
    #[arg(long)]
    pair: Option<String>,
    /// Basis for transport-* suites: monomial, falling, shifted:C, random:SEED, file:PATH.
    #[arg(long, default_value = "monomial")]
    basis: String,
    /// Use Q q_n = n q_{n-1} in transport suites.
    #[arg(long)]
    strict: bool,
    /// Random cases for star and transport suites.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IntegrateMode {
    Symbolic,
    Jackson,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[arg(long, value_enum)]
    mode: IntegrateMode,
    /// q in (0, 1); required for jackson, and selects the q-sequence in symbolic mode.
    #[arg(long)]
    q: Option<String>,
    /// ψ-sequence for symbolic mode when --q is absent.
    #[arg(long, default_value = "classical")]
    psi: String,
    #[arg(long, default_value = "0")]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long = "fn")]
    function: String,
    /// Absolute error target for jackson mode.
    #[arg(long, conflicts_with = "terms")]
    eps: Option<f64>,
    /// Fixed number of Jackson terms per endpoint.
    #[arg(long)]
    terms: Option<usize>,
}

#[derive(Args, Debug)]
struct StarArgs {
    #[command(subcommand)]
    op: StarOp,
    #[arg(long, global = true, default_value = "classical")]
    psi: String,
}

#[derive(Subcommand, Debug)]
enum StarOp {
    /// f *ψ g.
    Product {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// x^(n*ψ), or x *ψ (x *ψ (... *ψ g)) with --applied-to.
    Power {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        applied_to: Option<String>,
    },
    /// Σ_{n≤N} α^n x^n / n_ψ!.
    Exp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        truncation: usize,
    },
    /// (x *ψ x) *ψ x against x *ψ (x *ψ x).
    Associativity,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value = "classical")]
    psi: String,
    #[arg(long, default_value_t = 8)]
    n: usize,
}

/// A finished command: the document to print and the exit code.
struct Outcome {
    doc: Value,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match cap_from_env() {
        Ok(c) => c,
        Err(e) => return fail(cli.format, "config", e),
    };
    let name = match &cli.command {
        Command::Expand(_) => "expand",
        Command::Verify(_) => "verify",
        Command::Integrate(_) => "integrate",
        Command::Star(_) => "star",
        Command::Table(_) => "table",
    };
    let result = match &cli.command {
        Command::Expand(a) => expand(a, cap),
        Command::Verify(a) => verify(a, cap),
        Command::Integrate(a) => integrate(a, cap),
        Command::Star(a) => star(a, cap),
        Command::Table(a) => table(a, cap),
    };
    match result {
        Ok(out) => {
            print!("{}", output::render(&out.doc, cli.format));
            ExitCode::from(out.code)
        }
        Err(e) => fail(cli.format, name, e),
    }
}

fn fail(format: Format, command: &str, e: Error) -> ExitCode {
    let doc = json!({ "command": command, "error": e.to_string() });
    print!("{}", output::render(&doc, format));
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn cap_from_env() -> Result<usize, Error> {
    match std::env::var("PSI_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("PSI_CAP must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn rational(text: &str) -> Result<Rational, Error> {
    parse_rational(text)
}

fn within_cap(degree: usize, cap: usize) -> Result<(), Error> {
    if degree > cap {
        return Err(Error::CapExceeded { degree, cap });
    }
    Ok(())
}

fn poly(text: &str, cap: usize) -> Result<Polynomial, Error> {
    let p = parse_expr(text)?;
    within_cap(p.degree().unwrap_or(0), cap)?;
    Ok(p)
}

/// `classical`, `q:P/Q` or `file:PATH`.
fn psi_spec(text: &str) -> Result<PsiSequence, Error> {
    if text == "classical" {
        return Ok(PsiSequence::classical());
    }
    if let Some(q) = text.strip_prefix("q:") {
        return PsiSequence::q_deformed(rational(q)?);
    }
    if let Some(path) = text.strip_prefix("file:") {
        return PsiSequence::from_file(&PathBuf::from(path));
    }
    Err(Error::InvalidArgument(format!("unknown psi `{text}`; use classical, q:P/Q or file:PATH")))
}

fn grid(text: &str) -> Result<GridFunction, Error> {
    let values = text.split(',').map(|v| rational(v.trim())).collect::<Result<Vec<_>, _>>()?;
    GridFunction::new(values)
}

fn s(r: &Rational) -> String {
    r.to_string()
}

fn expand(a: &ExpandArgs, cap: usize) -> Result<Outcome, Error> {
    let engine = Engine::parse(&a.engine)?;
    within_cap(a.order, cap)?;
    let alpha = rational(&a.alpha)?;
    let point = rational(&a.point)?;
    let operand = match (&a.function, &a.grid) {
        (Some(f), _) => Operand::Poly(poly(f, cap)?),
        (None, Some(g)) => Operand::Grid(grid(g)?),
        (None, None) => return Err(Error::InvalidArgument("one of --fn or --grid is required".into())),
    };
    let needs_poly = |op: &Operand| match op {
        Operand::Poly(p) => Ok(p.clone()),
        Operand::Grid(_) => Err(Error::InvalidArgument(format!("engine {} needs --fn", a.engine))),
    };
    let mut inputs = json!({
        "engine": a.engine,
        "alpha": s(&alpha),
        "point": s(&point),
        "order": a.order,
    });
    match &operand {
        Operand::Poly(p) => inputs["fn"] = json!(p.to_string()),
        Operand::Grid(g) => inputs["grid"] = json!(g.values().iter().map(s).collect::<Vec<_>>()),
    }
    let report = match engine {
        Engine::Classical => classical_bt(&needs_poly(&operand)?, &alpha, &point, a.order),
        Engine::Delta => delta_bt(&operand, &point, a.order)?,
        Engine::Maclaurin => maclaurin_bt(&operand, &alpha, a.order)?,
        Engine::Psi => {
            let psi = psi_spec(&a.psi)?;
            let center = rational(&a.center)?;
            inputs["psi"] = json!(psi.label());
            inputs["center"] = json!(s(&center));
            psi_bt(&needs_poly(&operand)?, &alpha, &point, a.order, &psi, &center)?
        }
    };
    let code = if report.is_exact() { 0 } else { 1 };
    let doc = json!({
        "command": "expand",
        "inputs": inputs,
        "result": report,
        "residual": s(&report.residual),
    });
    Ok(Outcome { doc, code })
}

/// Every suite name reachable from `verify --suite`.
fn all_suites() -> Vec<String> {
    let mut names: Vec<String> = IDENTITIES.iter().map(|s| s.to_string()).collect();
    names.extend(AXIOMS.iter().map(|s| s.to_string()));
    names.extend(TransportSuite::ALL.iter().map(|s| format!("transport-{}", s.name())));
    names
}

fn pair_spec(text: &str, psi: &PsiSequence, center: &Rational) -> Result<GhwPair, Error> {
    Ok(match text {
        "psi" => GhwPair::Psi { psi: psi.clone(), center: center.clone() },
        "difference" => GhwPair::Difference,
        "mixed" => GhwPair::MixedPsi { psi: psi.clone(), center: center.clone() },
        "falling" => GhwPair::FallingTransport { psi: psi.clone() },
        other => match other.strip_prefix("classical") {
            Some("") => GhwPair::Classical { y: int(0) },
            Some(rest) if rest.starts_with(':') => GhwPair::Classical { y: rational(&rest[1..])? },
            _ => return Err(Error::InvalidArgument(format!("unknown pair `{other}`"))),
        },
    })
}

fn basis_spec(text: &str, top: usize) -> Result<GradedBasis, Error> {
    if text == "monomial" {
        return GradedBasis::monomial(top);
    }
    if text == "falling" {
        return GradedBasis::falling(top);
    }
    if let Some(c) = text.strip_prefix("shifted:") {
        return GradedBasis::shifted(&rational(c)?, top);
    }
    if let Some(seed) = text.strip_prefix("random:") {
        let seed = seed.parse().map_err(|_| Error::InvalidArgument(format!("bad seed `{seed}`")))?;
        return GradedBasis::random_monic(&mut sampling::rng(seed), top);
    }
    if let Some(path) = text.strip_prefix("file:") {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
        return GradedBasis::parse(&body);
    }
    Err(Error::InvalidArgument(format!("unknown basis `{text}`")))
}

fn verdict_doc(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn verify(a: &VerifyArgs, cap: usize) -> Result<Outcome, Error> {
    if a.list {
        let doc = json!({ "command": "verify", "inputs": { "list": true }, "result": { "suites": all_suites() }, "residual": null });
        return Ok(Outcome { doc, code: 0 });
    }
    let suite = a.suite.as_deref().expect("clap requires --suite without --list");
    within_cap(a.degree + a.order + 2, cap)?;
    let psi = psi_spec(&a.psi)?;
    let center = rational(&a.center)?;
    let alpha = rational(&a.alpha)?;
    let mut inputs = json!({
        "suite": suite,
        "psi": psi.label(),
        "degree": a.degree,
    });
    let verdict = if IDENTITIES.contains(&suite) {
        let pair = a.pair.as_deref().map(|p| pair_spec(p, &psi, &center)).transpose()?;
        inputs["order"] = json!(a.order);
        inputs["center"] = json!(s(&center));
        inputs["alpha"] = json!(s(&alpha));
        if let Some(p) = &pair {
            inputs["pair"] = json!(p.label());
        }
        let params = IdentityParams { psi, center, alpha, order: a.order, max_degree: a.degree, pair };
        verify_operator_identity(suite, &params)?
    } else if AXIOMS.contains(&suite) {
        inputs["cases"] = json!(a.cases);
        inputs["seed"] = json!(a.seed);
        let params = StarParams {
            psi,
            truncation: a.degree,
            cases: a.cases,
            seed: a.seed,
            ..Default::default()
        };
        verify_star_axiom(suite, &params)?
    } else if let Some(name) = suite.strip_prefix("transport-") {
        let kind = TransportSuite::parse(name)?;
        let basis = basis_spec(&a.basis, a.degree + 1)?;
        inputs["basis"] = json!(a.basis);
        inputs["order"] = json!(a.order);
        inputs["strict"] = json!(a.strict);
        let params = TransportParams { order: a.order, cases: a.cases, seed: a.seed, strict: a.strict };
        verify_transported(&basis, &psi, kind, &params)?
    } else {
        return Err(Error::UnknownIdentity(suite.to_string()));
    };
    let code = if verdict.passed { 0 } else { 1 };
    let doc = json!({
        "command": "verify",
        "inputs": inputs,
        "result": verdict_doc(&verdict),
        "residual": null,
    });
    Ok(Outcome { doc, code })
}

fn integrate(a: &IntegrateArgs, cap: usize) -> Result<Outcome, Error> {
    let f = poly(&a.function, cap)?;
    let from = rational(&a.from)?;
    let to = rational(&a.to)?;
    let mut inputs = json!({
        "mode": match a.mode { IntegrateMode::Symbolic => "symbolic", IntegrateMode::Jackson => "jackson" },
        "fn": f.to_string(),
        "from": s(&from),
        "to": s(&to),
    });
    let q = a.q.as_deref().map(rational).transpose()?;
    if let Some(q) = &q {
        inputs["q"] = json!(s(q));
    }
    let doc = match a.mode {
        IntegrateMode::Symbolic => {
            let value = match &q {
                Some(q) => match jackson_definite(&f, &from, &to, q, JacksonStop::Symbolic)?.value {
                    QuadratureValue::Exact(v) => v,
                    QuadratureValue::Approx(_) => unreachable!("symbolic mode is exact"),
                },
                None => {
                    let psi = psi_spec(&a.psi)?;
                    inputs["psi"] = json!(psi.label());
                    psi_integral(&f, &psi, &int(0), &from, &to)?
                }
            };
            json!({
                "command": "integrate",
                "inputs": inputs,
                "result": { "mode": "symbolic", "value": s(&value), "terms_used": 0 },
                "residual": "0",
            })
        }
        IntegrateMode::Jackson => {
            let q = q.ok_or_else(|| Error::InvalidArgument("jackson mode needs --q".into()))?;
            let stop = match (a.eps, a.terms) {
                (Some(e), None) => {
                    inputs["eps"] = json!(e);
                    JacksonStop::Tolerance(e)
                }
                (None, Some(k)) => {
                    inputs["terms"] = json!(k);
                    JacksonStop::Terms(k)
                }
                (None, None) => {
                    inputs["eps"] = json!(1e-12);
                    JacksonStop::Tolerance(1e-12)
                }
                (Some(_), Some(_)) => unreachable!("clap rejects --eps with --terms"),
            };
            let r = jackson_definite(&f, &from, &to, &q, stop)?;
            let QuadratureValue::Approx(value) = r.value else { unreachable!("numeric mode") };
            let tail = r.tail_bound.expect("numeric mode reports a bound");
            let exact = match jackson_definite(&f, &from, &to, &q, JacksonStop::Symbolic)?.value {
                QuadratureValue::Exact(v) => v,
                QuadratureValue::Approx(_) => unreachable!("symbolic mode is exact"),
            };
            let error = from_f64(value).map(|v| to_f64(&(v - &exact)).abs()).unwrap_or(f64::NAN);
            let within = error <= tail;
            let doc = json!({
                "command": "integrate",
                "inputs": inputs,
                "result": {
                    "mode": "jackson",
                    "value": format!("{value}"),
                    "terms_used": r.terms_used,
                    "tail_bound": format!("{tail:e}"),
                    "closed_form": s(&exact),
                    "error": format!("{error:e}"),
                    "within_bound": within,
                },
                "residual": null,
            });
            return Ok(Outcome { doc, code: if within { 0 } else { 1 } });
        }
    };
    Ok(Outcome { doc, code: 0 })
}

fn star(a: &StarArgs, cap: usize) -> Result<Outcome, Error> {
    let psi = psi_spec(&a.psi)?;
    let (inputs, result) = match &a.op {
        StarOp::Product { f, g } => {
            let (f, g) = (poly(f, cap)?, poly(g, cap)?);
            let out = star_capped(&f, &g, &psi, cap)?;
            (json!({ "op": "product", "f": f.to_string(), "g": g.to_string() }), json!({ "value": out.to_string() }))
        }
        StarOp::Power { n, applied_to } => {
            within_cap(*n, cap)?;
            match applied_to {
                None => (json!({ "op": "power", "n": n }), json!({ "value": star_power(*n, &psi)?.to_string() })),
                Some(g) => {
                    let g = poly(g, cap)?;
                    within_cap(n + g.degree().unwrap_or(0), cap)?;
                    let out = star_power_applied(*n, &psi, &g)?;
                    (
                        json!({ "op": "power", "n": n, "applied_to": g.to_string() }),
                        json!({ "value": out.to_string() }),
                    )
                }
            }
        }
        StarOp::Exp { alpha, truncation } => {
            within_cap(*truncation, cap)?;
            let alpha = rational(alpha)?;
            let series = exp_psi(&alpha, &psi, *truncation)?;
            (
                json!({ "op": "exp", "alpha": s(&alpha), "truncation": truncation }),
                json!({ "value": series.poly.to_string(), "truncation": series.truncation }),
            )
        }
        StarOp::Associativity => {
            let (left, right) = non_associativity_witness(&psi)?;
            (
                json!({ "op": "associativity" }),
                json!({ "left": left.to_string(), "right": right.to_string(), "associative": left == right }),
            )
        }
    };
    let mut inputs = inputs;
    inputs["psi"] = json!(psi.label());
    let doc = json!({ "command": "star", "inputs": inputs, "result": result, "residual": null });
    Ok(Outcome { doc, code: 0 })
}

fn table(a: &TableArgs, cap: usize) -> Result<Outcome, Error> {
    within_cap(a.n, cap)?;
    let psi = psi_spec(&a.psi)?;
    let rows = (0..=a.n)
        .map(|n| {
            Ok(json!({
                "n": n,
                "psi": s(&psi.value(n)?),
                "psi_factorial": s(&psi.factorial(n)?),
                "star_coefficient": s(&psi.star_coefficient(n)?),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let doc = json!({
        "command": "table",
        "inputs": { "psi": psi.label(), "n": a.n },
        "result": { "rows": rows },
        "residual": null,
    });
    Ok(Outcome { doc, code: 0 })
}
