//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;

use psi_umbral::expansion::{classical_bt, delta_bt, maclaurin_bt, psi_bt, psi_bt_literal_sum};
use psi_umbral::identities::{verify_operator_identity, GhwPair, IdentityParams};
use psi_umbral::integration::{
    cauchy_kernel, iterated_single_step, jackson_integrate, per_partes_check, psi_antiderivative, JacksonStop,
    KernelMode, QuadratureValue,
};
use psi_umbral::operator::psi_derivative;
use psi_umbral::rational::{from_f64, int, rat, to_f64};
use psi_umbral::sampling::{self, standard_psi_set, SuiteRng};
use psi_umbral::star::{non_associativity_witness, verify_star_axiom, StarParams};
use psi_umbral::{GridFunction, Operand, Polynomial, PsiSequence, Rational};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: usize, title: &str, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let ms = start.elapsed().as_millis();
    match &outcome {
        Ok(detail) => println!("PASS  criterion {id:>2}  {title} ({detail}; {ms} ms)"),
        Err(detail) => println!("FAIL  criterion {id:>2}  {title}: {detail} ({ms} ms)"),
    }
    outcome.is_ok()
}

/// Rationals with numerator and denominator bounded by 20.
fn small(rng: &mut SuiteRng) -> Rational {
    sampling::rational(rng, 20)
}

fn random_poly(rng: &mut SuiteRng, max_degree: usize) -> Polynomial {
    sampling::polynomial(rng, max_degree, 20)
}

fn random_order(rng: &mut SuiteRng, max: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..=max)
}

fn ghw() -> Outcome {
    let set = standard_psi_set(2024);
    let start = Instant::now();
    for psi in &set {
        let params = IdentityParams {
            max_degree: 12,
            pair: Some(GhwPair::Psi { psi: psi.clone(), center: int(0) }),
            ..Default::default()
        };
        let v = verify_operator_identity("ghw", &params).map_err(|e| e.to_string())?;
        ensure(v.passed, || format!("{}: {:?}", psi.label(), v.counterexample))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} sequences, m <= 12, {elapsed:?}", set.len()))
}

fn bernoulli() -> Outcome {
    let mut pairs = vec![GhwPair::Classical { y: int(2) }, GhwPair::Difference];
    for psi in standard_psi_set(2024) {
        pairs.push(GhwPair::Psi { psi, center: int(0) });
    }
    pairs.push(GhwPair::FallingTransport { psi: PsiSequence::classical() });
    pairs.push(GhwPair::FallingTransport { psi: PsiSequence::q_deformed(rat(1, 2)).unwrap() });
    let start = Instant::now();
    for pair in &pairs {
        let params = IdentityParams { order: 6, max_degree: 10, pair: Some(pair.clone()), ..Default::default() };
        let v = verify_operator_identity("bernoulli-viskov", &params).map_err(|e| e.to_string())?;
        ensure(v.passed, || format!("{}: {:?}", pair.label(), v.counterexample))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{} pairs, n <= 6, {elapsed:?}", pairs.len()))
}

fn classical_engine() -> Outcome {
    let r = classical_bt(&Polynomial::from_ints(&[0, 0, 0, 1]), &int(1), &int(2), 2);
    ensure(r.terms == vec![int(1), int(3), int(3)], || format!("terms {:?}", r.terms))?;
    ensure(r.remainder == int(1) && r.reconstruction == int(8), || format!("{r:?}"))?;
    let mut rng = sampling::rng(3);
    for _ in 0..100 {
        let f = random_poly(&mut rng, 10);
        let (a, x) = (small(&mut rng), small(&mut rng));
        let n = random_order(&mut rng, 12);
        let r = classical_bt(&f, &a, &x, n);
        ensure(r.is_exact(), || format!("residual {} for f = {f}", r.residual))?;
    }
    Ok("fixed case 1,3,3 + 1 = 8; 100 random residuals 0".into())
}

fn delta_engines() -> Outcome {
    let x2 = Operand::Poly(Polynomial::from_ints(&[0, 0, 1]));
    let r = maclaurin_bt(&x2, &int(2), 1).map_err(|e| e.to_string())?;
    let partial: Rational = r.terms.iter().sum();
    ensure(partial == int(2) && r.remainder == int(-2), || format!("{r:?}"))?;
    ensure(r.reconstruction.is_zero() && r.is_exact(), || format!("{r:?}"))?;
    let mut rng = sampling::rng(4);
    for case in 0..100 {
        let f = random_poly(&mut rng, 10);
        let n = random_order(&mut rng, 12);
        let x = random_order(&mut rng, 10) as i64;
        let a = 1 + random_order(&mut rng, 9) as i64;
        let operand = if case % 2 == 0 { Operand::Poly(f) } else { Operand::Grid(GridFunction::sample(&f, 10)) };
        let d = delta_bt(&operand, &int(x), n).map_err(|e| e.to_string())?;
        ensure(d.is_exact(), || format!("delta residual {} on case {case}", d.residual))?;
        let m = maclaurin_bt(&operand, &int(a), n).map_err(|e| e.to_string())?;
        ensure(m.is_exact(), || format!("maclaurin residual {} on case {case}", m.residual))?;
    }
    Ok("fixed case 2 - 2 = 0; 100 random polynomial/grid cases".into())
}

fn psi_engine() -> Outcome {
    let set = standard_psi_set(2024);
    let mut rng = sampling::rng(5);
    let mut runs = 0;
    for psi in &set {
        for _ in 0..20 {
            let f = random_poly(&mut rng, 10);
            let n = random_order(&mut rng, 12);
            let (a, x, beta) = (small(&mut rng), small(&mut rng), small(&mut rng));
            let r = psi_bt(&f, &a, &x, n, psi, &beta).map_err(|e| e.to_string())?;
            ensure(r.is_exact(), || format!("{} residual {} for f = {f}", psi.label(), r.residual))?;
            runs += 1;
        }
    }
    let classical = PsiSequence::classical();
    for _ in 0..50 {
        let f = random_poly(&mut rng, 10);
        let n = random_order(&mut rng, 12);
        let (a, x) = (small(&mut rng), small(&mut rng));
        let c = classical_bt(&f, &a, &x, n);
        let p = psi_bt(&f, &a, &x, n, &classical, &int(0)).map_err(|e| e.to_string())?;
        ensure(p.reconstruction == c.reconstruction, || format!("totals differ for f = {f}"))?;
        let p = psi_bt(&f, &a, &x, n, &classical, &x).map_err(|e| e.to_string())?;
        ensure(p.terms == c.terms && p.remainder == c.remainder, || format!("terms differ for f = {f}"))?;
    }
    let q = PsiSequence::q_deformed(rat(1, 2)).unwrap();
    let f = Polynomial::from_ints(&[0, 0, 1]);
    let literal = psi_bt_literal_sum(&f, &int(0), 2, &q).map_err(|e| e.to_string())?;
    let factor = int(2) / q.value(2).unwrap();
    ensure(literal != f, || "literal reading unexpectedly reproduces f".into())?;
    ensure(literal == f.scale(&factor), || format!("literal sum {literal}, expected {factor} x^2"))?;
    Ok(format!("{runs} runs exact; 50 classical agreements; literal sum = {literal} = (2/2_ψ) x^2"))
}

fn star_suite() -> Outcome {
    let mut total = 0;
    for psi in standard_psi_set(2024) {
        for (axiom, truncation) in
            [("leibniz", 8), ("obs-c", 16), ("star-power-law", 8), ("obs-a", 16), ("obs-d", 8), ("obs-f", 8)]
        {
            let params = StarParams { psi: psi.clone(), truncation, cases: 100, seed: 6, ..Default::default() };
            let v = verify_star_axiom(axiom, &params).map_err(|e| e.to_string())?;
            ensure(v.passed, || format!("{axiom} under {}: {:?}", psi.label(), v.counterexample))?;
            total += v.cases;
        }
    }
    let (left, right) = non_associativity_witness(&PsiSequence::q_deformed(rat(1, 2)).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(left == Polynomial::monomial(rat(64, 21), 3), || format!("left {left}"))?;
    ensure(right == Polynomial::monomial(rat(16, 7), 3), || format!("right {right}"))?;
    Ok(format!("{total} exact checks; witness {left} vs {right}"))
}

fn integration() -> Outcome {
    let set = standard_psi_set(2024);
    for psi in &set {
        for m in 0..=16 {
            for beta in [int(0), rat(-3, 4), int(5)] {
                let f = Polynomial::monomial(Rational::one(), m);
                let back = psi_derivative(&psi_antiderivative(&f, psi, &beta).unwrap(), psi, &beta).unwrap();
                ensure(back == f, || format!("∂ψ∫ψ x^{m} = {back} under {}", psi.label()))?;
            }
        }
    }
    let mut rng = sampling::rng(7);
    for i in 0..100 {
        let psi = &set[i % set.len()];
        let (f, g) = (random_poly(&mut rng, 6), random_poly(&mut rng, 6));
        let (a, b) = (small(&mut rng), small(&mut rng));
        let r = per_partes_check(&f, &g, psi, &a, &b).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("per partes {} vs {} for f = {f}, g = {g}", r.lhs, r.rhs))?;
    }
    for _ in 0..20 {
        // an absolute 1e-12 needs values well inside f64 resolution, so |z| <= 1
        let f = sampling::polynomial(&mut rng, 5, 3);
        let den = 1 + random_order(&mut rng, 8) as i64;
        let z = rat(rng.gen_range(-den..=den), den);
        let q = rat(1 + random_order(&mut rng, 17) as i64, 20);
        let r = jackson_integrate(&f, &z, &q, JacksonStop::Tolerance(1e-12)).map_err(|e| e.to_string())?;
        let QuadratureValue::Approx(v) = r.value else { return Err("numeric mode returned exact".into()) };
        let QuadratureValue::Exact(exact) = jackson_integrate(&f, &z, &q, JacksonStop::Symbolic).unwrap().value
        else {
            return Err("symbolic mode returned numeric".into());
        };
        let err = to_f64(&(from_f64(v).unwrap() - &exact)).abs();
        let bound = r.tail_bound.unwrap();
        ensure(err <= bound, || format!("error {err:e} above bound {bound:e}"))?;
        ensure(bound <= 1e-12 && err <= 1e-10, || format!("error {err:e}, bound {bound:e}"))?;
    }
    let x2 = Polynomial::monomial(Rational::one(), 2);
    let near = jackson_integrate(&x2, &int(1), &rat(999, 1000), JacksonStop::Tolerance(1e-9)).unwrap();
    let QuadratureValue::Approx(v) = near.value else { return Err("numeric mode returned exact".into()) };
    ensure((v - 1.0 / 3.0).abs() < 1e-3, || format!("q = 0.999 gives {v}"))?;
    Ok(format!("right inverse to deg 16; 100 per-partes; Jackson bounds hold; q=0.999 gives {v:.6}"))
}

fn kernels() -> Outcome {
    let mut rng = sampling::rng(8);
    let mut checks = 0;
    for _ in 0..10 {
        let f = random_poly(&mut rng, 6);
        let base = small(&mut rng);
        let ibase = int(random_order(&mut rng, 10) as i64 - 5);
        let grid = Operand::Grid(GridFunction::sample(&f, 8));
        for k in 1..=5 {
            let poly = Operand::Poly(f.clone());
            for (input, base, mode) in [
                (&poly, &base, KernelMode::Integral),
                (&poly, &ibase, KernelMode::Summation),
                (&grid, &int(0), KernelMode::Summation),
            ] {
                let lhs = cauchy_kernel(input, k, base, mode).map_err(|e| e.to_string())?;
                let rhs = iterated_single_step(input, k, base, mode).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{mode:?} k = {k} differs for f = {f}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} kernel/iteration comparisons"))
}

fn historical() -> Outcome {
    let params = IdentityParams { max_degree: 8, ..Default::default() };
    let eps0 = verify_operator_identity("hist-eps0", &params).map_err(|e| e.to_string())?;
    ensure(eps0.passed, || format!("{:?}", eps0.counterexample))?;
    let printed = verify_operator_identity("hist-div-diff-printed", &params).map_err(|e| e.to_string())?;
    let cex = printed.counterexample.clone().ok_or("printed expansion unexpectedly passed")?;
    ensure(cex.degree == Some(2), || format!("counterexample at {:?}", cex.degree))?;
    let corrected = verify_operator_identity("hist-div-diff", &params).map_err(|e| e.to_string())?;
    ensure(corrected.passed, || format!("{:?}", corrected.counterexample))?;
    Ok(format!("printed form fails at m = 2 ({} vs {})", cex.lhs, cex.rhs))
}

fn psi_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_psi"))
        .args(args)
        .env_remove("PSI_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).map_err(|e| e.to_string())?))
}

fn cli() -> Outcome {
    let expand = ["expand", "--engine", "classical", "--fn", "x^3", "--alpha", "1", "--point", "2", "--order", "2"];
    let (code, text) = psi_cli(&expand)?;
    ensure(code == 0, || format!("expand exit {code}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(doc["result"]["terms"] == serde_json::json!(["1", "3", "3"]), || format!("terms {}", doc["result"]["terms"]))?;
    ensure(doc["result"]["remainder"] == "1" && doc["residual"] == "0", || text.clone())?;
    let (again_code, again) = psi_cli(&expand)?;
    ensure(again_code == 0 && again == text, || "expand output differs between runs".into())?;

    let verify = ["verify", "--suite", "ghw", "--psi", "q:1/2", "--degree", "10"];
    let (code, text) = psi_cli(&verify)?;
    ensure(code == 0, || format!("verify exit {code}: {text}"))?;
    let (_, again) = psi_cli(&verify)?;
    ensure(again == text, || "verify output differs between runs".into())?;

    let integrate =
        ["integrate", "--mode", "jackson", "--q", "1/2", "--from", "0", "--to", "1", "--fn", "x^2", "--eps", "1e-12"];
    let (code, text) = psi_cli(&integrate)?;
    ensure(code == 0, || format!("integrate exit {code}: {text}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let value: f64 = doc["result"]["value"].as_str().unwrap_or("").parse().map_err(|_| text.clone())?;
    let bound: f64 = doc["result"]["tail_bound"].as_str().unwrap_or("").parse().map_err(|_| text.clone())?;
    ensure((value - 4.0 / 7.0).abs() <= 1e-10 && bound <= 1e-12, || text.clone())?;
    ensure(doc["result"]["value"].as_str().unwrap().starts_with("0.5714285714"), || text.clone())?;
    let (_, again) = psi_cli(&integrate)?;
    ensure(again == text, || "integrate output differs between runs".into())?;
    Ok(format!("3 documented commands; byte-identical reruns; jackson value {value}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("GHW commutator on the ψ set", ghw),
        ("Bernoulli identity on four representations", bernoulli),
        ("classical Bernoulli–Taylor", classical_engine),
        ("Δ and backward-difference expansions", delta_engines),
        ("ψ Bernoulli–Taylor", psi_engine),
        ("star product suite", star_suite),
        ("integration", integration),
        ("Cauchy kernels", kernels),
        ("historical expansions", historical),
        ("command line", cli),
    ];
    let mut failed = 0;
    for (i, (title, body)) in criteria.into_iter().enumerate() {
        if !run(i + 1, title, body) {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
