//! Bernoulli–Taylor expansions with Cauchy-type remainders.
//!
//! Every engine returns an [`ExpansionReport`] whose `residual` is
//! `target - (Σ terms + remainder)`, computed exactly.
//!
//! * [`classical_bt`]: `f(x) = Σ (x-α)^k f^(k)(α)/k! + ∫_α^x (x-t)^n/n! f^(n+1)(t) dt`.
//! * [`delta_bt`]: `f(x) = Σ x^(k)/k! (Δ^k f)(0) + Σ_{r<x} (x-r-1)^(n)/n! (Δ^(n+1) f)(r)`,
//!   falling powers throughout.
//! * [`maclaurin_bt`]: terms `(-1)^(k+1) α^(k)/k! (∇^k f)(α)` and remainder
//!   `(-1)^n Σ_{r<α} r^(n)/n! (∇^(n+1) f)(r+1)`. These add up to `-f(0)`, which is the target.
//! * [`psi_bt`]: the two-endpoint ψ-identity
//!   `G(x) - G(α) = (-1)^n/n! ∫_α^x [ẑ_ψ^n ∂_ψ^(n+1) f](t) d_ψt` with
//!   `G = Σ_k (-1)^k/k! ẑ_ψ^k ∂_ψ^k f`, everything around one center β.
//!   Since the `k = 0` term of `G` is `f`, the report's target is `f(x)` with
//!   term 0 equal to `f(α)` and term `k ≥ 1` equal to `T_k(α) - T_k(x)`.
//!
//! [`psi_bt_literal_sum`] is the termwise reading
//! `Σ (1/k!) (x-α)^(k*ψ) *ψ f^(k)(α)`; it does not reproduce `f` once `ψ` is deformed.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{psi_derivative, psi_multiply, Operand, OperatorSpec};
use crate::poly::{GridFunction, Polynomial};
use crate::psi::PsiSequence;
use crate::rational::{as_i64, binomial, factorial, falling_power, int, pow, serde_string, serde_string_vec, sign, Rational};
use crate::integration::psi_antiderivative;
use crate::star::star_centered;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Classical,
    Delta,
    Maclaurin,
    Psi,
}

impl Engine {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "classical" => Ok(Engine::Classical),
            "delta" => Ok(Engine::Delta),
            "maclaurin" => Ok(Engine::Maclaurin),
            "psi" => Ok(Engine::Psi),
            other => Err(Error::InvalidArgument(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub engine: Engine,
    pub f: String,
    #[serde(with = "serde_string")]
    pub alpha: Rational,
    #[serde(with = "serde_string")]
    pub point: Rational,
    pub order: usize,
    /// `terms[k]` for `k = 0..=order`.
    #[serde(with = "serde_string_vec")]
    pub terms: Vec<Rational>,
    #[serde(with = "serde_string")]
    pub remainder: Rational,
    /// The value the terms and remainder must add up to.
    #[serde(with = "serde_string")]
    pub target: Rational,
    #[serde(with = "serde_string")]
    pub reconstruction: Rational,
    #[serde(with = "serde_string")]
    pub residual: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiDetails>,
}

/// Extra data of a ψ run: the ψ label, the center, and `G` and its terms at both endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiDetails {
    pub psi: String,
    #[serde(with = "serde_string")]
    pub center: Rational,
    #[serde(with = "serde_string")]
    pub g_point: Rational,
    #[serde(with = "serde_string")]
    pub g_alpha: Rational,
    #[serde(with = "serde_string_vec")]
    pub terms_at_point: Vec<Rational>,
    #[serde(with = "serde_string_vec")]
    pub terms_at_alpha: Vec<Rational>,
}

impl ExpansionReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        engine: Engine,
        f: String,
        alpha: Rational,
        point: Rational,
        order: usize,
        terms: Vec<Rational>,
        remainder: Rational,
        target: Rational,
    ) -> Self {
        let reconstruction = terms.iter().fold(remainder.clone(), |acc, t| acc + t);
        let residual = &target - &reconstruction;
        ExpansionReport {
            engine,
            f,
            alpha,
            point,
            order,
            terms,
            remainder,
            target,
            reconstruction,
            residual,
            psi: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn classical_bt(f: &Polynomial, alpha: &Rational, point: &Rational, n: usize) -> ExpansionReport {
    let h = point - alpha;
    let terms = (0..=n)
        .map(|k| pow(&h, k) * f.nth_derivative(k).evaluate(alpha) / factorial(k))
        .collect();
    // (point - t)^n / n! as a polynomial in t
    let kernel = Polynomial::new(vec![point.clone(), -Rational::one()]).pow(n).scale(&(Rational::one() / factorial(n)));
    let remainder = (&kernel * &f.nth_derivative(n + 1)).integral(alpha, point);
    ExpansionReport::new(
        Engine::Classical,
        f.to_string(),
        alpha.clone(),
        point.clone(),
        n,
        terms,
        remainder,
        f.evaluate(point),
    )
}

fn nonneg_int(r: &Rational, what: &str) -> Result<i64> {
    match as_i64(r) {
        Some(v) if v >= 0 => Ok(v),
        Some(v) => Err(Error::InvalidArgument(format!("{what} must be nonnegative, got {v}"))),
        None => Err(Error::NonIntegerGridArg(r.to_string())),
    }
}

/// `Δ^k f (r)` or `∇^k f (r)` pointwise.
trait Differences {
    fn value(&self, r: i64) -> Result<Rational>;
    fn forward(&self, k: usize, r: i64) -> Result<Rational>;
    fn backward(&self, k: usize, r: i64) -> Result<Rational>;
    fn describe(&self) -> String;
}

impl Differences for Polynomial {
    fn value(&self, r: i64) -> Result<Rational> {
        Ok(self.evaluate(&int(r)))
    }

    fn forward(&self, k: usize, r: i64) -> Result<Rational> {
        let mut p = self.clone();
        for _ in 0..k {
            p = OperatorSpec::ForwardDifference.apply(&p)?;
        }
        Ok(p.evaluate(&int(r)))
    }

    fn backward(&self, k: usize, r: i64) -> Result<Rational> {
        let mut p = self.clone();
        for _ in 0..k {
            p = OperatorSpec::BackwardDifference.apply(&p)?;
        }
        Ok(p.evaluate(&int(r)))
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Differences for GridFunction {
    fn value(&self, r: i64) -> Result<Rational> {
        self.get(r).cloned()
    }

    fn forward(&self, k: usize, r: i64) -> Result<Rational> {
        (0..=k).try_fold(Rational::zero(), |acc, j| {
            Ok(acc + binomial(k, j) * sign(k - j) * self.get(r + j as i64)?)
        })
    }

    fn backward(&self, k: usize, r: i64) -> Result<Rational> {
        (0..=k).try_fold(Rational::zero(), |acc, j| Ok(acc + binomial(k, j) * sign(j) * self.get(r - j as i64)?))
    }

    fn describe(&self) -> String {
        let values: Vec<String> = self.values().iter().map(ToString::to_string).collect();
        format!("grid[{}..={}]: [{}]", self.start(), self.end(), values.join(", "))
    }
}

fn with_operand<T>(f: &Operand, run: impl FnOnce(&dyn Differences) -> Result<T>) -> Result<T> {
    match f {
        Operand::Poly(p) => run(p),
        Operand::Grid(g) => run(g),
    }
}

/// Δ-calculus expansion at the nonnegative integer `point`.
pub fn delta_bt(f: &Operand, point: &Rational, n: usize) -> Result<ExpansionReport> {
    let x = nonneg_int(point, "point")?;
    with_operand(f, |f| {
        let mut terms = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let c = falling_power(point, k);
            // x^(k) vanishes for k > x; skip so grids only need 0..=x
            terms.push(if c.is_zero() { c } else { c * f.forward(k, 0)? / factorial(k) });
        }
        let mut remainder = Rational::zero();
        for r in 0..x {
            let c = falling_power(&int(x - r - 1), n);
            if !c.is_zero() {
                remainder += c * f.forward(n + 1, r)? / factorial(n);
            }
        }
        Ok(ExpansionReport::new(
            Engine::Delta,
            f.describe(),
            Rational::zero(),
            point.clone(),
            n,
            terms,
            remainder,
            f.value(x)?,
        ))
    })
}

/// Backward-difference expansion from the positive integer `alpha`; the target is `-f(0)`.
pub fn maclaurin_bt(f: &Operand, alpha: &Rational, n: usize) -> Result<ExpansionReport> {
    let a = nonneg_int(alpha, "alpha")?;
    if a < 1 {
        return Err(Error::InvalidArgument("alpha must be at least 1".into()));
    }
    with_operand(f, |f| {
        let mut terms = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let c = falling_power(alpha, k);
            terms.push(if c.is_zero() { c } else { c * sign(k + 1) * f.backward(k, a)? / factorial(k) });
        }
        let mut sum = Rational::zero();
        for r in 0..a {
            let c = falling_power(&int(r), n);
            if !c.is_zero() {
                sum += c * f.backward(n + 1, r + 1)? / factorial(n);
            }
        }
        Ok(ExpansionReport::new(
            Engine::Maclaurin,
            f.describe(),
            alpha.clone(),
            Rational::zero(),
            n,
            terms,
            sign(n) * sum,
            -f.value(0)?,
        ))
    })
}

/// `T_k = (-1)^k/k! ẑ_ψ^k ∂_ψ^k f` for `k = 0..=n`, all around `center`.
fn psi_terms(f: &Polynomial, n: usize, psi: &PsiSequence, center: &Rational) -> Result<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut derivative = f.clone();
    for k in 0..=n {
        if k > 0 {
            derivative = psi_derivative(&derivative, psi, center)?;
        }
        let mut t = derivative.clone();
        for _ in 0..k {
            t = psi_multiply(&t, psi, center)?;
        }
        out.push(t.scale(&(sign(k) / factorial(k))));
    }
    Ok(out)
}

/// The ψ-expansion of `f` from `alpha` to `point`, around `center`.
pub fn psi_bt(
    f: &Polynomial,
    alpha: &Rational,
    point: &Rational,
    n: usize,
    psi: &PsiSequence,
    center: &Rational,
) -> Result<ExpansionReport> {
    let t = psi_terms(f, n, psi, center)?;
    let terms_at_point: Vec<Rational> = t.iter().map(|p| p.evaluate(point)).collect();
    let terms_at_alpha: Vec<Rational> = t.iter().map(|p| p.evaluate(alpha)).collect();
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(terms_at_alpha[0].clone());
    for k in 1..=n {
        terms.push(&terms_at_alpha[k] - &terms_at_point[k]);
    }

    let mut integrand = f.clone();
    for _ in 0..=n {
        integrand = psi_derivative(&integrand, psi, center)?;
    }
    for _ in 0..n {
        integrand = psi_multiply(&integrand, psi, center)?;
    }
    let anti = psi_antiderivative(&integrand, psi, center)?;
    let remainder = sign(n) / factorial(n) * (anti.evaluate(point) - anti.evaluate(alpha));

    let mut report = ExpansionReport::new(
        Engine::Psi,
        f.to_string(),
        alpha.clone(),
        point.clone(),
        n,
        terms,
        remainder,
        f.evaluate(point),
    );
    let g = |v: &[Rational]| v.iter().fold(Rational::zero(), |acc, x| acc + x);
    report.psi = Some(PsiDetails {
        psi: psi.label(),
        center: center.clone(),
        g_point: g(&terms_at_point),
        g_alpha: g(&terms_at_alpha),
        terms_at_point,
        terms_at_alpha,
    });
    Ok(report)
}

/// `Σ_{k≤n} (1/k!) (x-α)^(k*ψ) *ψ f^(k)(α)` with `f^(k) = ∂_ψ^k f` around `alpha`
/// and `(x-α)^(k*ψ) = (k!/k_ψ!) (x-α)^k`.
pub fn psi_bt_literal_sum(f: &Polynomial, alpha: &Rational, n: usize, psi: &PsiSequence) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    let mut derivative = f.clone();
    for k in 0..=n {
        if k > 0 {
            derivative = psi_derivative(&derivative, psi, alpha)?;
        }
        let power = Polynomial::shifted_power(alpha, k).scale(&psi.star_coefficient(k)?);
        let value = Polynomial::constant(derivative.evaluate(alpha));
        out = out + star_centered(&power, &value, psi, alpha)?.scale(&(Rational::one() / factorial(k)));
    }
    Ok(out)
}
