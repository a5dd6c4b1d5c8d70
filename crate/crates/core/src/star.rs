//! The `*_ψ` product `f *_ψ g = f(x̂_ψ) g`, ψ-powers of `x`, and the ψ-exponential.
//!
//! `x̂_ψ x^n = ((n+1)/(n+1)_ψ) x^(n+1)` so in general `x^n *_ψ x^k ≠ x^k *_ψ x^n`,
//! and the product is not associative either: for `q = 1/2`,
//! `(x *_ψ x) *_ψ x = (64/21) x^3` while `x *_ψ (x *_ψ x) = (16/7) x^3`.
//!
//! Two readings of a star power acting on an operand are kept apart:
//!
//! * [`star_power_applied`] is the right-nested `x *_ψ (x *_ψ (... *_ψ g))`,
//!   i.e. `x̂_ψ^n g`;
//! * [`star`] applied to the polynomial `x^(n*ψ) = (n!/n_ψ!) x^n` substitutes
//!   `x̂_ψ` into that polynomial and therefore carries the extra factor
//!   `n!/n_ψ!`.
//!
//! Constants act through substitution, so `α *_ψ g = α g` and
//! `x *_ψ α = α (1_ψ)^{-1} x`. The alternative constant rule
//! `α *_ψ x = α (1_ψ)^{-1} x` is available as [`printed_constant_product`];
//! it agrees with substitution only when `1_ψ = 1`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{psi_derivative, psi_multiply, LinearOperator, OperatorSpec};
use crate::poly::Polynomial;
use crate::psi::PsiSequence;
use crate::rational::{factorial, int, pow, Rational};
use crate::sampling;
use crate::verdict::{Checker, Verdict};

pub const AXIOMS: &[&str] =
    &["obs-a", "obs-b", "obs-c", "obs-d", "leibniz", "obs-f", "star-power-law"];

/// `f *_ψ g = f(x̂_ψ) g`.
pub fn star(f: &Polynomial, g: &Polynomial, psi: &PsiSequence) -> Result<Polynomial> {
    star_centered(f, g, psi, &int(0))
}

/// [`star`] with a degree cap on `deg f + deg g`.
pub fn star_capped(f: &Polynomial, g: &Polynomial, psi: &PsiSequence, cap: usize) -> Result<Polynomial> {
    let total = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    if total > cap {
        return Err(Error::CapExceeded { degree: total, cap });
    }
    star(f, g, psi)
}

/// `f(ẑ_ψ) g` with `f` read in powers of `(x - center)` and `ẑ_ψ` around `center`.
pub fn star_centered(f: &Polynomial, g: &Polynomial, psi: &PsiSequence, center: &Rational) -> Result<Polynomial> {
    let coeffs = f.rebase(center);
    let mut out = Polynomial::zero();
    let mut power = g.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            power = psi_multiply(&power, psi, center)?;
        }
        if !c.is_zero() {
            out = out + power.scale(c);
        }
    }
    Ok(out)
}

/// `x^(n*ψ) = (n!/n_ψ!) x^n`.
pub fn star_power(n: usize, psi: &PsiSequence) -> Result<Polynomial> {
    Ok(Polynomial::monomial(psi.star_coefficient(n)?, n))
}

/// Right-nested `x *_ψ (x *_ψ (... *_ψ g))` with `n` factors of `x`, i.e. `x̂_ψ^n g`.
pub fn star_power_applied(n: usize, psi: &PsiSequence, g: &Polynomial) -> Result<Polynomial> {
    (0..n).try_fold(g.clone(), |acc, _| psi_multiply(&acc, psi, &int(0)))
}

/// `α *_ψ x` under the alternative constant rule `α (1_ψ)^{-1} x`.
pub fn printed_constant_product(alpha: &Rational, psi: &PsiSequence) -> Result<Polynomial> {
    Ok(Polynomial::monomial(alpha / psi.value(1)?, 1))
}

/// `(x *_ψ x) *_ψ x` and `x *_ψ (x *_ψ x)`.
pub fn non_associativity_witness(psi: &PsiSequence) -> Result<(Polynomial, Polynomial)> {
    let x = Polynomial::x();
    let xx = star(&x, &x, psi)?;
    Ok((star(&xx, &x, psi)?, star(&x, &xx, psi)?))
}

/// A truncated series tagged with the ψ-sequence it was built under.
#[derive(Clone, Debug, Serialize)]
pub struct StarSeries {
    pub poly: Polynomial,
    pub truncation: usize,
    pub psi: String,
}

/// `exp_ψ[αx] = Σ_{n≤N} α^n x^n / n_ψ!`.
pub fn exp_psi(alpha: &Rational, psi: &PsiSequence, truncation: usize) -> Result<StarSeries> {
    let coeffs = (0..=truncation)
        .map(|n| Ok(pow(alpha, n) / psi.factorial(n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(StarSeries { poly: Polynomial::new(coeffs), truncation, psi: psi.label() })
}

/// Drops every term above degree `n`.
pub fn truncate(p: &Polynomial, n: usize) -> Polynomial {
    Polynomial::new(p.coeffs().iter().take(n + 1).cloned().collect())
}

/// `Σ_{n≤N} α^n x^n / n!`.
fn exp_classical(alpha: &Rational, truncation: usize) -> Polynomial {
    Polynomial::new((0..=truncation).map(|n| pow(alpha, n) / factorial(n)).collect())
}

#[derive(Clone, Debug)]
pub struct StarParams {
    pub psi: PsiSequence,
    /// Degree bound for the basis sweep and the random polynomials.
    pub truncation: usize,
    /// Number of random cases.
    pub cases: usize,
    pub seed: u64,
    /// Exponents for the exp law; random pairs are added on top of this one.
    pub alpha: Rational,
    pub beta: Rational,
}

impl Default for StarParams {
    fn default() -> Self {
        StarParams {
            psi: PsiSequence::classical(),
            truncation: 8,
            cases: 100,
            seed: 1,
            alpha: int(1),
            beta: int(1),
        }
    }
}

pub fn verify_star_axiom(axiom: &str, params: &StarParams) -> Result<Verdict> {
    let psi = &params.psi;
    let n_max = params.truncation;
    let zero = int(0);
    let d_psi = |p: &Polynomial| psi_derivative(p, psi, &zero);
    let mut rng = sampling::rng(params.seed);
    let mut checker = Checker::new(axiom);
    match axiom {
        "obs-a" => {
            for n in 0..=n_max {
                let lhs = d_psi(&star_power(n, psi)?)?;
                let rhs = if n == 0 { Polynomial::zero() } else { star_power(n - 1, psi)?.scale(&int(n as i64)) };
                if !checker.check(|| format!("∂ψ x^({n}*ψ)"), Some(n), &lhs, &rhs) {
                    break;
                }
            }
        }
        "obs-b" => {
            let mut alphas = vec![params.alpha.clone()];
            alphas.extend((0..params.cases).map(|_| sampling::rational(&mut rng, 20)));
            for alpha in alphas {
                let lhs = exp_psi(&alpha, psi, n_max)?.poly;
                let mut rhs = Polynomial::zero();
                for n in 0..=n_max {
                    let term = star_power_applied(n, psi, &Polynomial::one())?;
                    rhs = rhs + term.scale(&(pow(&alpha, n) / factorial(n)));
                }
                if !checker.check(|| format!("exp_ψ[{alpha} x]"), None, &lhs, &rhs) {
                    break;
                }
            }
        }
        "obs-c" => {
            let mut pairs = vec![(params.alpha.clone(), params.beta.clone())];
            pairs.extend(
                (0..params.cases).map(|_| (sampling::rational(&mut rng, 20), sampling::rational(&mut rng, 20))),
            );
            for (alpha, beta) in pairs {
                let product = star(&exp_classical(&alpha, n_max), &exp_psi(&beta, psi, n_max)?.poly, psi)?;
                let lhs = truncate(&product, n_max);
                let rhs = exp_psi(&(&alpha + &beta), psi, n_max)?.poly;
                if !checker.check(|| format!("exp law α={alpha} β={beta}"), None, &lhs, &rhs) {
                    break;
                }
            }
        }
        "obs-d" => {
            'outer: for k in 0..=n_max {
                for n in 0..=n_max.saturating_sub(k) {
                    let xk = Polynomial::monomial(Rational::one(), k);
                    let xn = star_power(n, psi)?;
                    let lhs = d_psi(&star(&xk, &xn, psi)?)?;
                    let rhs = star(&xk.derivative(), &xn, psi)? + star(&xk, &d_psi(&xn)?, psi)?;
                    if !checker.check(|| format!("x^{k} and x^({n}*ψ)"), Some(k), &lhs, &rhs) {
                        break 'outer;
                    }
                }
            }
        }
        "leibniz" => {
            let mut pairs = Vec::new();
            for k in 0..=n_max.min(4) {
                for n in 0..=n_max.min(4) {
                    pairs.push((Polynomial::monomial(Rational::one(), k), Polynomial::monomial(Rational::one(), n)));
                }
            }
            pairs.extend((0..params.cases).map(|_| {
                (sampling::polynomial(&mut rng, n_max, 9), sampling::polynomial(&mut rng, n_max, 9))
            }));
            for (f, g) in pairs {
                let lhs = d_psi(&star(&f, &g, psi)?)?;
                let rhs = star(&f.derivative(), &g, psi)? + star(&f, &d_psi(&g)?, psi)?;
                if !checker.check(|| format!("f = {f}, g = {g}"), None, &lhs, &rhs) {
                    break;
                }
            }
        }
        "obs-f" => {
            let cap = 2 * n_max + 1;
            let x = OperatorSpec::PsiMultiplication { psi: psi.clone(), center: zero.clone() }.build(cap)?;
            for _ in 0..params.cases {
                let f = sampling::polynomial(&mut rng, n_max, 9);
                let g = sampling::polynomial(&mut rng, n_max, 9);
                let lhs = substitute(&f, &x)?.compose(&substitute(&g, &x)?)?.apply(&Polynomial::one())?;
                let g_tilde = star(&g, &Polynomial::one(), psi)?;
                let rhs = star(&f, &g_tilde, psi)?;
                if !checker.check(|| format!("f = {f}, g = {g}"), None, &lhs, &rhs) {
                    break;
                }
            }
        }
        "star-power-law" => {
            'outer: for n in 0..=n_max {
                for k in 0..=n_max - n {
                    let lhs = star(&star_power(n, psi)?, &star_power(k, psi)?, psi)?;
                    let rhs = star_power(n + k, psi)?.scale(&psi.star_coefficient(n)?);
                    if !checker.check(|| format!("x^({n}*ψ) *ψ x^({k}*ψ)"), Some(n), &lhs, &rhs) {
                        break 'outer;
                    }
                    // The swapped product differs exactly when the two coefficients do.
                    let swapped = star(&star_power(k, psi)?, &star_power(n, psi)?, psi)?;
                    let coefficients_differ = psi.star_coefficient(n)? != psi.star_coefficient(k)?;
                    checker.require(
                        || format!("x^({n}*ψ) and x^({k}*ψ) commute iff n!/n_ψ! = k!/k_ψ!"),
                        (swapped != lhs) == coefficients_differ,
                        lhs.to_string(),
                        swapped.to_string(),
                    );
                }
            }
        }
        other => return Err(Error::UnknownAxiom(other.to_string())),
    }
    Ok(checker.finish())
}

/// `f(A)` for a tabulated operator `A`.
fn substitute(f: &Polynomial, op: &LinearOperator) -> Result<LinearOperator> {
    let n = f.degree().unwrap_or(0);
    let cap = op.cap().saturating_sub(n);
    let mut acc = LinearOperator::zero(cap);
    let mut power = LinearOperator::identity(op.cap());
    for (i, c) in f.coeffs().iter().enumerate() {
        if i > 0 {
            power = op.compose(&power)?;
        }
        acc = acc.add(&power.scale(c));
    }
    Ok(acc)
}
