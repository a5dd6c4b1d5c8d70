//! ψ-integration, Jackson q-integration, iterated Cauchy kernels and the per-partes formula.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::operator::{psi_derivative, Operand, OperatorSpec};
use crate::poly::{GridFunction, Polynomial};
use crate::psi::PsiSequence;
use crate::rational::{as_i64, binomial, factorial, falling_power, int, to_f64, Rational};
use crate::star::star;

/// `(x-β)^m ↦ (x-β)^(m+1) / (m+1)_ψ`, vanishing at the center.
pub fn psi_antiderivative(p: &Polynomial, psi: &PsiSequence, center: &Rational) -> Result<Polynomial> {
    let c = p.rebase(center);
    let mut out = vec![Rational::zero()];
    for (m, a) in c.iter().enumerate() {
        out.push(a / psi.value(m + 1)?);
    }
    Ok(Polynomial::from_rebased(out, center))
}

/// `∫_a^b p d_ψt = F(b) - F(a)` with `F` the antiderivative around `center`.
pub fn psi_integral(
    p: &Polynomial,
    psi: &PsiSequence,
    center: &Rational,
    a: &Rational,
    b: &Rational,
) -> Result<Rational> {
    let f = psi_antiderivative(p, psi, center)?;
    Ok(f.evaluate(b) - f.evaluate(a))
}

/// How many Jackson terms to sum, or the closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JacksonStop {
    /// Smallest `K` whose error bound is at most the tolerance.
    Tolerance(f64),
    Terms(usize),
    Symbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureValue {
    Exact(Rational),
    Approx(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: QuadratureValue,
    /// Series terms summed per endpoint; 0 for the closed form.
    pub terms_used: usize,
    /// `|value - exact| <= tail_bound`; absent for the closed form.
    pub tail_bound: Option<f64>,
}

/// Upper limit on the number of Jackson terms a tolerance may request.
pub const MAX_JACKSON_TERMS: usize = 50_000_000;

fn check_q(q: &Rational) -> Result<()> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(Error::QOutOfRange(q.to_string()));
    }
    Ok(())
}

/// `∫_0^z p d_q t = (1-q) z Σ_k p(q^k z) q^k`.
pub fn jackson_integrate(p: &Polynomial, z: &Rational, q: &Rational, stop: JacksonStop) -> Result<QuadratureResult> {
    jackson_definite(p, &Rational::zero(), z, q, stop)
}

/// `∫_a^b p d_q t = ∫_0^b - ∫_0^a`.
pub fn jackson_definite(
    p: &Polynomial,
    a: &Rational,
    b: &Rational,
    q: &Rational,
    stop: JacksonStop,
) -> Result<QuadratureResult> {
    check_q(q)?;
    let terms = match stop {
        JacksonStop::Symbolic => {
            let psi = PsiSequence::q_deformed(q.clone())?;
            let value = psi_integral(p, &psi, &Rational::zero(), a, b)?;
            return Ok(QuadratureResult { value: QuadratureValue::Exact(value), terms_used: 0, tail_bound: None });
        }
        JacksonStop::Terms(k) => k,
        JacksonStop::Tolerance(eps) => {
            if !(eps > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance {eps} must be positive")));
            }
            smallest_sufficient_k(p, a, b, q, eps)?
        }
    };
    let (vb, bound_b) = jackson_sum(p, b, q, terms);
    let (va, bound_a) = jackson_sum(p, a, q, terms);
    Ok(QuadratureResult {
        value: QuadratureValue::Approx(vb - va),
        terms_used: terms,
        tail_bound: Some(bound_a + bound_b + f64::EPSILON * 4.0 * (vb.abs() + va.abs())),
    })
}

/// Geometric tail of the series after `k` terms, summed over monomials.
fn tail(p: &Polynomial, z: f64, q: f64, k: usize) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e = (n + 1) as i32;
            let qe = q.powi(e);
            to_f64(c).abs() * z.abs().powi(e) * (1.0 - q) * qe.powf(k as f64) / (1.0 - qe)
        })
        .sum()
}

/// First-order bound on the floating-point error of any partial sum.
///
/// Term `k` carries a relative error of at most `(k + 2n + 10) u` (powers of
/// `q`, Horner, conversions), and compensated summation adds `2u |S|`. Summed
/// over the geometric terms this is independent of the number of terms.
fn rounding(p: &Polynomial, z: f64, q: f64) -> f64 {
    let u = f64::EPSILON;
    let n = p.coeffs().len() as f64;
    let mut bound = 0.0;
    for (i, c) in p.coeffs().iter().enumerate() {
        let e = (i + 1) as i32;
        let qe = q.powi(e);
        let scale = to_f64(c).abs() * z.abs().powi(e) * (1.0 - q);
        // Σ_k |t_k| and Σ_k k |t_k| for this monomial
        let plain = scale / (1.0 - qe);
        let weighted = scale * qe / ((1.0 - qe) * (1.0 - qe));
        bound += (2.0 * n + 12.0) * u * plain + 2.0 * u * weighted;
    }
    bound * (1.0 + 4.0 * u)
}

/// Partial sum of `k` terms and its error bound (tail plus rounding).
fn jackson_sum(p: &Polynomial, z: &Rational, q: &Rational, k: usize) -> (f64, f64) {
    let zf = to_f64(z);
    let qf = to_f64(q);
    let coeffs: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
    // Neumaier summation
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    let mut qk = 1.0;
    for _ in 0..k {
        let t = qk * zf;
        let term = coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c) * qk;
        let next = sum + term;
        carry += if sum.abs() >= term.abs() { (sum - next) + term } else { (term - next) + sum };
        sum = next;
        qk *= qf;
    }
    let value = (1.0 - qf) * zf * (sum + carry);
    (value, tail(p, zf, qf, k) + rounding(p, zf, qf))
}

fn smallest_sufficient_k(p: &Polynomial, a: &Rational, b: &Rational, q: &Rational, eps: f64) -> Result<usize> {
    let (af, bf, qf) = (to_f64(a), to_f64(b), to_f64(q));
    let floor = rounding(p, af, qf) + rounding(p, bf, qf) + f64::EPSILON * 4.0 * (tail(p, af, qf, 0) + tail(p, bf, qf, 0));
    if floor >= eps {
        return Err(Error::InvalidArgument(format!(
            "tolerance {eps:e} is below the rounding floor {floor:e} for this integrand"
        )));
    }
    // the bound is decreasing in k: double, then bisect
    let bound = |k: usize| tail(p, af, qf, k) + tail(p, bf, qf, k) + floor;
    if bound(0) <= eps {
        return Ok(0);
    }
    let mut hi = 1usize;
    while bound(hi) > eps {
        if hi >= MAX_JACKSON_TERMS {
            return Err(Error::InvalidArgument(format!(
                "tolerance {eps:e} is not reachable within {MAX_JACKSON_TERMS} terms"
            )));
        }
        hi = (hi * 2).min(MAX_JACKSON_TERMS);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMode {
    Integral,
    Summation,
}

/// `k`-fold integration or summation from `base`, through the one-shot kernel.
///
/// Integral: `∫_base^x (x-t)^(k-1)/(k-1)! f(t) dt`.
/// Summation: `Σ_{r=base}^{x-1} (x-r-1)^(k-1 falling)/(k-1)! f(r)`.
pub fn cauchy_kernel(f: &Operand, k: usize, base: &Rational, mode: KernelMode) -> Result<Operand> {
    if k == 0 {
        return Err(Error::InvalidArgument("kernel order k must be at least 1".into()));
    }
    match (mode, f) {
        (KernelMode::Integral, Operand::Poly(p)) => Ok(Operand::Poly(integral_kernel(p, k, base))),
        (KernelMode::Integral, Operand::Grid(_)) => {
            Err(Error::InvalidArgument("integral kernel needs a polynomial".into()))
        }
        (KernelMode::Summation, input) => {
            let base = as_i64(base).ok_or_else(|| Error::NonIntegerGridArg(base.to_string()))?;
            match input {
                Operand::Poly(p) => Ok(Operand::Poly(summation_kernel_poly(p, k, base))),
                Operand::Grid(g) => summation_kernel_grid(g, k, base).map(Operand::Grid),
            }
        }
    }
}

/// `single^k f`, the iteration the kernels must reproduce.
pub fn iterated_single_step(f: &Operand, k: usize, base: &Rational, mode: KernelMode) -> Result<Operand> {
    let spec = match mode {
        KernelMode::Integral => OperatorSpec::Integral(base.clone()),
        KernelMode::Summation => {
            OperatorSpec::Summation(as_i64(base).ok_or_else(|| Error::NonIntegerGridArg(base.to_string()))?)
        }
    };
    let mut acc = f.clone();
    for _ in 0..k {
        acc = match acc {
            Operand::Poly(p) => Operand::Poly(spec.apply(&p)?),
            Operand::Grid(g) => {
                let g = match &spec {
                    OperatorSpec::Summation(b) if *b > g.start() => g.restrict(*b, g.end())?,
                    _ => g,
                };
                Operand::Grid(spec.apply_grid(&g)?)
            }
        };
    }
    Ok(acc)
}

fn integral_kernel(f: &Polynomial, k: usize, base: &Rational) -> Polynomial {
    // (x-t)^(k-1) = Σ_j C(k-1,j) x^(k-1-j) (-t)^j
    let mut out = Polynomial::zero();
    for j in 0..k {
        let tj_f = &Polynomial::monomial(Rational::one(), j) * f;
        let anti = tj_f.antiderivative();
        let definite = &anti - &Polynomial::constant(anti.evaluate(base));
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        let coeff = binomial(k - 1, j) * sign;
        out = out + &Polynomial::monomial(coeff, k - 1 - j) * &definite;
    }
    out.scale(&(Rational::one() / factorial(k - 1)))
}

fn summation_kernel_at(f: impl Fn(i64) -> Result<Rational>, k: usize, base: i64, x: i64) -> Result<Rational> {
    let mut acc = Rational::zero();
    // (x-r-1)^(k-1 falling) vanishes for r > x-k
    for r in base..=(x - k as i64) {
        acc += falling_power(&int(x - r - 1), k - 1) * f(r)?;
    }
    Ok(acc / factorial(k - 1))
}

fn summation_kernel_poly(f: &Polynomial, k: usize, base: i64) -> Polynomial {
    // degree of the result is at most deg f + k; interpolate through base..=base+deg+k
    let n = f.degree().map_or(0, |d| d) + k;
    let values: Vec<Rational> = (0..=n as i64)
        .map(|i| summation_kernel_at(|r| Ok(f.evaluate(&int(r))), k, base, base + i).expect("total"))
        .collect();
    let mut diffs = values;
    let mut newton = Vec::with_capacity(n + 1);
    for j in 0..=n {
        newton.push(&diffs[0] / factorial(j));
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Polynomial::from_falling(&newton).shift(&int(-base))
}

fn summation_kernel_grid(g: &GridFunction, k: usize, base: i64) -> Result<GridFunction> {
    if base < g.start() || base > g.end() {
        return Err(Error::GridDomainTooSmall { needed: base, start: g.start(), end: g.end() });
    }
    let last = g.end() + k as i64;
    let values = (base..=last)
        .map(|x| summation_kernel_at(|r| g.get(r).cloned(), k, base, x))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::with_start(base, values)
}

/// Both sides of the ψ per-partes formula on `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerPartes {
    /// `∫_a^b (f *ψ ∂ψ g) d_ψt`.
    pub lhs: Rational,
    /// `[f *ψ g]_a^b - ∫_a^b (Df *ψ g) d_ψt`.
    pub rhs: Rational,
    pub passed: bool,
}

pub fn per_partes_check(
    f: &Polynomial,
    g: &Polynomial,
    psi: &PsiSequence,
    a: &Rational,
    b: &Rational,
) -> Result<PerPartes> {
    let zero = Rational::zero();
    let lhs = psi_integral(&star(f, &psi_derivative(g, psi, &zero)?, psi)?, psi, &zero, a, b)?;
    let fg = star(f, g, psi)?;
    let rhs = fg.evaluate(b) - fg.evaluate(a) - psi_integral(&star(&f.derivative(), g, psi)?, psi, &zero, a, b)?;
    Ok(PerPartes { passed: lhs == rhs, lhs, rhs })
}
