//! Registry of operator identities, checked exhaustively on the monomial basis.
//!
//! | id | statement |
//! |----|-----------|
//! | `telescoping` | `Σ_{k≤n} a^k (1 - ab) b^k = 1 - a^{n+1} b^{n+1}` for `(∫_α, D)` and `(Σ, Δ)` |
//! | `bernoulli-viskov` | `p Σ_{k≤n} (-q)^k p^k / k! = (-q)^n p^{n+1} / n!` for a GHW pair |
//! | `ghw` | `[p, q] = 1` |
//! | `one-minus-ab` | `[b, a] = 1 - ab = ε_α` for `(∫_α, D)`, and `ε_0` for `(Σ, Δ)` |
//! | `jackson-rep` | `∂_q = (1 - qQ̂)/(1 - q) ∘ ∂₀`, with right inverse `(1 - q) x̂ (1 - qQ̂)^{-1}` |
//! | `psi-rep` | `∂_ψ = n̂_ψ ∘ ∂₀` and `∫_ψ = x̂ ∘ n̂_ψ^{-1}` |
//! | `hist-eps0` | `ε₀ = Σ_n (-1)^n x^n/n! D^n` |
//! | `hist-div-diff` | `∂₀ = Σ_{n≥1} (-1)^{n-1} x^{n-1}/n! D^n` |
//! | `hist-div-diff-printed` | the same without the alternating sign; fails at `m = 2` |
//!
//! Operator identities are linear, so agreement on every `x^m`, `m ≤ N`, is
//! agreement on the whole degree-`N` space.

use num_traits::One;

use crate::error::{Error, Result};
use crate::operator::{LinearOperator, OperatorSpec};
use crate::poly::{GridFunction, Polynomial};
use crate::psi::{PsiKind, PsiSequence};
use crate::rational::{factorial, int, pow, sign, Rational};
use crate::transport::{GradedBasis, TransportedCalculus};
use crate::verdict::{Checker, Verdict};

pub const IDENTITIES: &[&str] = &[
    "telescoping",
    "bernoulli-viskov",
    "ghw",
    "one-minus-ab",
    "jackson-rep",
    "psi-rep",
    "hist-eps0",
    "hist-div-diff",
    "hist-div-diff-printed",
];

/// A representation of the pair `(p̂, q̂)`.
#[derive(Clone, Debug, PartialEq)]
pub enum GhwPair {
    /// `(D, x̂ - y)`.
    Classical { y: Rational },
    /// `(Δ, x̂ ∘ E^{-1})`.
    Difference,
    /// `(∂_ψ, ẑ_ψ)`, both around `center`.
    Psi { psi: PsiSequence, center: Rational },
    /// `∂_ψ` around 0 with `ẑ_ψ` around `center`. Not a GHW pair unless the
    /// sequence is classical or the center is 0.
    MixedPsi { psi: PsiSequence, center: Rational },
    /// `(Q, x̂_Q)` transported to the falling-power basis.
    FallingTransport { psi: PsiSequence },
}

impl GhwPair {
    pub fn label(&self) -> String {
        match self {
            GhwPair::Classical { y } => format!("(D, x̂-{y})"),
            GhwPair::Difference => "(Δ, x̂∘E^-1)".into(),
            GhwPair::Psi { psi, center } => format!("(∂ψ, ẑψ) psi={} center={center}", psi.label()),
            GhwPair::MixedPsi { psi, center } => {
                format!("(∂ψ@0, ẑψ@{center}) psi={}", psi.label())
            }
            GhwPair::FallingTransport { psi } => format!("(Q, x̂_Q) falling basis psi={}", psi.label()),
        }
    }

    /// Builds `(p̂, q̂)` tabulated up to `cap`.
    pub fn build(&self, cap: usize) -> Result<(LinearOperator, LinearOperator)> {
        match self {
            GhwPair::Classical { y } => Ok((
                OperatorSpec::Derivative.build(cap)?,
                OperatorSpec::MultiplyByXMinus(y.clone()).build(cap)?,
            )),
            GhwPair::Difference => {
                let x = OperatorSpec::MultiplyByXMinus(Rational::from_integer(0.into())).build(cap)?;
                let back = OperatorSpec::Shift(-Rational::one()).build(cap)?;
                Ok((
                    OperatorSpec::ForwardDifference.build(cap)?,
                    x.compose(&back)?.with_name("x̂∘E^-1"),
                ))
            }
            GhwPair::Psi { psi, center } => Ok((
                OperatorSpec::PsiDerivative { psi: psi.clone(), center: center.clone() }.build(cap)?,
                OperatorSpec::PsiMultiplication { psi: psi.clone(), center: center.clone() }.build(cap)?,
            )),
            GhwPair::MixedPsi { psi, center } => Ok((
                OperatorSpec::PsiDerivative { psi: psi.clone(), center: int(0) }.build(cap)?,
                OperatorSpec::PsiMultiplication { psi: psi.clone(), center: center.clone() }.build(cap)?,
            )),
            GhwPair::FallingTransport { psi } => {
                let calc = TransportedCalculus::new(GradedBasis::falling(cap + 1)?, psi.clone())?;
                Ok((calc.derivative().clone(), calc.multiplication().clone()))
            }
        }
    }
}

/// Parameters shared by the registry entries; each identity reads what it needs.
#[derive(Clone, Debug)]
pub struct IdentityParams {
    pub psi: PsiSequence,
    pub center: Rational,
    /// Base point `α` of `∫_α` and `ε_α`.
    pub alpha: Rational,
    /// Order `n` for the telescoping and Bernoulli identities; all orders `0..=n` are checked.
    pub order: usize,
    /// Basis degrees `0..=max_degree` are checked.
    pub max_degree: usize,
    /// Pair for `ghw` / `bernoulli-viskov`; defaults to `(∂_ψ, ẑ_ψ)` at `center`.
    pub pair: Option<GhwPair>,
}

impl Default for IdentityParams {
    fn default() -> Self {
        IdentityParams {
            psi: PsiSequence::classical(),
            center: int(0),
            alpha: int(0),
            order: 3,
            max_degree: 8,
            pair: None,
        }
    }
}

impl IdentityParams {
    fn pair(&self) -> GhwPair {
        self.pair
            .clone()
            .unwrap_or_else(|| GhwPair::Psi { psi: self.psi.clone(), center: self.center.clone() })
    }
}

pub fn verify_operator_identity(id: &str, params: &IdentityParams) -> Result<Verdict> {
    let n_max = params.max_degree;
    match id {
        "telescoping" => telescoping(params),
        "bernoulli-viskov" => {
            let pair = params.pair();
            let (p, q) = pair.build(n_max + params.order + 2)?;
            let mut checker = Checker::new(id);
            let basis = monomials(n_max);
            for n in 0..=params.order {
                let (lhs, rhs) = bernoulli_sides(&p, &q, n)?;
                compare_on(&mut checker, &lhs, &rhs, &basis, &format!("{} n={n}", pair.label()))?;
            }
            Ok(checker.finish())
        }
        "ghw" => {
            let pair = params.pair();
            let (p, q) = pair.build(n_max + 1)?;
            let mut checker = Checker::new(id);
            let comm = p.commutator(&q)?;
            let one = LinearOperator::identity(n_max);
            compare_on(&mut checker, &comm, &one, &monomials(n_max), &pair.label())?;
            Ok(checker.finish())
        }
        "one-minus-ab" => one_minus_ab(params),
        "jackson-rep" => jackson_rep(params),
        "psi-rep" => {
            let cap = n_max + 1;
            let psi = &params.psi;
            let mut checker = Checker::new(id);
            let basis = monomials(n_max);
            let d_psi = OperatorSpec::PsiDerivative { psi: psi.clone(), center: int(0) }.build(cap)?;
            let number = OperatorSpec::Number(psi.clone()).build(cap)?;
            let d0 = OperatorSpec::DividedDifference.build(cap)?;
            compare_on(&mut checker, &d_psi, &number.compose(&d0)?, &basis, "∂ψ = n̂ψ∘∂₀")?;
            let int_psi = OperatorSpec::PsiIntegral { psi: psi.clone(), center: int(0) }.build(cap)?;
            let inv_number = LinearOperator::diagonal("n̂ψ^-1", cap, |m| {
                Ok(Rational::one() / psi.value(m + 1)?)
            })?;
            let x = OperatorSpec::MultiplyByXMinus(int(0)).build(cap)?;
            compare_on(&mut checker, &int_psi, &x.compose(&inv_number)?, &basis, "∫ψ = x̂∘n̂ψ^-1")?;
            Ok(checker.finish())
        }
        "hist-eps0" => {
            let rhs = OperatorSpec::Evaluation(int(0)).build(n_max)?;
            let lhs = derivative_series(n_max, |n| sign(n) / factorial(n), 0)?;
            let mut checker = Checker::new(id);
            compare_on(&mut checker, &lhs, &rhs, &monomials(n_max), "Σ (-1)^n x^n/n! D^n")?;
            Ok(checker.finish())
        }
        "hist-div-diff" | "hist-div-diff-printed" => {
            let printed = id == "hist-div-diff-printed";
            let rhs = OperatorSpec::DividedDifference.build(n_max)?;
            let weight = |n: usize| {
                if printed {
                    Rational::one() / factorial(n)
                } else {
                    sign(n - 1) / factorial(n)
                }
            };
            let lhs = derivative_series(n_max, weight, 1)?;
            let mut checker = Checker::new(id);
            let label = if printed { "Σ x^(n-1)/n! D^n" } else { "Σ (-1)^(n-1) x^(n-1)/n! D^n" };
            compare_on(&mut checker, &lhs, &rhs, &monomials(n_max), label)?;
            Ok(checker.finish())
        }
        other => Err(Error::UnknownIdentity(other.to_string())),
    }
}

/// `x^0, ..., x^n`.
pub fn monomials(n: usize) -> Vec<Polynomial> {
    (0..=n).map(|m| Polynomial::monomial(Rational::one(), m)).collect()
}

/// Both sides of the Bernoulli identity at order `n`.
pub fn bernoulli_sides(
    p: &LinearOperator,
    q: &LinearOperator,
    n: usize,
) -> Result<(LinearOperator, LinearOperator)> {
    let minus_q = q.scale(&-Rational::one());
    let mut sum: Option<LinearOperator> = None;
    for k in 0..=n {
        let term = minus_q.pow(k)?.compose(&p.pow(k)?)?.scale(&(Rational::one() / factorial(k)));
        sum = Some(match sum {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let lhs = p.compose(&sum.expect("n >= 0 gives one term"))?;
    let rhs = minus_q.pow(n)?.compose(&p.pow(n + 1)?)?.scale(&(Rational::one() / factorial(n)));
    Ok((lhs, rhs))
}

/// Checks `lhs v = rhs v` for each basis vector `v`, labelled by its index.
pub(crate) fn compare_on(
    checker: &mut Checker,
    lhs: &LinearOperator,
    rhs: &LinearOperator,
    basis: &[Polynomial],
    label: &str,
) -> Result<()> {
    for (m, v) in basis.iter().enumerate() {
        let l = lhs.apply(v)?;
        let r = rhs.apply(v)?;
        if !checker.check(|| format!("{label} on basis element {m} ({v})"), Some(m), &l, &r) {
            break;
        }
    }
    Ok(())
}

/// `Σ_{n=first}^{cap} weight(n) x̂^{n-first} D^n`.
fn derivative_series(cap: usize, weight: impl Fn(usize) -> Rational, first: usize) -> Result<LinearOperator> {
    let d = OperatorSpec::Derivative.build(cap)?;
    let x = OperatorSpec::MultiplyByXMinus(int(0)).build(cap + 1)?;
    let mut acc = LinearOperator::zero(cap);
    for n in first..=cap {
        let term = x.pow(n - first)?.compose(&d.pow(n)?)?.scale(&weight(n));
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn telescoping(params: &IdentityParams) -> Result<Verdict> {
    let mut checker = Checker::new("telescoping");
    let n_max = params.max_degree;
    let cap = n_max + params.order + 2;
    let basis = monomials(n_max);
    let pairs = [
        (OperatorSpec::Integral(params.alpha.clone()), OperatorSpec::Derivative),
        (OperatorSpec::Summation(0), OperatorSpec::ForwardDifference),
    ];
    for (a_spec, b_spec) in &pairs {
        let a = a_spec.build(cap)?;
        let b = b_spec.build(cap)?;
        let one = LinearOperator::identity(cap);
        let one_minus_ab = one.sub(&a.compose(&b)?);
        for n in 0..=params.order {
            let mut lhs = LinearOperator::zero(cap);
            for k in 0..=n {
                lhs = lhs.add(&a.pow(k)?.compose(&one_minus_ab.compose(&b.pow(k)?)?)?);
            }
            let rhs = one.sub(&a.pow(n + 1)?.compose(&b.pow(n + 1)?)?);
            compare_on(&mut checker, &lhs, &rhs, &basis, &format!("a={a_spec} b={b_spec} n={n}"))?;
        }
    }

    // (Σ, Δ) on grid basis vectors e_j of 0..=M.
    let m = n_max.max(params.order + 1) as i64;
    for j in 0..=m {
        let e = unit_grid(m, j);
        for n in 0..=params.order {
            let mut lhs: Option<GridFunction> = None;
            for k in 0..=n {
                let bk = iterate(&e, k, |g| g.forward_difference())?;
                let abk = bk.forward_difference()?.summation();
                let mid = bk.sub_common(&abk)?;
                let term = iterate(&mid, k, |g| Ok(g.summation()))?;
                lhs = Some(match lhs {
                    None => term,
                    Some(acc) => add_common(&acc, &term)?,
                });
            }
            let lhs = lhs.expect("n >= 0 gives one term");
            let down = iterate(&e, n + 1, |g| g.forward_difference())?;
            let up = iterate(&down, n + 1, |g| Ok(g.summation()))?;
            let rhs = e.sub_common(&up)?;
            if !checker.check(
                || format!("grid (Σ, Δ) n={n} on e_{j} of 0..={m}"),
                Some(j as usize),
                &GridDisplay(lhs),
                &GridDisplay(rhs),
            ) {
                return Ok(checker.finish());
            }
        }
    }
    Ok(checker.finish())
}

fn one_minus_ab(params: &IdentityParams) -> Result<Verdict> {
    let mut checker = Checker::new("one-minus-ab");
    let n_max = params.max_degree;
    let cap = n_max + 1;
    let basis = monomials(n_max);
    let one = LinearOperator::identity(cap);
    let cases = [
        (OperatorSpec::Integral(params.alpha.clone()), OperatorSpec::Derivative, params.alpha.clone()),
        (OperatorSpec::Summation(0), OperatorSpec::ForwardDifference, int(0)),
    ];
    for (a_spec, b_spec, point) in &cases {
        let a = a_spec.build(cap)?;
        let b = b_spec.build(cap)?;
        let one_minus_ab = one.sub(&a.compose(&b)?);
        let eval = OperatorSpec::Evaluation(point.clone()).build(cap)?;
        let label = format!("a={a_spec} b={b_spec}");
        compare_on(&mut checker, &one_minus_ab, &eval, &basis, &format!("{label}: 1-ab = ε"))?;
        compare_on(&mut checker, &b.commutator(&a)?, &one_minus_ab, &basis, &format!("{label}: [b,a] = 1-ab"))?;
    }
    let m = n_max.max(1) as i64;
    for j in 0..=m {
        let e = unit_grid(m, j);
        let ab = e.forward_difference()?.summation();
        let lhs = e.sub_common(&ab)?;
        let rhs = GridFunction::new(vec![e.get(0)?.clone(); m as usize + 1])?;
        if !checker.check(
            || format!("grid (Σ, Δ): 1-ab = ε_0 on e_{j}"),
            Some(j as usize),
            &GridDisplay(lhs),
            &GridDisplay(rhs),
        ) {
            break;
        }
    }
    Ok(checker.finish())
}

fn jackson_rep(params: &IdentityParams) -> Result<Verdict> {
    let q = match params.psi.kind() {
        PsiKind::QDeformed(q) => q.clone(),
        _ => {
            return Err(Error::InvalidArgument(
                "jackson-rep needs a q-deformed psi sequence (--psi q:P/Q)".into(),
            ))
        }
    };
    let mut checker = Checker::new("jackson-rep");
    let n_max = params.max_degree;
    let cap = n_max + 1;
    let basis = monomials(n_max);
    let one = LinearOperator::identity(cap);
    let one_minus_q = Rational::one() - &q;
    let dil = OperatorSpec::Dilation(q.clone()).build(cap)?;
    let one_minus_q_dil = one.sub(&dil.scale(&q));
    let d0 = OperatorSpec::DividedDifference.build(cap)?;
    let d_rep = one_minus_q_dil.compose(&d0)?.scale(&(Rational::one() / &one_minus_q));
    let d_psi = OperatorSpec::PsiDerivative { psi: params.psi.clone(), center: int(0) }.build(cap)?;
    compare_on(&mut checker, &d_rep, &d_psi, &basis, "(1-qQ̂)/(1-q)∘∂₀ = ∂_q")?;

    let resolvent = LinearOperator::diagonal("(1-qQ̂)^-1", cap, |m| {
        let denom = Rational::one() - pow(&q, m) * &q;
        if num_traits::Zero::is_zero(&denom) {
            return Err(Error::ZeroPsiValue(m + 1));
        }
        Ok(Rational::one() / denom)
    })?;
    compare_on(&mut checker, &resolvent.compose(&one_minus_q_dil)?, &one, &basis, "(1-qQ̂)^-1 inverse")?;
    let x = OperatorSpec::MultiplyByXMinus(int(0)).build(cap)?;
    let int_rep = x.compose(&resolvent)?.scale(&one_minus_q);
    let int_psi = OperatorSpec::PsiIntegral { psi: params.psi.clone(), center: int(0) }.build(cap)?;
    compare_on(&mut checker, &int_rep, &int_psi, &basis, "(1-q)x̂(1-qQ̂)^-1 = ∫_q")?;
    let id_cap = LinearOperator::identity(n_max);
    compare_on(&mut checker, &d_rep.compose(&int_rep)?, &id_cap, &basis, "∂_q∘∫_q = id")?;
    Ok(checker.finish())
}

fn unit_grid(m: i64, j: i64) -> GridFunction {
    let values = (0..=m).map(|i| if i == j { int(1) } else { int(0) }).collect();
    GridFunction::new(values).expect("nonempty")
}

fn iterate(
    g: &GridFunction,
    k: usize,
    step: impl Fn(&GridFunction) -> Result<GridFunction>,
) -> Result<GridFunction> {
    (0..k).try_fold(g.clone(), |acc, _| step(&acc))
}

fn add_common(a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    a.sub_common(&b.scale(&-Rational::one()))
}

/// Grid functions compare by domain and values; displayed as `start:[v0, v1, ...]`.
#[derive(PartialEq)]
struct GridDisplay(GridFunction);

impl std::fmt::Display for GridDisplay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: Vec<String> = self.0.values().iter().map(ToString::to_string).collect();
        write!(f, "{}:[{}]", self.0.start(), vals.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn run(id: &str, params: IdentityParams) -> Verdict {
        verify_operator_identity(id, &params).unwrap()
    }

    #[test]
    fn bernoulli_classical_pair() {
        let params = IdentityParams {
            order: 1,
            max_degree: 8,
            pair: Some(GhwPair::Classical { y: int(2) }),
            ..Default::default()
        };
        assert!(run("bernoulli-viskov", params).passed);
    }

    #[test]
    fn ghw_q_half() {
        let params = IdentityParams {
            psi: PsiSequence::q_deformed(rat(1, 2)).unwrap(),
            max_degree: 10,
            ..Default::default()
        };
        assert!(run("ghw", params).passed);
    }

    #[test]
    fn mixed_centers_break_ghw() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let params = IdentityParams {
            max_degree: 6,
            pair: Some(GhwPair::MixedPsi { psi, center: int(2) }),
            ..Default::default()
        };
        let v = run("ghw", params);
        assert!(!v.passed);
        let classical = IdentityParams {
            max_degree: 6,
            pair: Some(GhwPair::MixedPsi { psi: PsiSequence::classical(), center: int(2) }),
            ..Default::default()
        };
        assert!(run("ghw", classical).passed);
    }

    #[test]
    fn historical_expansions() {
        let p = IdentityParams { max_degree: 8, ..Default::default() };
        assert!(run("hist-eps0", p.clone()).passed);
        assert!(run("hist-div-diff", p.clone()).passed);
        let printed = run("hist-div-diff-printed", p);
        assert!(!printed.passed);
        let ce = printed.counterexample.unwrap();
        assert_eq!(ce.degree, Some(2));
        assert_eq!(ce.lhs, "3*x");
        assert_eq!(ce.rhs, "x");
    }

    #[test]
    fn one_minus_ab_example() {
        let a = OperatorSpec::Integral(int(1)).build(4).unwrap();
        let b = OperatorSpec::Derivative.build(4).unwrap();
        let x2 = Polynomial::monomial(int(1), 2);
        let ab = a.compose(&b).unwrap().apply(&x2).unwrap();
        assert_eq!(&x2 - &ab, Polynomial::one());
        let params = IdentityParams { alpha: int(1), max_degree: 6, ..Default::default() };
        assert!(run("one-minus-ab", params).passed);
    }

    #[test]
    fn telescoping_both_pairs() {
        let params = IdentityParams { alpha: rat(-2, 3), order: 4, max_degree: 7, ..Default::default() };
        let v = run("telescoping", params);
        assert!(v.passed, "{v:?}");
        assert!(v.cases > 100);
    }

    #[test]
    fn jackson_and_psi_representations() {
        for q in [rat(1, 2), int(2), rat(-1, 3)] {
            let params = IdentityParams {
                psi: PsiSequence::q_deformed(q).unwrap(),
                max_degree: 9,
                ..Default::default()
            };
            assert!(run("jackson-rep", params.clone()).passed);
            assert!(run("psi-rep", params).passed);
        }
        assert!(verify_operator_identity("jackson-rep", &IdentityParams::default()).is_err());
    }

    #[test]
    fn unknown_identity() {
        assert_eq!(
            verify_operator_identity("nope", &IdentityParams::default()).unwrap_err(),
            Error::UnknownIdentity("nope".into())
        );
    }
}
