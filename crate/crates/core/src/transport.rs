//! ψ-calculus carried over to an arbitrary graded basis `{q_n}`, `deg q_n = n`.
//!
//! With `B: x^n ↦ q_n` the basis isomorphism, every transported operator is a
//! conjugate `B ∘ T ∘ B^{-1}` of its monomial-basis counterpart:
//!
//! * `Q q_n = n_ψ q_{n-1}`,
//! * `x̂_Q q_n = ((n+1)/(n+1)_ψ) q_{n+1}`,
//! * `∫_Q q_n = q_{n+1}/(n+1)_ψ`,
//! * `f ⋆_Q g = f(x̂_Q) g`.
//!
//! Conjugation preserves every operator identity, in particular `[Q, x̂_Q] = 1`.
//! The strict variant uses `Q q_n = n q_{n-1}` regardless of ψ; it keeps
//! `x̂_Q` as above and so breaks the commutation relation whenever `n_ψ ≠ n`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::identities::{bernoulli_sides, compare_on};
use crate::operator::{LinearOperator, OperatorSpec};
use crate::poly::Polynomial;
use crate::psi::PsiSequence;
use crate::rational::{factorial, int, Rational};
use crate::sampling;
use crate::star::truncate;
use crate::verdict::{Checker, Verdict};

/// Polynomials `q_0, ..., q_N` with `deg q_n = n`, plus both change-of-basis maps.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedBasis {
    polys: Vec<Polynomial>,
    to_monomial: LinearOperator,
    from_monomial: LinearOperator,
}

impl GradedBasis {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::SingularBasis("basis is empty".into()));
        }
        for (n, q) in polys.iter().enumerate() {
            if q.degree() != Some(n) {
                return Err(Error::SingularBasis(format!(
                    "q_{n} = {q} has degree {}, expected {n}",
                    q.degree().map_or("-inf".to_string(), |d| d.to_string())
                )));
            }
        }
        let top = polys.len() - 1;
        let to_monomial = LinearOperator::from_basis("B", top, 0, |m| Ok(polys[m].clone()))?;
        // x^m = (q_m - sum_{j<m} c_j x^j) / lead(q_m), solved bottom-up.
        let mut inverse: Vec<Polynomial> = Vec::with_capacity(top + 1);
        for (m, q) in polys.iter().enumerate() {
            let lead = q.coeff(m);
            let mut rest = Polynomial::monomial(Rational::one(), m);
            for (j, c) in q.coeffs().iter().enumerate().take(m) {
                if !c.is_zero() {
                    rest = rest - inverse[j].scale(c);
                }
            }
            inverse.push(rest.scale(&(Rational::one() / lead)));
        }
        let from_monomial = LinearOperator::from_basis("B^-1", top, 0, |m| Ok(inverse[m].clone()))?;
        Ok(GradedBasis { polys, to_monomial, from_monomial })
    }

    pub fn monomial(top: usize) -> Result<Self> {
        Self::new((0..=top).map(|n| Polynomial::monomial(Rational::one(), n)).collect())
    }

    /// Falling powers `x^(n falling)`.
    pub fn falling(top: usize) -> Result<Self> {
        Self::new((0..=top).map(Polynomial::falling).collect())
    }

    /// `(x - c)^n`.
    pub fn shifted(center: &Rational, top: usize) -> Result<Self> {
        Self::new((0..=top).map(|n| Polynomial::shifted_power(center, n)).collect())
    }

    /// One polynomial per line in the expression grammar; line `n` is `q_n`.
    /// Blank lines and text after `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let polys = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(parse_expr)
            .collect::<Result<Vec<_>>>()?;
        Self::new(polys)
    }

    /// Monic basis `q_n = x^n + (random lower-order terms)`.
    pub fn random_monic(rng: &mut sampling::SuiteRng, top: usize) -> Result<Self> {
        let polys = (0..=top)
            .map(|n| {
                let mut coeffs: Vec<Rational> = (0..n).map(|_| sampling::rational(rng, 5)).collect();
                coeffs.push(Rational::one());
                Polynomial::new(coeffs)
            })
            .collect();
        Self::new(polys)
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn top_degree(&self) -> usize {
        self.polys.len() - 1
    }

    /// The map `x^n ↦ q_n`.
    pub fn to_monomial(&self) -> &LinearOperator {
        &self.to_monomial
    }

    /// The inverse map `q_n ↦ x^n`.
    pub fn from_monomial(&self) -> &LinearOperator {
        &self.from_monomial
    }

    fn conjugate(&self, op: &LinearOperator, name: &str) -> Result<LinearOperator> {
        Ok(self.to_monomial.compose(&op.compose(&self.from_monomial)?)?.with_name(name))
    }
}

/// `Q`, `x̂_Q`, `∫_Q` for one basis and one ψ.
#[derive(Clone, Debug)]
pub struct TransportedCalculus {
    basis: GradedBasis,
    psi: PsiSequence,
    derivative: LinearOperator,
    multiplication: LinearOperator,
    integral: LinearOperator,
}

impl TransportedCalculus {
    pub fn new(basis: GradedBasis, psi: PsiSequence) -> Result<Self> {
        Self::build(basis, psi, false)
    }

    /// Uses `Q q_n = n q_{n-1}` instead of `n_ψ q_{n-1}`.
    pub fn strict(basis: GradedBasis, psi: PsiSequence) -> Result<Self> {
        Self::build(basis, psi, true)
    }

    fn build(basis: GradedBasis, psi: PsiSequence, strict: bool) -> Result<Self> {
        let top = basis.top_degree();
        if top == 0 {
            return Err(Error::SingularBasis("transport needs at least q_0 and q_1".into()));
        }
        let zero = int(0);
        let d = if strict {
            OperatorSpec::Derivative.build(top)?
        } else {
            OperatorSpec::PsiDerivative { psi: psi.clone(), center: zero.clone() }.build(top)?
        };
        let x = OperatorSpec::PsiMultiplication { psi: psi.clone(), center: zero.clone() }.build(top - 1)?;
        let i = OperatorSpec::PsiIntegral { psi: psi.clone(), center: zero }.build(top - 1)?;
        Ok(TransportedCalculus {
            derivative: basis.conjugate(&d, "Q")?,
            multiplication: basis.conjugate(&x, "x̂_Q")?,
            integral: basis.conjugate(&i, "∫_Q")?,
            basis,
            psi,
        })
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn psi(&self) -> &PsiSequence {
        &self.psi
    }

    /// `Q`.
    pub fn derivative(&self) -> &LinearOperator {
        &self.derivative
    }

    /// `x̂_Q`.
    pub fn multiplication(&self) -> &LinearOperator {
        &self.multiplication
    }

    /// `∫_Q`.
    pub fn integral(&self) -> &LinearOperator {
        &self.integral
    }

    /// `f ⋆_Q g = f(x̂_Q) g`.
    pub fn star(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        let mut power = g.clone();
        for (i, c) in f.coeffs().iter().enumerate() {
            if i > 0 {
                power = self.multiplication.apply(&power)?;
            }
            out = out + power.scale(c);
        }
        Ok(out)
    }

    /// `x^(n⋆Q) = x̂_Q^n 1`.
    pub fn star_power(&self, n: usize) -> Result<Polynomial> {
        (0..n).try_fold(Polynomial::one(), |acc, _| self.multiplication.apply(&acc))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportSuite {
    Ghw,
    Bernoulli,
    StarLaw,
    Integration,
}

impl TransportSuite {
    pub const ALL: [TransportSuite; 4] =
        [TransportSuite::Ghw, TransportSuite::Bernoulli, TransportSuite::StarLaw, TransportSuite::Integration];

    pub fn name(self) -> &'static str {
        match self {
            TransportSuite::Ghw => "ghw",
            TransportSuite::Bernoulli => "bernoulli",
            TransportSuite::StarLaw => "star-law",
            TransportSuite::Integration => "integration",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
    }
}

/// Options for [`verify_transported`].
#[derive(Clone, Debug)]
pub struct TransportParams {
    /// Bernoulli orders `0..=order` are checked.
    pub order: usize,
    /// Random cases for the star-law suite.
    pub cases: usize,
    pub seed: u64,
    pub strict: bool,
}

impl Default for TransportParams {
    fn default() -> Self {
        TransportParams { order: 4, cases: 20, seed: 7, strict: false }
    }
}

/// Runs one suite in the transported basis on `q_0..q_N`, with
/// `N = basis.top_degree() - 1` (the range on which `x̂_Q` is defined).
pub fn verify_transported(
    basis: &GradedBasis,
    psi: &PsiSequence,
    suite: TransportSuite,
    params: &TransportParams,
) -> Result<Verdict> {
    let calc = if params.strict {
        TransportedCalculus::strict(basis.clone(), psi.clone())?
    } else {
        TransportedCalculus::new(basis.clone(), psi.clone())?
    };
    let top = basis.top_degree();
    let name = format!("transport-{}", suite.name());
    let mut checker = Checker::new(name);
    let q = calc.derivative();
    let x = calc.multiplication();
    match suite {
        TransportSuite::Ghw => {
            let basis_vecs = &basis.polys()[..top];
            let comm = q.commutator(x)?;
            compare_on(&mut checker, &comm, &LinearOperator::identity(top - 1), basis_vecs, "[Q, x̂_Q]")?;
        }
        TransportSuite::Bernoulli => {
            let order = params.order;
            if top < order + 2 {
                return Err(Error::CapExceeded { degree: order + 2, cap: top });
            }
            let basis_vecs = &basis.polys()[..top - order];
            for n in 0..=order {
                let (lhs, rhs) = bernoulli_sides(q, x, n)?;
                compare_on(&mut checker, &lhs, &rhs, basis_vecs, &format!("Bernoulli n={n}"))?;
            }
        }
        TransportSuite::Integration => {
            let basis_vecs = &basis.polys()[..top];
            let i = calc.integral();
            compare_on(&mut checker, &q.compose(i)?, &LinearOperator::identity(top - 1), basis_vecs, "Q∘∫_Q")?;
            for (n, qn) in basis_vecs.iter().enumerate() {
                let expected = basis.polys()[n + 1].scale(&(Rational::one() / psi.value(n + 1)?));
                if !checker.check(|| format!("∫_Q q_{n}"), Some(n), &i.apply(qn)?, &expected) {
                    break;
                }
            }
        }
        TransportSuite::StarLaw => star_law(&calc, &mut checker, params)?,
    }
    Ok(checker.finish())
}

fn star_law(calc: &TransportedCalculus, checker: &mut Checker, params: &TransportParams) -> Result<()> {
    let top = calc.basis().top_degree();
    let q = calc.derivative();
    let n_max = top - 1;

    // Q x^(n⋆) = n x^((n-1)⋆)
    let mut prev = Polynomial::zero();
    for n in 0..=n_max {
        let pn = calc.star_power(n)?;
        let lhs = q.apply(&pn)?;
        let rhs = prev.scale(&int(n as i64));
        if !checker.check(|| format!("Q x^({n}⋆)"), Some(n), &lhs, &rhs) {
            return Ok(());
        }
        prev = pn;
    }

    let mut rng = sampling::rng(params.seed);
    let half = n_max / 2;
    for case in 0..params.cases {
        // exp[αx] ⋆ exp_Q[βx] = exp_Q[(α+β)x], truncated at degree half
        let alpha = sampling::rational(&mut rng, 5);
        let beta = sampling::rational(&mut rng, 5);
        // compared in q-coordinates, where x̂_Q^k 1 is a multiple of q_k
        let lhs = calc.star(&exp_poly(&alpha, half), &exp_q(calc, &beta, half)?)?;
        let rhs = exp_q(calc, &(&alpha + &beta), half)?;
        let lhs = truncate(&calc.basis().from_monomial().apply(&lhs)?, half);
        let rhs = truncate(&calc.basis().from_monomial().apply(&rhs)?, half);
        if !checker.check(|| format!("exp law α={alpha} β={beta} (case {case})"), None, &lhs, &rhs) {
            return Ok(());
        }

        // Leibniz: Q(f ⋆ g) = (Df) ⋆ g + f ⋆ (Q g)
        let f = sampling::polynomial(&mut rng, half, 5);
        let g = sampling::polynomial(&mut rng, n_max - f.degree().unwrap_or(0), 5);
        let lhs = q.apply(&calc.star(&f, &g)?)?;
        let rhs = calc.star(&f.derivative(), &g)? + calc.star(&f, &q.apply(&g)?)?;
        if !checker.check(|| format!("Leibniz f={f} g={g}"), None, &lhs, &rhs) {
            return Ok(());
        }

        // f(x̂_Q) g(x̂_Q) 1 = f ⋆ (g(x̂_Q) 1)
        let g_tilde = calc.star(&g, &Polynomial::one())?;
        let lhs = operator_polynomial(calc, &f)?.compose(&operator_polynomial(calc, &g)?)?.apply(&Polynomial::one())?;
        let rhs = calc.star(&f, &g_tilde)?;
        if !checker.check(|| format!("substitution f={f} g={g}"), None, &lhs, &rhs) {
            return Ok(());
        }
    }
    Ok(())
}

/// `Σ_{n≤N} α^n x^n / n!`.
fn exp_poly(alpha: &Rational, n: usize) -> Polynomial {
    Polynomial::new((0..=n).map(|k| crate::rational::pow(alpha, k) / factorial(k)).collect())
}

/// `exp{β x̂_Q} 1` truncated after `x̂_Q^N`.
fn exp_q(calc: &TransportedCalculus, beta: &Rational, n: usize) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for k in 0..=n {
        out = out + calc.star_power(k)?.scale(&(crate::rational::pow(beta, k) / factorial(k)));
    }
    Ok(out)
}

/// `f(x̂_Q)` as a tabulated operator.
fn operator_polynomial(calc: &TransportedCalculus, f: &Polynomial) -> Result<LinearOperator> {
    let x = calc.multiplication();
    let mut acc = LinearOperator::zero(x.cap());
    for (i, c) in f.coeffs().iter().enumerate() {
        acc = acc.add(&x.pow(i)?.scale(c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn inverse_change_of_basis() {
        let mut rng = sampling::rng(3);
        let b = GradedBasis::random_monic(&mut rng, 8).unwrap();
        let id = b.to_monomial().compose(b.from_monomial()).unwrap();
        assert_eq!(id, LinearOperator::identity(8).with_name(id.name()));
        for (n, q) in b.polys().iter().enumerate() {
            assert_eq!(b.from_monomial().apply(q).unwrap(), Polynomial::monomial(int(1), n));
        }
    }

    #[test]
    fn monomial_basis_recovers_psi_operators() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let calc = TransportedCalculus::new(GradedBasis::monomial(9).unwrap(), psi.clone()).unwrap();
        let d = OperatorSpec::PsiDerivative { psi: psi.clone(), center: int(0) }.build(9).unwrap();
        let x = OperatorSpec::PsiMultiplication { psi, center: int(0) }.build(8).unwrap();
        assert_eq!(calc.derivative().first_difference(&d, 9).unwrap(), None);
        assert_eq!(calc.multiplication().first_difference(&x, 8).unwrap(), None);
    }

    #[test]
    fn falling_basis_gives_difference_calculus() {
        let calc = TransportedCalculus::new(GradedBasis::falling(11).unwrap(), PsiSequence::classical()).unwrap();
        let delta = OperatorSpec::ForwardDifference.build(11).unwrap();
        assert_eq!(calc.derivative().first_difference(&delta, 10).unwrap(), None);
        let xe = OperatorSpec::MultiplyByXMinus(int(0))
            .build(10)
            .unwrap()
            .compose(&OperatorSpec::Shift(int(-1)).build(10).unwrap())
            .unwrap();
        assert_eq!(calc.multiplication().first_difference(&xe, 10).unwrap(), None);
    }

    #[test]
    fn shifted_basis_gives_centered_operators() {
        let psi = PsiSequence::q_deformed(rat(-1, 3)).unwrap();
        let c = rat(5, 2);
        let calc = TransportedCalculus::new(GradedBasis::shifted(&c, 8).unwrap(), psi.clone()).unwrap();
        let d = OperatorSpec::PsiDerivative { psi: psi.clone(), center: c.clone() }.build(8).unwrap();
        let z = OperatorSpec::PsiMultiplication { psi, center: c }.build(7).unwrap();
        assert_eq!(calc.derivative().first_difference(&d, 8).unwrap(), None);
        assert_eq!(calc.multiplication().first_difference(&z, 7).unwrap(), None);
    }

    #[test]
    fn transported_derivative_on_basis() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let mut rng = sampling::rng(11);
        let b = GradedBasis::random_monic(&mut rng, 7).unwrap();
        let calc = TransportedCalculus::new(b.clone(), psi.clone()).unwrap();
        for n in 1..=7 {
            let expected = b.polys()[n - 1].scale(&psi.value(n).unwrap());
            assert_eq!(calc.derivative().apply(&b.polys()[n]).unwrap(), expected);
        }
    }

    #[test]
    fn suites_pass_in_transported_bases() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let mut rng = sampling::rng(5);
        let bases = [
            GradedBasis::falling(10).unwrap(),
            GradedBasis::random_monic(&mut rng, 9).unwrap(),
            GradedBasis::monomial(9).unwrap(),
        ];
        for b in &bases {
            for suite in TransportSuite::ALL {
                let v = verify_transported(b, &psi, suite, &TransportParams::default()).unwrap();
                assert!(v.passed, "{suite:?}: {v:?}");
            }
        }
    }

    #[test]
    fn strict_derivative_breaks_commutator() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let params = TransportParams { strict: true, ..Default::default() };
        let v = verify_transported(&GradedBasis::falling(8).unwrap(), &psi, TransportSuite::Ghw, &params).unwrap();
        assert!(!v.passed);
        let classical =
            verify_transported(&GradedBasis::falling(8).unwrap(), &PsiSequence::classical(), TransportSuite::Ghw, &params)
                .unwrap();
        assert!(classical.passed);
    }

    #[test]
    fn singular_bases_rejected() {
        let bad = vec![Polynomial::one(), Polynomial::from_ints(&[0, 0, 1])];
        assert!(matches!(GradedBasis::new(bad), Err(Error::SingularBasis(_))));
        assert!(matches!(GradedBasis::new(vec![Polynomial::zero()]), Err(Error::SingularBasis(_))));
        let parsed = GradedBasis::parse("1\nx - 1 # shifted\n(x-1)^2\n").unwrap();
        assert_eq!(parsed.polys()[2], Polynomial::from_ints(&[1, -2, 1]));
    }
}
