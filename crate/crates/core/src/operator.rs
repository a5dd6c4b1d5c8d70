//! Linear operators on the degree-capped polynomial space.
//!
//! A [`LinearOperator`] is stored as its action on the monomial basis
//! `x^0, ..., x^cap` together with a declared degree shift `d` such that
//! `deg(A x^m) <= m + d`. Composition tracks caps so that an image is never
//! truncated: applying an operator to a polynomial above its cap is an error.
//!
//! [`OperatorSpec`] names every concrete operator the engine knows about and
//! can act on polynomials directly or be tabulated into a `LinearOperator`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::integration::psi_antiderivative;
use crate::poly::{GridFunction, Polynomial};
use crate::psi::PsiSequence;
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    name: String,
    cap: usize,
    shift: i64,
    columns: Vec<Polynomial>,
}

impl LinearOperator {
    /// Tabulates `action` on `x^0..=x^cap`. Fails if an image breaks the declared shift.
    pub fn from_basis(
        name: impl Into<String>,
        cap: usize,
        shift: i64,
        mut action: impl FnMut(usize) -> Result<Polynomial>,
    ) -> Result<Self> {
        let name = name.into();
        let mut columns = Vec::with_capacity(cap + 1);
        for m in 0..=cap {
            let image = action(m)?;
            if let Some(d) = image.degree() {
                if d as i64 > m as i64 + shift {
                    return Err(Error::InvalidArgument(format!(
                        "{name}: image of x^{m} has degree {d}, above the declared shift {shift}"
                    )));
                }
            }
            columns.push(image);
        }
        Ok(LinearOperator { name, cap, shift, columns })
    }

    pub fn identity(cap: usize) -> Self {
        LinearOperator {
            name: "1".into(),
            cap,
            shift: 0,
            columns: (0..=cap).map(|m| Polynomial::monomial(Rational::one(), m)).collect(),
        }
    }

    pub fn zero(cap: usize) -> Self {
        LinearOperator { name: "0".into(), cap, shift: 0, columns: vec![Polynomial::zero(); cap + 1] }
    }

    /// Diagonal operator `x^m ↦ weight(m) x^m`.
    pub fn diagonal(
        name: impl Into<String>,
        cap: usize,
        mut weight: impl FnMut(usize) -> Result<Rational>,
    ) -> Result<Self> {
        Self::from_basis(name, cap, 0, |m| Ok(Polynomial::monomial(weight(m)?, m)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Image of `x^m`.
    pub fn column(&self, m: usize) -> Result<&Polynomial> {
        self.columns.get(m).ok_or(Error::CapExceeded { degree: m, cap: self.cap })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if let Some(d) = p.degree() {
            if d > self.cap {
                return Err(Error::CapExceeded { degree: d, cap: self.cap });
            }
        }
        let mut out = Polynomial::zero();
        for (m, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = out + self.columns[m].scale(c);
            }
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<Self> {
        let cap = (inner.cap as i64).min(self.cap as i64 - inner.shift);
        if cap < 0 {
            return Err(Error::CapExceeded { degree: inner.shift.max(0) as usize, cap: self.cap });
        }
        let cap = cap as usize;
        let columns = (0..=cap)
            .map(|m| self.apply(&inner.columns[m]))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearOperator {
            name: format!("{}∘{}", self.name, inner.name),
            cap,
            shift: self.shift + inner.shift,
            columns,
        })
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = LinearOperator::identity(self.cap);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc.with_name(format!("{}^{k}", self.name)))
    }

    fn zip(
        &self,
        other: &LinearOperator,
        name: String,
        f: impl Fn(&Polynomial, &Polynomial) -> Polynomial,
    ) -> Self {
        let cap = self.cap.min(other.cap);
        LinearOperator {
            name,
            cap,
            shift: self.shift.max(other.shift),
            columns: (0..=cap).map(|m| f(&self.columns[m], &other.columns[m])).collect(),
        }
    }

    pub fn add(&self, other: &LinearOperator) -> Self {
        self.zip(other, format!("({} + {})", self.name, other.name), |a, b| a + b)
    }

    pub fn sub(&self, other: &LinearOperator) -> Self {
        self.zip(other, format!("({} - {})", self.name, other.name), |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LinearOperator {
            name: format!("{c}·{}", self.name),
            cap: self.cap,
            shift: self.shift,
            columns: self.columns.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn commutator(&self, other: &LinearOperator) -> Result<Self> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(ab.sub(&ba).with_name(format!("[{}, {}]", self.name, other.name)))
    }

    /// First basis degree `m <= upto` where the two operators differ.
    pub fn first_difference(&self, other: &LinearOperator, upto: usize) -> Result<Option<usize>> {
        let cap = self.cap.min(other.cap);
        if upto > cap {
            return Err(Error::CapExceeded { degree: upto, cap });
        }
        Ok((0..=upto).find(|&m| self.columns[m] != other.columns[m]))
    }
}

/// Combinators exposed under one entry point.
#[derive(Clone, Debug, PartialEq)]
pub enum Combine {
    Compose,
    Add,
    Scale(Rational),
    Commutator,
}

/// Folds `ops` with the given combinator (compose is right-to-left application order,
/// i.e. `ops[0] ∘ ops[1] ∘ ...`).
pub fn combine(ops: &[LinearOperator], kind: &Combine) -> Result<LinearOperator> {
    let first = ops.first().ok_or_else(|| Error::InvalidArgument("no operators to combine".into()))?;
    match kind {
        Combine::Scale(c) => {
            if ops.len() != 1 {
                return Err(Error::InvalidArgument("scale takes exactly one operator".into()));
            }
            Ok(first.scale(c))
        }
        Combine::Commutator => {
            if ops.len() != 2 {
                return Err(Error::InvalidArgument("commutator takes exactly two operators".into()));
            }
            first.commutator(&ops[1])
        }
        Combine::Add => Ok(ops[1..].iter().fold(first.clone(), |acc, op| acc.add(op))),
        Combine::Compose => ops[1..].iter().try_fold(first.clone(), |acc, op| acc.compose(op)),
    }
}

/// Every named operator, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    /// `D = d/dx`.
    Derivative,
    /// `∂₀ x^n = x^(n-1)`, i.e. `(f(x) - f(0))/x`.
    DividedDifference,
    /// `ε_α f = f(α)` as a constant polynomial.
    Evaluation(Rational),
    /// `∂_ψ` in the `(x - center)` basis: `(x-β)^m ↦ m_ψ (x-β)^(m-1)`.
    PsiDerivative { psi: PsiSequence, center: Rational },
    /// `ẑ_ψ` in the `(x - center)` basis: `(x-β)^m ↦ ((m+1)/(m+1)_ψ) (x-β)^(m+1)`.
    /// With center 0 this is `x̂_ψ`.
    PsiMultiplication { psi: PsiSequence, center: Rational },
    /// `x̂ - y`, multiplication by `x - y`.
    MultiplyByXMinus(Rational),
    /// `Δ f(x) = f(x+1) - f(x)`.
    ForwardDifference,
    /// `∇ f(x) = f(x) - f(x-1)`.
    BackwardDifference,
    /// `E^a f(x) = f(x + a)`.
    Shift(Rational),
    /// `Q̂ f(x) = f(qx)`.
    Dilation(Rational),
    /// `n̂_ψ x^(n-1) = n_ψ x^(n-1)`.
    Number(PsiSequence),
    /// `∫_α^x f(t) dt`.
    Integral(Rational),
    /// ψ-antiderivative around `center`, zero at the center.
    PsiIntegral { psi: PsiSequence, center: Rational },
    /// `(a f)(x) = sum_{k=base}^{x-1} f(k)`.
    Summation(i64),
    Identity,
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::Derivative => f.write_str("D"),
            OperatorSpec::DividedDifference => f.write_str("∂₀"),
            OperatorSpec::Evaluation(a) => write!(f, "ε[{a}]"),
            OperatorSpec::PsiDerivative { psi, center } => write!(f, "∂ψ[{},{center}]", psi.label()),
            OperatorSpec::PsiMultiplication { psi, center } => write!(f, "ẑψ[{},{center}]", psi.label()),
            OperatorSpec::MultiplyByXMinus(y) => write!(f, "(x̂-{y})"),
            OperatorSpec::ForwardDifference => f.write_str("Δ"),
            OperatorSpec::BackwardDifference => f.write_str("∇"),
            OperatorSpec::Shift(a) => write!(f, "E^{a}"),
            OperatorSpec::Dilation(q) => write!(f, "Q̂[{q}]"),
            OperatorSpec::Number(psi) => write!(f, "n̂ψ[{}]", psi.label()),
            OperatorSpec::Integral(a) => write!(f, "∫[{a}]"),
            OperatorSpec::PsiIntegral { psi, center } => write!(f, "∫ψ[{},{center}]", psi.label()),
            OperatorSpec::Summation(b) => write!(f, "Σ[{b}]"),
            OperatorSpec::Identity => f.write_str("1"),
        }
    }
}

impl OperatorSpec {
    /// Declared degree shift.
    pub fn degree_shift(&self) -> i64 {
        match self {
            OperatorSpec::Derivative
            | OperatorSpec::DividedDifference
            | OperatorSpec::PsiDerivative { .. }
            | OperatorSpec::ForwardDifference
            | OperatorSpec::BackwardDifference => -1,
            OperatorSpec::PsiMultiplication { .. }
            | OperatorSpec::MultiplyByXMinus(_)
            | OperatorSpec::Integral(_)
            | OperatorSpec::PsiIntegral { .. }
            | OperatorSpec::Summation(_) => 1,
            OperatorSpec::Evaluation(_)
            | OperatorSpec::Shift(_)
            | OperatorSpec::Dilation(_)
            | OperatorSpec::Number(_)
            | OperatorSpec::Identity => 0,
        }
    }

    /// Acts on a polynomial of any degree.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(match self {
            OperatorSpec::Derivative => p.derivative(),
            OperatorSpec::DividedDifference => Polynomial::new(p.coeffs().iter().skip(1).cloned().collect()),
            OperatorSpec::Evaluation(a) => Polynomial::constant(p.evaluate(a)),
            OperatorSpec::PsiDerivative { psi, center } => psi_derivative(p, psi, center)?,
            OperatorSpec::PsiMultiplication { psi, center } => psi_multiply(p, psi, center)?,
            OperatorSpec::MultiplyByXMinus(y) => p * &Polynomial::new(vec![-y.clone(), Rational::one()]),
            OperatorSpec::ForwardDifference => &p.shift(&Rational::one()) - p,
            OperatorSpec::BackwardDifference => p - &p.shift(&-Rational::one()),
            OperatorSpec::Shift(a) => p.shift(a),
            OperatorSpec::Dilation(q) => p.dilate(q),
            OperatorSpec::Number(psi) => {
                let coeffs = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(m, c)| Ok(c * psi.value(m + 1)?))
                    .collect::<Result<Vec<_>>>()?;
                Polynomial::new(coeffs)
            }
            OperatorSpec::Integral(a) => {
                let anti = p.antiderivative();
                &anti - &Polynomial::constant(anti.evaluate(a))
            }
            OperatorSpec::PsiIntegral { psi, center } => psi_antiderivative(p, psi, center)?,
            OperatorSpec::Summation(base) => summation(p, *base),
            OperatorSpec::Identity => p.clone(),
        })
    }

    /// Acts on a grid function. Only `Δ`, `∇`, summation from the grid start and the identity apply.
    pub fn apply_grid(&self, g: &GridFunction) -> Result<GridFunction> {
        match self {
            OperatorSpec::ForwardDifference => g.forward_difference(),
            OperatorSpec::BackwardDifference => g.backward_difference(),
            OperatorSpec::Summation(base) if *base == g.start() => Ok(g.summation()),
            OperatorSpec::Summation(base) => Err(Error::InvalidArgument(format!(
                "summation base {base} must equal the grid start {}",
                g.start()
            ))),
            OperatorSpec::Identity => Ok(g.clone()),
            other => Err(Error::InvalidArgument(format!("{other} does not act on grid functions"))),
        }
    }

    /// Tabulates the operator on `x^0..=x^cap`.
    pub fn build(&self, cap: usize) -> Result<LinearOperator> {
        LinearOperator::from_basis(self.to_string(), cap, self.degree_shift(), |m| {
            self.apply(&Polynomial::monomial(Rational::one(), m))
        })
    }
}

/// Input or output of [`operator_action`].
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Poly(Polynomial),
    Grid(GridFunction),
}

/// Applies a named operator, enforcing `cap` on polynomial inputs.
pub fn operator_action(spec: &OperatorSpec, input: &Operand, cap: usize) -> Result<Operand> {
    match input {
        Operand::Poly(p) => {
            if let Some(d) = p.degree() {
                if d > cap {
                    return Err(Error::CapExceeded { degree: d, cap });
                }
            }
            spec.apply(p).map(Operand::Poly)
        }
        Operand::Grid(g) => spec.apply_grid(g).map(Operand::Grid),
    }
}

/// `∂_ψ` around `center`.
pub fn psi_derivative(p: &Polynomial, psi: &PsiSequence, center: &Rational) -> Result<Polynomial> {
    let c = p.rebase(center);
    let out = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, a)| Ok(a * psi.value(m)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_rebased(out, center))
}

/// `ẑ_ψ` around `center` (`x̂_ψ` when the center is 0).
pub fn psi_multiply(p: &Polynomial, psi: &PsiSequence, center: &Rational) -> Result<Polynomial> {
    let c = p.rebase(center);
    let mut out = vec![Rational::zero()];
    for (m, a) in c.iter().enumerate() {
        out.push(a * int(m as i64 + 1) / psi.value(m + 1)?);
    }
    Ok(Polynomial::from_rebased(out, center))
}

/// Indefinite sum `x ↦ sum_{k=base}^{x-1} p(k)`, as a polynomial in `x`.
pub fn summation(p: &Polynomial, base: i64) -> Polynomial {
    let b = p.to_falling();
    let mut shifted = vec![Rational::zero()];
    shifted.extend(b.iter().enumerate().map(|(j, c)| c / int(j as i64 + 1)));
    let s = Polynomial::from_falling(&shifted);
    let at_base = s.evaluate(&int(base));
    &s - &Polynomial::constant(at_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn q_half() -> PsiSequence {
        PsiSequence::q_deformed(rat(1, 2)).unwrap()
    }

    fn mono(n: usize) -> Polynomial {
        Polynomial::monomial(Rational::one(), n)
    }

    #[test]
    fn action_examples() {
        let d = OperatorSpec::PsiDerivative { psi: q_half(), center: int(0) };
        assert_eq!(d.apply(&mono(3)).unwrap(), Polynomial::monomial(rat(7, 4), 2));
        assert_eq!(OperatorSpec::ForwardDifference.apply(&mono(2)).unwrap(), Polynomial::from_ints(&[1, 2]));
        let xh = OperatorSpec::PsiMultiplication { psi: q_half(), center: int(0) };
        assert_eq!(xh.apply(&mono(2)).unwrap(), Polynomial::monomial(rat(12, 7), 3));
    }

    #[test]
    fn centered_action_in_shifted_basis() {
        let beta = rat(3, 2);
        let psi = q_half();
        let d = OperatorSpec::PsiDerivative { psi: psi.clone(), center: beta.clone() };
        let z = OperatorSpec::PsiMultiplication { psi: psi.clone(), center: beta.clone() };
        for m in 0..6 {
            let basis = Polynomial::shifted_power(&beta, m);
            let expected_d = if m == 0 {
                Polynomial::zero()
            } else {
                Polynomial::shifted_power(&beta, m - 1).scale(&psi.value(m).unwrap())
            };
            assert_eq!(d.apply(&basis).unwrap(), expected_d);
            let coef = int(m as i64 + 1) / psi.value(m + 1).unwrap();
            assert_eq!(z.apply(&basis).unwrap(), Polynomial::shifted_power(&beta, m + 1).scale(&coef));
        }
    }

    #[test]
    fn commutator_examples() {
        let cap = 8;
        let d = OperatorSpec::PsiDerivative { psi: q_half(), center: int(0) }.build(cap).unwrap();
        let x = OperatorSpec::PsiMultiplication { psi: q_half(), center: int(0) }.build(cap).unwrap();
        let c = combine(&[d, x], &Combine::Commutator).unwrap();
        assert_eq!(c.apply(&mono(2)).unwrap(), mono(2));

        let d = OperatorSpec::Derivative.build(cap).unwrap();
        let x = OperatorSpec::MultiplyByXMinus(int(0)).build(cap).unwrap();
        assert_eq!(d.commutator(&x).unwrap().apply(&mono(5)).unwrap(), mono(5));
    }

    #[test]
    fn difference_after_summation_on_grid() {
        let g = GridFunction::new((0..=6).map(|r| int(r * r)).collect()).unwrap();
        let summed = OperatorSpec::Summation(0).apply_grid(&g).unwrap();
        let back = OperatorSpec::ForwardDifference.apply_grid(&summed).unwrap();
        assert_eq!(back.get(4).unwrap(), &int(16));
        assert_eq!(back, g);
    }

    #[test]
    fn polynomial_summation() {
        // sum_{k<x} k^2 = x(x-1)(2x-1)/6
        let s = summation(&mono(2), 0);
        for x in 0..8i64 {
            assert_eq!(s.evaluate(&int(x)), int((0..x).map(|k| k * k).sum()));
        }
        let s3 = summation(&mono(1), 3);
        assert_eq!(s3.evaluate(&int(6)), int(3 + 4 + 5));
    }

    #[test]
    fn cap_is_enforced() {
        let d = OperatorSpec::Derivative.build(3).unwrap();
        assert_eq!(d.apply(&mono(4)).unwrap_err(), Error::CapExceeded { degree: 4, cap: 3 });
        let x = OperatorSpec::MultiplyByXMinus(int(0)).build(3).unwrap();
        let xx = x.compose(&x).unwrap();
        assert_eq!(xx.cap(), 2);
        assert!(xx.apply(&mono(3)).is_err());
        let grid = GridFunction::new(vec![int(1)]).unwrap();
        assert!(matches!(
            operator_action(&OperatorSpec::ForwardDifference, &Operand::Grid(grid), 3),
            Err(Error::GridDomainTooSmall { .. })
        ));
    }

    #[test]
    fn shift_and_dilation() {
        let p = Polynomial::from_ints(&[1, 2, 3]);
        let e = OperatorSpec::Shift(int(2)).apply(&p).unwrap();
        assert_eq!(e.evaluate(&int(1)), p.evaluate(&int(3)));
        let q = OperatorSpec::Dilation(rat(1, 3)).apply(&p).unwrap();
        assert_eq!(q.evaluate(&int(3)), p.evaluate(&int(1)));
    }
}
