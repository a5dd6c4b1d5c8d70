//! Dense univariate polynomials over [`Rational`] and integer-grid functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{factorial, int, Rational};

/// Coefficients in the monomial basis, index `i` holding the coefficient of `x^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial is the empty
/// vector and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * x^n`.
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, point: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * point + c)
    }

    /// Coefficients `c` with `p(x) = sum c_m (x - center)^m`.
    pub fn rebase(&self, center: &Rational) -> Vec<Rational> {
        let mut a = self.coeffs.clone();
        if center.is_zero() || a.len() < 2 {
            return a;
        }
        let n = a.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let carry = center * &a[j + 1];
                a[j] += carry;
            }
        }
        a
    }

    /// Inverse of [`Polynomial::rebase`].
    pub fn from_rebased(coeffs: Vec<Rational>, center: &Rational) -> Self {
        Self::new(coeffs).shift(&-center)
    }

    /// `p(x + a)`.
    pub fn shift(&self, a: &Rational) -> Self {
        Self::new(self.rebase(a))
    }

    /// `p(c x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut power = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// The antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / int(i as i64 + 1)),
        );
        Self::new(out)
    }

    /// `int_a^b p(t) dt`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.evaluate(b) - anti.evaluate(a)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `(x - center)^n`.
    pub fn shifted_power(center: &Rational, n: usize) -> Self {
        Self::new(vec![-center.clone(), Rational::one()]).pow(n)
    }

    /// The falling power `x(x-1)...(x-n+1)` as a polynomial in `x`.
    pub fn falling(n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, j| {
            &acc * &Self::new(vec![int(-(j as i64)), Rational::one()])
        })
    }

    /// Newton coefficients `b` with `p(x) = sum b_j x^(j falling)`.
    pub fn to_falling(&self) -> Vec<Rational> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        let mut table: Vec<Rational> = (0..=deg as i64).map(|i| self.evaluate(&int(i))).collect();
        let mut out = Vec::with_capacity(deg + 1);
        for j in 0..=deg {
            out.push(&table[0] / factorial(j));
            for i in 0..table.len() - 1 {
                table[i] = &table[i + 1] - &table[i];
            }
            table.pop();
        }
        out
    }

    pub fn from_falling(coeffs: &[Rational]) -> Self {
        coeffs
            .iter()
            .enumerate()
            .fold(Self::zero(), |acc, (j, b)| acc + Self::falling(j).scale(b))
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Renders in the expression grammar accepted by [`crate::expr::parse_expr`],
/// highest degree first, e.g. `1/2*x^2 - 3`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact values on a contiguous integer range `start..=end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    start: i64,
    values: Vec<Rational>,
}

impl GridFunction {
    /// Values on `0..=values.len()-1`. Errors on an empty list.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        Self::with_start(0, values)
    }

    pub fn with_start(start: i64, values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("grid function needs at least one value".into()));
        }
        Ok(GridFunction { start, values })
    }

    /// `p` sampled on `0..=last`.
    pub fn sample(p: &Polynomial, last: i64) -> Self {
        GridFunction {
            start: 0,
            values: (0..=last.max(0)).map(|i| p.evaluate(&int(i))).collect(),
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: i64) -> Result<&Rational> {
        if i < self.start || i > self.end() {
            return Err(self.too_small(i));
        }
        Ok(&self.values[(i - self.start) as usize])
    }

    fn too_small(&self, needed: i64) -> Error {
        Error::GridDomainTooSmall { needed, start: self.start, end: self.end() }
    }

    /// `(Delta f)(x) = f(x+1) - f(x)` on `start..=end-1`.
    pub fn forward_difference(&self) -> Result<Self> {
        if self.values.len() < 2 {
            return Err(self.too_small(self.end() + 1));
        }
        Ok(GridFunction {
            start: self.start,
            values: self.values.windows(2).map(|w| &w[1] - &w[0]).collect(),
        })
    }

    /// `(nabla f)(x) = f(x) - f(x-1)` on `start+1..=end`.
    pub fn backward_difference(&self) -> Result<Self> {
        if self.values.len() < 2 {
            return Err(self.too_small(self.start - 1));
        }
        Ok(GridFunction {
            start: self.start + 1,
            values: self.values.windows(2).map(|w| &w[1] - &w[0]).collect(),
        })
    }

    /// `(a f)(x) = sum_{k=start}^{x-1} f(k)` on `start..=end+1`.
    pub fn summation(&self) -> Self {
        let mut acc = Rational::zero();
        let mut values = Vec::with_capacity(self.values.len() + 1);
        values.push(acc.clone());
        for v in &self.values {
            acc += v;
            values.push(acc.clone());
        }
        GridFunction { start: self.start, values }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GridFunction { start: self.start, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Pointwise `self - other` on the common range.
    pub fn sub_common(&self, other: &GridFunction) -> Result<Self> {
        let lo = self.start.max(other.start);
        let hi = self.end().min(other.end());
        if lo > hi {
            return Err(Error::InvalidArgument("grid functions have disjoint domains".into()));
        }
        let values = (lo..=hi)
            .map(|i| Ok(self.get(i)? - other.get(i)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { start: lo, values })
    }

    /// Restriction to `lo..=hi`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        let values = (lo..=hi).map(|i| self.get(i).cloned()).collect::<Result<Vec<_>>>()?;
        Self::with_start(lo, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p(&[1, 0, 1]) + p(&[-1, 1]), p(&[0, 1, 1]));
        assert_eq!(p(&[-1, 1]) * p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[0, 0, 0, 1]).evaluate(&int(2)), int(8));
        assert_eq!(p(&[1, 2]) - p(&[1, 2]), Polynomial::zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn rebase_examples() {
        assert_eq!(p(&[0, 0, 1]).rebase(&int(1)), vec![int(1), int(2), int(1)]);
        assert_eq!(p(&[0, 0, 0, 1]).rebase(&int(0)), vec![int(0), int(0), int(0), int(1)]);
        assert_eq!(p(&[0, -2, 1]).rebase(&int(1)), vec![int(-1), int(0), int(1)]);
    }

    #[test]
    fn rebase_round_trip() {
        let f = Polynomial::new(vec![rat(1, 3), int(-2), rat(5, 7), int(4)]);
        let c = rat(-3, 2);
        assert_eq!(Polynomial::from_rebased(f.rebase(&c), &c), f);
    }

    #[test]
    fn falling_basis_round_trip() {
        let f = Polynomial::new(vec![rat(1, 3), int(-2), rat(5, 7), int(4)]);
        assert_eq!(Polynomial::from_falling(&f.to_falling()), f);
        assert_eq!(Polynomial::falling(3), p(&[0, 2, -3, 1]));
    }

    #[test]
    fn render() {
        assert_eq!(p(&[0, 2, 0, 1]).to_string(), "x^3 + 2*x");
        assert_eq!(Polynomial::new(vec![int(-3), int(0), rat(1, 2)]).to_string(), "1/2*x^2 - 3");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn grid_operators() {
        let g = GridFunction::sample(&p(&[0, 0, 1]), 4);
        let d = g.forward_difference().unwrap();
        assert_eq!(d.values(), &[int(1), int(3), int(5), int(7)]);
        let n = g.backward_difference().unwrap();
        assert_eq!((n.start(), n.end()), (1, 4));
        assert_eq!(n.get(2).unwrap(), &int(3));
        let s = g.summation();
        assert_eq!(s.end(), 5);
        assert_eq!(s.get(4).unwrap(), &int(14));
        let single = GridFunction::new(vec![int(1)]).unwrap();
        assert!(matches!(single.forward_difference(), Err(Error::GridDomainTooSmall { .. })));
        assert!(g.get(5).is_err());
    }
}
