//! ψ-sequences `n ↦ n_ψ` and the quantities derived from them.
//!
//! Three kinds are supported:
//!
//! * classical, `n_ψ = n`;
//! * q-deformed, `n_q = 1 + q + ... + q^(n-1) = (1 - q^n)/(1 - q)`;
//! * custom, either a finite table (for instance loaded from a file) or a
//!   generator closure.
//!
//! The q-formula is the one that makes the operator `(1 - qQ)/(1 - q) ∘ ∂₀`,
//! with `Q f(x) = f(qx)` and `∂₀ x^n = x^(n-1)`, agree with `∂_ψ` on every
//! monomial: `(1 - qQ) x^(n-1) = (1 - q^n) x^(n-1)`.
//!
//! Values are validated lazily. Asking for `n_ψ` with `n ≥ 1` fails with
//! [`Error::ZeroPsiValue`] when the value vanishes (e.g. `q = -1`, `n = 2`).

use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, int, parse_rational, Rational};

type Generator = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

#[derive(Clone)]
pub enum PsiKind {
    Classical,
    QDeformed(Rational),
    /// `values[n-1] = n_ψ` for `n = 1..=values.len()`.
    Table(Vec<Rational>),
    Generated { name: String, rule: Generator },
}

impl fmt::Debug for PsiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiKind::Classical => f.write_str("Classical"),
            PsiKind::QDeformed(q) => write!(f, "QDeformed({q})"),
            PsiKind::Table(v) => write!(f, "Table(len {})", v.len()),
            PsiKind::Generated { name, .. } => write!(f, "Generated({name})"),
        }
    }
}

/// A validated ψ-sequence. Cloning is cheap; clones share the value cache.
#[derive(Clone, Debug)]
pub struct PsiSequence {
    kind: PsiKind,
    // cache[n] = n_ψ, cache[0] = 0_ψ (unused, kept for indexing)
    cache: Arc<RwLock<Vec<Rational>>>,
}

impl PsiSequence {
    pub fn classical() -> Self {
        Self::from_kind(PsiKind::Classical)
    }

    /// The q-deformed sequence. Rejects `q = 1` and any `q` that makes
    /// `2_q = 1 + q` vanish; later zeros are caught per query.
    pub fn q_deformed(q: Rational) -> Result<Self> {
        if q.is_one() {
            return Err(Error::InvalidQ);
        }
        let psi = Self::from_kind(PsiKind::QDeformed(q));
        psi.value(2)?;
        Ok(psi)
    }

    /// A finite table `[1_ψ, 2_ψ, ...]`. Every entry must be nonzero.
    pub fn table(values: Vec<Rational>) -> Result<Self> {
        if let Some(i) = values.iter().position(Zero::is_zero) {
            return Err(Error::ZeroPsiValue(i + 1));
        }
        Ok(Self::from_kind(PsiKind::Table(values)))
    }

    pub fn generated(
        name: impl Into<String>,
        rule: impl Fn(usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self::from_kind(PsiKind::Generated { name: name.into(), rule: Arc::new(rule) })
    }

    /// Reads one rational per line (line `n` holds `n_ψ`); blank lines and
    /// text after `#` are ignored.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for line in text.lines() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            values.push(parse_rational(body)?);
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("psi table is empty".into()));
        }
        Self::table(values)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_table(&text)
    }

    fn from_kind(kind: PsiKind) -> Self {
        PsiSequence { kind, cache: Arc::new(RwLock::new(vec![Rational::zero()])) }
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.kind, PsiKind::Classical)
    }

    /// Largest `n` for which `n_ψ` is defined, if the sequence is finite.
    pub fn range(&self) -> Option<usize> {
        match &self.kind {
            PsiKind::Table(v) => Some(v.len()),
            _ => None,
        }
    }

    fn raw(&self, n: usize) -> Result<Rational> {
        Ok(match &self.kind {
            PsiKind::Classical => int(n as i64),
            PsiKind::QDeformed(q) => {
                let mut acc = Rational::zero();
                let mut power = Rational::one();
                for _ in 0..n {
                    acc += &power;
                    power *= q;
                }
                acc
            }
            PsiKind::Table(v) => v
                .get(n - 1)
                .cloned()
                .ok_or(Error::PsiOutOfRange { requested: n, available: v.len() })?,
            PsiKind::Generated { rule, .. } => rule(n),
        })
    }

    /// `n_ψ` for `n ≥ 1`; `0_ψ` is reported as 0.
    pub fn value(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.cache.read().expect("psi cache poisoned").get(n) {
            return Ok(v.clone());
        }
        let mut cache = self.cache.write().expect("psi cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            let v = self.raw(k)?;
            if v.is_zero() {
                return Err(Error::ZeroPsiValue(k));
            }
            cache.push(v);
        }
        Ok(cache[n].clone())
    }

    /// Validates `1_ψ, ..., n_ψ` up front.
    pub fn ensure(&self, n: usize) -> Result<()> {
        self.value(n).map(|_| ())
    }

    /// `n_ψ! = 1_ψ 2_ψ ... n_ψ`, with `0_ψ! = 1`.
    pub fn factorial(&self, n: usize) -> Result<Rational> {
        let mut acc = Rational::one();
        for k in 1..=n {
            acc *= self.value(k)?;
        }
        Ok(acc)
    }

    /// `n! / n_ψ!`, the coefficient of `x^n` in the star power `x^(n*ψ)`.
    pub fn star_coefficient(&self, n: usize) -> Result<Rational> {
        Ok(factorial(n) / self.factorial(n)?)
    }

    /// Short label used in reports: `classical`, `q:1/2`, `table:12`, or the generator name.
    pub fn label(&self) -> String {
        match &self.kind {
            PsiKind::Classical => "classical".into(),
            PsiKind::QDeformed(q) => format!("q:{q}"),
            PsiKind::Table(v) => format!("table:{}", v.len()),
            PsiKind::Generated { name, .. } => name.clone(),
        }
    }
}

impl PartialEq for PsiSequence {
    /// Sequences compare by kind; generated sequences compare by name.
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (PsiKind::Classical, PsiKind::Classical) => true,
            (PsiKind::QDeformed(a), PsiKind::QDeformed(b)) => a == b,
            (PsiKind::Table(a), PsiKind::Table(b)) => a == b,
            (PsiKind::Generated { name: a, .. }, PsiKind::Generated { name: b, .. }) => a == b,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn classical_values() {
        let psi = PsiSequence::classical();
        let v: Vec<_> = (1..=4).map(|n| psi.value(n).unwrap()).collect();
        assert_eq!(v, vec![int(1), int(2), int(3), int(4)]);
        assert_eq!(psi.factorial(4).unwrap(), int(24));
        assert_eq!(psi.factorial(0).unwrap(), int(1));
        for n in 0..10 {
            assert_eq!(psi.star_coefficient(n).unwrap(), int(1));
        }
    }

    #[test]
    fn q_half_values() {
        let psi = PsiSequence::q_deformed(rat(1, 2)).unwrap();
        let v: Vec<_> = (1..=4).map(|n| psi.value(n).unwrap()).collect();
        assert_eq!(v, vec![int(1), rat(3, 2), rat(7, 4), rat(15, 8)]);
        assert_eq!(psi.factorial(3).unwrap(), rat(21, 8));
        assert_eq!(psi.star_coefficient(3).unwrap(), rat(16, 7));
    }

    #[test]
    fn q_values_match_closed_form() {
        for q in [rat(1, 2), int(2), rat(-1, 3), int(0)] {
            let psi = PsiSequence::q_deformed(q.clone()).unwrap();
            for n in 1..12usize {
                let closed = (Rational::one() - crate::rational::pow(&q, n)) / (Rational::one() - &q);
                assert_eq!(psi.value(n).unwrap(), closed);
            }
        }
    }

    #[test]
    fn invalid_q() {
        assert_eq!(PsiSequence::q_deformed(int(-1)).unwrap_err(), Error::ZeroPsiValue(2));
        assert_eq!(PsiSequence::q_deformed(int(1)).unwrap_err(), Error::InvalidQ);
    }

    #[test]
    fn factorial_ratio() {
        let psi = PsiSequence::q_deformed(rat(-1, 3)).unwrap();
        for n in 1..15 {
            let ratio = psi.factorial(n).unwrap() / psi.factorial(n - 1).unwrap();
            assert_eq!(ratio, psi.value(n).unwrap());
        }
    }

    #[test]
    fn table_file_format() {
        let psi = PsiSequence::parse_table("# custom\n2\n\n3/2  # second\n5\n").unwrap();
        assert_eq!(psi.value(1).unwrap(), int(2));
        assert_eq!(psi.value(2).unwrap(), rat(3, 2));
        assert_eq!(psi.range(), Some(3));
        assert_eq!(
            psi.value(4).unwrap_err(),
            Error::PsiOutOfRange { requested: 4, available: 3 }
        );
        assert_eq!(PsiSequence::parse_table("1\n0\n").unwrap_err(), Error::ZeroPsiValue(2));
    }

    #[test]
    fn shared_cache_across_threads() {
        let psi = PsiSequence::q_deformed(rat(2, 3)).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let p = psi.clone();
                std::thread::spawn(move || p.value(10 + t).unwrap())
            })
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), psi.value(10 + t).unwrap());
        }
    }
}
