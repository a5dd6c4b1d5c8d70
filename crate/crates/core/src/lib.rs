//! Exact-arithmetic ψ-umbral calculus.
//!
//! A ψ-sequence `n ↦ n_ψ` deforms the integers; from it come the ψ-derivative
//! `∂_ψ x^n = n_ψ x^(n-1)`, the multiplication operator
//! `x̂_ψ x^n = ((n+1)/(n+1)_ψ) x^(n+1)`, the product `f *_ψ g = f(x̂_ψ) g`,
//! ψ-integration, and Bernoulli–Taylor expansions whose residuals are checked
//! to be exactly zero. All scalars are exact rationals; the only floating
//! point is the numeric Jackson quadrature, which reports an error bound.

pub mod error;
pub mod expansion;
pub mod expr;
pub mod identities;
pub mod integration;
pub mod operator;
pub mod poly;
pub mod psi;
pub mod rational;
pub mod sampling;
pub mod star;
pub mod transport;
pub mod verdict;

pub use error::{Error, Result};
pub use expr::parse_expr;
pub use operator::{LinearOperator, Operand, OperatorSpec};
pub use poly::{GridFunction, Polynomial};
pub use psi::PsiSequence;
pub use rational::Rational;
pub use verdict::{Counterexample, Verdict};
