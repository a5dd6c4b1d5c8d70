//! Seeded random inputs for the verification suites.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::poly::Polynomial;
use crate::psi::PsiSequence;
use crate::rational::{rat, Rational};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` with `|p| <= bound`, `1 <= q <= bound`.
pub fn rational(rng: &mut SuiteRng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub fn nonzero_rational(rng: &mut SuiteRng, bound: i64) -> Rational {
    loop {
        let r = rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A polynomial of degree at most `max_degree` with small rational coefficients.
pub fn polynomial(rng: &mut SuiteRng, max_degree: usize, bound: i64) -> Polynomial {
    let degree = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=degree).map(|_| rational(rng, bound)).collect())
}

/// A finite custom ψ table `n_ψ`, `n = 1..=len`, with nonzero random entries.
pub fn custom_psi(rng: &mut SuiteRng, len: usize) -> PsiSequence {
    let values = (0..len).map(|_| nonzero_rational(rng, 9)).collect();
    PsiSequence::table(values).expect("entries are nonzero")
}

/// The standard test set: classical, `q = 1/2`, `q = 2`, `q = -1/3`, and two random custom tables.
pub fn standard_psi_set(seed: u64) -> Vec<PsiSequence> {
    let mut rng = rng(seed);
    vec![
        PsiSequence::classical(),
        PsiSequence::q_deformed(rat(1, 2)).expect("valid q"),
        PsiSequence::q_deformed(rat(2, 1)).expect("valid q"),
        PsiSequence::q_deformed(rat(-1, 3)).expect("valid q"),
        custom_psi(&mut rng, 48),
        custom_psi(&mut rng, 48),
    ]
}
