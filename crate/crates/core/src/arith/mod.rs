//! Exact arithmetic: cyclotomic fields, rationals, prime-field reductions of
//! cyclotomic fields, truncated q-expansions and Laurent jets in an elliptic
//! variable, plus the dense linear algebra used by every rank computation.
//!
//! Every coefficient domain is accessed through a [`CoeffRing`] context value
//! that performs the arithmetic on plain element values.  This lets the same
//! series code run over `Q(ξ_ℓ)` exactly or over a prime field `F_P` into
//! which `Q(ξ_ℓ)` reduces (used for large span computations).

pub mod cyclotomic;
pub mod jet;
pub mod linalg;
pub mod modular;
pub mod multimodular;
pub mod poly;
pub mod qseries;
pub mod rational;

use std::fmt;

use num_rational::BigRational;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use jet::LaurentJet;
pub use modular::ModularField;
pub use qseries::{sturm_bound, sturm_equal, QSeries};
pub use rational::Rationals;

/// A commutative coefficient field together with a distinguished primitive
/// `level`-th root of unity `ξ`.
pub trait CoeffRing: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    /// The order ℓ of the distinguished root of unity.
    fn level(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, r: &BigRational) -> Self::Elem;
    /// `ξ^e`, any integer exponent.
    fn xi_pow(&self, e: i64) -> Self::Elem;
    /// Image of an exact cyclotomic element of the same level.
    fn from_cyclotomic(&self, x: &Cyclotomic) -> Self::Elem;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, b);
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Truncated Cauchy product: entry `n` is `Σ_{i+j=n} a_i b_j` for `n ≤ prec`.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], prec: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); prec + 1];
        for (i, ai) in a.iter().enumerate().take(prec + 1) {
            if self.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(prec + 1 - i) {
                if self.is_zero(bj) {
                    continue;
                }
                let t = self.mul(ai, bj);
                self.add_assign(&mut out[i + j], &t);
            }
        }
        out
    }
}
