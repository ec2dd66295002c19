//! Weight-one generators `s_a`, theta jets and standard solutions, and
//! explicit Eisenstein bases in every weight.

pub mod basis;
pub mod dims;
pub mod theta;
pub mod weight_one;

pub use basis::{eis_basis, EisensteinBasis};
pub use theta::{ode_residual, ode_residual_from_jets, r_standard, t_series, theta_jet};
pub use weight_one::s_series;

use crate::arith::{CoeffRing, QSeries};

/// Classical weight-`k` Hecke operator at a prime `p ∤ ℓ` on q-expansions:
/// `a_n(T_p f) = a_{np}(f) + p^{k-1} a_{n/p}(⟨p⟩f)`.
///
/// `f_diamond` is `⟨p⟩f`.  The result is known through `⌊P/p⌋`.
pub fn hecke_classical<R: CoeffRing>(
    f: &QSeries<R>,
    f_diamond: &QSeries<R>,
    p: u64,
    k: u32,
) -> QSeries<R> {
    let ring = f.ring();
    let p = p as usize;
    let prec = f.precision().min(f_diamond.precision()) / p;
    let pk = ring.from_int((p as i64).pow(k - 1));
    let coeffs = (0..=prec)
        .map(|n| {
            let mut c = f.coeff(n * p).clone();
            if n % p == 0 {
                let t = ring.mul(&pk, f_diamond.coeff(n / p));
                ring.add_assign(&mut c, &t);
            }
            c
        })
        .collect();
    let mut out = QSeries::new(ring.clone(), coeffs);
    out.weight = f.weight;
    out
}
