//! Explicit Eisenstein subspaces `E_k(Γ_1(N))` from orbit sums of the
//! level-N series `Σ_{(m,n) ≡ (c,d)} (mτ + n)^{−k}`.
//!
//! For each Γ_1(N)-orbit `{(c, d + g j)}` (`g = gcd(c, N)`) the averaged
//! series, scaled by `(k−1)! N^k / (−2πi)^k`, has the q-expansion
//!
//! `[q^M] = Σ_{m e = M} r^{k−1} ([g e ≡ c] ξ^{d r} + (−1)^k [g e ≡ −c] ξ^{−d r})`,
//! `r = (N/g) m`,
//!
//! with constant term `−D^{k−1}[1/(u−1)]` at `u = ξ^d` when `c ≡ 0` (`D = u d/du`;
//! `−½ − 1/(ξ^d − 1)` in weight one) and, for `c ≢ 0`, zero when `k ≥ 2` and
//! `½ − c/N` in weight one.  All coefficients lie in `Q(ξ_N)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dims::dim_eisenstein;
use super::hecke_classical;
use crate::arith::linalg::Echelon;
use crate::arith::poly::{eval_int_poly, log_derivative_numerator};
use crate::arith::{sturm_bound, CoeffRing, QSeries};
use crate::error::{Error, Result};
use crate::util::{gcd_u64, mod_inverse};

/// A cusp of X_1(N) as the ± class of an orbit representative `(c, d mod gcd(c, N))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspClass {
    pub c: u64,
    pub d: u64,
}

fn orbit_modulus(c: u64, n: u64) -> u64 {
    if c == 0 {
        n
    } else {
        gcd_u64(c, n)
    }
}

impl CuspClass {
    /// Canonical representative of the ± class of `(c, d)`.
    pub fn new(c: i64, d: i64, n: u64) -> Self {
        Self::canonical(c, d, n).0
    }

    /// Canonical representative, and whether it is the class of `(−c, −d)`
    /// rather than of `(c, d)` itself.
    pub fn canonical(c: i64, d: i64, n: u64) -> (Self, bool) {
        let canon = |c: i64, d: i64| {
            let c = c.rem_euclid(n as i64) as u64;
            let g = orbit_modulus(c, n);
            (c, d.rem_euclid(g as i64) as u64)
        };
        let a = canon(c, d);
        let b = canon(-c, -d);
        if b < a {
            (CuspClass { c: b.0, d: b.1 }, true)
        } else {
            (CuspClass { c: a.0, d: a.1 }, false)
        }
    }

    /// Image under the diamond operator `⟨p⟩`: `(c, d) ↦ (p⁻¹c, p d)`,
    /// with the negation flag of [`CuspClass::canonical`].
    pub fn diamond(&self, p: u64, n: u64) -> (Self, bool) {
        let pi = mod_inverse(p as i64, n as i64).expect("p coprime to N");
        Self::canonical(self.c as i64 * pi, self.d as i64 * p as i64, n)
    }
}

/// All ± orbit classes, i.e. the cusps of X_1(N).
pub fn cusp_classes(n: u64) -> Vec<CuspClass> {
    let mut out = Vec::new();
    for c in 0..n {
        let g = orbit_modulus(c, n);
        for d in 0..g {
            if gcd_u64(gcd_u64(c, d), n) != 1 {
                continue;
            }
            out.push(CuspClass::new(c as i64, d as i64, n));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The scaled orbit series for a class, in weight `k`.
pub fn orbit_series<R: CoeffRing>(ring: &R, k: u32, class: CuspClass, precision: usize) -> QSeries<R> {
    assert!(k >= 1);
    let n = ring.level();
    let (c, d) = (class.c, class.d as i64);
    let g = orbit_modulus(c, n);
    let step = n / g;
    let mut coeffs = vec![ring.zero(); precision + 1];
    let u = ring.xi_pow(d);
    coeffs[0] = if c == 0 {
        let inv = ring.inv(&ring.sub(&u, &ring.one())).expect("ξ^d ≠ 1");
        if k == 1 {
            let half = ring.from_rational(&BigRational::new(1.into(), 2.into()));
            ring.neg(&ring.add(&half, &inv))
        } else {
            let num = eval_int_poly(ring, &log_derivative_numerator(k as usize - 1), &u);
            let mut v = num;
            for _ in 0..k {
                v = ring.mul(&v, &inv);
            }
            ring.neg(&v)
        }
    } else if k == 1 {
        ring.from_rational(&BigRational::new(
            BigInt::from(n as i64 - 2 * c as i64),
            BigInt::from(2 * n),
        ))
    } else {
        ring.zero()
    };
    let minus_c = (n - c) % n;
    let odd = k % 2 == 1;
    for m in 1..=precision {
        let r = step as i64 * m as i64;
        let rk = ring.from_rational(&BigRational::from_integer(BigInt::from(r).pow(k - 1)));
        let plus = ring.mul(&rk, &ring.xi_pow(d * r));
        let minus = {
            let t = ring.mul(&rk, &ring.xi_pow(-d * r));
            if odd {
                ring.neg(&t)
            } else {
                t
            }
        };
        for e in 1..=precision / m {
            let ge = (g * e as u64) % n;
            if ge == c {
                ring.add_assign(&mut coeffs[m * e], &plus);
            }
            if ge == minus_c {
                ring.add_assign(&mut coeffs[m * e], &minus);
            }
        }
    }
    QSeries::new(ring.clone(), coeffs).with_weight(k as i32)
}

/// A basis of `E_k(Γ_1(N))` with exact q-expansions.
#[derive(Clone, Debug)]
pub struct EisensteinBasis<R: CoeffRing> {
    pub weight: u32,
    pub level: u64,
    pub basis: Vec<QSeries<R>>,
    /// Each basis element as a signed combination of orbit classes.
    pub labels: Vec<Vec<(CuspClass, i64)>>,
    pub dim: usize,
}

impl<R: CoeffRing> EisensteinBasis<R> {
    pub fn precision(&self) -> usize {
        self.basis.iter().map(|b| b.precision()).min().unwrap_or(0)
    }

    /// Echelon form of the basis coefficient vectors through `precision`.
    pub fn echelon(&self, precision: usize) -> Echelon<R> {
        let ring = self.basis[0].ring();
        Echelon::from_rows(
            ring,
            precision + 1,
            self.basis.iter().map(|b| b.truncate(precision).coeffs().to_vec()),
        )
    }

    /// `⟨p⟩` applied to basis element `i`, rebuilt from its class labels.
    pub fn diamond(&self, i: usize, p: u64) -> QSeries<R> {
        let ring = self.basis[0].ring();
        let prec = self.precision();
        let mut acc = QSeries::zero(ring, prec);
        for &(cl, sgn) in &self.labels[i] {
            let (img, negated) = cl.diamond(p, self.level);
            let sign = if negated && self.weight % 2 == 1 { -sgn } else { sgn };
            let s = orbit_series(ring, self.weight, img, prec);
            acc = acc.add(&s.scale(&ring.from_int(sign)));
        }
        acc
    }
}

/// Builds `E_k(Γ_1(N))`, `N = ring.level() ≥ 5`, through `q^precision`.
///
/// The rank of the constructed family is compared with the dimension
/// formula; any disagreement is an error.
pub fn eis_basis<R: CoeffRing>(ring: &R, k: u32, precision: usize) -> Result<EisensteinBasis<R>> {
    let n = ring.level();
    if n < 5 {
        return Err(Error::Unsupported(format!("Eisenstein bases are built for N ≥ 5, got {n}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    let bound = sturm_bound(k, n);
    if precision < bound {
        return Err(Error::InsufficientPrecision { needed: bound, have: precision });
    }
    let classes = cusp_classes(n);
    let series: Vec<QSeries<R>> = classes.iter().map(|&cl| orbit_series(ring, k, cl, precision)).collect();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    match k {
        2 => {
            for i in 1..series.len() {
                basis.push(series[i].sub(&series[0]));
                labels.push(vec![(classes[i], 1), (classes[0], -1)]);
            }
        }
        1 => {
            let mut ech = Echelon::new(ring, precision + 1);
            for (s, &cl) in series.iter().zip(&classes) {
                if ech.insert(s.coeffs().to_vec()) {
                    basis.push(s.clone());
                    labels.push(vec![(cl, 1)]);
                }
            }
        }
        _ => {
            basis = series;
            labels = classes.iter().map(|&cl| vec![(cl, 1)]).collect();
        }
    }
    let expected = dim_eisenstein(k, n) as usize;
    let rank = Echelon::from_rows(ring, precision + 1, basis.iter().map(|b| b.coeffs().to_vec())).rank();
    if rank != expected || basis.len() != expected {
        return Err(Error::CheckFailed(format!(
            "E_{k}(Γ_1({n})): constructed {} series of rank {rank}, dimension formula gives {expected}",
            basis.len()
        )));
    }
    Ok(EisensteinBasis { weight: k, level: n, basis, labels, dim: expected })
}

/// Checks that the classical `T_p` maps the constructed `E_k` into itself,
/// comparing through `⌊precision/p⌋`.
pub fn hecke_closed<R: CoeffRing>(ring: &R, k: u32, p: u64, precision: usize) -> Result<bool> {
    let eb = eis_basis(ring, k, precision)?;
    let out_prec = precision / p as usize;
    let ech = eb.echelon(out_prec);
    for i in 0..eb.dim {
        let tf = hecke_classical(&eb.basis[i], &eb.diamond(i, p), p, k);
        if !ech.contains(tf.coeffs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{CyclotomicField, ModularField};
    use crate::eisenstein::s_series;
    use crate::util::gamma1_cusp_count;

    #[test]
    fn class_counts_match_cusp_formula() {
        for n in [5u64, 7, 8, 9, 10, 11, 12, 13, 25, 37] {
            assert_eq!(cusp_classes(n).len() as u64, gamma1_cusp_count(n), "N = {n}");
        }
    }

    #[test]
    fn c_zero_weight_one_orbit_is_minus_s() {
        let k = CyclotomicField::new(7);
        for d in 1..7 {
            let o = orbit_series(&k, 1, CuspClass { c: 0, d: d as u64 }, 12);
            assert!(o.add(&s_series(&k, d, 12).unwrap()).is_zero());
        }
    }

    #[test]
    fn dimensions_of_constructed_bases() {
        let k = CyclotomicField::new(5);
        assert_eq!(eis_basis(&k, 1, 10).unwrap().dim, 2);
        assert_eq!(eis_basis(&k, 2, 10).unwrap().dim, 3);
        assert_eq!(eis_basis(&k, 3, 10).unwrap().dim, 4);
        let k7 = CyclotomicField::new(7);
        assert_eq!(eis_basis(&k7, 2, 16).unwrap().dim, 5);
        assert_eq!(eis_basis(&k7, 1, 16).unwrap().dim, 3);
        let f = ModularField::new(25, 0);
        assert_eq!(eis_basis(&f, 2, 100).unwrap().dim, 27);
        assert_eq!(eis_basis(&f, 1, 50).unwrap().dim, 14);
    }

    #[test]
    fn hecke_preserves_eisenstein_space() {
        let k = CyclotomicField::new(7);
        assert!(hecke_closed(&k, 2, 2, 40).unwrap());
        assert!(hecke_closed(&k, 3, 2, 60).unwrap());
        let f = ModularField::new(13, 0);
        assert!(hecke_closed(&f, 2, 3, 90).unwrap());
        assert!(hecke_closed(&f, 1, 2, 40).unwrap());
    }

    #[test]
    fn precision_below_sturm_is_rejected() {
        let k = CyclotomicField::new(11);
        assert!(matches!(eis_basis(&k, 2, 10), Err(Error::InsufficientPrecision { .. })));
    }
}
