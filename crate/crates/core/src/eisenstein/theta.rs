//! Jets of the odd Jacobi theta function at torsion points and the standard
//! solutions `r_a = 1/z + s_a − t_a z + …`.
//!
//! Everything is expanded in the variable `w = 2πi·z`.  With
//! `g(w) = 2 sinh(w/2) Π_n (1 − qⁿeʷ)(1 − qⁿe⁻ʷ)/(1 − qⁿ)²` (so `g'(0) = 1`)
//! and `α = 2πi a/ℓ`, the standard solution is `r_a(w) = g(α + w)/(g(w) g(α))`.
//! Its logarithm splits into derivatives `ρ^{(j)}` of `ρ = (ln g)'` at `α` and
//! the even series `ln(g(w)/w)`, both with explicit q-expansions, so the jet
//! is an exponential of known series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::weight_one::s_series;
use crate::arith::poly::{eval_int_poly, log_derivative_numerator};
use crate::arith::{CoeffRing, LaurentJet, QSeries};
use crate::error::{Error, Result};
use crate::util::is_prime;

/// Bernoulli numbers `B_0..=B_n` with `B_1 = −1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn rat<R: CoeffRing>(ring: &R, n: BigInt, d: BigInt) -> R::Elem {
    ring.from_rational(&BigRational::new(n, d))
}

/// `ρ^{(j)}(α)` for `j = 0..=jmax`, where `ρ^{(0)} = s_a`.
pub fn rho_derivatives<R: CoeffRing>(ring: &R, a: i64, jmax: usize, precision: usize) -> Vec<QSeries<R>> {
    let u = ring.xi_pow(a);
    let um1 = ring.sub(&u, &ring.one());
    let inv_um1 = ring.inv(&um1).expect("ξ^a ≠ 1");
    (0..=jmax)
        .map(|j| {
            let mut coeffs = vec![ring.zero(); precision + 1];
            coeffs[0] = if j == 0 {
                ring.add(&rat(ring, 1.into(), 2.into()), &inv_um1)
            } else {
                let num = eval_int_poly(ring, &log_derivative_numerator(j), &u);
                let mut den_inv = ring.one();
                for _ in 0..=j {
                    den_inv = ring.mul(&den_inv, &inv_um1);
                }
                ring.mul(&num, &den_inv)
            };
            let sign = if j % 2 == 0 { 1 } else { -1 };
            for m in 1..=precision {
                let mj = ring.from_rational(&BigRational::from_integer(BigInt::from(m).pow(j as u32)));
                let e = m as i64 * a;
                let term = ring.mul(
                    &mj,
                    &ring.sub(&ring.xi_pow(e), &ring.mul(&ring.from_int(sign), &ring.xi_pow(-e))),
                );
                let mut d = m;
                while d <= precision {
                    ring.sub_assign(&mut coeffs[d], &term);
                    d += m;
                }
            }
            QSeries::new(ring.clone(), coeffs)
        })
        .collect()
}

/// Coefficients `[wⁿ] ln(g(w)/w)` for `n = 0..=nmax`.
pub fn log_h_coeffs<R: CoeffRing>(ring: &R, nmax: usize, precision: usize) -> Vec<QSeries<R>> {
    let b = bernoulli(nmax);
    (0..=nmax)
        .map(|n| {
            if n == 0 || n % 2 == 1 {
                return QSeries::zero(ring, precision);
            }
            // B_n / (n · n!) − Σ_d q^d Σ_{m|d} 2 m^{n−1} / n!
            let nf = factorial(n);
            let mut coeffs = vec![ring.zero(); precision + 1];
            coeffs[0] = ring.from_rational(&(&b[n] / BigRational::from_integer(BigInt::from(n) * &nf)));
            for m in 1..=precision {
                let t = rat(ring, BigInt::from(2) * BigInt::from(m).pow(n as u32 - 1), nf.clone());
                let mut d = m;
                while d <= precision {
                    ring.sub_assign(&mut coeffs[d], &t);
                    d += m;
                }
            }
            QSeries::new(ring.clone(), coeffs)
        })
        .collect()
}

/// `e_0..=e_nmax` with `Σ eₙwⁿ = exp(Σ_{n≥1} Lₙwⁿ)`; `logs[0]` is ignored.
fn exp_of_jet<R: CoeffRing>(ring: &R, logs: &[QSeries<R>], nmax: usize, precision: usize) -> Vec<QSeries<R>> {
    let mut e = vec![QSeries::one(ring, precision)];
    for n in 1..=nmax {
        let mut acc = QSeries::zero(ring, precision);
        for k in 1..=n {
            let t = logs[k].mul(&e[n - k]).scale(&ring.from_int(k as i64));
            acc = acc.add(&t);
        }
        let inv_n = ring.inv(&ring.from_int(n as i64)).unwrap();
        e.push(acc.scale(&inv_n));
    }
    e
}

fn check_level<R: CoeffRing>(ring: &R, a: i64) -> Result<()> {
    let l = ring.level() as i64;
    if a <= 0 || a >= l {
        return Err(Error::InvalidArgument(format!("offset a = {a} must satisfy 0 < a < {l}")));
    }
    Ok(())
}

/// Jet of `w ↦ θ(α − w)` (normalized odd theta, `θ'(0) = 1`) through `w^{zmax}`.
///
/// Needs `e^{α/2} ∈ Q(ξ_ℓ)`, so the level must be odd.
pub fn theta_jet<R: CoeffRing>(ring: &R, a: i64, zmax: usize, precision: usize) -> Result<LaurentJet<R>> {
    check_level(ring, a)?;
    let l = ring.level() as i64;
    if l % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "theta jets need an odd level (half-angle e^(α/2) lies outside Q(ξ_{l}))"
        )));
    }
    // e^{α/2} = (−1)^a ξ^{a(ℓ+1)/2}
    let sign = ring.from_int(if a % 2 == 0 { 1 } else { -1 });
    let half = ring.mul(&sign, &ring.xi_pow(a * (l + 1) / 2));
    let half_inv = ring.inv(&half).unwrap();
    let mut value = QSeries::constant(ring, ring.sub(&half, &half_inv), precision);
    let u = ring.xi_pow(a);
    let u_inv = ring.xi_pow(-a);
    for n in 1..=precision {
        for c in [&u, &u_inv] {
            // multiply by (1 − c qⁿ)
            let mut coeffs = value.coeffs().to_vec();
            for i in (n..=precision).rev() {
                let t = ring.mul(c, &coeffs[i - n]);
                ring.sub_assign(&mut coeffs[i], &t);
            }
            value = QSeries::new(ring.clone(), coeffs);
        }
        for _ in 0..2 {
            // divide by (1 − qⁿ)
            let mut coeffs = value.coeffs().to_vec();
            for i in n..=precision {
                let t = coeffs[i - n].clone();
                ring.add_assign(&mut coeffs[i], &t);
            }
            value = QSeries::new(ring.clone(), coeffs);
        }
    }
    let rho = rho_derivatives(ring, a, zmax.max(1), precision);
    let mut logs = vec![QSeries::zero(ring, precision)];
    for n in 1..=zmax {
        let f = factorial(n);
        let s = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        logs.push(rho[n - 1].scale(&rat(ring, s, f)));
    }
    let e = exp_of_jet(ring, &logs, zmax, precision);
    Ok(LaurentJet::new(0, e.iter().map(|x| x.mul(&value)).collect()))
}

fn check_prime_level<R: CoeffRing>(ring: &R, a: i64) -> Result<u64> {
    let p = ring.level();
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("standard solutions need a prime p ≥ 5, got {p}")));
    }
    check_level(ring, a)?;
    Ok(p)
}

/// The standard solution `r_a` through `w^{zmax}`; the constant term is
/// checked against `s_a` and a mismatch is an error.
pub fn r_standard<R: CoeffRing>(ring: &R, a: i64, zmax: usize, precision: usize) -> Result<LaurentJet<R>> {
    check_prime_level(ring, a)?;
    let nmax = zmax + 1;
    let rho = rho_derivatives(ring, a, nmax, precision);
    let logh = log_h_coeffs(ring, nmax, precision);
    let mut logs = vec![QSeries::zero(ring, precision)];
    for n in 1..=nmax {
        let t = rho[n - 1].scale(&rat(ring, BigInt::one(), factorial(n)));
        logs.push(t.sub(&logh[n]));
    }
    let e = exp_of_jet(ring, &logs, nmax, precision);
    let jet = LaurentJet::new(-1, e);
    let s = s_series(ring, a, precision)?;
    let c0 = jet.coeff(0).unwrap();
    if c0.first_difference(&s).is_some() || !jet.coeff(-1).unwrap().sub(&QSeries::one(ring, precision)).is_zero() {
        return Err(Error::CheckFailed(format!(
            "standard solution r_{a} is not calibrated: principal part or constant term differs from 1/z + s_{a}"
        )));
    }
    Ok(jet)
}

/// `t_a`, minus the `z¹` coefficient of `r_a`, normalized so that
/// `s_a s_b + s_b s_c + s_c s_a = t_a + t_b + t_c` for `a + b + c ≡ 0`.
pub fn t_series<R: CoeffRing>(ring: &R, a: i64, precision: usize) -> Result<QSeries<R>> {
    let r = r_standard(ring, a, 1, precision)?;
    Ok(r.coeff(1).unwrap().neg().with_weight(2))
}

/// Residual `r_a' + (Σ_{k≠0,a} r_k r_{a−k} + 2 r_a s_a)/(p−2)` from given jets.
/// `jets[k]` must hold `r_k` for every `0 < k < p`; `jets[0]` is unused.
pub fn ode_residual_from_jets<R: CoeffRing>(
    jets: &[Option<LaurentJet<R>>],
    s_a: &QSeries<R>,
    a: usize,
    p: usize,
) -> LaurentJet<R> {
    let (lhs, sum, cross) = ode_terms(jets, s_a, a, p);
    let ring = s_a.ring();
    let inv = ring.inv(&ring.from_int(p as i64 - 2)).unwrap();
    lhs.add(&sum.add(&cross.scale(&ring.from_int(2))).scale(&inv))
}

/// The same system read with the `2 r_a s_a` term outside the `1/(p−2)`
/// factor; kept to show that this reading does not vanish.
pub fn ode_residual_literal<R: CoeffRing>(
    jets: &[Option<LaurentJet<R>>],
    s_a: &QSeries<R>,
    a: usize,
    p: usize,
) -> LaurentJet<R> {
    let (lhs, sum, cross) = ode_terms(jets, s_a, a, p);
    let ring = s_a.ring();
    let inv = ring.inv(&ring.from_int(p as i64 - 2)).unwrap();
    lhs.add(&sum.scale(&inv)).sub(&cross.scale(&ring.from_int(2)))
}

fn ode_terms<R: CoeffRing>(
    jets: &[Option<LaurentJet<R>>],
    s_a: &QSeries<R>,
    a: usize,
    p: usize,
) -> (LaurentJet<R>, LaurentJet<R>, LaurentJet<R>) {
    let r = |k: usize| jets[k % p].as_ref().expect("jet for every nonzero residue");
    let ra = r(a);
    let lhs = ra.d_dz();
    let mut sum: Option<LaurentJet<R>> = None;
    for k in 1..p {
        if k == a {
            continue;
        }
        let t = r(k).mul(r((a + p - k) % p));
        sum = Some(match sum {
            None => t,
            Some(s) => s.add(&t),
        });
    }
    let cross = ra.scale_series(s_a);
    (lhs, sum.expect("p ≥ 3"), cross)
}

/// Residual of the differential system for `r_a`, known through `z^{zmax}`.
pub fn ode_residual<R: CoeffRing>(ring: &R, a: i64, zmax: usize, precision: usize) -> Result<LaurentJet<R>> {
    let p = check_prime_level(ring, a)? as usize;
    let jets: Vec<Option<LaurentJet<R>>> = (0..p)
        .map(|k| {
            if k == 0 {
                Ok(None)
            } else {
                r_standard(ring, k as i64, zmax + 1, precision).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let s = s_series(ring, a, precision)?;
    let res = ode_residual_from_jets(&jets, &s, a as usize, p);
    Ok(res.truncate(zmax as i32, precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;
    use crate::arith::CyclotomicField;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[1], ratio(-1, 2));
        assert_eq!(b[2], ratio(1, 6));
        assert_eq!(b[3], ratio(0, 1));
        assert_eq!(b[4], ratio(-1, 30));
        assert_eq!(b[6], ratio(1, 42));
    }

    #[test]
    fn theta_slice_logarithmic_derivative_is_s() {
        let k = CyclotomicField::new(7);
        for a in 1..7 {
            let j = theta_jet(&k, a, 2, 8).unwrap();
            // −[w¹]/[w⁰] of θ(α − w) is ρ(α) = s_a
            let c0 = j.coeff(0).unwrap();
            let c1 = j.coeff(1).unwrap();
            let s = s_series(&k, a, 8).unwrap();
            assert!(c1.add(&s.mul(&c0)).is_zero());
        }
    }

    #[test]
    fn theta_parity_between_offsets() {
        let k = CyclotomicField::new(5);
        let ja = theta_jet(&k, 1, 3, 6).unwrap();
        let jb = theta_jet(&k, 4, 3, 6).unwrap();
        for e in 0..=3 {
            let x = ja.coeff(e).unwrap();
            let y = jb.coeff(e).unwrap();
            if e % 2 == 0 {
                assert_eq!(x, y);
            } else {
                assert_eq!(x, y.neg());
            }
        }
    }

    #[test]
    fn theta_q_zero_slice_is_two_sinh() {
        let k = CyclotomicField::new(5);
        let a = 2;
        let j = theta_jet(&k, a, 3, 2).unwrap();
        // 2 sinh((α − w)/2): [wⁿ] = (e^{α/2}(−1/2)ⁿ − e^{−α/2}(1/2)ⁿ)/n!
        let h = k.xi_pow(a * 3); // (−1)^2 ξ^{2·3}
        let hi = h.inv().unwrap();
        for n in 0..=3i64 {
            let f: i64 = (1..=n).product();
            let sgn = if n % 2 == 0 { 1 } else { -1 };
            let c = k.sub(
                &k.mul(&h, &k.from_rational(&ratio(sgn, (1 << n) * f))),
                &k.mul(&hi, &k.from_rational(&ratio(1, (1 << n) * f))),
            );
            assert_eq!(j.coeff(n as i32).unwrap().coeff(0), &c);
        }
    }

    #[test]
    fn theta_value_matches_hand_product() {
        // (u^{1/2} − u^{−1/2})(1 − qu)(1 − q/u)(1 − q²u)(1 − q²/u)/((1−q)²(1−q²)²) to q²
        let k = CyclotomicField::new(7);
        let a = 3;
        let j = theta_jet(&k, a, 0, 2).unwrap();
        let v = j.coeff(0).unwrap();
        let u = k.xi_pow(a);
        let ui = k.xi_pow(-a);
        let h = k.mul(&k.from_int(-1), &k.xi_pow(a * 4));
        let lead = k.sub(&h, &h.inv().unwrap());
        // expand by hand: product to q² is 1 + c1 q + c2 q² with
        // c1 = 2 − u − 1/u, c2 = (from (1−qu)(1−q/u): 1·q² coefficient) ...
        let c1 = k.sub(&k.from_int(2), &k.add(&u, &ui));
        // (1−qu)(1−q/u) = 1 − (u+1/u) q + q²; (1−q²u)(1−q²/u) = 1 − (u+1/u)q² + …
        // 1/((1−q)²(1−q²)²) = 1 + 2q + 5q² + …
        // c2 = 5 − 2(u+1/u) + 1 − (u+1/u)
        let c2 = k.sub(&k.from_int(6), &k.mul(&k.from_int(3), &k.add(&u, &ui)));
        assert_eq!(v.coeff(0), &lead);
        assert_eq!(v.coeff(1), &k.mul(&lead, &c1));
        assert_eq!(v.coeff(2), &k.mul(&lead, &c2));
    }

    #[test]
    fn standard_solution_shape() {
        let k = CyclotomicField::new(5);
        let r = r_standard(&k, 1, 3, 10).unwrap();
        assert_eq!(r.pole_order(), 1);
        assert_eq!(r.coeff(-1).unwrap(), QSeries::one(&k, 10));
        assert_eq!(r.coeff(0).unwrap(), s_series(&k, 1, 10).unwrap());
        // r_{p−a}(w) = −r_a(−w)
        let rb = r_standard(&k, 4, 3, 10).unwrap();
        for e in -1..=3 {
            let x = r.coeff(e).unwrap();
            let y = rb.coeff(e).unwrap();
            if e.rem_euclid(2) == 0 {
                assert_eq!(x, y.neg());
            } else {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn t_is_symmetric_and_constant_is_minus_one_twelfth() {
        let k = CyclotomicField::new(7);
        for a in 1..7 {
            let t = t_series(&k, a, 12).unwrap();
            assert_eq!(t, t_series(&k, 7 - a, 12).unwrap());
            assert_eq!(t.coeff(0), &k.from_rational(&ratio(-1, 12)));
        }
    }

    #[test]
    fn ode_vanishes_and_detects_perturbation() {
        let k = CyclotomicField::new(5);
        let res = ode_residual(&k, 1, 3, 12).unwrap();
        assert!(res.is_zero());
        let mut jets: Vec<Option<LaurentJet<CyclotomicField>>> = vec![None];
        for a in 1..5 {
            jets.push(Some(r_standard(&k, a, 4, 12).unwrap()));
        }
        let s = s_series(&k, 1, 12).unwrap();
        assert!(!ode_residual_literal(&jets, &s, 1, 5).is_zero());
        let bump = LaurentJet::monomial(1, QSeries::one(&k, 12), 4);
        jets[1] = Some(jets[1].as_ref().unwrap().sub(&bump));
        assert!(!ode_residual_from_jets(&jets, &s, 1, 5).is_zero());
    }
}
