//! Exact characteristic polynomials of rational matrices by reduction
//! modulo several word-size primes and Chinese remaindering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::char_poly;
use super::modular::ModularField;
use super::poly::Poly;
use super::CoeffRing;

/// Symmetric lift of the unique residue modulo `Π P_i`.
pub fn crt_symmetric(residues: &[(u64, u64)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(p, r) in residues {
        let p_big = BigInt::from(p);
        // x + m t ≡ r (mod p)
        let m_mod = (&m % &p_big).to_u64().unwrap();
        let x_mod = (&x % &p_big).to_u64().unwrap();
        let inv = BigInt::from(m_mod).extended_gcd(&p_big).x.mod_floor(&p_big);
        let diff = (BigInt::from(r) - BigInt::from(x_mod)).mod_floor(&p_big);
        let t = (diff * inv).mod_floor(&p_big);
        x += &m * t;
        m *= p_big;
    }
    let half = &m / 2;
    if x > half {
        x - m
    } else {
        x
    }
}

/// Common denominator `D` of the entries and `log2` of a bound valid for the
/// coefficients of every monic factor of the characteristic polynomial of
/// the integer matrix `D·A` (Hadamard for the minors, Mignotte for factors).
pub fn factor_coefficient_bound(a: &[Vec<BigRational>]) -> (BigInt, f64) {
    let n = a.len();
    let mut d = BigInt::one();
    for x in a.iter().flatten() {
        d = d.lcm(x.denom());
    }
    let mut bits = 0.0f64;
    for row in a {
        let norm2: f64 = row
            .iter()
            .map(|x| {
                let v = (x.numer() * (&d / x.denom())).abs();
                let f = v.to_f64().unwrap_or(f64::MAX);
                f * f
            })
            .sum();
        bits += (1.0 + norm2.sqrt()).log2();
    }
    bits += 0.5 * ((n + 1) as f64).log2() + n as f64 + 2.0;
    (d, bits)
}

/// Number of 61-bit primes needed to recover integers of `bits` bits.
pub fn primes_needed(bits: f64) -> usize {
    (bits / 60.0).ceil() as usize + 1
}

/// Recovers a rational monic polynomial `χ(x)` from residues of the integer
/// polynomial `D^n χ(x/D)` modulo several primes.
pub fn unscale_poly(residues: &[(u64, Vec<u64>)], d: &BigInt) -> Poly<BigRational> {
    let n = residues[0].1.len() - 1;
    let coeffs = (0..=n)
        .map(|i| {
            let r: Vec<(u64, u64)> = residues.iter().map(|(p, c)| (*p, c[i])).collect();
            let v = crt_symmetric(&r);
            BigRational::new(v, d.pow((n - i) as u32))
        })
        .collect();
    Poly { coeffs }
}

pub fn reduce_matrix(f: &ModularField, a: &[Vec<BigRational>], scale: &BigInt) -> Vec<Vec<u64>> {
    let s = BigRational::from_integer(scale.clone());
    a.iter().map(|row| row.iter().map(|x| f.from_rational(&(x * &s))).collect()).collect()
}

/// Characteristic polynomial of a rational matrix, exactly.
pub fn char_poly_multimodular(a: &[Vec<BigRational>]) -> Poly<BigRational> {
    let (d, bits) = factor_coefficient_bound(a);
    let k = primes_needed(bits);
    let residues: Vec<(u64, Vec<u64>)> = (0..k)
        .map(|i| {
            let f = ModularField::new(1, i);
            let m = reduce_matrix(&f, a, &d);
            let mut c = char_poly(&f, &m).coeffs;
            c.resize(a.len() + 1, 0);
            (f.modulus(), c)
        })
        .collect();
    unscale_poly(&residues, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{ratio, Rationals};
    use proptest::prelude::*;

    #[test]
    fn crt_roundtrip() {
        let ps = [ModularField::new(1, 0).modulus(), ModularField::new(1, 1).modulus()];
        let v = BigInt::from(-123456789012345678901234567i128);
        let r: Vec<(u64, u64)> = ps.iter().map(|&p| (p, v.mod_floor(&BigInt::from(p)).to_u64().unwrap())).collect();
        assert_eq!(crt_symmetric(&r), v);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn agrees_with_exact(n in 1usize..7, entries in proptest::collection::vec((-50i64..50, 1i64..6), 49)) {
            let a: Vec<Vec<BigRational>> = (0..n)
                .map(|i| (0..n).map(|j| { let (p, q) = entries[i * 7 + j]; ratio(p, q) }).collect())
                .collect();
            prop_assert_eq!(char_poly_multimodular(&a), char_poly(&Rationals, &a));
        }
    }
}
