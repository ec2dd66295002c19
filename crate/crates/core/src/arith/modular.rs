//! Reduction of `Q(ξ_ℓ)` modulo a prime `P ≡ 1 (mod ℓ)`.
//!
//! Such a prime splits completely in `Q(ξ_ℓ)`, so choosing a primitive ℓ-th
//! root of unity `ω ∈ F_P` gives a ring map `Z[ξ, 1/D] → F_P` for every
//! denominator `D` prime to `P`.  Ranks computed after reduction are lower
//! bounds for the exact ranks; callers that need exact ranks combine several
//! primes or cross-check against the exact field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::cyclotomic::Cyclotomic;
use super::CoeffRing;
use crate::util::prime_factors;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularField {
    level: u64,
    p: u64,
    /// `omega_pows[e] = ω^e` for `0 ≤ e < ℓ`.
    omega_pows: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl ModularField {
    /// The `index`-th prime `P ≡ 1 (mod ℓ)` above `2^61`, with a fixed choice of ω.
    pub fn new(level: u64, index: usize) -> Self {
        assert!(level >= 1);
        let start = 1u64 << 61;
        let mut p = start - start % level + 1;
        if p < start {
            p += level;
        }
        let mut found = 0;
        loop {
            if is_prime_u64(p) {
                if found == index {
                    break;
                }
                found += 1;
            }
            p += level;
        }
        let omega = primitive_root_of_unity(level, p);
        let omega_pows = (0..level).map(|e| pow_mod(omega, e, p)).collect();
        ModularField {
            level,
            p,
            omega_pows,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        let r = n % BigInt::from(self.p);
        let r = if r.sign() == num_bigint::Sign::Minus {
            r + BigInt::from(self.p)
        } else {
            r
        };
        r.to_u64().expect("residue fits in u64")
    }
}

fn primitive_root_of_unity(level: u64, p: u64) -> u64 {
    let cof = (p - 1) / level;
    let qs = prime_factors(level);
    for h in 2.. {
        let w = pow_mod(h, cof, p);
        if w == 1 && level > 1 {
            continue;
        }
        if qs.iter().all(|&q| pow_mod(w, level / q, p) != 1) {
            return w;
        }
    }
    unreachable!()
}

impl CoeffRing for ModularField {
    type Elem = u64;

    fn level(&self) -> u64 {
        self.level
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn from_int(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, r: &BigRational) -> u64 {
        let d = self.reduce_big(r.denom());
        let di = self
            .inv(&d)
            .expect("denominator divisible by the working prime");
        mul_mod(self.reduce_big(r.numer()), di, self.p)
    }
    fn xi_pow(&self, e: i64) -> u64 {
        self.omega_pows[e.rem_euclid(self.level as i64) as usize]
    }
    fn from_cyclotomic(&self, x: &Cyclotomic) -> u64 {
        assert_eq!(x.level(), self.level);
        let mut acc = 0;
        for (i, c) in x.coeffs().iter().enumerate() {
            let t = self.mul(&self.from_rational(c), &self.xi_pow(i as i64));
            acc = self.add(&acc, &t);
        }
        acc
    }

    fn convolve(&self, a: &[u64], b: &[u64], prec: usize) -> Vec<u64> {
        let p = self.p as u128;
        (0..=prec)
            .map(|n| {
                let mut acc: u128 = 0;
                let lo = n.saturating_sub(b.len().saturating_sub(1));
                for i in lo..=n.min(a.len().saturating_sub(1)) {
                    acc += a[i] as u128 * b[n - i] as u128;
                    // two products below 2^124 each; reduce before overflow
                    if acc >= 1u128 << 126 {
                        acc %= p;
                    }
                }
                (acc % p) as u64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CyclotomicField;

    #[test]
    fn prime_and_root_are_valid() {
        for l in [5u64, 7, 11, 25, 37] {
            let f = ModularField::new(l, 0);
            let p = f.modulus();
            assert!((1 << 61..1 << 62).contains(&p));
            assert_eq!(p % l, 1);
            assert_eq!(pow_mod(f.xi_pow(1), l, p), 1);
            let g = ModularField::new(l, 1);
            assert_ne!(g.modulus(), p);
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let k = CyclotomicField::new(7);
        let f = ModularField::new(7, 0);
        let x = k.add(&k.xi_pow(3), &k.from_int(2));
        let y = k.sub(&k.xi_pow(1), &k.one()).inv().unwrap();
        let lhs = f.from_cyclotomic(&k.mul(&x, &y));
        let rhs = f.mul(&f.from_cyclotomic(&x), &f.from_cyclotomic(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn convolve_matches_default() {
        let f = ModularField::new(5, 0);
        let a: Vec<u64> = (0..9).map(|i| f.neg(&f.from_int(i * 77 + 3))).collect();
        let b: Vec<u64> = (0..6).map(|i| f.xi_pow(i)).collect();
        let mut naive = vec![0u64; 8];
        for i in 0..a.len() {
            for j in 0..b.len() {
                if i + j <= 7 {
                    naive[i + j] = f.add(&naive[i + j], &f.mul(&a[i], &b[j]));
                }
            }
        }
        assert_eq!(f.convolve(&a, &b, 7), naive);
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64(2305843009213693951)); // 2^61 - 1
        assert!(!is_prime_u64(3215031751));
        assert!(!is_prime_u64(1 << 61));
    }
}
