//! Small integer helpers shared across modules.

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Trial-division primality, adequate for levels and Hecke primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Inverse of `a` modulo `m`, if it exists.  `m = 1` yields `Some(0)`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

/// Index of Γ_1(N) in SL_2(Z): `N² Π_{p|N} (1 − p⁻²)`.
pub fn gamma1_index(n: u64) -> u64 {
    let mut idx = n * n;
    for p in prime_factors(n) {
        idx = idx / (p * p) * (p * p - 1);
    }
    idx
}

/// Number of cusps of X_1(N): `½ Σ_{d|N} φ(d) φ(N/d)` for N ≥ 5.
pub fn gamma1_cusp_count(n: u64) -> u64 {
    let s: u64 = divisors(n)
        .into_iter()
        .map(|d| euler_phi(d) * euler_phi(n / d))
        .sum();
    if n <= 4 {
        // -I is not in Γ_1(N) for N ≥ 3, but irregular cusps appear at N = 4.
        match n {
            1 => 1,
            2 => 2,
            3 => 2,
            _ => 3,
        }
    } else {
        s / 2
    }
}

/// Genus of X_1(N) for N ≥ 5.
pub fn gamma1_genus(n: u64) -> u64 {
    let num = 24 + gamma1_index(n) as i64 - 12 * gamma1_cusp_count(n) as i64;
    assert!(num >= 0 && num % 24 == 0, "genus formula failed at N={n}");
    (num / 24) as u64
}
