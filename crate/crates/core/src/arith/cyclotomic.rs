//! The cyclotomic field `Q(ξ_ℓ)` in the power basis `1, ξ, ..., ξ^{φ(ℓ)-1}`.
//!
//! Elements are stored as integer numerators over one positive common
//! denominator, fully reduced modulo the ℓ-th cyclotomic polynomial after
//! every operation, so equality is structural.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rational_to_f64};
use super::CoeffRing;
use crate::error::{Error, Result};
use crate::util::{euler_phi, gcd_u64};

/// Shared per-level data: `Φ_ℓ` and reduced images of `x^e`.
#[derive(Debug)]
pub struct CyclotomicCtx {
    level: u64,
    phi: usize,
    poly: Vec<i64>,
    /// `pow_table[e]` is `x^e mod Φ_ℓ` for `e < max(ℓ, 2φ - 1)`.
    pow_table: Vec<Vec<i64>>,
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = exact_div(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

impl CyclotomicCtx {
    fn new(level: u64) -> Self {
        assert!(level >= 1, "level must be positive");
        let poly = cyclotomic_polynomial(level);
        let phi = poly.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(level));
        let table_len = (level as usize).max(2 * phi - 1);
        let mut pow_table = Vec::with_capacity(table_len);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..table_len {
            pow_table.push(cur.clone());
            // multiply by x and reduce
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
        }
        CyclotomicCtx {
            level,
            phi,
            poly,
            pow_table,
        }
    }

    fn reduce_wide(&self, wide: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.phi;
        let mut out: Vec<BigInt> = wide.iter().take(phi).cloned().collect();
        out.resize(phi, BigInt::zero());
        for (e, c) in wide.into_iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&self.pow_table[e]) {
                if t != 0 {
                    *o += &c * t;
                }
            }
        }
        out
    }
}

/// An element of `Q(ξ_ℓ)`.
#[derive(Clone)]
pub struct Cyclotomic {
    ctx: Arc<CyclotomicCtx>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.level == other.ctx.level && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("{}*x", format_rational(c)),
                _ => format!("{}*x^{}", format_rational(c), i),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Cyclotomic {
    fn from_parts(ctx: Arc<CyclotomicCtx>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for n in num.iter_mut() {
                *n = -&*n;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for n in &num {
                if g.is_one() {
                    break;
                }
                if !n.is_zero() {
                    g = g.gcd(n);
                }
            }
            if num.iter().all(|n| n.is_zero()) {
                g = den.clone();
            }
            if !g.is_one() {
                for n in num.iter_mut() {
                    *n = &*n / &g;
                }
                den = &den / &g;
            }
        }
        Cyclotomic { ctx, num, den }
    }

    pub fn level(&self) -> u64 {
        self.ctx.level
    }

    /// Degree φ(ℓ) of the field.
    pub fn degree(&self) -> usize {
        self.ctx.phi
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.ctx.phi).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|n| n.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|n| n.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            return Self::from_parts(self.ctx.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        Self::from_parts(self.ctx.clone(), num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero_of(self.ctx.clone());
        }
        let phi = self.ctx.phi;
        let mut wide = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let num = self.ctx.reduce_wide(wide);
        Self::from_parts(self.ctx.clone(), num, &self.den * &o.den)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|n| n * r.numer()).collect();
        Self::from_parts(self.ctx.clone(), num, &self.den * r.denom())
    }

    /// Applies `ξ ↦ ξ^d`.
    pub fn galois(&self, d: i64) -> Result<Self> {
        let l = self.ctx.level;
        let dm = d.rem_euclid(l as i64) as u64;
        if gcd_u64(dm, l) != 1 {
            return Err(Error::NotCoprime { d, level: l });
        }
        let phi = self.ctx.phi;
        let mut num = vec![BigInt::zero(); phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((j as u64 * dm) % l) as usize;
            for (o, &t) in num.iter_mut().zip(&self.ctx.pow_table[e]) {
                if t != 0 {
                    *o += c * t;
                }
            }
        }
        Ok(Self::from_parts(self.ctx.clone(), num, self.den.clone()))
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let (prod, _) = self.conjugate_product();
        prod.mul(self).coeff(0)
    }

    /// Product of all nontrivial Galois conjugates.
    fn conjugate_product(&self) -> (Self, usize) {
        let l = self.ctx.level;
        let mut acc = Self::one_of(self.ctx.clone());
        let mut count = 0;
        for d in 2..l.max(2) {
            if gcd_u64(d, l) == 1 {
                acc = acc.mul(&self.galois(d as i64).expect("coprime"));
                count += 1;
            }
        }
        (acc, count)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (conj, _) = self.conjugate_product();
        let n = conj.mul(self);
        debug_assert!(n.is_rational());
        let nr = n.coeff(0);
        Ok(conj.scale_rational(&nr.recip()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_of(self.ctx.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Image under `ξ ↦ e^{2πi/ℓ}` as `(re, im)`.
    pub fn embed(&self) -> (f64, f64) {
        let l = self.ctx.level as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs().iter().enumerate() {
            let v = rational_to_f64(c);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / l;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    fn check(&self, o: &Self) {
        assert_eq!(
            self.ctx.level, o.ctx.level,
            "cyclotomic level mismatch: {} vs {}",
            self.ctx.level, o.ctx.level
        );
    }

    fn zero_of(ctx: Arc<CyclotomicCtx>) -> Self {
        let phi = ctx.phi;
        Cyclotomic {
            ctx,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    fn one_of(ctx: Arc<CyclotomicCtx>) -> Self {
        let mut z = Self::zero_of(ctx);
        z.num[0] = BigInt::one();
        z
    }

    /// Checked binary operation used by the public field API.
    pub fn try_op(&self, o: &Self, op: CycloOp) -> Result<Self> {
        if self.level() != o.level() {
            return Err(Error::LevelMismatch(self.level(), o.level()));
        }
        Ok(match op {
            CycloOp::Add => self.add(o),
            CycloOp::Sub => self.sub(o),
            CycloOp::Mul => self.mul(o),
            CycloOp::Div => self.mul(&o.inv()?),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The field `Q(ξ_ℓ)` as a coefficient ring.
#[derive(Clone)]
pub struct CyclotomicField {
    ctx: Arc<CyclotomicCtx>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.ctx.level)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.level == other.ctx.level
    }
}

impl CyclotomicField {
    pub fn new(level: u64) -> Self {
        CyclotomicField {
            ctx: Arc::new(CyclotomicCtx::new(level)),
        }
    }

    pub fn degree(&self) -> usize {
        self.ctx.phi
    }

    /// Φ_ℓ, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.ctx.poly
    }

    /// Builds an element from power-basis coordinates (length φ(ℓ)).
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> Result<Cyclotomic> {
        if coeffs.len() != self.ctx.phi {
            return Err(Error::InvalidArgument(format!(
                "expected {} power-basis coordinates for level {}, got {}",
                self.ctx.phi,
                self.ctx.level,
                coeffs.len()
            )));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Cyclotomic::from_parts(self.ctx.clone(), num, den))
    }

    /// `Σ c_e ξ^e` for integer exponents of any size or sign.
    pub fn from_exponents(&self, terms: &[(i64, i64)]) -> Cyclotomic {
        let l = self.ctx.level as i64;
        let mut num = vec![BigInt::zero(); self.ctx.phi];
        for &(e, c) in terms {
            if c == 0 {
                continue;
            }
            let row = &self.ctx.pow_table[e.rem_euclid(l) as usize];
            for (o, &t) in num.iter_mut().zip(row) {
                if t != 0 {
                    *o += BigInt::from(c * t);
                }
            }
        }
        Cyclotomic::from_parts(self.ctx.clone(), num, BigInt::one())
    }

    /// Histogram form: `counts[e]` is the integer coefficient of `ξ^e`, `0 ≤ e < ℓ`.
    pub fn from_histogram(&self, counts: &[i64]) -> Cyclotomic {
        let terms: Vec<(i64, i64)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e as i64, c))
            .collect();
        self.from_exponents(&terms)
    }

    fn common_form(&self, xs: &[Cyclotomic]) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut den = BigInt::one();
        for x in xs {
            if !x.den.is_one() {
                den = den.lcm(&x.den);
            }
        }
        let nums = xs
            .iter()
            .map(|x| {
                if x.den == den {
                    x.num.clone()
                } else {
                    let f = &den / &x.den;
                    x.num.iter().map(|n| n * &f).collect()
                }
            })
            .collect();
        (nums, den)
    }
}

impl CoeffRing for CyclotomicField {
    type Elem = Cyclotomic;

    fn level(&self) -> u64 {
        self.ctx.level
    }
    fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero_of(self.ctx.clone())
    }
    fn one(&self) -> Cyclotomic {
        Cyclotomic::one_of(self.ctx.clone())
    }
    fn is_zero(&self, a: &Cyclotomic) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.add(b)
    }
    fn sub(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.sub(b)
    }
    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        a.neg()
    }
    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.mul(b)
    }
    fn inv(&self, a: &Cyclotomic) -> Option<Cyclotomic> {
        a.inv().ok()
    }
    fn from_int(&self, n: i64) -> Cyclotomic {
        let mut z = self.zero();
        z.num[0] = BigInt::from(n);
        z
    }
    fn from_rational(&self, r: &BigRational) -> Cyclotomic {
        let mut num = vec![BigInt::zero(); self.ctx.phi];
        num[0] = r.numer().clone();
        Cyclotomic::from_parts(self.ctx.clone(), num, r.denom().clone())
    }
    fn xi_pow(&self, e: i64) -> Cyclotomic {
        self.from_exponents(&[(e, 1)])
    }
    fn from_cyclotomic(&self, x: &Cyclotomic) -> Cyclotomic {
        assert_eq!(x.level(), self.level());
        x.clone()
    }

    fn convolve(&self, a: &[Cyclotomic], b: &[Cyclotomic], prec: usize) -> Vec<Cyclotomic> {
        let phi = self.ctx.phi;
        let a = &a[..a.len().min(prec + 1)];
        let b = &b[..b.len().min(prec + 1)];
        let (an, ad) = self.common_form(a);
        let (bn, bd) = self.common_form(b);
        let a_nz: Vec<bool> = an.iter().map(|v| v.iter().any(|x| !x.is_zero())).collect();
        let b_nz: Vec<bool> = bn.iter().map(|v| v.iter().any(|x| !x.is_zero())).collect();
        let den = &ad * &bd;
        (0..=prec)
            .map(|n| {
                let mut wide = vec![BigInt::zero(); 2 * phi - 1];
                let mut any = false;
                for i in 0..=n {
                    let j = n - i;
                    if i >= an.len() || j >= bn.len() || !a_nz[i] || !b_nz[j] {
                        continue;
                    }
                    any = true;
                    for (s, x) in an[i].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (t, y) in bn[j].iter().enumerate() {
                            if !y.is_zero() {
                                wide[s + t] += x * y;
                            }
                        }
                    }
                }
                if !any {
                    return self.zero();
                }
                let num = self.ctx.reduce_wide(wide);
                Cyclotomic::from_parts(self.ctx.clone(), num, den.clone())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(25).len(), 21);
    }

    #[test]
    fn inverse_of_one_minus_xi() {
        let k = CyclotomicField::new(5);
        let x = k.sub(&k.one(), &k.xi_pow(1));
        let y = x.inv().unwrap();
        assert_eq!(k.mul(&x, &y), k.one());
    }

    #[test]
    fn product_of_one_minus_powers_is_five() {
        let k = CyclotomicField::new(5);
        let mut acc = k.one();
        for a in 1..5 {
            acc = k.mul(&acc, &k.sub(&k.one(), &k.xi_pow(a)));
        }
        // Brute-force oracle: expand Π(1 - x^a) in Z[x] without reduction,
        // then fold exponents mod 5 and use 1 + x + ... + x^4 = 0.
        let mut poly = vec![1i64];
        for a in 1..5usize {
            let mut next = vec![0i64; poly.len() + a];
            for (i, &c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + a] -= c;
            }
            poly = next;
        }
        let mut folded = [0i64; 5];
        for (i, &c) in poly.iter().enumerate() {
            folded[i % 5] += c;
        }
        // Σ folded[e] ξ^e with ξ^4 = -(1+ξ+ξ²+ξ³)
        let expected: i64 = folded[0] - folded[4];
        assert!((1..4).all(|e| folded[e] - folded[4] == 0));
        assert_eq!(expected, 5);
        assert_eq!(acc, k.from_int(5));
    }

    #[test]
    fn galois_moves_trace_element() {
        let k = CyclotomicField::new(7);
        let x = k.add(&k.xi_pow(1), &k.xi_pow(-1));
        let y = x.galois(2).unwrap();
        assert_eq!(y, k.add(&k.xi_pow(2), &k.xi_pow(-2)));
        assert!(matches!(x.galois(7), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn xi_to_the_level_is_one_and_min_poly_vanishes() {
        for l in [3u64, 4, 5, 7, 8, 9, 12, 25, 37] {
            let k = CyclotomicField::new(l);
            assert_eq!(k.xi_pow(l as i64), k.one());
            let mut acc = k.zero();
            for (i, &c) in k.modulus().to_vec().iter().enumerate() {
                acc = k.add(&acc, &k.mul(&k.from_int(c), &k.xi_pow(i as i64)));
            }
            assert!(acc.is_zero(), "Φ_{l}(ξ) != 0");
        }
    }

    #[test]
    fn level_mismatch_is_reported() {
        let a = CyclotomicField::new(5).one();
        let b = CyclotomicField::new(7).one();
        assert_eq!(
            a.try_op(&b, CycloOp::Add),
            Err(Error::LevelMismatch(5, 7))
        );
        let z = CyclotomicField::new(5).zero();
        assert_eq!(a.try_op(&z, CycloOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn from_coeffs_normalizes_denominators() {
        let k = CyclotomicField::new(5);
        let x = k
            .from_coeffs(&[ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-5, 6)])
            .unwrap();
        assert_eq!(x.coeff(3), ratio(-5, 6));
        assert_eq!(x.coeff(0), ratio(1, 2));
        assert!(k.from_coeffs(&[ratio(1, 1)]).is_err());
    }

    #[test]
    fn convolve_matches_naive() {
        let k = CyclotomicField::new(7);
        let a: Vec<_> = (0..6)
            .map(|i| k.add(&k.xi_pow(i), &k.from_rational(&ratio(i, 3))))
            .collect();
        let b: Vec<_> = (0..6)
            .map(|i| k.sub(&k.xi_pow(2 * i + 1), &k.from_rational(&ratio(1, i + 2))))
            .collect();
        let fast = k.convolve(&a, &b, 5);
        for n in 0..=5 {
            let mut s = k.zero();
            for i in 0..=n {
                s = k.add(&s, &k.mul(&a[i], &b[n - i]));
            }
            assert_eq!(fast[n], s);
        }
    }
}
