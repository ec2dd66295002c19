//! Dense univariate polynomials, lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CoeffRing;

/// Numerator of `D^j [1/(u−1)]` with `D = u d/du`: returns `P_j` with
/// `D^j [1/(u−1)] = P_j(u) / (u−1)^{j+1}`.
pub fn log_derivative_numerator(j: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for m in 1..=j {
        // D(P/(u-1)^m) = (u P' (u-1) - m u P) / (u-1)^{m+1}
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            if i > 0 {
                let ic = c * BigInt::from(i as u64);
                // u P' contributes i c u^i; times (u - 1)
                next[i + 1] += &ic;
                next[i] -= &ic;
            }
            next[i + 1] -= c * BigInt::from(m as u64);
        }
        while next.len() > 1 && next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        p = next;
    }
    p
}

/// Evaluates an integer polynomial at `x` in any coefficient ring.
pub fn eval_int_poly<R: CoeffRing>(ring: &R, poly: &[BigInt], x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in poly.iter().rev() {
        acc = ring.mul(&acc, x);
        let c = ring.from_rational(&BigRational::from_integer(c.clone()));
        acc = ring.add(&acc, &c);
    }
    acc
}

/// Polynomial over a coefficient ring, trimmed so the leading entry is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
}

pub fn poly_trim<R: CoeffRing>(ring: &R, mut c: Vec<R::Elem>) -> Poly<R::Elem> {
    while c.last().is_some_and(|x| ring.is_zero(x)) {
        c.pop();
    }
    Poly { coeffs: c }
}

pub fn poly_mul<R: CoeffRing>(ring: &R, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return Poly { coeffs: vec![] };
    }
    let n = a.coeffs.len() + b.coeffs.len() - 2;
    poly_trim(ring, ring.convolve(&a.coeffs, &b.coeffs, n))
}

/// Division with remainder by a nonzero divisor.
pub fn poly_divrem<R: CoeffRing>(
    ring: &R,
    a: &Poly<R::Elem>,
    b: &Poly<R::Elem>,
) -> (Poly<R::Elem>, Poly<R::Elem>) {
    let db = b.degree().expect("division by the zero polynomial");
    let lead_inv = ring.inv(&b.coeffs[db]).expect("nonzero leading coefficient");
    let mut rem = a.coeffs.clone();
    if rem.len() <= db {
        return (Poly { coeffs: vec![] }, poly_trim(ring, rem));
    }
    let mut q = vec![ring.zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = ring.mul(&rem[i + db], &lead_inv);
        if !ring.is_zero(&c) {
            for (j, bj) in b.coeffs.iter().enumerate() {
                let t = ring.mul(&c, bj);
                ring.sub_assign(&mut rem[i + j], &t);
            }
        }
        q[i] = c;
    }
    rem.truncate(db);
    (poly_trim(ring, q), poly_trim(ring, rem))
}

/// Monic greatest common divisor.
pub fn poly_gcd<R: CoeffRing>(ring: &R, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    let mut x = a.clone();
    let mut y = b.clone();
    while y.degree().is_some() {
        let (_, r) = poly_divrem(ring, &x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = x.degree() {
        let li = ring.inv(&x.coeffs[d]).unwrap();
        x.coeffs = x.coeffs.iter().map(|c| ring.mul(c, &li)).collect();
    }
    x
}

/// Formats a rational polynomial as text in `x`, highest degree first.
pub fn format_rational_poly(p: &Poly<BigRational>) -> String {
    use super::rational::format_rational;
    let terms: Vec<String> = p
        .coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format_rational(c),
            1 => format!("({})*x", format_rational(c)),
            _ => format!("({})*x^{}", format_rational(c), i),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{ratio, Rationals};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn derivative_numerators() {
        // D[1/(u-1)] = -u/(u-1)^2 ; D^2 = (u^2 + u)/(u-1)^3
        assert_eq!(log_derivative_numerator(0), ints(&[1]));
        assert_eq!(log_derivative_numerator(1), ints(&[0, -1]));
        assert_eq!(log_derivative_numerator(2), ints(&[0, 1, 1]));
        assert_eq!(log_derivative_numerator(3), ints(&[0, -1, -4, -1]));
    }

    #[test]
    fn divrem_and_gcd() {
        let q = Rationals;
        let p = |v: &[i64]| Poly {
            coeffs: v.iter().map(|&x| ratio(x, 1)).collect::<Vec<_>>(),
        };
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(poly_gcd(&q, &a, &b), p(&[-1, 1]));
        let (quo, rem) = poly_divrem(&q, &a, &p(&[-1, 1]));
        assert_eq!(quo, p(&[2, 1]));
        assert_eq!(rem.degree(), None);
        assert_eq!(poly_mul(&q, &quo, &p(&[-1, 1])), a);
    }
}
