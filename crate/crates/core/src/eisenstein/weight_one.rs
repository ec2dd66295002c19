//! The weight-one Eisenstein series
//! `s_a = (ξ^a+1)/(2(ξ^a−1)) − Σ_d q^d Σ_{k|d} (ξ^{ka} − ξ^{−ka})`.

use crate::arith::{CoeffRing, QSeries};
use crate::error::{Error, Result};

pub fn s_series<R: CoeffRing>(ring: &R, a: i64, precision: usize) -> Result<QSeries<R>> {
    let l = ring.level() as i64;
    if a.rem_euclid(l) == 0 {
        return Err(Error::InvalidArgument(format!(
            "s_a needs a ≢ 0 mod {l}, got a = {a}"
        )));
    }
    let mut coeffs = vec![ring.zero(); precision + 1];
    let u = ring.xi_pow(a);
    let um1 = ring.sub(&u, &ring.one());
    let half = ring.inv(&ring.from_int(2)).expect("2 is invertible");
    coeffs[0] = ring.add(&half, &ring.inv(&um1).expect("ξ^a ≠ 1"));
    for k in 1..=precision {
        let term = ring.sub(&ring.xi_pow(k as i64 * a), &ring.xi_pow(-(k as i64) * a));
        let mut d = k;
        while d <= precision {
            ring.sub_assign(&mut coeffs[d], &term);
            d += k;
        }
    }
    Ok(QSeries::new(ring.clone(), coeffs).with_weight(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CyclotomicField;

    #[test]
    fn leading_coefficients() {
        let k = CyclotomicField::new(7);
        for a in 1..7 {
            let s = s_series(&k, a, 5).unwrap();
            let u = k.xi_pow(a);
            let c0 = k
                .add(&u, &k.one())
                .mul(&k.mul(&k.from_int(2), &k.sub(&u, &k.one())).inv().unwrap());
            assert_eq!(s.coeff(0), &c0);
            assert_eq!(s.coeff(1), &k.sub(&k.xi_pow(-a), &u));
        }
        assert!(s_series(&k, 14, 5).is_err());
    }

    #[test]
    fn odd_under_negation() {
        let k = CyclotomicField::new(11);
        for a in 1..11 {
            let s = s_series(&k, a, 40).unwrap();
            let t = s_series(&k, 11 - a, 40).unwrap();
            assert!(s.add(&t).is_zero());
        }
    }
}
