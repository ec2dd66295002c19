//! `T_p f_{N,deg} = (p − p^{d−1})/(p − 1) f_{N,deg} + Σ_S f_{S, p·deg}`.

use rayon::prelude::*;

use super::fan::{build_fan, DegreeFunction, Fan};
use super::form::toric_form;
use super::lattice::{gcd_vec, intermediate_lattices, Lattice};
use crate::arith::{CoeffRing, QSeries};
use crate::util::is_prime;
use crate::{Error, Result};

/// The same fan read in the over-lattice `S`, with degree function `p·deg`.
/// Rays are re-primitivized in `S`; a ray that becomes `p`-divisible keeps
/// the value `a_g`, otherwise it gets `p·a_g`.
pub fn reread_in_lattice(fan: &Fan, deg: &DegreeFunction, s: &Lattice, p: u64) -> Result<(Fan, DegreeFunction)> {
    let p = p as i64;
    let mut rays = Vec::with_capacity(fan.rays.len());
    let mut values = Vec::with_capacity(fan.rays.len());
    for (g, &a) in fan.rays.iter().zip(&deg.values) {
        let x = s.coordinates(g);
        let k = gcd_vec(&x);
        if k != 1 && k != p {
            return Err(Error::CheckFailed(format!("ray {g:?} has divisibility {k} in an over-lattice")));
        }
        let value = if k == p { a } else { p * a };
        if value.rem_euclid(deg.level as i64) == 0 {
            return Err(Error::CheckFailed("p·deg became integral on a ray generator".into()));
        }
        rays.push(x.iter().map(|c| c / k).collect());
        values.push(value);
    }
    let fan_s = build_fan(rays, fan.max_cones.clone())?;
    let deg_s = DegreeFunction::new(&fan_s, deg.level, values)?;
    Ok((fan_s, deg_s))
}

/// `T_p f_{N,deg}` to precision `prec` by the sum over intermediate lattices.
pub fn hecke_toric<R: CoeffRing>(ring: &R, fan: &Fan, deg: &DegreeFunction, p: u64, prec: usize) -> Result<QSeries<R>> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if deg.level.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("p = {p} divides the level {}", deg.level)));
    }
    let d = fan.rank as u32;
    let pi = p as i64;
    // (p − p^{d−1}) / (p − 1) is an integer for every d ≥ 1
    let prefactor = (pi - pi.pow(d - 1)) / (pi - 1);
    let lattices = intermediate_lattices(p, fan.rank);
    let terms: Vec<QSeries<R>> = lattices
        .par_iter()
        .map(|s| {
            let (fan_s, deg_s) = reread_in_lattice(fan, deg, s, p)?;
            toric_form(ring, &fan_s, &deg_s, prec)
        })
        .collect::<Result<_>>()?;
    let mut total = if prefactor == 0 {
        QSeries::zero(ring, prec)
    } else {
        toric_form(ring, fan, deg, prec)?.scale(&ring.from_int(prefactor))
    };
    for t in &terms {
        total = total.add(t);
    }
    Ok(total.with_weight(fan.rank as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CyclotomicField;
    use crate::eisenstein::{hecke_classical, s_series};
    use crate::toric::fan::projective_space_fan;
    use crate::toric::lattice::Lattice;

    fn p1() -> Fan {
        build_fan(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn rank_one_lattice_sum_is_classical_weight_one_hecke() {
        for l in [5u64, 7] {
            let f = CyclotomicField::new(l);
            let fan = p1();
            for p in [2u64, 3] {
                for (a, b) in [(1, 1), (1, 2), (2, 3)] {
                    let deg = DegreeFunction::new(&fan, l, vec![a, b]).unwrap();
                    let got = hecke_toric(&f, &fan, &deg, p, 30).unwrap();
                    let form = toric_form(&f, &fan, &deg, 30 * p as usize).unwrap();
                    let diamond = toric_form(&f, &fan, &deg.scaled(&fan, p as i64).unwrap(), 30 * p as usize).unwrap();
                    let want = hecke_classical(&form, &diamond, p, 1).truncate(30);
                    assert_eq!(got, want, "ℓ={l} p={p} deg=({a},{b})");
                }
            }
        }
    }

    #[test]
    fn s_a_goes_to_s_a_plus_s_pa() {
        let f = CyclotomicField::new(7);
        let fan = p1();
        // f = −2 s_a when both rays carry a
        let deg = DegreeFunction::new(&fan, 7, vec![3, 3]).unwrap();
        let got = hecke_toric(&f, &fan, &deg, 2, 30).unwrap();
        let s = |a| s_series(&f, a, 30).unwrap();
        let want = s(3).add(&s(6)).scale(&f.from_int(-2));
        assert_eq!(got, want);
    }

    #[test]
    fn projective_plane_lattice_sum_matches_classical_weight_two() {
        let f = CyclotomicField::new(5);
        let fan = projective_space_fan(2);
        let deg = DegreeFunction::new(&fan, 5, vec![1, 1, 2]).unwrap();
        let got = hecke_toric(&f, &fan, &deg, 2, 4).unwrap();
        let form = toric_form(&f, &fan, &deg, 8).unwrap();
        let diamond = toric_form(&f, &fan, &deg.scaled(&fan, 2).unwrap(), 8).unwrap();
        let want = hecke_classical(&form, &diamond, 2, 2).truncate(4);
        assert_eq!(got, want);
    }

    #[test]
    fn reread_rank_one_is_identity_up_to_scaling() {
        let fan = p1();
        let deg = DegreeFunction::new(&fan, 7, vec![1, 2]).unwrap();
        let (fs, ds) = reread_in_lattice(&fan, &deg, &Lattice::standard(1), 3).unwrap();
        assert_eq!(fs.rays, fan.rays);
        assert_eq!(ds.values, vec![3, 6]);
    }

    #[test]
    fn rejects_bad_primes() {
        let f = CyclotomicField::new(5);
        let fan = p1();
        let deg = DegreeFunction::new(&fan, 5, vec![1, 2]).unwrap();
        assert!(hecke_toric(&f, &fan, &deg, 5, 10).is_err());
        assert!(hecke_toric(&f, &fan, &deg, 4, 10).is_err());
    }
}
