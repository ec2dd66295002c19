//! The alternating lattice sum `f_{N,deg}` and single-cone analytic
//! continuation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::cone::{cone_gf, simplicial_subdivide, ConeGF};
use super::fan::{DegreeFunction, Fan};
use super::lattice::{dot, solve_in_span};
use crate::arith::{CoeffRing, QSeries};
use crate::{Error, Result};

/// Integer histograms of `q^n ξ^e` terms, bucketed by the multiset of
/// ξ-exponents whose factors `1/(1 − ξ^a)` multiply them.
#[derive(Clone, Debug, Default)]
struct Accumulator {
    level: usize,
    prec: usize,
    buckets: BTreeMap<Vec<usize>, Vec<i64>>,
}

impl Accumulator {
    fn new(level: u64, prec: usize) -> Self {
        Accumulator { level: level as usize, prec, buckets: BTreeMap::new() }
    }

    fn merge(mut self, other: Accumulator) -> Self {
        for (k, v) in other.buckets {
            match self.buckets.get_mut(&k) {
                Some(mine) => mine.iter_mut().zip(v).for_each(|(a, b)| *a += b),
                None => {
                    self.buckets.insert(k, v);
                }
            }
        }
        self
    }

    /// Adds `sign · a.c.(Σ_{n ∈ C} q^{⟨m,n⟩} ξ^{ℓ deg(n)})` for a simplicial cone.
    fn add_cone(&mut self, gf: &ConeGF, lambda: &[i64], m: &[i64], sign: i64) -> Result<()> {
        let l = self.level as i64;
        let mut zero_key = Vec::new();
        let mut sign = sign;
        // (step, first k, ξ increment)
        let mut factors: Vec<(i64, i64, i64)> = Vec::new();
        for g in &gf.denominator {
            let t = dot(m, g);
            let a = dot(lambda, g).rem_euclid(l);
            if t == 0 {
                if a == 0 {
                    return Err(Error::InvalidDegree("deg is integral on a cone generator".into()));
                }
                zero_key.push(a as usize);
            } else if t > 0 {
                factors.push((t, 0, a));
            } else {
                sign = -sign;
                factors.push((-t, 1, (l - a) % l));
            }
        }
        zero_key.sort();
        let prec = self.prec as i64;
        let width = self.level;
        let hist = self.buckets.entry(zero_key).or_insert_with(|| vec![0; (self.prec + 1) * width]);
        // minimal exponent still to be added by the remaining factors
        let mut tail_min = vec![0i64; factors.len() + 1];
        for j in (0..factors.len()).rev() {
            tail_min[j] = tail_min[j + 1] + factors[j].0 * factors[j].1;
        }
        for (p, _) in &gf.numerator {
            let n0 = dot(m, p);
            let e0 = dot(lambda, p).rem_euclid(l);
            if n0 + tail_min[0] < 0 {
                return Err(Error::CheckFailed(format!("negative q-exponent {} in a single cone", n0 + tail_min[0])));
            }
            let mut stack = vec![(0usize, n0, e0)];
            while let Some((j, n, e)) = stack.pop() {
                if j == factors.len() {
                    hist[n as usize * width + e as usize] += sign;
                    continue;
                }
                let (s, k0, inc) = factors[j];
                let mut k = k0;
                while n + k * s + tail_min[j + 1] <= prec {
                    stack.push((j + 1, n + k * s, (e + k * inc).rem_euclid(l)));
                    k += 1;
                }
            }
        }
        Ok(())
    }

    fn finish<R: CoeffRing>(&self, ring: &R) -> QSeries<R> {
        let mut coeffs = vec![ring.zero(); self.prec + 1];
        for (key, hist) in &self.buckets {
            let mut c = ring.one();
            for &a in key {
                let den = ring.sub(&ring.one(), &ring.xi_pow(a as i64));
                c = ring.mul(&c, &ring.inv(&den).expect("ξ^a ≠ 1"));
            }
            for (n, slot) in coeffs.iter_mut().enumerate() {
                let mut v = ring.zero();
                for e in 0..self.level {
                    let h = hist[n * self.level + e];
                    if h != 0 {
                        let t = ring.mul(&ring.from_int(h), &ring.xi_pow(e as i64));
                        ring.add_assign(&mut v, &t);
                    }
                }
                if !ring.is_zero(&v) {
                    let t = ring.mul(&c, &v);
                    ring.add_assign(slot, &t);
                }
            }
        }
        QSeries::new(ring.clone(), coeffs)
    }
}

/// q-expansion to precision `prec` of the analytic continuation of
/// `Σ_{n ∈ C} q^{⟨m,n⟩} ξ^{⟨λ,n⟩}` for a simplicial cone, where `λ` is the
/// covector with `ℓ·deg = ⟨λ, ·⟩` on the cone.
pub fn ac_eval<R: CoeffRing>(ring: &R, gf: &ConeGF, m: &[i64], lambda: &[i64], prec: usize) -> Result<QSeries<R>> {
    let mut acc = Accumulator::new(ring.level(), prec);
    acc.add_cone(gf, lambda, m, 1)?;
    Ok(acc.finish(ring))
}

/// Simplicial pieces of every face, with the face sign `(−1)^{codim}` folded
/// into the piece signs.
struct FacePieces {
    pieces: Vec<(ConeGF, Vec<i64>, i64)>,
}

fn face_pieces(fan: &Fan, deg: &DegreeFunction) -> Result<FacePieces> {
    let mut pieces = Vec::new();
    for face in &fan.faces {
        let face_sign = if face.codim % 2 == 0 { 1 } else { -1 };
        let lambda = deg.functionals[face.max_cone].clone();
        if face.rays.is_empty() {
            pieces.push((cone_gf(&[], fan.rank)?, lambda, face_sign));
            continue;
        }
        for piece in simplicial_subdivide(&fan.ray_vectors(&face.rays))? {
            pieces.push((cone_gf(&piece.gens, fan.rank)?, lambda.clone(), face_sign * piece.sign));
        }
    }
    Ok(FacePieces { pieces })
}

/// Integer bounds `C_j` with `|m_j| ≤ C_j · max_g |⟨m, g⟩|`.
fn coordinate_bounds(fan: &Fan) -> Vec<i64> {
    let basis = fan.ray_vectors(&fan.max_cones[0]);
    let mut independent: Vec<Vec<i64>> = Vec::new();
    for g in basis {
        let mut t = independent.clone();
        t.push(g.clone());
        if super::lattice::rank_i64(&t) > independent.len() {
            independent = t;
        }
    }
    (0..fan.rank)
        .map(|j| {
            let mut e = vec![0; fan.rank];
            e[j] = 1;
            let c = solve_in_span(&independent, &e).expect("maximal cone spans");
            let s: num_rational::BigRational = c.iter().map(num_traits::Signed::abs).sum();
            num_traits::ToPrimitive::to_i64(&s.ceil().to_integer()).unwrap()
        })
        .collect()
}

/// Covectors `m` with `lo < max_g |⟨m, g⟩| ≤ hi`.
fn shell(fan: &Fan, bounds: &[i64], lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let d = fan.rank;
    let lim: Vec<i64> = bounds.iter().map(|c| c * hi).collect();
    let mut out = Vec::new();
    let mut m: Vec<i64> = lim.iter().map(|x| -x).collect();
    loop {
        let r = fan.rays.iter().map(|g| dot(&m, g).abs()).max().unwrap();
        if r > lo && r <= hi {
            out.push(m.clone());
        }
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            if m[j] < lim[j] {
                m[j] += 1;
                break;
            }
            m[j] = -lim[j];
            j += 1;
        }
    }
}

fn shell_sum<R: CoeffRing>(ring: &R, fp: &FacePieces, ms: &[Vec<i64>], prec: usize) -> Result<QSeries<R>> {
    let level = ring.level();
    let acc = ms
        .par_iter()
        .map(|m| {
            let mut acc = Accumulator::new(level, prec);
            for (gf, lambda, sign) in &fp.pieces {
                acc.add_cone(gf, lambda, m, *sign)?;
            }
            Ok(acc)
        })
        .try_reduce(|| Accumulator::new(level, prec), |a, b| Ok(a.merge(b)))?;
    Ok(acc.finish(ring))
}

/// Largest box bound tried before giving up, as a multiple of the precision.
const MAX_BOX_FACTOR: i64 = 64;

/// The toric form `f_{N,deg}` to precision `prec` (coefficients of
/// `q^0 … q^prec`), as a series of weight `d`.
pub fn toric_form<R: CoeffRing>(ring: &R, fan: &Fan, deg: &DegreeFunction, prec: usize) -> Result<QSeries<R>> {
    if ring.level() != deg.level {
        return Err(Error::LevelMismatch(ring.level(), deg.level));
    }
    let fp = face_pieces(fan, deg)?;
    let bounds = coordinate_bounds(fan);
    let start = (prec as i64).max(1);
    let mut total = shell_sum(ring, &fp, &shell(fan, &bounds, -1, start), prec)?;
    let mut b = start;
    loop {
        let extra = shell_sum(ring, &fp, &shell(fan, &bounds, b, 2 * b), prec)?;
        if extra.is_zero() {
            log::debug!("toric form stabilized at box bound {b}");
            return Ok(total.with_weight(fan.rank as i32));
        }
        if 2 * b > MAX_BOX_FACTOR * start {
            return Err(Error::Stabilization(2 * b));
        }
        total = total.add(&extra);
        b *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Cyclotomic, CyclotomicField};
    use crate::eisenstein::s_series;
    use crate::toric::fan::{build_fan, projective_space_fan};

    fn xi(f: &CyclotomicField, e: i64) -> Cyclotomic {
        f.xi_pow(e)
    }

    #[test]
    fn ac_eval_examples() {
        let f = CyclotomicField::new(5);
        let gf = cone_gf(&[vec![1]], 1).unwrap();
        let s = ac_eval(&f, &gf, &[1], &[1], 3).unwrap();
        assert_eq!(s.coeffs(), &[f.one(), xi(&f, 1), xi(&f, 2), xi(&f, 3)]);
        let s = ac_eval(&f, &gf, &[0], &[1], 3).unwrap();
        let c = f.inv(&f.sub(&f.one(), &xi(&f, 1))).unwrap();
        assert_eq!(s.coeffs(), &[c, f.zero(), f.zero(), f.zero()]);
        let s = ac_eval(&f, &gf, &[-1], &[1], 3).unwrap();
        assert_eq!(s.coeffs(), &[f.zero(), f.neg(&xi(&f, -1)), f.neg(&xi(&f, -2)), f.neg(&xi(&f, -3))]);
        assert!(ac_eval(&f, &gf, &[0], &[5], 3).is_err());
    }

    #[test]
    fn rank_one_is_minus_two_eisenstein_series() {
        let f = CyclotomicField::new(7);
        let fan = build_fan(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        for (a, b) in [(1, 3), (2, 2), (3, 6)] {
            let deg = DegreeFunction::new(&fan, 7, vec![a, b]).unwrap();
            let t = toric_form(&f, &fan, &deg, 20).unwrap();
            let want = s_series(&f, a, 20).unwrap().add(&s_series(&f, b, 20).unwrap()).neg();
            assert_eq!(t, want);
            assert_eq!(t.weight, Some(1));
        }
    }

    #[test]
    fn reflected_degree_gives_the_same_form() {
        let f = CyclotomicField::new(5);
        let fan = build_fan(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        let a = toric_form(&f, &fan, &DegreeFunction::new(&fan, 5, vec![1, 3]).unwrap(), 15).unwrap();
        let b = toric_form(&f, &fan, &DegreeFunction::new(&fan, 5, vec![3, 1]).unwrap(), 15).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn projective_plane_form_is_galois_compatible() {
        let f = CyclotomicField::new(5);
        let fan = projective_space_fan(2);
        let deg = DegreeFunction::new(&fan, 5, vec![1, 1, 2]).unwrap();
        let t = toric_form(&f, &fan, &deg, 6).unwrap();
        let t2 = toric_form(&f, &fan, &deg.scaled(&fan, 2).unwrap(), 6).unwrap();
        assert_eq!(t.galois(2).unwrap(), t2);
    }
}
