//! The winding element `{0, ∞}` and the dimension of the part of the
//! cuspidal plus-space on which it has nonzero components.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::symbols::{Sign, SymbolSpace};
use super::Matrix;
use crate::arith::linalg::{char_poly, express, mat_vec, Echelon};
use crate::arith::multimodular::{char_poly_multimodular, factor_coefficient_bound, primes_needed, unscale_poly};
use crate::arith::poly::{format_rational_poly, poly_divrem, poly_gcd, Poly};
use crate::arith::{CoeffRing, ModularField, Rationals};
use crate::error::{Error, Result};
use crate::util::{is_prime, primes_up_to};

/// Coordinates of `{0, ∞}`, i.e. the Manin symbol `(0, 1)`.
pub fn winding_element(space: &SymbolSpace) -> Vec<BigRational> {
    space.coordinates(0, 1).expect("(0, 1) is primitive")
}

fn apply_poly<R: CoeffRing>(ring: &R, t: &[Vec<R::Elem>], p: &Poly<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    let mut acc = vec![ring.zero(); v.len()];
    for c in p.coeffs.iter().rev() {
        acc = mat_vec(ring, t, &acc);
        for (a, x) in acc.iter_mut().zip(v) {
            let t = ring.mul(c, x);
            ring.add_assign(a, &t);
        }
    }
    acc
}

/// Basis of the span of `vs` under the operators `ts`, in discovery order.
fn hecke_closure<R: CoeffRing>(ring: &R, ts: &[Vec<Vec<R::Elem>>], vs: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let Some(first) = vs.first() else {
        return Vec::new();
    };
    let mut ech = Echelon::new(ring, first.len());
    let mut gens = Vec::new();
    for v in vs {
        if ech.insert(v.clone()) {
            gens.push(v.clone());
        }
    }
    let mut next = 0;
    while next < gens.len() {
        let v = gens[next].clone();
        next += 1;
        for t in ts {
            let w = mat_vec(ring, t, &v);
            if ech.insert(w.clone()) {
                gens.push(w);
            }
        }
    }
    gens
}

/// Matrix of `t` on the invariant subspace spanned by `gens`.
fn restricted_matrix<R: CoeffRing>(ring: &R, gens: &[Vec<R::Elem>], t: &[Vec<R::Elem>]) -> Result<Vec<Vec<R::Elem>>> {
    let cols: Vec<Vec<R::Elem>> = gens
        .iter()
        .map(|g| express(ring, gens, &mat_vec(ring, t, g)).ok_or_else(|| Error::CheckFailed("Hecke span is not stable".into())))
        .collect::<Result<_>>()?;
    let k = gens.len();
    Ok((0..k).map(|i| (0..k).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Deterministic pseudo-random integer combination of the given vectors.
fn mix(basis: &[Vec<BigRational>], seed: u64) -> Vec<BigRational> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut acc = vec![BigRational::zero(); basis[0].len()];
    for b in basis {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let c = BigRational::from_integer(BigInt::from((state >> 33) % 97) - 48);
        for (a, x) in acc.iter_mut().zip(b) {
            *a += &c * x;
        }
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct WindingReport {
    pub level: u64,
    pub cuspidal_dim: usize,
    /// Prime used to remove the Eisenstein component of `{0, ∞}`.
    pub eisenstein_prime: u64,
    pub hecke_primes: Vec<u64>,
    /// Dimension of the Hecke span of the cuspidal winding element.
    pub rank0_dimension: usize,
    /// Characteristic polynomials of `T_p` on the cuspidal plus-space.
    pub cuspidal_charpolys: Vec<(u64, String)>,
    /// Characteristic polynomials of `T_p` on the classes where the winding
    /// element vanishes (the quotient by its Hecke span).
    pub vanishing_charpolys: Vec<(u64, String)>,
    pub winding_is_zero: bool,
}

/// Per-field data: the cuspidal winding element and a basis of its Hecke span.
struct Reduction<R: CoeffRing> {
    ring: R,
    ts: Vec<Vec<Vec<R::Elem>>>,
    span: Vec<Vec<R::Elem>>,
}

fn reduce<R: CoeffRing>(ring: R, space: &SymbolSpace, primes: &[u64], ep: u64) -> Result<Reduction<R>> {
    let lift = |m: &Matrix| -> Vec<Vec<R::Elem>> {
        m.iter().map(|row| row.iter().map(|x| ring.from_rational(x)).collect()).collect()
    };
    let t_e = lift(&space.hecke_matrix(ep));
    let chi_m = char_poly(&ring, &t_e);
    let chi_s = char_poly(&ring, &lift(&space.cuspidal_hecke_matrix(ep)?));
    let (chi_e, rem) = poly_divrem(&ring, &chi_m, &chi_s);
    if rem.degree().is_some() {
        return Err(Error::CheckFailed(format!("cuspidal characteristic polynomial does not divide the full one for T_{ep}")));
    }
    let e: Vec<R::Elem> = winding_element(space).iter().map(|x| ring.from_rational(x)).collect();
    let e_cusp = apply_poly(&ring, &t_e, &chi_e, &e);
    let boundary = lift(space.boundary_matrix());
    if mat_vec(&ring, &boundary, &e_cusp).iter().any(|x| !ring.is_zero(x)) {
        return Err(Error::CheckFailed("projected winding element is not cuspidal".into()));
    }
    let ts: Vec<_> = primes.iter().map(|&p| lift(&space.hecke_matrix(p))).collect();
    let span = if e_cusp.iter().all(|x| ring.is_zero(x)) { Vec::new() } else { hecke_closure(&ring, &ts, &[e_cusp]) };
    Ok(Reduction { ring, ts, span })
}

/// Computes the Hecke span of the cuspidal projection of `{0, ∞}` in the
/// plus-space, using `T_p` for primes `p ≤ prime_bound`, `p ∤ N`.
///
/// Spans are computed modulo primes `P > 2^61`: a dimension computed mod `P`
/// is a lower bound for the rational one, and the separation test is exact
/// in the direction it is used. Reported characteristic polynomials are
/// exact (recovered by Chinese remaindering under a coefficient bound).
/// Dimensions and Hecke characteristic polynomials of one sign quotient.
#[derive(Clone, Debug, Serialize)]
pub struct SpaceReport {
    pub level: u64,
    pub sign: i64,
    pub dim: usize,
    pub cuspidal_dim: usize,
    /// Whether `charpolys` were taken on the cuspidal subspace.
    pub cuspidal: bool,
    pub charpolys: Vec<(u64, String)>,
}

/// Characteristic polynomials of `T_p` for `p ≤ prime_bound`, `p ∤ ℓ`, on the
/// `sign` quotient or its cuspidal subspace.
pub fn space_report(level: u64, sign: Sign, prime_bound: u64, cuspidal: bool) -> Result<SpaceReport> {
    let space = SymbolSpace::new(level, sign)?;
    let mut charpolys = Vec::new();
    for p in primes_up_to(prime_bound).into_iter().filter(|p| !level.is_multiple_of(*p)) {
        let m = if cuspidal { space.cuspidal_hecke_matrix(p)? } else { space.hecke_matrix(p) };
        charpolys.push((p, format_rational_poly(&char_poly_multimodular(&m))));
    }
    Ok(SpaceReport {
        level,
        sign: sign.value(),
        dim: space.dim(),
        cuspidal_dim: space.cuspidal_dim(),
        cuspidal,
        charpolys,
    })
}

pub fn winding_analysis(level: u64, prime_bound: u64) -> Result<WindingReport> {
    if level < 5 {
        return Err(Error::InvalidArgument(format!("level must be at least 5, got {level}")));
    }
    let space = SymbolSpace::new(level, Sign::Plus)?;
    let hecke_primes: Vec<u64> = primes_up_to(prime_bound).into_iter().filter(|p| !level.is_multiple_of(*p)).collect();
    if hecke_primes.is_empty() {
        return Err(Error::HeckeSeparation(prime_bound));
    }
    let s_dim = space.cuspidal_dim();
    if s_dim == 0 {
        return Ok(WindingReport {
            level,
            cuspidal_dim: 0,
            eisenstein_prime: 0,
            hecke_primes,
            rank0_dimension: 0,
            cuspidal_charpolys: vec![],
            vanishing_charpolys: vec![],
            winding_is_zero: true,
        });
    }
    // Kill the Eisenstein part with χ_E(T_p), χ_E = χ_M / χ_S coprime to χ_S.
    // Coprimality modulo P implies coprimality over Q.
    let f0 = ModularField::new(1, 0);
    let lift0 = |m: &Matrix| -> Vec<Vec<u64>> { m.iter().map(|r| r.iter().map(|x| f0.from_rational(x)).collect()).collect() };
    let mut ep = None;
    for p in (2..200).filter(|&p| is_prime(p) && !level.is_multiple_of(p)) {
        let chi_m = char_poly(&f0, &lift0(&space.hecke_matrix(p)));
        let chi_s = char_poly(&f0, &lift0(&space.cuspidal_hecke_matrix(p)?));
        let (chi_e, _) = poly_divrem(&f0, &chi_m, &chi_s);
        if poly_gcd(&f0, &chi_e, &chi_s).degree() == Some(0) {
            ep = Some(p);
            break;
        }
    }
    let ep = ep.ok_or_else(|| Error::CheckFailed("no prime below 200 separates Eisenstein and cuspidal Hecke eigenvalues".into()))?;

    let mut reductions = vec![reduce(ModularField::new(1, 0), &space, &hecke_primes, ep)?];
    // the Hecke algebra must act cyclically on S⁺ for spans to count eigenclasses
    {
        let r = &reductions[0];
        let basis = space.cuspidal_basis();
        let separated = (1..=3).any(|seed| {
            let v: Vec<u64> = mix(basis, seed).iter().map(|x| r.ring.from_rational(x)).collect();
            hecke_closure(&r.ring, &r.ts, &[v]).len() == s_dim
        });
        if !separated {
            return Err(Error::HeckeSeparation(prime_bound));
        }
    }
    reductions.push(reduce(ModularField::new(1, 1), &space, &hecke_primes, ep)?);
    let rank0 = reductions.iter().map(|r| r.span.len()).max().unwrap();
    if reductions.iter().any(|r| r.span.len() != rank0) {
        log::warn!("winding span dimension differs between primes at level {level}; using the maximum");
    }
    let winding_is_zero = rank0 == 0;

    let mut cuspidal_charpolys = Vec::new();
    let mut vanishing_charpolys = Vec::new();
    for (pi, &p) in hecke_primes.iter().enumerate().take(2) {
        let chi = char_poly_multimodular(&space.cuspidal_hecke_matrix(p)?);
        if rank0 < s_dim {
            let span_poly = if winding_is_zero {
                Poly { coeffs: vec![BigRational::from_integer(1.into())] }
            } else {
                let (d, bits) = factor_coefficient_bound(&space.hecke_matrix(p));
                let need = primes_needed(bits);
                let mut residues = Vec::new();
                let mut index = 0;
                while residues.len() < need {
                    if index >= reductions.len() {
                        reductions.push(reduce(ModularField::new(1, index), &space, &hecke_primes, ep)?);
                    }
                    let r = &reductions[index];
                    index += 1;
                    if r.span.len() != rank0 {
                        continue;
                    }
                    let scale = r.ring.from_rational(&BigRational::from_integer(d.clone()));
                    let t: Vec<Vec<u64>> =
                        r.ts[pi].iter().map(|row| row.iter().map(|x| r.ring.mul(x, &scale)).collect()).collect();
                    let mut c = char_poly(&r.ring, &restricted_matrix(&r.ring, &r.span, &t)?).coeffs;
                    c.resize(rank0 + 1, 0);
                    residues.push((r.ring.modulus(), c));
                }
                unscale_poly(&residues, &d)
            };
            let (quo, rem) = poly_divrem(&Rationals, &chi, &span_poly);
            if rem.degree().is_some() {
                return Err(Error::CheckFailed(format!("winding span polynomial does not divide the cuspidal one for T_{p}")));
            }
            vanishing_charpolys.push((p, format_rational_poly(&quo)));
        }
        cuspidal_charpolys.push((p, format_rational_poly(&chi)));
    }
    Ok(WindingReport {
        level,
        cuspidal_dim: s_dim,
        eisenstein_prime: ep,
        hecke_primes,
        rank0_dimension: rank0,
        cuspidal_charpolys,
        vanishing_charpolys,
        winding_is_zero,
    })
}

/// Exact rational version of the span dimension, for cross-checks at small
/// levels.
pub fn rank0_dimension_exact(level: u64, prime_bound: u64) -> Result<usize> {
    let space = SymbolSpace::new(level, Sign::Plus)?;
    if space.cuspidal_dim() == 0 {
        return Ok(0);
    }
    let report = winding_analysis(level, prime_bound)?;
    Ok(reduce(Rationals, &space, &report.hecke_primes, report.eisenstein_prime)?.span.len())
}

/// Dimension of the span of Hecke eigenclasses with nonvanishing winding
/// component, with the default prime bound 7.
pub fn rank0_dimension(level: u64) -> Result<usize> {
    winding_analysis(level, 7).map(|r| r.rank0_dimension)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(rank0_dimension(5).unwrap(), 0);
        assert_eq!(rank0_dimension(11).unwrap(), 1);
        assert_eq!(rank0_dimension(13).unwrap(), 2);
    }

    #[test]
    fn both_signs_see_the_genus() {
        for sign in [Sign::Plus, Sign::Minus] {
            let r = space_report(11, sign, 3, true).unwrap();
            assert_eq!(r.cuspidal_dim, 1);
            assert_eq!(r.charpolys[0], (2, "(1/1)*x + 2/1".to_string()));
        }
        let r = space_report(13, Sign::Plus, 2, false).unwrap();
        assert_eq!(r.charpolys.len(), 1);
        assert!(r.dim > r.cuspidal_dim);
    }

    #[test]
    fn modular_spans_agree_with_exact() {
        for n in [11, 13, 17] {
            assert_eq!(rank0_dimension_exact(n, 7).unwrap(), rank0_dimension(n).unwrap());
        }
    }

    #[test]
    fn level_11_vanishing_part_is_empty() {
        let r = winding_analysis(11, 7).unwrap();
        assert!(r.vanishing_charpolys.is_empty());
        assert_eq!(r.cuspidal_charpolys[0], (2, "(1/1)*x + 2/1".to_string()));
    }

    #[test]
    fn prime_bound_does_not_change_the_answer() {
        let a = winding_analysis(17, 7).unwrap();
        let b = winding_analysis(17, 13).unwrap();
        assert_eq!(a.rank0_dimension, 5);
        assert_eq!(b.rank0_dimension, 5);
    }

    #[test]
    fn winding_element_vanishes_in_zero_space() {
        let s = SymbolSpace::new(5, Sign::Plus).unwrap();
        assert_eq!(s.cuspidal_dim(), 0);
        assert!(winding_analysis(5, 7).unwrap().winding_is_zero);
    }
}
