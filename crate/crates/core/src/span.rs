//! Spans of monomials in the `s_a` modulo Eisenstein series: the cuspidal
//! part of the ring of toric forms in each weight.

use serde::Serialize;

use crate::arith::linalg::Echelon;
use crate::arith::{sturm_bound, CoeffRing, CyclotomicField, ModularField, QSeries};
use crate::eisenstein::dims::{dim_cusp, dim_eisenstein};
use crate::eisenstein::{eis_basis, hecke_classical, s_series};
use crate::modsym::winding_analysis;
use crate::util::{gcd_u64, is_prime};
use crate::{Error, Result};

/// How coefficients are represented in rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// `Q(ξ_ℓ)` exactly.
    Exact,
    /// Reduction modulo two primes `P ≡ 1 (mod ℓ)`; ranks are lower bounds.
    Modular,
    /// Exact when `φ(ℓ) ≤ 12`, modular otherwise.
    Auto,
}

impl Arithmetic {
    pub fn resolve(self, level: u64) -> Arithmetic {
        match self {
            Arithmetic::Auto if crate::util::euler_phi(level) <= 12 => Arithmetic::Exact,
            Arithmetic::Auto => Arithmetic::Modular,
            a => a,
        }
    }
}

impl std::str::FromStr for Arithmetic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Arithmetic::Exact),
            "modular" => Ok(Arithmetic::Modular),
            "auto" => Ok(Arithmetic::Auto),
            _ => Err(Error::Parse(format!("unknown arithmetic mode {s:?}"))),
        }
    }
}

/// Multisets of size `k` from `1..=h`, in lexicographic order.
pub fn monomial_exponents(k: u32, level: u64) -> Vec<Vec<i64>> {
    let h = ((level - 1) / 2) as i64;
    let mut out = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    fn rec(h: i64, k: usize, start: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..=h {
            cur.push(a);
            rec(h, k, a, cur, out);
            cur.pop();
        }
    }
    rec(h, k as usize, 1, &mut cur, &mut out);
    out
}

fn products<R: CoeffRing>(ring: &R, k: u32, precision: usize) -> Result<Vec<QSeries<R>>> {
    let l = ring.level();
    let h = (l - 1) / 2;
    let s: Vec<QSeries<R>> = (1..=h as i64).map(|a| s_series(ring, a, precision)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    // depth-first with shared prefixes
    fn rec<R: CoeffRing>(s: &[QSeries<R>], k: usize, start: usize, acc: &QSeries<R>, out: &mut Vec<QSeries<R>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..s.len() {
            rec(s, k - 1, i, &acc.mul(&s[i]), out);
        }
    }
    rec(&s, k as usize, 0, &QSeries::one(ring, precision), &mut out);
    Ok(out.into_iter().map(|m| m.with_weight(k as i32)).collect())
}

/// All degree-`k` monomials in `s_1, …, s_{(ℓ−1)/2}` (the others are
/// `s_{ℓ−a} = −s_a`), ordered as [`monomial_exponents`].
pub fn toric_monomials<R: CoeffRing>(ring: &R, k: u32, precision: usize) -> Result<Vec<QSeries<R>>> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    let bound = sturm_bound(k, ring.level());
    if precision < bound {
        return Err(Error::InsufficientPrecision { needed: bound, have: precision });
    }
    products(ring, k, precision)
}

/// Class of `s_a s_b` modulo `E_2(Γ_1(ℓ))`: the product reduced against the
/// echelon form of the Eisenstein basis.
pub fn mu_map<R: CoeffRing>(ring: &R, a: i64, b: i64, precision: usize) -> Result<QSeries<R>> {
    let l = ring.level() as i64;
    if a.rem_euclid(l) == 0 || b.rem_euclid(l) == 0 {
        return Err(Error::InvalidArgument(format!("μ is defined on symbols with both entries nonzero, got ({a}, {b})")));
    }
    let eb = eis_basis(ring, 2, precision)?;
    let prod = s_series(ring, a, precision)?.mul(&s_series(ring, b, precision)?);
    let reduced = eb.echelon(precision).reduce(prod.coeffs());
    Ok(QSeries::new(ring.clone(), reduced).with_weight(2))
}

/// Ranks describing the toric span in one weight, computed over one ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ranks {
    span: usize,
    span_plus_eis: usize,
    eis: usize,
}

fn ranks<R: CoeffRing>(ring: &R, k: u32, precision: usize) -> Result<Ranks> {
    let mons = toric_monomials(ring, k, precision)?;
    let eb = eis_basis(ring, k, precision)?;
    let width = precision + 1;
    let span = Echelon::from_rows(ring, width, mons.iter().map(|m| m.coeffs().to_vec())).rank();
    let mut ech = eb.echelon(precision);
    let eis = ech.rank();
    for m in &mons {
        ech.insert(m.coeffs().to_vec());
    }
    Ok(Ranks { span, span_plus_eis: ech.rank(), eis })
}

fn ranks_with(arith: Arithmetic, level: u64, k: u32, precision: usize) -> Result<Ranks> {
    match arith.resolve(level) {
        Arithmetic::Exact => ranks(&CyclotomicField::new(level), k, precision),
        _ => {
            // each rank modulo P is a lower bound; the Eisenstein basis is
            // checked to keep full rank by eis_basis itself
            let a = ranks(&ModularField::new(level, 0), k, precision)?;
            let b = ranks(&ModularField::new(level, 1), k, precision)?;
            if a != b {
                log::warn!("modular ranks differ between primes at level {level}, weight {k}: {a:?} vs {b:?}");
            }
            Ok(Ranks {
                span: a.span.max(b.span),
                span_plus_eis: a.span_plus_eis.max(b.span_plus_eis),
                eis: a.eis.max(b.eis),
            })
        }
    }
}

fn check_level(level: u64) -> Result<()> {
    if level < 5 {
        return Err(Error::Unsupported(format!("toric spans are computed for ℓ ≥ 5, got {level}")));
    }
    Ok(())
}

/// `dim (T_k(ℓ) + E_k(ℓ)) / E_k(ℓ)` at the Sturm bound.
pub fn toric_cuspidal_dim(k: u32, level: u64) -> Result<usize> {
    toric_cuspidal_dim_with(k, level, sturm_bound(k, level), Arithmetic::Auto)
}

pub fn toric_cuspidal_dim_with(k: u32, level: u64, precision: usize, arith: Arithmetic) -> Result<usize> {
    check_level(level)?;
    let r = ranks_with(arith, level, k, precision)?;
    Ok(r.span_plus_eis - r.eis)
}

/// `dim E_k − dim (T_k ∩ E_k)` at the Sturm bound.
pub fn eisenstein_intersection_codim(k: u32, level: u64) -> Result<usize> {
    eisenstein_intersection_codim_with(k, level, sturm_bound(k, level), Arithmetic::Auto)
}

pub fn eisenstein_intersection_codim_with(k: u32, level: u64, precision: usize, arith: Arithmetic) -> Result<usize> {
    check_level(level)?;
    let r = ranks_with(arith, level, k, precision)?;
    // dim(T ∩ E) = dim T + dim E − dim(T + E)
    Ok(r.span_plus_eis - r.span)
}

fn stable_under<R: CoeffRing>(ring: &R, k: u32, p: u64, precision: usize) -> Result<bool> {
    let l = ring.level();
    let exps = monomial_exponents(k, l);
    let big = toric_monomials(ring, k, precision * p as usize)?;
    let eb = eis_basis(ring, k, precision)?;
    let mut ech = eb.echelon(precision);
    for m in &big {
        ech.insert(m.truncate(precision).coeffs().to_vec());
    }
    let h = ((l - 1) / 2) as i64;
    for (e, m) in exps.iter().zip(&big) {
        // ⟨p⟩ Π s_{a_i} = Π s_{p a_i} = ± another monomial
        let mut sign = 1;
        let mut img: Vec<i64> = e
            .iter()
            .map(|&a| {
                let b = (a * p as i64).rem_euclid(l as i64);
                if b > h {
                    sign = -sign;
                    l as i64 - b
                } else {
                    b
                }
            })
            .collect();
        img.sort();
        let j = exps.iter().position(|x| *x == img).expect("monomials are closed under ⟨p⟩");
        let diamond = big[j].scale(&ring.from_int(sign));
        let tm = hecke_classical(m, &diamond, p, k).truncate(precision);
        if !ech.contains(tm.coeffs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `T_p` maps the toric span into itself modulo `E_k`, tested at the
/// Sturm bound (inputs are computed to `p` times that).
pub fn hecke_stability_check(k: u32, level: u64, p: u64) -> Result<bool> {
    check_level(level)?;
    if !is_prime(p) || gcd_u64(p, level) != 1 {
        return Err(Error::InvalidArgument(format!("need a prime p ∤ {level}, got {p}")));
    }
    let precision = sturm_bound(k, level);
    match Arithmetic::Auto.resolve(level) {
        Arithmetic::Exact => stable_under(&CyclotomicField::new(level), k, p, precision),
        _ => stable_under(&ModularField::new(level, 0), k, p, precision),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub weight: u32,
    pub level: u64,
    pub precision: usize,
    pub arithmetic: Arithmetic,
    pub monomial_count: usize,
    pub span_dim: usize,
    /// `dim (T_k + E_k)/E_k`.
    pub span_mod_eisenstein_dim: usize,
    /// `dim S_k(Γ_1(ℓ))` from the dimension formula.
    pub cusp_form_dim: u64,
    pub eisenstein_dim: u64,
    pub eisenstein_intersection_codim: usize,
    /// Weight 2 only: dimension of the span of eigenclasses with `L(f,1) ≠ 0`
    /// from modular symbols.
    pub rank0_dimension: Option<usize>,
    /// Whether the dims agree with the structure theorem: the winding count
    /// in weight 2, all of `S_k` in weight ≥ 3, and zero in weight 1.
    pub theorem_agreement: bool,
    /// Dims recomputed at twice the precision are unchanged.
    pub stable_under_doubling: Option<bool>,
    pub hecke_stable: Option<(u64, bool)>,
    pub verdict: String,
}

#[derive(Clone, Debug, Default)]
pub struct SpanOptions {
    pub precision: Option<usize>,
    pub arithmetic: Option<Arithmetic>,
    pub hecke_prime: Option<u64>,
    pub check_doubling: bool,
}

pub fn span_report(k: u32, level: u64, opts: &SpanOptions) -> Result<SpanReport> {
    check_level(level)?;
    let bound = sturm_bound(k, level);
    let precision = opts.precision.unwrap_or(bound);
    if precision < bound {
        return Err(Error::InsufficientPrecision { needed: bound, have: precision });
    }
    let arith = opts.arithmetic.unwrap_or(Arithmetic::Auto).resolve(level);
    let r = ranks_with(arith, level, k, precision)?;
    let cuspidal = r.span_plus_eis - r.eis;
    let cusp_form_dim = dim_cusp(k, level);
    if cuspidal as u64 > cusp_form_dim {
        return Err(Error::CheckFailed(format!("toric cuspidal dimension {cuspidal} exceeds dim S_{k} = {cusp_form_dim}")));
    }
    let rank0_dimension = if k == 2 { Some(winding_analysis(level, 7)?.rank0_dimension) } else { None };
    let theorem_agreement = match k {
        1 => cuspidal == 0,
        2 => Some(cuspidal) == rank0_dimension,
        _ => cuspidal as u64 == cusp_form_dim,
    };
    let stable_under_doubling = if opts.check_doubling {
        Some(ranks_with(arith, level, k, 2 * precision)? == r)
    } else {
        None
    };
    let hecke_stable = match opts.hecke_prime {
        Some(p) => Some((p, hecke_stability_check(k, level, p)?)),
        None => None,
    };
    let pass = theorem_agreement && stable_under_doubling != Some(false) && hecke_stable.is_none_or(|h| h.1);
    Ok(SpanReport {
        weight: k,
        level,
        precision,
        arithmetic: arith,
        monomial_count: monomial_exponents(k, level).len(),
        span_dim: r.span,
        span_mod_eisenstein_dim: cuspidal,
        cusp_form_dim,
        eisenstein_dim: dim_eisenstein(k, level),
        eisenstein_intersection_codim: r.span_plus_eis - r.span,
        rank0_dimension,
        theorem_agreement,
        stable_under_doubling,
        hecke_stable,
        verdict: if pass { "pass" } else { "fail" }.into(),
    })
}
