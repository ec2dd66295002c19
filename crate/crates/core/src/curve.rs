//! Weighted projective equations of `X_1(p)` in the variables `s_a`
//! (weight 1) and `t_b` (weight 2), checked as q-expansion identities.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{sturm_bound, CoeffRing, CyclotomicField, ModularField, QSeries};
use crate::eisenstein::{s_series, t_series};
use crate::span::Arithmetic;
use crate::util::is_prime;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationSet {
    pub prime: u64,
    /// `s_a + s_{p−a}` for `0 < a < p/2`.
    pub type1: Vec<(u64, u64)>,
    /// `t_b − t_{p−b}` for `0 < b < p/2`.
    pub type2: Vec<(u64, u64)>,
    /// Multisets `a ≤ b ≤ c` with `a + b + c ≡ 0 (mod p)`, each giving
    /// `s_a s_b + s_b s_c + s_c s_a − t_a − t_b − t_c`.
    pub quadrics: Vec<[u64; 3]>,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("X_1(p) equations need a prime p ≥ 5, got {p}")));
    }
    Ok(())
}

fn triples(p: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a in 1..p {
        for b in a..p {
            let c = (2 * p - a - b) % p;
            if c >= b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub fn emit_equations(p: u64) -> Result<EquationSet> {
    check_prime(p)?;
    let half: Vec<(u64, u64)> = (1..=(p - 1) / 2).map(|a| (a, p - a)).collect();
    Ok(EquationSet { prime: p, type1: half.clone(), type2: half, quadrics: triples(p) })
}

pub fn quadric_count(p: u64) -> Result<usize> {
    check_prime(p)?;
    Ok(triples(p).len())
}

impl EquationSet {
    /// One relation per line, as polynomials in `s_a` and `t_b`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.type1 {
            out.push_str(&format!("s_{a} + s_{b}\n"));
        }
        for &(a, b) in &self.type2 {
            out.push_str(&format!("t_{a} - t_{b}\n"));
        }
        for &[a, b, c] in &self.quadrics {
            out.push_str(&format!("s_{a}*s_{b} + s_{b}*s_{c} + s_{c}*s_{a} - t_{a} - t_{b} - t_{c}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub weight: u32,
    pub passed: bool,
    /// Exponent of the first nonzero coefficient of the residual.
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub prime: u64,
    pub precision: usize,
    pub arithmetic: Arithmetic,
    pub relation_count: usize,
    pub failures: Vec<RelationCheck>,
    pub verdict: String,
}

/// Evaluates every relation on the given series (`s[a]`, `t[a]` for
/// `0 < a < p`; index 0 unused).
pub fn check_relations<R: CoeffRing>(eqs: &EquationSet, s: &[QSeries<R>], t: &[QSeries<R>]) -> Vec<RelationCheck> {
    let mk = |relation: String, weight, res: QSeries<R>| {
        let first_failure = res.valuation();
        RelationCheck { relation, weight, passed: first_failure.is_none(), first_failure }
    };
    let mut out: Vec<RelationCheck> = Vec::new();
    for &(a, b) in &eqs.type1 {
        out.push(mk(format!("s_{a} + s_{b}"), 1, s[a as usize].add(&s[b as usize])));
    }
    for &(a, b) in &eqs.type2 {
        out.push(mk(format!("t_{a} - t_{b}"), 2, t[a as usize].sub(&t[b as usize])));
    }
    let quads: Vec<RelationCheck> = eqs
        .quadrics
        .par_iter()
        .map(|&[a, b, c]| {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            let res = s[a].mul(&s[b]).add(&s[b].mul(&s[c])).add(&s[c].mul(&s[a])).sub(&t[a]).sub(&t[b]).sub(&t[c]);
            mk(format!("s_{a}*s_{b} + s_{b}*s_{c} + s_{c}*s_{a} - t_{a} - t_{b} - t_{c}"), 2, res)
        })
        .collect();
    out.extend(quads);
    out
}

fn verify_in<R: CoeffRing>(ring: &R, eqs: &EquationSet, precision: usize) -> Result<Vec<RelationCheck>> {
    let p = eqs.prime as i64;
    let mut s = vec![QSeries::zero(ring, precision)];
    let mut t = vec![QSeries::zero(ring, precision)];
    for a in 1..p {
        s.push(s_series(ring, a, precision)?);
        t.push(t_series(ring, a, precision)?);
    }
    Ok(check_relations(eqs, &s, &t))
}

/// Checks every relation through `q^precision`; the precision must reach
/// the weight-2 Sturm bound `(p² − 1)/6`.
pub fn verify_equations(p: u64, precision: usize) -> Result<VerifyReport> {
    verify_equations_with(p, precision, Arithmetic::Auto)
}

pub fn verify_equations_with(p: u64, precision: usize, arith: Arithmetic) -> Result<VerifyReport> {
    let eqs = emit_equations(p)?;
    let bound = sturm_bound(2, p);
    if precision < bound {
        return Err(Error::InsufficientPrecision { needed: bound, have: precision });
    }
    let arith = arith.resolve(p);
    let checks = match arith {
        Arithmetic::Exact => verify_in(&CyclotomicField::new(p), &eqs, precision)?,
        _ => {
            // a relation fails if it fails modulo either prime
            let a = verify_in(&ModularField::new(p, 0), &eqs, precision)?;
            let b = verify_in(&ModularField::new(p, 1), &eqs, precision)?;
            a.into_iter().zip(b).map(|(x, y)| if x.passed { y } else { x }).collect()
        }
    };
    let relation_count = checks.len();
    let failures: Vec<RelationCheck> = checks.into_iter().filter(|c| !c.passed).collect();
    let verdict = if failures.is_empty() { "pass" } else { "fail" }.to_string();
    Ok(VerifyReport { prime: p, precision, arithmetic: arith, relation_count, failures, verdict })
}
