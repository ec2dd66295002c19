//! The `verify-all` battery: quick self-checks of each layer.

use serde::Serialize;

use toricmf::arith::{sturm_bound, CyclotomicField};
use toricmf::curve::verify_equations;

use toricmf::eisenstein::{hecke_classical, ode_residual, s_series};
use toricmf::modsym::rank0_dimension;
use toricmf::span::{span_report, SpanOptions};
use toricmf::toric::{hecke_toric, projective_space_fan, toric_form, DegreeFunction};
use toricmf::Result;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Battery {
    pub checks: Vec<Check>,
    pub verdict: String,
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    log::info!("running {name}");
    let (passed, detail) = f().unwrap_or_else(|e| (false, e.to_string()));
    Check { name: name.into(), passed, detail }
}

fn odd_symmetry() -> Result<(bool, String)> {
    for l in [5u64, 7, 11] {
        let f = CyclotomicField::new(l);
        for a in 1..l as i64 {
            if !s_series(&f, a, 60)?.add(&s_series(&f, l as i64 - a, 60)?).is_zero() {
                return Ok((false, format!("s_{a} + s_{} ≠ 0 at level {l}", l as i64 - a)));
            }
        }
    }
    Ok((true, "s_a = −s_{ℓ−a} for ℓ ∈ {5,7,11}".into()))
}

fn ode() -> Result<(bool, String)> {
    let f = CyclotomicField::new(7);
    for a in 1..7 {
        if !ode_residual(&f, a, 4, 20)?.is_zero() {
            return Ok((false, format!("nonzero residual for a = {a}")));
        }
    }
    Ok((true, "residual vanishes for a = 1..6 at level 7".into()))
}

fn toric_hecke() -> Result<(bool, String)> {
    let ring = CyclotomicField::new(7);
    let fan = projective_space_fan(2);
    let deg = DegreeFunction::new(&fan, 7, vec![1, 2, 3])?;
    let (p, prec) = (2u64, 6usize);
    let lattice = hecke_toric(&ring, &fan, &deg, p, prec)?;
    let big = prec * p as usize;
    let f = toric_form(&ring, &fan, &deg, big)?;
    let fd = toric_form(&ring, &fan, &deg.scaled(&fan, p as i64)?, big)?;
    let classical = hecke_classical(&f, &fd, p, 2).truncate(prec);
    // a vanishing form would make the comparison vacuous
    Ok((!f.is_zero() && lattice == classical, format!("T_2 on P² at level 7 through q^{prec}")))
}

fn span_level_11() -> Result<(bool, String)> {
    let r = span_report(2, 11, &SpanOptions::default())?;
    Ok((r.verdict == "pass" && r.span_mod_eisenstein_dim == 1, format!("dim = {}", r.span_mod_eisenstein_dim)))
}

fn winding() -> Result<(bool, String)> {
    let got: Vec<usize> = [11u64, 13, 17].iter().map(|&l| rank0_dimension(l)).collect::<Result<_>>()?;
    Ok((got == [1, 2, 5], format!("rank-0 dimensions {got:?} at levels 11, 13, 17")))
}

fn x1() -> Result<(bool, String)> {
    let mut n = 0;
    for p in [5u64, 7] {
        let r = verify_equations(p, sturm_bound(2, p))?;
        if r.verdict != "pass" {
            return Ok((false, format!("p = {p}: {} failures", r.failures.len())));
        }
        n += r.relation_count;
    }
    Ok((true, format!("{n} relations at p = 5, 7")))
}

pub fn verify_all() -> Battery {
    let checks = vec![
        check("odd-symmetry", odd_symmetry),
        check("theta-ode", ode),
        check("toric-hecke", toric_hecke),
        check("span-level-11", span_level_11),
        check("winding-rank0", winding),
        check("x1-equations", x1),
    ];
    let verdict = if checks.iter().all(|c| c.passed) { "pass" } else { "fail" }.into();
    Battery { checks, verdict }
}
