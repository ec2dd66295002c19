//! Truncated q-expansions `Σ_{n ≤ P} c_n q^n`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{Cyclotomic, CyclotomicField};
use super::rational::{format_rational, parse_rational};
use super::CoeffRing;
use crate::error::{Error, Result};
use crate::util::gamma1_index;

/// A q-expansion known through `q^precision`.
///
/// Equality compares ring, precision and coefficients; the weight tag is
/// informational and ignored.
#[derive(Clone, Debug)]
pub struct QSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
    pub weight: Option<i32>,
}

impl<R: CoeffRing> PartialEq for QSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl<R: CoeffRing> QSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        QSeries {
            ring,
            coeffs,
            weight: None,
        }
    }

    pub fn zero(ring: &R, precision: usize) -> Self {
        Self::new(ring.clone(), vec![ring.zero(); precision + 1])
    }

    pub fn constant(ring: &R, c: R::Elem, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        s.coeffs[0] = c;
        s
    }

    pub fn one(ring: &R, precision: usize) -> Self {
        Self::constant(ring, ring.one(), precision)
    }

    /// `c q^n`, zero if `n` exceeds the precision.
    pub fn monomial(ring: &R, n: usize, c: R::Elem, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        if n <= precision {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn with_weight(mut self, k: i32) -> Self {
        self.weight = Some(k);
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn level(&self) -> u64 {
        self.ring.level()
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R::Elem {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: R::Elem) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision <= self.precision(), "cannot extend a truncated series");
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..=precision].to_vec(),
            weight: self.weight,
        }
    }

    fn meet(&self, o: &Self) -> usize {
        assert_eq!(
            self.ring, o.ring,
            "series over different coefficient rings"
        );
        self.precision().min(o.precision())
    }

    fn merged_weight(&self, o: &Self) -> Option<i32> {
        if self.weight == o.weight {
            self.weight
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.meet(o);
        let coeffs = (0..=p)
            .map(|i| self.ring.add(&self.coeffs[i], &o.coeffs[i]))
            .collect();
        QSeries {
            ring: self.ring.clone(),
            coeffs,
            weight: self.merged_weight(o),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.meet(o);
        let coeffs = (0..=p)
            .map(|i| self.ring.sub(&self.coeffs[i], &o.coeffs[i]))
            .collect();
        QSeries {
            ring: self.ring.clone(),
            coeffs,
            weight: self.merged_weight(o),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
            weight: self.weight,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.meet(o);
        let coeffs = self.ring.convolve(&self.coeffs, &o.coeffs, p);
        QSeries {
            ring: self.ring.clone(),
            coeffs,
            weight: match (self.weight, o.weight) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect(),
            weight: self.weight,
        }
    }

    /// Level-checked binary operation.
    pub fn try_combine(&self, o: &Self, op: SeriesOp) -> Result<Self> {
        if self.ring != o.ring {
            return Err(Error::LevelMismatch(self.level(), o.level()));
        }
        Ok(match op {
            SeriesOp::Add => self.add(o),
            SeriesOp::Sub => self.sub(o),
            SeriesOp::Mul => self.mul(o),
        })
    }

    /// Applies a coefficient map, e.g. a Galois automorphism.
    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
            weight: self.weight,
        }
    }

    /// Reduces into another coefficient ring.
    pub fn map_ring<S: CoeffRing>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> QSeries<S> {
        QSeries {
            ring: target.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
            weight: self.weight,
        }
    }

    /// Coefficients `c_{n·step}` for `n ≤ precision / step`: the series `Σ c_{nk} q^n`.
    pub fn decimate(&self, step: usize) -> Self {
        assert!(step >= 1);
        let p = self.precision() / step;
        QSeries {
            ring: self.ring.clone(),
            coeffs: (0..=p).map(|n| self.coeffs[n * step].clone()).collect(),
            weight: self.weight,
        }
    }

    /// `f(q^k)`, known through `q^{k·P}`.
    pub fn substitute(&self, k: usize) -> Self {
        assert!(k >= 1);
        let p = self.precision() * k;
        let mut coeffs = vec![self.ring.zero(); p + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n * k] = c.clone();
        }
        QSeries {
            ring: self.ring.clone(),
            coeffs,
            weight: self.weight,
        }
    }

    /// First index at which the series differ, through the shared precision.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let p = self.meet(o);
        (0..=p).find(|&i| self.coeffs[i] != o.coeffs[i])
    }
}

impl QSeries<CyclotomicField> {
    pub fn galois(&self, d: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.galois(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries {
            ring: self.ring.clone(),
            coeffs,
            weight: self.weight,
        })
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            level: self.level(),
            precision: self.precision(),
            weight: self.weight,
            coeffs: self.coeffs.iter().map(cyclotomic_to_strings).collect(),
            complex: None,
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.coeffs.len() != j.precision + 1 {
            return Err(Error::Parse(format!(
                "precision {} needs {} coefficients, found {}",
                j.precision,
                j.precision + 1,
                j.coeffs.len()
            )));
        }
        let ring = CyclotomicField::new(j.level);
        let coeffs = j
            .coeffs
            .iter()
            .map(|v| {
                let rs = v
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<BigRational>>>()?;
                ring.from_coeffs(&rs)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = QSeries::new(ring, coeffs);
        s.weight = j.weight;
        Ok(s)
    }
}

pub fn cyclotomic_to_strings(c: &Cyclotomic) -> Vec<String> {
    c.coeffs().iter().map(format_rational).collect()
}

/// Wire form of a cyclotomic q-expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub level: u64,
    pub precision: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i32>,
    pub coeffs: Vec<Vec<String>>,
    /// Optional floating approximations `[re, im]` per coefficient, for reading only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<Vec<[f64; 2]>>,
}

impl SeriesJson {
    pub fn with_complex(mut self, s: &QSeries<CyclotomicField>) -> Self {
        self.complex = Some(
            s.coeffs()
                .iter()
                .map(|c| {
                    let (re, im) = c.embed();
                    [re, im]
                })
                .collect(),
        );
        self
    }
}

/// `⌊k·I/12⌋` with `I = [SL_2(Z) : Γ_1(ℓ)]`.
pub fn sturm_bound(k: u32, level: u64) -> usize {
    sturm_bound_for_index(k, gamma1_index(level))
}

pub fn sturm_bound_for_index(k: u32, index: u64) -> usize {
    (k as u64 * index / 12) as usize
}

/// Exact equality of two weight-`k` forms, decided by coefficients through the Sturm bound.
pub fn sturm_equal<R: CoeffRing>(f: &QSeries<R>, g: &QSeries<R>, k: u32, index: u64) -> Result<bool> {
    let bound = sturm_bound_for_index(k, index);
    let have = f.precision().min(g.precision());
    if have < bound {
        return Err(Error::InsufficientPrecision {
            needed: bound,
            have,
        });
    }
    if f.ring() != g.ring() {
        return Err(Error::LevelMismatch(f.level(), g.level()));
    }
    Ok((0..=bound).all(|i| f.coeff(i) == g.coeff(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> CyclotomicField {
        CyclotomicField::new(5)
    }

    #[test]
    fn one_plus_q_times_one_minus_q() {
        let k = k5();
        let a = QSeries::new(k.clone(), vec![k.one(), k.one(), k.zero()]);
        let b = QSeries::new(k.clone(), vec![k.one(), k.from_int(-1), k.zero()]);
        let c = a.mul(&b);
        assert_eq!(c, QSeries::new(k.clone(), vec![k.one(), k.zero(), k.from_int(-1)]));
        assert!(a.scale(&k.zero()).is_zero());
    }

    #[test]
    fn products_truncate_to_min_precision() {
        let k = k5();
        let a = QSeries::one(&k, 7);
        let b = QSeries::one(&k, 3);
        assert_eq!(a.mul(&b).precision(), 3);
        assert_eq!(a.add(&b).precision(), 3);
    }

    #[test]
    fn sturm_bound_level_eleven() {
        assert_eq!(sturm_bound(2, 11), 20);
        assert_eq!(sturm_bound(2, 37), 228);
    }

    #[test]
    fn sturm_equal_ignores_terms_past_bound() {
        let k = CyclotomicField::new(11);
        let f = QSeries::new(k.clone(), (0..=21).map(|i| k.xi_pow(i)).collect());
        assert_eq!(sturm_equal(&f, &f, 2, 120), Ok(true));
        let g = f.add(&QSeries::monomial(&k, 21, k.one(), 21));
        assert_eq!(sturm_equal(&f.truncate(20), &g.truncate(20), 2, 120), Ok(true));
        assert_eq!(sturm_equal(&f, &g, 2, 120), Ok(true));
        let short = f.truncate(19);
        assert!(matches!(
            sturm_equal(&short, &short, 2, 120),
            Err(Error::InsufficientPrecision { needed: 20, have: 19 })
        ));
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a = QSeries::one(&k5(), 3);
        let b = QSeries::one(&CyclotomicField::new(7), 3);
        assert_eq!(a.try_combine(&b, SeriesOp::Add), Err(Error::LevelMismatch(5, 7)));
    }

    #[test]
    fn json_round_trip() {
        let k = k5();
        let x = k.xi_pow(2).inv().unwrap();
        let s = QSeries::new(k.clone(), vec![x.clone(), k.zero(), k.add(&x, &k.from_int(3))]).with_weight(2);
        let j = s.to_json();
        assert_eq!(j.coeffs[1], vec!["0/1"; 4]);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QSeries::from_json(&back).unwrap(), s);
    }
}
