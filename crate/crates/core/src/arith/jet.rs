//! Truncated Laurent expansions in an elliptic variable `z` with q-series
//! coefficients.

use serde::{Deserialize, Serialize};

use super::qseries::{QSeries, SeriesJson};
use super::{CoeffRing, CyclotomicField};

/// `Σ_{e = low}^{z_order} c_e z^e`, every `c_e` a q-series.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentJet<R: CoeffRing> {
    low: i32,
    z_order: i32,
    coeffs: Vec<QSeries<R>>,
}

impl<R: CoeffRing> LaurentJet<R> {
    /// Builds a jet from coefficients of `z^low, z^{low+1}, …`.
    pub fn new(low: i32, coeffs: Vec<QSeries<R>>) -> Self {
        assert!(!coeffs.is_empty());
        let z_order = low + coeffs.len() as i32 - 1;
        LaurentJet {
            low,
            z_order,
            coeffs,
        }
    }

    pub fn zero(ring: &R, low: i32, z_order: i32, precision: usize) -> Self {
        assert!(z_order >= low);
        let n = (z_order - low + 1) as usize;
        LaurentJet::new(low, vec![QSeries::zero(ring, precision); n])
    }

    /// `c z^e` known through `z^{z_order}`.
    pub fn monomial(e: i32, c: QSeries<R>, z_order: i32) -> Self {
        let ring = c.ring().clone();
        let mut j = Self::zero(&ring, e.min(z_order), z_order, c.precision());
        if e <= z_order {
            j.coeffs[0] = c;
        }
        j
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn pole_order(&self) -> u32 {
        (-self.low).max(0) as u32
    }

    pub fn z_order(&self) -> i32 {
        self.z_order
    }

    pub fn precision(&self) -> usize {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap()
    }

    fn ring(&self) -> &R {
        self.coeffs[0].ring()
    }

    /// Coefficient of `z^e`; exponents below `low` are zero, above `z_order` unknown.
    pub fn coeff(&self, e: i32) -> Option<QSeries<R>> {
        if e > self.z_order {
            None
        } else if e < self.low {
            Some(QSeries::zero(self.ring(), self.precision()))
        } else {
            Some(self.coeffs[(e - self.low) as usize].clone())
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &QSeries<R>)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest exponent whose coefficient is nonzero.
    pub fn first_nonzero(&self) -> Option<i32> {
        self.coeffs().find(|(_, c)| !c.is_zero()).map(|(e, _)| e)
    }

    pub fn truncate(&self, z_order: i32, precision: usize) -> Self {
        assert!(z_order <= self.z_order && z_order >= self.low);
        let n = (z_order - self.low + 1) as usize;
        LaurentJet::new(
            self.low,
            self.coeffs[..n].iter().map(|c| c.truncate(precision)).collect(),
        )
    }

    fn combine(&self, o: &Self, f: impl Fn(&QSeries<R>, &QSeries<R>) -> QSeries<R>) -> Self {
        let low = self.low.min(o.low);
        let hi = self.z_order.min(o.z_order);
        let prec = self.precision().min(o.precision());
        let coeffs = (low..=hi)
            .map(|e| {
                let a = self.coeff(e).unwrap().truncate(prec);
                let b = o.coeff(e).unwrap().truncate(prec);
                f(&a, &b)
            })
            .collect();
        LaurentJet::new(low, coeffs)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        LaurentJet::new(self.low, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// Product; known through `min(z_a + low_b, z_b + low_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        let low = self.low + o.low;
        let hi = (self.z_order + o.low).min(o.z_order + self.low);
        let prec = self.precision().min(o.precision());
        let ring = self.ring().clone();
        let coeffs = (low..=hi)
            .map(|e| {
                let mut acc = QSeries::zero(&ring, prec);
                for i in self.low..=self.z_order {
                    let j = e - i;
                    if j < o.low || j > o.z_order {
                        continue;
                    }
                    let a = &self.coeffs[(i - self.low) as usize];
                    let b = &o.coeffs[(j - o.low) as usize];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                acc
            })
            .collect();
        LaurentJet::new(low, coeffs)
    }

    /// Multiplies every z-coefficient by a q-series.
    pub fn scale_series(&self, s: &QSeries<R>) -> Self {
        LaurentJet::new(self.low, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        LaurentJet::new(self.low, self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    pub fn d_dz(&self) -> Self {
        let ring = self.ring().clone();
        let coeffs = self
            .coeffs()
            .map(|(e, c)| c.scale(&ring.from_int(e as i64)))
            .collect();
        LaurentJet::new(self.low - 1, coeffs)
    }
}

impl LaurentJet<CyclotomicField> {
    pub fn to_json(&self) -> Vec<JetTerm> {
        self.coeffs()
            .map(|(e, c)| JetTerm {
                z: e,
                series: c.to_json(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetTerm {
    pub z: i32,
    pub series: SeriesJson,
}
