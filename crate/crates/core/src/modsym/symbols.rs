//! The quotient of the free space on Manin symbols `(c, d)`,
//! `gcd(c, d, N) = 1`, by the two- and three-term relations, optionally
//! restricted to a ±-eigenspace of the star involution `(c, d) ↦ (−c, d)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::heilbronn::merel_matrices;
use super::Matrix;
use crate::arith::linalg::{express, kernel, mat_vec, Echelon};
use crate::arith::Rationals;
use crate::eisenstein::basis::CuspClass;
use crate::error::{Error, Result};
use crate::util::{gcd_u64, mod_inverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Full,
}

impl Sign {
    pub(crate) fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::Full => 0,
        }
    }
}

type SparseVec = Vec<(usize, BigRational)>;

/// Union–find where each node records its sign relative to its parent.
struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<i8>,
    zero: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind {
            parent: (0..n).collect(),
            sign: vec![1; n],
            zero: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        let p = self.parent[x];
        if p == x {
            return (x, 1);
        }
        let (r, s) = self.find(p);
        self.parent[x] = r;
        self.sign[x] *= s;
        (r, self.sign[x])
    }

    /// Records `x = eps · y`.
    fn union(&mut self, x: usize, y: usize, eps: i8) {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx == ry {
            if sx != eps * sy {
                self.zero[rx] = true;
            }
            return;
        }
        // x = sx·rx, y = sy·ry, so rx = sx·eps·sy·ry
        self.parent[rx] = ry;
        self.sign[rx] = sx * eps * sy;
        if self.zero[rx] {
            self.zero[ry] = true;
        }
    }
}

/// Manin-symbol model of weight-two modular symbols for Γ_1(N).
pub struct SymbolSpace {
    pub level: u64,
    pub sign: Sign,
    symbols: Vec<(u64, u64)>,
    index: Vec<Option<usize>>,
    /// Image of every symbol in the quotient basis.
    coords: Vec<SparseVec>,
    /// A symbol representing each quotient basis vector.
    reps: Vec<usize>,
    /// Cusp-side basis of the boundary target, and the boundary matrix.
    cusp_basis: Vec<CuspClass>,
    boundary: Matrix,
    cuspidal: Vec<Vec<BigRational>>,
    hecke_cache: Mutex<HashMap<u64, Matrix>>,
}

impl std::fmt::Debug for SymbolSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolSpace")
            .field("level", &self.level)
            .field("sign", &self.sign)
            .field("dim", &self.dim())
            .field("cuspidal_dim", &self.cuspidal_dim())
            .finish()
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl SymbolSpace {
    pub fn new(level: u64, sign: Sign) -> Result<Self> {
        if level < 2 {
            return Err(Error::InvalidArgument(format!("level must exceed 1, got {level}")));
        }
        let n = level;
        let ni = n as i64;
        let mut symbols = Vec::new();
        let mut index = vec![None; (n * n) as usize];
        for c in 0..n {
            for d in 0..n {
                if gcd_u64(gcd_u64(c, d), n) == 1 {
                    index[(c * n + d) as usize] = Some(symbols.len());
                    symbols.push((c, d));
                }
            }
        }
        let idx = |c: i64, d: i64| -> usize {
            let (c, d) = (c.rem_euclid(ni) as u64, d.rem_euclid(ni) as u64);
            index[(c * n + d) as usize].expect("primitive symbol")
        };
        let mut uf = SignedUnionFind::new(symbols.len());
        for (i, &(c, d)) in symbols.iter().enumerate() {
            let (c, d) = (c as i64, d as i64);
            uf.union(i, idx(-c, -d), 1);
            // x + xσ = 0 with (c, d)σ = (d, −c)
            uf.union(i, idx(d, -c), -1);
            if sign != Sign::Full {
                uf.union(i, idx(-c, d), sign.value() as i8);
            }
        }
        // free classes of the two-term quotient
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut class_reps = Vec::new();
        let mut sym_class: Vec<Option<(usize, i8)>> = Vec::with_capacity(symbols.len());
        for i in 0..symbols.len() {
            let (r, s) = uf.find(i);
            if uf.zero[r] {
                sym_class.push(None);
                continue;
            }
            let k = *class_of_root.entry(r).or_insert_with(|| {
                class_reps.push(r);
                class_reps.len() - 1
            });
            sym_class.push(Some((k, s)));
        }
        let nclass = class_reps.len();
        // three-term relations x + xτ + xτ², (c, d)τ = (d, −c − d)
        let q = Rationals;
        let mut rel = Echelon::new(&q, nclass);
        let mut seen = vec![false; symbols.len()];
        for i in 0..symbols.len() {
            if seen[i] {
                continue;
            }
            let (c, d) = (symbols[i].0 as i64, symbols[i].1 as i64);
            let t1 = idx(d, -c - d);
            let (c1, d1) = (symbols[t1].0 as i64, symbols[t1].1 as i64);
            let t2 = idx(d1, -c1 - d1);
            for j in [i, t1, t2] {
                seen[j] = true;
            }
            let mut row = vec![BigRational::zero(); nclass];
            for j in [i, t1, t2] {
                if let Some((k, s)) = sym_class[j] {
                    row[k] += rat(s as i64);
                }
            }
            rel.insert(row);
        }
        let pivots: Vec<usize> = rel.pivots().to_vec();
        let free: Vec<usize> = (0..nclass).filter(|k| !pivots.contains(k)).collect();
        let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        // class k ↦ quotient coordinates
        let mut class_coords: Vec<SparseVec> = vec![Vec::new(); nclass];
        for &k in &free {
            class_coords[k] = vec![(free_pos[&k], BigRational::one())];
        }
        for (row, &p) in rel.rows().iter().zip(&pivots) {
            class_coords[p] = free
                .iter()
                .filter(|&&f| !row[f].is_zero())
                .map(|&f| (free_pos[&f], -row[f].clone()))
                .collect();
        }
        let coords: Vec<SparseVec> = sym_class
            .iter()
            .map(|sc| match sc {
                None => Vec::new(),
                Some((k, s)) => class_coords[*k]
                    .iter()
                    .map(|(i, v)| (*i, v * rat(*s as i64)))
                    .collect(),
            })
            .collect();
        let reps: Vec<usize> = free.iter().map(|&k| class_reps[k]).collect();
        let mut space = SymbolSpace {
            level,
            sign,
            symbols,
            index,
            coords,
            reps,
            cusp_basis: Vec::new(),
            boundary: Vec::new(),
            cuspidal: Vec::new(),
            hecke_cache: Mutex::new(HashMap::new()),
        };
        space.build_boundary();
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal.len()
    }

    /// Basis of the cuspidal subspace in quotient coordinates.
    pub fn cuspidal_basis(&self) -> &[Vec<BigRational>] {
        &self.cuspidal
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    fn symbol_index(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let (c, d) = (c.rem_euclid(n) as u64, d.rem_euclid(n) as u64);
        self.index[(c * self.level + d) as usize]
    }

    /// Quotient coordinates of the symbol `(c, d)`.
    pub fn coordinates(&self, c: i64, d: i64) -> Result<Vec<BigRational>> {
        let i = self
            .symbol_index(c, d)
            .ok_or_else(|| Error::InvalidArgument(format!("({c}, {d}) is not a primitive pair mod {}", self.level)))?;
        let mut v = vec![BigRational::zero(); self.dim()];
        for (j, x) in &self.coords[i] {
            v[*j] += x;
        }
        Ok(v)
    }

    /// The two ends of the geodesic of `(c, d)`: cusps `a/c` and `b/d`
    /// of a matrix `[[a, b], [c, d]]` in SL_2(Z), returned as
    /// `(class of a/c, class of b/d)`.
    pub fn symbol_cusps(&self, c: u64, d: u64) -> (CuspClass, CuspClass) {
        let n = self.level;
        let g_c = if c == 0 { n } else { gcd_u64(c, n) };
        let g_d = if d == 0 { n } else { gcd_u64(d, n) };
        let a = mod_inverse(d as i64, g_c as i64).expect("primitive pair");
        let b = -mod_inverse(c as i64, g_d as i64).expect("primitive pair");
        (CuspClass::new(c as i64, a, n), CuspClass::new(d as i64, b, n))
    }

    /// Boundary of a symbol as a formal sum of cusp classes.
    pub fn boundary_of(&self, c: u64, d: u64) -> Vec<(CuspClass, i64)> {
        let (end, start) = self.symbol_cusps(c, d);
        if end == start {
            return Vec::new();
        }
        vec![(end, 1), (start, -1)]
    }

    fn build_boundary(&mut self) {
        let n = self.level;
        let all: Vec<CuspClass> = crate::eisenstein::basis::cusp_classes(n);
        // star involution on cusps: a/c ↦ −a/c
        let star = |y: CuspClass| CuspClass::new(y.c as i64, -(y.d as i64), n);
        let s = self.sign.value();
        let mut basis: Vec<CuspClass> = Vec::new();
        let mut image: HashMap<CuspClass, (usize, i64)> = HashMap::new();
        for &y in &all {
            if image.contains_key(&y) {
                continue;
            }
            let ys = star(y);
            if self.sign == Sign::Full {
                image.insert(y, (basis.len(), 1));
                basis.push(y);
            } else if ys == y {
                if s == 1 {
                    image.insert(y, (basis.len(), 1));
                    basis.push(y);
                } else {
                    image.insert(y, (usize::MAX, 0));
                }
            } else {
                image.insert(y, (basis.len(), 1));
                image.insert(ys, (basis.len(), s));
                basis.push(y);
            }
        }
        let dim = self.dim();
        let mut bmat = vec![vec![BigRational::zero(); dim]; basis.len()];
        for (j, &r) in self.reps.iter().enumerate() {
            let (c, d) = self.symbols[r];
            for (y, m) in self.boundary_of(c, d) {
                let (row, f) = image[&y];
                if f != 0 {
                    bmat[row][j] += rat(m * f);
                }
            }
        }
        self.cuspidal = kernel(&Rationals, &bmat, dim);
        self.cusp_basis = basis;
        self.boundary = bmat;
    }

    pub fn boundary_matrix(&self) -> &Matrix {
        &self.boundary
    }

    pub fn cusp_basis(&self) -> &[CuspClass] {
        &self.cusp_basis
    }

    /// Boundary of a quotient vector.
    pub fn boundary_vector(&self, v: &[BigRational]) -> Vec<BigRational> {
        mat_vec(&Rationals, &self.boundary, v)
    }

    /// Hecke operator `T_n` (`U_n` when `n` shares a factor with the level)
    /// on the quotient, from Merel's matrices of determinant `n`.
    pub fn hecke_matrix(&self, n: u64) -> Matrix {
        if let Some(m) = self.hecke_cache.lock().unwrap().get(&n) {
            return m.clone();
        }
        let dim = self.dim();
        let mats = merel_matrices(n as i64);
        let mut m = vec![vec![BigRational::zero(); dim]; dim];
        for (j, &r) in self.reps.iter().enumerate() {
            let (c, d) = (self.symbols[r].0 as i64, self.symbols[r].1 as i64);
            for h in &mats {
                let (c2, d2) = (c * h[0] + d * h[2], c * h[1] + d * h[3]);
                if let Some(i) = self.symbol_index(c2, d2) {
                    for (k, x) in &self.coords[i] {
                        m[*k][j] += x;
                    }
                }
            }
        }
        self.hecke_cache.lock().unwrap().insert(n, m.clone());
        m
    }

    /// `T_n` restricted to the cuspidal subspace, in the cuspidal basis.
    pub fn cuspidal_hecke_matrix(&self, n: u64) -> Result<Matrix> {
        let t = self.hecke_matrix(n);
        let k = &self.cuspidal;
        let q = Rationals;
        let mut cols = Vec::with_capacity(k.len());
        for v in k {
            let w = mat_vec(&q, &t, v);
            let c = express(&q, k, &w).ok_or_else(|| {
                Error::CheckFailed(format!("T_{n} does not preserve the cuspidal subspace at level {}", self.level))
            })?;
            cols.push(c);
        }
        // cols[j] is the image of basis vector j; transpose into matrix form
        let s = k.len();
        Ok((0..s).map(|i| (0..s).map(|j| cols[j][i].clone()).collect()).collect())
    }

    /// Coordinates of the modular symbol `{0, a/b}` (`gcd(a, b) = 1`, `b > 0`)
    /// by the continued-fraction expansion of `a/b`.
    pub fn zero_to(&self, a: i64, b: i64) -> Result<Vec<BigRational>> {
        let mut acc = vec![BigRational::zero(); self.dim()];
        for (c, d, s) in continued_fraction_symbols(a, b) {
            let v = self.coordinates(c, d)?;
            for (x, y) in acc.iter_mut().zip(v) {
                *x += y * rat(s);
            }
        }
        Ok(acc)
    }
}

/// `{0, a/b}` as a signed sum of Manin symbols `(c, d)`: with convergents
/// `p_k/q_k` (`p_{−1}/q_{−1} = 1/0`, `p_{−2}/q_{−2} = 0/1`),
/// `{0, a/b} = Σ_{k=0}^{n} {p_{k−1}/q_{k−1}, p_k/q_k}` after the leading
/// `{0, ∞}`, and each step is `g_k{0, ∞}` with bottom row
/// `((−1)^{k−1} q_k, q_{k−1})`.
pub fn continued_fraction_symbols(a: i64, b: i64) -> Vec<(i64, i64, i64)> {
    assert!(b > 0);
    // convergents of a/b
    let mut ps = vec![0i64, 1];
    let mut qs = vec![1i64, 0];
    let (mut x, mut y) = (a, b);
    while y != 0 {
        let t = x.div_euclid(y);
        let r = x.rem_euclid(y);
        let k = ps.len();
        ps.push(t * ps[k - 1] + ps[k - 2]);
        qs.push(t * qs[k - 1] + qs[k - 2]);
        x = y;
        y = r;
    }
    // {0, ∞} + Σ_k {p_{k−1}/q_{k−1}, p_k/q_k}
    let mut out = vec![(0, 1, 1)];
    for k in 2..ps.len() {
        // matrix [[p_k, p_{k−1}], [q_k, q_{k−1}]] has determinant (−1)^{k−1}
        // in this indexing; it maps ∞ ↦ p_k/q_k and 0 ↦ p_{k−1}/q_{k−1}
        let det = ps[k] * qs[k - 1] - ps[k - 1] * qs[k];
        // fix the determinant by negating the first column: then
        // {p_{k−1}/q_{k−1}, p_k/q_k} = g{0, ∞}
        out.push((det * qs[k], qs[k - 1], 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::linalg::{char_poly, mat_mul};
    use crate::util::gamma1_genus;

    #[test]
    fn cuspidal_dimensions_are_the_genus() {
        for n in [5u64, 7, 11, 13, 17] {
            let g = gamma1_genus(n) as usize;
            assert_eq!(SymbolSpace::new(n, Sign::Plus).unwrap().cuspidal_dim(), g, "+ at {n}");
            assert_eq!(SymbolSpace::new(n, Sign::Minus).unwrap().cuspidal_dim(), g, "− at {n}");
            assert_eq!(SymbolSpace::new(n, Sign::Full).unwrap().cuspidal_dim(), 2 * g, "full at {n}");
        }
    }

    #[test]
    fn level_eleven_eigenvalues() {
        let s = SymbolSpace::new(11, Sign::Minus).unwrap();
        assert_eq!(s.cuspidal_hecke_matrix(2).unwrap(), vec![vec![rat(-2)]]);
        assert_eq!(s.cuspidal_hecke_matrix(3).unwrap(), vec![vec![rat(-1)]]);
    }

    #[test]
    fn hecke_operators_commute() {
        let q = Rationals;
        for n in [11u64, 13] {
            let s = SymbolSpace::new(n, Sign::Full).unwrap();
            let ps = [2u64, 3, 5];
            for &a in &ps {
                for &b in &ps {
                    let ta = s.hecke_matrix(a);
                    let tb = s.hecke_matrix(b);
                    assert_eq!(mat_mul(&q, &ta, &tb), mat_mul(&q, &tb, &ta));
                }
            }
        }
    }

    #[test]
    fn sign_spaces_share_characteristic_polynomials() {
        let q = Rationals;
        for n in [11u64, 13, 17] {
            let plus = SymbolSpace::new(n, Sign::Plus).unwrap();
            let minus = SymbolSpace::new(n, Sign::Minus).unwrap();
            for p in [2u64, 3] {
                let a = char_poly(&q, &plus.cuspidal_hecke_matrix(p).unwrap());
                let b = char_poly(&q, &minus.cuspidal_hecke_matrix(p).unwrap());
                assert_eq!(a, b, "T_{p} at level {n}");
            }
        }
    }

    #[test]
    fn boundary_respects_star_involution() {
        let s = SymbolSpace::new(13, Sign::Full).unwrap();
        let n = 13u64;
        for c in 0..n {
            for d in 0..n {
                if gcd_u64(gcd_u64(c, d), n) != 1 {
                    continue;
                }
                let star = |y: CuspClass| CuspClass::new(y.c as i64, -(y.d as i64), n);
                let mut lhs = s.boundary_of((n - c) % n, d);
                let mut rhs: Vec<_> = s.boundary_of(c, d).into_iter().map(|(y, m)| (star(y), m)).collect();
                lhs.sort();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn degenerate_symbol_has_zero_boundary() {
        // at N = 5 the cusps of (1, 1) are 1/1 and 0/1, both in class (1, 0)
        let s = SymbolSpace::new(5, Sign::Full).unwrap();
        let (x, y) = s.symbol_cusps(1, 1);
        assert_eq!(x, y);
        assert!(s.boundary_of(1, 1).is_empty());
    }

    #[test]
    fn continued_fraction_path_has_the_right_boundary() {
        let s = SymbolSpace::new(11, Sign::Full).unwrap();
        for (a, b) in [(1i64, 3i64), (2, 7), (5, 13), (-3, 8), (7, 4)] {
            let v = s.zero_to(a, b).unwrap();
            let got = s.boundary_vector(&v);
            // expected [a/b] − [0/1] in cusp coordinates
            let mut want = vec![BigRational::zero(); s.cusp_basis().len()];
            let pos = |y: CuspClass| s.cusp_basis().iter().position(|&z| z == y).unwrap();
            want[pos(CuspClass::new(b, a, 11))] += rat(1);
            want[pos(CuspClass::new(1, 0, 11))] -= rat(1);
            assert_eq!(got, want, "{{0, {a}/{b}}}");
        }
    }
}
