//! Dense Gaussian elimination over a coefficient field.

use super::poly::{poly_trim, Poly};
use super::CoeffRing;

/// Row-echelon basis of a subspace, with pivot rows normalized to leading 1.
#[derive(Clone, Debug)]
pub struct Echelon<R: CoeffRing> {
    ring: R,
    width: usize,
    rows: Vec<Vec<R::Elem>>,
    pivots: Vec<usize>,
}

impl<R: CoeffRing> Echelon<R> {
    pub fn new(ring: &R, width: usize) -> Self {
        Echelon {
            ring: ring.clone(),
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(ring: &R, width: usize, rows: impl IntoIterator<Item = Vec<R::Elem>>) -> Self {
        let mut e = Self::new(ring, width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<R::Elem>] {
        &self.rows
    }

    /// Normal form of `v` modulo the span: every pivot coordinate becomes zero.
    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        v
    }

    fn reduce_in_place(&self, v: &mut [R::Elem]) {
        let ring = &self.ring;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if ring.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row.iter()).skip(p) {
                if !ring.is_zero(r) {
                    let t = ring.mul(&c, r);
                    ring.sub_assign(x, &t);
                }
            }
        }
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        let r = self.reduce(v);
        r.iter().all(|x| self.ring.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<R::Elem>) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = v;
        self.reduce_in_place(&mut v);
        let Some(p) = v.iter().position(|x| !self.ring.is_zero(x)) else {
            return false;
        };
        let inv = self.ring.inv(&v[p]).expect("field element");
        for x in v.iter_mut().skip(p) {
            *x = self.ring.mul(x, &inv);
        }
        // keep rows sorted by pivot so reduction sees earlier pivots first
        let pos = self.pivots.partition_point(|&q| q < p);
        // clear column p from rows with earlier pivots to keep later reductions valid
        for row in self.rows.iter_mut().take(pos) {
            if !self.ring.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(v.iter()).skip(p) {
                    if !self.ring.is_zero(r) {
                        let t = self.ring.mul(&c, r);
                        self.ring.sub_assign(x, &t);
                    }
                }
            }
        }
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }
}

/// Rank of a list of row vectors.
pub fn rank<R: CoeffRing>(ring: &R, rows: &[Vec<R::Elem>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    Echelon::from_rows(ring, first.len(), rows.iter().cloned()).rank()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<R: CoeffRing>(ring: &R, m: &mut Vec<Vec<R::Elem>>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ring.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = ring.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut().skip(c) {
            *x = ring.mul(x, &inv);
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || ring.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(prow.iter()).skip(c) {
                if !ring.is_zero(p) {
                    let t = ring.mul(&f, p);
                    ring.sub_assign(x, &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for an `rows × cols` matrix.
pub fn kernel<R: CoeffRing>(ring: &R, m: &[Vec<R::Elem>], cols: usize) -> Vec<Vec<R::Elem>> {
    let mut a = m.to_vec();
    let pivots = rref(ring, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ring.zero(); cols];
            v[f] = ring.one();
            for (row, &p) in a.iter().zip(&pivots) {
                v[p] = ring.neg(&row[f]);
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `Σ c_i rows[i] = target`, if any.
pub fn express<R: CoeffRing>(ring: &R, rows: &[Vec<R::Elem>], target: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let n = rows.len();
    let w = target.len();
    // Solve A^T c = target with A^T as a w × n system, augmented.
    let mut m: Vec<Vec<R::Elem>> = (0..w)
        .map(|j| {
            let mut r: Vec<R::Elem> = rows.iter().map(|row| row[j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let pivots = rref(ring, &mut m);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut c = vec![ring.zero(); n];
    for (row, &p) in m.iter().zip(&pivots) {
        c[p] = row[n].clone();
    }
    Some(c)
}

pub fn mat_vec<R: CoeffRing>(ring: &R, m: &[Vec<R::Elem>], v: &[R::Elem]) -> Vec<R::Elem> {
    m.iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (a, b) in row.iter().zip(v) {
                if !ring.is_zero(a) && !ring.is_zero(b) {
                    let t = ring.mul(a, b);
                    ring.add_assign(&mut acc, &t);
                }
            }
            acc
        })
        .collect()
}

pub fn mat_mul<R: CoeffRing>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![ring.zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if ring.is_zero(x) {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !ring.is_zero(y) {
                        let t = ring.mul(x, y);
                        ring.add_assign(o, &t);
                    }
                }
            }
            out
        })
        .collect()
}

/// Characteristic polynomial `det(xI − A)`, monic, lowest degree first,
/// via reduction to upper Hessenberg form.
pub fn char_poly<R: CoeffRing>(ring: &R, a: &[Vec<R::Elem>]) -> Poly<R::Elem> {
    let n = a.len();
    let mut h: Vec<Vec<R::Elem>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !ring.is_zero(&h[i][m - 1])) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = ring.inv(&h[m][m - 1]).unwrap();
        for i in m + 1..n {
            if ring.is_zero(&h[i][m - 1]) {
                continue;
            }
            let u = ring.mul(&h[i][m - 1], &inv);
            for j in 0..n {
                let t = ring.mul(&u, &h[m][j]);
                ring.sub_assign(&mut h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = ring.mul(&u, &row[i]);
                ring.add_assign(&mut row[m], &t);
            }
        }
    }
    // p_k = char poly of the leading k×k block
    let mut polys: Vec<Vec<R::Elem>> = vec![vec![ring.one()]];
    for k in 1..=n {
        // (x - h[k-1][k-1]) p_{k-1}
        let prev = &polys[k - 1];
        let mut next = vec![ring.zero(); k + 1];
        for (i, c) in prev.iter().enumerate() {
            ring.add_assign(&mut next[i + 1], c);
            let t = ring.mul(&h[k - 1][k - 1], c);
            ring.sub_assign(&mut next[i], &t);
        }
        let mut prod = ring.one();
        for i in (1..k).rev() {
            prod = ring.mul(&prod, &h[i][i - 1]);
            if ring.is_zero(&prod) {
                break;
            }
            let t = ring.mul(&prod, &h[i - 1][k - 1]);
            for (j, c) in polys[i - 1].iter().enumerate() {
                let u = ring.mul(&t, c);
                ring.sub_assign(&mut next[j], &u);
            }
        }
        polys.push(next);
    }
    poly_trim(ring, polys.pop().unwrap())
}
