//! Integer and rational linear algebra on lattice vectors, and the
//! intermediate lattices `N ⊂ S ⊂ (1/p)N` of index `p^{d−1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::linalg::{kernel, rref};
use crate::arith::Rationals;
use crate::util::gcd_i64;

pub fn to_rational_rows(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = to_rational_rows(rows);
    rref(&Rationals, &mut m).len()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| gcd_i64(g, x))
}

/// Integer vectors spanning the rational kernel of `rows` (one per free
/// column), each scaled to be primitive.
pub fn integer_kernel(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let m = to_rational_rows(rows);
    kernel(&Rationals, &m, cols)
        .into_iter()
        .map(|v| {
            let mut den = BigInt::from(1);
            for x in &v {
                den = num_integer::Integer::lcm(&den, x.denom());
            }
            let ints: Vec<i64> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer().to_i64().unwrap()).collect();
            let g = gcd_vec(&ints);
            ints.iter().map(|x| x / g).collect()
        })
        .collect()
}

/// Solves `Σ_i x_i cols[i] = target` over Q for independent columns.
pub fn solve_in_span(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let rows = to_rational_rows(cols);
    let t: Vec<BigRational> = target.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    crate::arith::linalg::express(&Rationals, &rows, &t)
}

/// Gcd of the maximal minors of the `k × d` matrix with the given rows:
/// the index of `Z g_1 + … + Z g_k` in its saturation.
pub fn maximal_minor_gcd(gens: &[Vec<i64>]) -> i64 {
    let k = gens.len();
    if k == 0 {
        return 1;
    }
    let d = gens[0].len();
    let mut g = 0;
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<i64>> = gens.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        g = gcd_i64(g, det_i64(&sub));
        // next k-subset of 0..d
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if cols[i] < d - k + i {
                cols[i] += 1;
                for j in i + 1..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A full-rank lattice in `Q^d`, given by basis column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub rank: usize,
    /// `basis[j]` is the j-th basis vector in ambient coordinates.
    pub basis: Vec<Vec<BigRational>>,
}

impl Lattice {
    pub fn standard(d: usize) -> Self {
        let basis = (0..d)
            .map(|j| (0..d).map(|i| BigRational::from_integer(BigInt::from((i == j) as i64))).collect())
            .collect();
        Lattice { rank: d, basis }
    }

    /// Coordinates of an ambient integer vector in this basis (always
    /// integral for vectors of N, since N ⊂ S).
    pub fn coordinates(&self, v: &[i64]) -> Vec<i64> {
        let t: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let c = crate::arith::linalg::express(&Rationals, &self.basis, &t).expect("basis is invertible");
        c.iter()
            .map(|x| {
                assert!(x.is_integer(), "vector of N has non-integral coordinates in an over-lattice");
                x.to_integer().to_i64().unwrap()
            })
            .collect()
    }

    pub fn determinant(&self) -> BigRational {
        let mut m = self.basis.clone();
        // determinant via elimination on a copy
        let n = m.len();
        let mut det = BigRational::from_integer(1.into());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c].clone();
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det
    }
}

/// All lattices `S` with `N ⊂ S ⊂ (1/p)N` and `[S : N] = p^{d−1}`, one per
/// hyperplane of `F_p^d`.
pub fn intermediate_lattices(p: u64, d: usize) -> Vec<Lattice> {
    let p = p as i64;
    let mut out = Vec::new();
    // hyperplanes ker(u), u normalized with first nonzero entry 1
    let total = (p as u64).pow(d as u32);
    for code in 0..total {
        let mut u = vec![0i64; d];
        let mut c = code;
        for x in u.iter_mut() {
            *x = (c % p as u64) as i64;
            c /= p as u64;
        }
        let Some(i) = u.iter().position(|&x| x != 0) else {
            continue;
        };
        if u[i] != 1 {
            continue;
        }
        // L = {n : u·n ≡ 0 mod p} has basis p e_i and e_j − u_j e_i; S = L/p
        let mut basis = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = vec![0i64; d];
            if j == i {
                v[i] = p;
            } else {
                v[j] = 1;
                v[i] = -u[j];
            }
            basis.push(v.iter().map(|&x| BigRational::new(x.into(), p.into())).collect());
        }
        out.push(Lattice { rank: d, basis });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det_i64(&[vec![1, 0], vec![1, 2]]), 2);
        assert_eq!(det_i64(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_i64(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]), 0);
        assert_eq!(det_i64(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
        assert_eq!(maximal_minor_gcd(&[vec![1, 1, 0], vec![1, -1, 0]]), 2);
    }

    #[test]
    fn lattice_counts() {
        for p in [2u64, 3, 5] {
            for d in 1..=3usize {
                let ls = intermediate_lattices(p, d);
                assert_eq!(ls.len() as u64, (p.pow(d as u32) - 1) / (p - 1));
                for s in &ls {
                    // [S : N] = p^{d−1} means det(S) = p^{1−d}
                    let det = s.determinant();
                    let want = BigRational::new(1.into(), BigInt::from(p).pow(d as u32 - 1));
                    assert!(det == want || det == -want);
                    // N ⊂ S
                    for j in 0..d {
                        let mut e = vec![0; d];
                        e[j] = 1;
                        let _ = s.coordinates(&e);
                    }
                }
            }
        }
        assert_eq!(intermediate_lattices(7, 1), vec![Lattice::standard(1)]);
    }
}
