//! Polyhedral cones: facets, triangulation and lattice-point generating
//! functions of simplicial cones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::lattice::{dot, gcd_vec, integer_kernel, maximal_minor_gcd, rank_i64, solve_in_span};
use crate::{Error, Result};

/// A facet of a cone: inward primitive normal (in the cone's local span
/// coordinates) and the indices of the rays lying on it.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rays: Vec<usize>,
}

/// Re-expresses `rays` (all lying in a common `k`-dimensional subspace) in
/// integer coordinates of that subspace. Combinatorics of the cone are
/// unchanged because the map is linear, injective on the span and scaled
/// uniformly.
pub fn local_coordinates(rays: &[Vec<i64>]) -> (usize, Vec<Vec<i64>>) {
    let k = rank_i64(rays);
    if rays.is_empty() || k == rays[0].len() {
        return (k, rays.to_vec());
    }
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for r in rays {
        let mut t = basis.clone();
        t.push(r.clone());
        if rank_i64(&t) > basis.len() {
            basis = t;
        }
    }
    let coords: Vec<Vec<num_rational::BigRational>> =
        rays.iter().map(|r| solve_in_span(&basis, r).expect("ray lies in span of basis")).collect();
    let mut den = BigInt::one();
    for c in coords.iter().flatten() {
        den = den.lcm(c.denom());
    }
    let out = coords
        .iter()
        .map(|c| c.iter().map(|x| (x.numer() * (&den / x.denom())).to_i64().unwrap()).collect())
        .collect();
    (k, out)
}

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Facets of the cone spanned by `rays`, computed in its own linear span.
/// Returns the span dimension and the facets.
pub fn facets(rays: &[Vec<i64>]) -> (usize, Vec<Facet>) {
    let (k, loc) = local_coordinates(rays);
    if k == 0 {
        return (0, Vec::new());
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    subsets(loc.len(), k - 1, |sub| {
        let rows: Vec<Vec<i64>> = sub.iter().map(|&i| loc[i].clone()).collect();
        if rank_i64(&rows) != k - 1 {
            return;
        }
        let ker = integer_kernel(&rows, k);
        if ker.len() != 1 {
            return;
        }
        let mut u = ker[0].clone();
        let vals: Vec<i64> = loc.iter().map(|r| dot(&u, r)).collect();
        let pos = vals.iter().any(|&v| v > 0);
        let neg = vals.iter().any(|&v| v < 0);
        if pos && neg {
            return;
        }
        if neg {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        if !pos && !neg {
            return;
        }
        let on: Vec<usize> = (0..loc.len()).filter(|&i| vals[i] == 0).collect();
        if seen.insert(on.clone()) {
            let g = gcd_vec(&u);
            out.push(Facet { normal: u.iter().map(|x| x / g).collect(), rays: on });
        }
    });
    (k, out)
}

/// True when the cone has no nonzero linear subspace.
pub fn is_pointed(rays: &[Vec<i64>]) -> bool {
    let (k, fs) = facets(rays);
    if k == 0 {
        return true;
    }
    let normals: Vec<Vec<i64>> = fs.iter().map(|f| f.normal.clone()).collect();
    rank_i64(&normals) == k
}

/// Indices of the extreme rays among `rays` (for a pointed cone).
pub fn extreme_rays(rays: &[Vec<i64>]) -> Vec<usize> {
    let (k, fs) = facets(rays);
    if k <= 1 {
        return (0..rays.len()).collect();
    }
    (0..rays.len())
        .filter(|&i| {
            let normals: Vec<Vec<i64>> = fs.iter().filter(|f| f.rays.contains(&i)).map(|f| f.normal.clone()).collect();
            rank_i64(&normals) == k - 1
        })
        .collect()
}

/// All faces of a pointed cone as sorted ray-index sets, including the
/// cone itself and the zero face (empty set).
pub fn face_sets(rays: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let (_, fs) = facets(rays);
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    all.insert((0..rays.len()).collect());
    let mut frontier: Vec<Vec<usize>> = fs.iter().map(|f| f.rays.clone()).collect();
    for f in &frontier {
        all.insert(f.clone());
    }
    let facet_sets = frontier.clone();
    while let Some(f) = frontier.pop() {
        for g in &facet_sets {
            let h: Vec<usize> = f.iter().copied().filter(|x| g.contains(x)).collect();
            if all.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    all.insert(Vec::new());
    all.into_iter().collect()
}

/// Pulling triangulation of a pointed cone using its own rays; returns
/// maximal simplices as sorted index sets.
fn triangulate(rays: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<usize>> {
    let sub: Vec<Vec<i64>> = idx.iter().map(|&i| rays[i].clone()).collect();
    let k = rank_i64(&sub);
    if idx.len() == k {
        let mut s = idx.to_vec();
        s.sort();
        return vec![s];
    }
    let apex = idx[0];
    let (_, fs) = facets(&sub);
    let mut out = Vec::new();
    for f in fs {
        if f.rays.contains(&0) {
            continue;
        }
        let fidx: Vec<usize> = f.rays.iter().map(|&j| idx[j]).collect();
        for mut s in triangulate(rays, &fidx) {
            s.push(apex);
            s.sort();
            out.push(s);
        }
    }
    out
}

/// A simplicial cone with a multiplicity, one term of a signed
/// decomposition `1_C = Σ sign · 1_piece` of indicator functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCone {
    pub gens: Vec<Vec<i64>>,
    pub sign: i64,
}

/// Triangulates a pointed cone with its own extreme rays. The pieces are the
/// simplices of the triangulation not contained in the boundary of the
/// cone, signed by `(−1)^{dim C − dim σ}`, so that indicator functions (and
/// hence lattice-point generating functions) add up to the cone's.
pub fn simplicial_subdivide(rays: &[Vec<i64>]) -> Result<Vec<SignedCone>> {
    let mut prim: Vec<Vec<i64>> = Vec::new();
    for r in rays {
        let g = gcd_vec(r);
        if g == 0 {
            continue;
        }
        let p: Vec<i64> = r.iter().map(|x| x / g).collect();
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    if !is_pointed(&prim) {
        return Err(Error::NonPointed(format!("{:?}", rays)));
    }
    let ext = extreme_rays(&prim);
    let prim: Vec<Vec<i64>> = ext.iter().map(|&i| prim[i].clone()).collect();
    let k = rank_i64(&prim);
    if prim.len() == k {
        return Ok(vec![SignedCone { gens: prim, sign: 1 }]);
    }
    let simplices = triangulate(&prim, &(0..prim.len()).collect::<Vec<_>>());
    let (_, fs) = facets(&prim);
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in &simplices {
        for mask in 1u32..(1 << s.len()) {
            let f: Vec<usize> = (0..s.len()).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            faces.insert(f);
        }
    }
    Ok(faces
        .into_iter()
        .filter(|f| !fs.iter().any(|facet| f.iter().all(|x| facet.rays.contains(x))))
        .map(|f| SignedCone {
            sign: if (k - f.len()).is_multiple_of(2) { 1 } else { -1 },
            gens: f.iter().map(|&i| prim[i].clone()).collect(),
        })
        .collect())
}

/// Lattice-point generating function `(Σ_p x^p) / Π_i (1 − x^{g_i})` of a
/// simplicial cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGF {
    /// Parallelepiped points with coefficient (always +1 here).
    pub numerator: Vec<(Vec<i64>, i64)>,
    pub denominator: Vec<Vec<i64>>,
}

/// Builds the generating function of the simplicial cone with generators
/// `gens` in `Z^d`. The zero cone is passed as an empty list with `d`
/// given separately.
pub fn cone_gf(gens: &[Vec<i64>], d: usize) -> Result<ConeGF> {
    let k = gens.len();
    if k == 0 {
        return Ok(ConeGF { numerator: vec![(vec![0; d], 1)], denominator: Vec::new() });
    }
    if rank_i64(gens) != k {
        return Err(Error::NotSimplicial);
    }
    let index = maximal_minor_gcd(gens).abs();
    // Bounding box of the half-open parallelepiped.
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for g in gens {
        for j in 0..d {
            if g[j] < 0 {
                lo[j] += g[j];
            } else {
                hi[j] += g[j];
            }
        }
    }
    let mut points = Vec::new();
    let mut n = lo.clone();
    loop {
        if let Some(t) = solve_in_span(gens, &n) {
            let zero = num_rational::BigRational::from_integer(0.into());
            let one = num_rational::BigRational::from_integer(1.into());
            if t.iter().all(|x| *x >= zero && *x < one) {
                points.push((n.clone(), 1));
            }
        }
        let mut j = 0;
        loop {
            if j == d {
                if points.len() as i64 != index {
                    return Err(Error::CheckFailed(format!(
                        "parallelepiped has {} points, expected index {}",
                        points.len(),
                        index
                    )));
                }
                return Ok(ConeGF { numerator: points, denominator: gens.to_vec() });
            }
            if n[j] < hi[j] {
                n[j] += 1;
                break;
            }
            n[j] = lo[j];
            j += 1;
        }
    }
}

impl ConeGF {
    /// Expands the generating function and collects the lattice points lying
    /// in the box `‖n‖∞ ≤ radius`. `h` must be a covector positive on every
    /// generator, used to bound the expansion.
    pub fn points_in_box(&self, radius: i64, h: &[i64]) -> Vec<Vec<i64>> {
        let d = self.numerator[0].0.len();
        let bound = radius * h.iter().map(|x| x.abs()).sum::<i64>();
        let mut out = Vec::new();
        for (p, _) in &self.numerator {
            let mut stack = vec![(p.clone(), 0usize)];
            while let Some((v, i)) = stack.pop() {
                if i == self.denominator.len() {
                    if v.iter().all(|x| x.abs() <= radius) {
                        out.push(v);
                    }
                    continue;
                }
                let g = &self.denominator[i];
                let mut w = v;
                while dot(h, &w) <= bound {
                    stack.push((w.clone(), i + 1));
                    for j in 0..d {
                        w[j] += g[j];
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct enumeration of lattice points of the cone in the box, by
    /// testing membership with rational coordinates in a triangulation-free
    /// way: n ∈ C iff n satisfies every facet inequality and lies in the
    /// span.
    fn brute_force(rays: &[Vec<i64>], radius: i64) -> Vec<Vec<i64>> {
        let d = rays[0].len();
        let (k, fs) = facets(rays);
        let mut out = Vec::new();
        let mut n = vec![-radius; d];
        loop {
            let mut with = rays.to_vec();
            with.push(n.clone());
            if rank_i64(&with) == k {
                let (_, loc) = local_coordinates(&with);
                let v = loc.last().unwrap();
                if fs.iter().all(|f| dot(&f.normal, v) >= 0) {
                    out.push(n.clone());
                }
            }
            let mut j = 0;
            loop {
                if j == d {
                    out.sort();
                    return out;
                }
                if n[j] < radius {
                    n[j] += 1;
                    break;
                }
                n[j] = -radius;
                j += 1;
            }
        }
    }

    fn positive_functional(rays: &[Vec<i64>]) -> Vec<i64> {
        // sum of the inward facet normals of a full-dimensional cone
        let (_, fs) = facets(rays);
        let mut h = vec![0i64; rays[0].len()];
        for f in fs {
            h.iter_mut().zip(&f.normal).for_each(|(a, b)| *a += b);
        }
        assert!(rays.iter().all(|r| dot(&h, r) > 0));
        h
    }

    fn signed_enumeration(pieces: &[SignedCone], d: usize, radius: i64, h: &[i64]) -> Vec<Vec<i64>> {
        let mut counts: std::collections::BTreeMap<Vec<i64>, i64> = Default::default();
        for p in pieces {
            let gf = cone_gf(&p.gens, d).unwrap();
            for v in gf.points_in_box(radius, h) {
                *counts.entry(v).or_default() += p.sign;
            }
        }
        let mut out = Vec::new();
        for (v, c) in counts {
            assert!(c == 0 || c == 1, "multiplicity {} at {:?}", c, v);
            if c == 1 {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn examples() {
        let gf = cone_gf(&[vec![1]], 1).unwrap();
        assert_eq!(gf.numerator, vec![(vec![0], 1)]);
        let gf = cone_gf(&[vec![1, 0], vec![1, 2]], 2).unwrap();
        let mut pts: Vec<Vec<i64>> = gf.numerator.iter().map(|p| p.0.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![vec![0, 0], vec![1, 1]]);
        let gf = cone_gf(&[], 2).unwrap();
        assert_eq!(gf.numerator, vec![(vec![0, 0], 1)]);
        assert!(gf.denominator.is_empty());
        assert_eq!(cone_gf(&[vec![1, 0], vec![2, 0]], 2), Err(Error::NotSimplicial));
    }

    #[test]
    fn subdivide_simplicial_unchanged() {
        let rays = vec![vec![1, 0], vec![1, 3]];
        assert_eq!(simplicial_subdivide(&rays).unwrap(), vec![SignedCone { gens: rays, sign: 1 }]);
    }

    #[test]
    fn subdivide_drops_redundant_ray() {
        let rays = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let pieces = simplicial_subdivide(&rays).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].gens.len(), 2);
        let h = vec![1, 1];
        assert_eq!(signed_enumeration(&pieces, 2, 5, &h), brute_force(&rays, 5));
    }

    #[test]
    fn subdivide_square_cone() {
        let rays = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
        let pieces = simplicial_subdivide(&rays).unwrap();
        assert_eq!(pieces.iter().filter(|p| p.gens.len() == 3).count(), 2);
        assert_eq!(pieces.len(), 3);
        let h = vec![0, 0, 1];
        assert_eq!(signed_enumeration(&pieces, 3, 4, &h), brute_force(&rays, 4));
    }

    #[test]
    fn faces_of_octant_and_square_cone() {
        let oct = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(face_sets(&oct).len(), 8);
        let sq = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
        // cone, 4 facets, 4 rays, origin
        assert_eq!(face_sets(&sq).len(), 10);
        assert!(!is_pointed(&[vec![1, 0], vec![-1, 0], vec![0, 1]]));
    }

    fn small_vec(d: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, d)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn gf_matches_enumeration(d in 1usize..=3, seed in proptest::collection::vec(small_vec(3), 3)) {
            let gens: Vec<Vec<i64>> = seed.iter().take(d).map(|v| v[..d].to_vec()).collect();
            prop_assume!(rank_i64(&gens) == d);
            let gens: Vec<Vec<i64>> = gens.iter().map(|g| { let c = gcd_vec(g); g.iter().map(|x| x / c).collect() }).collect();
            let h = positive_functional(&gens);
            let gf = cone_gf(&gens, d).unwrap();
            let mut got = gf.points_in_box(6, &h);
            got.sort();
            prop_assert_eq!(got, brute_force(&gens, 6));
        }
    }
}
