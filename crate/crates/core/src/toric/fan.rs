//! Complete fans and degree functions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cone::{extreme_rays, face_sets, facets, is_pointed};
use super::lattice::{dot, gcd_vec, rank_i64};
use crate::arith::linalg::express;
use crate::arith::Rationals;
use crate::{Error, Result};

/// A cone of the fan: sorted ray indices and codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub rays: Vec<usize>,
    pub codim: usize,
    /// Some maximal cone containing this face.
    pub max_cone: usize,
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub faces: Vec<Face>,
}

impl Fan {
    pub fn ray_vectors(&self, idx: &[usize]) -> Vec<Vec<i64>> {
        idx.iter().map(|&i| self.rays[i].clone()).collect()
    }
}

fn cone_contains(normals: &[Vec<i64>], v: &[i64]) -> bool {
    normals.iter().all(|u| dot(u, v) >= 0)
}

/// Validates the rays and maximal cones and enumerates all faces.
pub fn build_fan(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
    let d = rays.first().map(|r| r.len()).ok_or_else(|| Error::InvalidArgument("fan has no rays".into()))?;
    if d == 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    for (i, r) in rays.iter().enumerate() {
        if r.len() != d {
            return Err(Error::InvalidArgument(format!("ray {i} has length {}, expected {d}", r.len())));
        }
        if gcd_vec(r) != 1 {
            return Err(Error::InvalidArgument(format!("ray {i} = {r:?} is not primitive")));
        }
        if rays[..i].contains(r) {
            return Err(Error::InvalidArgument(format!("ray {i} = {r:?} is repeated")));
        }
    }
    if max_cones.is_empty() {
        return Err(Error::NotComplete("no maximal cones".into()));
    }
    let mut max_cones: Vec<Vec<usize>> = max_cones
        .into_iter()
        .map(|mut c| {
            c.sort();
            c.dedup();
            c
        })
        .collect();
    // facet normals in ambient coordinates (maximal cones are full-dimensional)
    let mut normals: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut cone_faces: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut facet_owners: BTreeMap<Vec<usize>, Vec<(usize, Vec<i64>)>> = BTreeMap::new();
    for (ci, c) in max_cones.iter_mut().enumerate() {
        if c.is_empty() || c.iter().any(|&i| i >= rays.len()) {
            return Err(Error::InvalidArgument(format!("cone {ci} has invalid ray indices")));
        }
        let vecs: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
        if rank_i64(&vecs) != d {
            return Err(Error::NotComplete(format!("maximal cone {ci} is not full-dimensional")));
        }
        if !is_pointed(&vecs) {
            return Err(Error::NonPointed(format!("maximal cone {ci}")));
        }
        if extreme_rays(&vecs).len() != vecs.len() {
            return Err(Error::ImproperIntersection(format!("maximal cone {ci} lists a ray in its interior or on a face")));
        }
        let (_, fs) = facets(&vecs);
        for f in &fs {
            let key: Vec<usize> = f.rays.iter().map(|&j| c[j]).collect();
            facet_owners.entry(key).or_default().push((ci, f.normal.clone()));
        }
        normals.push(fs.iter().map(|f| f.normal.clone()).collect());
        cone_faces.push(face_sets(&vecs).into_iter().map(|s| s.iter().map(|&j| c[j]).collect()).collect());
    }
    // every facet is shared by exactly two maximal cones on opposite sides
    for (key, owners) in &facet_owners {
        if owners.len() != 2 {
            return Err(Error::NotComplete(format!("facet {key:?} lies in {} maximal cones", owners.len())));
        }
        let neg: Vec<i64> = owners[1].1.iter().map(|x| -x).collect();
        if owners[0].1 != neg {
            return Err(Error::ImproperIntersection(format!("cones sharing facet {key:?} overlap")));
        }
    }
    // adjacency graph connected
    let n = max_cones.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for owners in facet_owners.values() {
            if owners.iter().any(|o| o.0 == c) {
                for o in owners {
                    if !seen[o.0] {
                        seen[o.0] = true;
                        stack.push(o.0);
                    }
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::NotComplete("maximal cones are not connected through facets".into()));
    }
    // a generic vector lies in exactly one maximal cone
    let all_normals: Vec<&Vec<i64>> = normals.iter().flatten().collect();
    let generic = (7i64..)
        .map(|t| (0..d).map(|j| t.pow(j as u32) * if j % 2 == 0 { 1 } else { -1 }).collect::<Vec<i64>>())
        .find(|v| all_normals.iter().all(|u| dot(u, v) != 0))
        .unwrap();
    let covering = normals.iter().filter(|ns| cone_contains(ns, &generic)).count();
    if covering != 1 {
        return Err(if covering == 0 {
            Error::NotComplete("a generic vector lies in no maximal cone".into())
        } else {
            Error::ImproperIntersection(format!("a generic vector lies in {covering} maximal cones"))
        });
    }
    // pairwise intersections are common faces
    for i in 0..n {
        for j in i + 1..n {
            let common: Vec<usize> = max_cones[i].iter().copied().filter(|x| max_cones[j].contains(x)).collect();
            if !cone_faces[i].contains(&common) || !cone_faces[j].contains(&common) {
                return Err(Error::ImproperIntersection(format!("cones {i} and {j} meet in a non-face")));
            }
            for (a, b) in [(i, j), (j, i)] {
                for &r in &max_cones[a] {
                    if !common.contains(&r) && cone_contains(&normals[b], &rays[r]) {
                        return Err(Error::ImproperIntersection(format!("ray {r} of cone {a} lies in cone {b}")));
                    }
                }
            }
        }
    }
    let mut faces: BTreeMap<Vec<usize>, Face> = BTreeMap::new();
    for (ci, fs) in cone_faces.iter().enumerate() {
        for f in fs {
            faces.entry(f.clone()).or_insert_with(|| {
                let dim = rank_i64(&f.iter().map(|&r| rays[r].clone()).collect::<Vec<_>>());
                Face { rays: f.clone(), codim: d - dim, max_cone: ci }
            });
        }
    }
    let mut faces: Vec<Face> = faces.into_values().collect();
    faces.sort_by(|a, b| b.codim.cmp(&a.codim).then(a.rays.cmp(&b.rays)));
    Ok(Fan { rank: d, rays, max_cones, faces })
}

/// Piecewise-linear degree function, given by `deg(g) = a_g / ℓ` on the ray
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeFunction {
    pub level: u64,
    pub values: Vec<i64>,
    /// For each maximal cone, the integer covector `λ` with `ℓ·deg = ⟨λ, ·⟩`.
    pub functionals: Vec<Vec<i64>>,
}

impl DegreeFunction {
    pub fn new(fan: &Fan, level: u64, values: Vec<i64>) -> Result<Self> {
        if level < 2 {
            return Err(Error::InvalidDegree(format!("level must be at least 2, got {level}")));
        }
        if values.len() != fan.rays.len() {
            return Err(Error::InvalidDegree(format!("{} values for {} rays", values.len(), fan.rays.len())));
        }
        if let Some(i) = values.iter().position(|a| a.rem_euclid(level as i64) == 0) {
            return Err(Error::InvalidDegree(format!("deg is integral on ray {i}")));
        }
        let mut functionals = Vec::new();
        for (ci, c) in fan.max_cones.iter().enumerate() {
            // pick d independent rays and solve ⟨λ, g⟩ = a_g
            let mut basis: Vec<usize> = Vec::new();
            for &r in c {
                let mut t = fan.ray_vectors(&basis);
                t.push(fan.rays[r].clone());
                if rank_i64(&t) > basis.len() {
                    basis.push(r);
                }
            }
            let rows = crate::toric::lattice::to_rational_rows(&fan.ray_vectors(&basis));
            // λ solves G λ = a, i.e. λ is a combination of the columns of Gᵀ
            let cols: Vec<Vec<BigRational>> =
                (0..fan.rank).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
            let target: Vec<BigRational> = basis.iter().map(|&r| BigRational::from_integer(BigInt::from(values[r]))).collect();
            let lambda = express(&Rationals, &cols, &target).expect("independent rays");
            if lambda.iter().any(|x| !x.is_integer()) {
                return Err(Error::InvalidDegree(format!("deg does not take values in ℓ⁻¹Z on cone {ci}")));
            }
            let lambda: Vec<i64> = lambda.iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
            for &r in c {
                if dot(&lambda, &fan.rays[r]) != values[r] {
                    return Err(Error::InvalidDegree(format!("deg is not linear on cone {ci}")));
                }
            }
            functionals.push(lambda);
        }
        Ok(DegreeFunction { level, values, functionals })
    }

    /// `ℓ·deg(n)` for a lattice point of the given face.
    pub fn scaled_at(&self, face: &Face, n: &[i64]) -> i64 {
        dot(&self.functionals[face.max_cone], n)
    }

    /// The degree function `k·deg` on the same fan.
    pub fn scaled(&self, fan: &Fan, k: i64) -> Result<Self> {
        DegreeFunction::new(fan, self.level, self.values.iter().map(|a| a * k).collect())
    }
}

/// Fan file contents: `deg(rays[i]) = deg[i] / level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub level: u64,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    pub deg: Vec<i64>,
}

impl FanJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<(Fan, DegreeFunction)> {
        if self.rays.iter().any(|r| r.len() != self.rank) {
            return Err(Error::InvalidArgument("ray length differs from rank".into()));
        }
        let fan = build_fan(self.rays.clone(), self.cones.clone())?;
        let deg = DegreeFunction::new(&fan, self.level, self.deg.clone())?;
        Ok((fan, deg))
    }
}

/// The fan of `P^d` with rays `e_1, …, e_d, −Σ e_i`.
pub fn projective_space_fan(d: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    rays.push(vec![-1; d]);
    let cones = (0..=d).map(|skip| (0..=d).filter(|&i| i != skip).collect()).collect();
    build_fan(rays, cones).expect("projective space fan is complete")
}

/// Ray sets of all faces, for tests and reports.
pub fn face_ray_sets(fan: &Fan) -> BTreeSet<Vec<usize>> {
    fan.faces.iter().map(|f| f.rays.clone()).collect()
}
