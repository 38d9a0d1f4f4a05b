//! Rational simplicial fans.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{invariant_factors, maximize, rat, IntMatrix, LpOutcome, Rational};

/// Rays are tracked in `u64` bitmasks throughout the crate.
pub const MAX_RAYS: usize = 64;

/// A cone of a fan, given by the sorted indices of its rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self { rays }
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn mask(&self) -> u64 {
        self.rays.iter().fold(0, |m, &r| m | (1 << r))
    }

    pub fn from_mask(mask: u64) -> Self {
        Self {
            rays: (0..MAX_RAYS).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    /// All faces, including the empty face and the cone itself.
    pub fn faces(&self) -> impl Iterator<Item = Cone> + '_ {
        let k = self.rays.len();
        (0u64..1 << k).map(move |sub| Cone {
            rays: (0..k)
                .filter(|&i| sub >> i & 1 == 1)
                .map(|i| self.rays[i])
                .collect(),
        })
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.mask() & !other.mask() == 0
    }
}

/// Codimension-one intersection of two adjacent maximal cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub facet: Cone,
    pub cone: usize,
    pub other: usize,
    /// The ray of `other` that is not in `cone`.
    pub extra_ray: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FanWarning {
    /// The input ray was divided by `factor` to make it primitive.
    Primitivized { ray: usize, factor: i64 },
}

/// A validated rational simplicial fan with no torus factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Cone>,
}

impl Fan {
    /// Validates a fan and discards normalization warnings.
    pub fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        validate_fan(rays, max_cones).map(|(f, _)| f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn max_cone_masks(&self) -> Vec<u64> {
        self.max_cones.iter().map(Cone::mask).collect()
    }

    /// Whether the given ray set spans a cone of the fan.
    pub fn is_cone(&self, mask: u64) -> bool {
        self.max_cones.iter().any(|c| mask & !c.mask() == 0)
    }

    /// Every cone of the fan (including the zero cone), sorted by dimension then rays.
    pub fn all_cones(&self) -> Vec<Cone> {
        let set: BTreeSet<(usize, Cone)> = self
            .max_cones
            .iter()
            .flat_map(|c| c.faces().map(|f| (f.dim(), f)).collect::<Vec<_>>())
            .collect();
        set.into_iter().map(|(_, c)| c).collect()
    }

    /// Ray generators of a cone as matrix rows.
    pub fn ray_matrix(&self, cone: &Cone) -> IntMatrix {
        let rows: Vec<&[i64]> = cone
            .rays()
            .iter()
            .map(|&i| self.rays[i].as_slice())
            .collect();
        IntMatrix::from_rows(&rows, self.dim).expect("rays share the lattice dimension")
    }

    /// All rays as the rows of a `#rays x dim` matrix.
    pub fn full_ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays, self.dim).expect("rays share the lattice dimension")
    }

    pub fn is_complete(&self) -> bool {
        if self.max_cones.iter().any(|c| c.dim() != self.dim) {
            return false;
        }
        let mut facets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.max_cones.iter().enumerate() {
            let m = c.mask();
            for &r in c.rays() {
                facets.entry(m & !(1 << r)).or_default().push(i);
            }
        }
        if facets.values().any(|owners| owners.len() != 2) {
            return false;
        }
        // connectivity of the adjacency graph
        let n = self.max_cones.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for owners in facets.values() {
                if owners.contains(&i) {
                    for &j in owners {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Index of the sublattice generated by the cone's rays in its saturation.
    pub fn cone_multiplicity(&self, cone: &Cone) -> BigInt {
        if cone.dim() == 0 {
            return BigInt::one();
        }
        invariant_factors(&self.ray_matrix(cone)).iter().product()
    }

    /// Minimal cones with multiplicity greater than one.
    pub fn singular_cones(&self) -> Vec<Cone> {
        let mut singular: Vec<Cone> = Vec::new();
        for c in self.all_cones() {
            if c.dim() == 0 || singular.iter().any(|s| s.is_face_of(&c)) {
                continue;
            }
            if self.cone_multiplicity(&c) > BigInt::one() {
                singular.push(c);
            }
        }
        singular
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones
            .iter()
            .all(|c| self.cone_multiplicity(c).is_one())
    }

    pub fn walls(&self) -> Result<Vec<Wall>> {
        if !self.is_complete() {
            return Err(Error::NotComplete("walls need a complete fan".into()));
        }
        let masks = self.max_cone_masks();
        let mut out = Vec::new();
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                let common = masks[i] & masks[j];
                if common.count_ones() as usize != self.dim - 1 {
                    continue;
                }
                let extra = masks[j] & !common;
                out.push(Wall {
                    facet: Cone::from_mask(common),
                    cone: i,
                    other: j,
                    extra_ray: extra.trailing_zeros() as usize,
                });
            }
        }
        Ok(out)
    }

    /// Product fan `self x other` in the direct-sum lattice.
    pub fn product(&self, other: &Fan) -> Fan {
        let n = self.dim + other.dim;
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; self.dim];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let shift = self.rays.len();
        let mut max_cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.rays.clone();
                c.extend(b.rays.iter().map(|&i| i + shift));
                max_cones.push(Cone::new(c));
            }
        }
        Fan {
            dim: n,
            rays,
            max_cones,
        }
    }
}

/// Validates raw fan data: rays are primitivized (with a warning), each
/// maximal cone must be simplicial, the rays must span the lattice and
/// maximal cones must meet along common faces.
pub fn validate_fan(
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
) -> Result<(Fan, Vec<FanWarning>)> {
    let Some(first) = rays.first() else {
        return Err(Error::InvalidInput("fan has no rays".into()));
    };
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidInput("rays must have positive length".into()));
    }
    if rays.len() > MAX_RAYS {
        return Err(Error::Unsupported(format!(
            "{} rays (at most {MAX_RAYS} supported)",
            rays.len()
        )));
    }
    let mut warnings = Vec::new();
    let mut prim = Vec::with_capacity(rays.len());
    for (i, r) in rays.into_iter().enumerate() {
        if r.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "ray {i} has length {}, expected {dim}",
                r.len()
            )));
        }
        let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidInput(format!("ray {i} is zero")));
        }
        if g != 1 {
            warnings.push(FanWarning::Primitivized { ray: i, factor: g });
        }
        prim.push(r.into_iter().map(|x| x / g).collect::<Vec<_>>());
    }
    for i in 0..prim.len() {
        if let Some(j) = (i + 1..prim.len()).find(|&j| prim[j] == prim[i]) {
            return Err(Error::InvalidInput(format!("rays {i} and {j} coincide")));
        }
    }

    let mut cones = Vec::with_capacity(max_cones.len());
    let mut used = vec![false; prim.len()];
    for c in max_cones {
        if c.is_empty() {
            return Err(Error::InvalidInput("empty maximal cone".into()));
        }
        if let Some(&bad) = c.iter().find(|&&i| i >= prim.len()) {
            return Err(Error::InvalidInput(format!("ray index {bad} out of range")));
        }
        let cone = Cone::new(c);
        for &i in cone.rays() {
            used[i] = true;
        }
        if cones.contains(&cone) {
            return Err(Error::InvalidInput(format!(
                "maximal cone {:?} listed twice",
                cone.rays()
            )));
        }
        cones.push(cone);
    }
    if cones.is_empty() {
        return Err(Error::InvalidInput("fan has no maximal cones".into()));
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InvalidInput(format!(
            "ray {i} lies in no maximal cone"
        )));
    }

    let fan = Fan {
        dim,
        rays: prim,
        max_cones: cones,
    };
    for c in &fan.max_cones {
        let rank = fan.ray_matrix(c).rank();
        if rank != c.dim() {
            return Err(Error::NotSimplicial {
                cone: c.rays().to_vec(),
                rays: c.dim(),
                rank,
            });
        }
    }
    let rank = fan.full_ray_matrix().rank();
    if rank != dim {
        return Err(Error::TorusFactor { rank, dim });
    }
    for (i, a) in fan.max_cones.iter().enumerate() {
        for b in &fan.max_cones[i + 1..] {
            if a.is_face_of(b) || b.is_face_of(a) {
                return Err(Error::InvalidInput(format!(
                    "cone {:?} is a face of cone {:?}",
                    a.rays(),
                    b.rays()
                )));
            }
            if !meet_in_common_face(&fan, a, b) || !meet_in_common_face(&fan, b, a) {
                return Err(Error::NotAFan {
                    first: a.rays().to_vec(),
                    second: b.rays().to_vec(),
                });
            }
        }
    }
    Ok((fan, warnings))
}

/// Checks that every point of `a ∩ b` has zero coefficients on the rays of
/// `a` not shared with `b`. `a` must be simplicial.
fn meet_in_common_face(fan: &Fan, a: &Cone, b: &Cone) -> bool {
    let own: Vec<usize> = a
        .rays()
        .iter()
        .copied()
        .filter(|r| !b.rays().contains(r))
        .collect();
    let ka = a.dim();
    let kb = b.dim();
    let nvar = ka + kb;
    // variables: lambda (ka), mu (kb)
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for coord in 0..fan.dim {
        let mut row = vec![Rational::zero(); nvar];
        for (i, &r) in a.rays().iter().enumerate() {
            row[i] = rat(fan.rays[r][coord]);
        }
        for (j, &r) in b.rays().iter().enumerate() {
            row[ka + j] = rat(-fan.rays[r][coord]);
        }
        let neg: Vec<Rational> = row.iter().map(|v| -v.clone()).collect();
        rows.push(row);
        rows.push(neg);
        rhs.push(Rational::zero());
        rhs.push(Rational::zero());
    }
    for v in 0..nvar {
        let mut row = vec![Rational::zero(); nvar];
        row[v] = rat(-1);
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut objective = vec![Rational::zero(); nvar];
    let mut cap = vec![Rational::zero(); nvar];
    for (i, r) in a.rays().iter().enumerate() {
        if own.contains(r) {
            objective[i] = rat(1);
            cap[i] = rat(1);
        }
    }
    rows.push(cap);
    rhs.push(rat(1));
    match maximize(&objective, &rows, &rhs) {
        LpOutcome::Optimal { value, .. } => value.is_zero(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    fn p1() -> Fan {
        Fan::new(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    fn p3() -> Fan {
        Fan::new(
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![-1, -1, -1],
            ],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn square_cone_is_not_simplicial() {
        let err = Fan::new(
            vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::NotSimplicial {
                rays: 4,
                rank: 3,
                ..
            }
        ));
    }

    #[test]
    fn hyperplane_rays_give_torus_factor() {
        let err = Fan::new(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -1, 0]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap_err();
        assert_eq!(err, Error::TorusFactor { rank: 2, dim: 3 });
    }

    #[test]
    fn overlapping_cones_are_not_a_fan() {
        let err = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![3, 0]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAFan { .. }));
    }

    #[test]
    fn primitivization_warns() {
        let (f, w) = validate_fan(
            vec![vec![2, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        assert_eq!(f, p2());
        assert_eq!(w, vec![FanWarning::Primitivized { ray: 0, factor: 2 }]);
        let (again, w2) = validate_fan(
            f.rays().to_vec(),
            f.max_cones().iter().map(|c| c.rays().to_vec()).collect(),
        )
        .unwrap();
        assert_eq!(again, f);
        assert!(w2.is_empty());
    }

    #[test]
    fn completeness() {
        assert!(p2().is_complete());
        let affine = Fan::new(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(!affine.is_complete());
        assert!(p1().product(&p1()).is_complete());
    }

    #[test]
    fn multiplicities() {
        let f = Fan::new(
            vec![vec![1, 0], vec![1, 2], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![0, 1])), BigInt::from(2));
        assert_eq!(
            p2().cone_multiplicity(&Cone::new(vec![0, 1])),
            BigInt::one()
        );
        // one-dimensional faces of primitive rays are smooth
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![1])), BigInt::one());
    }

    #[test]
    fn wall_counts() {
        assert_eq!(p2().walls().unwrap().len(), 3);
        assert_eq!(p3().walls().unwrap().len(), 6);
        assert_eq!(p1().product(&p1()).walls().unwrap().len(), 4);
        let affine = Fan::new(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(affine.walls(), Err(Error::NotComplete(_))));
    }

    #[test]
    fn walls_identify_extra_ray() {
        let f = p3();
        for w in f.walls().unwrap() {
            let other = &f.max_cones()[w.other];
            assert!(other.rays().contains(&w.extra_ray));
            assert!(!w.facet.rays().contains(&w.extra_ray));
            assert_eq!(w.facet.dim(), 2);
        }
    }

    #[test]
    fn every_facet_in_two_cones() {
        let f = p3();
        let masks = f.max_cone_masks();
        for m in &masks {
            for r in 0..f.num_rays() {
                if m >> r & 1 == 1 {
                    let facet = m & !(1u64 << r);
                    assert_eq!(masks.iter().filter(|&&o| facet & !o == 0).count(), 2);
                }
            }
        }
    }

    #[test]
    fn smooth_fans_have_no_singular_cones() {
        assert!(p2().singular_cones().is_empty());
        assert!(p3().singular_cones().is_empty());
        assert!(p1().product(&p2()).singular_cones().is_empty());
    }

    #[test]
    fn all_cones_of_p2() {
        // zero cone, 3 rays, 3 two-dimensional cones
        assert_eq!(p2().all_cones().len(), 7);
    }
}
