//! Cohomology of torus-invariant Weil divisors on complete simplicial toric
//! varieties.
//!
//! For each character `m`, the graded piece `H^i(X, O(D))_m` is the reduced
//! cohomology `H~^{i-1}` of the subcomplex of the fan spanned by the rays
//! with `<m, u_rho> < -a_rho`. Only finitely many `m` contribute; they lie in
//! the bounding box of the vertices of the arrangement
//! `<m, u_rho> in {-a_rho, -a_rho - 1}`, which is what gets enumerated.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divisor::{is_nef, polytope_of, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{
    ceil_i64, count_lattice_points, floor_i64, for_each_box_point, inverse_q, rat, IntMatrix,
    Rational,
};

/// Dimensions `h^0, ..., h^k`, each known exactly or up to an interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyVector {
    lower: Vec<u64>,
    upper: Vec<u64>,
}

impl CohomologyVector {
    pub fn exact(dims: Vec<u64>) -> Self {
        Self {
            lower: dims.clone(),
            upper: dims,
        }
    }

    pub fn interval(lower: Vec<u64>, upper: Vec<u64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l <= u));
        Self { lower, upper }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn dims(&self) -> Option<&[u64]> {
        self.is_exact().then_some(self.lower.as_slice())
    }

    /// `h^i` if it is known exactly.
    pub fn get(&self, i: usize) -> Option<u64> {
        (self.lower[i] == self.upper[i]).then_some(self.lower[i])
    }

    pub fn lower(&self) -> &[u64] {
        &self.lower
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    /// Euler characteristic, when exact.
    pub fn euler_characteristic(&self) -> Option<i64> {
        self.dims().map(|d| {
            d.iter()
                .enumerate()
                .map(|(i, &h)| if i % 2 == 0 { h as i64 } else { -(h as i64) })
                .sum()
        })
    }
}

impl fmt::Display for CohomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if self.lower[i] == self.upper[i] {
                write!(f, "{}", self.lower[i])?;
            } else {
                write!(f, "[{}..{}]", self.lower[i], self.upper[i])?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Chamber,
    NefFastpath,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chamber" => Ok(Method::Chamber),
            "nef-fastpath" => Ok(Method::NefFastpath),
            "auto" => Ok(Method::Auto),
            other => Err(Error::InvalidInput(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Chamber => "chamber",
            Method::NefFastpath => "nef-fastpath",
            Method::Auto => "auto",
        })
    }
}

/// A finite abstract simplicial complex on vertices `0..64`, faces as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// Nonempty faces, closed under taking nonempty subsets.
    faces: Vec<u64>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self { faces: Vec::new() }
    }

    /// The complex generated by the given faces (vertex index lists).
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let mut faces = Vec::new();
        for f in facets {
            let m = f.as_ref().iter().fold(0u64, |m, &v| m | 1 << v);
            let mut sub = m;
            // every nonempty submask
            while sub != 0 {
                faces.push(sub);
                sub = (sub - 1) & m;
            }
        }
        Self::from_masks(faces)
    }

    fn from_masks(mut faces: Vec<u64>) -> Self {
        faces.retain(|&f| f != 0);
        faces.sort_by_key(|&f| (f.count_ones(), f));
        faces.dedup();
        Self { faces }
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Ranks of reduced homology over `Q`; entry `k` is `H~_{k-1}`.
    pub fn reduced_betti(&self) -> Vec<u64> {
        reduced_betti_of_masks(&self.faces)
    }
}

/// The support complex of `D` at the character `m`: rays with
/// `<m, u_rho> < -a_rho` and the cones of the fan built from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportComplex {
    pub weight: Vec<i64>,
    pub negative_rays: Vec<usize>,
    pub complex: SimplicialComplex,
}

impl SupportComplex {
    pub fn new(fan: &Fan, d: &TorusDivisor, m: &[i64]) -> Self {
        let mask = negative_mask(fan.rays(), d.coefficients(), m);
        let cones = fan_cone_masks(fan);
        Self {
            weight: m.to_vec(),
            negative_rays: (0..fan.num_rays())
                .filter(|&r| mask >> r & 1 == 1)
                .collect(),
            complex: SimplicialComplex::from_masks(
                cones.into_iter().filter(|&c| c & !mask == 0).collect(),
            ),
        }
    }
}

pub fn reduced_betti(c: &SupportComplex) -> Vec<u64> {
    c.complex.reduced_betti()
}

fn negative_mask(rays: &[Vec<i64>], a: &[i64], m: &[i64]) -> u64 {
    let mut mask = 0u64;
    for (r, (u, &ar)) in rays.iter().zip(a).enumerate() {
        let dot: i64 = u.iter().zip(m).map(|(x, y)| x * y).sum();
        if dot < -ar {
            mask |= 1 << r;
        }
    }
    mask
}

/// Nonempty cones of the fan as ray bitmasks.
fn fan_cone_masks(fan: &Fan) -> Vec<u64> {
    fan.all_cones()
        .iter()
        .filter(|c| c.dim() > 0)
        .map(|c| c.mask())
        .collect()
}

fn reduced_betti_of_masks(faces: &[u64]) -> Vec<u64> {
    let top = faces
        .iter()
        .map(|f| f.count_ones() as usize)
        .max()
        .unwrap_or(0);
    // by_size[k] = faces with k vertices, k = 0 is the empty face
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    by_size[0].push(0);
    for &f in faces {
        by_size[f.count_ones() as usize].push(f);
    }
    let index: Vec<HashMap<u64, usize>> = by_size
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, &f)| (f, i)).collect())
        .collect();
    // rank of boundary C_k -> C_{k-1}, k = number of vertices
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        let rows = by_size[k - 1].len();
        let cols = by_size[k].len();
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut mat = IntMatrix::zeros(rows, cols);
        for (j, &f) in by_size[k].iter().enumerate() {
            let mut sign = 1i64;
            for v in 0..64 {
                if f >> v & 1 == 1 {
                    let i = index[k - 1][&(f & !(1 << v))];
                    mat[(i, j)] = sign.into();
                    sign = -sign;
                }
            }
        }
        ranks[k] = mat.rank();
    }
    (0..=top)
        .map(|k| (by_size[k].len() - ranks[k] - ranks[k + 1]) as u64)
        .collect()
}

/// `h^i(X, O(D))` with the method chosen automatically.
pub fn cohomology_dims(fan: &Fan, d: &TorusDivisor) -> Result<CohomologyVector> {
    cohomology_dims_with(fan, d, Method::Auto).map(|(v, _)| v)
}

/// Returns the dimensions and the method that was actually used.
pub fn cohomology_dims_with(
    fan: &Fan,
    d: &TorusDivisor,
    method: Method,
) -> Result<(CohomologyVector, Method)> {
    d.check_len(fan)?;
    if !fan.is_complete() {
        return Err(Error::NotComplete(
            "line bundle cohomology needs a complete fan".into(),
        ));
    }
    let method = match method {
        Method::Auto if is_nef(fan, d)? => Method::NefFastpath,
        Method::Auto => Method::Chamber,
        Method::NefFastpath if !is_nef(fan, d)? => {
            return Err(Error::InvalidInput(
                "nef fast path requested for a divisor that is not nef".into(),
            ))
        }
        m => m,
    };
    let dims = match method {
        Method::NefFastpath => {
            let mut dims = vec![0; fan.dim() + 1];
            dims[0] = count_lattice_points(&polytope_of(fan, d)?)?;
            dims
        }
        _ => chamber_dims(fan, d)?,
    };
    Ok((CohomologyVector::exact(dims), method))
}

/// Integer box containing every character with a nonzero contribution.
fn contributing_box(fan: &Fan, d: &TorusDivisor) -> Result<Vec<(i64, i64)>> {
    let n = fan.dim();
    let r = fan.num_rays();
    let a = d.coefficients();
    let mut lo: Vec<Option<Rational>> = vec![None; n];
    let mut hi: Vec<Option<Rational>> = vec![None; n];
    for subset in combinations(r, n) {
        let rows: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| fan.ray(i).iter().map(|&x| rat(x)).collect())
            .collect();
        let Some(inv) = inverse_q(&rows) else {
            continue;
        };
        for i in 0..n {
            let mut min = Rational::from_integer(0.into());
            let mut max = Rational::from_integer(0.into());
            for (j, &ray) in subset.iter().enumerate() {
                let c1 = &inv[i][j] * rat(-a[ray]);
                let c2 = &inv[i][j] * rat(-a[ray] - 1);
                if c1 < c2 {
                    min += &c1;
                    max += c2;
                } else {
                    min += &c2;
                    max += c1;
                }
            }
            if lo[i].as_ref().is_none_or(|l| &min < l) {
                lo[i] = Some(min);
            }
            if hi[i].as_ref().is_none_or(|h| &max > h) {
                hi[i] = Some(max);
            }
        }
    }
    (0..n)
        .map(|i| {
            let l = lo[i].as_ref().and_then(floor_i64);
            let h = hi[i].as_ref().and_then(ceil_i64);
            match (l, h) {
                (Some(l), Some(h)) => Ok((l, h)),
                _ => Err(Error::Unsupported(
                    "character box exceeds 64-bit enumeration".into(),
                )),
            }
        })
        .collect()
}

fn chamber_dims(fan: &Fan, d: &TorusDivisor) -> Result<Vec<u64>> {
    let n = fan.dim();
    let bounds = contributing_box(fan, d)?;
    let cones = fan_cone_masks(fan);
    let rays = fan.rays();
    let a = d.coefficients();
    let mut cache: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut dims = vec![0u64; n + 1];
    for_each_box_point(&bounds, |m| {
        let mask = negative_mask(rays, a, m);
        if mask == 0 {
            dims[0] += 1;
            return;
        }
        let betti = cache.entry(mask).or_insert_with(|| {
            let faces: Vec<u64> = cones.iter().copied().filter(|&c| c & !mask == 0).collect();
            reduced_betti_of_masks(&faces)
        });
        // betti[k] = H~_{k-1} contributes to h^k
        for (k, &b) in betti.iter().enumerate() {
            if b > 0 {
                dims[k] += b;
            }
        }
    });
    Ok(dims)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
