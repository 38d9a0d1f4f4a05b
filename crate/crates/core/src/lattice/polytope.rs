use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{maximize, LpOutcome, Rational};
use crate::error::{Error, Result};

/// A halfspace `<m, normal> >= -offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: BigInt,
}

/// Intersection of halfspaces in `Q^dim`. May be empty or unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl RationalPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "halfspace normal {:?} in ambient dimension {dim}",
                h.normal
            )));
        }
        Ok(Self { dim, halfspaces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.halfspaces.iter().all(|h| {
            let dot: i64 = h.normal.iter().zip(m).map(|(a, b)| a * b).sum();
            BigInt::from(dot) >= -&h.offset
        })
    }

    /// Dilation by a non-negative integer factor.
    pub fn dilate(&self, k: i64) -> Self {
        Self {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: &h.offset * k,
                })
                .collect(),
        }
    }

    /// Per-coordinate integer bounds, `None` if the polytope is empty.
    pub fn integer_bounding_box(&self) -> Result<Option<Vec<(i64, i64)>>> {
        // <m,u> >= -a  <=>  -<m,u> <= a
        let a: Vec<Vec<Rational>> = self
            .halfspaces
            .iter()
            .map(|h| {
                h.normal
                    .iter()
                    .map(|&x| Rational::from_integer((-x).into()))
                    .collect()
            })
            .collect();
        let b: Vec<Rational> = self
            .halfspaces
            .iter()
            .map(|h| Rational::from_integer(h.offset.clone()))
            .collect();
        let mut bounds = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut c = vec![Rational::zero(); self.dim];
            c[i] = Rational::from_integer(1.into());
            let hi = match maximize(&c, &a, &b) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::UnboundedPolytope { coordinate: i }),
                LpOutcome::Optimal { value, .. } => value.floor().to_integer(),
            };
            c[i] = Rational::from_integer((-1).into());
            let lo = match maximize(&c, &a, &b) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::UnboundedPolytope { coordinate: i }),
                LpOutcome::Optimal { value, .. } => (-value).ceil().to_integer(),
            };
            let (Some(lo), Some(hi)) = (lo.to_i64(), hi.to_i64()) else {
                return Err(Error::Unsupported(format!(
                    "coordinate {i} range exceeds 64-bit enumeration"
                )));
            };
            bounds.push((lo, hi));
        }
        Ok(Some(bounds))
    }
}

/// All integer points of a bounded polytope, in lexicographic order.
pub fn lattice_points(p: &RationalPolytope) -> Result<Vec<Vec<i64>>> {
    let Some(bounds) = p.integer_bounding_box()? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for_each_box_point(&bounds, |m| {
        if p.contains(m) {
            out.push(m.to_vec());
        }
    });
    Ok(out)
}

/// Number of lattice points of a bounded polytope.
pub fn count_lattice_points(p: &RationalPolytope) -> Result<u64> {
    let Some(bounds) = p.integer_bounding_box()? else {
        return Ok(0);
    };
    let mut n = 0u64;
    for_each_box_point(&bounds, |m| {
        if p.contains(m) {
            n += 1;
        }
    });
    Ok(n)
}

/// Visits every integer point of a box in lexicographic order.
pub(crate) fn for_each_box_point(bounds: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let mut m: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        f(&m);
        let mut i = m.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if m[i] < bounds[i].1 {
                m[i] += 1;
                break;
            }
            m[i] = bounds[i].0;
        }
    }
}

/// Floor of a rational, as an `i64` if representable.
pub(crate) fn floor_i64(q: &Rational) -> Option<i64> {
    q.numer().div_floor(q.denom()).to_i64()
}

pub(crate) fn ceil_i64(q: &Rational) -> Option<i64> {
    q.numer().div_ceil(q.denom()).to_i64()
}
