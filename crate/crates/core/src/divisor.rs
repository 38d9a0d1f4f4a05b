//! Torus-invariant divisors: class group, Cartier data, positivity.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{
    hermite_normal_form, smith_normal_form, solve_rational, Halfspace, IntMatrix, Rational,
    RationalPolytope,
};

/// `D = sum a_rho D_rho`, coefficients indexed by the rays of a fan.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusDivisor(pub Vec<i64>);

impl TorusDivisor {
    pub fn zero(num_rays: usize) -> Self {
        Self(vec![0; num_rays])
    }

    /// The prime divisor `D_rho`.
    pub fn prime(num_rays: usize, ray: usize) -> Self {
        let mut v = vec![0; num_rays];
        v[ray] = 1;
        Self(v)
    }

    /// `-K = sum D_rho`.
    pub fn anticanonical(fan: &Fan) -> Self {
        Self(vec![1; fan.num_rays()])
    }

    /// `div(chi^m) = sum <m, u_rho> D_rho`.
    pub fn principal(fan: &Fan, m: &[i64]) -> Self {
        Self(
            fan.rays()
                .iter()
                .map(|u| u.iter().zip(m).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.0.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch(format!(
                "divisor has {} coefficients, fan has {} rays",
                self.0.len(),
                fan.num_rays()
            )));
        }
        Ok(())
    }
}

impl Add for &TorusDivisor {
    type Output = TorusDivisor;
    fn add(self, rhs: &TorusDivisor) -> TorusDivisor {
        TorusDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TorusDivisor {
    type Output = TorusDivisor;
    fn sub(self, rhs: &TorusDivisor) -> TorusDivisor {
        TorusDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TorusDivisor {
    type Output = TorusDivisor;
    fn neg(self) -> TorusDivisor {
        TorusDivisor(self.0.iter().map(|a| -a).collect())
    }
}

/// Coordinates of a divisor class in `Z^t ⊕ (⊕ Z/d_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassCoords {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

/// `CL(F)`: the cokernel of `M -> Z^{#rays}`, `m -> (<m, u_rho>)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassGroup {
    rank: usize,
    torsion: Vec<BigInt>,
    free_projection: IntMatrix,
    torsion_projection: IntMatrix,
}

impl DivisorClassGroup {
    /// Free rank `t`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invariant factors `d_i > 1` of the torsion subgroup.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Rows map a divisor to its free coordinates (in Hermite normal form).
    pub fn free_projection(&self) -> &IntMatrix {
        &self.free_projection
    }

    pub fn class_of(&self, d: &TorusDivisor) -> ClassCoords {
        let a: Vec<BigInt> = d.0.iter().map(|&x| BigInt::from(x)).collect();
        let free = self
            .free_projection
            .mul_vec(&a)
            .expect("divisor length checked against the fan");
        let torsion = self
            .torsion_projection
            .mul_vec(&a)
            .expect("divisor length checked against the fan")
            .into_iter()
            .zip(&self.torsion)
            .map(|(y, d)| y.mod_floor(d))
            .collect();
        ClassCoords { free, torsion }
    }

    pub fn linearly_equivalent(&self, a: &TorusDivisor, b: &TorusDivisor) -> bool {
        self.class_of(a) == self.class_of(b)
    }
}

pub fn class_group(fan: &Fan) -> DivisorClassGroup {
    let r = fan.full_ray_matrix();
    let (d, u, _) = smith_normal_form(&r);
    let n = fan.dim();
    let rows = fan.num_rays();
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..n {
        let di = &d[(i, i)];
        if di > &BigInt::one() {
            torsion.push(di.clone());
            torsion_rows.push(i);
        }
    }
    let free_rows: Vec<usize> = (n..rows).collect();
    let (free_projection, _) = hermite_normal_form(&u.select_rows(&free_rows));
    DivisorClassGroup {
        rank: rows - n,
        torsion,
        free_projection,
        torsion_projection: u.select_rows(&torsion_rows),
    }
}

pub fn divisor_class(group: &DivisorClassGroup, d: &TorusDivisor) -> ClassCoords {
    group.class_of(d)
}

/// Per maximal cone, `m_sigma` with `<m_sigma, u_rho> = -a_rho` for every ray of sigma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierData {
    pub m: Vec<Vec<Rational>>,
}

pub fn cartier_data(fan: &Fan, d: &TorusDivisor) -> Result<CartierData> {
    d.check_len(fan)?;
    let mut m = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let a = fan.ray_matrix(cone);
        let b: Vec<BigInt> = cone.rays().iter().map(|&r| BigInt::from(-d.0[r])).collect();
        let sol = solve_rational(&a, &b)?.expect("simplicial cones have independent rays");
        m.push(sol.x);
    }
    Ok(CartierData { m })
}

fn wall_margins(fan: &Fan, d: &TorusDivisor) -> Result<Vec<Rational>> {
    let data = cartier_data(fan, d)?;
    let walls = fan.walls()?;
    Ok(walls
        .iter()
        .map(|w| {
            let m = &data.m[w.cone];
            let u = fan.ray(w.extra_ray);
            let dot: Rational = m
                .iter()
                .zip(u)
                .map(|(mi, &ui)| mi * Rational::from_integer(ui.into()))
                .sum();
            dot + Rational::from_integer(d.0[w.extra_ray].into())
        })
        .collect())
}

/// Nef iff the support function is convex across every wall.
pub fn is_nef(fan: &Fan, d: &TorusDivisor) -> Result<bool> {
    Ok(wall_margins(fan, d)?.iter().all(|v| !v.is_negative()))
}

/// Ample iff the support function is strictly convex across every wall.
pub fn is_ample(fan: &Fan, d: &TorusDivisor) -> Result<bool> {
    Ok(wall_margins(fan, d)?.iter().all(|v| v.is_positive()))
}

pub fn is_fano(fan: &Fan) -> Result<bool> {
    is_ample(fan, &TorusDivisor::anticanonical(fan))
}

/// `P_D = { m : <m, u_rho> >= -a_rho }`.
pub fn polytope_of(fan: &Fan, d: &TorusDivisor) -> Result<RationalPolytope> {
    d.check_len(fan)?;
    let halfspaces = fan
        .rays()
        .iter()
        .zip(&d.0)
        .map(|(u, &a)| Halfspace {
            normal: u.clone(),
            offset: a.into(),
        })
        .collect();
    RationalPolytope::new(fan.dim(), halfspaces)
}
