//! Rational Chow ring of a complete simplicial toric variety, presented as
//! `Q[x_rho]` modulo the Stanley-Reisner ideal and the linear relations
//! `sum <m, u_rho> x_rho`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::combinations;
use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::koszul::CompleteIntersection;
use crate::lattice::{inverse_q, rat, solve_rational_q, Rational};

/// Polynomial in the ray variables, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(num_rays: usize, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; num_rays], c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Homogeneous part of degree `k`.
    pub fn part(&self, k: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

fn support_mask(exp: &[u32]) -> u64 {
    exp.iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// The Chow ring of a fixed fan, with a memo of top-degree evaluations.
pub struct ChowRing {
    fan: Fan,
    /// Inverse of each max cone's ray matrix (rows = rays in cone order).
    cone_inverses: Vec<Vec<Vec<Rational>>>,
    memo: Mutex<HashMap<Vec<u32>, Rational>>,
}

impl fmt::Debug for ChowRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChowRing").field("fan", &self.fan).finish()
    }
}

impl ChowRing {
    pub fn new(fan: &Fan) -> Result<Self> {
        if !fan.is_complete() {
            return Err(Error::NotComplete(
                "the Chow ring presentation needs a complete fan".into(),
            ));
        }
        let cone_inverses = fan
            .max_cones()
            .iter()
            .map(|c| {
                let rows: Vec<Vec<Rational>> = c
                    .rays()
                    .iter()
                    .map(|&r| fan.ray(r).iter().map(|&x| rat(x)).collect())
                    .collect();
                inverse_q(&rows).expect("max cones of a complete simplicial fan are full rank")
            })
            .collect();
        Ok(Self {
            fan: fan.clone(),
            cone_inverses,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// Degree-one class of a torus-invariant divisor.
    pub fn linear(&self, d: &TorusDivisor) -> Poly {
        let r = self.fan.num_rays();
        let mut p = Poly::zero();
        for (i, &a) in d.coefficients().iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = 1;
            p.add_term(e, rat(a));
        }
        p
    }

    pub fn one(&self) -> Poly {
        Poly::constant(self.fan.num_rays(), Rational::one())
    }

    /// Product truncated above the top degree, dropping monomials whose
    /// support is not a cone.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let top = self.dim() as u32;
        let mut out = Poly::zero();
        for (ea, ca) in &a.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &b.terms {
                if da + eb.iter().sum::<u32>() > top {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !self.fan.is_cone(support_mask(&e)) {
                    continue;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Degree map on the top graded piece; lower-degree parts are ignored.
    pub fn degree(&self, p: &Poly) -> Rational {
        let top = self.dim() as u32;
        let mut total = Rational::zero();
        for (e, c) in &p.terms {
            if e.iter().sum::<u32>() == top {
                total += c * self.monomial_degree(e);
            }
        }
        total
    }

    fn monomial_degree(&self, exp: &[u32]) -> Rational {
        let mask = support_mask(exp);
        if !self.fan.is_cone(mask) {
            return Rational::zero();
        }
        if exp.iter().all(|&a| a <= 1) {
            // square-free of top degree: a max cone
            let cone = Cone::from_mask(mask);
            return Rational::new(1.into(), self.fan.cone_multiplicity(&cone));
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(exp) {
            return v.clone();
        }
        let rho = exp.iter().position(|&a| a >= 2).expect("repeated ray");
        let (ci, cone) = self
            .fan
            .max_cones()
            .iter()
            .enumerate()
            .find(|(_, c)| c.mask() & mask == mask)
            .expect("every cone lies in a max cone");
        let j = cone
            .rays()
            .iter()
            .position(|&r| r == rho)
            .expect("ray in cone");
        let inv = &self.cone_inverses[ci];
        // m = column j of the inverse: <m, u_rho> = 1, zero on the rest of the cone
        let m: Vec<Rational> = (0..self.dim()).map(|i| inv[i][j].clone()).collect();
        let mut total = Rational::zero();
        for other in 0..self.fan.num_rays() {
            if cone.mask() >> other & 1 == 1 {
                continue;
            }
            let pairing: Rational = self
                .fan
                .ray(other)
                .iter()
                .zip(&m)
                .map(|(&u, mi)| mi * rat(u))
                .sum();
            if pairing.is_zero() {
                continue;
            }
            let mut e = exp.to_vec();
            e[rho] -= 1;
            e[other] += 1;
            total -= pairing * self.monomial_degree(&e);
        }
        self.memo
            .lock()
            .expect("memo lock")
            .insert(exp.to_vec(), total.clone());
        total
    }

    /// Square-free cone monomials of degree `k`, as exponent vectors.
    fn cone_monomials(&self, k: usize) -> Vec<Vec<u32>> {
        let r = self.fan.num_rays();
        combinations(r, k)
            .into_iter()
            .filter(|s| self.fan.is_cone(s.iter().fold(0, |m, &i| m | 1 << i)))
            .map(|s| {
                let mut e = vec![0; r];
                for i in s {
                    e[i] = 1;
                }
                e
            })
            .collect()
    }

    fn monomial(e: &[u32]) -> Poly {
        let mut p = Poly::zero();
        p.add_term(e.to_vec(), Rational::one());
        p
    }

    /// Reduce a homogeneous polynomial of degree `k` to coordinates on a
    /// monomial basis of the degree-`k` piece, via the perfect pairing with
    /// the complementary degree.
    pub fn graded_class(&self, p: &Poly, k: usize) -> Result<GradedClass> {
        let n = self.dim();
        if k > n {
            return Err(Error::WrongDegree {
                expected: n,
                got: k,
            });
        }
        if let Some((e, _)) = p
            .terms
            .iter()
            .find(|(e, _)| e.iter().sum::<u32>() as usize != k)
        {
            return Err(Error::WrongDegree {
                expected: k,
                got: e.iter().sum::<u32>() as usize,
            });
        }
        let spanning = self.cone_monomials(k);
        let duals = self.cone_monomials(n - k);
        let pair = |a: &Poly| -> Vec<Rational> {
            duals
                .iter()
                .map(|d| self.degree(&self.mul(a, &Self::monomial(d))))
                .collect()
        };
        // greedy independent rows of the pairing matrix
        let mut basis = Vec::new();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for e in &spanning {
            let row = pair(&Self::monomial(e));
            let mut trial = rows.clone();
            trial.push(row.clone());
            if rank_q(&trial) > rows.len() {
                rows.push(row);
                basis.push(e.clone());
            }
        }
        let target = pair(p);
        let coords = if basis.is_empty() {
            Vec::new()
        } else {
            // coords . rows = target; transpose to solve
            let t: Vec<Vec<Rational>> = (0..duals.len())
                .map(|c| rows.iter().map(|r| r[c].clone()).collect())
                .collect();
            solve_rational_q(t, target, basis.len())
                .ok_or_else(|| Error::InvalidInput("class outside the span of its basis".into()))?
                .x
        };
        Ok(GradedClass {
            degree: k,
            basis,
            coords,
        })
    }
}

fn rank_q(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[i][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A class in one graded piece, in coordinates on a monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedClass {
    pub degree: usize,
    pub basis: Vec<Vec<u32>>,
    pub coords: Vec<Rational>,
}

impl GradedClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Degree of a product of exactly `dim` divisors.
pub fn intersection_number(fan: &Fan, divisors: &[TorusDivisor]) -> Result<Rational> {
    if divisors.len() != fan.dim() {
        return Err(Error::WrongDegree {
            expected: fan.dim(),
            got: divisors.len(),
        });
    }
    for d in divisors {
        d.check_len(fan)?;
    }
    let ring = ChowRing::new(fan)?;
    let p = divisors
        .iter()
        .fold(ring.one(), |acc, d| ring.mul(&acc, &ring.linear(d)));
    Ok(ring.degree(&p))
}

/// Degree of a monomial `prod x_rho^{e_rho}` of total degree `dim`.
pub fn monomial_intersection(fan: &Fan, exponents: &[u32]) -> Result<Rational> {
    if exponents.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for {} rays",
            exponents.len(),
            fan.num_rays()
        )));
    }
    let total: u32 = exponents.iter().sum();
    if total as usize != fan.dim() {
        return Err(Error::WrongDegree {
            expected: fan.dim(),
            got: total as usize,
        });
    }
    let ring = ChowRing::new(fan)?;
    Ok(ring.degree(&ChowRing::monomial(exponents)))
}

/// Chern classes of the ambient tangent sheaf, of the normal bundle and of
/// `Z`, each as a list of homogeneous parts in degrees `0..=m`.
#[derive(Debug, Clone)]
pub struct ChernData {
    pub tangent: Vec<Poly>,
    pub normal: Vec<Poly>,
    pub z: Vec<Poly>,
    /// `[Z] = prod N_i`.
    pub fundamental: Poly,
}

pub fn chern_data(ring: &ChowRing, z: &CompleteIntersection) -> ChernData {
    let m = z.dim() as u32;
    let truncate = |p: Poly| -> Poly {
        Poly {
            terms: p
                .terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= m)
                .collect(),
        }
    };
    let r = z.fan().num_rays();
    let tangent = (0..r).fold(ring.one(), |acc, i| {
        let x = ring.linear(&TorusDivisor::prime(r, i));
        truncate(ring.mul(&acc, &ring.one().add(&x)))
    });
    let mut normal = ring.one();
    let mut inverse = ring.one();
    let mut fundamental = ring.one();
    for n in z.hypersurfaces() {
        let h = ring.linear(n);
        normal = truncate(ring.mul(&normal, &ring.one().add(&h)));
        // (1 + h)^{-1} = sum (-h)^k
        let neg = h.scale(&rat(-1));
        let mut series = ring.one();
        let mut power = ring.one();
        for _ in 0..m {
            power = truncate(ring.mul(&power, &neg));
            series = series.add(&power);
        }
        inverse = truncate(ring.mul(&inverse, &series));
        fundamental = ring.mul(&fundamental, &h);
    }
    let total_z = truncate(ring.mul(&tangent, &inverse));
    let parts = |p: &Poly| (0..=m).map(|k| p.part(k)).collect::<Vec<_>>();
    ChernData {
        tangent: parts(&tangent),
        normal: parts(&normal),
        z: parts(&total_z),
        fundamental,
    }
}

/// Chern numbers of `Z`: the top one, and `c_2^2` for fourfolds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernNumbers {
    pub dim: usize,
    pub top: Rational,
    pub c2_squared: Option<Rational>,
}

pub fn chern_numbers_ci(z: &CompleteIntersection) -> Result<ChernNumbers> {
    if !z.adjunction_holds() {
        return Err(Error::AdjunctionFailed);
    }
    let ring = ChowRing::new(z.fan())?;
    let data = chern_data(&ring, z);
    let m = z.dim();
    let on_z = |p: &Poly| ring.degree(&ring.mul(p, &data.fundamental));
    let top = on_z(&data.z[m]);
    let c2_squared = (m == 4).then(|| on_z(&ring.mul(&data.z[2], &data.z[2])));
    Ok(ChernNumbers {
        dim: m,
        top,
        c2_squared,
    })
}

/// `c_1(Z)` as a class on the ambient; zero when adjunction holds.
pub fn first_chern_class(z: &CompleteIntersection) -> Result<GradedClass> {
    let ring = ChowRing::new(z.fan())?;
    let data = chern_data(&ring, z);
    ring.graded_class(&data.z[1], 1)
}

pub(crate) fn to_integer(q: &Rational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

/// Topological Euler characteristic `c_m(Z) . [Z]`.
pub fn euler_characteristic_ci(z: &CompleteIntersection) -> Result<i64> {
    let top = chern_numbers_ci(z)?.top;
    to_integer(&top).ok_or_else(|| Error::NonIntegerEuler(top.to_string()))
}

/// Sign helper used by callers rendering rationals.
pub fn rational_string(q: &Rational) -> String {
    let (n, d) = (q.numer(), q.denom());
    if d.is_negative() {
        format!("{}/{}", -n, -d)
    } else {
        format!("{n}/{d}")
    }
}
