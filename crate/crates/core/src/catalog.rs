//! Built-in ambient fans and Calabi-Yau complete intersections.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::koszul::CompleteIntersection;

/// Maximal cones of a simplex fan on `k` rays: every `(k-1)`-subset,
/// omitting the last ray first.
fn simplex_cones(k: usize) -> Vec<Vec<usize>> {
    (0..k)
        .rev()
        .map(|omit| (0..k).filter(|&i| i != omit).collect())
        .collect()
}

/// `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`.
pub fn projective_space(n: usize) -> Fan {
    assert!(n >= 1, "projective space needs n >= 1");
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    rays.push(vec![-1; n]);
    Fan::new(rays, simplex_cones(n + 1)).expect("projective space fan is valid")
}

/// Index of the ray that carries the relation in [`weighted_projective`]:
/// the last weight equal to one.
pub fn weighted_anchor(weights: &[i64]) -> Option<usize> {
    weights.iter().rposition(|&w| w == 1)
}

/// `P(w_0, ..., w_n)` on the lattice `Z^n`: the rays of the non-anchor
/// weights are the standard basis (in order) and the anchor ray is
/// `-sum w_i e_i`. Ray `i` always corresponds to weight `i`.
pub fn weighted_projective(weights: &[i64]) -> Result<Fan> {
    if weights.len() < 2 {
        return Err(Error::InvalidInput("need at least two weights".into()));
    }
    if weights.iter().any(|&w| w <= 0) {
        return Err(Error::InvalidInput(format!(
            "weights must be positive: {weights:?}"
        )));
    }
    if weights.iter().fold(0, |g, w| g.gcd(w)) != 1 {
        return Err(Error::InvalidInput(format!(
            "weights {weights:?} are not coprime"
        )));
    }
    let Some(anchor) = weighted_anchor(weights) else {
        return Err(Error::Unsupported(format!(
            "weighted projective space {weights:?} without a unit weight"
        )));
    };
    let n = weights.len() - 1;
    let mut rays = Vec::with_capacity(n + 1);
    let mut next = 0;
    for (i, _) in weights.iter().enumerate() {
        if i == anchor {
            rays.push(Vec::new());
            continue;
        }
        let mut v = vec![0; n];
        v[next] = 1;
        next += 1;
        rays.push(v);
    }
    let relation: Vec<i64> = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != anchor)
        .map(|(_, &w)| -w)
        .collect();
    if relation.iter().fold(0, |g, w| g.gcd(w)) != 1 {
        return Err(Error::NonPrimitiveConfiguration(weights.to_vec()));
    }
    rays[anchor] = relation;
    Fan::new(rays, simplex_cones(n + 1))
}

/// `(P^1)^k` with rays `e_1, -e_1, e_2, -e_2, ...`.
pub fn product_of_projective_lines(k: usize) -> Fan {
    assert!(k >= 1);
    let line = projective_space(1);
    (1..k).fold(line.clone(), |acc, _| acc.product(&line))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Ambient {
    Weighted { weights: Vec<i64> },
    ProductOfLines { factors: usize },
}

impl Ambient {
    pub fn fan(&self) -> Result<Fan> {
        match self {
            Ambient::Weighted { weights } => weighted_projective(weights),
            Ambient::ProductOfLines { factors } => Ok(product_of_projective_lines(*factors)),
        }
    }

    /// Torus divisor of the given degree (weighted) or multidegree (product).
    pub fn divisor_of_degree(&self, degree: &[i64]) -> Result<TorusDivisor> {
        match self {
            Ambient::Weighted { weights } => {
                let [d] = degree else {
                    return Err(Error::InvalidInput(format!(
                        "weighted degree must be a single integer, got {degree:?}"
                    )));
                };
                let anchor = weighted_anchor(weights)
                    .ok_or_else(|| Error::Unsupported("no unit weight".into()))?;
                Ok(TorusDivisor::prime(weights.len(), anchor).scale(*d))
            }
            Ambient::ProductOfLines { factors } => {
                if degree.len() != *factors {
                    return Err(Error::InvalidInput(format!(
                        "multidegree {degree:?} for {factors} factors"
                    )));
                }
                let mut v = vec![0; 2 * factors];
                for (i, &d) in degree.iter().enumerate() {
                    v[2 * i] = d;
                }
                Ok(TorusDivisor(v))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub ambient: Ambient,
    pub degrees: Vec<Vec<i64>>,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<CompleteIntersection> {
        let fan = self.ambient.fan()?;
        let hypersurfaces = self
            .degrees
            .iter()
            .map(|d| self.ambient.divisor_of_degree(d))
            .collect::<Result<Vec<_>>>()?;
        let mut ci = CompleteIntersection::new(fan, hypersurfaces, true)?;
        ci.name = Some(self.name.clone());
        ci.provenance = Some(self.provenance.clone());
        Ok(ci)
    }
}

const FLETCHER_HYPERSURFACE: &str =
    "nonsingular weighted Calabi-Yau hypersurface (Iano-Fletcher, Theorem 14.3)";
const FLETCHER_CI: &str =
    "nonsingular weighted Calabi-Yau complete intersection (Iano-Fletcher, Theorem 14.6)";

fn weighted(name: &str, weights: &[i64], degrees: &[i64], provenance: &str) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        ambient: Ambient::Weighted {
            weights: weights.to_vec(),
        },
        degrees: degrees.iter().map(|&d| vec![d]).collect(),
        provenance: provenance.into(),
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        weighted("X5", &[1, 1, 1, 1, 1], &[5], FLETCHER_HYPERSURFACE),
        weighted("X6", &[1, 1, 1, 1, 2], &[6], FLETCHER_HYPERSURFACE),
        weighted("X8", &[1, 1, 1, 1, 4], &[8], FLETCHER_HYPERSURFACE),
        weighted("X10", &[1, 1, 1, 2, 5], &[10], FLETCHER_HYPERSURFACE),
        weighted("X24", &[1, 1, 1, 1, 1, 1], &[2, 4], FLETCHER_CI),
        weighted("X33", &[1, 1, 1, 1, 1, 1], &[3, 3], FLETCHER_CI),
        weighted("X34", &[1, 1, 1, 1, 1, 2], &[3, 4], FLETCHER_CI),
        weighted("X44", &[1, 1, 1, 1, 2, 2], &[4, 4], FLETCHER_CI),
        weighted(
            "sextic4fold",
            &[1, 1, 1, 1, 1, 1],
            &[6],
            "generic sextic fourfold in P^5; added for fourfold coverage, not part of the weighted threefold list",
        ),
        CatalogEntry {
            name: "ci2222".into(),
            ambient: Ambient::ProductOfLines { factors: 4 },
            degrees: vec![vec![2, 2, 2, 2]],
            provenance: "generic (2,2,2,2) hypersurface in (P^1)^4; added for Picard rank > 1 coverage, not part of the weighted list".into(),
        },
    ]
}

pub fn catalog_names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.into()))
}

pub fn catalog_entry(name: &str) -> Result<CompleteIntersection> {
    lookup(name)?.build()
}

/// Ray set of the max cone of `fan` that omits `ray`, as a [`Cone`].
pub fn cone_omitting(fan: &Fan, ray: usize) -> Cone {
    Cone::new((0..fan.num_rays()).filter(|&r| r != ray).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{class_group, is_fano};
    use num_bigint::BigInt;

    #[test]
    fn projective_space_shapes() {
        let p1 = projective_space(1);
        assert_eq!((p1.num_rays(), p1.max_cones().len()), (2, 2));
        let p4 = projective_space(4);
        assert_eq!((p4.num_rays(), p4.max_cones().len()), (5, 5));
        assert!(is_fano(&p4).unwrap());
        assert_eq!(class_group(&projective_space(2)).rank(), 1);
    }

    #[test]
    fn unit_weights_give_projective_space() {
        for n in 1..6 {
            assert_eq!(
                weighted_projective(&vec![1; n + 1]).unwrap(),
                projective_space(n)
            );
        }
    }

    #[test]
    fn p11112_anchor_relation() {
        let f = weighted_projective(&[1, 1, 1, 1, 2]).unwrap();
        assert_eq!(f.ray(3), &[-1, -1, -1, -2]);
        assert_eq!(f.cone_multiplicity(&cone_omitting(&f, 4)), BigInt::from(2));
        assert_eq!(f.singular_cones(), vec![cone_omitting(&f, 4)]);
    }

    #[test]
    fn p11125() {
        let f = weighted_projective(&[1, 1, 1, 2, 5]).unwrap();
        assert!(is_fano(&f).unwrap());
        let sing = f.singular_cones();
        assert!(!sing.is_empty());
        assert!(sing.contains(&cone_omitting(&f, 3)));
        assert!(sing.contains(&cone_omitting(&f, 4)));
    }

    #[test]
    fn bad_weights() {
        assert!(weighted_projective(&[2, 4]).is_err());
        assert!(matches!(
            weighted_projective(&[2, 3, 5]),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            weighted_projective(&[1, 2, 4]),
            Err(Error::NonPrimitiveConfiguration(_))
        ));
    }

    #[test]
    fn all_entries_build() {
        for e in catalog() {
            let ci = e.build().unwrap();
            assert_eq!(ci.name.as_deref(), Some(e.name.as_str()));
            assert!(ci.assume_smooth());
        }
        assert_eq!(catalog().len(), 10);
        assert!(matches!(catalog_entry("X7"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn weighted_degrees_match_weight_sum() {
        for e in catalog() {
            if let Ambient::Weighted { weights } = &e.ambient {
                let total: i64 = e.degrees.iter().map(|d| d[0]).sum();
                assert_eq!(total, weights.iter().sum::<i64>(), "{}", e.name);
            }
        }
    }

    #[test]
    fn product_of_lines() {
        let f = product_of_projective_lines(4);
        assert_eq!(f.num_rays(), 8);
        assert_eq!(f.max_cones().len(), 16);
        assert!(f.is_complete());
        assert_eq!(class_group(&f).rank(), 4);
    }
}
