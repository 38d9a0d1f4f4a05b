//! Cohomology of line bundles restricted to a complete intersection, read off
//! the first page of the Koszul resolution.
//!
//! The page has entries `e(p, q) = sum_{|S| = p} h^q(F, D - N_S)` in total
//! degree `q - p`. Differentials of every page raise the total degree by one
//! and strictly lower `p`. Writing `x_k` for the total rank cancelled between
//! degrees `k` and `k + 1`, we get `h^k(Z) = a_k - x_{k-1} - x_k`, where `a_k`
//! sums the entries of degree `k`. The `x_k` are pinned down by interval
//! propagation from `h^k = 0` outside `0..=m` and `h^k >= 0`.

use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_dims, combinations, CohomologyVector};
use crate::divisor::{class_group, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteIntersection {
    pub name: Option<String>,
    pub provenance: Option<String>,
    fan: Fan,
    hypersurfaces: Vec<TorusDivisor>,
    assume_smooth: bool,
}

impl CompleteIntersection {
    pub fn new(fan: Fan, hypersurfaces: Vec<TorusDivisor>, assume_smooth: bool) -> Result<Self> {
        if hypersurfaces.is_empty() {
            return Err(Error::InvalidInput("need at least one hypersurface".into()));
        }
        for h in &hypersurfaces {
            h.check_len(&fan)?;
        }
        if hypersurfaces.len() >= fan.dim() {
            return Err(Error::InvalidInput(format!(
                "{} hypersurfaces in a {}-dimensional ambient leave nothing",
                hypersurfaces.len(),
                fan.dim()
            )));
        }
        Ok(Self {
            name: None,
            provenance: None,
            fan,
            hypersurfaces,
            assume_smooth,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn hypersurfaces(&self) -> &[TorusDivisor] {
        &self.hypersurfaces
    }

    pub fn codim(&self) -> usize {
        self.hypersurfaces.len()
    }

    /// Dimension `m` of `Z`.
    pub fn dim(&self) -> usize {
        self.fan.dim() - self.hypersurfaces.len()
    }

    /// User assertion that a generic member is smooth and avoids the
    /// singular locus of the ambient.
    pub fn assume_smooth(&self) -> bool {
        self.assume_smooth
    }

    /// `sum N_i` is linearly equivalent to `-K_F`, torsion included.
    pub fn adjunction_holds(&self) -> bool {
        let total = self
            .hypersurfaces
            .iter()
            .fold(TorusDivisor::zero(self.fan.num_rays()), |acc, h| &acc + h);
        class_group(&self.fan).linearly_equivalent(&total, &TorusDivisor::anticanonical(&self.fan))
    }

    /// The same intersection with the hypersurfaces reordered.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.codim()).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!(
                "{order:?} is not a permutation"
            )));
        }
        let mut out = self.clone();
        out.hypersurfaces = order
            .iter()
            .map(|&i| self.hypersurfaces[i].clone())
            .collect();
        Ok(out)
    }
}

/// First page of the Koszul resolution of `O_Z(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulPage {
    /// `entries[p][q] = sum_{|S| = p} h^q(F, D - N_S)`.
    pub entries: Vec<Vec<u64>>,
}

impl KoszulPage {
    pub fn new(z: &CompleteIntersection, d: &TorusDivisor) -> Result<Self> {
        d.check_len(z.fan())?;
        let n = z.codim();
        let nf = z.fan().dim();
        let mut entries = vec![vec![0u64; nf + 1]; n + 1];
        for (p, row) in entries.iter_mut().enumerate() {
            for s in combinations(n, p) {
                let twist = s
                    .iter()
                    .fold(d.clone(), |acc, &i| &acc - &z.hypersurfaces()[i]);
                let dims = cohomology_dims(z.fan(), &twist)?;
                let dims = dims.dims().expect("ambient cohomology is exact");
                for (q, &h) in dims.iter().enumerate() {
                    row[q] += h;
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn codim(&self) -> usize {
        self.entries.len() - 1
    }

    /// `sum_S (-1)^{|S|} chi(F, D - N_S)`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (p, row) in self.entries.iter().enumerate() {
            for (q, &h) in row.iter().enumerate() {
                let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
                chi += sign * h as i64;
            }
        }
        chi
    }

    /// Chase the page into bounds on `h^k(Z)`, `k = 0..=m`.
    pub fn chase(&self, m: usize) -> Result<CohomologyVector> {
        let n = self.codim() as i64;
        let nf = self.entries[0].len() as i64 - 1;
        // total degrees k = -n ..= nf, stored at k + n
        let len = (nf + n + 1) as usize;
        let idx = |k: i64| (k + n) as usize;
        let mut a = vec![0i64; len];
        for (p, row) in self.entries.iter().enumerate() {
            for (q, &h) in row.iter().enumerate() {
                a[idx(q as i64 - p as i64)] += h as i64;
            }
        }
        // x[i] is the cancellation between degree i - n and i - n + 1
        let mut x_lo = vec![0i64; len];
        let mut x_hi = vec![0i64; len];
        for i in 0..len.saturating_sub(1) {
            let k = i as i64 - n;
            x_hi[i] = self.connectible_cap(k);
        }
        let h_bounds = |k: i64| -> (i64, i64) {
            if k < 0 || k > m as i64 {
                (0, 0)
            } else {
                (0, i64::MAX / 4)
            }
        };
        // propagate h_k = a_k - x_{k-1} - x_k
        loop {
            let mut changed = false;
            for i in 0..len {
                let k = i as i64 - n;
                let (hl, hh) = h_bounds(k);
                let (pl, ph) = if i > 0 {
                    (x_lo[i - 1], x_hi[i - 1])
                } else {
                    (0, 0)
                };
                // x_k in [a - ph - hh, a - pl - hl]
                let lo = a[i] - ph - hh;
                let hi = a[i] - pl - hl;
                if lo > x_lo[i] {
                    x_lo[i] = lo;
                    changed = true;
                }
                if hi < x_hi[i] {
                    x_hi[i] = hi;
                    changed = true;
                }
                if i > 0 {
                    let (cl, ch) = (x_lo[i], x_hi[i]);
                    let lo = a[i] - ch - hh;
                    let hi = a[i] - cl - hl;
                    if lo > x_lo[i - 1] {
                        x_lo[i - 1] = lo;
                        changed = true;
                    }
                    if hi < x_hi[i - 1] {
                        x_hi[i - 1] = hi;
                        changed = true;
                    }
                }
                if x_lo[i] > x_hi[i] || (i > 0 && x_lo[i - 1] > x_hi[i - 1]) {
                    return Err(Error::InvalidInput(
                        "Koszul page admits no consistent differentials".into(),
                    ));
                }
            }
            if !changed {
                break;
            }
        }
        let mut lower = Vec::with_capacity(m + 1);
        let mut upper = Vec::with_capacity(m + 1);
        for k in 0..=m as i64 {
            let i = idx(k);
            let (pl, ph) = if i > 0 {
                (x_lo[i - 1], x_hi[i - 1])
            } else {
                (0, 0)
            };
            lower.push((a[i] - ph - x_hi[i]).max(0) as u64);
            upper.push((a[i] - pl - x_lo[i]) as u64);
        }
        Ok(CohomologyVector::interval(lower, upper))
    }

    /// Upper bound on the cancellation between degrees `k` and `k + 1`.
    fn connectible_cap(&self, k: i64) -> i64 {
        let cells = |deg: i64| -> Vec<(usize, i64)> {
            self.entries
                .iter()
                .enumerate()
                .filter_map(|(p, row)| {
                    let q = deg + p as i64;
                    (q >= 0 && (q as usize) < row.len() && row[q as usize] > 0)
                        .then(|| (p, row[q as usize] as i64))
                })
                .collect()
        };
        let sources = cells(k);
        let targets = cells(k + 1);
        let src: i64 = sources
            .iter()
            .filter(|(ps, _)| targets.iter().any(|(pt, _)| pt < ps))
            .map(|(_, h)| h)
            .sum();
        let tgt: i64 = targets
            .iter()
            .filter(|(pt, _)| sources.iter().any(|(ps, _)| pt < ps))
            .map(|(_, h)| h)
            .sum();
        src.min(tgt)
    }
}

/// `h^i(Z, O_F(D)|_Z)` for `i = 0..=m`. Intervals signal an ambiguous chase.
pub fn ci_twisted_cohomology(
    z: &CompleteIntersection,
    d: &TorusDivisor,
) -> Result<CohomologyVector> {
    let page = KoszulPage::new(z, d)?;
    let v = page.chase(z.dim())?;
    if let Some(chi) = v.euler_characteristic() {
        assert_eq!(
            chi,
            page.euler_characteristic(),
            "Euler characteristic mismatch"
        );
    }
    Ok(v)
}

fn exact_h0(z: &CompleteIntersection, d: &TorusDivisor, what: String) -> Result<u64> {
    let v = ci_twisted_cohomology(z, d)?;
    v.get(0).ok_or(Error::IndeterminateChase {
        what,
        lower: v.lower().to_vec(),
        upper: v.upper().to_vec(),
    })
}

/// `h^0(Z, N_{Z/F}) = sum_i h^0(Z, O(N_i)|_Z)`.
pub fn normal_bundle_sections(z: &CompleteIntersection) -> Result<u64> {
    z.hypersurfaces()
        .iter()
        .enumerate()
        .map(|(i, n)| exact_h0(z, n, format!("h^0(Z, N_{})", i + 1)))
        .sum()
}

/// `h^0(Z, O(D_rho)|_Z)` for one ray.
pub fn ray_sections(z: &CompleteIntersection, ray: usize) -> Result<u64> {
    let d = TorusDivisor::prime(z.fan().num_rays(), ray);
    exact_h0(z, &d, format!("h^0(Z, D_{ray})"))
}

/// `h^i(Z, O_Z)`.
pub fn structure_sheaf_profile(z: &CompleteIntersection) -> Result<CohomologyVector> {
    ci_twisted_cohomology(z, &TorusDivisor::zero(z.fan().num_rays()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_entry, projective_space};

    fn p4_ci(degrees: &[i64]) -> CompleteIntersection {
        let f = projective_space(4);
        let hs = degrees
            .iter()
            .map(|&d| TorusDivisor::prime(5, 0).scale(d))
            .collect();
        CompleteIntersection::new(f, hs, true).unwrap()
    }

    fn o(k: i64, rays: usize) -> TorusDivisor {
        TorusDivisor::prime(rays, 0).scale(k)
    }

    #[test]
    fn quintic_twists() {
        let z = p4_ci(&[5]);
        assert_eq!(
            ci_twisted_cohomology(&z, &o(1, 5)).unwrap().dims().unwrap(),
            &[5, 0, 0, 0]
        );
        assert_eq!(
            ci_twisted_cohomology(&z, &o(5, 5)).unwrap().get(0),
            Some(125)
        );
        assert_eq!(
            structure_sheaf_profile(&z).unwrap().dims().unwrap(),
            &[1, 0, 0, 1]
        );
        assert_eq!(normal_bundle_sections(&z).unwrap(), 125);
    }

    #[test]
    fn quintic_negative_twist() {
        // 0 -> O(-6) -> O(-1) -> O_Z(-1) -> 0; only h^4(O(-6)) = 5 survives, landing in h^3
        let z = p4_ci(&[5]);
        assert_eq!(
            ci_twisted_cohomology(&z, &o(-1, 5))
                .unwrap()
                .dims()
                .unwrap(),
            &[0, 0, 0, 5]
        );
    }

    #[test]
    fn k3_profile() {
        let z = p4_ci(&[2, 3]);
        assert_eq!(
            structure_sheaf_profile(&z).unwrap().dims().unwrap(),
            &[1, 0, 1]
        );
    }

    #[test]
    fn x33_normal_sections() {
        assert_eq!(
            normal_bundle_sections(&catalog_entry("X33").unwrap()).unwrap(),
            108
        );
    }

    #[test]
    fn x6_normal_sections() {
        assert_eq!(
            normal_bundle_sections(&catalog_entry("X6").unwrap()).unwrap(),
            129
        );
    }

    #[test]
    fn ambiguous_page_gives_interval() {
        // two entries one degree apart with a possible differential
        let page = KoszulPage {
            entries: vec![vec![3, 0, 0], vec![0, 0, 0], vec![0, 0, 0]],
        };
        assert_eq!(page.chase(0).unwrap(), CohomologyVector::exact(vec![3]));
        let page = KoszulPage {
            entries: vec![vec![0, 2, 0, 0], vec![0, 0, 3, 0]],
        };
        // degree 1 holds 2 (p=0) and 1 holds 3 (p=1, q=2): same degree, no differential
        let v = page.chase(2).unwrap();
        assert_eq!(v.dims().unwrap(), &[0, 5, 0]);
        let page = KoszulPage {
            entries: vec![vec![0, 0, 2, 0], vec![0, 0, 3, 0]],
        };
        // degree 1 (p=1) can hit degree 2 (p=0)
        let v = page.chase(2).unwrap();
        assert!(!v.is_exact());
        assert_eq!(v.lower(), &[0, 1, 0]);
        assert_eq!(v.upper(), &[0, 3, 2]);
    }

    #[test]
    fn bad_inputs() {
        let f = projective_space(2);
        assert!(CompleteIntersection::new(f.clone(), vec![], true).is_err());
        assert!(
            CompleteIntersection::new(f.clone(), vec![TorusDivisor(vec![1, 0])], true).is_err()
        );
        let h = TorusDivisor(vec![1, 0, 0]);
        assert!(CompleteIntersection::new(f, vec![h.clone(), h], true).is_err());
    }
}
