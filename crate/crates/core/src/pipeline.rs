//! Calabi-Yau validation, the per-ray smoothness certificate for the
//! forgetful morphism, and Hodge diamond assembly.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::chow::{chern_numbers_ci, rational_string, to_integer, ChowRing};
use crate::cohomology::CohomologyVector;
use crate::divisor::{class_group, is_ample, is_fano, is_nef, TorusDivisor};
use crate::error::{Error, Result};
use crate::koszul::{
    ci_twisted_cohomology, normal_bundle_sections, ray_sections, structure_sheaf_profile,
    CompleteIntersection,
};

/// Things the results rely on but that are not computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// Ample hypersurface classes are taken to be very ample.
    VeryAmpleness,
    /// A generic member is smooth and avoids the ambient singular locus.
    GenericSmoothness,
    /// The ambient is only simplicial; Chern numbers live in the rational Chow ring.
    QRingProvenance,
}

impl Assumption {
    pub fn describe(self) -> &'static str {
        match self {
            Assumption::VeryAmpleness => "ample hypersurface classes are assumed very ample",
            Assumption::GenericSmoothness => {
                "the generic complete intersection is assumed smooth and inside the smooth locus"
            }
            Assumption::QRingProvenance => {
                "ambient is singular; characteristic numbers are computed in the rational Chow ring"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// `m >= 3`, flagged separately from the other checks.
    pub dimension_ok: bool,
    pub dim: usize,
    pub structure_sheaf: Option<CohomologyVector>,
    pub assumptions: Vec<Assumption>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Named rejection for the Hodge and smoothness pipeline, if any.
    pub fn rejection(&self) -> Option<String> {
        if let Some(c) = self.first_failure() {
            return Some(format!("{}: {}", c.name, c.detail));
        }
        if self.dimension_ok {
            return None;
        }
        let h2 = self
            .structure_sheaf
            .as_ref()
            .filter(|v| v.len() > 2)
            .and_then(|v| v.get(2));
        Some(match h2 {
            Some(h2) => format!("dimension: m = {} < 3, h^2(O_Z) = {h2}", self.dim),
            None => format!("dimension: m = {} < 3", self.dim),
        })
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn validate_cy(z: &CompleteIntersection) -> Result<ValidationReport> {
    let fan = z.fan();
    let mut checks = Vec::new();
    let mut assumptions = Vec::new();

    let complete = fan.is_complete();
    checks.push(check(
        "fan",
        complete,
        if complete {
            "valid, simplicial and complete"
        } else {
            "fan is not complete"
        },
    ));
    if !complete {
        return Ok(ValidationReport {
            checks,
            dimension_ok: z.dim() >= 3,
            dim: z.dim(),
            structure_sheaf: None,
            assumptions,
        });
    }

    let fano = is_fano(fan)?;
    checks.push(check(
        "fano",
        fano,
        if fano {
            "anticanonical class is ample"
        } else {
            "anticanonical class is not ample"
        },
    ));

    let mut not_ample = Vec::new();
    for (i, h) in z.hypersurfaces().iter().enumerate() {
        if !is_ample(fan, h)? {
            not_ample.push(i + 1);
        }
    }
    checks.push(check(
        "ample_hypersurfaces",
        not_ample.is_empty(),
        if not_ample.is_empty() {
            "every hypersurface class is ample".to_string()
        } else {
            format!("hypersurfaces {not_ample:?} are not ample")
        },
    ));
    if not_ample.is_empty() {
        assumptions.push(Assumption::VeryAmpleness);
    }

    let adjunction = z.adjunction_holds();
    let group = class_group(fan);
    let total = z
        .hypersurfaces()
        .iter()
        .fold(TorusDivisor::zero(fan.num_rays()), |acc, h| &acc + h);
    checks.push(check(
        "adjunction",
        adjunction,
        if adjunction {
            "hypersurface classes sum to the anticanonical class".to_string()
        } else {
            format!(
                "sum of hypersurfaces has class {:?}, anticanonical class is {:?}",
                group.class_of(&total),
                group.class_of(&TorusDivisor::anticanonical(fan))
            )
        },
    ));

    let m = z.dim();
    let profile = structure_sheaf_profile(z)?;
    let mut expected = vec![0; m + 1];
    expected[0] = 1;
    expected[m] = 1;
    let cy = profile.dims() == Some(expected.as_slice());
    checks.push(check("cy_profile", cy, format!("h^i(O_Z) = {profile}")));

    if z.assume_smooth() {
        assumptions.push(Assumption::GenericSmoothness);
    }
    if !fan.is_smooth() {
        assumptions.push(Assumption::QRingProvenance);
    }
    assumptions.sort();
    Ok(ValidationReport {
        checks,
        dimension_ok: m >= 3,
        dim: m,
        structure_sheaf: Some(profile),
        assumptions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertPath {
    /// `D_rho` nef with `D_rho^m . Z > 0`.
    NefAndBig,
    /// `D_rho` nef and `Z` cut out by ample (assumed very ample) classes.
    CompleteIntersectionNef,
    /// `h^1(Z, O(D_rho)|_Z) = 0` read off the Koszul chase.
    DirectKoszulVanishing,
}

impl CertPath {
    pub const ALL: [CertPath; 3] = [
        CertPath::NefAndBig,
        CertPath::CompleteIntersectionNef,
        CertPath::DirectKoszulVanishing,
    ];
}

impl fmt::Display for CertPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertPath::NefAndBig => "nef-and-big",
            CertPath::CompleteIntersectionNef => "complete-intersection-nef",
            CertPath::DirectKoszulVanishing => "direct-koszul-vanishing",
        })
    }
}

impl std::str::FromStr for CertPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CertPath::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown certificate path `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathAttempt {
    pub path: CertPath,
    pub success: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayRecord {
    pub ray: usize,
    /// First successful path in the order tried.
    pub path: Option<CertPath>,
    pub attempts: Vec<PathAttempt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Smooth,
    NotCertified,
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Smooth => "smooth",
            Verdict::NotCertified => "not-certified",
            Verdict::Rejected => "rejected",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CertificateOptions {
    /// Record every successful path, not just the first.
    pub all_paths: bool,
    /// Try only this path.
    pub only: Option<CertPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub dim: usize,
    pub dimension_ok: bool,
    pub per_ray: Vec<RayRecord>,
    pub assumptions: Vec<Assumption>,
}

impl SmoothnessCertificate {
    pub fn failing_rays(&self) -> Vec<usize> {
        self.per_ray
            .iter()
            .filter(|r| r.path.is_none())
            .map(|r| r.ray)
            .collect()
    }
}

pub fn smoothness_certificate(z: &CompleteIntersection) -> Result<SmoothnessCertificate> {
    smoothness_certificate_with(z, CertificateOptions::default())
}

pub fn smoothness_certificate_with(
    z: &CompleteIntersection,
    opts: CertificateOptions,
) -> Result<SmoothnessCertificate> {
    let report = validate_cy(z)?;
    certificate_from_report(z, &report, opts)
}

fn certificate_from_report(
    z: &CompleteIntersection,
    report: &ValidationReport,
    opts: CertificateOptions,
) -> Result<SmoothnessCertificate> {
    let mut cert = SmoothnessCertificate {
        verdict: Verdict::Rejected,
        reason: None,
        dim: z.dim(),
        dimension_ok: report.dimension_ok,
        per_ray: Vec::new(),
        assumptions: report.assumptions.clone(),
    };
    if let Some(reason) = report.rejection() {
        cert.reason = Some(reason);
        return Ok(cert);
    }
    let fan = z.fan();
    let m = z.dim() as u32;
    let ring = ChowRing::new(fan)?;
    let fundamental = z
        .hypersurfaces()
        .iter()
        .fold(ring.one(), |acc, h| ring.mul(&acc, &ring.linear(h)));
    let all_ample = report
        .check("ample_hypersurfaces")
        .is_some_and(|c| c.passed);
    let paths: Vec<CertPath> = match opts.only {
        Some(p) => vec![p],
        None => CertPath::ALL.to_vec(),
    };
    for ray in 0..fan.num_rays() {
        let d = TorusDivisor::prime(fan.num_rays(), ray);
        let nef = is_nef(fan, &d)?;
        let mut record = RayRecord {
            ray,
            path: None,
            attempts: Vec::new(),
        };
        for &path in &paths {
            let attempt = match path {
                CertPath::NefAndBig => {
                    let vol = ring.degree(&ring.mul(&ring.pow(&ring.linear(&d), m), &fundamental));
                    PathAttempt {
                        path,
                        success: nef && vol.is_positive(),
                        evidence: format!("nef = {nef}, D^{m}.Z = {}", rational_string(&vol)),
                    }
                }
                CertPath::CompleteIntersectionNef => PathAttempt {
                    path,
                    success: nef && all_ample,
                    evidence: format!("nef = {nef}, hypersurfaces ample = {all_ample}"),
                },
                CertPath::DirectKoszulVanishing => {
                    let v = ci_twisted_cohomology(z, &d)?;
                    PathAttempt {
                        path,
                        success: v.get(1) == Some(0),
                        evidence: format!("h^i(Z, D|Z) = {v}"),
                    }
                }
            };
            let success = attempt.success;
            record.attempts.push(attempt);
            if success {
                record.path.get_or_insert(path);
                if !opts.all_paths {
                    break;
                }
            }
        }
        cert.per_ray.push(record);
    }
    let failing = cert.failing_rays();
    if !failing.is_empty() {
        cert.verdict = Verdict::NotCertified;
        cert.reason = Some(format!("no certificate path for rays {failing:?}"));
    } else if !z.assume_smooth() {
        cert.verdict = Verdict::NotCertified;
        cert.reason = Some("smoothness of the generic member was not asserted".into());
    } else {
        cert.verdict = Verdict::Smooth;
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H11 {
    pub value: u64,
    /// Every `D_rho` nef and every `N_i` ample.
    pub certified: bool,
}

pub fn h11(z: &CompleteIntersection) -> Result<H11> {
    let fan = z.fan();
    let t = class_group(fan).rank() as u64;
    let mut certified = true;
    for ray in 0..fan.num_rays() {
        certified &= is_nef(fan, &TorusDivisor::prime(fan.num_rays(), ray))?;
    }
    for h in z.hypersurfaces() {
        certified &= is_ample(fan, h)?;
    }
    Ok(H11 {
        value: t,
        certified,
    })
}

/// Pieces of `h^{m-1,1} = h^0(N) - sum_rho h^0(D_rho|Z) + t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleTerms {
    pub normal_sections: u64,
    pub ray_sections: Vec<u64>,
    pub t: u64,
    pub value: u64,
}

fn middle_terms(z: &CompleteIntersection) -> Result<MiddleTerms> {
    let normal = normal_bundle_sections(z)?;
    let rays = (0..z.fan().num_rays())
        .map(|r| ray_sections(z, r))
        .collect::<Result<Vec<_>>>()?;
    let t = class_group(z.fan()).rank() as u64;
    let value = normal as i64 - rays.iter().sum::<u64>() as i64 + t as i64;
    if value < 0 {
        return Err(Error::CrossCheckFailed(format!(
            "h^(m-1,1) formula gave {value}"
        )));
    }
    Ok(MiddleTerms {
        normal_sections: normal,
        ray_sections: rays,
        t,
        value: value as u64,
    })
}

/// `h^{m-1,1}`; only defined under a smooth certificate.
pub fn h_middle(z: &CompleteIntersection) -> Result<u64> {
    let cert = smoothness_certificate(z)?;
    require_smooth(&cert)?;
    Ok(middle_terms(z)?.value)
}

fn require_smooth(cert: &SmoothnessCertificate) -> Result<()> {
    match cert.verdict {
        Verdict::Smooth => Ok(()),
        Verdict::Rejected => Err(Error::Rejected(cert.reason.clone().unwrap_or_default())),
        Verdict::NotCertified => Err(Error::NotCertified(cert.reason.clone().unwrap_or_default())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossChecks {
    /// `c_m(Z) . [Z]` from the intersection ring.
    pub euler_oracle: i64,
    /// Alternating sum of the diamond.
    pub euler_from_hodge: i64,
    /// `3 c_2^2 . Z + 14 c_4 . Z` for fourfolds.
    pub signature_numerator: Option<i64>,
    pub c2_squared: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    pub m: usize,
    /// `h[p][q] = h^{p,q}`.
    pub h: Vec<Vec<u64>>,
    pub cross_checks: CrossChecks,
}

impl HodgeDiamond {
    fn new(m: usize, h: Vec<Vec<u64>>, cross_checks: CrossChecks) -> Self {
        for p in 0..=m {
            for q in 0..=m {
                assert_eq!(h[p][q], h[q][p], "Hodge symmetry");
                assert_eq!(h[p][q], h[m - p][m - q], "Serre symmetry");
            }
        }
        assert_eq!((h[0][0], h[m][0]), (1, 1));
        assert!((1..m).all(|p| h[p][0] == 0));
        Self { m, h, cross_checks }
    }

    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.h[p][q]
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut e = 0;
        for p in 0..=self.m {
            for q in 0..=self.m {
                let s = if (p + q) % 2 == 0 { 1 } else { -1 };
                e += s * self.h[p][q] as i64;
            }
        }
        e
    }
}

/// Everything the `hodge` command reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeReport {
    pub certificate: SmoothnessCertificate,
    pub h11: H11,
    pub middle: MiddleTerms,
    pub diamond: HodgeDiamond,
}

pub fn hodge_diamond(z: &CompleteIntersection) -> Result<HodgeDiamond> {
    hodge_report(z, CertificateOptions::default()).map(|r| r.diamond)
}

pub fn hodge_report(z: &CompleteIntersection, opts: CertificateOptions) -> Result<HodgeReport> {
    let m = z.dim();
    let report = validate_cy(z)?;
    let cert = certificate_from_report(z, &report, opts)?;
    require_smooth(&cert)?;
    if !(3..=4).contains(&m) {
        return Err(Error::Unsupported(format!(
            "Hodge diamonds are assembled for m = 3 or 4, got {m}"
        )));
    }
    let h11 = h11(z)?;
    if !h11.certified {
        return Err(Error::NotCertified(
            "h^(1,1) = t needs every ray divisor nef and every hypersurface ample".into(),
        ));
    }
    let middle = middle_terms(z)?;
    let chern = chern_numbers_ci(z)?;
    let euler =
        to_integer(&chern.top).ok_or_else(|| Error::NonIntegerEuler(chern.top.to_string()))?;
    let t = h11.value;
    let mut h = vec![vec![0u64; m + 1]; m + 1];
    h[0][0] = 1;
    h[m][m] = 1;
    h[m][0] = 1;
    h[0][m] = 1;
    h[1][1] = t;
    h[m - 1][m - 1] = t;
    let mut checks = CrossChecks {
        euler_oracle: euler,
        euler_from_hodge: 0,
        signature_numerator: None,
        c2_squared: None,
    };
    if m == 3 {
        h[2][1] = middle.value;
        h[1][2] = middle.value;
    } else {
        let c = middle.value;
        h[3][1] = c;
        h[1][3] = c;
        let c2sq = chern
            .c2_squared
            .as_ref()
            .and_then(to_integer)
            .ok_or_else(|| Error::NonIntegerSignatureTerm(format!("{:?}", chern.c2_squared)))?;
        let numerator = 3 * c2sq + 14 * euler;
        checks.c2_squared = Some(c2sq);
        checks.signature_numerator = Some(numerator);
        if numerator % 45 != 0 {
            return Err(Error::NonIntegerSignatureTerm(format!(
                "3 c_2^2 + 14 c_4 = {numerator} is not divisible by 45"
            )));
        }
        // signature = sum (-1)^q h^{p,q} = 4 - 2t - 2c + d; reduces to 2c - 2 + ... at t = 1
        let d = 2 * c as i64 + 2 * t as i64 - 4 + numerator / 45;
        if d < 0 {
            return Err(Error::CrossCheckFailed(format!(
                "h^(2,2) = {d} is negative"
            )));
        }
        h[2][2] = d as u64;
    }
    let mut diamond = HodgeDiamond::new(m, h, checks);
    let from_hodge = diamond.euler_characteristic();
    diamond.cross_checks.euler_from_hodge = from_hodge;
    if from_hodge != euler {
        return Err(Error::CrossCheckFailed(format!(
            "Euler characteristic {from_hodge} from the diamond, {euler} from Chern classes"
        )));
    }
    Ok(HodgeReport {
        certificate: cert,
        h11,
        middle,
        diamond,
    })
}
