mod common;

use common::extra_fourfolds;
use toric_cy::catalog::{catalog, catalog_entry};
use toric_cy::{
    euler_characteristic_ci, h11, hodge_diamond, hodge_report, smoothness_certificate_with,
    validate_cy, CertPath, CertificateOptions, Error, Verdict,
};

#[test]
fn catalog_validates() {
    for e in catalog() {
        let z = e.build().unwrap();
        let r = validate_cy(&z).unwrap();
        assert!(r.passed(), "{}: {:?}", e.name, r.first_failure());
        assert!(r.dimension_ok);
    }
}

#[test]
fn product_of_lines_threefold() {
    let z = catalog_entry("ci2222").unwrap();
    assert_eq!(z.dim(), 3);
    assert_eq!(euler_characteristic_ci(&z).unwrap(), -128);
    assert_eq!(h11(&z).unwrap().value, 4);
    let d = hodge_diamond(&z).unwrap();
    assert_eq!((d.get(1, 1), d.get(2, 1)), (4, 68));
}

#[test]
fn extra_fourfolds_satisfy_both_identities() {
    // (2,2,2,2,2) in (P^1)^5: c = 242 - 20 + 5, d = 44 + 4t + 4c
    let expected = [None, None, Some((5, 227, 972))];
    for ((name, z), want) in extra_fourfolds().into_iter().zip(expected) {
        let d = hodge_diamond(&z).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(d.get(2, 1), 0);
        let sum = 4 + 2 * d.get(1, 1) as i64 + 2 * d.get(1, 3) as i64 + d.get(2, 2) as i64;
        assert_eq!(sum, d.cross_checks.euler_oracle, "{name}");
        // independent relation for Calabi-Yau fourfolds
        assert_eq!(
            d.get(2, 2),
            44 + 4 * d.get(1, 1) - 2 * d.get(2, 1) + 4 * d.get(1, 3),
            "{name}"
        );
        if let Some(w) = want {
            assert_eq!((d.get(1, 1), d.get(1, 3), d.get(2, 2)), w, "{name}");
        }
    }
}

#[test]
fn certificate_monotone_in_paths() {
    for e in catalog() {
        let z = e.build().unwrap();
        let default = smoothness_certificate_with(&z, CertificateOptions::default()).unwrap();
        let all = smoothness_certificate_with(
            &z,
            CertificateOptions {
                all_paths: true,
                only: None,
            },
        )
        .unwrap();
        assert_eq!(default.verdict, Verdict::Smooth, "{}", e.name);
        assert_eq!(all.verdict, default.verdict);
        for (a, b) in default.per_ray.iter().zip(&all.per_ray) {
            assert_eq!(a.path, b.path);
            assert!(b.attempts.len() >= a.attempts.len());
        }
        // the direct path never overturns a smooth verdict
        let direct = smoothness_certificate_with(
            &z,
            CertificateOptions {
                all_paths: false,
                only: Some(CertPath::DirectKoszulVanishing),
            },
        )
        .unwrap();
        assert_eq!(direct.verdict, Verdict::Smooth, "{}", e.name);
    }
}

#[test]
fn product_rays_are_nef_but_not_big() {
    let z = catalog_entry("ci2222").unwrap();
    let only_big = smoothness_certificate_with(
        &z,
        CertificateOptions {
            all_paths: false,
            only: Some(CertPath::NefAndBig),
        },
    )
    .unwrap();
    assert_eq!(only_big.verdict, Verdict::NotCertified);
    assert_eq!(only_big.failing_rays().len(), 8);
    let default = smoothness_certificate_with(&z, CertificateOptions::default()).unwrap();
    for r in &default.per_ray {
        assert_eq!(r.path, Some(CertPath::CompleteIntersectionNef));
        assert!(r.attempts[0].evidence.contains("D^3.Z = 0/1"));
    }
}

#[test]
fn singular_ambient_logs_q_ring_note() {
    use toric_cy::pipeline::Assumption;
    let r = hodge_report(&catalog_entry("X6").unwrap(), CertificateOptions::default()).unwrap();
    assert!(r
        .certificate
        .assumptions
        .contains(&Assumption::QRingProvenance));
    let r = hodge_report(&catalog_entry("X5").unwrap(), CertificateOptions::default()).unwrap();
    assert!(!r
        .certificate
        .assumptions
        .contains(&Assumption::QRingProvenance));
}

#[test]
fn uncertified_hodge_is_refused() {
    let z = catalog_entry("X5").unwrap();
    let z = toric_cy::CompleteIntersection::new(z.fan().clone(), z.hypersurfaces().to_vec(), false)
        .unwrap();
    assert!(matches!(hodge_diamond(&z), Err(Error::NotCertified(_))));
}
