//! Exact toric geometry for Calabi-Yau complete intersections in complete
//! simplicial toric varieties: line bundle cohomology, Koszul restriction,
//! intersection numbers, a smoothness certificate for the forgetful morphism
//! from embedded to abstract deformations, and Hodge numbers.
//!
//! All arithmetic is exact.

pub mod catalog;
pub mod chow;
pub mod cohomology;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod io;
pub mod koszul;
pub mod lattice;
pub mod pipeline;

pub use catalog::{
    catalog, catalog_entry, product_of_projective_lines, projective_space, weighted_projective,
};
pub use chow::{
    chern_numbers_ci, euler_characteristic_ci, intersection_number, monomial_intersection,
    ChernNumbers, ChowRing, GradedClass,
};
pub use cohomology::{cohomology_dims, cohomology_dims_with, CohomologyVector, Method};
pub use divisor::{
    cartier_data, class_group, divisor_class, is_ample, is_fano, is_nef, polytope_of,
    DivisorClassGroup, TorusDivisor,
};
pub use error::{Error, Result};
pub use fan::{validate_fan, Cone, Fan, FanWarning};
pub use koszul::{
    ci_twisted_cohomology, normal_bundle_sections, structure_sheaf_profile, CompleteIntersection,
    KoszulPage,
};
pub use pipeline::{
    h11, h_middle, hodge_diamond, hodge_report, smoothness_certificate,
    smoothness_certificate_with, validate_cy, CertPath, CertificateOptions, HodgeDiamond,
    SmoothnessCertificate, Verdict,
};
