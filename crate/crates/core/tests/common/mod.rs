#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use toric_cy::catalog::{product_of_projective_lines, projective_space, weighted_projective};
use toric_cy::lattice::{
    count_lattice_points, hermite_normal_form, invariant_factors, smith_normal_form,
    solve_rational, IntMatrix,
};
use toric_cy::{
    class_group, cohomology_dims, cohomology_dims_with, divisor_class, intersection_number,
    is_ample, is_nef, polytope_of, CohomologyVector, CompleteIntersection, Fan, Method,
    TorusDivisor,
};

pub type Check = Result<(), TestCaseError>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($msg)*)));
        }
    };
}

pub fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn mat(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows, rows[0].len()).unwrap()
}

fn is_unimodular(u: &IntMatrix) -> bool {
    u.det().unwrap().abs().is_one()
}

pub fn snf_and_hnf(rows: &[Vec<i64>]) -> Check {
    let a = mat(rows);
    let (d, u, v) = smith_normal_form(&a);
    ensure!(
        u.mul(&a).unwrap().mul(&v).unwrap() == d,
        "U A V != D for {rows:?}"
    );
    ensure!(
        is_unimodular(&u) && is_unimodular(&v),
        "U or V not unimodular"
    );
    let mut prev: Option<BigInt> = None;
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j {
                ensure!(d[(i, j)].is_zero(), "off-diagonal entry in D");
            }
        }
        if i < d.cols() {
            let x = &d[(i, i)];
            ensure!(!x.is_negative(), "negative invariant factor");
            if let Some(p) = &prev {
                if p.is_zero() {
                    ensure!(x.is_zero(), "nonzero after zero on the diagonal");
                } else {
                    ensure!(
                        (x % p).is_zero(),
                        "divisibility chain broken: {p} does not divide {x}"
                    );
                }
            }
            prev = Some(x.clone());
        }
    }
    let (h, u) = hermite_normal_form(&a);
    ensure!(u.mul(&a).unwrap() == h, "U A != H");
    ensure!(is_unimodular(&u), "HNF transform not unimodular");
    // echelon with positive pivots, entries above a pivot reduced
    let mut last_pivot: Option<usize> = None;
    for i in 0..h.rows() {
        match (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
            None => {
                ensure!(
                    (i..h.rows()).all(|k| (0..h.cols()).all(|j| h[(k, j)].is_zero())),
                    "zero row above a nonzero row"
                );
                break;
            }
            Some(j) => {
                ensure!(last_pivot.is_none_or(|p| j > p), "pivots not increasing");
                let p = &h[(i, j)];
                ensure!(p.is_positive(), "non-positive pivot");
                for k in 0..i {
                    let x = &h[(k, j)];
                    ensure!(!x.is_negative() && x < p, "entry above pivot not reduced");
                }
                last_pivot = Some(j);
            }
        }
    }
    Ok(())
}

pub fn row_shuffle_invariance(rows: &[Vec<i64>], seed: u64) -> Check {
    let mut shuffled = rows.to_vec();
    let mut s = seed;
    for i in (1..shuffled.len()).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        shuffled.swap(i, j);
    }
    for r in shuffled.iter_mut().step_by(2) {
        r.iter_mut().for_each(|x| *x = -*x);
    }
    ensure!(
        invariant_factors(&mat(rows)) == invariant_factors(&mat(&shuffled)),
        "invariant factors changed under row shuffle"
    );
    Ok(())
}

pub fn solve_back_substitution(rows: &[Vec<i64>], x: &[i64]) -> Check {
    let a = mat(rows);
    let xb: Vec<BigInt> = x.iter().take(a.cols()).map(|&v| v.into()).collect();
    if xb.len() < a.cols() {
        return Ok(());
    }
    let b = a.mul_vec(&xb).unwrap();
    let sol = solve_rational(&a, &b).unwrap().expect("consistent system");
    for (i, row) in (0..a.rows()).map(|i| (i, a.row(i))) {
        let lhs: num_rational::BigRational = row
            .iter()
            .zip(&sol.x)
            .map(|(c, v)| v * num_rational::BigRational::from_integer(c.clone()))
            .sum();
        ensure!(
            lhs == num_rational::BigRational::from_integer(b[i].clone()),
            "A x != b"
        );
    }
    Ok(())
}

/// Ehrhart oracle for the standard `n`-simplex: `C(n + k, n)`.
pub fn ehrhart_simplex(n: usize, k: i64) -> Check {
    let f = projective_space(n);
    let d = TorusDivisor::prime(n + 1, n).scale(k);
    let got = count_lattice_points(&polytope_of(&f, &d).unwrap()).unwrap();
    let expected = (1..=n as u64).fold(1u64, |acc, i| acc * (k as u64 + i) / i);
    // brute force over the box [0, k]^n
    let mut brute = 0u64;
    let mut p = vec![0i64; n];
    loop {
        if p.iter().sum::<i64>() <= k {
            brute += 1;
        }
        let mut i = 0;
        while i < n {
            p[i] += 1;
            if p[i] <= k {
                break;
            }
            p[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    ensure!(
        got == expected && got == brute,
        "n={n} k={k}: {got} vs {expected} vs {brute}"
    );
    Ok(())
}

pub fn test_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("P2", projective_space(2)),
        ("P1xP1", product_of_projective_lines(2)),
        ("P112", weighted_projective(&[1, 1, 2]).unwrap()),
        ("F1", hirzebruch(1)),
        ("P3", projective_space(3)),
    ]
}

pub fn hirzebruch(a: i64) -> Fan {
    Fan::new(
        vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .unwrap()
}

fn dims(fan: &Fan, d: &TorusDivisor, method: Method) -> Vec<u64> {
    cohomology_dims_with(fan, d, method)
        .unwrap()
        .0
        .dims()
        .unwrap()
        .to_vec()
}

pub fn serre_duality(fan: &Fan, coeffs: &[i64]) -> Check {
    let d = TorusDivisor(coeffs.to_vec());
    let k = -&TorusDivisor::anticanonical(fan);
    let a = dims(fan, &d, Method::Chamber);
    let b = dims(fan, &(&k - &d), Method::Chamber);
    let n = fan.dim();
    for i in 0..=n {
        ensure!(
            a[i] == b[n - i],
            "Serre duality fails for {coeffs:?}: {a:?} vs {b:?}"
        );
    }
    Ok(())
}

pub fn shift_invariance(fan: &Fan, coeffs: &[i64], m: &[i64]) -> Check {
    let d = TorusDivisor(coeffs.to_vec());
    let shifted = &d + &TorusDivisor::principal(fan, m);
    let a = cohomology_dims(fan, &d).unwrap();
    let b = cohomology_dims(fan, &shifted).unwrap();
    ensure!(
        a == b,
        "cohomology changed under shift by {m:?}: {a} vs {b}"
    );
    ensure!(
        a.euler_characteristic() == b.euler_characteristic(),
        "Euler characteristic changed"
    );
    let g = class_group(fan);
    ensure!(
        divisor_class(&g, &d) == divisor_class(&g, &shifted),
        "class changed"
    );
    // intersection numbers with the shifted factor in first position
    let n = fan.dim();
    let mut factors = vec![TorusDivisor::anticanonical(fan); n];
    factors[0] = d.clone();
    let x = intersection_number(fan, &factors).unwrap();
    factors[0] = shifted;
    let y = intersection_number(fan, &factors).unwrap();
    ensure!(x == y, "intersection number changed under shift");
    Ok(())
}

pub fn demazure_agreement(fan: &Fan, coeffs: &[i64]) -> Check {
    let d = TorusDivisor(coeffs.to_vec());
    if !is_nef(fan, &d).unwrap() {
        return Err(TestCaseError::reject("not nef"));
    }
    let chamber = dims(fan, &d, Method::Chamber);
    let fast = dims(fan, &d, Method::NefFastpath);
    ensure!(
        chamber == fast,
        "{coeffs:?}: chamber {chamber:?} vs fast path {fast:?}"
    );
    ensure!(
        chamber[1..].iter().all(|&h| h == 0),
        "higher cohomology of a nef divisor"
    );
    if is_ample(fan, &d).unwrap() {
        ensure!(chamber[0] > 0, "ample divisor without sections");
    }
    // monotone in dilation
    let counts: Vec<u64> = (0..3)
        .map(|k| count_lattice_points(&polytope_of(fan, &d.scale(k)).unwrap()).unwrap())
        .collect();
    ensure!(
        counts.windows(2).all(|w| w[0] <= w[1]),
        "non-monotone dilates {counts:?}"
    );
    Ok(())
}

/// A nef divisor from nonnegative multiples of nef generators plus a shift.
pub fn nef_divisor(fan_index: usize, a: i64, b: i64, m: &[i64]) -> (Fan, Vec<i64>) {
    let fans = test_fans();
    let fan = fans[fan_index].1.clone();
    let r = fan.num_rays();
    let base = match fans[fan_index].0 {
        "P2" | "P3" | "P112" => TorusDivisor::prime(r, 0).scale(a + b),
        "P1xP1" => TorusDivisor(vec![a, 0, b, 0]),
        // F1: fibre D_0 and the positive section D_3
        _ => TorusDivisor(vec![a, 0, 0, b]),
    };
    let shift = TorusDivisor::principal(&fan, &m[..fan.dim()]);
    (fan.clone(), (&base + &shift).0)
}

pub fn koszul_permutation(z: &CompleteIntersection) -> Check {
    let n = z.codim();
    let reversed: Vec<usize> = (0..n).rev().collect();
    let other = z.permuted(&reversed).unwrap();
    let mut twists = vec![TorusDivisor::zero(z.fan().num_rays())];
    twists.extend((0..z.fan().num_rays()).map(|r| TorusDivisor::prime(z.fan().num_rays(), r)));
    twists.extend(z.hypersurfaces().iter().cloned());
    for d in &twists {
        let a: CohomologyVector = toric_cy::ci_twisted_cohomology(z, d).unwrap();
        let b = toric_cy::ci_twisted_cohomology(&other, d).unwrap();
        ensure!(a == b, "order dependence for {:?}: {a} vs {b}", d.0);
    }
    Ok(())
}

/// Extra fourfolds beyond the catalog.
pub fn extra_fourfolds() -> Vec<(&'static str, CompleteIntersection)> {
    let p6 = projective_space(6);
    let h6 = |d: i64| TorusDivisor::prime(7, 0).scale(d);
    let p1_5 = product_of_projective_lines(5);
    let mut bi = vec![0; 10];
    for i in 0..5 {
        bi[2 * i] = 2;
    }
    vec![
        (
            "X25 in P6",
            CompleteIntersection::new(p6.clone(), vec![h6(2), h6(5)], true).unwrap(),
        ),
        (
            "X34 in P6",
            CompleteIntersection::new(p6, vec![h6(3), h6(4)], true).unwrap(),
        ),
        (
            "(2,2,2,2,2) in (P1)^5",
            CompleteIntersection::new(p1_5, vec![TorusDivisor(bi)], true).unwrap(),
        ),
    ]
}
