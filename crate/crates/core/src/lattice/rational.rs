//! Exact rational linear algebra: Gaussian elimination and a small
//! two-phase simplex solver with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A solution of `A x = b`; `unique` is false when the solution space is
/// positive-dimensional (free variables were set to zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSolution {
    pub x: Vec<Rational>,
    pub unique: bool,
}

/// Solves `A x = b` exactly. Returns `Ok(None)` when the system is inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Result<Option<RationalSolution>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let rows: Vec<Vec<Rational>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .cloned()
                .map(Rational::from_integer)
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = b.iter().cloned().map(Rational::from_integer).collect();
    Ok(solve_rational_q(rows, rhs, a.cols()))
}

/// Rational-coefficient variant of [`solve_rational`].
pub fn solve_rational_q(
    mut rows: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
    cols: usize,
) -> Option<RationalSolution> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        rhs.swap(p, r);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..m {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                let t = &rows[r][j] * &f;
                rows[i][j] -= t;
            }
            let t = &rhs[r] * &f;
            rhs[i] -= t;
        }
        pivots.push(c);
        r += 1;
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i].clone();
    }
    Some(RationalSolution {
        unique: pivots.len() == cols,
        x,
    })
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse_q(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..2 * n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
    Infeasible,
}

/// Maximizes `c . x` subject to `A x <= b` with `x` free.
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // x = xp - xn; columns: xp (n), xn (n), slack (m), artificial (m)
    let nv = 2 * n + m;
    let width = nv + m;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = a[i][j].clone();
            row[n + j] = -a[i][j].clone();
        }
        row[2 * n + i] = Rational::one();
        let mut bi = b[i].clone();
        if bi.is_negative() {
            for v in row.iter_mut() {
                *v = -std::mem::take(v);
            }
            bi = -bi;
        }
        row[nv + i] = Rational::one();
        tab.push(row);
        rhs.push(bi);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    // phase 1: maximize -sum(artificial)
    let mut obj1 = vec![Rational::zero(); width];
    for v in obj1[nv..].iter_mut() {
        *v = -Rational::one();
    }
    if simplex(&mut tab, &mut rhs, &mut basis, &obj1, width).is_none() {
        unreachable!("phase one objective is bounded above by zero");
    }
    let infeasibility: Rational = basis
        .iter()
        .zip(&rhs)
        .filter(|(&j, _)| j >= nv)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive artificial variables out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= nv {
            match (0..nv).find(|&j| !tab[i][j].is_zero()) {
                Some(j) => pivot(&mut tab, &mut rhs, &mut basis, i, j),
                None => {
                    tab.remove(i);
                    rhs.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in tab.iter_mut() {
        row.truncate(nv);
    }

    let mut obj2 = vec![Rational::zero(); nv];
    for j in 0..n {
        obj2[j] = c[j].clone();
        obj2[n + j] = -c[j].clone();
    }
    match simplex(&mut tab, &mut rhs, &mut basis, &obj2, nv) {
        None => LpOutcome::Unbounded,
        Some(value) => {
            let mut full = vec![Rational::zero(); nv];
            for (i, &j) in basis.iter().enumerate() {
                full[j] = rhs[i].clone();
            }
            let x = (0..n).map(|j| &full[j] - &full[n + j]).collect();
            LpOutcome::Optimal { value, x }
        }
    }
}

fn pivot(tab: &mut [Vec<Rational>], rhs: &mut [Rational], basis: &mut [usize], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for v in tab[r].iter_mut() {
        *v *= &inv;
    }
    rhs[r] *= &inv;
    for i in 0..tab.len() {
        if i == r || tab[i][c].is_zero() {
            continue;
        }
        let f = tab[i][c].clone();
        for j in 0..tab[i].len() {
            if tab[r][j].is_zero() {
                continue;
            }
            let t = &tab[r][j] * &f;
            tab[i][j] -= t;
        }
        let t = &rhs[r] * &f;
        rhs[i] -= t;
    }
    basis[r] = c;
}

/// Primal simplex on a feasible tableau. Returns the optimum, or `None` if unbounded.
fn simplex(
    tab: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    obj: &[Rational],
    ncols: usize,
) -> Option<Rational> {
    loop {
        // reduced costs: obj_j - sum_i obj_{basis_i} * tab[i][j]
        let entering = (0..ncols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = obj[j].clone();
            for (i, &bj) in basis.iter().enumerate() {
                if !obj[bj].is_zero() && !tab[i][j].is_zero() {
                    rc -= &obj[bj] * &tab[i][j];
                }
            }
            rc.is_positive()
        });
        let Some(e) = entering else {
            let value = basis
                .iter()
                .enumerate()
                .map(|(i, &bj)| &obj[bj] * &rhs[i])
                .sum();
            return Some(value);
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..tab.len() {
            if !tab[i][e].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][e];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (l, _) = leave?;
        pivot(tab, rhs, basis, l, e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(2);
        let s = solve_rational(&id, &[BigInt::from(1), BigInt::from(2)])
            .unwrap()
            .unwrap();
        assert_eq!(s.x, vec![rat(1), rat(2)]);
        assert!(s.unique);

        let a = IntMatrix::from_rows(&[[2, 0], [0, 2]], 2).unwrap();
        let b = [BigInt::from(1), BigInt::from(1)];
        let s = solve_rational(&a, &b).unwrap().unwrap();
        assert_eq!(s.x, vec![q(1, 2), q(1, 2)]);
        // substitute back
        for i in 0..2 {
            let lhs: Rational = (0..2)
                .map(|j| Rational::from_integer(a[(i, j)].clone()) * &s.x[j])
                .sum();
            assert_eq!(lhs, Rational::from_integer(b[i].clone()));
        }

        let a = IntMatrix::from_rows(&[[1, 0], [1, 0]], 2).unwrap();
        assert!(solve_rational(&a, &[BigInt::from(0), BigInt::from(1)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn solve_flags_non_uniqueness() {
        let a = IntMatrix::from_rows(&[[1, 1]], 2).unwrap();
        let s = solve_rational(&a, &[BigInt::from(3)]).unwrap().unwrap();
        assert!(!s.unique);
        assert_eq!(&s.x[0] + &s.x[1], rat(3));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = IntMatrix::identity(2);
        assert!(matches!(
            solve_rational(&a, &[BigInt::from(1)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]];
        let inv = inverse_q(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(2)]]);
        assert!(inverse_q(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]).is_none());
    }

    #[test]
    fn lp_bounded_infeasible_unbounded() {
        // max x + y s.t. x <= 2, y <= 3, -x - y <= 10
        let a = vec![
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
            vec![rat(-1), rat(-1)],
        ];
        let b = vec![rat(2), rat(3), rat(10)];
        match maximize(&[rat(1), rat(1)], &a, &b) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(5)),
            other => panic!("{other:?}"),
        }
        // max -x: x >= -10 - y >= -13
        match maximize(&[rat(-1), rat(0)], &a, &b) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, rat(13));
                assert_eq!(x, vec![rat(-13), rat(3)]);
            }
            other => panic!("{other:?}"),
        }
        // x >= 1 and x <= 0
        let a = vec![vec![rat(-1)], vec![rat(1)]];
        assert_eq!(
            maximize(&[rat(1)], &a, &[rat(-1), rat(0)]),
            LpOutcome::Infeasible
        );
        // x >= 0 only
        assert_eq!(
            maximize(&[rat(1)], &[vec![rat(-1)]], &[rat(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn lp_fractional_optimum() {
        // max x s.t. 2x <= 1
        match maximize(&[rat(1)], &[vec![rat(2)]], &[rat(1)]) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(1, 2));
                assert_eq!(x, vec![q(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
