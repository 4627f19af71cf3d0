//! The Verma module of highest weight `v^s` over the small quantum group of
//! `sl_2` at a root of unity `v` of odd order, with its invariants under `E`
//! and under `F`.

use serde::Serialize;

use super::NicholsError;
use crate::exactnum::CycNum;
use crate::linalg::{Equation, Reducer};

type Mat = Vec<Vec<CycNum>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VermaReport {
    pub order: u32,
    pub s: u32,
    pub e_invariants: usize,
    pub f_invariants: usize,
    /// Relations that failed on the basis, by name.
    pub failed_relations: Vec<String>,
}

impl VermaReport {
    pub fn relations_hold(&self) -> bool {
        self.failed_relations.is_empty()
    }
}

fn zeros(n: usize) -> Mat {
    vec![vec![CycNum::zero(); n]; n]
}

fn identity(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = CycNum::one();
    }
    m
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn combine(a: &Mat, ca: &CycNum, b: &Mat, cb: &CycNum) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * ca + y * cb).collect()).collect()
}

fn scale(a: &Mat, c: &CycNum) -> Mat {
    a.iter().map(|row| row.iter().map(|x| x * c).collect()).collect()
}

fn power(a: &Mat, e: u32) -> Mat {
    (0..e).fold(identity(a.len()), |acc, _| mul(&acc, a))
}

fn rank(a: &Mat) -> usize {
    let mut red = Reducer::new();
    for row in a {
        let mut eq = Equation::new();
        for (j, c) in row.iter().enumerate() {
            eq.add_term(j, c);
        }
        red.push(eq);
    }
    red.rank()
}

/// Builds the module on `x, Fx, …, F^{n−1}x` (column `t` is the image of
/// `F^t x`) and computes `dim ker E`, `dim ker F` exactly.
pub fn verma_check(order: u32, s: u32) -> Result<VermaReport, NicholsError> {
    if order < 3 || order % 2 == 0 {
        return Err(NicholsError::BadParameters(format!("order {order} must be odd and at least 3")));
    }
    if s + 2 > order {
        return Err(NicholsError::BadParameters(format!("s = {s} must lie in 0..={}", order - 2)));
    }
    let n = order as usize;
    let v = |k: i64| CycNum::root_of_unity(order, k);
    let s = s as i64;
    let v_diff = &v(1) - &v(-1);
    let denom = (&v_diff * &v_diff).inv().expect("v ≠ ±1");

    let mut e = zeros(n);
    let mut f = zeros(n);
    let mut k = zeros(n);
    let mut k_inv = zeros(n);
    for t in 0..n {
        let ti = t as i64;
        if t + 1 < n {
            f[t + 1][t] = CycNum::one();
        }
        k[t][t] = v(s - 2 * ti);
        k_inv[t][t] = v(2 * ti - s);
        if t > 0 {
            let num = &(&(&v(s + 1) + &v(-1 - s)) - &v(s + 1 - 2 * ti)) - &v(2 * ti - s - 1);
            e[t - 1][t] = &num * &denom;
        }
    }

    let one = CycNum::one();
    let minus = -CycNum::one();
    let mut failed = Vec::new();
    let mut expect = |name: &str, lhs: Mat, rhs: Mat| {
        if lhs != rhs {
            failed.push(name.to_string());
        }
    };
    let commutator = combine(&mul(&e, &f), &one, &mul(&f, &e), &minus);
    let k_term = scale(&combine(&k, &one, &k_inv, &minus), &v_diff.inv().expect("v ≠ ±1"));
    expect("EF - FE = (K - K^-1)/(v - v^-1)", commutator, k_term);
    expect("KE = v^2 EK", mul(&k, &e), scale(&mul(&e, &k), &v(2)));
    expect("KF = v^-2 FK", mul(&k, &f), scale(&mul(&f, &k), &v(-2)));
    expect("E^n = 0", power(&e, order), zeros(n));
    expect("F^n = 0", power(&f, order), zeros(n));
    expect("K^2n = 1", power(&k, 2 * order), identity(n));
    expect("K K^-1 = 1", mul(&k, &k_inv), identity(n));
    let x_column = |m: &Mat| m.iter().map(|row| row[0].clone()).collect::<Vec<_>>();
    if x_column(&e).iter().any(|c| !c.is_zero()) {
        failed.push("Ex = 0".into());
    }
    if x_column(&k) != (0..n).map(|i| if i == 0 { v(s) } else { CycNum::zero() }).collect::<Vec<_>>() {
        failed.push("Kx = v^s x".into());
    }

    Ok(VermaReport {
        order,
        s: s as u32,
        e_invariants: n - rank(&e),
        f_invariants: n - rank(&f),
        failed_relations: failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_are_two_and_one() {
        for (n, s) in [(3, 0), (3, 1), (5, 2), (5, 0), (7, 5)] {
            let rep = verma_check(n, s).unwrap();
            assert_eq!((rep.e_invariants, rep.f_invariants), (2, 1), "n={n} s={s}");
            assert!(rep.relations_hold(), "{:?}", rep.failed_relations);
        }
    }

    #[test]
    fn e_kills_exactly_the_top_and_the_singular_vector() {
        // E F^t x = 0 iff t = 0 or t = s + 1; check the coefficient directly for n = 5
        let v = |k: i64| CycNum::root_of_unity(5, k);
        let s = 2i64;
        let zero_at: Vec<i64> = (1..5)
            .filter(|&t| (&(&(&v(s + 1) + &v(-1 - s)) - &v(s + 1 - 2 * t)) - &v(2 * t - s - 1)).is_zero())
            .collect();
        assert_eq!(zero_at, vec![s + 1]);
    }

    #[test]
    fn parameters_are_validated() {
        assert!(verma_check(4, 0).is_err());
        assert!(verma_check(3, 2).is_err());
        assert!(verma_check(1, 0).is_err());
    }
}
