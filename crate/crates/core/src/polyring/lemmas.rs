//! Closed-form evaluations of function-field Gauss sums. Each function
//! returns the predicted value, to be compared with direct summation by
//! [`ff_gauss_sum`](super::ff_gauss_sum).

use num_bigint::BigInt;

use super::{ff_gauss_sum, Poly, PolyRing};
use crate::exactnum::CycNum;
use crate::ffield::{gauss_sum, MultChar};

fn q_pow(q: u64, e: i64) -> CycNum {
    CycNum::from_int(q as i64).pow(e).expect("q is nonzero")
}

fn symbol_inv(ring: &PolyRing, f: &Poly, g: &Poly, chi: &MultChar) -> CycNum {
    ring.residue_symbol(f, g, chi).inv().expect("coprime arguments")
}

/// Right side of twisted multiplicativity for `gcd(f1 f2, h1 h2) = 1`.
pub fn twisted_mult(ring: &PolyRing, chi: &MultChar, f1: &Poly, f2: &Poly, h1: &Poly, h2: &Poly) -> CycNum {
    ff_gauss_sum(ring, f1, f2, chi)
        * ff_gauss_sum(ring, h1, h2, chi)
        * symbol_inv(ring, f1, h2, chi)
        * symbol_inv(ring, h1, f2, chi)
        * ring.residue_symbol(f2, h2, chi)
        * ring.residue_symbol(h2, f2, chi)
}

/// Lifting formula for squarefree `f2` coprime to `f1`:
/// `ξ(−1)^{d(d−1)/2} (f1/f2)^{−1} (f2′/f2)_{ξχ} g_χ^d`, `d = deg f2`.
pub fn lifting(ring: &PolyRing, chi: &MultChar, f1: &Poly, f2: &Poly) -> CycNum {
    let field = ring.field();
    let xi = MultChar::quadratic(field);
    let d = f2.deg() as i64;
    let sign = xi.value(field.neg(1)).pow(d * (d - 1) / 2).unwrap();
    let df = ring.derivative(f2);
    let twisted = ring.residue_symbol(&df, f2, &xi) * ring.residue_symbol(&df, f2, chi);
    sign * symbol_inv(ring, f1, f2, chi) * twisted * gauss_sum(chi).pow(d).unwrap()
}

/// The three members of Pellet's formula:
/// `ξ(−1)^{d(d−1)/2} (f′/f)_ξ`, `ξ(Disc f)` and `(−1)^d μ(f)`.
pub fn pellet(ring: &PolyRing, f: &Poly) -> (CycNum, CycNum, CycNum) {
    let field = ring.field();
    let xi = MultChar::quadratic(field);
    let d = f.deg() as i64;
    let sign = xi.value(field.neg(1)).pow(d * (d - 1) / 2).unwrap();
    let first = sign * ring.residue_symbol(&ring.derivative(f), f, &xi);
    let second = xi.value(ring.discriminant(f));
    let parity = if d % 2 == 0 { 1 } else { -1 };
    let third = CycNum::from_int(parity * ring.mobius(f) as i64);
    (first, second, third)
}

/// Euler's totient `|(F_q[T]/f)^*|`.
pub fn totient(ring: &PolyRing, f: &Poly) -> BigInt {
    let q = BigInt::from(ring.q());
    ring.factor(f).iter().fold(BigInt::from(1), |acc, (p, m)| {
        let norm = num_traits::pow(q.clone(), p.deg() as usize);
        acc * num_traits::pow(norm.clone(), *m as usize - 1) * (norm - 1)
    })
}

/// `f = f0^n` for some monic `f0`.
pub fn is_nth_power(ring: &PolyRing, f: &Poly, n: u32) -> bool {
    ring.factor(f).iter().all(|&(_, m)| m % n == 0)
}

/// Three-case evaluation of `g_χ(1, f)` via the character sum over `deg ν = deg f − 1`.
pub fn gauss_sum_eval(ring: &PolyRing, chi: &MultChar, f: &Poly) -> CycNum {
    let n = chi.order();
    let d = f.deg();
    if d == 0 {
        return CycNum::one();
    }
    let mut sum = CycNum::zero();
    for nu in ring.enumerate_monic(d - 1).expect("small degree") {
        sum += &ring.residue_symbol(&nu, f, chi);
    }
    let q = CycNum::from_int(ring.q() as i64);
    if d % n != 0 {
        gauss_sum(&chi.pow(d as i64)) * sum
    } else if !is_nth_power(ring, f, n) {
        -(q * sum)
    } else {
        CycNum::from_bigint(totient(ring, f)) - q * sum
    }
}

/// Closed form of `Σ_{deg f = d} g_χ(π^m, f)` for linear `π`, `χ` of order `n`
/// and `0 ≤ m ≤ n − 1`.
pub fn gauss_sum_sum(q: u64, chi: &MultChar, m: u32, d: u32) -> CycNum {
    let n = chi.order();
    assert!(m < n, "exponent must be below the character order");
    let (d, m, ni) = (d as i64, m as i64, n as i64);
    let one_minus = CycNum::one() - q_pow(q, -1);
    if m == ni - 1 {
        return match d {
            0 => CycNum::one(),
            _ if d == ni => -q_pow(q, ni),
            _ => CycNum::zero(),
        };
    }
    let g = || gauss_sum(&chi.pow(1 + m));
    if d == 0 {
        CycNum::one()
    } else if d == 1 + m {
        q_pow(q, 1 + m) * g()
    } else if d % ni == 0 {
        q_pow(q, d + d / ni) * one_minus
    } else if d > 1 + m && (d - 1 - m) % ni == 0 {
        q_pow(q, d + (d - m - 1) / ni) * one_minus * g()
    } else {
        CycNum::zero()
    }
}

/// Direct summation of `Σ_{deg f = d} g_χ(π^m, f)`.
pub fn gauss_sum_sum_brute(ring: &PolyRing, chi: &MultChar, pi: &Poly, m: u32, d: u32) -> CycNum {
    let pm = ring.pow(pi, m);
    let mut acc = CycNum::zero();
    for f in ring.enumerate_monic(d).expect("small degree") {
        acc += &ff_gauss_sum(ring, &pm, &f, chi);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    #[test]
    fn lifting_on_a_quadratic_modulus() {
        let f = Field::build(5, 1, None).unwrap();
        let r = PolyRing::new(&f);
        let xi = MultChar::quadratic(&f);
        let f2 = r.parse("T^2+2").unwrap();
        assert_eq!(ff_gauss_sum(&r, &Poly::one(), &f2, &xi), lifting(&r, &xi, &Poly::one(), &f2));
    }

    #[test]
    fn pellet_small() {
        let f = Field::build(5, 1, None).unwrap();
        let r = PolyRing::new(&f);
        for d in 1..=3 {
            for g in r.enumerate_monic(d).unwrap() {
                let (a, b, c) = pellet(&r, &g);
                if r.is_squarefree(&g) {
                    assert_eq!(a, b);
                }
                assert_eq!(b, c, "{g:?}");
            }
        }
    }

    #[test]
    fn totient_of_powers() {
        let f = Field::build(3, 1, None).unwrap();
        let r = PolyRing::new(&f);
        let t2 = r.parse("T^2").unwrap();
        assert_eq!(totient(&r, &t2), BigInt::from(6));
        assert!(is_nth_power(&r, &t2, 2));
    }
}
