//! Function-field Gauss sums and the coprime pair counts used to sum them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Poly, PolyRing};
use crate::exactnum::{cyclo::lcm, CycNum};
use crate::ffield::MultChar;

/// `g_χ(f1, f2) = Σ_{h mod f2} (h/f2)_χ e(Tr c/p)`, where `c` is the
/// coefficient of `T^{deg f2 − 1}` in `h·f1 mod f2`.
pub fn ff_gauss_sum(ring: &PolyRing, f1: &Poly, f2: &Poly, chi: &MultChar) -> CycNum {
    let field = ring.field();
    let d = f2.deg();
    if d == 0 {
        return CycNum::one();
    }
    let n = chi.level();
    let p = field.p();
    let l = lcm(n as u64, p as u64) as u32;
    let (sn, sp) = (l / n, l / p);
    let f1r = ring.rem(f1, f2);
    let mut counts = vec![0i64; l as usize];
    for h in ring.residues(d) {
        let Some(k) = ring.residue_exponent(&h, f2, chi) else { continue };
        let c = ring.rem(&ring.mul(&h, &f1r), f2).coeff(d as usize - 1);
        counts[((k * sn + field.trace(c) * sp) % l) as usize] += 1;
    }
    CycNum::from_root_counts(l, &counts)
}

fn q_pow(q: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Closed-form count of monic pairs `(f, ν)` with `deg f = d`, `deg ν = e`
/// and `gcd(f, πν) = 1`, for `π` linear. Negative or fractional degrees give 0;
/// pass degrees as numerator/denominator pairs to express fractions.
pub fn lambda_count(q: u64, d: (i64, i64), e: (i64, i64)) -> BigInt {
    let as_int = |(a, b): (i64, i64)| (b != 0 && a % b == 0 && a / b >= 0).then(|| a / b);
    let (Some(d), Some(e)) = (as_int(d), as_int(e)) else { return BigInt::zero() };
    if d == 0 {
        return num_traits::pow(BigInt::from(q), e as usize);
    }
    let one = BigRational::one();
    let base = q_pow(q, d + e) * (&one - q_pow(q, -1)) / (&one + q_pow(q, -1));
    let v = if e >= d { base * (&one - q_pow(q, -2 * d)) } else { base * (&one + q_pow(q, -2 * e - 1)) };
    assert!(v.is_integer(), "pair counts are integral");
    v.to_integer()
}

/// Direct enumeration of the same count, for any prime `π`.
pub fn lambda_count_brute(ring: &PolyRing, pi: &Poly, d: u32, e: u32) -> u64 {
    let fs: Vec<Poly> = ring.enumerate_monic(d).unwrap().filter(|f| ring.coprime(f, pi)).collect();
    let mut count = 0;
    for nu in ring.enumerate_monic(e).unwrap() {
        count += fs.iter().filter(|f| ring.coprime(f, &nu)).count() as u64;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{gauss_sum, Field};

    #[test]
    fn boundary_values() {
        let f = Field::build(5, 1, None).unwrap();
        let r = PolyRing::new(&f);
        let chi = MultChar::new(&f, 4).unwrap();
        let f1 = r.parse("T^2+3").unwrap();
        assert!(ff_gauss_sum(&r, &f1, &Poly::one(), &chi).is_one());
        assert_eq!(ff_gauss_sum(&r, &Poly::one(), &Poly::t(), &chi), gauss_sum(&chi));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_count(5, (0, 1), (3, 1)), BigInt::from(125));
        assert_eq!(lambda_count(5, (1, 1), (1, 1)), BigInt::from(16));
        assert_eq!(lambda_count(5, (-1, 1), (3, 1)), BigInt::zero());
        assert_eq!(lambda_count(5, (1, 2), (3, 1)), BigInt::zero());
        let f = Field::build(5, 1, None).unwrap();
        let r = PolyRing::new(&f);
        for d in 0..=3 {
            for e in 0..=3 {
                let brute = lambda_count_brute(&r, &Poly::t(), d, e);
                assert_eq!(lambda_count(5, (d as i64, 1), (e as i64, 1)), BigInt::from(brute), "d={d} e={e}");
            }
        }
    }
}
