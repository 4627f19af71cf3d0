//! Finite fields of odd characteristic, multiplicative characters and their
//! Gauss sums.
//!
//! Elements of `F_q`, `q = p^e`, are `u32` codes `Σ c_i p^i` where `c_i` are
//! the coordinates in the basis `1, t, …, t^{e−1}` of `F_p[t]/(modulus)`.
//! The code order is the fixed total order used for generator selection.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::{cyclo::lcm, CycNum};

/// Largest field size for which log tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("character order {n} does not divide q-1 = {}", .q - 1)]
    OrderNotDividing { n: u32, q: u32 },
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field of size {0} is too large to tabulate")]
    TooLarge(u64),
}

#[derive(Debug)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    gen: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

pub type FieldRef = Arc<Field>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, low degree first, used only while building a field.
fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = fp_trim(b.to_vec());
    let mut r = fp_trim(a.to_vec());
    let db = b.len() - 1;
    let inv_lead = fp_pow(b[db], p - 2, p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * inv_lead as u64 % p as u64) as u32;
        for (j, &bc) in b.iter().enumerate() {
            let idx = dr - db + j;
            r[idx] = ((r[idx] as u64 + (p - bc) as u64 * c as u64) % p as u64) as u32;
        }
        r = fp_trim(r);
        if r.len() - 1 < dr && r.len() <= db {
            break;
        }
    }
    r
}

fn fp_pow(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            let r = fp_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^e}`; without a modulus the smallest monic irreducible is used,
    /// ordering candidates from the top coefficient down.
    pub fn build(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<FieldRef, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(FieldError::BadModulus("extension degree must be positive".into()));
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_SIZE {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(format!("need a monic degree-{e} polynomial over F_{p}")));
                }
                if !fp_is_irreducible(&m, p) {
                    return Err(FieldError::Reducible(p));
                }
                m
            }
            None => {
                let mut found = None;
                for low in 0..(q as u64) {
                    let mut m = Vec::with_capacity(e as usize + 1);
                    let mut x = low;
                    for _ in 0..e {
                        m.push((x % p as u64) as u32);
                        x /= p as u64;
                    }
                    m.push(1);
                    if fp_is_irreducible(&m, p) {
                        found = Some(m);
                        break;
                    }
                }
                found.expect("irreducible polynomials exist in every degree")
            }
        };
        let mut field = Field { p, e, q, modulus, gen: 0, exp: Vec::new(), log: Vec::new(), trace: Vec::new() };
        field.gen = (1..q).find(|&g| field.has_full_order(g)).expect("F_q^* is cyclic");
        field.exp = Vec::with_capacity(q as usize - 1);
        field.log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for t in 0..q - 1 {
            field.exp.push(cur);
            field.log[cur as usize] = t;
            cur = field.mul_raw(cur, field.gen);
        }
        field.trace = (0..q).map(|a| field.compute_trace(a)).collect();
        Ok(Arc::new(field))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn generator(&self) -> u32 {
        self.gen
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let e = self.e as usize;
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..e {
                prod[k - e + j] = (prod[k - e + j] + (p - self.modulus[j] as u64) * c) % p;
            }
            prod[k] = 0;
        }
        let out: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.undigits(&out)
    }

    fn pow_raw(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }

    fn has_full_order(&self, g: u32) -> bool {
        let order = self.q as u64 - 1;
        prime_factors(order).iter().all(|&l| self.pow_raw(g, order / l) != 1)
    }

    fn compute_trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut cur = a;
        for _ in 0..self.e {
            acc = self.add(acc, cur);
            cur = self.pow_raw(cur, self.p as u64);
        }
        debug_assert!(acc < self.p, "trace must land in the prime field");
        acc
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(t % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let t = self.log[a as usize];
        Some(self.exp[((self.q - 1 - t) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, k: i64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let t = self.log[a as usize] as i64 * k;
        self.exp[t.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Discrete logarithm to the fixed generator.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, t: i64) -> u32 {
        self.exp[t.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize]
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    /// The degree-`k` extension together with the embedding of `self` into it.
    pub fn extension(&self, k: u32) -> Result<(FieldRef, Vec<u32>), FieldError> {
        let big = Field::build(self.p, self.e * k, None)?;
        // a root of our modulus inside the big field gives the embedding
        let root = big
            .elements()
            .find(|&x| {
                let mut acc = 0;
                for &c in self.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, x), c);
                }
                acc == 0
            })
            .expect("the modulus splits in the extension");
        let images = self
            .elements()
            .map(|a| {
                let mut acc = 0;
                for &c in self.digits(a).iter().rev() {
                    acc = big.add(big.mul(acc, root), c);
                }
                acc
            })
            .collect();
        Ok((big, images))
    }
}

/// A multiplicative character `χ` with values in `μ_n`, stored as exponents:
/// `χ(gen^t) = ζ_n^{power · table[t]}` and `χ(0) = 0`.
#[derive(Debug, Clone)]
pub struct MultChar {
    field: FieldRef,
    n: u32,
    table: Arc<Vec<u32>>,
    power: u32,
}

impl MultChar {
    /// The character of order `n` sending the fixed generator to `ζ_n`.
    pub fn new(field: &FieldRef, n: u32) -> Result<Self, FieldError> {
        if n == 0 || (field.q - 1) % n != 0 {
            return Err(FieldError::OrderNotDividing { n, q: field.q });
        }
        let table = (0..field.q - 1).map(|t| t % n).collect();
        Ok(MultChar { field: field.clone(), n, table: Arc::new(table), power: 1 })
    }

    /// The quadratic character.
    pub fn quadratic(field: &FieldRef) -> Self {
        Self::new(field, 2).expect("q is odd")
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// The root-of-unity level `n` in which values are expressed.
    pub fn level(&self) -> u32 {
        self.n
    }

    /// `χ^j`.
    pub fn pow(&self, j: i64) -> Self {
        let power = (self.power as i64 * j).rem_euclid(self.n as i64) as u32;
        MultChar { power, ..self.clone() }
    }

    /// Exponent `k` with `χ(a) = ζ_n^k`, or `None` at zero.
    pub fn exponent(&self, a: u32) -> Option<u32> {
        let t = self.field.log(a)?;
        Some((self.table[t as usize] as u64 * self.power as u64 % self.n as u64) as u32)
    }

    pub fn value(&self, a: u32) -> CycNum {
        match self.exponent(a) {
            None => CycNum::zero(),
            Some(k) => CycNum::root_of_unity(self.n, k as i64),
        }
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.field.q - 1).all(|t| self.table[t as usize] as u64 * self.power as u64 % self.n as u64 == 0)
    }

    /// Exact order of the character.
    pub fn order(&self) -> u32 {
        (1..=self.n).find(|&d| self.pow(d as i64).is_trivial()).unwrap_or(self.n)
    }

    /// `χ ∘ Norm` on the field `big`, given the embedding of our field into it.
    pub fn lift(&self, big: &FieldRef, embedding: &[u32]) -> Self {
        let back: HashMap<u32, u32> = embedding.iter().enumerate().map(|(a, &b)| (b, a as u32)).collect();
        let ratio = (big.q as u64 - 1) / (self.field.q as u64 - 1);
        let table = (0..big.q as u64 - 1)
            .map(|t| {
                let norm = big.exp((t * ratio % (big.q as u64 - 1)) as i64);
                self.exponent(back[&norm]).expect("norm of a unit is a unit")
            })
            .collect();
        MultChar { field: big.clone(), n: self.n, table: Arc::new(table), power: 1 }
    }
}

/// `g_χ = Σ_{a ≠ 0} χ(a) ζ_p^{Tr a}`.
pub fn gauss_sum(chi: &MultChar) -> CycNum {
    let f = &chi.field;
    let l = lcm(chi.n as u64, f.p as u64) as u32;
    let (sn, sp) = (l / chi.n, l / f.p);
    let mut counts = vec![0i64; l as usize];
    for a in 1..f.q {
        let k = chi.exponent(a).unwrap();
        counts[((k * sn + f.trace(a) * sp) % l) as usize] += 1;
    }
    CycNum::from_root_counts(l, &counts)
}

/// Checks `−g_{χ∘N} = (−g_χ)^k` by building the degree-`k` extension from scratch.
pub fn hasse_davenport_check(chi: &MultChar, k: u32) -> Result<bool, FieldError> {
    let (big, emb) = chi.field.extension(k)?;
    let lifted = chi.lift(&big, &emb);
    let lhs = -gauss_sum(&lifted);
    let rhs = (-gauss_sum(chi)).pow(k as i64).expect("integral power");
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_defaults() {
        let f = Field::build(5, 1, None).unwrap();
        assert_eq!(f.generator(), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(Field::build(2, 1, None).unwrap_err(), FieldError::EvenCharacteristic);
        assert_eq!(Field::build(9, 1, None).unwrap_err(), FieldError::NotPrime(9));
    }

    #[test]
    fn f9_uses_t_squared_plus_one() {
        let f = Field::build(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(Field::build(3, 2, Some(vec![2, 0, 1])).unwrap_err(), FieldError::Reducible(3));
        // t·t = −1
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.log(f.generator()), Some(1));
    }

    #[test]
    fn characters_on_f5() {
        let f = Field::build(5, 1, None).unwrap();
        let xi = MultChar::new(&f, 2).unwrap();
        assert_eq!(xi.value(2), CycNum::from_int(-1));
        let chi = MultChar::new(&f, 4).unwrap();
        assert_eq!(chi.value(2), CycNum::root_of_unity(4, 1));
        assert_eq!(chi.pow(2).value(3), xi.value(3));
        assert!(chi.pow(4).is_trivial());
        assert_eq!(chi.order(), 4);
        assert!(matches!(MultChar::new(&f, 3), Err(FieldError::OrderNotDividing { .. })));
    }

    #[test]
    fn gauss_sums_on_f5() {
        let f = Field::build(5, 1, None).unwrap();
        let xi = MultChar::quadratic(&f);
        let g = gauss_sum(&xi);
        let expect = CycNum::from_int(1)
            + CycNum::from_int(2) * (CycNum::root_of_unity(5, 1) + CycNum::root_of_unity(5, 4));
        assert_eq!(g, expect);
        assert_eq!(&g * &g, CycNum::from_int(5));
        let trivial = MultChar::new(&f, 4).unwrap().pow(4);
        assert_eq!(gauss_sum(&trivial), CycNum::from_int(-1));
        let e = g.embed(40);
        assert!((e.re - 5f64.sqrt()).abs() <= e.eps + 1e-12);
    }

    #[test]
    fn hasse_davenport_small_cases() {
        let f = Field::build(5, 1, None).unwrap();
        let chi = MultChar::new(&f, 4).unwrap();
        for k in 1..=3 {
            assert!(hasse_davenport_check(&chi, k).unwrap());
            assert!(hasse_davenport_check(&chi.pow(2), k).unwrap());
        }
        let f9 = Field::build(3, 2, None).unwrap();
        assert!(hasse_davenport_check(&MultChar::new(&f9, 4).unwrap(), 2).unwrap());
    }

    proptest! {
        #[test]
        fn gauss_sum_norm_is_q(pe in prop::sample::select(vec![(5u32, 1u32), (13, 1), (3, 2), (7, 1), (3, 3)]), j in 1i64..12) {
            let f = Field::build(pe.0, pe.1, None).unwrap();
            let chi = MultChar::new(&f, f.q() - 1).unwrap().pow(j);
            prop_assume!(!chi.is_trivial());
            let g = gauss_sum(&chi);
            prop_assert_eq!(&g * &g.conj(), CycNum::from_int(f.q() as i64));
        }

        #[test]
        fn frobenius_is_additive(a in 0u32..125, b in 0u32..125) {
            let f = Field::build(5, 3, None).unwrap();
            let lhs = f.pow(f.add(a, b), 5);
            prop_assert_eq!(lhs, f.add(f.pow(a, 5), f.pow(b, 5)));
        }

        #[test]
        fn character_powers(j in 0i64..8) {
            let f = Field::build(17, 1, None).unwrap();
            let chi = MultChar::new(&f, 8).unwrap();
            prop_assert!(chi.pow(8).is_trivial());
            let xi = MultChar::quadratic(&f);
            for a in 1..17 {
                prop_assert_eq!(chi.pow(4).value(a), xi.value(a));
                prop_assert_eq!(chi.pow(j).value(a) * chi.pow(-j).value(a), CycNum::one());
            }
        }
    }
}
