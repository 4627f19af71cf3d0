//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! A [`CycNum`] is stored as an integer vector over a positive common
//! denominator, in the power basis `1, ζ_m, …, ζ_m^{φ(m)−1}` modulo `Φ_m`.
//! Conductors are unified by embedding into the lcm. Results that turn out to
//! be rational are moved back to conductor 1.

mod complex;
pub(crate) mod cyclo;

pub use complex::ComplexApprox;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use cyclo::lcm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} exceeds the configured bound {1}")]
    ConductorOverflow(u64, u32),
    #[error("malformed cyclotomic number: {0}")]
    Malformed(String),
}

static CONDUCTOR_BOUND: AtomicU32 = AtomicU32::new(10_000);

/// Sets the largest conductor any operation may produce.
pub fn set_conductor_bound(bound: u32) {
    CONDUCTOR_BOUND.store(bound.max(1), Ordering::Relaxed);
}

pub fn conductor_bound() -> u32 {
    CONDUCTOR_BOUND.load(Ordering::Relaxed)
}

#[derive(Clone)]
pub struct CycNum {
    m: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { m: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        CycNum { m: 1, num: vec![BigInt::from(v)], den: BigInt::one() }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        CycNum { m: 1, num: vec![v], den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        CycNum { m: 1, num: vec![r.numer().clone()], den: r.denom().clone() }.normalized()
    }

    pub fn from_frac(a: i64, b: i64) -> Self {
        Self::from_rational(&BigRational::new(a.into(), b.into()))
    }

    /// `ζ_m^k` for any integer k.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let k = k.rem_euclid(m as i64) as u32;
        if m % 4 == 2 {
            // ζ_m = −ζ_{m/2}^{(m/2+1)/2}
            let h = m / 2;
            let e = (h as i64 + 1) / 2 * k as i64;
            let sign = if k % 2 == 1 { -1 } else { 1 };
            return Self::root_of_unity(h, e) * Self::from_int(sign);
        }
        let d = cyclo::data(m);
        let num = d.roots[k as usize].iter().map(|&c| BigInt::from(c)).collect();
        CycNum { m, num, den: BigInt::one() }.normalized()
    }

    /// `Σ_k counts[k] ζ_m^k`.
    pub fn from_root_counts(m: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), m as usize, "one count per root of unity");
        if m % 4 == 2 {
            let mut acc = Self::zero();
            for (k, &c) in counts.iter().enumerate() {
                if c != 0 {
                    acc += &(Self::root_of_unity(m, k as i64) * Self::from_int(c));
                }
            }
            return acc;
        }
        let d = cyclo::data(m);
        let mut acc = vec![0i64; d.phi];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &r) in acc.iter_mut().zip(&d.roots[k]) {
                    *a += c * r;
                }
            }
        }
        CycNum { m, num: acc.into_iter().map(BigInt::from).collect(), den: BigInt::one() }.normalized()
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// Power-basis coordinates as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.m == 1 && self.num[0] == self.den
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            r.numer().to_i64()
        } else {
            None
        }
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
        if self.m != 1 && self.is_rational() {
            self.num.truncate(1);
            self.m = 1;
        }
        if self.is_zero() {
            self.den = BigInt::one();
        }
        self
    }

    /// Re-expresses `self` in `Q(ζ_target)`; `target` must be a multiple of the conductor.
    fn embed_into(&self, target: u32) -> Vec<BigInt> {
        if target == self.m {
            return self.num.clone();
        }
        debug_assert_eq!(target % self.m, 0);
        let d = cyclo::data(target);
        let step = (target / self.m) as usize;
        let mut out = vec![BigInt::zero(); d.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&d.roots[(k * step) % target as usize]) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        out
    }

    fn common(&self, other: &Self) -> Result<u32, ExactError> {
        if self.m == other.m {
            return Ok(self.m);
        }
        let l = lcm(self.m as u64, other.m as u64);
        let bound = conductor_bound();
        if l > bound as u64 {
            return Err(ExactError::ConductorOverflow(l, bound));
        }
        Ok(l as u32)
    }

    fn linear(&self, other: &Self, sign: i32) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if sign > 0 { other.clone() } else { -other.clone() });
        }
        let m = self.common(other)?;
        let a = self.embed_into(m);
        let b = other.embed_into(m);
        let num = if self.den == other.den {
            a.into_iter()
                .zip(b)
                .map(|(x, y)| if sign > 0 { x + y } else { x - y })
                .collect()
        } else {
            a.into_iter()
                .zip(b)
                .map(|(x, y)| {
                    let l = x * &other.den;
                    let r = y * &self.den;
                    if sign > 0 {
                        l + r
                    } else {
                        l - r
                    }
                })
                .collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        Ok(CycNum { m, num, den }.normalized())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.linear(other, 1)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.linear(other, -1)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.m == 1 || other.m == 1 {
            let (s, v) = if self.m == 1 { (self, other) } else { (other, self) };
            let c = &s.num[0];
            return Ok(CycNum {
                m: v.m,
                num: v.num.iter().map(|x| x * c).collect(),
                den: &s.den * &v.den,
            }
            .normalized());
        }
        let m = self.common(other)?;
        let a = self.embed_into(m);
        let b = other.embed_into(m);
        let d = cyclo::data(m);
        let phi = d.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // long division by the monic Φ_m
        for k in (phi..prod.len()).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[k]);
            for (j, &pc) in d.poly.iter().enumerate().take(phi) {
                if pc != 0 {
                    prod[k - phi + j] -= &c * pc;
                }
            }
        }
        prod.truncate(phi);
        Ok(CycNum { m, num: prod, den: &self.den * &other.den }.normalized())
    }

    /// The Galois automorphism `ζ_m ↦ ζ_m^t` (t coprime to the conductor).
    pub fn galois(&self, t: i64) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        let m = self.m;
        let t = t.rem_euclid(m as i64) as usize;
        let d = cyclo::data(m);
        let mut out = vec![BigInt::zero(); d.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&d.roots[(k * t) % m as usize]) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        CycNum { m, num: out, den: self.den.clone() }.normalized()
    }

    /// Complex conjugation `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(CycNum { m: 1, num: vec![self.den.clone()], den: self.num[0].clone() }.normalized());
        }
        let d = cyclo::data(self.m);
        let mut others = Self::one();
        for &t in d.units.iter().filter(|&&t| t != 1) {
            others = others.try_mul(&self.galois(t as i64))?;
        }
        let norm = self.try_mul(&others)?;
        let n = norm.to_rational().expect("field norm is rational");
        let inv_norm = CycNum::from_rational(&n.recip());
        others.try_mul(&inv_norm)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Floating evaluation at `ζ_m = e^{2πi/m}` with a rigorous error bound.
    pub fn embed(&self, precision: u32) -> ComplexApprox {
        assert!(precision >= 32, "precision must be at least 32 bits");
        complex::evaluate(self.m, &self.num, &self.den)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool, ExactError> {
        if self.m == other.m {
            return Ok(self.den == other.den && self.num == other.num);
        }
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).expect("conductor overflow in comparison")
    }
}

impl Eq for CycNum {}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycNum {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in &mut self.num {
            *c = -&*c;
        }
        self
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -self.clone()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*z{}^{k}", self.m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{self}]")
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumJson {
    m: u32,
    coeffs: Vec<String>,
}

impl CycNum {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("CycNum always serializes")
    }

    pub fn from_parts(m: u32, coeffs: &[BigRational]) -> Result<Self, ExactError> {
        if m == 0 {
            return Err(ExactError::Malformed("conductor 0".into()));
        }
        let phi = if m <= 2 { 1 } else { cyclo::data(m).phi };
        if coeffs.len() != phi {
            return Err(ExactError::Malformed(format!("expected {phi} coefficients for conductor {m}")));
        }
        let mut acc = CycNum::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.try_add(&(CycNum::root_of_unity(m, k as i64) * CycNum::from_rational(c)))?;
            }
        }
        Ok(acc)
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs = self.coeffs().iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect();
        CycNumJson { m: self.m, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CycNumJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| {
                let (n, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
                let n: BigInt = n.trim().parse().map_err(D::Error::custom)?;
                let den: BigInt = den.trim().parse().map_err(D::Error::custom)?;
                if den.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(BigRational::new(n, den))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CycNum::from_parts(raw.m, &coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(m: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(m, k)
    }

    #[test]
    fn basic_identities() {
        assert_eq!(z(4, 1) * z(4, 1), CycNum::from_int(-1));
        assert_eq!(z(5, 1).conj() * z(5, 1), CycNum::one());
        assert!((CycNum::one() + z(3, 1) + z(3, 2)).is_zero());
        assert_eq!(z(6, 1), -z(3, 2));
        assert_eq!(z(2, 1), CycNum::from_int(-1));
    }

    #[test]
    fn mixed_conductors_and_descent() {
        let a = z(4, 1) + z(3, 1);
        let b = a.clone() - z(3, 1);
        assert_eq!(b, z(4, 1));
        let c = z(12, 3) * z(12, 9);
        assert!(c.is_rational());
        assert_eq!(c.conductor(), 1);
        assert_eq!(c, CycNum::one());
    }

    #[test]
    fn inverse_and_division() {
        let a = CycNum::from_int(2) + z(5, 1) * CycNum::from_int(3);
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, CycNum::one());
        assert_eq!(CycNum::zero().inv(), Err(ExactError::DivisionByZero));
        assert_eq!(a.pow(-2).unwrap() * a.pow(2).unwrap(), CycNum::one());
    }

    #[test]
    fn conductor_bound_enforced() {
        let a = z(101, 1);
        let b = z(103, 1);
        assert!(matches!(a.try_mul(&b), Err(ExactError::ConductorOverflow(10403, _))));
    }

    #[test]
    fn json_round_trip_and_embedding() {
        let a = z(8, 1) + z(8, 7);
        let js = serde_json::to_string(&a).unwrap();
        let back: CycNum = serde_json::from_str(&js).unwrap();
        assert_eq!(a, back);
        let e = a.embed(40);
        assert!((e.re - 2f64.sqrt()).abs() <= e.eps + 1e-12);
        assert!(e.im.abs() <= e.eps + 1e-12);
        let i = z(4, 1).embed(32);
        assert!(i.re.abs() <= i.eps && (i.im - 1.0).abs() <= i.eps);
    }

    fn arb_cyc() -> impl Strategy<Value = CycNum> {
        (prop::sample::select(vec![1u32, 3, 4, 5, 8, 12, 20]), prop::collection::vec(-5i64..6, 20), 1i64..4)
            .prop_map(|(m, cs, d)| {
                let mut acc = CycNum::zero();
                for (k, c) in cs.iter().enumerate().take(m as usize) {
                    acc += &(z(m, k as i64) * CycNum::from_int(*c));
                }
                acc * CycNum::from_frac(1, d)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn ring_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn conj_is_involutive_homomorphism(a in arb_cyc(), b in arb_cyc()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
            prop_assert_eq!((&a + &b).conj(), a.conj() + b.conj());
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_cyc(), b in arb_cyc()) {
            let (ea, eb, eab) = (a.embed(40), b.embed(40), (&a * &b).embed(40));
            let prod = ea.mul(&eb);
            prop_assert!((prod.re - eab.re).abs() <= prod.eps + eab.eps + 1e-9);
            prop_assert!((prod.im - eab.im).abs() <= prod.eps + eab.eps + 1e-9);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_cyc(), b in arb_cyc()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b) / &b, a);
        }
    }
}
