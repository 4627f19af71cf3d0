//! Arithmetic in `F_q[T]`: monic enumeration, factorization, resultants,
//! discriminants and power residue symbols.

mod gauss;
pub mod lemmas;

pub use gauss::{ff_gauss_sum, lambda_count, lambda_count_brute};

use std::fmt;

use thiserror::Error;

use crate::exactnum::CycNum;
use crate::ffield::{FieldRef, MultChar};

/// Default cap on `q^d` for enumeration.
pub const ENUMERATION_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("enumerating q^{degree} = {size} polynomials exceeds the bound {bound}")]
    DegreeTooLarge { degree: u32, size: u64, bound: u64 },
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("polynomial is not monic")]
    NotMonic,
}

/// A polynomial over `F_q`, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `T`.
    pub fn t() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> u32 {
        self.coeffs.len().saturating_sub(1) as u32
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
}

/// Polynomial arithmetic bound to one field.
#[derive(Debug, Clone)]
pub struct PolyRing {
    field: FieldRef,
}

impl PolyRing {
    pub fn new(field: &FieldRef) -> Self {
        PolyRing { field: field.clone() }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|i| self.field.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|i| self.field.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn scale(&self, a: &Poly, c: u32) -> Poly {
        Poly::new(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut out = vec![0u32; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| self.mul(&acc, a))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Poly>) -> Poly {
        items.into_iter().fold(Poly::one(), |acc, p| self.mul(&acc, p))
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let mut r = a.coeffs.clone();
        let db = b.coeffs.len() - 1;
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let inv = f.inv(b.lead()).unwrap();
        let mut q = vec![0u32; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c == 0 {
                continue;
            }
            q[k - db] = c;
            for (j, &bc) in b.coeffs.iter().enumerate() {
                r[k - db + j] = f.sub(r[k - db + j], f.mul(c, bc));
            }
        }
        r.truncate(db);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    /// Exact division, panicking if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.divrem(a, b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, b: &Poly, a: &Poly) -> bool {
        self.rem(a, b).is_zero()
    }

    /// Leading coefficient and the monic associate.
    pub fn make_monic(&self, a: &Poly) -> (u32, Poly) {
        let lc = a.lead();
        if lc == 0 || lc == 1 {
            return (lc, a.clone());
        }
        (lc, self.scale(a, self.field.inv(lc).unwrap()))
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.make_monic(&x).1
    }

    pub fn coprime(&self, a: &Poly, b: &Poly) -> bool {
        self.gcd(a, b).is_one()
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        Poly::new(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.field.mul(c, self.field.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly, x: u32) -> u32 {
        a.coeffs.iter().rev().fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// `lc(g)^{deg f} Π_{g(β)=0} f(β)`, so that `Res(c, g) = c^{deg g}` for scalars.
    pub fn resultant(&self, f: &Poly, g: &Poly) -> u32 {
        let fl = &self.field;
        if g.is_zero() {
            return 0;
        }
        if g.deg() == 0 {
            return if f.is_zero() { 1 } else { fl.pow(g.lead(), f.deg() as i64) };
        }
        if f.is_zero() {
            return 0;
        }
        let r = self.rem(f, g);
        if r.is_zero() {
            return 0;
        }
        let lead = fl.pow(g.lead(), f.deg() as i64 - r.deg() as i64);
        let sign = if (r.deg() as u64 * g.deg() as u64) % 2 == 1 { fl.neg(1) } else { 1 };
        fl.mul(fl.mul(lead, sign), self.resultant(g, &r))
    }

    /// `lc^{−1} (−1)^{d(d−1)/2} Res(f′, f)`.
    pub fn discriminant(&self, f: &Poly) -> u32 {
        let fl = &self.field;
        let d = f.deg() as u64;
        let sign = if (d * d.saturating_sub(1) / 2) % 2 == 1 { fl.neg(1) } else { 1 };
        let r = self.resultant(&self.derivative(f), f);
        fl.mul(fl.mul(sign, r), fl.inv(f.lead()).unwrap())
    }

    /// `(f/g)_χ = χ(Res(f, g))` for monic `g`.
    pub fn residue_symbol(&self, f: &Poly, g: &Poly, chi: &MultChar) -> CycNum {
        chi.value(self.resultant(f, g))
    }

    /// The exponent `k` with `(f/g)_χ = ζ_n^k`, or `None` when `f` and `g` share a factor.
    pub fn residue_exponent(&self, f: &Poly, g: &Poly, chi: &MultChar) -> Option<u32> {
        chi.exponent(self.resultant(f, g))
    }

    pub fn is_squarefree(&self, f: &Poly) -> bool {
        f.deg() == 0 || self.gcd(f, &self.derivative(f)).is_one()
    }

    /// Factorization into monic primes by trial division, primes in ascending order.
    pub fn factor(&self, f: &Poly) -> Vec<(Poly, u32)> {
        let (_, mut rest) = self.make_monic(f);
        let mut out = Vec::new();
        let mut d = 1;
        while 2 * d <= rest.deg() {
            for idx in 0..self.q().pow(d) {
                let cand = self.monic_from_index(d, idx);
                let mut mult = 0;
                loop {
                    let (quo, r) = self.divrem(&rest, &cand);
                    if !r.is_zero() {
                        break;
                    }
                    rest = quo;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
                if 2 * d > rest.deg() {
                    break;
                }
            }
            d += 1;
        }
        if rest.deg() > 0 {
            match out.iter_mut().find(|(p, _)| *p == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        out
    }

    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let fac = self.factor(f);
        fac.len() == 1 && fac[0].1 == 1
    }

    /// The Möbius function of a monic polynomial.
    pub fn mobius(&self, f: &Poly) -> i32 {
        let fac = self.factor(f);
        if fac.iter().any(|&(_, m)| m > 1) {
            0
        } else if fac.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The monic polynomial of degree `d` with lower coefficients given by the
    /// base-`q` digits of `idx`; the top coefficient is the most significant digit.
    pub fn monic_from_index(&self, d: u32, mut idx: u64) -> Poly {
        let q = self.q();
        let mut c = Vec::with_capacity(d as usize + 1);
        for _ in 0..d {
            c.push((idx % q) as u32);
            idx /= q;
        }
        c.push(1);
        Poly { coeffs: c }
    }

    pub fn monic_index(&self, f: &Poly) -> u64 {
        let q = self.q();
        f.coeffs[..f.deg() as usize].iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    /// All monic polynomials of degree `d`, in lexicographic order.
    pub fn enumerate_monic(&self, d: u32) -> Result<impl Iterator<Item = Poly> + '_, PolyError> {
        let size = self.q().checked_pow(d).unwrap_or(u64::MAX);
        if size > ENUMERATION_BOUND {
            return Err(PolyError::DegreeTooLarge { degree: d, size, bound: ENUMERATION_BOUND });
        }
        Ok((0..size).map(move |i| self.monic_from_index(d, i)))
    }

    /// All polynomials of degree below `d` (residues modulo a degree-`d` modulus).
    pub fn residues(&self, d: u32) -> impl Iterator<Item = Poly> + '_ {
        let q = self.q();
        (0..q.pow(d)).map(move |mut idx| {
            let mut c = Vec::with_capacity(d as usize);
            for _ in 0..d {
                c.push((idx % q) as u32);
                idx /= q;
            }
            Poly::new(c)
        })
    }

    /// Parses text like `T^2+3*T+1`; integer coefficients are read mod p and
    /// `g` or `g^k` denotes a power of the field generator.
    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        let err = || PolyError::Parse(text.to_string());
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let fl = &self.field;
        let mut acc = Poly::zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let mut coeff = 1u32;
            let mut power = 0u32;
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(err());
                }
                if let Some(rest) = factor.strip_prefix('T') {
                    let e = match rest.strip_prefix('^') {
                        Some(e) => e.parse::<u32>().map_err(|_| err())?,
                        None if rest.is_empty() => 1,
                        None => return Err(err()),
                    };
                    power += e;
                } else if let Some(rest) = factor.strip_prefix('g') {
                    let e = match rest.strip_prefix('^') {
                        Some(e) => e.parse::<i64>().map_err(|_| err())?,
                        None if rest.is_empty() => 1,
                        None => return Err(err()),
                    };
                    coeff = fl.mul(coeff, fl.pow(fl.generator(), e));
                } else {
                    let v: i64 = factor.parse().map_err(|_| err())?;
                    coeff = fl.mul(coeff, fl.from_int(v));
                }
            }
            if neg {
                coeff = fl.neg(coeff);
            }
            let mut mono = vec![0u32; power as usize + 1];
            mono[power as usize] = coeff;
            acc = self.add(&acc, &Poly::new(mono));
        }
        Ok(acc)
    }

    pub fn parse_monic(&self, text: &str) -> Result<Poly, PolyError> {
        let f = self.parse(text)?;
        if f.is_monic() {
            Ok(f)
        } else {
            Err(PolyError::NotMonic)
        }
    }

    pub fn display(&self, f: &Poly) -> String {
        PolyDisplay { ring: self, poly: f }.to_string()
    }
}

struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        let mut first = true;
        for (i, &c) in self.poly.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = if field.degree() == 1 {
                c.to_string()
            } else {
                format!("g^{}", field.log(c).unwrap())
            };
            match (i, c == 1) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{cs}*T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{cs}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use proptest::prelude::*;

    fn f5() -> PolyRing {
        PolyRing::new(&Field::build(5, 1, None).unwrap())
    }

    /// Resultant as a literal product over roots, for split polynomials.
    fn root_product(r: &PolyRing, f: &Poly, g: &Poly) -> Option<u32> {
        let fl = r.field();
        let roots: Vec<u32> = fl.elements().filter(|&b| r.eval(g, b) == 0).collect();
        let mut count = 0;
        let mut acc = 1;
        for &b in &roots {
            let mut gg = g.clone();
            while r.eval(&gg, b) == 0 && gg.deg() > 0 {
                gg = r.div_exact(&gg, &Poly::new(vec![fl.neg(b), 1]));
                acc = fl.mul(acc, r.eval(f, b));
                count += 1;
            }
        }
        (count == g.deg()).then_some(acc)
    }

    #[test]
    fn resultant_examples() {
        let r = f5();
        let t = Poly::t();
        let t1 = r.parse("T-1").unwrap();
        assert_eq!(r.resultant(&t, &t1), 1);
        assert_eq!(r.resultant(&Poly::constant(3), &r.parse("T^2+1").unwrap()), 4);
        assert_eq!(r.discriminant(&r.parse("T^2+1").unwrap()), 1);
        let xi = MultChar::quadratic(r.field());
        assert_eq!(r.residue_symbol(&t, &r.parse("T-2").unwrap(), &xi), CycNum::from_int(-1));
        assert!(r.residue_symbol(&t, &r.parse("T^2").unwrap(), &xi).is_zero());
        assert!(r.residue_symbol(&r.parse("T^3+T").unwrap(), &Poly::one(), &xi).is_one());
    }

    #[test]
    fn factorization_and_enumeration() {
        let r = f5();
        let f = r.parse("T^2-1").unwrap();
        assert_eq!(r.factor(&f), vec![(r.parse("T+1").unwrap(), 1), (r.parse("T+4").unwrap(), 1)]);
        assert!(r.is_irreducible(&r.parse("T^2+2").unwrap()));
        assert_eq!(r.enumerate_monic(3).unwrap().count(), 125);
        let sq = r.parse("T^3+2*T^2+T").unwrap();
        assert_eq!(r.factor(&sq), vec![(Poly::t(), 1), (r.parse("T+1").unwrap(), 2)]);
        assert!(!r.is_squarefree(&sq));
        assert!(matches!(r.enumerate_monic(11), Err(PolyError::DegreeTooLarge { .. })));
        let idx = r.monic_index(&sq);
        assert_eq!(r.monic_from_index(3, idx), sq);
    }

    #[test]
    fn parse_and_display() {
        let r = f5();
        let f = r.parse("T^2 + 3*T - 1").unwrap();
        assert_eq!(f.coeffs(), &[4, 3, 1]);
        assert_eq!(r.display(&f), "T^2+3*T+4");
        assert!(r.parse("T^^2").is_err());
        let r9 = PolyRing::new(&Field::build(3, 2, None).unwrap());
        let g = r9.parse("T+g^2").unwrap();
        assert_eq!(r9.display(&g), "T+g^2");
    }

    proptest! {
        #[test]
        fn resultant_matches_root_product(fi in 0u64..125, gi in 0u64..25) {
            let r = f5();
            let f = r.monic_from_index(3, fi);
            let g = r.monic_from_index(2, gi);
            if let Some(expect) = root_product(&r, &f, &g) {
                prop_assert_eq!(r.resultant(&f, &g), expect);
            }
        }

        #[test]
        fn resultant_symmetry(fi in 0u64..625, gi in 0u64..125) {
            let r = f5();
            let f = r.monic_from_index(4, fi);
            let g = r.monic_from_index(3, gi);
            let fl = r.field();
            let sign = if (4 * 3) % 2 == 1 { fl.neg(1) } else { 1 };
            prop_assert_eq!(r.resultant(&f, &g), fl.mul(sign, r.resultant(&g, &f)));
        }

        #[test]
        fn factorization_multiplies_back(fi in 0u64..3125) {
            let r = f5();
            let f = r.monic_from_index(5, fi);
            let fac = r.factor(&f);
            let mut acc = Poly::one();
            for (p, m) in &fac {
                prop_assert!(r.is_irreducible(p));
                acc = r.mul(&acc, &r.pow(p, *m));
            }
            prop_assert_eq!(acc, f);
        }
    }
}
