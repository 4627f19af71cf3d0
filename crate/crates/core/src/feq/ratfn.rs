//! Laurent polynomials and rational functions in one variable over `CycNum`.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::CycNum;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, CycNum>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})x^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(CycNum::one(), 0)
    }

    pub fn constant(c: CycNum) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: CycNum, e: i64) -> Self {
        let mut l = Self::zero();
        l.add_term(e, &c);
        l
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, CycNum)>>(it: I) -> Self {
        let mut l = Self::zero();
        for (e, c) in it {
            l.add_term(e, &c);
        }
        l
    }

    pub fn add_term(&mut self, e: i64, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(CycNum::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycNum)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> CycNum {
        self.terms.get(&e).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }

    pub fn scale(&self, s: &CycNum) -> Laurent {
        if s.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect() }
    }

    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, &(c1 * c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Laurent {
        (0..k).fold(Laurent::one(), |acc, _| acc.mul(self))
    }

    /// `x ↦ c·x`.
    pub fn subst_scale(&self, c: &CycNum) -> Laurent {
        Laurent::from_terms(self.terms().map(|(e, v)| (e, v * &c.pow(e).expect("nonzero scale"))))
    }

    /// `x ↦ λ/x`.
    pub fn subst_inv(&self, lambda: &CycNum) -> Laurent {
        Laurent::from_terms(self.terms().map(|(e, v)| (-e, v * &lambda.pow(e).expect("nonzero λ"))))
    }

    /// `x ↦ x^k` for `k ≥ 1`.
    pub fn subst_power(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, c)| (e * k, c.clone())).collect() }
    }

    /// Terms whose exponent is `≡ k mod n`.
    pub fn project(&self, k: i64, n: i64) -> Laurent {
        Laurent {
            terms: self.terms.iter().filter(|(&e, _)| (e - k).rem_euclid(n) == 0).map(|(&e, c)| (e, c.clone())).collect(),
        }
    }
}

/// `num/den` with `den ≠ 0`. Equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Laurent,
    pub den: Laurent,
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl From<Laurent> for RatFn {
    fn from(l: Laurent) -> Self {
        RatFn { num: l, den: Laurent::one() }
    }
}

impl RatFn {
    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }
    }

    pub fn zero() -> Self {
        Laurent::zero().into()
    }

    pub fn one() -> Self {
        Laurent::one().into()
    }

    pub fn constant(c: CycNum) -> Self {
        Laurent::constant(c).into()
    }

    pub fn monomial(c: CycNum, e: i64) -> Self {
        Laurent::monomial(c, e).into()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(self.num.add(&o.num), self.den.clone());
        }
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn::new(self.num.neg(), self.den.clone())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &CycNum) -> RatFn {
        RatFn::new(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> RatFn {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn subst_scale(&self, c: &CycNum) -> RatFn {
        RatFn::new(self.num.subst_scale(c), self.den.subst_scale(c))
    }

    pub fn subst_inv(&self, lambda: &CycNum) -> RatFn {
        RatFn::new(self.num.subst_inv(lambda), self.den.subst_inv(lambda))
    }

    pub fn subst_power(&self, k: i64) -> RatFn {
        RatFn::new(self.num.subst_power(k), self.den.subst_power(k))
    }

    /// Rewrites the fraction so that the denominator only has exponents in one
    /// class mod `n`; then projection acts on the numerator alone.
    fn with_periodic_den(&self, n: i64) -> RatFn {
        let lo = self.den.min_deg().unwrap();
        if self.den.terms().all(|(e, _)| (e - lo).rem_euclid(n) == 0) {
            return self.clone();
        }
        if self.den.len() == 2 {
            // α x^a (1 − c x^m) → α x^a (1 − c^{L/m} x^L)
            let hi = self.den.max_deg().unwrap();
            let m = hi - lo;
            let alpha = self.den.coeff(lo);
            let c = -(&self.den.coeff(hi) / &alpha);
            let l = num_integer::lcm(m, n);
            let mut mult = Laurent::zero();
            for t in 0..l / m {
                mult.add_term(t * m, &c.pow(t).unwrap());
            }
            return RatFn::new(self.num.mul(&mult), self.den.mul(&mult));
        }
        // norm over x ↦ ζ_n^t x
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for t in 1..n {
            let z = CycNum::root_of_unity(n as u32, t);
            let conj = self.den.subst_scale(&z);
            num = num.mul(&conj);
            den = den.mul(&conj);
        }
        RatFn::new(num, den)
    }

    /// `S^{k,n}`: the part whose exponents are `≡ k mod n`.
    pub fn project(&self, k: i64, n: i64) -> RatFn {
        if n == 1 {
            return self.clone();
        }
        let r = self.with_periodic_den(n);
        let lo = r.den.min_deg().unwrap();
        RatFn::new(r.num.project(k + lo, n), r.den)
    }

    /// Power-series coefficients of `x^e` for `e ≤ upto`, starting at the
    /// lowest exponent present. Requires nothing of the denominator beyond
    /// being nonzero: expansion is around `x = 0`.
    pub fn series(&self, upto: i64) -> BTreeMap<i64, CycNum> {
        let mut out = BTreeMap::new();
        if self.num.is_zero() {
            return out;
        }
        let d0 = self.den.min_deg().unwrap();
        let lead_inv = self.den.coeff(d0).inv().unwrap();
        let start = self.num.min_deg().unwrap() - d0;
        // coefficients c_e with num = den · Σ c_e x^e
        let mut coeffs: Vec<CycNum> = Vec::new();
        for e in start..=upto {
            let mut acc = self.num.coeff(e + d0);
            for (de, dc) in self.den.terms() {
                if de == d0 {
                    continue;
                }
                let j = e - (de - d0);
                if j >= start {
                    acc -= &(dc * &coeffs[(j - start) as usize]);
                }
            }
            let c = &acc * &lead_inv;
            if !c.is_zero() {
                out.insert(e, c.clone());
            }
            coeffs.push(c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> RatFn {
        // 1/(1−x)
        RatFn::new(Laurent::one(), Laurent::from_terms([(0, CycNum::one()), (1, CycNum::from_int(-1))]))
    }

    #[test]
    fn parity_split_of_geometric_series() {
        let even = geom().project(0, 2);
        let expect = RatFn::new(Laurent::one(), Laurent::from_terms([(0, CycNum::one()), (2, CycNum::from_int(-1))]));
        assert_eq!(even, expect);
    }

    #[test]
    fn projections_partition_and_shift() {
        let f = RatFn::new(
            Laurent::from_terms([(0, CycNum::from_int(2)), (1, CycNum::from_int(3)), (-1, CycNum::one())]),
            Laurent::from_terms([(0, CycNum::one()), (1, CycNum::from_int(-5)), (2, CycNum::from_int(7))]),
        );
        let n = 4;
        let total = (0..n).fold(RatFn::zero(), |acc, k| acc.add(&f.project(k, n)));
        assert_eq!(total, f);
        let shifted = f.mul(&RatFn::monomial(CycNum::one(), 3));
        for k in 0..n {
            assert_eq!(shifted.project(k, n), f.project(k - 3, n).mul(&RatFn::monomial(CycNum::one(), 3)));
        }
        // series agree with projection
        let s = f.series(12);
        for k in 0..n {
            let sk = f.project(k, n).series(12);
            for (e, c) in &s {
                if (e - k).rem_euclid(n) == 0 {
                    assert_eq!(sk.get(e), Some(c));
                }
            }
        }
    }

    #[test]
    fn inversion_substitution_is_involutive() {
        let lam = CycNum::from_frac(1, 5);
        let f = geom();
        assert_eq!(f.subst_inv(&lam).subst_inv(&lam), f);
    }
}
