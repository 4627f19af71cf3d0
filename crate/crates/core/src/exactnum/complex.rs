//! Floating complex values with an explicit error radius, used to cross-check
//! exact results.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub eps: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexApprox { re, im, eps: 0.0 }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn add(&self, o: &Self) -> Self {
        let re = self.re + o.re;
        let im = self.im + o.im;
        let round = (re.abs() + im.abs()) * f64::EPSILON;
        ComplexApprox { re, im, eps: self.eps + o.eps + round }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re * o.re - self.im * o.im;
        let im = self.re * o.im + self.im * o.re;
        let eps = self.eps * (o.abs() + o.eps) + o.eps * self.abs()
            + 4.0 * f64::EPSILON * (self.abs() * o.abs());
        ComplexApprox { re, im, eps }
    }

    pub fn close_to(&self, o: &Self) -> bool {
        (self.re - o.re).abs() <= self.eps + o.eps && (self.im - o.im).abs() <= self.eps + o.eps
    }
}

fn to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() { f64::MIN } else { f64::MAX })
}

pub(super) fn evaluate(m: u32, num: &[BigInt], den: &BigInt) -> ComplexApprox {
    let d = to_f64(den);
    let mut re = 0.0;
    let mut im = 0.0;
    let mut mass = 0.0;
    for (k, c) in num.iter().enumerate() {
        let c = to_f64(c) / d;
        let ang = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        re += c * ang.cos();
        im += c * ang.sin();
        mass += c.abs();
    }
    // each term carries a few ulps from the trig evaluation and the rational conversion
    let eps = mass * (8.0 * f64::EPSILON) * (num.len() as f64 + 1.0) + f64::MIN_POSITIVE;
    ComplexApprox { re, im, eps }
}
