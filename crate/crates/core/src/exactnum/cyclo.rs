//! Cached per-conductor data: the cyclotomic polynomial and the power-basis
//! image of every root of unity.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug)]
pub(crate) struct CycloData {
    pub phi: usize,
    /// Coefficients of Φ_m, low degree first, monic.
    pub poly: Vec<i64>,
    /// `roots[k]` holds ζ_m^k reduced to the power basis, for k in 0..m.
    pub roots: Vec<Vec<i64>>,
    /// Units of Z/m, used for Galois conjugation.
    pub units: Vec<u32>,
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<CycloData>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

pub(crate) fn data(m: u32) -> Arc<CycloData> {
    if let Some(d) = registry().read().expect("cyclotomic cache poisoned").get(&m) {
        return d.clone();
    }
    let built = Arc::new(build(m));
    registry()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(m)
        .or_insert(built)
        .clone()
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Integer coefficients of Φ_m via repeated exact division of x^m − 1.
pub(crate) fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = divide_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn];
        quo[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

fn build(m: u32) -> CycloData {
    let poly = cyclotomic_poly(m);
    let phi = poly.len() - 1;
    let mut roots = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        roots.push(cur.clone());
        // multiply by x, then fold the x^phi term back with Φ_m
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..phi {
                cur[j] = cur[j]
                    .checked_sub(top.checked_mul(poly[j]).expect("root table overflow"))
                    .expect("root table overflow");
            }
        }
    }
    let units = (1..=m.max(1)).filter(|&t| gcd(t as u64, m as u64) == 1).map(|t| t % m.max(1)).collect();
    CycloData { phi, poly, roots, units }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_table_wraps() {
        let d = data(12);
        assert_eq!(d.phi, 4);
        assert_eq!(d.units, vec![1, 5, 7, 11]);
        // ζ^6 = −1
        assert_eq!(d.roots[6], vec![-1, 0, 0, 0]);
    }
}
