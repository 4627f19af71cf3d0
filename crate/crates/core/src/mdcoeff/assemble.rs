//! Assembly of arbitrary coefficients from prime-power blocks by twisted
//! multiplicativity.

use std::collections::{BTreeMap, HashMap};

use super::{local_block, CoeffError, MdsConfig};
use crate::exactnum::CycNum;
use crate::polyring::Poly;

/// Prime-power blocks with no closed form, supplied from elsewhere (the
/// functional-equation solver). Keyed by `(deg π, exponents)`, each value is
/// `a(π^{d⃗}) / (π′/π)^{Σ d_i M_ii}`, which depends on `π` only through its degree.
#[derive(Debug, Clone, Default)]
pub struct BlockValues {
    values: HashMap<(u32, Vec<u32>), CycNum>,
}

impl BlockValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: u32, exponents: Vec<u32>, value: CycNum) {
        self.values.insert((degree, exponents), value);
    }

    pub fn get(&self, degree: u32, exponents: &[u32]) -> Option<&CycNum> {
        self.values.get(&(degree, exponents.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &CycNum)> {
        self.values.iter()
    }
}

/// `(π′/π)^{Σ d_i M_ii}`.
pub fn root_factor(cfg: &MdsConfig, pi: &Poly, d: &[u32]) -> CycNum {
    let e: i64 = d.iter().enumerate().map(|(i, &di)| di as i64 * cfg.matrix()[i][i] as i64).sum();
    cfg.symbol_pow(&cfg.ring().derivative(pi), pi, e)
}

/// `a(π^{d⃗})` from a closed form or, failing that, from supplied block values.
pub fn block_value(cfg: &MdsConfig, pi: &Poly, d: &[u32], extra: Option<&BlockValues>) -> Result<CycNum, CoeffError> {
    if let Some(v) = local_block(cfg, pi, d)? {
        return Ok(v);
    }
    match extra.and_then(|b| b.get(pi.deg(), d)) {
        Some(w) => Ok(w * root_factor(cfg, pi, d)),
        None => Err(CoeffError::UnknownLocalBlock { prime: cfg.ring().display(pi), exponents: d.to_vec() }),
    }
}

/// Exponent `k` with the twisted-multiplicativity cross factor equal to `ζ_n^k`
/// for the coprime blocks `π^{d⃗}` and `ϖ^{e⃗}`.
pub(crate) fn cross_exponent(m: &[Vec<u32>], d: &[u32], e: &[u32], pi_over_varpi: u32, varpi_over_pi: u32) -> i64 {
    let r = m.len();
    let mut acc = 0i64;
    for i in 0..r {
        for j in i..r {
            let mij = m[i][j] as i64;
            if mij == 0 {
                continue;
            }
            acc += mij * (d[i] as i64 * e[j] as i64 * pi_over_varpi as i64 + e[i] as i64 * d[j] as i64 * varpi_over_pi as i64);
        }
    }
    acc
}

/// `a(f_1, …, f_r)` as a product of prime-power blocks and residue-symbol cross terms.
pub fn coeff_assemble(cfg: &MdsConfig, fs: &[Poly], extra: Option<&BlockValues>) -> Result<CycNum, CoeffError> {
    let r = cfg.rank();
    assert_eq!(fs.len(), r, "one polynomial per variable");
    let ring = cfg.ring();
    let mut blocks: BTreeMap<Poly, Vec<u32>> = BTreeMap::new();
    for (i, f) in fs.iter().enumerate() {
        for (pi, mult) in ring.factor(f) {
            blocks.entry(pi).or_insert_with(|| vec![0; r])[i] = mult;
        }
    }
    let list: Vec<(Poly, Vec<u32>)> = blocks.into_iter().collect();
    let mut value = CycNum::one();
    for (pi, d) in &list {
        let b = block_value(cfg, pi, d, extra)?;
        if b.is_zero() {
            return Ok(CycNum::zero());
        }
        value *= &b;
    }
    let mut exp = 0i64;
    for a in 0..list.len() {
        for b in a + 1..list.len() {
            let ab = cfg.res_exp(&list[a].0, &list[b].0).expect("distinct primes are coprime");
            let ba = cfg.res_exp(&list[b].0, &list[a].0).expect("distinct primes are coprime");
            exp += cross_exponent(cfg.matrix(), &list[a].1, &list[b].1, ab, ba);
        }
    }
    Ok(value * cfg.zeta(exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::mdcoeff::{coeff_general_lastvar, coeff_squarefree};

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn assembly_matches_squarefree_formula() {
        for m in [vec![vec![1, 2], vec![2, 3]], vec![vec![0, 1], vec![1, 0]], vec![vec![3, 1], vec![1, 2]]] {
            let c = cfg(4, m);
            let r = c.ring();
            for d1 in 0..=2 {
                for d2 in 0..=(4 - d1).min(2) {
                    for f1 in r.enumerate_monic(d1).unwrap() {
                        for f2 in r.enumerate_monic(d2).unwrap() {
                            let fs = [f1.clone(), f2.clone()];
                            if let Ok(v) = coeff_squarefree(&c, &fs) {
                                assert_eq!(coeff_assemble(&c, &fs, None).unwrap(), v);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn assembly_matches_last_variable_formula() {
        let c = cfg(4, vec![vec![1, 2], vec![2, 3]]);
        let r = c.ring();
        for f1 in r.enumerate_monic(1).unwrap() {
            for f2 in r.enumerate_monic(3).unwrap() {
                let fs = [f1.clone(), f2];
                assert_eq!(coeff_assemble(&c, &fs, None).unwrap(), coeff_general_lastvar(&c, &fs).unwrap());
            }
        }
    }

    #[test]
    fn unknown_blocks_are_reported() {
        let c = cfg(4, vec![vec![1, 2, 0], vec![2, 1, 2], vec![0, 2, 3]]);
        let t2 = c.ring().parse("T^2").unwrap();
        let err = coeff_assemble(&c, &[t2.clone(), t2, Poly::t()], None).unwrap_err();
        assert!(matches!(err, CoeffError::UnknownLocalBlock { .. }));
    }
}
