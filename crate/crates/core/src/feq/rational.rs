//! Multivariate rational candidates and their comparison with tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FeqError;
use crate::exactnum::CycNum;
use crate::mdcoeff::{exponent_tuples, CoeffTable, Entry};

/// A rational function `num/den` in `r` variables; both sides are polynomials
/// given as (exponent vector, coefficient) pairs. JSON: `{"num": [[[e…], c]…], "den": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiRational {
    pub num: Vec<(Vec<u32>, CycNum)>,
    pub den: Vec<(Vec<u32>, CycNum)>,
}

fn collect(terms: &[(Vec<u32>, CycNum)]) -> BTreeMap<Vec<u32>, CycNum> {
    let mut out: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
    for (e, c) in terms {
        *out.entry(e.clone()).or_insert_with(CycNum::zero) += c;
    }
    out
}

impl MultiRational {
    pub fn rank(&self) -> usize {
        self.num.first().or(self.den.first()).map_or(0, |(e, _)| e.len())
    }

    /// Power-series coefficients for every exponent of total degree `≤ bound`.
    pub fn expand(&self, bound: u32) -> Result<BTreeMap<Vec<u32>, CycNum>, FeqError> {
        let r = self.rank();
        let num = collect(&self.num);
        let den = collect(&self.den);
        let zero = vec![0u32; r];
        let c0 = den.get(&zero).filter(|c| !c.is_zero()).ok_or_else(|| {
            FeqError::Invalid("candidate denominator needs an invertible constant term".into())
        })?;
        let c0_inv = c0.inv()?;
        let mut out: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
        // tuples come sorted by total degree, so every smaller exponent is ready
        for d in exponent_tuples(r, bound) {
            let mut acc = num.get(&d).cloned().unwrap_or_else(CycNum::zero);
            for (e, c) in &den {
                if *e == zero || e.iter().zip(&d).any(|(a, b)| a > b) {
                    continue;
                }
                let rest: Vec<u32> = d.iter().zip(e).map(|(a, b)| a - b).collect();
                if let Some(v) = out.get(&rest) {
                    acc -= &(c * v);
                }
            }
            out.insert(d, &acc * &c0_inv);
        }
        Ok(out)
    }
}

/// True iff the candidate's expansion matches every known table entry of total
/// degree `≤ bound`.
pub fn rational_verify(table: &CoeffTable, candidate: &MultiRational, bound: u32) -> Result<bool, FeqError> {
    let series = candidate.expand(bound)?;
    for (d, e) in table.iter() {
        if d.iter().sum::<u32>() > bound {
            continue;
        }
        if let Entry::Known(v) = e {
            if series.get(d) != Some(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(1 − q²xy) / ((1 − qx)(1 − qy)(1 − q^{n+1} x^n y^n))`.
pub fn chinta_mohler(q: u64, n: u32) -> MultiRational {
    let q = q as i64;
    let c = |v: i64| CycNum::from_int(v);
    let qn1 = CycNum::from_int(q).pow(n as i64 + 1).unwrap();
    let mut den: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
    // (1 − qx)(1 − qy) = 1 − qx − qy + q²xy, times (1 − q^{n+1}x^n y^n)
    let first = [(vec![0, 0], c(1)), (vec![1, 0], c(-q)), (vec![0, 1], c(-q)), (vec![1, 1], c(q * q))];
    let second = [(vec![0u32, 0u32], c(1)), (vec![n, n], -qn1)];
    for (e1, c1) in &first {
        for (e2, c2) in &second {
            let e = vec![e1[0] + e2[0], e1[1] + e2[1]];
            *den.entry(e).or_insert_with(CycNum::zero) += &(c1 * c2);
        }
    }
    MultiRational { num: vec![(vec![0, 0], c(1)), (vec![1, 1], c(-q * q))], den: den.into_iter().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::mdcoeff::{series_truncate, MdsConfig, SeriesMode};

    #[test]
    fn zeta_candidate() {
        let c = MdsConfig::new(&Field::build(5, 1, None).unwrap(), 4, vec![vec![0]]).unwrap();
        let t = series_truncate(&c, SeriesMode::Global, 5, None).unwrap();
        let cand = MultiRational { num: vec![(vec![0], CycNum::one())], den: vec![(vec![0], CycNum::one()), (vec![1], CycNum::from_int(-5))] };
        assert!(rational_verify(&t, &cand, 5).unwrap());
        let mut bad = cand.clone();
        bad.num.push((vec![3], CycNum::one()));
        assert!(!rational_verify(&t, &bad, 5).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let cm = chinta_mohler(5, 4);
        let s = serde_json::to_string(&cm).unwrap();
        let back: MultiRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back.expand(6).unwrap(), cm.expand(6).unwrap());
    }
}
