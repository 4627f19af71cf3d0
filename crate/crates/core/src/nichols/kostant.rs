//! Cohomology of the nilradical of a simple Lie algebra, graded by the root
//! lattice: a one-dimensional piece at each `w(ρ) − ρ` in degree `length(w)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::NicholsError;
use crate::groupoid::{gram_matrix, two_rho, weyl_group, CartanType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitElement {
    pub word: Vec<usize>,
    pub length: usize,
    /// `w(ρ) − ρ` in simple-root coordinates.
    pub shift: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylOrbitDatum {
    pub root_type: String,
    pub rank: usize,
    /// `2ρ`, kept doubled so the coordinates are integers.
    pub two_rho: Vec<i64>,
    pub elements: Vec<OrbitElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KostantReport {
    pub datum: WeylOrbitDatum,
    /// `(k, β) ↦ dim Gr^β H^k`, nonzero entries only.
    pub pattern: BTreeMap<(usize, Vec<i64>), u32>,
    /// Number of reflection isomorphisms compared.
    pub reflection_checks: usize,
    pub reflection_failures: Vec<String>,
}

impl KostantReport {
    pub fn dim(&self, k: usize, beta: &[i64]) -> u32 {
        self.pattern.get(&(k, beta.to_vec())).copied().unwrap_or(0)
    }

    pub fn holds(&self) -> bool {
        self.reflection_failures.is_empty()
    }

    /// Counts of nonzero pieces in each degree.
    pub fn degree_counts(&self) -> Vec<usize> {
        let top = self.datum.elements.iter().map(|e| e.length).max().unwrap_or(0);
        (0..=top).map(|k| self.pattern.keys().filter(|(kk, _)| *kk == k).count()).collect()
    }
}

/// Radius of the box of weights on which the reflection isomorphisms are tested.
const BOX: i64 = 6;

pub fn kostant_oracle(ty: CartanType, rank: usize) -> Result<KostantReport, NicholsError> {
    if rank > 4 {
        return Err(NicholsError::BadParameters(format!("rank {rank} is above 4")));
    }
    let gram = gram_matrix(ty, rank)?;
    let group = weyl_group(ty, rank)?;
    let tr = two_rho(ty, rank)?;
    let elements: Vec<OrbitElement> = group
        .iter()
        .map(|w| {
            let img = w.apply(&tr);
            OrbitElement { word: w.word.clone(), length: w.length(), shift: img.iter().zip(&tr).map(|(a, b)| (a - b) / 2).collect() }
        })
        .collect();
    let mut pattern = BTreeMap::new();
    for e in &elements {
        *pattern.entry((e.length, e.shift.clone())).or_insert(0) += 1;
    }
    let datum = WeylOrbitDatum { root_type: ty.to_string(), rank, two_rho: tr, elements };
    let mut report = KostantReport { datum, pattern, reflection_checks: 0, reflection_failures: Vec::new() };
    let (checks, failures) = check_reflections(&report, &gram);
    report.reflection_checks = checks;
    report.reflection_failures = failures;
    Ok(report)
}

/// Compares dimensions across the shifted reflections on the box `[−6, 6]^r`.
fn check_reflections(report: &KostantReport, gram: &[Vec<i64>]) -> (usize, Vec<String>) {
    let rank = gram.len();
    let top = report.datum.elements.iter().map(|e| e.length).max().unwrap_or(0);
    let pair = |a: &[i64], i: usize| -> i64 { (0..rank).map(|j| a[j] * gram[j][i]).sum() };
    let mut betas: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        betas = betas.into_iter().flat_map(|p| (-BOX..=BOX).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    let mut failures = Vec::new();
    let mut checks = 0;
    for beta in &betas {
        for i in 0..rank {
            let ip = pair(beta, i);
            let norm = gram[i][i];
            // the shifted reflection β ↦ w_i(β) − α_i
            let mut moved = beta.clone();
            moved[i] -= 2 * ip / norm + 1;
            for k in 0..=top + 1 {
                if ip > -norm {
                    checks += 1;
                    if report.dim(k, beta) != report.dim(k + 1, &moved) {
                        failures.push(format!("β={beta:?} i={i} k={k}: H^k vs H^(k+1)"));
                    }
                }
                if ip < 0 {
                    checks += 1;
                    if report.dim(k + 1, beta) != report.dim(k, &moved) {
                        failures.push(format!("β={beta:?} i={i} k={k}: H^(k+1) vs H^k"));
                    }
                }
                if -norm < ip && ip < 0 {
                    checks += 1;
                    if report.dim(k, beta) != 0 || report.dim(k + 1, &moved) != 0 {
                        failures.push(format!("β={beta:?} i={i} k={k}: expected vanishing"));
                    }
                }
            }
        }
    }
    (checks, failures)
}
