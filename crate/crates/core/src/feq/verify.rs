//! Checking a functional equation on truncated tables, one slice at a time.

use super::ratfn::{Laurent, RatFn};
use super::{slice_equation, FeKind, FeqError, SliceEquation};
use crate::exactnum::CycNum;
use crate::mdcoeff::{exponent_tuples, CoeffTable, MdsConfig, SeriesMode};

#[derive(Debug, Clone, PartialEq)]
pub enum SliceStatus {
    /// Both sides agree as rational functions.
    Zero,
    /// Class `k` of the two sides differs; the numerator of the difference.
    Residual { class: usize, numerator: Laurent },
    /// The slice's known coefficients contradict the expected denominator.
    NotRational { degree: i64 },
    /// Not enough known coefficients to reconstruct the slice.
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct FeReport {
    pub kind: FeKind,
    pub index: usize,
    /// One entry per slice, keyed by the fixed exponents (the `i`-th is 0).
    pub slices: Vec<(Vec<u32>, SliceStatus)>,
}

impl FeReport {
    pub fn checked(&self) -> usize {
        self.slices.iter().filter(|(_, s)| !matches!(s, SliceStatus::Undetermined)).count()
    }

    pub fn failures(&self) -> Vec<&(Vec<u32>, SliceStatus)> {
        self.slices
            .iter()
            .filter(|(_, s)| matches!(s, SliceStatus::Residual { .. } | SliceStatus::NotRational { .. }))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.checked() > 0 && self.failures().is_empty()
    }

    pub fn undetermined(&self) -> Vec<&Vec<u32>> {
        self.slices.iter().filter(|(_, s)| matches!(s, SliceStatus::Undetermined)).map(|(d, _)| d).collect()
    }
}

/// Known coefficients of the slice through `others`, in order of the free exponent.
pub(crate) fn slice_values(table: &CoeffTable, i: usize, others: &[u32]) -> Option<Vec<CycNum>> {
    let used: u32 = others.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).sum();
    let mut out = Vec::new();
    for t in 0..=table.bound().saturating_sub(used) {
        let mut d = others.to_vec();
        d[i] = t;
        out.push(table.known(&d)?.clone());
    }
    Some(out)
}

/// `N/(1 − c x^m)` from the known coefficients, if they determine it.
pub(crate) fn reconstruct(values: &[CycNum], den: &(CycNum, i64), bound: i64) -> Result<RatFn, SliceStatus> {
    let (c, m) = den;
    let len = values.len() as i64;
    if len <= bound {
        return Err(SliceStatus::Undetermined);
    }
    let mut num = Laurent::zero();
    for t in 0..len {
        let mut v = values[t as usize].clone();
        if t >= *m {
            v -= &(c * &values[(t - m) as usize]);
        }
        if t <= bound {
            num.add_term(t, &v);
        } else if !v.is_zero() {
            return Err(SliceStatus::NotRational { degree: t });
        }
    }
    Ok(RatFn::new(num, Laurent::from_terms([(0, CycNum::one()), (*m, -c)])))
}

pub(crate) fn check_slice(eq: &SliceEquation, n: i64, left: &RatFn, right: &RatFn) -> SliceStatus {
    let rhs_parts: Vec<RatFn> = (0..n).map(|l| right.project(l, n).subst_inv(&eq.lambda)).collect();
    for k in 0..n {
        let lhs = left.project(k, n);
        let mut rhs = RatFn::zero();
        for (l, part) in rhs_parts.iter().enumerate() {
            let a = &eq.matrix[k as usize][l];
            if a.is_zero() || part.is_zero() {
                continue;
            }
            rhs = rhs.add(&a.mul(part));
        }
        if lhs != rhs {
            let diff = lhs.sub(&rhs);
            return SliceStatus::Residual { class: k as usize, numerator: diff.num };
        }
    }
    SliceStatus::Zero
}

/// Checks the `kind` equation at index `i` relating `table` (built for `cfg`)
/// to `partner` (built for the matrix on the right of the equation, which is
/// `cfg`'s own matrix for Kubota equations).
pub fn fe_verify(
    cfg: &MdsConfig,
    table: &CoeffTable,
    partner: &CoeffTable,
    kind: FeKind,
    i: usize,
) -> Result<FeReport, FeqError> {
    let r = cfg.rank();
    let local = match table.mode() {
        SeriesMode::Global => None,
        SeriesMode::Local(p) => Some(p.clone()),
    };
    let n = cfg.n() as i64;
    let mut slices = Vec::new();
    for d in exponent_tuples(r, table.bound()) {
        if d[i] != 0 {
            continue;
        }
        let eq = slice_equation(cfg, kind, i, &d, local.as_ref())?;
        let status = match (slice_values(table, i, &d), slice_values(partner, i, &d)) {
            (Some(a), Some(b)) => {
                match (
                    reconstruct(&a, &eq.denominator, eq.numerator_bound),
                    reconstruct(&b, &eq.denominator, eq.numerator_bound),
                ) {
                    (Ok(left), Ok(right)) => check_slice(&eq, n, &left, &right),
                    (Err(s), _) | (_, Err(s)) => s,
                }
            }
            _ => SliceStatus::Undetermined,
        };
        slices.push((d, status));
    }
    Ok(FeReport { kind, index: i, slices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::mdcoeff::series_truncate;
    use crate::polyring::Poly;

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn zeta_function_satisfies_both_kinds() {
        let c = cfg(4, vec![vec![0]]);
        let t = series_truncate(&c, SeriesMode::Global, 6, None).unwrap();
        let rep = fe_verify(&c, &t, &t, FeKind::Dirichlet, 0).unwrap();
        assert!(rep.is_zero(), "{:?}", rep.failures());
        let rep = fe_verify(&c, &t, &t, FeKind::Kubota, 0).unwrap();
        assert!(rep.is_zero(), "{:?}", rep.failures());
    }

    #[test]
    fn kubota_rank_one() {
        let c = cfg(4, vec![vec![3]]);
        let t = series_truncate(&c, SeriesMode::Global, 6, None).unwrap();
        let rep = fe_verify(&c, &t, &t, FeKind::Kubota, 0).unwrap();
        assert!(rep.is_zero(), "{:?}", rep.failures());
        for pi in [Poly::new(vec![0, 1]), Poly::new(vec![2, 0, 1])] {
            let t = series_truncate(&c, SeriesMode::Local(pi), 8, None).unwrap();
            let rep = fe_verify(&c, &t, &t, FeKind::Kubota, 0).unwrap();
            assert!(rep.is_zero(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn perturbed_table_fails() {
        let c = cfg(4, vec![vec![3]]);
        let mut t = series_truncate(&c, SeriesMode::Global, 6, None).unwrap();
        let v = t.known(&[2]).unwrap() + &CycNum::one();
        t.set(vec![2], crate::mdcoeff::Entry::Known(v));
        let rep = fe_verify(&c, &t, &t, FeKind::Kubota, 0).unwrap();
        assert!(!rep.failures().is_empty());
    }

    #[test]
    fn dirichlet_pair_both_indices() {
        let c = cfg(4, vec![vec![0, 1], vec![1, 0]]);
        let modes = [
            (SeriesMode::Global, 5),
            (SeriesMode::Local(Poly::new(vec![0, 1])), 8),
            (SeriesMode::Local(Poly::new(vec![2, 0, 1])), 8),
        ];
        for (mode, bound) in modes {
            let t = series_truncate(&c, mode.clone(), bound, None).unwrap();
            for i in 0..2 {
                let pc = c.with_matrix(crate::feq::tau_apply(i, c.matrix(), 4).unwrap());
                let pt = series_truncate(&pc, mode.clone(), bound, None).unwrap();
                let rep = fe_verify(&c, &t, &pt, FeKind::Dirichlet, i).unwrap();
                assert!(rep.is_zero(), "{mode:?} i={i} {:?}", rep.failures());
            }
        }
    }

    #[test]
    fn quadratic_overlap_equations_coincide() {
        let c = cfg(4, vec![vec![0, 2], vec![2, 0]]);
        for pi in [None, Some(Poly::new(vec![0, 1])), Some(Poly::new(vec![2, 0, 1]))] {
            for d in 0..6u32 {
                let kub = slice_equation(&c, FeKind::Kubota, 0, &[0, d], pi.as_ref()).unwrap();
                let dir = slice_equation(&c, FeKind::Dirichlet, 0, &[0, d], pi.as_ref()).unwrap();
                assert_eq!(kub.lambda, dir.lambda);
                assert_eq!(dir.partner, c.matrix().to_vec());
                for k in 0..4 {
                    for l in 0..4 {
                        assert_eq!(kub.matrix[k][l], dir.matrix[k][l], "{pi:?} d={d} ({k},{l})");
                    }
                }
            }
        }
        let t = series_truncate(&c, SeriesMode::Global, 5, None).unwrap();
        for kind in [FeKind::Kubota, FeKind::Dirichlet] {
            let rep = fe_verify(&c, &t, &t, kind, 0).unwrap();
            assert!(rep.is_zero(), "{kind:?} {:?}", rep.failures());
        }
    }
}
