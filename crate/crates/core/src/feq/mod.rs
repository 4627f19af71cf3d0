//! Functional equations of the multiple Dirichlet series: scattering matrices,
//! the variable maps `σ_i` and matrix maps `τ_i`, verification on truncated
//! tables, and a solver recovering the tables from the equations.

mod ratfn;
mod rational;
mod scatter;
mod solve;
mod verify;

pub use ratfn::{Laurent, RatFn};
pub use rational::{chinta_mohler, rational_verify, MultiRational};
pub use scatter::{
    dirichlet_theta, expand, is_identity, kubota_data, kubota_expanded_closed, kubota_gamma, mat_mul, mat_subst_inv,
    KubotaData, Matrix,
};
pub use solve::{fe_solve, matrix_groupoid, solve_block_values, GroupoidEdge, GroupoidSeriesSet};
pub use verify::{fe_verify, FeReport, SliceStatus};

use thiserror::Error;

use crate::exactnum::{CycNum, ExactError};
use crate::mdcoeff::{CoeffError, MdsConfig};
use crate::polyring::Poly;

#[derive(Debug, Error)]
pub enum FeqError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("index {0} is not a Dirichlet node (M_ii ≠ 0)")]
    NotDirichletNode(usize),
    #[error("Kubota-type equations need q ≡ 1 mod 4, got q = {0}")]
    Requires1Mod4(u64),
    #[error("support condition violated: {0}")]
    SupportViolation(String),
    #[error("{0} table entries needed by the check are unknown")]
    UnknownEntries(usize),
    #[error("groupoid exceeded {0} objects")]
    PossiblyInfiniteGroupoid(usize),
    #[error("solver stalled with {remaining} unknown entries")]
    NotConverged { remaining: usize },
    #[error("inconsistent functional equation system: {0}")]
    InconsistentSystem(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeKind {
    Kubota,
    Dirichlet,
}

impl std::str::FromStr for FeKind {
    type Err = FeqError;
    fn from_str(s: &str) -> Result<Self, FeqError> {
        match s {
            "kubota" => Ok(FeKind::Kubota),
            "dirichlet" => Ok(FeKind::Dirichlet),
            other => Err(FeqError::Invalid(format!("unknown equation kind {other:?}"))),
        }
    }
}

/// `τ_i(M)`, entries reduced to `[0, n)`.
pub fn tau_apply(i: usize, m: &[Vec<u32>], n: u32) -> Result<Vec<Vec<u32>>, FeqError> {
    if m[i][i] != 0 {
        return Err(FeqError::NotDirichletNode(i));
    }
    let r = m.len();
    let n64 = n as i64;
    let e = |a: usize, b: usize| (m[a][b] != 0) as i64;
    let mut out = vec![vec![0u32; r]; r];
    for h in 0..r {
        for j in 0..r {
            let v: i64 = if h == i && j == i {
                0
            } else if h == i || j == i {
                -(m[h][j] as i64)
            } else if h == j {
                m[j][j] as i64 + e(j, i) * (m[j][i] as i64 + n64 / 2)
            } else {
                m[h][j] as i64 + e(h, i) * e(i, j) * (m[h][i] as i64 + m[i][j] as i64)
            };
            out[h][j] = v.rem_euclid(n64) as u32;
        }
    }
    Ok(out)
}

/// Image of the monomial `x^a` under `σ_i`: `x^a ∘ σ_i = scalar · x^{b}`.
pub fn sigma_apply(cfg: &MdsConfig, kind: FeKind, i: usize, a: &[i64]) -> Result<(Vec<i64>, CycNum), FeqError> {
    let r = cfg.rank();
    let mut b = a.to_vec();
    let p = cfg.params();
    match kind {
        FeKind::Kubota => {
            let kd = kubota_data(cfg, i, None)?;
            let mut xi = -a[i];
            let mut scalar = kd.lambda.pow(a[i])?;
            for j in (0..r).filter(|&j| j != i) {
                let t = p.n_ij[i][j] as i64 * a[j];
                xi += t;
                scalar = &scalar * &kd.scale.pow(t)?;
            }
            b[i] = xi;
            Ok((b, scalar))
        }
        FeKind::Dirichlet => {
            if cfg.matrix()[i][i] != 0 {
                return Err(FeqError::NotDirichletNode(i));
            }
            let mut xi = -a[i];
            let mut scalar = cfg.q_pow(-a[i]);
            for j in (0..r).filter(|&j| j != i) {
                if cfg.matrix()[i][j] != 0 {
                    xi += a[j];
                    scalar = &scalar * &cfg.gauss(cfg.matrix()[i][j] as i64).pow(a[j])?;
                }
            }
            b[i] = xi;
            Ok((b, scalar))
        }
    }
}

/// One functional equation restricted to the slice where every exponent
/// except the `i`-th is fixed: `S_k(x) = Σ_ℓ A_{kℓ}(x) S'_ℓ(λ/x)` with
/// `k, ℓ` running mod `n`. For local tables `x` is `u = x^{deg π}`.
#[derive(Debug, Clone)]
pub struct SliceEquation {
    pub lambda: CycNum,
    pub matrix: Matrix,
    /// Defining matrix of the series on the right.
    pub partner: Vec<Vec<u32>>,
    /// Denominator of each slice on the left and right: `1 − c x^m` as `(c, m)`.
    pub denominator: (CycNum, i64),
    /// Bound on the numerator degree of a slice over that denominator.
    pub numerator_bound: i64,
}

pub fn slice_equation(
    cfg: &MdsConfig,
    kind: FeKind,
    i: usize,
    others: &[u32],
    local: Option<&Poly>,
) -> Result<SliceEquation, FeqError> {
    let r = cfg.rank();
    let n = cfg.n() as i64;
    let m = cfg.matrix();
    let p = cfg.params();
    let d = local.map_or(1, |pi| pi.deg() as i64);
    let chi_m1 = cfg.chi_minus_one() as i64;
    let others_idx = || (0..r).filter(move |&j| j != i);
    let v_i: i64 = (i + 1..r).map(|j| others[j] as i64 * m[i][j] as i64).sum();
    match kind {
        FeKind::Kubota => {
            let kd = kubota_data(cfg, i, local)?;
            let kt: i64 = others_idx().map(|j| p.n_ij[i][j] as i64 * others[j] as i64).sum();
            let gamma = kubota_gamma(cfg, i, kt.rem_euclid(kd.n_i as i64), local)?;
            let e = expand(&gamma, cfg.n(), kt)?;
            let pre = RatFn::monomial(kd.scale.pow(kt)?, kt);
            let matrix = (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| e[k as usize][l as usize].mul(&pre).scale(&cfg.zeta(chi_m1 * v_i * (k + l) * d)))
                        .collect()
                })
                .collect();
            let ni = kd.n_i as i64;
            let c = match local {
                None => &CycNum::from_int(cfg.q() as i64) * &kd.scale.pow(ni)?,
                Some(_) => &cfg.q_pow(-d) * &kd.scale.pow(ni)?,
            };
            Ok(SliceEquation {
                lambda: kd.lambda,
                matrix,
                partner: m.to_vec(),
                denominator: (c, ni),
                numerator_bound: kt + ni,
            })
        }
        FeKind::Dirichlet => {
            if m[i][i] != 0 {
                return Err(FeqError::NotDirichletNode(i));
            }
            let partner = tau_apply(i, m, cfg.n())?;
            let v: i64 = others_idx().map(|j| others[j] as i64 * m[j][i] as i64).sum();
            let kt: i64 = others_idx().filter(|&j| m[j][i] != 0).map(|j| others[j] as i64).sum();
            let b = v.rem_euclid(n) == 0;
            // ω as a power of ζ_n
            let active: Vec<usize> = others_idx().filter(|&j| m[j][i] != 0).collect();
            let mut omega = 0i64;
            for &j in &active {
                let dj = others[j] as i64;
                omega += chi_m1 * (n / 2) * (dj * (dj - 1) / 2);
            }
            for (x, &h) in active.iter().enumerate() {
                for &j in &active[x + 1..] {
                    omega += chi_m1 * others[h] as i64 * others[j] as i64 * m[h][i] as i64;
                }
            }
            let theta = dirichlet_theta(cfg, kt, v, local);
            let mut gpre = CycNum::one();
            for j in others_idx().filter(|&j| m[i][j] != 0) {
                gpre = &gpre * &cfg.gauss(m[i][j] as i64).pow(others[j] as i64 * d)?;
            }
            let constant = match local {
                None => {
                    let gv = if b { CycNum::one() } else { cfg.gauss(v).inv()? };
                    &(&cfg.zeta(omega) * &gv) * &gpre
                }
                Some(pi) => {
                    let gv = if b {
                        CycNum::one()
                    } else {
                        let t = -(-cfg.gauss(v)).pow(d)?;
                        (&t / &cfg.q_pow(d)).inv()?
                    };
                    let sign = CycNum::from_int(if ((d + 1) * kt) % 2 == 0 { 1 } else { -1 });
                    let ring = cfg.ring();
                    let root = cfg.symbol_pow(&ring.derivative(pi), pi, -v - kt * n / 2);
                    &(&(&(&cfg.zeta(omega * d) * &gv) * &sign) * &root) * &gpre
                }
            };
            let pre = RatFn::monomial(constant, kt);
            let matrix = (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| {
                            theta[k as usize][l as usize]
                                .mul(&pre)
                                .scale(&cfg.zeta(chi_m1 * (v + v_i) * (k + l) * d))
                        })
                        .collect()
                })
                .collect();
            let (lambda, c) = match local {
                None => (CycNum::from_frac(1, cfg.q() as i64), CycNum::from_int(cfg.q() as i64)),
                Some(_) => (cfg.q_pow(-d), CycNum::one()),
            };
            Ok(SliceEquation { lambda, matrix, partner, denominator: (c, 1), numerator_bound: kt })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn tau_examples() {
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(tau_apply(0, &m, 4).unwrap(), vec![vec![0, 3], vec![3, 3]]);
        assert_eq!(tau_apply(0, &tau_apply(0, &m, 4).unwrap(), 4).unwrap(), m);
        let diag = vec![vec![0, 0], vec![0, 2]];
        assert_eq!(tau_apply(0, &diag, 4).unwrap(), diag);
        assert!(matches!(tau_apply(1, &diag, 4), Err(FeqError::NotDirichletNode(1))));
    }

    #[test]
    fn sigma_examples() {
        let c = cfg(4, vec![vec![0, 1], vec![1, 0]]);
        // σ1: x1 ↦ 1/(q x1), x2 ↦ g_χ x1 x2
        let (b, s) = sigma_apply(&c, FeKind::Dirichlet, 0, &[0, 1]).unwrap();
        assert_eq!(b, vec![1, 1]);
        assert_eq!(s, c.gauss(1));
        let (b, s) = sigma_apply(&c, FeKind::Dirichlet, 0, &[1, 0]).unwrap();
        assert_eq!(b, vec![-1, 0]);
        assert_eq!(s, CycNum::from_frac(1, 5));
        // σ2 on τ2(M): x1 ↦ g_{χ^{−1}} x1 x2
        let t = c.with_matrix(tau_apply(1, c.matrix(), 4).unwrap());
        let (b, s) = sigma_apply(&t, FeKind::Dirichlet, 1, &[1, 0]).unwrap();
        assert_eq!(b, vec![1, 1]);
        assert_eq!(s, c.gauss(3));
    }

    #[test]
    fn kubota_sigma_is_involutive() {
        let c = cfg(4, vec![vec![3, 3], vec![3, 0]]);
        for a in [[1i64, 0], [0, 1], [2, 3]] {
            let (b, s1) = sigma_apply(&c, FeKind::Kubota, 0, &a).unwrap();
            let (back, s2) = sigma_apply(&c, FeKind::Kubota, 0, &b).unwrap();
            assert_eq!(back, a.to_vec());
            assert!((&s1 * &s2).is_one());
        }
    }
}
