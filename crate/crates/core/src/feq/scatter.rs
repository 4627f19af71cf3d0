//! Scattering matrices: the Kubota matrices `Γ`, `Γ_π`, their expansion to
//! `n × n` blocks, and the Dirichlet matrices `Θ`, `Θ_π`.

use super::ratfn::{Laurent, RatFn};
use super::FeqError;
use crate::exactnum::CycNum;
use crate::mdcoeff::MdsConfig;
use crate::polyring::Poly;

pub type Matrix = Vec<Vec<RatFn>>;

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(RatFn::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][k].mul(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn is_identity(a: &Matrix) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| if i == j { *e == RatFn::one() } else { e.is_zero() })
    })
}

pub fn mat_subst_inv(a: &Matrix, lambda: &CycNum) -> Matrix {
    a.iter().map(|row| row.iter().map(|e| e.subst_inv(lambda)).collect()).collect()
}

/// Parameters of the Kubota equation at index `i`: the character `ψ = ξχ^{M_ii}`
/// as a power of `χ`, its Gauss sum `g`, `n_i`, and the prime degree.
#[derive(Debug, Clone)]
pub struct KubotaData {
    pub psi: u32,
    pub g: CycNum,
    pub n_i: u32,
    pub deg: u32,
    /// `X = scale · x` (global) or `X = scale · u` with `u = x^{deg π}` (local).
    pub scale: CycNum,
    /// `x ↦ λ/x` in the series variable.
    pub lambda: CycNum,
}

pub fn kubota_data(cfg: &MdsConfig, i: usize, local: Option<&Poly>) -> Result<KubotaData, FeqError> {
    if cfg.q() % 4 != 1 {
        return Err(FeqError::Requires1Mod4(cfg.q()));
    }
    cfg.params().kubota_available(i)?;
    let psi = cfg.xi_chi(cfg.matrix()[i][i]);
    let g = cfg.gauss(psi as i64);
    let deg = local.map_or(1, |p| p.deg());
    let base = &CycNum::from_int(cfg.q() as i64) / &g;
    let scale = base.pow(deg as i64).unwrap();
    let lambda = (&g / &CycNum::from_int(cfg.q() as i64)).pow(2 * deg as i64).unwrap();
    Ok(KubotaData { psi, g, n_i: cfg.params().n_i[i], deg, scale, lambda })
}

fn xpow(scale: &CycNum, e: i64) -> Laurent {
    Laurent::monomial(scale.pow(e).unwrap(), e)
}

/// `Γ(x, K)` (global) or `Γ_π(x, K)` in the variable `u = x^{deg π}` (local).
/// Entries with `k ≡ ℓ ≡ 1+K−k` are the monomial `X^{1−n_i}`.
pub fn kubota_gamma(cfg: &MdsConfig, i: usize, k_big: i64, local: Option<&Poly>) -> Result<Matrix, FeqError> {
    let kd = kubota_data(cfg, i, local)?;
    let nr = kd.n_i as i64;
    let d = kd.deg as i64;
    let c = match local {
        None => CycNum::from_int(cfg.q() as i64),
        Some(_) => cfg.q_pow(-d),
    };
    let den = Laurent::one().sub(&xpow(&kd.scale, nr).scale(&c));
    let chi_m1 = cfg.chi_minus_one() as i64;
    let mut out = vec![vec![RatFn::zero(); nr as usize]; nr as usize];
    for k in 0..nr {
        let diag_exp = 1 - (k_big + 1 - 2 * k).rem_euclid(nr);
        let diag = RatFn::new(xpow(&kd.scale, diag_exp).scale(&(&CycNum::one() - &c)), den.clone());
        out[k as usize][k as usize] = diag;
        let l = (1 + k_big - k).rem_euclid(nr);
        let sign = cfg.zeta(chi_m1 * kd.psi as i64 * l * (1 + k_big) * d);
        let gs = kd.psi as i64 * (2 * k - k_big - 1);
        let gauss = match local {
            None => cfg.gauss(gs),
            Some(pi) => &cfg.local_gauss(pi, gs) / &cfg.q_pow(d),
        };
        let shape = xpow(&kd.scale, 1).sub(&xpow(&kd.scale, 1 - nr));
        let anti = RatFn::new(shape.scale(&(&sign * &gauss)), den.clone());
        out[k as usize][l as usize] = if l == k { xpow(&kd.scale, 1 - nr).into() } else { anti };
    }
    Ok(out)
}

/// `E_m^n`: `(EΓ)_{k,ℓ} = S^{k+ℓ−K, n} Γ_{k%m, ℓ%m}`.
pub fn expand(gamma: &Matrix, n: u32, k_big: i64) -> Result<Matrix, FeqError> {
    let m = gamma.len() as i64;
    let n = n as i64;
    if n % m != 0 {
        return Err(FeqError::SupportViolation(format!("block size {m} does not divide {n}")));
    }
    for (k, row) in gamma.iter().enumerate() {
        for (l, e) in row.iter().enumerate() {
            let cls = k as i64 + l as i64 - k_big;
            if !e.is_zero() && e.project(cls, m) != *e {
                return Err(FeqError::SupportViolation(format!("entry ({k},{l}) has exponents off class {cls} mod {m}")));
            }
        }
    }
    Ok((0..n)
        .map(|k| (0..n).map(|l| gamma[(k % m) as usize][(l % m) as usize].project(k + l - k_big, n)).collect())
        .collect())
}

/// The closed-form display of `E_{n_i}^n Γ(x, K)` (global), built term by term.
pub fn kubota_expanded_closed(cfg: &MdsConfig, i: usize, k_big: i64) -> Result<Matrix, FeqError> {
    let kd = kubota_data(cfg, i, None)?;
    let n = cfg.n() as i64;
    let ni = kd.n_i as i64;
    let q = cfg.q() as i64;
    let den = Laurent::one().sub(&xpow(&kd.scale, n).scale(&cfg.q_pow(n / ni)));
    let chi_m1 = cfg.chi_minus_one() as i64;
    let mut out = vec![vec![RatFn::zero(); n as usize]; n as usize];
    for k in 0..n {
        for l in 0..n {
            let diag = (k - l).rem_euclid(ni) == 0;
            let anti = (l - (1 + k_big - k)).rem_euclid(ni) == 0;
            if diag && anti && (k + l - (1 + k_big - ni)).rem_euclid(n) == 0 {
                out[k as usize][l as usize] = xpow(&kd.scale, 1 - ni).into();
                continue;
            }
            let mut e = RatFn::zero();
            if diag {
                let t = (n - ni + 1 + k_big - k - l).rem_euclid(n);
                let qe = (n - ni - t + (1 + k_big - k - l).rem_euclid(ni)) / ni;
                let num = xpow(&kd.scale, n - ni + 1 - t).scale(&(&cfg.q_pow(qe) * &CycNum::from_int(1 - q)));
                e = e.add(&RatFn::new(num, den.clone()));
            }
            if anti {
                let sign = cfg.zeta(chi_m1 * kd.psi as i64 * l * (1 + k_big));
                let gauss = cfg.gauss(kd.psi as i64 * (2 * k - k_big - 1));
                let a = (k + l - k_big - 1).rem_euclid(n);
                let b = (k + l - k_big - 1 + ni).rem_euclid(n);
                let inner = xpow(&kd.scale, a)
                    .scale(&cfg.q_pow(a / ni))
                    .sub(&xpow(&kd.scale, b - ni).scale(&cfg.q_pow(b / ni)));
                let num = inner.mul(&xpow(&kd.scale, 1)).scale(&(&sign * &gauss));
                e = e.add(&RatFn::new(num, den.clone()));
            }
            out[k as usize][l as usize] = e;
        }
    }
    Ok(out)
}

/// `Θ(x, K)` (global) or `Θ_π` in `u = x^{deg π}` (local); `v` decides the shape.
pub fn dirichlet_theta(cfg: &MdsConfig, k_big: i64, v: i64, local: Option<&Poly>) -> Matrix {
    let n = cfg.n() as i64;
    let q = cfg.q() as i64;
    let d = local.map_or(1, |p| p.deg() as i64);
    let divisible = v.rem_euclid(n) == 0;
    let lead = match local {
        None => Laurent::monomial(CycNum::one(), -1),
        Some(_) => Laurent::monomial(cfg.q_pow(-d), -1),
    };
    let den = match local {
        None => Laurent::one().sub(&Laurent::monomial(cfg.q_pow(n), n)),
        Some(_) => Laurent::one().sub(&Laurent::monomial(CycNum::one(), n)),
    };
    let mut out = vec![vec![RatFn::zero(); n as usize]; n as usize];
    for k in 0..n {
        for l in 0..n {
            let main = (k + l - (k_big - 1)).rem_euclid(n) == 0;
            out[k as usize][l as usize] = if !divisible {
                if main {
                    lead.clone().into()
                } else {
                    RatFn::zero()
                }
            } else if main {
                let top = match local {
                    None => Laurent::monomial(cfg.q_pow(n - 1), n).sub(&Laurent::one()),
                    Some(_) => Laurent::monomial(cfg.q_pow(d), n).sub(&Laurent::one()),
                };
                RatFn::new(lead.mul(&top), den.clone())
            } else {
                let e = (k + l - k_big + 1).rem_euclid(n);
                let top = match local {
                    None => Laurent::monomial(&CycNum::from_frac(1 - q, q) * &cfg.q_pow(e), e),
                    Some(_) => Laurent::monomial(&cfg.q_pow(d) - &CycNum::one(), e),
                };
                RatFn::new(lead.mul(&top), den.clone())
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn inverse_identity_global_and_local() {
        let fixtures = [(4, vec![vec![3]]), (4, vec![vec![1]]), (2, vec![vec![0]]), (4, vec![vec![3, 3], vec![3, 0]])];
        let pi = Poly::new(vec![2, 0, 1]); // T^2 + 2, irreducible over F_5
        for (n, m) in fixtures {
            let c = cfg(n, m);
            let i = 0;
            let kd = kubota_data(&c, i, None).unwrap();
            for kb in 0..kd.n_i as i64 {
                let g = kubota_gamma(&c, i, kb, None).unwrap();
                assert!(is_identity(&mat_mul(&g, &mat_subst_inv(&g, &kd.lambda))), "K={kb}");
                let kl = kubota_data(&c, i, Some(&pi)).unwrap();
                let gl = kubota_gamma(&c, i, kb, Some(&pi)).unwrap();
                assert!(is_identity(&mat_mul(&gl, &mat_subst_inv(&gl, &kl.lambda))), "local K={kb} n={n} M={:?}", c.matrix());
            }
        }
    }

    #[test]
    fn special_entries_and_small_case() {
        let c = cfg(4, vec![vec![0]]);
        // n_1 = 2; K = 0: Γ_{1,1} = (1−q)/(1−q(qx/g)^2)
        let kd = kubota_data(&c, 0, None).unwrap();
        let g = kubota_gamma(&c, 0, 0, None).unwrap();
        let den = Laurent::one().sub(&xpow(&kd.scale, 2).scale(&CycNum::from_int(5)));
        assert_eq!(g[1][1], RatFn::new(Laurent::constant(CycNum::from_int(-4)), den));
        // K = 1: entries with k ≡ ℓ ≡ 1+K−k collapse to X^{1−n_i}
        let g = kubota_gamma(&c, 0, 1, None).unwrap();
        assert_eq!(g[1][1], RatFn::from(xpow(&kd.scale, -1)));
        assert_eq!(g[0][0], RatFn::from(xpow(&kd.scale, -1)));
        assert!(g[0][1].is_zero());
    }

    #[test]
    fn expansion_matches_closed_display() {
        for (n, m) in [(4, vec![vec![3]]), (4, vec![vec![0]]), (4, vec![vec![2]]), (4, vec![vec![3, 3], vec![3, 0]])] {
            let c = cfg(n, m);
            let ni = c.params().n_i[0] as i64;
            for kb in 0..n as i64 {
                let g = kubota_gamma(&c, 0, kb.rem_euclid(ni), None).unwrap();
                let e = expand(&g, n, kb).unwrap();
                let closed = kubota_expanded_closed(&c, 0, kb).unwrap();
                for k in 0..n as usize {
                    for l in 0..n as usize {
                        assert_eq!(e[k][l], closed[k][l], "n={n} K={kb} ({k},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_shapes() {
        let c = cfg(4, vec![vec![0]]);
        let t = dirichlet_theta(&c, 2, 1, None);
        assert_eq!(t[0][1], RatFn::monomial(CycNum::one(), -1));
        assert!(t[0][0].is_zero());
        // n | v: Θ = x^{−1} S^{k+ℓ−K+1,n}((x−1)/(1−qx))
        let t = dirichlet_theta(&c, 2, 0, None);
        let base = RatFn::new(
            Laurent::from_terms([(1, CycNum::one()), (0, CycNum::from_int(-1))]),
            Laurent::from_terms([(0, CycNum::one()), (1, CycNum::from_int(-5))]),
        );
        for k in 0..4i64 {
            for l in 0..4i64 {
                let expect = base.project(k + l - 2 + 1, 4).mul(&RatFn::monomial(CycNum::one(), -1));
                assert_eq!(t[k as usize][l as usize], expect, "({k},{l})");
            }
        }
    }
}
