//! Closed-form coefficients: the squarefree product formula, the last-variable
//! formula with a Gauss-sum divisor sum, its Dirichlet simplification, and
//! prime-power blocks.

use super::{CoeffError, MdsConfig};
use crate::exactnum::CycNum;
use crate::polyring::{ff_gauss_sum, Poly};

fn check_squarefree(cfg: &MdsConfig, fs: &[Poly]) -> Result<(), CoeffError> {
    let ring = cfg.ring();
    let prod = ring.product(fs.iter());
    if ring.is_squarefree(&prod) {
        Ok(())
    } else {
        Err(CoeffError::NotSquarefree)
    }
}

fn xi_minus_one_pow(cfg: &MdsConfig, e: i64) -> CycNum {
    // ξ(−1) = χ(−1)^{n/2}
    cfg.zeta(cfg.chi_minus_one() as i64 * (cfg.n() / 2) as i64 * e)
}

/// `Π (f_i′/f_i)^{M_ii} Π_{i<j} (f_i/f_j)^{M_ij}` for `f_1⋯f_r` squarefree.
pub fn coeff_squarefree(cfg: &MdsConfig, fs: &[Poly]) -> Result<CycNum, CoeffError> {
    assert_eq!(fs.len(), cfg.rank(), "one polynomial per variable");
    check_squarefree(cfg, fs)?;
    let ring = cfg.ring();
    let m = cfg.matrix();
    let mut acc = CycNum::one();
    for i in 0..fs.len() {
        acc *= &cfg.symbol_pow(&ring.derivative(&fs[i]), &fs[i], m[i][i] as i64);
        for j in i + 1..fs.len() {
            acc *= &cfg.symbol_pow(&fs[i], &fs[j], m[i][j] as i64);
        }
    }
    Ok(acc)
}

/// Dirichlet form for `M_rr = 0`: `Π_{i<r} (f_i′/f_i)^{M_ii} Π_{i<j≤r} (f_i/f_j)^{M_ij}`,
/// valid for `f_1⋯f_{r−1}` squarefree and arbitrary `f_r`.
pub fn coeff_dirichlet(cfg: &MdsConfig, fs: &[Poly]) -> Result<CycNum, CoeffError> {
    let r = cfg.rank();
    assert_eq!(fs.len(), r, "one polynomial per variable");
    if cfg.matrix()[r - 1][r - 1] != 0 {
        return Err(CoeffError::InvalidConfig("the Dirichlet form needs M_rr = 0".into()));
    }
    check_squarefree(cfg, &fs[..r - 1])?;
    let ring = cfg.ring();
    let m = cfg.matrix();
    let mut acc = CycNum::one();
    for i in 0..r - 1 {
        acc *= &cfg.symbol_pow(&ring.derivative(&fs[i]), &fs[i], m[i][i] as i64);
        for j in i + 1..r {
            acc *= &cfg.symbol_pow(&fs[i], &fs[j], m[i][j] as i64);
        }
    }
    Ok(acc)
}

/// The last-variable formula for `f_1⋯f_{r−1}` squarefree:
/// `ε (Π f_i^{p_ri} / f_r)^{−1} ξ(−1)^{D(D−1)/2} g^{−D} Σ_{u^{n_r} | f_r} q^{(n_r−1) deg u} g_ψ(F, f_r/u^{n_r})`
/// with `ψ = ξχ^{M_rr}`, `g = g_ψ`, `D = deg f_r` and `F = Π f_i^{n_ri}`.
pub fn coeff_general_lastvar(cfg: &MdsConfig, fs: &[Poly]) -> Result<CycNum, CoeffError> {
    let r = cfg.rank();
    assert_eq!(fs.len(), r, "one polynomial per variable");
    check_squarefree(cfg, &fs[..r - 1])?;
    let ring = cfg.ring();
    let m = cfg.matrix();
    let p = cfg.params();
    let last = r - 1;
    let fr = &fs[last];
    let nr = p.n_i[last];
    if nr == 1 && fr.deg() > 0 {
        return Err(CoeffError::NoClosedForm { exponents: fs.iter().map(|f| f.deg()).collect() });
    }
    let mut eps = CycNum::one();
    for i in 0..last {
        eps *= &cfg.symbol_pow(&ring.derivative(&fs[i]), &fs[i], m[i][i] as i64);
        for j in i + 1..last {
            eps *= &cfg.symbol_pow(&fs[i], &fs[j], m[i][j] as i64);
        }
    }
    let mut twist = CycNum::one();
    for i in 0..last {
        twist *= &cfg.symbol_pow(&fs[i], fr, -(p.p_ij[last][i] as i64));
    }
    let big_f = ring.product((0..last).map(|i| ring.pow(&fs[i], p.n_ij[last][i])).collect::<Vec<_>>().iter());
    let psi = cfg.xi_chi(m[last][last]);
    let d = fr.deg() as i64;
    let pref = xi_minus_one_pow(cfg, d * (d - 1) / 2) * cfg.gauss(psi as i64).pow(-d).unwrap();
    let chi_psi = cfg.chi().pow(psi as i64);
    let mut sum = CycNum::zero();
    // u ranges over monic u with u^{n_r} | f_r
    let fac = ring.factor(fr);
    let mut choice = vec![0u32; fac.len()];
    loop {
        let u = ring.product(
            fac.iter().zip(&choice).map(|((pr, _), &t)| ring.pow(pr, t)).collect::<Vec<_>>().iter(),
        );
        let rest = ring.div_exact(fr, &ring.pow(&u, nr));
        let term = cfg.q_pow((nr as i64 - 1) * u.deg() as i64) * ff_gauss_sum(ring, &big_f, &rest, &chi_psi);
        sum += &term;
        let mut k = 0;
        loop {
            if k == fac.len() {
                return Ok(eps * twist * pref * sum);
            }
            if (choice[k] + 1) * nr <= fac[k].1 {
                choice[k] += 1;
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `g_ψ(π^a, π^b)` for a prime `π`, `ψ = χ^{psi}`, using that only `b = 0`,
/// `b ≤ a` and `b = a + 1` can contribute.
pub fn prime_power_gauss_sum(cfg: &MdsConfig, psi: u32, pi: &Poly, a: u32, b: u32) -> CycNum {
    let dq = pi.deg() as i64;
    let n = cfg.n() as i64;
    if b == 0 {
        CycNum::one()
    } else if a >= b {
        if (psi as i64 * b as i64) % n == 0 {
            cfg.q_pow((b as i64 - 1) * dq) * (cfg.q_pow(dq) - CycNum::one())
        } else {
            CycNum::zero()
        }
    } else if b == a + 1 {
        cfg.q_pow(a as i64 * dq) * cfg.local_gauss(pi, psi as i64 * b as i64)
    } else {
        CycNum::zero()
    }
}

/// `a(π^{d_1}, …, π^{d_r})` when at most one exponent exceeds 1; `Ok(None)`
/// when two or more exponents are at least 2.
pub fn local_block(cfg: &MdsConfig, pi: &Poly, d: &[u32]) -> Result<Option<CycNum>, CoeffError> {
    let r = cfg.rank();
    assert_eq!(d.len(), r, "one exponent per variable");
    let big: Vec<usize> = (0..r).filter(|&i| d[i] >= 2).collect();
    if big.len() >= 2 {
        return Ok(None);
    }
    let ring = cfg.ring();
    let m = cfg.matrix();
    let p = cfg.params();
    let dpi = ring.derivative(pi);
    if big.is_empty() {
        // squarefree product formula, with (π/π)^{M_ij} = 0 unless M_ij ≡ 0
        let ones: Vec<usize> = (0..r).filter(|&i| d[i] == 1).collect();
        let mut acc = CycNum::one();
        for (a, &i) in ones.iter().enumerate() {
            acc *= &cfg.symbol_pow(&dpi, pi, m[i][i] as i64);
            for &j in &ones[a + 1..] {
                if m[i][j] != 0 {
                    return Ok(Some(CycNum::zero()));
                }
            }
        }
        return Ok(Some(acc));
    }
    let j = big[0];
    let dj = d[j];
    let nj = p.n_i[j];
    if nj == 1 {
        return Err(CoeffError::NoClosedForm { exponents: d.to_vec() });
    }
    let deg = pi.deg() as i64;
    let others: Vec<usize> = (0..r).filter(|&i| i != j && d[i] == 1).collect();
    let mut eps = CycNum::one();
    for (a, &i) in others.iter().enumerate() {
        eps *= &cfg.symbol_pow(&dpi, pi, m[i][i] as i64);
        if others[a + 1..].iter().any(|&k| m[i][k] != 0) {
            return Ok(Some(CycNum::zero()));
        }
        if p.p_ij[j][i] != 0 {
            // (π^{p}/π^{d})^{−1} with d > 0
            return Ok(Some(CycNum::zero()));
        }
    }
    let a: u32 = others.iter().map(|&i| p.n_ij[j][i]).sum();
    let psi = cfg.xi_chi(m[j][j]);
    let total = dj as i64 * deg;
    let pref = xi_minus_one_pow(cfg, total * (total - 1) / 2) * cfg.gauss(psi as i64).pow(-total).unwrap();
    let mut sum = CycNum::zero();
    for t in 0..=dj / nj {
        let b = dj - t * nj;
        let g = prime_power_gauss_sum(cfg, psi, pi, a, b);
        if !g.is_zero() {
            sum += &(cfg.q_pow((nj as i64 - 1) * t as i64 * deg) * g);
        }
    }
    // moving index j to the end reorders residue symbols; undo that sign
    let sign_exp: i64 = (j + 1..r).map(|k| m[j][k] as i64 * d[k] as i64).sum::<i64>() * dj as i64 * deg * deg;
    let sign = cfg.zeta(cfg.chi_minus_one() as i64 * sign_exp);
    Ok(Some(eps * pref * sum * sign))
}

/// The printed prime-power closed forms: single-variable `a(π^d)` and the
/// two-variable `a(π, π^d)` families. Other patterns give `NoClosedForm`.
pub fn coeff_local_base(cfg: &MdsConfig, pi: &Poly, d: &[u32]) -> Result<CycNum, CoeffError> {
    let r = cfg.rank();
    assert_eq!(d.len(), r, "one exponent per variable");
    let no_form = || CoeffError::NoClosedForm { exponents: d.to_vec() };
    let nz: Vec<usize> = (0..r).filter(|&i| d[i] > 0).collect();
    let m = cfg.matrix();
    let p = cfg.params();
    let deg = pi.deg() as i64;
    let dpi = cfg.ring().derivative(pi);
    let q = |e: i64| cfg.q_pow(e);
    match nz.len() {
        0 => Ok(CycNum::one()),
        1 => {
            let j = nz[0];
            let (dj, nj) = (d[j] as i64, p.n_i[j] as i64);
            if nj == 1 {
                return Err(no_form());
            }
            let psi = cfg.xi_chi(m[j][j]) as i64;
            let total = dj * deg;
            let pref = xi_minus_one_pow(cfg, total * (total - 1) / 2) * cfg.gauss(psi).pow(-total).unwrap();
            let body = if dj % nj == 0 {
                q((dj - dj / nj) * deg)
            } else if dj % nj == 1 {
                q((dj - 1 - (dj - 1) / nj) * deg) * cfg.local_gauss(pi, psi)
            } else {
                CycNum::zero()
            };
            Ok(pref * body)
        }
        2 => {
            let (a, b) = (nz[0], nz[1]);
            // i carries the exponent 1, j carries d
            let (i, j) = if d[b] >= 1 && d[a] == 1 { (a, b) } else if d[b] == 1 { (b, a) } else { return Err(no_form()) };
            let dj = d[j] as i64;
            let nj = p.n_i[j] as i64;
            if nj == 1 {
                return Err(no_form());
            }
            let (pji, nji) = (p.p_ij[j][i], p.n_ij[j][i] as i64);
            let root = cfg.symbol_pow(&dpi, pi, m[i][i] as i64);
            let value = if pji > 0 || nji == nj - 1 {
                // only d = 0 survives, and here d ≥ 1
                CycNum::zero()
            } else {
                let psi = cfg.xi_chi(m[j][j]) as i64;
                let total = dj * deg;
                let pref = xi_minus_one_pow(cfg, total * (total - 1) / 2) * cfg.gauss(psi).pow(-total).unwrap();
                let body = if dj % nj == 0 {
                    q((dj - dj / nj) * deg)
                } else if dj.rem_euclid(nj) == (1 + nji) % nj {
                    q((dj - 1 - (dj - nji - 1) / nj) * deg) * cfg.local_gauss(pi, psi * (nji + 1))
                } else {
                    CycNum::zero()
                };
                root * pref * body
            };
            // the two-variable formula is stated with the exponent-1 slot first
            let sign = if j < i { cfg.zeta(cfg.chi_minus_one() as i64 * dj * deg * deg * m[i][j] as i64) } else { CycNum::one() };
            Ok(value * sign)
        }
        _ => Err(no_form()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    fn cfg(q: (u32, u32), n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(q.0, q.1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let c = cfg((5, 1), 4, vec![vec![0, 1], vec![1, 0]]);
        let r = c.ring();
        let one = Poly::one();
        assert!(coeff_squarefree(&c, &[one.clone(), one.clone()]).unwrap().is_one());
        let v = coeff_squarefree(&c, &[Poly::t(), r.parse("T-2").unwrap()]).unwrap();
        assert_eq!(v, CycNum::root_of_unity(4, 1));
        assert_eq!(coeff_squarefree(&c, &[Poly::t(), Poly::t()]), Err(CoeffError::NotSquarefree));
    }

    #[test]
    fn dirichlet_branch_example() {
        let c = cfg((5, 1), 4, vec![vec![0, 1], vec![1, 0]]);
        let r = c.ring();
        let f2 = r.parse("T^2-2*T+1").unwrap();
        let v = coeff_dirichlet(&c, &[Poly::t(), f2.clone()]).unwrap();
        assert!(v.is_one());
        assert_eq!(coeff_general_lastvar(&c, &[Poly::t(), f2]).unwrap(), v);
    }

    #[test]
    fn prime_power_gauss_sums_match_direct_summation() {
        let c = cfg((5, 1), 4, vec![vec![1]]);
        let r = c.ring();
        for pi in [Poly::t(), r.parse("T^2+2").unwrap()] {
            for psi in 0..4u32 {
                for a in 0..3 {
                    for b in 0..=3u32 {
                        if b * pi.deg() > 4 {
                            continue;
                        }
                        let direct = ff_gauss_sum(r, &r.pow(&pi, a), &r.pow(&pi, b), &c.chi().pow(psi as i64));
                        assert_eq!(prime_power_gauss_sum(&c, psi, &pi, a, b), direct, "psi={psi} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_variable_intro_values() {
        // M = (1 + n/2), n = 4, q = 5: a(T^4) = ξ(−1)^6 q^3 g_χ^{−4}
        let c = cfg((5, 1), 4, vec![vec![3]]);
        let t = Poly::t();
        let g = c.gauss(1);
        let expect = c.q_pow(3) * g.pow(-4).unwrap();
        assert_eq!(coeff_local_base(&c, &t, &[4]).unwrap(), expect);
        assert!(coeff_local_base(&c, &t, &[2]).unwrap().is_zero());
        assert_eq!(local_block(&c, &t, &[4]).unwrap().unwrap(), expect);
    }
}
