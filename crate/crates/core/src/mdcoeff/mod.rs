//! Coefficients of multiple Dirichlet series over `F_q(T)`: the parameter
//! pack, closed-form coefficient formulas, assembly by twisted
//! multiplicativity, and truncated local and global coefficient tables.

mod assemble;
mod formulas;
mod table;

pub use assemble::{block_value, coeff_assemble, root_factor, BlockValues};
pub use formulas::{
    coeff_dirichlet, coeff_general_lastvar, coeff_local_base, coeff_squarefree, local_block,
    prime_power_gauss_sum,
};
pub use table::{exponent_tuples, series_truncate, CoeffTable, Entry, SeriesMode};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::exactnum::CycNum;
use crate::ffield::{gauss_sum, FieldRef, MultChar};
use crate::polyring::{ff_gauss_sum, Poly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("product of the first r-1 entries is not squarefree")]
    NotSquarefree,
    #[error("no closed form for prime-power block {exponents:?}")]
    NoClosedForm { exponents: Vec<u32> },
    #[error("index {index}: gcd(n, M_ii + n/2) does not divide M_{index}j for j = {other}")]
    MissingNij { index: usize, other: usize },
    #[error("unknown local block at prime {prime} with exponents {exponents:?}")]
    UnknownLocalBlock { prime: String, exponents: Vec<u32> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(q, n, χ, M)`: the character `χ` has order `n` (even) and `M` is symmetric
/// with entries reduced mod `n`.
#[derive(Debug, Clone)]
pub struct MdsConfig {
    ring: PolyRing,
    chi: MultChar,
    n: u32,
    m: Vec<Vec<u32>>,
    params: MdsParams,
    gauss: Arc<Vec<CycNum>>,
    local_gauss: Arc<Mutex<HashMap<(Poly, u32), CycNum>>>,
}

/// Constants derived from `M`: `n_i`, and `n_ij, o_ij, p_ij` with
/// `−M_ij = n_ij (M_ii + n/2) + o_ij n + p_ij`, plus `e_ij = [M_ij ≠ 0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsParams {
    pub n_i: Vec<u32>,
    pub n_ij: Vec<Vec<u32>>,
    pub o_ij: Vec<Vec<i64>>,
    pub p_ij: Vec<Vec<u32>>,
    pub e_ij: Vec<Vec<u32>>,
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl MdsParams {
    pub fn derive(n: u32, m: &[Vec<u32>]) -> Self {
        let r = m.len();
        let n64 = n as i64;
        let half = n64 / 2;
        let mut params = MdsParams {
            n_i: vec![0; r],
            n_ij: vec![vec![0; r]; r],
            o_ij: vec![vec![0; r]; r],
            p_ij: vec![vec![0; r]; r],
            e_ij: vec![vec![0; r]; r],
        };
        for i in 0..r {
            let c = m[i][i] as i64 + half;
            let g = gcd(n64, c);
            params.n_i[i] = (n64 / g) as u32;
            for j in 0..r {
                params.e_ij[i][j] = (m[i][j] != 0) as u32;
                if i == j {
                    continue;
                }
                let target = -(m[i][j] as i64);
                // the unique 0 ≤ n_ij < n_i and 0 ≤ p_ij < g
                let (nij, pij) = (0..n64 / g)
                    .flat_map(|a| (0..g).map(move |b| (a, b)))
                    .find(|&(a, b)| (target - a * c - b).rem_euclid(n64) == 0)
                    .expect("a solution always exists");
                params.n_ij[i][j] = nij as u32;
                params.p_ij[i][j] = pij as u32;
                params.o_ij[i][j] = (target - nij * c - pij) / n64;
            }
        }
        params
    }

    /// Kubota-type data at `i` exists when every `p_ij` vanishes.
    pub fn kubota_available(&self, i: usize) -> Result<(), CoeffError> {
        match (0..self.n_i.len()).find(|&j| j != i && self.p_ij[i][j] != 0) {
            Some(other) => Err(CoeffError::MissingNij { index: i, other }),
            None => Ok(()),
        }
    }
}

impl MdsConfig {
    pub fn new(field: &FieldRef, n: u32, m: Vec<Vec<i64>>) -> Result<Self, CoeffError> {
        if n % 2 != 0 {
            return Err(CoeffError::InvalidConfig(format!("character order {n} must be even")));
        }
        let chi = MultChar::new(field, n).map_err(|e| CoeffError::InvalidConfig(e.to_string()))?;
        let r = m.len();
        if r == 0 || m.iter().any(|row| row.len() != r) {
            return Err(CoeffError::InvalidConfig("M must be a nonempty square matrix".into()));
        }
        let m: Vec<Vec<u32>> =
            m.iter().map(|row| row.iter().map(|&v| v.rem_euclid(n as i64) as u32).collect()).collect();
        for i in 0..r {
            for j in 0..r {
                if m[i][j] != m[j][i] {
                    return Err(CoeffError::InvalidConfig("M must be symmetric".into()));
                }
            }
        }
        let params = MdsParams::derive(n, &m);
        let gauss = (0..n).map(|j| gauss_sum(&chi.pow(j as i64))).collect();
        Ok(MdsConfig {
            ring: PolyRing::new(field),
            chi,
            n,
            m,
            params,
            gauss: Arc::new(gauss),
            local_gauss: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// The same field and character with a different matrix.
    pub fn with_matrix(&self, m: Vec<Vec<u32>>) -> Self {
        let params = MdsParams::derive(self.n, &m);
        MdsConfig { m, params, ..self.clone() }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &FieldRef {
        self.ring.field()
    }

    pub fn q(&self) -> u64 {
        self.ring.q()
    }

    pub fn chi(&self) -> &MultChar {
        &self.chi
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.m
    }

    pub fn params(&self) -> &MdsParams {
        &self.params
    }

    /// `ζ_n^k`.
    pub fn zeta(&self, k: i64) -> CycNum {
        CycNum::root_of_unity(self.n, k)
    }

    /// `χ(−1) = ζ_n^{k}`, returning `k`.
    pub fn chi_minus_one(&self) -> u32 {
        self.chi.exponent(self.field().neg(1)).unwrap()
    }

    /// Exponent `a` with `ξχ^M = χ^a`.
    pub fn xi_chi(&self, m: u32) -> u32 {
        (m + self.n / 2) % self.n
    }

    /// Finite-field Gauss sum of `χ^j`.
    pub fn gauss(&self, j: i64) -> CycNum {
        self.gauss[j.rem_euclid(self.n as i64) as usize].clone()
    }

    /// `g_{χ^j}(1, π)` for a prime `π`, memoized.
    pub fn local_gauss(&self, pi: &Poly, j: i64) -> CycNum {
        let j = j.rem_euclid(self.n as i64) as u32;
        let key = (pi.clone(), j);
        if let Some(v) = self.local_gauss.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = ff_gauss_sum(&self.ring, &Poly::one(), pi, &self.chi.pow(j as i64));
        self.local_gauss.lock().unwrap().insert(key, v.clone());
        v
    }

    /// `q^e` as an exact number, `e` possibly negative.
    pub fn q_pow(&self, e: i64) -> CycNum {
        CycNum::from_int(self.q() as i64).pow(e).unwrap()
    }

    /// Exponent of the residue symbol `(f/g)_χ`, `None` when not coprime.
    pub fn res_exp(&self, f: &Poly, g: &Poly) -> Option<u32> {
        self.ring.residue_exponent(f, g, &self.chi)
    }

    /// `(f/g)_χ^e` with the convention that exponent `0 mod n` gives 1.
    pub fn symbol_pow(&self, f: &Poly, g: &Poly, e: i64) -> CycNum {
        if e.rem_euclid(self.n as i64) == 0 {
            return CycNum::one();
        }
        match self.res_exp(f, g) {
            None => CycNum::zero(),
            Some(k) => self.zeta(k as i64 * e),
        }
    }

    /// The conjugate matrix `ρ M ρ^{−1}` for the cycle moving index `i` to the end.
    pub fn move_to_end(&self, i: usize) -> (Vec<usize>, Vec<Vec<u32>>) {
        let r = self.rank();
        let mut order: Vec<usize> = (0..r).filter(|&j| j != i).collect();
        order.push(i);
        let m = order.iter().map(|&a| order.iter().map(|&b| self.m[a][b]).collect()).collect();
        (order, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    #[test]
    fn params_for_the_dirichlet_pair() {
        let p = MdsParams::derive(4, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(p.n_i, vec![2, 2]);
        // −1 = 1·2 + (−1)·4 + 1 is the only solution with p < gcd(4, 2) = 2
        assert_eq!(p.n_ij[0][1], 1);
        assert_eq!(p.p_ij[0][1], 1);
        assert_eq!(p.o_ij[0][1], -1);
        assert_eq!(p.e_ij, vec![vec![0, 1], vec![1, 0]]);
        assert!(p.kubota_available(0).is_err());
    }

    #[test]
    fn params_identity_holds() {
        for n in [2u32, 4, 6, 8] {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let m = vec![vec![a, b], vec![b, c]];
                        let p = MdsParams::derive(n, &m);
                        for i in 0..2 {
                            let j = 1 - i;
                            let ci = m[i][i] as i64 + n as i64 / 2;
                            let g = gcd(n as i64, ci);
                            assert_eq!(p.n_i[i] as i64, n as i64 / g);
                            assert!((p.n_ij[i][j] as i64) < n as i64 / g && (p.p_ij[i][j] as i64) < g);
                            let rhs = p.n_ij[i][j] as i64 * ci + p.o_ij[i][j] * n as i64 + p.p_ij[i][j] as i64;
                            assert_eq!(-(m[i][j] as i64), rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_variable_orders() {
        let p = MdsParams::derive(4, &[vec![3]]);
        assert_eq!(p.n_i, vec![4]);
        let f = Field::build(5, 1, None).unwrap();
        assert!(MdsConfig::new(&f, 3, vec![vec![0]]).is_err());
        assert!(MdsConfig::new(&f, 4, vec![vec![0, 1], vec![2, 0]]).is_err());
    }
}
