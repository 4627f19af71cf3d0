//! Bicharacters on `Z^r`, their simple reflections, and the Weyl groupoid of
//! ordered bases, with the translation from a basis to the matrix `M` of a
//! multiple Dirichlet series.
//!
//! Roots of unity are stored as exponents of `ζ_N` for a fixed even `N`.

pub mod cartan;
mod enumerate;

pub use cartan::{cartan_matrix, gram_matrix, positive_roots, two_rho, weyl_group, CartanType, WeylElement};
pub use enumerate::{cone_cover_check, groupoid_enumerate, ConeReport, GroupoidEdge, GroupoidGraph, GroupoidObject};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::CycNum;
use crate::feq::tau_apply;
use crate::mdcoeff::MdsParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("χ̂(e_{0}, e_{0}) = 1, so the basis is not admissible there")]
    InadmissibleDiagonal(usize),
    #[error("basis is not admissible at index {0}")]
    Inadmissible(usize),
    #[error("value ζ_{order}^{exponent} is not a power of the chosen generator")]
    NotInGeneGroup { order: u32, exponent: u32 },
    #[error("the generator must have even order, got {0}")]
    OddGene(u32),
    #[error("unsupported root system {0}")]
    UnsupportedType(String),
    #[error("groupoid enumeration was truncated at {0} bases")]
    Truncated(usize),
    #[error("basis coordinates left the 64-bit range")]
    CoordinateOverflow,
    #[error("{0}")]
    Invalid(String),
}

/// How a simple reflection at a node translates into a functional equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectionKind {
    Kubota,
    Dirichlet,
    Neither,
}

impl fmt::Display for ReflectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReflectionKind::Kubota => "kubota",
            ReflectionKind::Dirichlet => "dirichlet",
            ReflectionKind::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// Where a bicharacter comes from.
#[derive(Debug, Clone)]
pub enum BicharSource {
    /// `q_ii = −gene^{M_ii}` and `q̃_ij = gene^{M_ij}` with `gene = ζ_n`.
    Matrix { n: u32, m: Vec<Vec<i64>> },
    /// `χ̂(a, b) = v^{⟨a, b⟩}` on the root lattice with `v = ζ_order^v`.
    Cartan { ty: CartanType, rank: usize, order: u32, v: u32 },
    /// A generalized Dynkin diagram: node labels `q_ii` and edge labels `q̃_ij`
    /// as exponents of `ζ_order`. Missing edges mean `q̃_ij = 1`.
    Dynkin { order: u32, nodes: Vec<u32>, edges: Vec<(usize, usize, u32)> },
}

/// The data `(q_ii, q̃_ij)` of a bicharacter relative to an ordered basis,
/// together with that basis written in the original coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BicharState {
    order: u32,
    qdiag: Vec<u32>,
    qsym: Vec<Vec<u32>>,
    basis: Vec<Vec<i64>>,
}

/// Canonical key of an equivalence class of bases.
pub type ClassKey = (Vec<u32>, Vec<Vec<u32>>);

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn bicharacter_build(source: &BicharSource) -> Result<BicharState, GroupoidError> {
    let (order, qdiag, qsym) = match source {
        BicharSource::Matrix { n, m } => {
            let n = *n;
            if n == 0 || n % 2 != 0 {
                return Err(GroupoidError::OddGene(n));
            }
            let r = m.len();
            if m.iter().any(|row| row.len() != r) {
                return Err(GroupoidError::Invalid("M must be square".into()));
            }
            let red = |v: i64| v.rem_euclid(n as i64) as u32;
            for i in 0..r {
                for j in 0..r {
                    if red(m[i][j]) != red(m[j][i]) {
                        return Err(GroupoidError::Invalid("M must be symmetric".into()));
                    }
                }
            }
            let qdiag: Vec<u32> = (0..r).map(|i| (red(m[i][i]) + n / 2) % n).collect();
            let qsym = (0..r).map(|i| (0..r).map(|j| if i == j { 2 * qdiag[i] % n } else { red(m[i][j]) }).collect()).collect();
            (n, qdiag, qsym)
        }
        BicharSource::Cartan { ty, rank, order, v } => {
            let gram = gram_matrix(*ty, *rank)?;
            let order = *order;
            if order == 0 {
                return Err(GroupoidError::Invalid("root of unity order must be positive".into()));
            }
            let pw = |e: i64| (e * *v as i64).rem_euclid(order as i64) as u32;
            // χ̂(α_i, α_i) = v^{⟨α_i, α_i⟩}, χ̂(α_i, α_j)χ̂(α_j, α_i) = v^{2⟨α_i, α_j⟩}
            let qdiag: Vec<u32> = (0..*rank).map(|i| pw(gram[i][i])).collect();
            let qsym = (0..*rank).map(|i| (0..*rank).map(|j| pw(2 * gram[i][j])).collect()).collect();
            (order, qdiag, qsym)
        }
        BicharSource::Dynkin { order, nodes, edges } => {
            let r = nodes.len();
            let order = *order;
            let mut qsym: Vec<Vec<u32>> =
                (0..r).map(|i| (0..r).map(|j| if i == j { 2 * nodes[i] % order } else { 0 }).collect()).collect();
            for &(a, b, e) in edges {
                if a >= r || b >= r || a == b {
                    return Err(GroupoidError::Invalid(format!("bad edge ({a}, {b})")));
                }
                qsym[a][b] = e % order;
                qsym[b][a] = e % order;
            }
            (order, nodes.iter().map(|&e| e % order).collect(), qsym)
        }
    };
    // keep N even so that −1 is always representable
    let (order, qdiag, qsym) = if order % 2 == 1 {
        (2 * order, qdiag.iter().map(|e| 2 * e).collect(), qsym.iter().map(|row| row.iter().map(|e| 2 * e).collect()).collect())
    } else {
        (order, qdiag, qsym)
    };
    let r = qdiag.len();
    if r == 0 {
        return Err(GroupoidError::Invalid("rank must be positive".into()));
    }
    if let Some(i) = qdiag.iter().position(|&e| e == 0) {
        return Err(GroupoidError::InadmissibleDiagonal(i));
    }
    let basis = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    Ok(BicharState { order, qdiag, qsym, basis })
}

impl BicharState {
    pub fn rank(&self) -> usize {
        self.qdiag.len()
    }

    /// `N`: every stored value is a power of `ζ_N`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent of `q_ii = χ̂(e_i, e_i)`.
    pub fn qdiag_exp(&self, i: usize) -> u32 {
        self.qdiag[i]
    }

    /// Exponent of `q̃_ij = χ̂(e_i, e_j)χ̂(e_j, e_i)`.
    pub fn qsym_exp(&self, i: usize, j: usize) -> u32 {
        self.qsym[i][j]
    }

    pub fn qdiag(&self, i: usize) -> CycNum {
        CycNum::root_of_unity(self.order, self.qdiag[i] as i64)
    }

    pub fn qsym(&self, i: usize, j: usize) -> CycNum {
        CycNum::root_of_unity(self.order, self.qsym[i][j] as i64)
    }

    /// Row `k` is the basis vector `e_k` in the original coordinates.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn class_key(&self) -> ClassKey {
        let r = self.rank();
        let sym = (0..r).map(|i| (0..r).map(|j| if i == j { 0 } else { self.qsym[i][j] }).collect()).collect();
        (self.qdiag.clone(), sym)
    }

    pub fn is_admissible(&self, i: usize) -> bool {
        self.qdiag[i] != 0
    }

    fn order_of(&self, e: u32) -> u32 {
        (self.order as u64 / gcd(self.order as u64, e as u64)) as u32
    }

    /// `m_ij = min { m ≥ 0 : q_ii^{m+1} = 1 or q_ii^m q̃_ij = 1 }`.
    pub fn m_ij(&self, i: usize, j: usize) -> Result<u32, GroupoidError> {
        if !self.is_admissible(i) {
            return Err(GroupoidError::Inadmissible(i));
        }
        if i == j {
            return Ok(0);
        }
        let n = self.order as u64;
        let d = self.qdiag[i] as u64;
        let s = self.qsym[i][j] as u64;
        let ord = self.order_of(self.qdiag[i]) as u64;
        Ok((0..ord).find(|&m| (m * d + s) % n == 0).unwrap_or(ord - 1) as u32)
    }

    /// Re-express the data in the basis `e′_k = Σ_a coeffs[k][a] e_a`.
    fn change_basis(&self, coeffs: &[Vec<i64>]) -> Result<BicharState, GroupoidError> {
        let r = self.rank();
        let n = self.order as i64;
        let d: Vec<i64> = self.qdiag.iter().map(|&x| x as i64).collect();
        let s = |a: usize, b: usize| self.qsym[a][b] as i64;
        let pair = |k: usize, l: usize| -> i64 {
            let mut acc = 0i64;
            for a in 0..r {
                acc += 2 * coeffs[k][a] * coeffs[l][a] * d[a];
                for b in a + 1..r {
                    acc += s(a, b) * (coeffs[k][a] * coeffs[l][b] + coeffs[k][b] * coeffs[l][a]);
                }
            }
            acc
        };
        let diag = |k: usize| -> i64 {
            let mut acc = 0i64;
            for a in 0..r {
                acc += coeffs[k][a] * coeffs[k][a] * d[a];
                for b in a + 1..r {
                    acc += s(a, b) * coeffs[k][a] * coeffs[k][b];
                }
            }
            acc
        };
        let qdiag = (0..r).map(|k| diag(k).rem_euclid(n) as u32).collect();
        let qsym = (0..r).map(|k| (0..r).map(|l| pair(k, l).rem_euclid(n) as u32).collect()).collect();
        let mut basis = vec![vec![0i64; r]; r];
        for k in 0..r {
            for c in 0..r {
                for a in 0..r {
                    basis[k][c] = coeffs[k][a]
                        .checked_mul(self.basis[a][c])
                        .and_then(|t| t.checked_add(basis[k][c]))
                        .ok_or(GroupoidError::CoordinateOverflow)?;
                }
            }
        }
        Ok(BicharState { order: self.order, qdiag, qsym, basis })
    }

    /// The basis `s_{i,E}(E)`: `e_i ↦ −e_i`, `e_j ↦ e_j + m_ij e_i`.
    pub fn reflect(&self, i: usize) -> Result<BicharState, GroupoidError> {
        let r = self.rank();
        let mut coeffs = vec![vec![0i64; r]; r];
        for j in 0..r {
            if j == i {
                coeffs[j][i] = -1;
            } else {
                coeffs[j][j] = 1;
                coeffs[j][i] = self.m_ij(i, j)? as i64;
            }
        }
        self.change_basis(&coeffs)
    }

    /// The image of a vector given in the current basis coordinates under `s_{i,E}`,
    /// again in current basis coordinates.
    pub fn reflect_coords(&self, i: usize, a: &[i64]) -> Result<Vec<i64>, GroupoidError> {
        let mut out = a.to_vec();
        out[i] = -a[i];
        for j in (0..self.rank()).filter(|&j| j != i) {
            out[i] += self.m_ij(i, j)? as i64 * a[j];
        }
        Ok(out)
    }

    pub fn classify(&self, i: usize) -> Result<ReflectionKind, GroupoidError> {
        if !self.is_admissible(i) {
            return Err(GroupoidError::Inadmissible(i));
        }
        let n = self.order as u64;
        if self.qdiag[i] as u64 * 2 == n {
            return Ok(ReflectionKind::Dirichlet);
        }
        let g = gcd(n, self.qdiag[i] as u64);
        let powers = (0..self.rank()).filter(|&j| j != i).all(|j| self.qsym[i][j] as u64 % g == 0);
        Ok(if powers { ReflectionKind::Kubota } else { ReflectionKind::Neither })
    }

    /// Order of the generator `gene = ζ_N^g`, which must be even.
    pub fn gene_order(&self, gene: u32) -> Result<u32, GroupoidError> {
        let n = self.order_of(gene % self.order);
        if n % 2 != 0 {
            return Err(GroupoidError::OddGene(n));
        }
        Ok(n)
    }

    /// `M^{χ̂,E,gene}` for `gene = ζ_N^g`: `gene^{M_ii} = −q_ii`, `gene^{M_ij} = q̃_ij`.
    pub fn object_matrix(&self, gene: u32) -> Result<Vec<Vec<u32>>, GroupoidError> {
        let n = self.gene_order(gene)?;
        let big = self.order as u64;
        let log = |e: u32| -> Result<u32, GroupoidError> {
            (0..n)
                .find(|&m| (m as u64 * gene as u64) % big == e as u64 % big)
                .ok_or(GroupoidError::NotInGeneGroup { order: self.order, exponent: e })
        };
        let r = self.rank();
        let mut m = vec![vec![0u32; r]; r];
        for i in 0..r {
            for j in 0..r {
                m[i][j] = if i == j { log((self.qdiag[i] + self.order / 2) % self.order)? } else { log(self.qsym[i][j])? };
            }
        }
        Ok(m)
    }

    /// The bicharacter identities behind the translation to functional
    /// equations: for a Kubota node the reflected matrix is unchanged and
    /// `m_ij = n_ij`; for a Dirichlet node it is `τ_i(M)` and `m_ij = e_ij`.
    pub fn translation_identity_holds(&self, i: usize, gene: u32) -> Result<bool, GroupoidError> {
        let n = self.gene_order(gene)?;
        let m = self.object_matrix(gene)?;
        let reflected = self.reflect(i)?.object_matrix(gene)?;
        let params = MdsParams::derive(n, &m);
        let r = self.rank();
        match self.classify(i)? {
            ReflectionKind::Kubota => {
                let mij_ok = (0..r).filter(|&j| j != i).all(|j| self.m_ij(i, j).ok() == Some(params.n_ij[i][j]));
                Ok(reflected == m && mij_ok)
            }
            ReflectionKind::Dirichlet => {
                let tau = tau_apply(i, &m, n).map_err(|e| GroupoidError::Invalid(e.to_string()))?;
                let mij_ok = (0..r).filter(|&j| j != i).all(|j| self.m_ij(i, j).ok() == Some(params.e_ij[i][j]));
                Ok(reflected == tau && mij_ok)
            }
            ReflectionKind::Neither => Ok(true),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feq::{sigma_apply, FeKind};
    use crate::ffield::Field;
    use crate::mdcoeff::MdsConfig;
    use proptest::prelude::*;

    fn off_diagonal(n: u32) -> BicharState {
        bicharacter_build(&BicharSource::Matrix { n, m: vec![vec![0, 1], vec![1, 0]] }).unwrap()
    }

    #[test]
    fn matrix_source_values() {
        let s = off_diagonal(4);
        assert_eq!(s.qdiag(0), CycNum::from_int(-1));
        assert_eq!(s.qsym(0, 1), CycNum::root_of_unity(4, 1));
        assert_eq!(s.object_matrix(1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(s.classify(0).unwrap(), ReflectionKind::Dirichlet);
    }

    #[test]
    fn cartan_a2_values_and_reflection() {
        // v = ζ_10, so 𝑞 = ζ_5
        let s = bicharacter_build(&BicharSource::Cartan { ty: CartanType::A, rank: 2, order: 10, v: 1 }).unwrap();
        assert_eq!(s.qdiag(0), CycNum::root_of_unity(5, 1));
        assert_eq!(s.qsym(0, 1), CycNum::root_of_unity(5, -1));
        assert_eq!(s.m_ij(0, 1).unwrap(), 1);
        let t = s.reflect(0).unwrap();
        // the Weyl reflection: α_1 ↦ −α_1, α_2 ↦ α_1 + α_2
        assert_eq!(t.basis(), &[vec![-1, 0], vec![1, 1]]);
        assert_eq!(t.class_key(), s.class_key());
        assert_eq!(s.classify(0).unwrap(), ReflectionKind::Kubota);
    }

    #[test]
    fn dirichlet_node_reflects_to_tau() {
        let s = off_diagonal(4);
        let t = s.reflect(0).unwrap();
        assert_eq!(t.object_matrix(1).unwrap(), vec![vec![0, 3], vec![3, 3]]);
        assert!(s.translation_identity_holds(0, 1).unwrap());
        assert!(t.translation_identity_holds(1, 1).unwrap());
        assert_eq!(t.classify(1).unwrap(), ReflectionKind::Kubota);
        assert_eq!(t.reflect(1).unwrap().object_matrix(1).unwrap(), t.object_matrix(1).unwrap());
    }

    #[test]
    fn neither_and_errors() {
        // q_11 = ζ_5, q̃_12 = ζ_3 inside ζ_30
        let s = bicharacter_build(&BicharSource::Dynkin { order: 30, nodes: vec![6, 15], edges: vec![(0, 1, 10)] }).unwrap();
        assert_eq!(s.classify(0).unwrap(), ReflectionKind::Neither);
        assert_eq!(s.classify(1).unwrap(), ReflectionKind::Dirichlet);
        let bad = bicharacter_build(&BicharSource::Dynkin { order: 4, nodes: vec![0], edges: vec![] });
        assert_eq!(bad.unwrap_err(), GroupoidError::InadmissibleDiagonal(0));
        // ζ_30^10 is not a power of ζ_30^3
        assert!(matches!(s.object_matrix(3), Err(GroupoidError::NotInGeneGroup { .. })));
        assert_eq!(s.gene_order(2).unwrap_err(), GroupoidError::OddGene(15));
    }

    #[test]
    fn pairing_with_sigma() {
        // ⟨s_i(a), x⟩_E = ⟨a, σ_i(x)⟩_E for all x amounts to: σ_i(x)^a = c·x^{s_i(a)}
        // with |c|² = q^{Σ s_i(a) − Σ a}.
        let field = Field::build(5, 1, None).unwrap();
        for (n, m) in [(4u32, vec![vec![0i64, 1], vec![1, 0]]), (4, vec![vec![0, 3], vec![3, 3]]), (4, vec![vec![3]])] {
            let state = bicharacter_build(&BicharSource::Matrix { n, m: m.clone() }).unwrap();
            let cfg = MdsConfig::new(&field, n, m).unwrap();
            for i in 0..state.rank() {
                let kind = match state.classify(i).unwrap() {
                    ReflectionKind::Kubota => FeKind::Kubota,
                    ReflectionKind::Dirichlet => FeKind::Dirichlet,
                    ReflectionKind::Neither => continue,
                };
                for a in [vec![1i64, 0], vec![0, 1], vec![2, -3], vec![-1, 4]] {
                    let a = &a[..state.rank()];
                    let (b, c) = sigma_apply(&cfg, kind, i, a).unwrap();
                    assert_eq!(b, state.reflect_coords(i, a).unwrap());
                    let shift: i64 = b.iter().sum::<i64>() - a.iter().sum::<i64>();
                    assert_eq!(&c * &c.conj(), cfg.q_pow(shift));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn reflection_is_involutive(order in prop::sample::select(vec![4u32, 6, 8, 10, 12]),
                                    d0 in 1u32..12, d1 in 1u32..12, s in 0u32..12, i in 0usize..2) {
            let d0 = d0 % order;
            let d1 = d1 % order;
            prop_assume!(d0 != 0 && d1 != 0);
            let st = bicharacter_build(&BicharSource::Dynkin { order, nodes: vec![d0, d1], edges: vec![(0, 1, s % order)] }).unwrap();
            let back = st.reflect(i).unwrap().reflect(i).unwrap();
            prop_assert_eq!(back, st);
        }

        #[test]
        fn identities_hold_on_classified_nodes(n in prop::sample::select(vec![2u32, 4, 6, 8]),
                                               a in 0i64..8, b in 0i64..8, c in 0i64..8, i in 0usize..2) {
            let st = bicharacter_build(&BicharSource::Matrix { n, m: vec![vec![a, b], vec![b, c]] });
            prop_assume!(st.is_ok());
            let st = st.unwrap();
            prop_assert!(st.translation_identity_holds(i, 1).unwrap());
        }
    }
}
