//! Brute-force small-degree Nichols algebras of diagonal type: graded pieces
//! as images of the quantum symmetrizer, and Betti numbers of the trivial
//! module from the multigraded normalized bar complex.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::NicholsError;
use crate::exactnum::CycNum;
use crate::groupoid::BicharState;
use crate::linalg::{Equation, Reducer};

/// Largest total degree the oracle accepts.
const MAX_DEGREE: u32 = 8;

type Word = Vec<u8>;
type Vector = BTreeMap<usize, CycNum>;

/// A braiding `c(x_a ⊗ x_b) = ζ_N^{b[a][b]} x_b ⊗ x_a` with one splitting of
/// `q̃_ab` into `χ̂(e_a, e_b)χ̂(e_b, e_a)`: all of it on the side `a < b`.
pub fn braiding_from_state(state: &BicharState) -> (u32, Vec<Vec<u32>>) {
    let r = state.rank();
    let b = (0..r)
        .map(|a| {
            (0..r)
                .map(|c| match a.cmp(&c) {
                    std::cmp::Ordering::Equal => state.qdiag_exp(a),
                    std::cmp::Ordering::Less => state.qsym_exp(a, c),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect();
    (state.order(), b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn words_of(deg: &[u32]) -> Vec<Word> {
    let total: u32 = deg.iter().sum();
    let mut out: Vec<Word> = vec![vec![]];
    for _ in 0..total {
        out = out.into_iter().flat_map(|w| (0..deg.len() as u8).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out.retain(|w| (0..deg.len()).all(|a| w.iter().filter(|&&x| x as usize == a).count() as u32 == deg[a]));
    out
}

/// One graded piece `𝔅_d⃗`: a basis of word classes and the reduced rows
/// used to expand any word in it.
#[derive(Debug, Clone)]
struct Piece {
    index: HashMap<Word, usize>,
    basis: Vec<Word>,
    /// Pivot coordinate and the combination of basis words realizing that row.
    rows: Vec<(usize, Vec<(usize, CycNum)>)>,
}

#[derive(Debug, Clone)]
pub struct NicholsAlgebra {
    rank: usize,
    order: u32,
    braid: Vec<Vec<u32>>,
    bound: u32,
    perms: HashMap<usize, Vec<Vec<usize>>>,
    pieces: BTreeMap<Vec<u32>, Piece>,
    expansions: HashMap<Word, Vector>,
}

impl NicholsAlgebra {
    /// Builds every graded piece of total degree at most `bound`.
    pub fn new(order: u32, braid: Vec<Vec<u32>>, bound: u32) -> Result<Self, NicholsError> {
        if bound > MAX_DEGREE {
            return Err(NicholsError::DegreeTooLarge(bound));
        }
        let rank = braid.len();
        let mut alg = NicholsAlgebra {
            rank,
            order,
            braid,
            bound,
            perms: HashMap::new(),
            pieces: BTreeMap::new(),
            expansions: HashMap::new(),
        };
        for deg in degrees_up_to(rank, bound) {
            let piece = alg.build_piece(&deg);
            alg.pieces.insert(deg, piece);
        }
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// `Ω(x_s)` over the words of the same multidegree, by the Matsumoto lift:
    /// `τ` contributes `∏_{i<j, τ(i)>τ(j)} χ̂(e_{s_i}, e_{s_j})` times the permuted word.
    fn symmetrize(&mut self, s: &[u8], index: &HashMap<Word, usize>) -> Vector {
        let n = s.len();
        let big = self.order as usize;
        let perms = self.perms.entry(n).or_insert_with(|| permutations(n)).clone();
        let mut counts: HashMap<usize, Vec<i64>> = HashMap::new();
        for tau in &perms {
            let mut word = vec![0u8; n];
            let mut e = 0u64;
            for i in 0..n {
                word[tau[i]] = s[i];
                for j in i + 1..n {
                    if tau[i] > tau[j] {
                        e += self.braid[s[i] as usize][s[j] as usize] as u64;
                    }
                }
            }
            counts.entry(index[&word]).or_insert_with(|| vec![0; big])[(e % big as u64) as usize] += 1;
        }
        counts
            .into_iter()
            .map(|(k, c)| (k, CycNum::from_root_counts(self.order, &c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn build_piece(&mut self, deg: &[u32]) -> Piece {
        let words = words_of(deg);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let width = words.len();
        let mut span = Reducer::new();
        let mut tagged = Reducer::new();
        let mut basis = Vec::new();
        let images: Vec<Vector> = words.iter().map(|w| self.symmetrize(w, &index)).collect();
        for (w, img) in words.iter().zip(&images) {
            let mut eq = Equation::new();
            for (&k, c) in img {
                eq.add_term(k, c);
            }
            let before = span.rank();
            span.push(eq.clone());
            if span.rank() == before {
                continue;
            }
            eq.add_term(width + basis.len(), &CycNum::one());
            tagged.push(eq);
            basis.push(w.clone());
        }
        let rows = tagged
            .pivot_rows()
            .map(|(p, row)| {
                let combo = row.coeffs.iter().filter(|(&k, _)| k >= width).map(|(&k, c)| (k - width, c.clone())).collect();
                (p, combo)
            })
            .collect();
        Piece { index, basis, rows }
    }

    pub fn dimension(&self, deg: &[u32]) -> usize {
        self.pieces.get(deg).map_or(0, |p| p.basis.len())
    }

    /// All graded dimensions up to the bound.
    pub fn dimensions(&self) -> BTreeMap<Vec<u32>, usize> {
        self.pieces.iter().map(|(d, p)| (d.clone(), p.basis.len())).collect()
    }

    /// The class of a word in the basis of its graded piece.
    fn expand(&mut self, w: &[u8]) -> Vector {
        if let Some(v) = self.expansions.get(w) {
            return v.clone();
        }
        let mut deg = vec![0u32; self.rank];
        for &a in w {
            deg[a as usize] += 1;
        }
        let piece = self.pieces[&deg].clone();
        let img = self.symmetrize(w, &piece.index);
        let mut out: Vector = BTreeMap::new();
        for (p, combo) in &piece.rows {
            let Some(c) = img.get(p) else { continue };
            for (l, t) in combo {
                let e = out.entry(*l).or_insert_with(CycNum::zero);
                *e += &(c * t);
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.expansions.insert(w.to_vec(), out.clone());
        out
    }

    /// `[b_a][b_b]` for basis elements of the pieces `da` and `db`.
    fn product(&mut self, da: &[u32], a: usize, db: &[u32], b: usize) -> Vector {
        let mut w = self.pieces[da].basis[a].clone();
        w.extend_from_slice(&self.pieces[db].basis[b]);
        self.expand(&w)
    }

    /// `dim Tor_j(k, k)_d⃗` for `1 ≤ Σd ≤ bound`, which equals the Betti
    /// number `h(j, d⃗)`, from the normalized bar complex.
    pub fn bar_betti(&mut self) -> BTreeMap<(u32, Vec<u32>), u64> {
        let mut out = BTreeMap::new();
        let degrees: Vec<Vec<u32>> = self.pieces.keys().filter(|d| d.iter().any(|&x| x > 0)).cloned().collect();
        for total in &degrees {
            let n: u32 = total.iter().sum();
            let chains: Vec<Vec<Cell>> = (0..=n + 1).map(|j| self.chain_basis(total, j)).collect();
            let mut ranks = vec![0usize; n as usize + 2];
            for j in 2..=n as usize {
                ranks[j] = self.boundary_rank(&chains[j], &chains[j - 1]);
            }
            for j in 1..=n as usize {
                let dim = chains[j].len() - ranks[j] - ranks.get(j + 1).copied().unwrap_or(0);
                out.insert((j as u32, total.clone()), dim as u64);
            }
        }
        out
    }

    /// Basis of `B̄^{⊗j}` in multidegree `total`: a composition into nonzero
    /// parts and a basis index in each part.
    fn chain_basis(&self, total: &[u32], j: u32) -> Vec<Cell> {
        let mut out = Vec::new();
        for parts in compositions(total, j) {
            let dims: Vec<usize> = parts.iter().map(|p| self.dimension(p)).collect();
            if dims.contains(&0) {
                continue;
            }
            let mut idx: Vec<Vec<usize>> = vec![vec![]];
            for &d in &dims {
                idx = idx.into_iter().flat_map(|p| (0..d).map(move |x| [p.clone(), vec![x]].concat())).collect();
            }
            for ix in idx {
                out.push((parts.clone(), ix));
            }
        }
        out
    }

    fn boundary_rank(&mut self, src: &[Cell], dst: &[Cell]) -> usize {
        let pos: HashMap<&Cell, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut red = Reducer::new();
        for (parts, ix) in src {
            let mut eq = Equation::new();
            for k in 0..parts.len() - 1 {
                let sign = if k % 2 == 0 { -CycNum::one() } else { CycNum::one() };
                let merged: Vec<u32> = parts[k].iter().zip(&parts[k + 1]).map(|(a, b)| a + b).collect();
                let prod = self.product(&parts[k], ix[k], &parts[k + 1], ix[k + 1]);
                for (l, c) in prod {
                    let mut np = parts[..k].to_vec();
                    np.push(merged.clone());
                    np.extend_from_slice(&parts[k + 2..]);
                    let mut ni = ix[..k].to_vec();
                    ni.push(l);
                    ni.extend_from_slice(&ix[k + 2..]);
                    let target = pos[&(np, ni)];
                    eq.add_term(target, &(&c * &sign));
                }
            }
            red.push(eq);
        }
        red.rank()
    }
}

type Cell = (Vec<Vec<u32>>, Vec<usize>);

fn degrees_up_to(rank: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p| (0..=bound).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.retain(|d| d.iter().sum::<u32>() <= bound);
    out
}

/// Ordered decompositions of `total` into `j` nonzero multidegrees.
fn compositions(total: &[u32], j: u32) -> Vec<Vec<Vec<u32>>> {
    if j == 0 {
        return if total.iter().all(|&x| x == 0) { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in degrees_up_to(total.len(), total.iter().sum()) {
        if first.iter().all(|&x| x == 0) || first.iter().zip(total).any(|(a, b)| a > b) {
            continue;
        }
        let rest: Vec<u32> = total.iter().zip(&first).map(|(a, b)| a - b).collect();
        for tail in compositions(&rest, j - 1) {
            let mut c = vec![first.clone()];
            c.extend(tail);
            out.push(c);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallOracle {
    pub dimensions: BTreeMap<Vec<u32>, usize>,
    pub betti: BTreeMap<(u32, Vec<u32>), u64>,
}

/// Graded dimensions and Betti numbers of `𝔅(V)` for the braiding of `state`
/// through total degree `bound`.
pub fn nichols_small_oracle(state: &BicharState, bound: u32) -> Result<SmallOracle, NicholsError> {
    let (order, braid) = braiding_from_state(state);
    let mut alg = NicholsAlgebra::new(order, braid, bound)?;
    let betti = alg.bar_betti();
    Ok(SmallOracle { dimensions: alg.dimensions(), betti })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{bicharacter_build, BicharSource};

    #[test]
    fn rank_one_dimensions_stop_at_the_order() {
        for m in [2u32, 3, 4, 5] {
            let alg = NicholsAlgebra::new(m, vec![vec![1]], m + 1).unwrap();
            for d in 0..=m + 1 {
                assert_eq!(alg.dimension(&[d]), (d < m) as usize, "m={m} d={d}");
            }
        }
    }

    #[test]
    fn rank_one_bar_complex_matches_the_resolution() {
        let mut alg = NicholsAlgebra::new(3, vec![vec![1]], 7).unwrap();
        let betti = alg.bar_betti();
        for ((j, d), h) in betti {
            let hit = (j % 2 == 0 && d[0] == (j / 2) * 3) || (j % 2 == 1 && d[0] == (j / 2) * 3 + 1);
            assert_eq!(h, hit as u64, "j={j} d={d:?}");
        }
    }

    #[test]
    fn a2_at_order_three_has_the_small_quantum_group_dimensions() {
        // q = ζ_3: x1, x2, x1x2, x2x1 survive; the quantum Serre relations kill degree (2,1) and (1,2) partly
        let st = bicharacter_build(&BicharSource::Cartan { ty: crate::groupoid::CartanType::A, rank: 2, order: 6, v: 1 }).unwrap();
        let oracle = nichols_small_oracle(&st, 3).unwrap();
        assert_eq!(oracle.dimensions[&vec![0, 0]], 1);
        assert_eq!(oracle.dimensions[&vec![1, 0]], 1);
        assert_eq!(oracle.dimensions[&vec![1, 1]], 2);
        assert_eq!(oracle.dimensions[&vec![2, 1]], 2);
        assert_eq!(oracle.dimensions[&vec![3, 0]], 0);
    }

    #[test]
    fn too_large_degrees_are_refused() {
        assert!(matches!(NicholsAlgebra::new(3, vec![vec![1]], 9), Err(NicholsError::DegreeTooLarge(9))));
    }
}
