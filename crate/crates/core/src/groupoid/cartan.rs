//! Finite root systems of Cartan type: Gram matrices of the simple roots and
//! the Weyl group generated by simple reflections.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use super::GroupoidError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for CartanType {
    type Err = GroupoidError;
    fn from_str(s: &str) -> Result<Self, GroupoidError> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            _ => Err(GroupoidError::UnsupportedType(s.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `⟨α_i, α_j⟩` for the simple roots, normalized so short roots have `⟨α, α⟩ = 2`.
/// Numbering follows Bourbaki.
pub fn gram_matrix(ty: CartanType, rank: usize) -> Result<Vec<Vec<i64>>, GroupoidError> {
    use CartanType::*;
    let bad = || GroupoidError::UnsupportedType(format!("{ty}{rank}"));
    let ok = match ty {
        A => rank >= 1,
        B | C => rank >= 2,
        D => rank >= 3,
        E => (6..=8).contains(&rank),
        F => rank == 4,
        G => rank == 2,
    };
    if !ok {
        return Err(bad());
    }
    let mut g = vec![vec![0i64; rank]; rank];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match ty {
        A => {
            for i in 0..rank {
                g[i][i] = 2;
                if i + 1 < rank {
                    link(&mut g, i, i + 1, -1);
                }
            }
        }
        B => {
            for i in 0..rank {
                g[i][i] = if i + 1 < rank { 4 } else { 2 };
                if i + 1 < rank {
                    link(&mut g, i, i + 1, -2);
                }
            }
        }
        C => {
            for i in 0..rank {
                g[i][i] = if i + 1 < rank { 2 } else { 4 };
                if i + 2 < rank {
                    link(&mut g, i, i + 1, -1);
                } else if i + 1 < rank {
                    link(&mut g, i, i + 1, -2);
                }
            }
        }
        D => {
            for i in 0..rank {
                g[i][i] = 2;
            }
            for i in 0..rank - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, rank - 3, rank - 1, -1);
        }
        E => {
            for i in 0..rank {
                g[i][i] = 2;
            }
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..rank - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    Ok(g)
}

/// Cartan integers `a_ij = 2⟨α_i, α_j⟩ / ⟨α_i, α_i⟩`.
pub fn cartan_matrix(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    gram.iter().enumerate().map(|(i, row)| row.iter().map(|&v| 2 * v / gram[i][i]).collect()).collect()
}

/// One Weyl group element, recorded by its action on the simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// A reduced word in the simple reflections (0-based indices).
    pub word: Vec<usize>,
    /// Column `j` is `w(α_j)` in simple-root coordinates.
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// `w(v)` for `v` in simple-root coordinates.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let r = v.len();
        (0..r).map(|i| (0..r).map(|j| self.matrix[i][j] * v[j]).sum()).collect()
    }
}

/// All elements of the Weyl group, by breadth-first search on the Cayley
/// graph, so each word is reduced and the length is its distance from 1.
pub fn weyl_group(ty: CartanType, rank: usize) -> Result<Vec<WeylElement>, GroupoidError> {
    let a = cartan_matrix(&gram_matrix(ty, rank)?);
    let r = rank;
    // s_i(α_j) = α_j − a_ij α_i
    let simple: Vec<Vec<Vec<i64>>> = (0..r)
        .map(|i| {
            let mut m = vec![vec![0i64; r]; r];
            for j in 0..r {
                m[j][j] = 1;
                m[i][j] -= a[i][j];
            }
            m
        })
        .collect();
    let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut out = vec![WeylElement { word: vec![], matrix: id.clone() }];
    seen.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (i, s) in simple.iter().enumerate() {
            let m = mat_mul(s, &out[k].matrix);
            if seen.contains_key(&m) {
                continue;
            }
            let mut word = vec![i];
            word.extend_from_slice(&out[k].word);
            seen.insert(m.clone(), out.len());
            queue.push_back(out.len());
            out.push(WeylElement { word, matrix: m });
        }
    }
    Ok(out)
}

/// `ρ` in simple-root coordinates, scaled by 2 to stay integral.
pub fn two_rho(ty: CartanType, rank: usize) -> Result<Vec<i64>, GroupoidError> {
    let mut sum = vec![0i64; rank];
    for root in positive_roots(ty, rank)? {
        for (s, c) in sum.iter_mut().zip(root) {
            *s += c;
        }
    }
    Ok(sum)
}

/// Positive roots in simple-root coordinates, as the orbit of the simple
/// roots intersected with the positive cone.
pub fn positive_roots(ty: CartanType, rank: usize) -> Result<Vec<Vec<i64>>, GroupoidError> {
    let group = weyl_group(ty, rank)?;
    let mut roots: Vec<Vec<i64>> = Vec::new();
    for w in &group {
        for j in 0..rank {
            let col: Vec<i64> = (0..rank).map(|i| w.matrix[i][j]).collect();
            if col.iter().all(|&c| c >= 0) && !roots.contains(&col) {
                roots.push(col);
            }
        }
    }
    roots.sort();
    Ok(roots)
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_group_orders() {
        use CartanType::*;
        for (ty, rank, order, roots) in
            [(A, 2, 6, 3), (A, 3, 24, 6), (B, 2, 8, 4), (C, 3, 48, 9), (D, 4, 192, 12), (G, 2, 12, 6), (F, 4, 1152, 24)]
        {
            assert_eq!(weyl_group(ty, rank).unwrap().len(), order, "{ty}{rank}");
            assert_eq!(positive_roots(ty, rank).unwrap().len(), roots, "{ty}{rank}");
        }
    }

    #[test]
    fn longest_element_has_length_equal_to_positive_root_count() {
        let g = weyl_group(CartanType::B, 3).unwrap();
        assert_eq!(g.iter().map(WeylElement::length).max(), Some(9));
    }

    #[test]
    fn unsupported_ranks() {
        assert!(gram_matrix(CartanType::G, 3).is_err());
        assert!(gram_matrix(CartanType::E, 5).is_err());
        assert!("X".parse::<CartanType>().is_err());
    }
}
