//! Breadth-first enumeration of the bases reachable by simple reflections,
//! grouped into equivalence classes, and the cone covering check.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BicharState, ClassKey, GroupoidError, ReflectionKind};

#[derive(Debug, Clone, Serialize)]
pub struct GroupoidObject {
    pub id: usize,
    /// `M^{χ̂,E′,gene}`, or `None` when some value is not a power of the generator.
    pub matrix: Option<Vec<Vec<u32>>>,
    pub qdiag: Vec<u32>,
    pub qsym: Vec<Vec<u32>>,
    #[serde(skip)]
    pub representative: BicharState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupoidEdge {
    pub from: usize,
    pub index: usize,
    pub to: usize,
    pub kind: ReflectionKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupoidGraph {
    pub order: u32,
    pub gene: u32,
    pub objects: Vec<GroupoidObject>,
    pub edges: Vec<GroupoidEdge>,
    pub base_count: usize,
    pub truncated: bool,
    /// Indices that were skipped because the basis was not admissible there.
    pub skipped: usize,
    #[serde(skip)]
    pub bases: Vec<(Vec<Vec<i64>>, usize)>,
}

/// Closes `{state}` under all admissible simple reflections, stopping once
/// more than `cutoff` bases have been seen.
pub fn groupoid_enumerate(state: &BicharState, gene: u32, cutoff: usize) -> Result<GroupoidGraph, GroupoidError> {
    if cutoff == 0 {
        return Err(GroupoidError::Invalid("cutoff must be at least 1".into()));
    }
    let r = state.rank();
    let mut classes: HashMap<ClassKey, usize> = HashMap::new();
    let mut objects: Vec<GroupoidObject> = Vec::new();
    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut bases: Vec<(Vec<Vec<i64>>, usize)> = Vec::new();
    let mut edges = BTreeSet::new();
    let mut skipped = 0;
    let mut truncated = false;

    let mut class_of = |st: &BicharState, objects: &mut Vec<GroupoidObject>| -> usize {
        let key = st.class_key();
        *classes.entry(key.clone()).or_insert_with(|| {
            objects.push(GroupoidObject {
                id: objects.len(),
                matrix: st.object_matrix(gene).ok(),
                qdiag: key.0,
                qsym: key.1,
                representative: st.clone(),
            });
            objects.len() - 1
        })
    };

    let first = class_of(state, &mut objects);
    seen.insert(state.basis().to_vec(), 0);
    bases.push((state.basis().to_vec(), first));
    let mut queue = VecDeque::from([state.clone()]);
    'bfs: while let Some(cur) = queue.pop_front() {
        let from = class_of(&cur, &mut objects);
        for i in 0..r {
            if !cur.is_admissible(i) {
                skipped += 1;
                continue;
            }
            let next = match cur.reflect(i) {
                Ok(next) => next,
                Err(GroupoidError::CoordinateOverflow) => {
                    truncated = true;
                    break 'bfs;
                }
                Err(e) => return Err(e),
            };
            let to = class_of(&next, &mut objects);
            edges.insert(GroupoidEdge { from, index: i, to, kind: cur.classify(i)? });
            if !seen.contains_key(next.basis()) {
                if bases.len() >= cutoff {
                    truncated = true;
                    break 'bfs;
                }
                seen.insert(next.basis().to_vec(), bases.len());
                bases.push((next.basis().to_vec(), to));
                queue.push_back(next);
            }
        }
    }
    Ok(GroupoidGraph {
        order: state.order(),
        gene,
        objects,
        edges: edges.into_iter().collect(),
        base_count: bases.len(),
        truncated,
        skipped,
        bases,
    })
}

impl GroupoidGraph {
    /// Each edge `a --s_i--> b` has its partner `b --s_i--> a`, and each
    /// `(object, i)` has exactly one target.
    pub fn is_involutive(&self) -> bool {
        let mut targets: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.edges {
            if targets.insert((e.from, e.index), e.to).is_some() {
                return false;
            }
        }
        self.edges.iter().all(|e| targets.get(&(e.to, e.index)) == Some(&e.from))
    }

    /// Every reflection in the groupoid is of Kubota or Dirichlet type.
    pub fn all_classified(&self) -> bool {
        self.edges.iter().all(|e| e.kind != ReflectionKind::Neither)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph groupoid {\n");
        for o in &self.objects {
            let label = match &o.matrix {
                Some(m) => m.iter().map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";"),
                None => format!("q={:?}", o.qdiag),
            };
            let _ = writeln!(out, "  o{} [label=\"{}\"];", o.id, label);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  o{} -> o{} [label=\"s_{}:{}\"];", e.from, e.to, e.index + 1, e.kind);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("from,index,to,kind\n");
        for e in &self.edges {
            let _ = writeln!(out, "{},{},{},{}", e.from, e.index + 1, e.to, e.kind);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub samples: usize,
    pub uncovered: usize,
    pub double_interior: usize,
}

impl ConeReport {
    pub fn holds(&self) -> bool {
        self.uncovered == 0 && self.double_interior == 0
    }
}

/// Samples integer vectors `v` (rational vectors up to scaling) and checks
/// that each lies in some cone `{v : v·e ≥ 0 for e ∈ E′}` and in the interior
/// of at most one.
pub fn cone_cover_check(graph: &GroupoidGraph, samples: usize, seed: u64) -> Result<ConeReport, GroupoidError> {
    if graph.truncated {
        return Err(GroupoidError::Truncated(graph.base_count));
    }
    let r = graph.bases.first().map_or(0, |b| b.0.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConeReport { samples, uncovered: 0, double_interior: 0 };
    for _ in 0..samples {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-1_000_000i64..=1_000_000)).collect();
        let mut closed = 0;
        let mut open = 0;
        for (basis, _) in &graph.bases {
            let dots: Vec<i64> = basis.iter().map(|e| e.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
            if dots.iter().all(|&d| d >= 0) {
                closed += 1;
                if dots.iter().all(|&d| d > 0) {
                    open += 1;
                }
            }
        }
        if closed == 0 {
            report.uncovered += 1;
        }
        if open > 1 {
            report.double_interior += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::{bicharacter_build, BicharSource, CartanType};
    use super::*;

    #[test]
    fn off_diagonal_groupoid() {
        let st = bicharacter_build(&BicharSource::Matrix { n: 4, m: vec![vec![0, 1], vec![1, 0]] }).unwrap();
        let g = groupoid_enumerate(&st, 1, 1000).unwrap();
        assert!(!g.truncated);
        let mats: Vec<_> = g.objects.iter().map(|o| o.matrix.clone().unwrap()).collect();
        assert_eq!(mats, vec![vec![vec![0, 1], vec![1, 0]], vec![vec![0, 3], vec![3, 3]], vec![vec![3, 3], vec![3, 0]]]);
        assert_eq!(g.edges.len(), 6);
        assert!(g.is_involutive() && g.all_classified());
        let kinds: Vec<_> = g.edges.iter().map(|e| (e.from, e.index, e.to, e.kind)).collect();
        assert!(kinds.contains(&(1, 1, 1, ReflectionKind::Kubota)));
        assert!(kinds.contains(&(2, 0, 2, ReflectionKind::Kubota)));
        assert!(g.to_dot().contains("s_2:kubota"));
    }

    #[test]
    fn cartan_a2_has_one_object() {
        let st = bicharacter_build(&BicharSource::Cartan { ty: CartanType::A, rank: 2, order: 10, v: 1 }).unwrap();
        let g = groupoid_enumerate(&st, 1, 1000).unwrap();
        assert_eq!(g.objects.len(), 1);
        assert_eq!(g.base_count, 6);
        let rep = cone_cover_check(&g, 2000, 7).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn truncation_is_reported() {
        // a generic rank-2 bicharacter with an infinite set of bases
        let st = bicharacter_build(&BicharSource::Dynkin { order: 1000, nodes: vec![7, 11], edges: vec![(0, 1, 13)] }).unwrap();
        let g = groupoid_enumerate(&st, 1, 50).unwrap();
        assert!(g.truncated);
        assert!(matches!(cone_cover_check(&g, 10, 1), Err(GroupoidError::Truncated(_))));
    }
}
