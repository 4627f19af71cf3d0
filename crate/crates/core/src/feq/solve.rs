//! Recovering coefficient tables from the functional equations alone.
//!
//! Each slice (all exponents but the `i`-th fixed) is `N/(1 − c x^m)` with a
//! bounded numerator `N`. For every equation and slice, the unknown numerator
//! coefficients on both sides enter linearly, together with every coefficient
//! already known; solving that small system and expanding the determined
//! numerators yields new coefficients. Passes repeat until nothing changes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::ratfn::{Laurent, RatFn};
use super::{slice_equation, tau_apply, FeKind, FeqError, SliceEquation};
use crate::exactnum::CycNum;
use crate::linalg::{Equation, Reducer};
use crate::mdcoeff::{exponent_tuples, BlockValues, CoeffError, CoeffTable, Entry, MdsConfig, SeriesMode};
use crate::polyring::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidEdge {
    pub from: usize,
    pub to: usize,
    pub index: usize,
    pub kind: FeKind,
}

/// Tables for every matrix reachable from the starting one; object 0 is the start.
#[derive(Debug, Clone)]
pub struct GroupoidSeriesSet {
    pub objects: Vec<Vec<Vec<u32>>>,
    pub edges: Vec<GroupoidEdge>,
    pub tables: Vec<CoeffTable>,
}

/// Matrices reachable through Dirichlet moves `τ_i`, with Kubota self-loops.
pub fn matrix_groupoid(cfg: &MdsConfig, cutoff: usize) -> Result<(Vec<Vec<Vec<u32>>>, Vec<GroupoidEdge>), FeqError> {
    let r = cfg.rank();
    let mut objects = vec![cfg.matrix().to_vec()];
    let mut index: HashMap<Vec<Vec<u32>>, usize> = HashMap::from([(cfg.matrix().to_vec(), 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(o) = queue.pop_front() {
        let m = objects[o].clone();
        let here = cfg.with_matrix(m.clone());
        for i in 0..r {
            if m[i][i] == 0 {
                let t = tau_apply(i, &m, cfg.n())?;
                let to = match index.get(&t) {
                    Some(&x) => x,
                    None => {
                        if objects.len() >= cutoff {
                            return Err(FeqError::PossiblyInfiniteGroupoid(cutoff));
                        }
                        objects.push(t.clone());
                        index.insert(t, objects.len() - 1);
                        queue.push_back(objects.len() - 1);
                        objects.len() - 1
                    }
                };
                edges.push(GroupoidEdge { from: o, to, index: i, kind: FeKind::Dirichlet });
            }
            if cfg.q() % 4 == 1 && here.params().kubota_available(i).is_ok() {
                edges.push(GroupoidEdge { from: o, to: o, index: i, kind: FeKind::Kubota });
            }
        }
    }
    Ok((objects, edges))
}

struct Store {
    known: Vec<HashMap<Vec<u32>, CycNum>>,
    cap: u32,
}

impl Store {
    fn get(&self, o: usize, d: &[u32]) -> Option<&CycNum> {
        self.known[o].get(d)
    }

    /// Records a value; returns Err on a clash with an earlier one.
    fn put(&mut self, o: usize, d: Vec<u32>, v: CycNum) -> Result<bool, FeqError> {
        if d.iter().sum::<u32>() > self.cap {
            return Ok(false);
        }
        match self.known[o].get(&d) {
            Some(old) if *old == v => Ok(false),
            Some(old) => Err(FeqError::InconsistentSystem(format!("object {o} entry {d:?}: {old} vs {v}"))),
            None => {
                self.known[o].insert(d, v);
                Ok(true)
            }
        }
    }
}

/// Per-unknown polynomial contributions to each class of one slice equation.
struct Template {
    bound: i64,
    /// `contrib[k][j]` for the left numerator coefficient `j`, `j ≤ bound`.
    left: Vec<Vec<Laurent>>,
    /// Same for the right numerator coefficients (already negated).
    right: Vec<Vec<Laurent>>,
}

fn build_template(eq: &SliceEquation, n: i64) -> Template {
    let (c, m) = &eq.denominator;
    let q = Laurent::from_terms([(0, CycNum::one()), (*m, -c)]);
    let bound = eq.numerator_bound;
    let basis = |j: i64| RatFn::new(Laurent::monomial(CycNum::one(), j), q.clone());
    let left_parts: Vec<Vec<RatFn>> = (0..=bound).map(|j| (0..n).map(|k| basis(j).project(k, n)).collect()).collect();
    let right_parts: Vec<Vec<RatFn>> =
        (0..=bound).map(|j| (0..n).map(|l| basis(j).project(l, n).subst_inv(&eq.lambda)).collect()).collect();
    let den_left = left_parts[0][0].den.clone();
    let den_right = right_parts[0][0].den.clone();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in 0..n as usize {
        // distinct denominators of row k of the matrix
        let mut dens: Vec<Laurent> = Vec::new();
        for a in &eq.matrix[k] {
            if !a.is_zero() && !dens.contains(&a.den) {
                dens.push(a.den.clone());
            }
        }
        let all = dens.iter().fold(Laurent::one(), |acc, d| acc.mul(d));
        let lmul = den_right.mul(&all);
        left.push((0..=bound as usize).map(|j| left_parts[j][k].num.mul(&lmul)).collect());
        let mut row = Vec::new();
        for j in 0..=bound as usize {
            let mut acc = Laurent::zero();
            for (l, a) in eq.matrix[k].iter().enumerate() {
                if a.is_zero() || right_parts[j][l].is_zero() {
                    continue;
                }
                let others = dens.iter().filter(|d| **d != a.den).fold(Laurent::one(), |acc, d| acc.mul(d));
                acc = acc.add(&a.num.mul(&others).mul(&right_parts[j][l].num).mul(&den_left));
            }
            row.push(acc.neg());
        }
        right.push(row);
    }
    Template { bound, left, right }
}

/// Coefficient of `x^t` in `N/(1 − c x^m)` as a combination of `N_j`.
fn expansion_weights(c: &CycNum, m: i64, bound: i64, t: i64) -> Vec<(i64, CycNum)> {
    let mut out = Vec::new();
    let mut j = t;
    let mut s = 0;
    while j >= 0 {
        if j <= bound {
            out.push((j, c.pow(s).unwrap()));
        }
        j -= m;
        s += 1;
    }
    out
}

struct Solver<'a> {
    cfgs: Vec<MdsConfig>,
    objects: &'a [Vec<Vec<u32>>],
    edges: &'a [GroupoidEdge],
    local: Option<Poly>,
    bound: u32,
    store: Store,
    templates: HashMap<(usize, usize, FeKind, Vec<u32>), (SliceEquation, Template)>,
}

impl Solver<'_> {
    fn slice_known(&self, o: usize, i: usize, others: &[u32]) -> Vec<(i64, CycNum)> {
        let used: u32 = others.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).sum();
        let mut out = Vec::new();
        for t in 0..=self.store.cap.saturating_sub(used) {
            let mut d = others.to_vec();
            d[i] = t;
            if let Some(v) = self.store.get(o, &d) {
                out.push((t as i64, v.clone()));
            }
        }
        out
    }

    /// Solves one slice system; returns the number of new entries.
    fn step(&mut self, edge: &GroupoidEdge, others: &[u32]) -> Result<usize, FeqError> {
        let key = (edge.from, edge.index, edge.kind, others.to_vec());
        if !self.templates.contains_key(&key) {
            let eq = slice_equation(&self.cfgs[edge.from], edge.kind, edge.index, others, self.local.as_ref())?;
            debug_assert_eq!(eq.partner, self.objects[edge.to]);
            let t = build_template(&eq, self.cfgs[edge.from].n() as i64);
            self.templates.insert(key.clone(), (eq, t));
        }
        let (eq, tpl) = &self.templates[&key];
        let i = edge.index;
        let shared = edge.from == edge.to;
        let b = tpl.bound;
        let offset = if shared { 0 } else { (b + 1) as usize };
        let (c, m) = &eq.denominator;

        let left_known = self.slice_known(edge.from, i, others);
        let right_known = if shared { Vec::new() } else { self.slice_known(edge.to, i, others) };
        let mut red = Reducer::new();
        for (known, off) in [(&left_known, 0usize), (&right_known, offset)] {
            for (t, v) in known {
                let mut e = Equation::new();
                for (j, w) in expansion_weights(c, *m, b, *t) {
                    e.add_term(off + j as usize, &w);
                }
                e.rhs = v.clone();
                if !red.push(e) {
                    return Err(FeqError::InconsistentSystem(format!(
                        "known coefficients of object {} slice {others:?} exceed the numerator bound",
                        edge.from
                    )));
                }
            }
        }
        for k in 0..tpl.left.len() {
            let mut rows: BTreeMap<i64, Equation> = BTreeMap::new();
            for (j, poly) in tpl.left[k].iter().enumerate() {
                for (e, v) in poly.terms() {
                    rows.entry(e).or_default().add_term(j, v);
                }
            }
            for (j, poly) in tpl.right[k].iter().enumerate() {
                for (e, v) in poly.terms() {
                    rows.entry(e).or_default().add_term(offset + j, v);
                }
            }
            for (_, row) in rows {
                if !red.push(row) {
                    return Err(FeqError::InconsistentSystem(format!(
                        "{:?} equation at index {i} between objects {} and {}, slice {others:?}",
                        edge.kind, edge.from, edge.to
                    )));
                }
            }
        }
        let mut fresh = 0;
        let used: u32 = others.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).sum();
        let sides: Vec<(usize, usize)> = if shared { vec![(edge.from, 0)] } else { vec![(edge.from, 0), (edge.to, offset)] };
        for (o, off) in sides {
            let values: Vec<Option<CycNum>> = (0..=b as usize).map(|j| red.value(off + j)).collect();
            for t in 0..=self.store.cap.saturating_sub(used) as i64 {
                let mut acc = CycNum::zero();
                let mut ok = true;
                for (j, w) in expansion_weights(c, *m, b, t) {
                    match &values[j as usize] {
                        Some(v) => acc += &(v * &w),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let mut d = others.to_vec();
                d[i] = t as u32;
                if self.store.put(o, d, acc)? {
                    fresh += 1;
                }
            }
        }
        Ok(fresh)
    }

    fn remaining(&self) -> usize {
        let r = self.objects[0].len();
        let tuples = exponent_tuples(r, self.bound);
        (0..self.objects.len()).map(|o| tuples.iter().filter(|d| self.store.get(o, d).is_none()).count()).sum()
    }
}

/// Solves for the tables of every object in the groupoid of `cfg`'s matrix
/// through total degree `bound`, from the equations, the constant terms, and
/// (when `seed` is given) known entries of the starting object.
pub fn fe_solve(
    cfg: &MdsConfig,
    mode: SeriesMode,
    bound: u32,
    cutoff: usize,
    seed: Option<&CoeffTable>,
) -> Result<GroupoidSeriesSet, FeqError> {
    let (objects, edges) = matrix_groupoid(cfg, cutoff)?;
    let r = cfg.rank();
    let cfgs: Vec<MdsConfig> = objects.iter().map(|m| cfg.with_matrix(m.clone())).collect();
    let cap = 2 * bound + cfg.n() + 2;
    let mut store = Store { known: vec![HashMap::new(); objects.len()], cap };
    for o in 0..objects.len() {
        store.put(o, vec![0; r], CycNum::one())?;
    }
    if let Some(t) = seed {
        for (d, e) in t.iter() {
            if let Entry::Known(v) = e {
                store.put(0, d.clone(), v.clone())?;
            }
        }
    }
    let local = match &mode {
        SeriesMode::Global => None,
        SeriesMode::Local(p) => Some(p.clone()),
    };
    let mut solver = Solver { cfgs, objects: &objects, edges: &edges, local, bound, store, templates: HashMap::new() };
    let slices: Vec<Vec<u32>> = exponent_tuples(r, bound);
    let mut done: HashSet<(usize, Vec<u32>)> = HashSet::new();
    loop {
        let mut progress = 0;
        for (ei, edge) in solver.edges.iter().enumerate() {
            for others in slices.iter().filter(|d| d[edge.index] == 0) {
                if done.contains(&(ei, others.clone())) {
                    continue;
                }
                let fresh = solver.step(edge, others)?;
                progress += fresh;
                // a slice whose in-table entries on both sides are all known is finished
                let full = |o: usize| {
                    let used: u32 = others.iter().sum();
                    (0..=bound - used).all(|t| {
                        let mut d = others.clone();
                        d[edge.index] = t;
                        solver.store.get(o, &d).is_some()
                    })
                };
                if full(edge.from) && full(edge.to) {
                    done.insert((ei, others.clone()));
                }
            }
        }
        if progress == 0 {
            break;
        }
    }
    let remaining = solver.remaining();
    if remaining > 0 {
        return Err(FeqError::NotConverged { remaining });
    }
    let tables = (0..objects.len())
        .map(|o| {
            let mut t = CoeffTable::new(r, cfg.n(), mode.clone(), bound);
            for d in exponent_tuples(r, bound) {
                t.set(d.clone(), Entry::Known(solver.store.get(o, &d).unwrap().clone()));
            }
            t
        })
        .collect();
    Ok(GroupoidSeriesSet { objects: objects.clone(), edges: edges.clone(), tables })
}

/// Block weights `W(deg, d⃗)` lacking a closed form, for every prime degree up
/// to `bound`, from the local solver at the first prime of each degree.
pub fn solve_block_values(cfg: &MdsConfig, bound: u32, cutoff: usize) -> Result<BlockValues, FeqError> {
    let ring = cfg.ring();
    let r = cfg.rank();
    let mut out = BlockValues::new();
    for deg in 1..=bound {
        let exps_bound = bound / deg;
        if exponent_tuples(r, exps_bound).iter().all(|d| d.iter().filter(|&&x| x >= 2).count() < 2) {
            continue;
        }
        let pi = ring.enumerate_monic(deg).map_err(CoeffError::from)?.find(|p| ring.is_irreducible(p)).expect("primes exist in every degree");
        let seed = crate::mdcoeff::series_truncate(cfg, SeriesMode::Local(pi.clone()), exps_bound, None)?;
        let set = fe_solve(cfg, SeriesMode::Local(pi.clone()), exps_bound, cutoff, Some(&seed))?;
        for (d, e) in seed.iter() {
            if let (Entry::Unknown, Some(v)) = (e, set.tables[0].known(d)) {
                let root = crate::mdcoeff::root_factor(cfg, &pi, d);
                out.insert(deg, d.clone(), v / &root);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::mdcoeff::series_truncate;

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn off_diagonal_groupoid() {
        let c = cfg(4, vec![vec![0, 1], vec![1, 0]]);
        let (objs, edges) = matrix_groupoid(&c, 100).unwrap();
        assert_eq!(objs.len(), 3);
        assert!(objs.contains(&vec![vec![0, 3], vec![3, 3]]));
        assert!(objs.contains(&vec![vec![3, 3], vec![3, 0]]));
        assert_eq!(edges.iter().filter(|e| e.kind == FeKind::Dirichlet).count(), 4);
    }

    #[test]
    fn zeta_function_from_equations() {
        let c = cfg(4, vec![vec![0]]);
        let set = fe_solve(&c, SeriesMode::Global, 6, 10, None).unwrap();
        for d in 0..=6u32 {
            assert_eq!(set.tables[0].known(&[d]).unwrap(), &CycNum::from_int(5i64.pow(d)));
        }
    }

    #[test]
    fn off_diagonal_small_degree_matches_enumeration() {
        let c = cfg(4, vec![vec![0, 1], vec![1, 0]]);
        let set = fe_solve(&c, SeriesMode::Global, 4, 10, None).unwrap();
        let t = series_truncate(&c, SeriesMode::Global, 4, None).unwrap();
        assert!(t.unknown_count() > 0);
        for (d, e) in t.iter() {
            if let Entry::Known(v) = e {
                assert_eq!(set.tables[0].known(d), Some(v), "{d:?}");
            }
        }
        // filling the blocks from the local solver completes the enumeration
        let blocks = solve_block_values(&c, 4, 10).unwrap();
        assert!(!blocks.is_empty());
        let full = series_truncate(&c, SeriesMode::Global, 4, Some(&blocks)).unwrap();
        assert_eq!(full.unknown_count(), 0);
        for (d, e) in full.iter() {
            let Entry::Known(v) = e else { unreachable!() };
            assert_eq!(set.tables[0].known(d), Some(v), "{d:?}");
        }
    }
}
