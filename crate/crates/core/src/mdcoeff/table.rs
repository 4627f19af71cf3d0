//! Truncated coefficient tables: local tables `a(π^{d⃗})` and global tables
//! `Σ_{deg f_i = d_i} a(f⃗)` built by enumerating all monic tuples.
//!
//! The global enumeration never touches exact arithmetic per tuple. Each
//! coefficient is `ζ_n^E · Π W(deg π, d⃗_π)`, where the block weight `W` depends
//! only on the degree of the prime, so tuples are bucketed by their multiset
//! of nontrivial weights and a histogram of `E mod n`.

use std::collections::{BTreeMap, HashMap};

use rustc_hash::FxHashMap;
use serde_json::{json, Map, Value};

use super::assemble::{block_value, cross_exponent, root_factor, BlockValues};
use super::{CoeffError, MdsConfig};
use crate::exactnum::CycNum;
use crate::polyring::{Poly, PolyError, PolyRing, ENUMERATION_BOUND};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesMode {
    Global,
    Local(Poly),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Known(CycNum),
    Unknown,
}

/// Coefficients indexed by exponent tuples of total degree at most `bound`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    rank: usize,
    n: u32,
    mode: SeriesMode,
    bound: u32,
    entries: BTreeMap<Vec<u32>, Entry>,
}

/// All exponent tuples of length `r` with entries summing to at most `bound`.
pub fn exponent_tuples(r: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, &mut out);
    out.sort_by_key(|d| (d.iter().sum::<u32>(), d.clone()));
    out
}

impl CoeffTable {
    pub fn new(rank: usize, n: u32, mode: SeriesMode, bound: u32) -> Self {
        CoeffTable { rank, n, mode, bound, entries: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn mode(&self) -> &SeriesMode {
        &self.mode
    }

    pub fn get(&self, d: &[u32]) -> Option<&Entry> {
        self.entries.get(d)
    }

    pub fn known(&self, d: &[u32]) -> Option<&CycNum> {
        match self.entries.get(d) {
            Some(Entry::Known(v)) => Some(v),
            _ => None,
        }
    }

    pub fn set(&mut self, d: Vec<u32>, e: Entry) {
        self.entries.insert(d, e);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Entry)> {
        self.entries.iter()
    }

    pub fn unknown_count(&self) -> usize {
        self.entries.values().filter(|e| matches!(e, Entry::Unknown)).count()
    }

    /// Key format `d1,…,dr|k1,…,kr` with `k_i = d_i mod n`.
    pub fn key(&self, d: &[u32]) -> String {
        let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        let ks: Vec<String> = d.iter().map(|x| (x % self.n).to_string()).collect();
        format!("{}|{}", ds.join(","), ks.join(","))
    }

    pub fn to_json(&self, ring: &PolyRing) -> Value {
        let mut entries = Map::new();
        for (d, e) in &self.entries {
            let v = match e {
                Entry::Known(c) => c.to_json(),
                Entry::Unknown => json!("unknown"),
            };
            entries.insert(self.key(d), v);
        }
        let mode = match &self.mode {
            SeriesMode::Global => "global".to_string(),
            SeriesMode::Local(p) => format!("local:{}", ring.display(p)),
        };
        json!({ "mode": mode, "bound": self.bound, "entries": entries })
    }
}

/// Builds a truncated table. Blocks lacking a closed form are taken from
/// `extra` when present; entries depending on a missing block are marked unknown.
pub fn series_truncate(
    cfg: &MdsConfig,
    mode: SeriesMode,
    bound: u32,
    extra: Option<&BlockValues>,
) -> Result<CoeffTable, CoeffError> {
    let r = cfg.rank();
    let mut table = CoeffTable::new(r, cfg.n(), mode.clone(), bound);
    match mode {
        SeriesMode::Local(pi) => {
            for d in exponent_tuples(r, bound) {
                let entry = match block_value(cfg, &pi, &d, extra) {
                    Ok(v) => Entry::Known(v),
                    Err(CoeffError::UnknownLocalBlock { .. }) | Err(CoeffError::NoClosedForm { .. }) => Entry::Unknown,
                    Err(e) => return Err(e),
                };
                table.set(d, entry);
            }
        }
        SeriesMode::Global => {
            let size = cfg.q().checked_pow(bound).unwrap_or(u64::MAX);
            if size > ENUMERATION_BOUND {
                return Err(PolyError::DegreeTooLarge { degree: bound, size, bound: ENUMERATION_BOUND }.into());
            }
            let mut engine = Engine::new(cfg, bound, extra);
            for d in exponent_tuples(r, bound) {
                let e = engine.entry(&d)?;
                table.set(d, e);
            }
        }
    }
    Ok(table)
}

/// Smallest-prime-factor sieve over all monic polynomials up to a degree,
/// with every factorization flattened for fast lookup.
struct Sieve {
    q: u64,
    offsets: Vec<u64>,
    /// For composite ids: (smallest prime id, cofactor id). Primes map to themselves.
    split: Vec<(u32, u32)>,
    fac_start: Vec<u32>,
    fac: Vec<(u32, u32)>,
}

impl Sieve {
    fn new(ring: &PolyRing, max_deg: u32) -> Self {
        let q = ring.q();
        let mut offsets = vec![0u64];
        for d in 0..=max_deg {
            offsets.push(offsets[d as usize] + q.pow(d));
        }
        let total = offsets[max_deg as usize + 1] as usize;
        let mut split = vec![(u32::MAX, u32::MAX); total];
        let id_of = |f: &Poly| offsets[f.deg() as usize] + ring.monic_index(f);
        for d in 1..=max_deg / 2 {
            for idx in 0..q.pow(d) {
                let pid = (offsets[d as usize] + idx) as usize;
                if split[pid].0 != u32::MAX {
                    continue;
                }
                let p = ring.monic_from_index(d, idx);
                for gd in d..=max_deg - d {
                    for gidx in 0..q.pow(gd) {
                        let g = ring.monic_from_index(gd, gidx);
                        let f = ring.mul(&p, &g);
                        let fid = id_of(&f) as usize;
                        if split[fid].0 == u32::MAX {
                            split[fid] = (pid as u32, (offsets[gd as usize] + gidx) as u32);
                        }
                    }
                }
            }
        }
        for (id, s) in split.iter_mut().enumerate().skip(1) {
            if s.0 == u32::MAX {
                *s = (id as u32, 0);
            }
        }
        let mut sieve = Sieve { q, offsets, split, fac_start: Vec::with_capacity(total + 1), fac: Vec::new() };
        let mut buf = Vec::new();
        for id in 0..total as u32 {
            sieve.fac_start.push(sieve.fac.len() as u32);
            sieve.factor_slow(id, &mut buf);
            sieve.fac.extend_from_slice(&buf);
        }
        sieve.fac_start.push(sieve.fac.len() as u32);
        sieve
    }

    fn degree(&self, id: u32) -> u32 {
        (self.offsets.partition_point(|&o| o <= id as u64) - 1) as u32
    }

    fn poly(&self, ring: &PolyRing, id: u32) -> Poly {
        let d = self.degree(id);
        ring.monic_from_index(d, id as u64 - self.offsets[d as usize])
    }

    fn is_prime(&self, id: u32) -> bool {
        id != 0 && self.split[id as usize].0 == id
    }

    fn factor_slow(&self, mut id: u32, out: &mut Vec<(u32, u32)>) {
        out.clear();
        while id != 0 {
            let (p, cof) = self.split[id as usize];
            match out.last_mut() {
                Some(last) if last.0 == p => last.1 += 1,
                _ => out.push((p, 1)),
            }
            id = if p == id { 0 } else { cof };
        }
    }

    /// Prime factorization as (prime id, multiplicity), ids ascending.
    fn factor(&self, id: u32) -> &[(u32, u32)] {
        &self.fac[self.fac_start[id as usize] as usize..self.fac_start[id as usize + 1] as usize]
    }

    fn range(&self, d: u32) -> std::ops::Range<u32> {
        self.offsets[d as usize] as u32..(self.offsets[d as usize] + self.q.pow(d)) as u32
    }
}

/// Packs `(deg, d⃗)` into one word; exponents stay below 256 and `r ≤ 7`.
fn block_key(deg: u32, d: &[u32]) -> u64 {
    d.iter().fold(deg as u64, |acc, &x| (acc << 8) | x as u64)
}

struct Engine<'a> {
    cfg: &'a MdsConfig,
    extra: Option<&'a BlockValues>,
    sieve: Sieve,
    degrees: Vec<u8>,
    /// (π′/π)_χ exponent per prime id, `u32::MAX` until computed.
    root_exp: Vec<u32>,
    pair_exp: FxHashMap<u64, u32>,
    /// weight id per packed (deg, d⃗); `None` for unknown blocks.
    weight_ids: FxHashMap<u64, Option<usize>>,
    weights: Vec<CycNum>,
    reference_primes: HashMap<u32, Poly>,
}

const WEIGHT_ZERO: usize = usize::MAX - 1;
const WEIGHT_ONE: usize = usize::MAX;

impl<'a> Engine<'a> {
    fn new(cfg: &'a MdsConfig, bound: u32, extra: Option<&'a BlockValues>) -> Self {
        let sieve = Sieve::new(cfg.ring(), bound.max(1));
        let total = sieve.split.len();
        let mut degrees = vec![0u8; total];
        for d in 0..=bound.max(1) {
            for id in sieve.range(d) {
                degrees[id as usize] = d as u8;
            }
        }
        Engine {
            cfg,
            extra,
            sieve,
            degrees,
            root_exp: vec![u32::MAX; total],
            pair_exp: FxHashMap::default(),
            weight_ids: FxHashMap::default(),
            weights: Vec::new(),
            reference_primes: HashMap::new(),
        }
    }

    fn root_exp(&mut self, p: u32) -> u32 {
        let e = self.root_exp[p as usize];
        if e != u32::MAX {
            return e;
        }
        let ring = self.cfg.ring();
        let pi = self.sieve.poly(ring, p);
        let e = self.cfg.res_exp(&ring.derivative(&pi), &pi).expect("primes are separable");
        self.root_exp[p as usize] = e;
        e
    }

    fn pair_exp(&mut self, a: u32, b: u32) -> u32 {
        let key = ((a as u64) << 32) | b as u64;
        if let Some(&e) = self.pair_exp.get(&key) {
            return e;
        }
        let ring = self.cfg.ring();
        let e = self.cfg.res_exp(&self.sieve.poly(ring, a), &self.sieve.poly(ring, b)).expect("distinct primes");
        self.pair_exp.insert(key, e);
        e
    }

    fn reference_prime(&mut self, deg: u32) -> Poly {
        if let Some(p) = self.reference_primes.get(&deg) {
            return p.clone();
        }
        let ring = self.cfg.ring();
        let id = self.sieve.range(deg).find(|&id| self.sieve.is_prime(id)).expect("primes of every degree");
        let p = self.sieve.poly(ring, id);
        self.reference_primes.insert(deg, p.clone());
        p
    }

    /// Weight id of `W(deg, d⃗)`, with sentinels for 0 and 1.
    fn weight(&mut self, deg: u32, d: &[u32]) -> Result<Option<usize>, CoeffError> {
        let key = block_key(deg, d);
        if let Some(&w) = self.weight_ids.get(&key) {
            return Ok(w);
        }
        let pi = self.reference_prime(deg);
        let w = match block_value(self.cfg, &pi, d, self.extra) {
            Ok(v) => {
                let w = v / root_factor(self.cfg, &pi, d);
                if w.is_zero() {
                    Some(WEIGHT_ZERO)
                } else if w.is_one() {
                    Some(WEIGHT_ONE)
                } else {
                    self.weights.push(w);
                    Some(self.weights.len() - 1)
                }
            }
            Err(CoeffError::UnknownLocalBlock { .. }) | Err(CoeffError::NoClosedForm { .. }) => None,
            Err(e) => return Err(e),
        };
        self.weight_ids.insert(key, w);
        Ok(w)
    }

    fn entry(&mut self, d: &[u32]) -> Result<Entry, CoeffError> {
        let r = d.len();
        let n = self.cfg.n() as i64;
        let m = self.cfg.matrix().to_vec();
        let diag: Vec<i64> = (0..r).map(|i| m[i][i] as i64).collect();
        let ranges: Vec<std::ops::Range<u32>> = d.iter().map(|&di| self.sieve.range(di)).collect();
        let mut idx: Vec<u32> = ranges.iter().map(|rg| rg.start).collect();
        let mut buckets: FxHashMap<Vec<usize>, Vec<i64>> = FxHashMap::default();
        let mut blocks: Vec<(u32, Vec<u32>)> = Vec::new();
        let mut key: Vec<usize> = Vec::new();
        loop {
            blocks.clear();
            for (i, &id) in idx.iter().enumerate() {
                for &(p, mult) in self.sieve.factor(id) {
                    match blocks.iter_mut().find(|b| b.0 == p) {
                        Some(b) => b.1[i] = mult,
                        None => {
                            let mut v = vec![0u32; r];
                            v[i] = mult;
                            blocks.push((p, v));
                        }
                    }
                }
            }
            key.clear();
            let mut zero = false;
            let mut exp = 0i64;
            for bi in 0..blocks.len() {
                let p = blocks[bi].0;
                let deg = self.degrees[p as usize] as u32;
                match self.weight(deg, &blocks[bi].1)? {
                    None => return Ok(Entry::Unknown),
                    Some(WEIGHT_ZERO) => {
                        zero = true;
                        break;
                    }
                    Some(WEIGHT_ONE) => {}
                    Some(w) => key.push(w),
                }
                let dsum: i64 = blocks[bi].1.iter().zip(&diag).map(|(&x, &mii)| x as i64 * mii).sum();
                if dsum % n != 0 {
                    exp += self.root_exp(p) as i64 * dsum;
                }
            }
            if !zero {
                for a in 0..blocks.len() {
                    for b in a + 1..blocks.len() {
                        let (pa, pb) = (blocks[a].0, blocks[b].0);
                        let ab = self.pair_exp(pa, pb);
                        let ba = self.pair_exp(pb, pa);
                        exp += cross_exponent(&m, &blocks[a].1, &blocks[b].1, ab, ba);
                    }
                }
                key.sort_unstable();
                let slot = exp.rem_euclid(n) as usize;
                match buckets.get_mut(&key[..]) {
                    Some(h) => h[slot] += 1,
                    None => {
                        let mut h = vec![0; n as usize];
                        h[slot] = 1;
                        buckets.insert(key.clone(), h);
                    }
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == r {
                    return Ok(Entry::Known(self.collect(buckets)));
                }
                idx[k] += 1;
                if idx[k] < ranges[k].end {
                    break;
                }
                idx[k] = ranges[k].start;
                k += 1;
            }
        }
    }

    fn collect(&self, buckets: FxHashMap<Vec<usize>, Vec<i64>>) -> CycNum {
        let n = self.cfg.n();
        let mut total = CycNum::zero();
        for (key, hist) in buckets {
            let s = CycNum::from_root_counts(n, &hist);
            if s.is_zero() {
                continue;
            }
            let w = key.iter().fold(CycNum::one(), |acc, &i| acc * &self.weights[i]);
            total += &(w * s);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::mdcoeff::coeff_assemble;

    fn cfg(n: u32, m: Vec<Vec<i64>>) -> MdsConfig {
        MdsConfig::new(&Field::build(5, 1, None).unwrap(), n, m).unwrap()
    }

    #[test]
    fn zeta_function_coefficients() {
        let c = cfg(4, vec![vec![0]]);
        let t = series_truncate(&c, SeriesMode::Global, 5, None).unwrap();
        for d in 0..=5u32 {
            assert_eq!(t.known(&[d]).unwrap(), &CycNum::from_int(5i64.pow(d)));
        }
    }

    #[test]
    fn engine_agrees_with_direct_assembly() {
        for m in [vec![vec![1, 2], vec![2, 3]], vec![vec![3, 1], vec![1, 0]]] {
            let c = cfg(4, m);
            let t = series_truncate(&c, SeriesMode::Global, 3, None).unwrap();
            for d in exponent_tuples(2, 3) {
                let ring = c.ring();
                let mut direct = CycNum::zero();
                let mut unknown = false;
                for f1 in ring.enumerate_monic(d[0]).unwrap() {
                    for f2 in ring.enumerate_monic(d[1]).unwrap() {
                        match coeff_assemble(&c, &[f1.clone(), f2], None) {
                            Ok(v) => direct += &v,
                            Err(_) => unknown = true,
                        }
                    }
                }
                match t.get(&d).unwrap() {
                    Entry::Known(v) => assert_eq!(v, &direct, "d={d:?}"),
                    Entry::Unknown => assert!(unknown),
                }
            }
        }
    }

    #[test]
    fn sieve_factors_correctly() {
        let c = cfg(4, vec![vec![0]]);
        let ring = c.ring();
        let s = Sieve::new(ring, 4);
        for id in s.range(4) {
            let fac = s.factor(id);
            let f = s.poly(ring, id);
            let expect: Vec<(Poly, u32)> = ring.factor(&f);
            let got: Vec<(Poly, u32)> = fac.iter().map(|&(p, m)| (s.poly(ring, p), m)).collect();
            let mut got_sorted = got.clone();
            got_sorted.sort();
            assert_eq!(got_sorted, expect);
        }
    }

    #[test]
    fn keys_and_json() {
        let c = cfg(4, vec![vec![0, 1], vec![1, 0]]);
        let t = series_truncate(&c, SeriesMode::Global, 2, None).unwrap();
        assert_eq!(t.key(&[1, 5]), "1,5|1,1");
        assert!(t.known(&[1, 1]).unwrap().is_zero());
        let js = t.to_json(c.ring());
        assert_eq!(js["entries"]["0,0|0,0"]["m"], 1);
    }
}
