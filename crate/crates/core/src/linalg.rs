//! Sparse incremental row reduction over exact cyclotomic numbers.

use std::collections::{BTreeMap, HashMap};

use crate::exactnum::CycNum;

/// A linear equation `Σ coeffs[j] · x_j = rhs`.
#[derive(Debug, Clone, Default)]
pub struct Equation {
    pub coeffs: BTreeMap<usize, CycNum>,
    pub rhs: CycNum,
}

impl Equation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, var: usize, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(var).or_insert_with(CycNum::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&var);
        }
    }

    fn axpy(&mut self, factor: &CycNum, other: &Equation) {
        for (&j, c) in &other.coeffs {
            self.add_term(j, &(factor * c));
        }
        self.rhs += &(factor * &other.rhs);
    }
}

/// Reduced row echelon form maintained one equation at a time.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    pivots: HashMap<usize, Equation>,
    inconsistent: bool,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an equation; returns false if it contradicts the earlier ones.
    pub fn push(&mut self, mut eq: Equation) -> bool {
        let hits: Vec<usize> = eq.coeffs.keys().copied().filter(|j| self.pivots.contains_key(j)).collect();
        for j in hits {
            if let Some(c) = eq.coeffs.get(&j).cloned() {
                let row = &self.pivots[&j];
                eq.axpy(&-c, row);
            }
        }
        let Some((&p, c)) = eq.coeffs.iter().next() else {
            if !eq.rhs.is_zero() {
                self.inconsistent = true;
                return false;
            }
            return true;
        };
        let inv = c.inv().expect("nonzero pivot");
        let mut norm = Equation::new();
        for (&j, v) in &eq.coeffs {
            norm.coeffs.insert(j, v * &inv);
        }
        norm.rhs = &eq.rhs * &inv;
        for row in self.pivots.values_mut() {
            if let Some(c) = row.coeffs.get(&p).cloned() {
                row.axpy(&-c, &norm);
            }
        }
        self.pivots.insert(p, norm);
        true
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The reduced rows, keyed by pivot column.
    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &Equation)> {
        self.pivots.iter().map(|(&p, row)| (p, row))
    }

    /// The value of `x_j` if the system pins it down.
    pub fn value(&self, j: usize) -> Option<CycNum> {
        let row = self.pivots.get(&j)?;
        (row.coeffs.len() == 1).then(|| row.rhs.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(terms: &[(usize, i64)], rhs: i64) -> Equation {
        let mut e = Equation::new();
        for &(j, c) in terms {
            e.add_term(j, &CycNum::from_int(c));
        }
        e.rhs = CycNum::from_int(rhs);
        e
    }

    #[test]
    fn partial_determination() {
        let mut r = Reducer::new();
        assert!(r.push(eq(&[(0, 1), (1, 1)], 3)));
        assert!(r.push(eq(&[(0, 1), (1, -1)], 1)));
        assert!(r.push(eq(&[(2, 1), (3, 1)], 5)));
        assert_eq!(r.value(0), Some(CycNum::from_int(2)));
        assert_eq!(r.value(1), Some(CycNum::from_int(1)));
        assert_eq!(r.value(2), None);
        assert_eq!(r.value(3), None);
        assert!(r.push(eq(&[(0, 2), (1, 2)], 6)));
        assert!(!r.push(eq(&[(0, 1)], 7)));
        assert!(r.is_inconsistent());
    }
}
