//! Exact homology of a quantum block: sparse unit elimination, then Smith
//! normal form on what is left.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use crate::algebra::snf::invariant_factors;
use crate::algebra::{Int, Ring, RingKind, F2};
use crate::error::{Error, Result};

use super::complex::{ChainComplex, Group, HomologyTable, QBlock, SparseMatrix};

/// A scalar complex under Gaussian elimination.
pub(crate) struct Reducer<R: Ring> {
    pub deg: Vec<i64>,
    pub alive: Vec<bool>,
    pub out: Vec<HashMap<usize, R>>,
    pub inc: Vec<HashSet<usize>>,
}

impl<R: Ring> Reducer<R> {
    pub fn from_block(b: &QBlock) -> Self {
        let mut base = BTreeMap::new();
        let mut deg = Vec::new();
        for (i, n) in &b.dims {
            base.insert(*i, deg.len());
            deg.extend(std::iter::repeat_n(*i, *n));
        }
        let n = deg.len();
        let mut r = Reducer { deg, alive: vec![true; n], out: vec![HashMap::new(); n], inc: vec![HashSet::new(); n] };
        for (i, m) in &b.d {
            let (Some(&s), Some(&t)) = (base.get(i), base.get(&(i + 1))) else { continue };
            for (c, col) in m.columns.iter().enumerate() {
                for (row, v) in col {
                    let v = R::from_int(v);
                    if !v.is_zero() {
                        r.out[s + c].insert(t + row, v);
                        r.inc[t + row].insert(s + c);
                    }
                }
            }
        }
        r
    }

    fn add_entry(&mut self, a: usize, b: usize, v: R) {
        let e = self.out[a].entry(b).or_insert_with(R::zero);
        *e = e.add(&v);
        if e.is_zero() {
            self.out[a].remove(&b);
            self.inc[b].remove(&a);
        } else {
            self.inc[b].insert(a);
        }
    }

    /// Cancel the unit entry `x -> y`.
    pub fn eliminate(&mut self, x: usize, y: usize) {
        let u = self.out[x][&y].unit_inverse().expect("pivot must be a unit");
        let sources: Vec<(usize, R)> =
            self.inc[y].iter().filter(|&&a| a != x).map(|&a| (a, self.out[a][&y].clone())).collect();
        let targets: Vec<(usize, R)> =
            self.out[x].iter().filter(|(&b, _)| b != y).map(|(&b, v)| (b, v.clone())).collect();
        for (a, delta) in &sources {
            let du = delta.mul(&u);
            for (b, gamma) in &targets {
                self.add_entry(*a, *b, du.mul(gamma).neg());
            }
        }
        for z in [x, y] {
            for a in std::mem::take(&mut self.inc[z]) {
                self.out[a].remove(&z);
            }
            for b in std::mem::take(&mut self.out[z]).into_keys() {
                self.inc[b].remove(&z);
            }
            self.alive[z] = false;
        }
    }

    fn fill(&self, x: usize, y: usize) -> usize {
        (self.inc[y].len() - 1) * (self.out[x].len() - 1)
    }

    fn is_unit_entry(&self, x: usize, y: usize) -> bool {
        self.alive[x] && self.alive[y] && self.out[x].get(&y).is_some_and(|v| v.unit_inverse().is_some())
    }

    /// Eliminate unit entries until none remain, cheapest fill first. Fill
    /// counts go stale as the matrix changes, so each candidate is rechecked
    /// when it comes up and pushed back if it got more expensive.
    pub fn reduce(&mut self) {
        let mut heap = BinaryHeap::new();
        for x in 0..self.out.len() {
            for (&y, v) in &self.out[x] {
                if v.unit_inverse().is_some() {
                    heap.push(Reverse((self.fill(x, y), x, y)));
                }
            }
        }
        while let Some(Reverse((f, x, y))) = heap.pop() {
            if !self.is_unit_entry(x, y) {
                continue;
            }
            let now = self.fill(x, y);
            if now > f {
                heap.push(Reverse((now, x, y)));
                continue;
            }
            let sources: Vec<usize> = self.inc[y].iter().copied().filter(|&a| a != x).collect();
            let targets: Vec<usize> = self.out[x].keys().copied().filter(|&b| b != y).collect();
            self.eliminate(x, y);
            for &a in &sources {
                for &b in &targets {
                    if self.is_unit_entry(a, b) {
                        heap.push(Reverse((self.fill(a, b), a, b)));
                    }
                }
            }
        }
    }

    /// Surviving generators by degree and the remaining differential as a block.
    pub fn to_block(&self, j: i64) -> QBlock {
        let mut index = vec![usize::MAX; self.deg.len()];
        let mut b = QBlock::new(j);
        for g in 0..self.deg.len() {
            if self.alive[g] {
                let n = b.dims.entry(self.deg[g]).or_insert(0);
                index[g] = *n;
                *n += 1;
            }
        }
        for g in 0..self.deg.len() {
            if !self.alive[g] {
                continue;
            }
            let i = self.deg[g];
            for (&t, v) in &self.out[g] {
                let (rows, cols) = (b.dim(i + 1), b.dim(i));
                b.d.entry(i).or_insert_with(|| SparseMatrix::new(rows, cols)).add(index[t], index[g], &v.to_int());
            }
        }
        b
    }
}

/// Homology of one block over the given ring.
pub fn block_homology(b: &QBlock, ring: RingKind) -> Vec<Group> {
    let small = match ring {
        RingKind::F2 => {
            let mut r = Reducer::<F2>::from_block(b);
            r.reduce();
            r.to_block(b.j)
        }
        RingKind::Z => {
            let mut r = Reducer::<Int>::from_block(b);
            r.reduce();
            r.to_block(b.j)
        }
    };
    // Invariant factors of every remaining differential.
    let mut rank_of = BTreeMap::new();
    let mut tors_of: BTreeMap<i64, Vec<Int>> = BTreeMap::new();
    for (i, m) in &small.d {
        let f = invariant_factors(m.to_dense());
        rank_of.insert(*i, f.len());
        tors_of.insert(i + 1, f.into_iter().filter(|x| !x.is_one()).collect());
    }
    small
        .dims
        .iter()
        .map(|(&i, &n)| Group {
            i,
            j: b.j,
            rank: n - rank_of.get(&i).copied().unwrap_or(0) - rank_of.get(&(i - 1)).copied().unwrap_or(0),
            torsion: if ring == RingKind::Z { tors_of.remove(&i).unwrap_or_default() } else { Vec::new() },
        })
        .collect()
}

/// Homology of every block. `d^2 = 0` is checked first.
pub fn homology(c: &ChainComplex, ring: RingKind) -> Result<HomologyTable> {
    if c.ring == RingKind::F2 && ring == RingKind::Z {
        return Err(Error::input("a complex reduced over F2 has no integral homology"));
    }
    c.check_d_squared()?;
    let groups = c.blocks.values().flat_map(|b| block_homology(b, ring)).collect();
    Ok(HomologyTable::new(ring, c.offsets, groups))
}

/// Whether a block has zero homology.
pub fn is_acyclic(b: &QBlock, ring: RingKind) -> bool {
    block_homology(b, ring).iter().all(Group::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(dims: &[(i64, usize)], d: &[(i64, usize, usize, i64)]) -> QBlock {
        let mut b = QBlock::new(0);
        for (i, n) in dims {
            b.dims.insert(*i, *n);
        }
        for &(i, r, c, v) in d {
            let (rows, cols) = (b.dim(i + 1), b.dim(i));
            b.d.entry(i).or_insert_with(|| SparseMatrix::new(rows, cols)).add(r, c, &Int::new(v));
        }
        b
    }

    #[test]
    fn multiplication_by_two() {
        let b = block(&[(0, 1), (1, 1)], &[(0, 0, 0, 2)]);
        let z = block_homology(&b, RingKind::Z);
        assert_eq!(z[0].rank, 0);
        assert_eq!(z[1].torsion, vec![Int::new(2)]);
        let f = block_homology(&b, RingKind::F2);
        assert_eq!((f[0].rank, f[1].rank), (1, 1));
    }

    #[test]
    fn elimination_with_fill() {
        // A square: a -> b, a -> c, b -> d, c -> d with one sign, acyclic.
        let b = block(&[(0, 1), (1, 2), (2, 1)], &[(0, 0, 0, 1), (0, 1, 0, 1), (1, 0, 0, 1), (1, 0, 1, -1)]);
        assert!(is_acyclic(&b, RingKind::Z));
        assert!(is_acyclic(&b, RingKind::F2));
    }
}
