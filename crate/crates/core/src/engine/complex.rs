//! Bigraded chain complexes, sparse integer matrices and homology tables.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{Int, LaurentPoly, RingKind};
use crate::error::{Error, Result};
use crate::grading::StableOffsets;

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[c]` lists `(row, value)` with nonzero values.
    pub columns: Vec<Vec<(usize, Int)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Add `v` to entry `(row, col)`.
    pub fn add(&mut self, row: usize, col: usize, v: &Int) {
        let c = &mut self.columns[col];
        match c.iter_mut().position(|(r, _)| *r == row) {
            Some(k) => {
                c[k].1 += v;
                if c[k].1.is_zero() {
                    c.swap_remove(k);
                }
            }
            None if !v.is_zero() => c.push((row, v.clone())),
            None => {}
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Int {
        self.columns[col].iter().find(|(r, _)| *r == row).map_or(Int::new(0), |(_, v)| v.clone())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Reduce every entry modulo 2, dropping even ones.
    pub fn mod2(&self) -> Self {
        let two = Int::new(2);
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|c| {
                    c.iter()
                        .filter(|(_, v)| v.div_mod_floor(&two).1.is_one())
                        .map(|(r, _)| (*r, Int::new(1)))
                        .collect()
                })
                .collect(),
        }
    }

    /// `other * self` (apply `self` first).
    pub fn then(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::new(other.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            let mut acc: HashMap<usize, Int> = HashMap::new();
            for (mid, v) in col {
                for (r, w) in &other.columns[*mid] {
                    *acc.entry(*r).or_insert_with(|| Int::new(0)) += &(v * w);
                }
            }
            let mut entries: Vec<(usize, Int)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            entries.sort_by_key(|e| e.0);
            out.columns[c] = entries;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut m = vec![vec![Int::new(0); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m[*r][c] = v.clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Provenance of a cube generator: resolution bits and `v+` bits per circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenTag {
    pub state: u64,
    pub decoration: u64,
}

/// One quantum degree of a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBlock {
    pub j: i64,
    /// Generator count in each homological degree.
    pub dims: BTreeMap<i64, usize>,
    /// Generator provenance, present only for unsimplified complexes.
    pub tags: BTreeMap<i64, Vec<GenTag>>,
    /// `d[i]` maps degree `i` to degree `i + 1`.
    pub d: BTreeMap<i64, SparseMatrix>,
}

impl QBlock {
    pub fn new(j: i64) -> Self {
        QBlock { j, ..Default::default() }
    }

    pub fn dim(&self, i: i64) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn generator_count(&self) -> usize {
        self.dims.values().sum()
    }

    /// The differential out of degree `i`, zero if absent.
    pub fn differential(&self, i: i64) -> SparseMatrix {
        self.d.get(&i).cloned().unwrap_or_else(|| SparseMatrix::new(self.dim(i + 1), self.dim(i)))
    }

    /// Assert `d d = 0`, modulo 2 when `ring` is F2.
    pub fn check_d_squared(&self, ring: RingKind) -> Result<()> {
        for (i, d0) in &self.d {
            let Some(d1) = self.d.get(&(i + 1)) else { continue };
            let mut dd = d0.then(d1);
            if ring == RingKind::F2 {
                dd = dd.mod2();
            }
            if !dd.is_zero() {
                return Err(Error::Arithmetic(format!("d^2 != 0 at (i, j) = ({i}, {})", self.j)));
            }
        }
        Ok(())
    }

    /// Index of every tagged generator of degree `i`.
    pub fn tag_index(&self, i: i64) -> HashMap<GenTag, usize> {
        self.tags.get(&i).map_or_else(HashMap::new, |t| t.iter().enumerate().map(|(k, g)| (*g, k)).collect())
    }
}

/// A complex split into independent quantum degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub ring: RingKind,
    pub offsets: StableOffsets,
    pub blocks: BTreeMap<i64, QBlock>,
}

impl ChainComplex {
    pub fn new(ring: RingKind) -> Self {
        ChainComplex { ring, offsets: StableOffsets::default(), blocks: BTreeMap::new() }
    }

    pub fn generator_count(&self) -> usize {
        self.blocks.values().map(QBlock::generator_count).sum()
    }

    pub fn block(&self, j: i64) -> Option<&QBlock> {
        self.blocks.get(&j)
    }

    pub fn check_d_squared(&self) -> Result<()> {
        self.blocks.values().try_for_each(|b| b.check_d_squared(self.ring))
    }

    /// `sum (-1)^i q^j` over generators, in raw degrees.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.blocks.values().flat_map(|b| {
            b.dims.iter().map(move |(i, n)| (b.j as i32, Int::new(if i % 2 == 0 { *n as i64 } else { -(*n as i64) })))
        }))
    }
}

/// One nonzero group `Z^rank + sum Z/t` (or `F2^rank`) at raw bidegree `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Same group, ignoring position.
    pub fn same_group(&self, other: &Group) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

/// Homology in raw degrees; `offsets` give the normalization `raw - offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub ring: RingKind,
    pub offsets: StableOffsets,
    /// Nonzero groups ordered by `(i, j)`.
    pub groups: Vec<Group>,
}

impl HomologyTable {
    pub fn new(ring: RingKind, offsets: StableOffsets, mut groups: Vec<Group>) -> Self {
        groups.retain(|g| !g.is_zero());
        groups.sort_by_key(|g| (g.i, g.j));
        HomologyTable { ring, offsets, groups }
    }

    pub fn get(&self, i: i64, j: i64) -> Option<&Group> {
        self.groups.iter().find(|g| g.i == i && g.j == j)
    }

    pub fn rank(&self, i: i64, j: i64) -> usize {
        self.get(i, j).map_or(0, |g| g.rank)
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.iter().map(|g| g.rank).sum()
    }

    /// Raw quantum degrees carrying a nonzero group.
    pub fn q_support(&self) -> Vec<i64> {
        let mut q: Vec<i64> = self.groups.iter().map(|g| g.j).collect();
        q.sort_unstable();
        q.dedup();
        q
    }

    /// Groups moved to normalized degrees, with zero offsets.
    pub fn normalized(&self) -> HomologyTable {
        let groups = self
            .groups
            .iter()
            .map(|g| {
                let (i, j) = self.offsets.normalize(g.i, g.j);
                Group { i, j, ..g.clone() }
            })
            .collect();
        HomologyTable::new(self.ring, StableOffsets::default(), groups)
    }

    /// Groups in normalized quantum degree `j`, keyed by normalized `i`.
    pub fn normalized_block(&self, j: i64) -> Vec<Group> {
        self.normalized().groups.into_iter().filter(|g| g.j == j).collect()
    }

    /// Whether two tables agree as groups in normalized degree `j`.
    pub fn same_normalized_block(&self, other: &HomologyTable, j: i64) -> bool {
        let (a, b) = (self.normalized_block(j), other.normalized_block(j));
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.i == y.i && x.same_group(y))
    }

    /// `sum (-1)^i rank q^j` in raw degrees.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.groups
                .iter()
                .map(|g| (g.j as i32, Int::new(if g.i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }))),
        )
    }

    /// Restrict to raw quantum degrees in `js`.
    pub fn restricted(&self, js: &[i64]) -> HomologyTable {
        HomologyTable::new(self.ring, self.offsets, self.groups.iter().filter(|g| js.contains(&g.j)).cloned().collect())
    }

    /// CSV rows `i,j,rank,torsion` in normalized degrees.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,rank,torsion\n");
        for g in &self.normalized().groups {
            let t: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{},{},{},{}\n", g.i, g.j, g.rank, t.join(" ")));
        }
        s
    }

    /// A Markdown grid with `i` across and `j` down, in normalized degrees.
    pub fn to_markdown(&self) -> String {
        let n = self.normalized();
        if n.groups.is_empty() {
            return "(zero)\n".into();
        }
        let is: Vec<i64> = {
            let mut v: Vec<i64> = n.groups.iter().map(|g| g.i).collect();
            v.sort_unstable();
            v.dedup();
            (v[0]..=*v.last().unwrap()).collect()
        };
        let js = n.q_support();
        let mut s = String::from("| j \\ i |");
        for i in &is {
            s.push_str(&format!(" {i} |"));
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(is.len()));
        s.push('\n');
        for j in js.iter().rev() {
            s.push_str(&format!("| {j} |"));
            for i in &is {
                let cell = match n.get(*i, *j) {
                    None => String::new(),
                    Some(g) => format_group(g, self.ring),
                };
                s.push_str(&format!(" {cell} |"));
            }
            s.push('\n');
        }
        s
    }
}

fn format_group(g: &Group, ring: RingKind) -> String {
    let base = if ring == RingKind::F2 { "F2" } else { "Z" };
    let mut parts = Vec::new();
    if g.rank == 1 {
        parts.push(base.to_string());
    } else if g.rank > 1 {
        parts.push(format!("{base}^{}", g.rank));
    }
    for t in &g.torsion {
        parts.push(format!("Z/{t}"));
    }
    parts.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_product() {
        let mut a = SparseMatrix::new(2, 1);
        a.add(0, 0, &Int::new(1));
        a.add(1, 0, &Int::new(1));
        let mut b = SparseMatrix::new(1, 2);
        b.add(0, 0, &Int::new(1));
        b.add(0, 1, &Int::new(1));
        let c = a.then(&b);
        assert_eq!(c.get(0, 0), Int::new(2));
        assert!(!c.is_zero());
        assert!(c.mod2().is_zero());
    }

    #[test]
    fn table_order_and_json() {
        let t = HomologyTable::new(
            RingKind::Z,
            StableOffsets::new(0, 1),
            vec![
                Group { i: 2, j: 4, rank: 1, torsion: vec![] },
                Group { i: 0, j: 0, rank: 1, torsion: vec![] },
                Group { i: 1, j: 2, rank: 0, torsion: vec![] },
            ],
        );
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.groups[0].i, 0);
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["ring"], "z");
        assert_eq!(v["offsets"]["q"], 1);
        assert_eq!(v["groups"][1]["j"], 4);
        assert_eq!(t.normalized().groups[1].j, 3);
        assert_eq!(t.euler_characteristic().to_string(), LaurentPoly::from_terms([(0, Int::new(1)), (4, Int::new(1))]).to_string());
    }
}
