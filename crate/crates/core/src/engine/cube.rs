//! The raw cube of resolutions, materialized one quantum degree at a time.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Int, RingKind};
use crate::error::{Error, Result};
use crate::grading::StableOffsets;
use crate::tangle::LinkDiagram;

use super::complex::{ChainComplex, GenTag, QBlock, SparseMatrix};

/// Hard limits on cube materialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeLimits {
    /// Largest crossing count accepted without a quantum filter.
    pub max_unfiltered_crossings: usize,
    /// Largest crossing count accepted at all (states are enumerated).
    pub max_crossings: usize,
    /// Largest generator count of one quantum block.
    pub max_block_generators: usize,
}

impl Default for CubeLimits {
    fn default() -> Self {
        CubeLimits { max_unfiltered_crossings: 16, max_crossings: 24, max_block_generators: 1 << 22 }
    }
}

struct Resolution {
    circles: usize,
    label: Vec<usize>,
}

fn resolve(d: &LinkDiagram, s: u64) -> Resolution {
    let bits: Vec<bool> = (0..d.crossing_count()).map(|c| s >> c & 1 == 1).collect();
    let (circles, label) = d.resolve(&bits).expect("state length matches");
    Resolution { circles, label }
}

/// The two local arcs of crossing `c` in a resolution, as edge pairs.
fn local_arcs(d: &LinkDiagram, c: usize, bit: bool) -> [(usize, usize); 2] {
    let [bl, br, tl, tr] = d.crossings()[c].edges;
    if d.is_vertical(c, bit) {
        [(bl, tl), (br, tr)]
    } else {
        [(bl, br), (tl, tr)]
    }
}

/// Build the cube of `d`, only the quantum degrees in `q_filter` if given.
pub fn build_cube(d: &LinkDiagram, q_filter: Option<&[i64]>) -> Result<ChainComplex> {
    build_cube_where(d, q_filter, &CubeLimits::default(), |_| true)
}

/// Build the cube restricted to states accepted by `keep`. The restriction is a
/// complex when the accepted set is closed upward or downward in the cube.
pub fn build_cube_where(
    d: &LinkDiagram,
    q_filter: Option<&[i64]>,
    limits: &CubeLimits,
    keep: impl Fn(u64) -> bool,
) -> Result<ChainComplex> {
    let chi = d.crossing_count();
    if q_filter.is_none() && chi > limits.max_unfiltered_crossings {
        return Err(Error::Resource(format!(
            "{chi} crossings exceed the unfiltered cube limit of {}",
            limits.max_unfiltered_crossings
        )));
    }
    if chi > limits.max_crossings {
        return Err(Error::Resource(format!("{chi} crossings exceed the cube limit of {}", limits.max_crossings)));
    }
    let n_minus = d.crossing_signs().1 as i64;
    let shift = d.n_shift();
    let states: Vec<u64> = (0..1u64 << chi).filter(|&s| keep(s)).collect();
    let circles: Vec<usize> = states.iter().map(|&s| resolve(d, s).circles).collect();

    // Generators of each block, state-major, decorations in increasing order.
    let mut blocks: BTreeMap<i64, QBlock> = BTreeMap::new();
    let wanted = |j: i64| q_filter.is_none_or(|f| f.contains(&j));
    for (k, &s) in states.iter().enumerate() {
        let r = s.count_ones() as i64;
        let c = circles[k];
        let i = r - n_minus;
        for mask in 0..1u64 << c {
            let j = r + 2 * mask.count_ones() as i64 - c as i64 + shift;
            if !wanted(j) {
                continue;
            }
            let b = blocks.entry(j).or_insert_with(|| QBlock::new(j));
            *b.dims.entry(i).or_insert(0) += 1;
            b.tags.entry(i).or_default().push(GenTag { state: s, decoration: mask });
            if b.generator_count() > limits.max_block_generators {
                return Err(Error::Resource(format!(
                    "quantum block {j} exceeds {} generators",
                    limits.max_block_generators
                )));
            }
        }
    }
    for b in blocks.values_mut() {
        for t in b.tags.values_mut() {
            t.sort();
        }
    }

    for b in blocks.values_mut() {
        let index: BTreeMap<i64, HashMap<GenTag, usize>> = b.tags.keys().map(|&i| (i, b.tag_index(i))).collect();
        let mut cache: HashMap<u64, Resolution> = HashMap::new();
        for (&i, tags) in &b.tags {
            let Some(target) = index.get(&(i + 1)) else { continue };
            let mut m = SparseMatrix::new(b.dims[&(i + 1)], tags.len());
            for (col, g) in tags.iter().enumerate() {
                let s = g.state;
                cache.entry(s).or_insert_with(|| resolve(d, s));
                for c in 0..chi {
                    let t = s | 1 << c;
                    if t == s || !keep(t) {
                        continue;
                    }
                    cache.entry(t).or_insert_with(|| resolve(d, t));
                    let (rs, rt) = (&cache[&s], &cache[&t]);
                    let sign = if (s & ((1 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                    for (mask, coeff) in edge_map(d, c, rs, rt, g.decoration) {
                        if let Some(&row) = target.get(&GenTag { state: t, decoration: mask }) {
                            m.add(row, col, &Int::new(sign * coeff));
                        }
                    }
                }
            }
            b.d.insert(i, m);
        }
    }
    let mut out = ChainComplex::new(RingKind::Z);
    out.offsets = StableOffsets::default();
    out.blocks = blocks;
    Ok(out)
}

/// Image of a decoration under the merge or split along crossing `c`.
fn edge_map(d: &LinkDiagram, c: usize, rs: &Resolution, rt: &Resolution, mask: u64) -> Vec<(u64, i64)> {
    let [a0, a1] = local_arcs(d, c, false);
    let (ca, cb) = (rs.label[a0.0], rs.label[a1.0]);
    // Carry the untouched circles across.
    let mut rep = vec![usize::MAX; rs.circles];
    for (e, &l) in rs.label.iter().enumerate() {
        if rep[l] == usize::MAX {
            rep[l] = e;
        }
    }
    let mut base = 0u64;
    for k in 0..rs.circles {
        if k != ca && k != cb && mask >> k & 1 == 1 {
            base |= 1 << rt.label[rep[k]];
        }
    }
    let plus = |k: usize| mask >> k & 1 == 1;
    if ca != cb {
        let m = rt.label[a0.0];
        match (plus(ca), plus(cb)) {
            (true, true) => vec![(base | 1 << m, 1)],
            (true, false) | (false, true) => vec![(base, 1)],
            (false, false) => vec![],
        }
    } else {
        let [b0, b1] = local_arcs(d, c, true);
        let (x, y) = (rt.label[b0.0], rt.label[b1.0]);
        if plus(ca) {
            vec![(base | 1 << x, 1), (base | 1 << y, 1)]
        } else {
            vec![(base, 1)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    #[test]
    fn unknot_generators() {
        let c = build_cube(&closure(1, &[]), None).unwrap();
        assert_eq!(c.blocks.keys().copied().collect::<Vec<_>>(), vec![-1, 1]);
        assert!(c.blocks.values().all(|b| b.d.is_empty()));
    }

    #[test]
    fn hopf_degrees_and_d_squared() {
        let c = build_cube(&closure(2, &[1, 1]), None).unwrap();
        assert_eq!(c.blocks.keys().copied().collect::<Vec<_>>(), vec![0, 2, 4, 6]);
        c.check_d_squared().unwrap();
        let top = build_cube(&closure(2, &[1, 1]), Some(&[6])).unwrap();
        assert_eq!(top.generator_count(), 1);
    }

    #[test]
    fn trefoil_d_squared() {
        for w in [vec![1, 1, 1], vec![1, -2, 1, -2], vec![1, 2, 1, 2, 1, 2]] {
            let n = w.iter().map(|x: &i32| x.unsigned_abs() as usize).max().unwrap() + 1;
            build_cube(&closure(n, &w), None).unwrap().check_d_squared().unwrap();
        }
    }

    #[test]
    fn unfiltered_limit() {
        let big = closure(2, &[1; 17]);
        assert!(matches!(build_cube(&big, None), Err(Error::Resource(_))));
    }
}
