//! Dotted cobordisms between crossingless matchings.
//!
//! A morphism between matchings `a` and `b` on the same boundary points is
//! written in the basis of dotted disks: one disk per circle of `a` glued to
//! the mirror of `b`, each with at most one dot. Circles are numbered by their
//! smallest boundary point. Gluing surfaces and cutting necks keeps morphisms
//! in this basis, with `sphere = 0`, `dotted sphere = 1` and `two dots = 0`.

use std::collections::BTreeMap;

use crate::algebra::Ring;
use crate::tangle::Slice;

/// Partner of every boundary point.
pub type Matching = Vec<u16>;

/// Sparse combination of dot patterns, sorted by pattern.
pub type Mor<R> = Vec<(u64, R)>;

/// A crossingless slice as a perfect matching of its endpoints: bottom point
/// `x` is endpoint `x`, top point `y` is endpoint `below + y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSlice {
    pub below: usize,
    pub above: usize,
    pub partner: Vec<usize>,
}

impl FlatSlice {
    fn build(below: usize, above: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut partner = vec![usize::MAX; below + above];
        for (a, b) in arcs {
            partner[a] = b;
            partner[b] = a;
        }
        debug_assert!(partner.iter().all(|&p| p != usize::MAX));
        FlatSlice { below, above, partner }
    }

    /// Cup, cap, vertical or turnback slice on `below` strands.
    pub fn new(s: Slice, below: usize) -> Option<Self> {
        let id = |x: usize, y: usize| (x, below + y);
        Some(match s {
            Slice::Cup(p) => Self::build(
                below,
                below + 2,
                (0..below).map(|x| id(x, if x < p { x } else { x + 2 })).chain([(below + p, below + p + 1)]),
            ),
            Slice::Cap(p) => {
                let above = below - 2;
                Self::build(
                    below,
                    above,
                    (0..below)
                        .filter(|&x| x != p && x != p + 1)
                        .map(|x| (x, below + if x < p { x } else { x - 2 }))
                        .chain([(p, p + 1)]),
                )
            }
            Slice::Vert(_) => Self::build(below, below, (0..below).map(|x| id(x, x))),
            Slice::Turn(p) => Self::build(
                below,
                below,
                (0..below)
                    .filter(|&x| x != p && x != p + 1)
                    .map(|x| id(x, x))
                    .chain([(p, p + 1), (below + p, below + p + 1)]),
            ),
            Slice::Pos(_) | Slice::Neg(_) => return None,
        })
    }

    /// Piece of every endpoint for the product cobordism `self x I`.
    pub fn identity_pieces(&self) -> Vec<usize> {
        (0..self.partner.len()).map(|e| e.min(self.partner[e])).collect()
    }

    /// Pieces of the saddle between `Vert(p)` and `Turn(p)` on `w` strands.
    pub fn saddle_pieces(p: usize, w: usize) -> Vec<usize> {
        (0..2 * w)
            .map(|e| {
                let x = e % w;
                if x == p || x == p + 1 {
                    p
                } else {
                    x
                }
            })
            .collect()
    }
}

/// A matching composed with a slice above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub top: Matching,
    /// One bottom endpoint on each closed circle.
    pub closed: Vec<usize>,
}

/// Stack `s` on top of `m`.
pub fn compose(m: &Matching, s: &FlatSlice) -> Composite {
    let w = s.below;
    let mut top = vec![0u16; s.above];
    let mut seen = vec![false; w];
    for y in 0..s.above {
        let mut e = w + y;
        loop {
            let f = s.partner[e];
            if f >= w {
                top[y] = (f - w) as u16;
                break;
            }
            seen[f] = true;
            let g = m[f] as usize;
            seen[g] = true;
            e = g;
        }
    }
    let mut closed = Vec::new();
    for x in 0..w {
        if seen[x] {
            continue;
        }
        closed.push(x);
        let mut e = x;
        loop {
            seen[e] = true;
            let f = s.partner[e];
            seen[f] = true;
            e = m[f] as usize;
            if e == x {
                break;
            }
        }
    }
    Composite { top, closed }
}

/// Circle of every point of `a` glued to the mirror of `b`, and the count.
pub fn circles(a: &Matching, b: &Matching) -> (Vec<usize>, usize) {
    let w = a.len();
    let mut id = vec![usize::MAX; w];
    let mut n = 0;
    for x in 0..w {
        if id[x] != usize::MAX {
            continue;
        }
        let mut e = x;
        loop {
            id[e] = n;
            let f = a[e] as usize;
            id[f] = n;
            e = b[f] as usize;
            if e == x {
                break;
            }
        }
        n += 1;
    }
    (id, n)
}

/// Connected pieces of a glued surface. Dotted nodes carry the input pattern;
/// every component lists its Euler characteristic and output circles.
#[derive(Clone, Debug)]
pub struct Gluing {
    /// Component of each dotted input node.
    dotted: Vec<usize>,
    chi: Vec<i64>,
    outputs: Vec<Vec<usize>>,
    pub output_count: usize,
}

impl Gluing {
    /// Rewrite one input pattern in the output basis.
    pub fn apply<R: Ring>(&self, mask: u64, coeff: &R, out: &mut BTreeMap<u64, R>) {
        let mut dots = vec![0u32; self.chi.len()];
        for (node, &k) in self.dotted.iter().enumerate() {
            if mask >> node & 1 == 1 {
                dots[k] += 1;
            }
        }
        let mut terms: Vec<(u64, R)> = vec![(0, coeff.clone())];
        for k in 0..self.chi.len() {
            let b = self.outputs[k].len() as i64;
            let g2 = 2 - b - self.chi[k];
            debug_assert!(g2 >= 0 && g2 % 2 == 0, "surface with chi {} and {b} boundary circles", self.chi[k]);
            let weight = dots[k] as i64 + g2 / 2;
            let all: u64 = self.outputs[k].iter().fold(0, |m, &c| m | 1 << c);
            match weight {
                0 if b == 0 => return,
                0 => {
                    terms = terms
                        .iter()
                        .flat_map(|(m, c)| self.outputs[k].iter().map(move |&u| (m | (all & !(1 << u)), c.clone())))
                        .collect();
                }
                1 => {
                    let f = R::from_i64(1 << (g2 / 2));
                    if f.is_zero() {
                        return;
                    }
                    for t in terms.iter_mut() {
                        t.0 |= all;
                        t.1 = t.1.mul(&f);
                    }
                }
                _ => return,
            }
        }
        for (m, c) in terms {
            let e = out.entry(m).or_insert_with(R::zero);
            *e = e.add(&c);
        }
    }

    pub fn apply_all<R: Ring>(&self, mor: &Mor<R>, scale: &R) -> Mor<R> {
        let mut acc = BTreeMap::new();
        for (m, c) in mor {
            self.apply(*m, &c.mul(scale), &mut acc);
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra.max(rb)] = ra.min(rb);
    }
    /// Dense component labels.
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut k = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = k;
                k += 1;
            }
            out[x] = id[r];
        }
        (out, k)
    }
}

/// Extend morphisms `m1 -> m2` by the slice cobordism from `s1` to `s2` with
/// the given endpoint pieces. Output circles: those through top points, then
/// the closed circles of the new source, then those of the new target.
pub fn glue_slice(
    m1: &Matching,
    m2: &Matching,
    s1: &FlatSlice,
    s2: &FlatSlice,
    pieces: &[usize],
) -> (Composite, Composite, Gluing) {
    let w = s1.below;
    let (old, c_old) = circles(m1, m2);
    let a = compose(m1, s1);
    let b = compose(m2, s2);
    let (new, c_new) = circles(&a.top, &b.top);
    let np = pieces.len();
    let mut uf = Components::new(c_old + np);
    for x in 0..w {
        uf.join(old[x], c_old + pieces[x]);
    }
    let (comp, nc) = uf.labels();
    let mut chi = vec![0i64; nc];
    let mut used = vec![false; np];
    for &p in pieces {
        if !used[p] {
            used[p] = true;
            chi[comp[c_old + p]] += 1;
        }
    }
    for node in 0..c_old {
        chi[comp[node]] += 1;
    }
    for x in 0..w {
        chi[comp[old[x]]] -= 1;
    }
    // The unused piece ids stand for nothing; drop their singleton components.
    let mut outputs = vec![Vec::new(); nc];
    let mut seen = vec![false; c_new];
    for y in 0..s1.above {
        if !seen[new[y]] {
            seen[new[y]] = true;
            outputs[comp[c_old + pieces[w + y]]].push(new[y]);
        }
    }
    let mut k = c_new;
    for &x in a.closed.iter().chain(&b.closed) {
        outputs[comp[c_old + pieces[x]]].push(k);
        k += 1;
    }
    let keep: Vec<bool> = (0..nc).map(|c| chi[c] != 0 || !outputs[c].is_empty() || comp[..c_old].contains(&c)).collect();
    let (chi, outputs, dotted) = compact(chi, outputs, comp[..c_old].to_vec(), &keep);
    (a, b, Gluing { dotted, chi, outputs, output_count: k })
}

fn compact(
    chi: Vec<i64>,
    outputs: Vec<Vec<usize>>,
    dotted: Vec<usize>,
    keep: &[bool],
) -> (Vec<i64>, Vec<Vec<usize>>, Vec<usize>) {
    let mut map = vec![usize::MAX; keep.len()];
    let mut n = 0;
    for (c, &k) in keep.iter().enumerate() {
        if k {
            map[c] = n;
            n += 1;
        }
    }
    let chi = chi.into_iter().enumerate().filter(|(c, _)| keep[*c]).map(|(_, v)| v).collect();
    let outputs = outputs.into_iter().enumerate().filter(|(c, _)| keep[*c]).map(|(_, v)| v).collect();
    (chi, outputs, dotted.into_iter().map(|c| map[c]).collect())
}

/// Gluing for the composite `second . first` of `ma -> mb -> mc`. Input
/// patterns are `first | second << c1` with `c1` the circle count of `(ma, mb)`.
pub fn glue_compose(ma: &Matching, mb: &Matching, mc: &Matching) -> (usize, Gluing) {
    let (c1_of, c1) = circles(ma, mb);
    let (c2_of, c2) = circles(mb, mc);
    let (out_of, c_out) = circles(ma, mc);
    let mut uf = Components::new(c1 + c2);
    let mut arcs = Vec::new();
    for x in 0..mb.len() {
        if x < mb[x] as usize {
            uf.join(c1_of[x], c1 + c2_of[x]);
            arcs.push(x);
        }
    }
    let (comp, nc) = uf.labels();
    let mut chi = vec![0i64; nc];
    for node in 0..c1 + c2 {
        chi[comp[node]] += 1;
    }
    for &x in &arcs {
        chi[comp[c1_of[x]]] -= 1;
    }
    let mut outputs = vec![Vec::new(); nc];
    let mut seen = vec![false; c_out];
    for y in 0..ma.len() {
        if !seen[out_of[y]] {
            seen[out_of[y]] = true;
            outputs[comp[c1_of[y]]].push(out_of[y]);
        }
    }
    (c1, Gluing { dotted: comp, chi, outputs, output_count: c_out })
}

/// Compose two morphisms through `mb`.
pub fn compose_mor<R: Ring>(ma: &Matching, mb: &Matching, mc: &Matching, first: &Mor<R>, second: &Mor<R>) -> Mor<R> {
    let (c1, g) = glue_compose(ma, mb, mc);
    let mut acc = BTreeMap::new();
    for (m1, x) in first {
        for (m2, y) in second {
            g.apply(m1 | m2 << c1, &x.mul(y), &mut acc);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Route each term of a morphism whose top circles are closed circles of the
/// source (`k1` of them, from bit `base`) and of the target (`k2`, after those)
/// to the delooped summands. A child index has bit `i` set for the `v+` copy,
/// shifted up by one in `q`.
pub fn deloop_route<R: Ring>(mor: Mor<R>, base: usize, k1: usize, k2: usize) -> Vec<(usize, usize, Mor<R>)> {
    let mut by: BTreeMap<(usize, usize), Mor<R>> = BTreeMap::new();
    let low = if base >= 64 { u64::MAX } else { (1u64 << base) - 1 };
    for (m, c) in mor {
        let hi = m >> base;
        let src_dots = (hi & ((1 << k1) - 1)) as usize;
        let tgt_dots = (hi >> k1 & ((1 << k2) - 1)) as usize;
        // Out of a v+ copy (an undotted cup) the closed circle must carry a dot;
        // into a v+ copy (a dotted cap) it must not.
        let u1 = src_dots;
        let u2 = !tgt_dots & ((1 << k2) - 1);
        by.entry((u1, u2)).or_default().push((m & low, c));
    }
    by.into_iter().map(|((a, b), m)| (a, b, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Int;

    fn id2() -> Matching {
        vec![1, 0]
    }

    #[test]
    fn cap_closes_a_circle() {
        let s = FlatSlice::new(Slice::Cap(0), 2).unwrap();
        let c = compose(&id2(), &s);
        assert!(c.top.is_empty());
        assert_eq!(c.closed, vec![0]);
        let cup = FlatSlice::new(Slice::Cup(0), 2).unwrap();
        let c = compose(&id2(), &cup);
        assert_eq!(c.top, vec![1, 0, 3, 2]);
    }

    #[test]
    fn neck_cutting_on_an_annulus() {
        // Identity on one arc, capped: the annulus between two circles.
        let s = FlatSlice::new(Slice::Cap(0), 2).unwrap();
        let (_, _, g) = glue_slice(&id2(), &id2(), &s, &s, &s.identity_pieces());
        let out = g.apply_all::<Int>(&vec![(0, Int::new(1))], &Int::new(1));
        assert_eq!(out, vec![(1, Int::new(1)), (2, Int::new(1))]);
        // v+ to v+: undotted source circle, dotted target circle.
        let routed = deloop_route(out, 0, 1, 1);
        assert_eq!(routed.len(), 2);
        assert!(routed.iter().all(|(a, b, _)| a == b));
    }

    #[test]
    fn saddle_then_saddle_is_a_handle() {
        // On two points with one arc: Turn -> Vert -> Turn is the identity with a
        // handle, i.e. multiplication by two dots' worth: 2x on the one circle.
        let w = 2;
        let m: Matching = vec![1, 0];
        let vert = FlatSlice::new(Slice::Vert(0), w).unwrap();
        let turn = FlatSlice::new(Slice::Turn(0), w).unwrap();
        let pieces = FlatSlice::saddle_pieces(0, w);
        let (a, b, g1) = glue_slice(&m, &m, &turn, &vert, &pieces);
        assert_eq!(a.closed.len(), 1);
        assert!(b.closed.is_empty());
        let first = g1.apply_all::<Int>(&vec![(0, Int::new(1))], &Int::new(1));
        assert!(!first.is_empty());
    }

    #[test]
    fn composition_of_identities() {
        let m: Matching = vec![1, 0, 3, 2];
        let one: Mor<Int> = vec![(0, Int::new(1))];
        assert_eq!(compose_mor(&m, &m, &m, &one, &one), one);
        // Dotting an arc twice kills the morphism.
        let dot: Mor<Int> = vec![(1, Int::new(1))];
        assert!(compose_mor(&m, &m, &m, &dot, &dot).is_empty());
    }
}
