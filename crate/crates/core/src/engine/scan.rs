//! Scanning simplifier: the diagram is read one slice at a time, closed circles
//! are delooped into shifted copies, and invertible differential entries are
//! cancelled as soon as they appear.
//!
//! Objects can carry a flag that tracks whether a designated set of crossings
//! has been resolved all-zero (or all-one) so far. Cancellations never mix
//! flagged and unflagged objects, so the unflagged objects of the result form
//! a complex homotopy equivalent to the corresponding sub or quotient of the
//! cube.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use crate::algebra::{Int, Ring, RingKind, F2};
use crate::error::{Error, Result};
use crate::grading::StableOffsets;
use crate::tangle::{LinkDiagram, Slice};

use super::cobordism::{compose_mor, deloop_route, glue_slice, Composite, FlatSlice, Gluing, Matching, Mor};
use super::complex::{ChainComplex, QBlock, SparseMatrix};

/// Which resolutions of the designated crossings keep an object flagged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlagRule {
    /// Every designated crossing resolved 0.
    #[default]
    AllZero,
    /// Every designated crossing resolved 1.
    AllOne,
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Raw quantum degrees to keep, inclusive. Objects that cannot reach the
    /// window are dropped early.
    pub q_window: Option<(i64, i64)>,
    /// Crossing indices of the designated set.
    pub designated: Vec<usize>,
    pub flag: FlagRule,
    /// Largest number of live objects before giving up.
    pub max_objects: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { q_window: None, designated: Vec::new(), flag: FlagRule::AllZero, max_objects: 4_000_000 }
    }
}

/// Result of a scan.
#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub complex: ChainComplex,
    /// The objects outside the flagged part.
    pub unflagged: ChainComplex,
    pub peak_objects: usize,
}

#[derive(Clone, Copy, Debug)]
struct Obj {
    m: usize,
    h: i64,
    q: i64,
    flag: bool,
}

struct Layer {
    slice: FlatSlice,
    dh: i64,
    dq: i64,
    /// `false` clears the flag.
    keeps_flag: bool,
}

struct Scan<R: Ring> {
    matchings: Vec<Matching>,
    index: HashMap<Matching, usize>,
    objs: Vec<Obj>,
    alive: Vec<bool>,
    out: Vec<HashMap<usize, Mor<R>>>,
    inc: Vec<HashSet<usize>>,
    live: usize,
}

impl<R: Ring> Scan<R> {
    fn empty() -> Self {
        Scan {
            matchings: Vec::new(),
            index: HashMap::new(),
            objs: Vec::new(),
            alive: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
            live: 0,
        }
    }

    fn intern(&mut self, m: Matching) -> usize {
        if let Some(&k) = self.index.get(&m) {
            return k;
        }
        self.matchings.push(m.clone());
        self.index.insert(m, self.matchings.len() - 1);
        self.matchings.len() - 1
    }

    fn push(&mut self, o: Obj) -> usize {
        self.objs.push(o);
        self.alive.push(true);
        self.out.push(HashMap::new());
        self.inc.push(HashSet::new());
        self.live += 1;
        self.objs.len() - 1
    }

    fn add(&mut self, a: usize, b: usize, mor: Mor<R>) {
        if mor.is_empty() {
            return;
        }
        let e = self.out[a].entry(b).or_default();
        let sum = add_mor(e, &mor);
        if sum.is_empty() {
            self.out[a].remove(&b);
            self.inc[b].remove(&a);
        } else {
            *e = sum;
            self.inc[b].insert(a);
        }
    }

    fn remove(&mut self, z: usize) {
        for a in std::mem::take(&mut self.inc[z]) {
            self.out[a].remove(&z);
        }
        for b in std::mem::take(&mut self.out[z]).into_keys() {
            self.inc[b].remove(&z);
        }
        self.alive[z] = false;
        self.live -= 1;
    }

    /// Apply one slice, given as one layer (planar slices) or two layers joined
    /// by a saddle (crossings).
    fn step(&self, layers: &[Layer], saddle: Option<&[usize]>) -> Scan<R> {
        let mut next = Scan::empty();
        let n = self.objs.len();
        // children[layer][obj] = (first child, closed circle count)
        let mut children = vec![vec![(usize::MAX, 0usize); n]; layers.len()];
        let mut comp_cache: HashMap<(usize, usize), Rc<Composite>> = HashMap::new();
        for (li, layer) in layers.iter().enumerate() {
            for o in 0..n {
                if !self.alive[o] {
                    continue;
                }
                let ob = self.objs[o];
                let c = comp_cache
                    .entry((li, ob.m))
                    .or_insert_with(|| Rc::new(super::cobordism::compose(&self.matchings[ob.m], &layer.slice)))
                    .clone();
                let m = next.intern(c.top.clone());
                let k = c.closed.len();
                let first = next.objs.len();
                for u in 0..1usize << k {
                    let shift = 2 * u.count_ones() as i64 - k as i64;
                    next.push(Obj {
                        m,
                        h: ob.h + layer.dh,
                        q: ob.q + layer.dq + shift,
                        flag: ob.flag && layer.keeps_flag,
                    });
                }
                children[li][o] = (first, k);
            }
        }
        let one = R::one();
        let mut glue_cache: HashMap<(usize, usize, usize), Rc<Gluing>> = HashMap::new();
        for (li, layer) in layers.iter().enumerate() {
            let pieces = layer.slice.identity_pieces();
            for a in 0..n {
                if !self.alive[a] {
                    continue;
                }
                for (&b, mor) in &self.out[a] {
                    let (ma, mb) = (self.objs[a].m, self.objs[b].m);
                    let g = glue_cache
                        .entry((li, ma, mb))
                        .or_insert_with(|| {
                            let s = &layer.slice;
                            Rc::new(glue_slice(&self.matchings[ma], &self.matchings[mb], s, s, &pieces).2)
                        })
                        .clone();
                    let (ca, ka) = children[li][a];
                    let (cb, kb) = children[li][b];
                    let base = g.output_count - ka - kb;
                    for (u1, u2, m) in deloop_route(g.apply_all(mor, &one), base, ka, kb) {
                        next.add(ca + u1, cb + u2, m);
                    }
                }
            }
        }
        if let Some(pieces) = saddle {
            let (s0, s1) = (&layers[0].slice, &layers[1].slice);
            for o in 0..n {
                if !self.alive[o] {
                    continue;
                }
                let ob = self.objs[o];
                let m = &self.matchings[ob.m];
                let (_, _, g) = glue_slice(m, m, s0, s1, pieces);
                let sign = if ob.h.rem_euclid(2) == 0 { R::one() } else { R::one().neg() };
                let (ca, ka) = children[0][o];
                let (cb, kb) = children[1][o];
                let base = g.output_count - ka - kb;
                for (u1, u2, mor) in deloop_route(g.apply_all(&vec![(0, sign)], &one), base, ka, kb) {
                    next.add(ca + u1, cb + u2, mor);
                }
            }
        }
        next
    }

    #[cfg(test)]
    fn check_degrees(&self) {
        for a in 0..self.objs.len() {
            if !self.alive[a] {
                continue;
            }
            for (&b, mor) in &self.out[a] {
                let (ma, mb) = (&self.matchings[self.objs[a].m], &self.matchings[self.objs[b].m]);
                let c = super::cobordism::circles(ma, mb).1 as i64;
                let w = ma.len() as i64;
                for (m, _) in mor {
                    let deg = c - w / 2 - 2 * m.count_ones() as i64;
                    assert_eq!(deg, self.objs[a].q - self.objs[b].q, "{:?} {:?} {:?} {:?} {m:b}", self.objs[a], self.objs[b], ma, mb);
                    assert_eq!(self.objs[b].h, self.objs[a].h + 1);
                }
            }
        }
    }

    /// Drop objects whose reachable quantum degrees miss the window.
    fn prune(&mut self, window: (i64, i64), reach: (i64, i64)) {
        for o in 0..self.objs.len() {
            if self.alive[o] {
                let q = self.objs[o].q;
                if q + reach.0 > window.1 || q + reach.1 < window.0 {
                    self.remove(o);
                }
            }
        }
    }

    fn is_iso(&self, x: usize, y: usize, mor: &Mor<R>) -> Option<R> {
        let (a, b) = (self.objs[x], self.objs[y]);
        if a.m != b.m || a.q != b.q || a.flag != b.flag || mor.len() != 1 || mor[0].0 != 0 {
            return None;
        }
        mor[0].1.unit_inverse()
    }

    /// Cancel isomorphisms, cheapest fill first, until none remain.
    fn simplify(&mut self) {
        loop {
            let mut cand = Vec::new();
            for x in 0..self.objs.len() {
                if !self.alive[x] {
                    continue;
                }
                for (&y, mor) in &self.out[x] {
                    if self.is_iso(x, y, mor).is_some() {
                        cand.push(((self.inc[y].len() - 1) * (self.out[x].len() - 1), x, y));
                    }
                }
            }
            if cand.is_empty() {
                return;
            }
            cand.sort_unstable();
            for (_, x, y) in cand {
                if !(self.alive[x] && self.alive[y]) {
                    continue;
                }
                let Some(mor) = self.out[x].get(&y) else { continue };
                let Some(inv) = self.is_iso(x, y, mor) else { continue };
                self.cancel(x, y, inv);
            }
        }
    }

    fn cancel(&mut self, x: usize, y: usize, inv: R) {
        let my = self.objs[y].m;
        let minus = inv.neg();
        let sources: Vec<(usize, Mor<R>)> =
            self.inc[y].iter().filter(|&&a| a != x).map(|&a| (a, self.out[a][&y].clone())).collect();
        let targets: Vec<(usize, Mor<R>)> =
            self.out[x].iter().filter(|(&b, _)| b != y).map(|(&b, m)| (b, m.clone())).collect();
        for (a, delta) in &sources {
            let delta: Mor<R> = delta.iter().map(|(m, c)| (*m, c.mul(&minus))).collect();
            for (b, gamma) in &targets {
                let (ma, mb) = (self.objs[*a].m, self.objs[*b].m);
                let f = compose_mor(&self.matchings[ma], &self.matchings[my], &self.matchings[mb], &delta, gamma);
                self.add(*a, *b, f);
            }
        }
        self.remove(x);
        self.remove(y);
    }

    /// Read off the closed complex, keeping objects accepted by `keep`.
    fn finish(&self, ring: RingKind, keep: impl Fn(&Obj) -> bool) -> ChainComplex {
        let mut blocks: BTreeMap<i64, QBlock> = BTreeMap::new();
        let mut index = vec![usize::MAX; self.objs.len()];
        for (o, ob) in self.objs.iter().enumerate() {
            if self.alive[o] && keep(ob) {
                let b = blocks.entry(ob.q).or_insert_with(|| QBlock::new(ob.q));
                let n = b.dims.entry(ob.h).or_insert(0);
                index[o] = *n;
                *n += 1;
            }
        }
        for (o, ob) in self.objs.iter().enumerate() {
            if index[o] == usize::MAX {
                continue;
            }
            for (&t, mor) in &self.out[o] {
                if index[t] == usize::MAX {
                    continue;
                }
                let b = blocks.get_mut(&ob.q).unwrap();
                let (rows, cols) = (b.dim(ob.h + 1), b.dim(ob.h));
                for (m, c) in mor {
                    debug_assert_eq!(*m, 0);
                    b.d.entry(ob.h).or_insert_with(|| SparseMatrix::new(rows, cols)).add(index[t], index[o], &c.to_int());
                }
            }
        }
        ChainComplex { ring, offsets: StableOffsets::default(), blocks }
    }
}

fn add_mor<R: Ring>(a: &Mor<R>, b: &Mor<R>) -> Mor<R> {
    let mut acc: BTreeMap<u64, R> = a.iter().cloned().collect();
    for (m, c) in b {
        let e = acc.entry(*m).or_insert_with(R::zero);
        *e = e.add(c);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Quantum shifts `(0-side, 1-side)` of a crossing of sign `s`.
fn crossing_q(sign: i8) -> ((i64, i64), (i64, i64)) {
    if sign > 0 {
        ((0, 1), (1, 2))
    } else {
        ((-1, -2), (0, -1))
    }
}

/// Lowest and highest quantum change the slices from `l` on can still cause.
fn reach(d: &LinkDiagram) -> Vec<(i64, i64)> {
    let t = d.tangle();
    let mut out = vec![(0, 0); t.len() + 1];
    let mut c = d.crossing_count();
    for l in (0..t.len()).rev() {
        let (lo, hi) = out[l + 1];
        out[l] = match t.slices()[l] {
            Slice::Pos(_) | Slice::Neg(_) => {
                c -= 1;
                let ((_, a), (_, b)) = crossing_q(d.crossings()[c].sign);
                (lo + a.min(b) - 1, hi + a.max(b) + 1)
            }
            Slice::Cap(_) | Slice::Turn(_) => (lo - 1, hi + 1),
            Slice::Cup(_) | Slice::Vert(_) => (lo, hi),
        };
    }
    out
}

fn run<R: Ring>(d: &LinkDiagram, opts: &ScanOptions) -> Result<ScanOutput> {
    let t = d.tangle();
    if t.bottom() != 0 {
        return Err(Error::Width("scanning needs a diagram with no bottom endpoints".into()));
    }
    if t.max_width() > 120 {
        return Err(Error::Resource(format!("width {} is beyond the scanner", t.max_width())));
    }
    let designated: HashSet<usize> = opts.designated.iter().copied().collect();
    if let Some(&c) = designated.iter().find(|&&c| c >= d.crossing_count()) {
        return Err(Error::input(format!("no crossing {c}")));
    }
    let reach = reach(d);
    let mut scan = Scan::<R>::empty();
    let empty = scan.intern(Vec::new());
    scan.push(Obj { m: empty, h: 0, q: 0, flag: true });
    let mut peak = 1;
    let mut c = 0;
    for (l, s) in t.slices().iter().enumerate() {
        let w = t.width(l);
        scan = match *s {
            Slice::Pos(p) | Slice::Neg(p) => {
                let x = &d.crossings()[c];
                let ((h0, q0), (h1, q1)) = crossing_q(x.sign);
                let res = |bit: bool| if d.is_vertical(c, bit) { Slice::Vert(p) } else { Slice::Turn(p) };
                let des = designated.contains(&c);
                let keeps = |bit: bool| !des || (bit == (opts.flag == FlagRule::AllOne));
                let layers = [
                    Layer { slice: FlatSlice::new(res(false), w).unwrap(), dh: h0, dq: q0, keeps_flag: keeps(false) },
                    Layer { slice: FlatSlice::new(res(true), w).unwrap(), dh: h1, dq: q1, keeps_flag: keeps(true) },
                ];
                c += 1;
                // The saddle always runs from the vertical side to the turnback side or back.
                scan.step(&layers, Some(&FlatSlice::saddle_pieces(p, w)))
            }
            other => {
                let layer = Layer { slice: FlatSlice::new(other, w).unwrap(), dh: 0, dq: 0, keeps_flag: true };
                scan.step(&[layer], None)
            }
        };
        if let Some(win) = opts.q_window {
            scan.prune(win, reach[l + 1]);
        }
        #[cfg(test)]
        scan.check_degrees();
        scan.simplify();
        #[cfg(test)]
        scan.check_degrees();
        peak = peak.max(scan.live);
        if scan.live > opts.max_objects {
            return Err(Error::Resource(format!(
                "{} objects after slice {l} exceed the budget of {}",
                scan.live, opts.max_objects
            )));
        }
    }
    let in_window = |o: &Obj| opts.q_window.is_none_or(|(a, b)| o.q >= a && o.q <= b);
    Ok(ScanOutput {
        complex: scan.finish(R::KIND, |o| in_window(o)),
        unflagged: scan.finish(R::KIND, |o| in_window(o) && !o.flag),
        peak_objects: peak,
    })
}

/// Scan with options over the given ring.
pub fn scan(d: &LinkDiagram, ring: RingKind, opts: &ScanOptions) -> Result<ScanOutput> {
    match ring {
        RingKind::F2 => run::<F2>(d, opts),
        RingKind::Z => run::<Int>(d, opts),
    }
}

/// A small complex homotopy equivalent to the cube of `d`.
pub fn simplify_scan(d: &LinkDiagram, ring: RingKind) -> Result<ChainComplex> {
    Ok(scan(d, ring, &ScanOptions::default())?.complex)
}
