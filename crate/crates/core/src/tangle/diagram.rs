//! Oriented closed link diagrams, crossing signs and resolutions.

use serde::{Deserialize, Serialize};

use super::geometry::Geometry;
use super::slice::{Hint, Slice, SlicedTangle};
use crate::error::{Error, Result};

/// Geometric type of a crossing slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossKind {
    Pos,
    Neg,
}

/// One crossing of a diagram, in slice order.
#[derive(Clone, Debug)]
pub struct Crossing {
    /// Index of the slice holding the crossing.
    pub slice: usize,
    pub pos: usize,
    pub kind: CrossKind,
    /// +1 or -1 for the chosen orientation.
    pub sign: i8,
    /// Segments bottom-left, bottom-right, top-left, top-right.
    pub segs: [usize; 4],
    /// Edges of the 4-valent graph at the same four corners.
    pub edges: [usize; 4],
}

/// A 0/1 choice per crossing, in slice order.
pub type ResolutionState = Vec<bool>;

/// An oriented closed diagram in sliced form.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    tangle: SlicedTangle,
    geom: Geometry,
    up: Vec<bool>,
    crossings: Vec<Crossing>,
    edge_of: Vec<usize>,
    edge_count: usize,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn union(p: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra == rb {
        return false;
    }
    p[ra.max(rb)] = ra.min(rb);
    true
}

impl LinkDiagram {
    /// Orient a closed tangle using its hints, defaulting to the lowest-leftmost rule.
    pub fn new(tangle: SlicedTangle) -> Result<Self> {
        if !tangle.is_closed() {
            return Err(Error::Width(format!(
                "a link diagram needs no free ends, got ({}, {})",
                tangle.top(),
                tangle.bottom()
            )));
        }
        let geom = Geometry::new(&tangle);
        let hints: Vec<(usize, bool)> = tangle
            .hints
            .iter()
            .map(|h| {
                if h.level >= geom.level_count() || h.pos >= geom.width(h.level) {
                    Err(Error::Orientation(format!("hint at ({}, {}) is off the diagram", h.level, h.pos)))
                } else {
                    Ok((geom.seg(h.level, h.pos), h.up))
                }
            })
            .collect::<Result<_>>()?;
        let up = geom.orient(&hints)?;
        Ok(Self::assemble(tangle, geom, up))
    }

    fn assemble(tangle: SlicedTangle, geom: Geometry, up: Vec<bool>) -> Self {
        // Edges: union segments through every non-crossing slice and along the
        // strands that pass beside a crossing.
        let n = geom.segment_count();
        let mut parent: Vec<usize> = (0..n).collect();
        for (l, s) in tangle.slices().iter().enumerate() {
            if s.is_crossing() {
                let p = s.pos();
                for x in (0..tangle.width(l)).filter(|&x| x != p && x != p + 1) {
                    union(&mut parent, geom.seg(l, x), geom.seg(l + 1, x));
                }
                continue;
            }
            for x in 0..tangle.width(l) {
                if let super::geometry::Next::Seg { seg, .. } = geom.step(geom.seg(l, x), true) {
                    union(&mut parent, geom.seg(l, x), seg);
                }
            }
            for x in 0..tangle.width(l + 1) {
                if let super::geometry::Next::Seg { seg, .. } = geom.step(geom.seg(l + 1, x), false) {
                    union(&mut parent, geom.seg(l + 1, x), seg);
                }
            }
        }
        let mut edge_id = vec![usize::MAX; n];
        let mut edge_of = vec![0; n];
        let mut edge_count = 0;
        for s in 0..n {
            let r = find(&mut parent, s);
            if edge_id[r] == usize::MAX {
                edge_id[r] = edge_count;
                edge_count += 1;
            }
            edge_of[s] = edge_id[r];
        }
        let mut crossings = Vec::new();
        for (l, s) in tangle.slices().iter().enumerate() {
            let kind = match s {
                Slice::Pos(_) => CrossKind::Pos,
                Slice::Neg(_) => CrossKind::Neg,
                _ => continue,
            };
            let p = s.pos();
            let segs = [geom.seg(l, p), geom.seg(l, p + 1), geom.seg(l + 1, p), geom.seg(l + 1, p + 1)];
            // Strand a runs bottom-left to top-right, strand b bottom-right to top-left.
            let same = up[segs[0]] == up[segs[1]];
            let sign = match (kind, same) {
                (CrossKind::Pos, true) | (CrossKind::Neg, false) => 1,
                _ => -1,
            };
            crossings.push(Crossing {
                slice: l,
                pos: p,
                kind,
                sign,
                segs,
                edges: segs.map(|x| edge_of[x]),
            });
        }
        LinkDiagram { tangle, geom, up, crossings, edge_of, edge_count }
    }

    /// The same diagram with an explicit per-component orientation flip
    /// relative to the current one.
    pub fn reoriented(&self, flip: &[bool]) -> Result<Self> {
        if flip.len() != self.component_count() {
            return Err(Error::Orientation(format!(
                "expected {} component flags, got {}",
                self.component_count(),
                flip.len()
            )));
        }
        let up: Vec<bool> =
            (0..self.up.len()).map(|s| self.up[s] ^ flip[self.geom.comp_of[s]]).collect();
        let mut t = self.tangle.clone();
        t.hints = self.canonical_hints_from(&up);
        Ok(Self::assemble(t, self.geom.clone(), up))
    }

    fn canonical_hints_from(&self, up: &[bool]) -> Vec<Hint> {
        self.geom
            .components
            .iter()
            .map(|segs| {
                let s = *segs.iter().min().unwrap();
                let (level, pos) = self.geom.locate(s);
                Hint { level, pos, up: up[s] }
            })
            .collect()
    }

    /// One hint per component recording the orientation in use.
    pub fn orientation_hints(&self) -> Vec<Hint> {
        self.canonical_hints_from(&self.up)
    }

    /// The underlying tangle with hints pinned to the current orientation.
    pub fn oriented_tangle(&self) -> SlicedTangle {
        let mut t = self.tangle.clone();
        t.hints = self.orientation_hints();
        t
    }

    pub fn tangle(&self) -> &SlicedTangle {
        &self.tangle
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.geom.components.len()
    }

    /// Direction of a segment (`true` = up).
    pub fn is_up(&self, seg: usize) -> bool {
        self.up[seg]
    }

    pub fn is_up_at(&self, level: usize, pos: usize) -> bool {
        self.up[self.geom.seg(level, pos)]
    }

    pub fn component_at(&self, level: usize, pos: usize) -> usize {
        self.geom.comp_of[self.geom.seg(level, pos)]
    }

    pub fn edge_of(&self, seg: usize) -> usize {
        self.edge_of[seg]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `(n+, n-)`.
    pub fn crossing_signs(&self) -> (usize, usize) {
        let pos = self.crossings.iter().filter(|c| c.sign > 0).count();
        (pos, self.crossings.len() - pos)
    }

    /// `n+ - 2 n-`.
    pub fn n_shift(&self) -> i64 {
        let (p, n) = self.crossing_signs();
        p as i64 - 2 * n as i64
    }

    /// Whether resolution `bit` of crossing `c` joins the strands vertically.
    pub fn is_vertical(&self, c: usize, bit: bool) -> bool {
        match self.crossings[c].kind {
            CrossKind::Pos => !bit,
            CrossKind::Neg => bit,
        }
    }

    /// Number of circles of a resolution and the circle of every edge.
    pub fn resolve(&self, state: &[bool]) -> Result<(usize, Vec<usize>)> {
        if state.len() != self.crossings.len() {
            return Err(Error::input(format!(
                "state has {} bits for {} crossings",
                state.len(),
                self.crossings.len()
            )));
        }
        let mut parent: Vec<usize> = (0..self.edge_count).collect();
        for (c, x) in self.crossings.iter().enumerate() {
            let [bl, br, tl, tr] = x.edges;
            if self.is_vertical(c, state[c]) {
                union(&mut parent, bl, tl);
                union(&mut parent, br, tr);
            } else {
                union(&mut parent, bl, br);
                union(&mut parent, tl, tr);
            }
        }
        let mut label = vec![usize::MAX; self.edge_count];
        let mut count = 0;
        let mut of = vec![0; self.edge_count];
        for e in 0..self.edge_count {
            let r = find(&mut parent, e);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            of[e] = label[r];
        }
        Ok((count, of))
    }

    /// Circle count of a resolution.
    pub fn circle_count(&self, state: &[bool]) -> usize {
        self.resolve(state).map(|r| r.0).unwrap_or(0)
    }

    /// The diagram with crossing `c` replaced by its smoothing `bit`,
    /// oriented consistently with `self` wherever possible.
    pub fn smoothing(&self, c: usize, bit: bool) -> Result<LinkDiagram> {
        let x = &self.crossings[c];
        let repl = if self.is_vertical(c, bit) { Slice::Vert(x.pos) } else { Slice::Turn(x.pos) };
        let t = self.tangle.replace_slice(x.slice, &[repl])?;
        self.inherit_orientation(t)
    }

    /// Orient a tangle with the same level structure as `self`: every component
    /// takes the direction `self` gives its lowest-leftmost segment.
    pub fn inherit_orientation(&self, mut t: SlicedTangle) -> Result<LinkDiagram> {
        if t.widths() != self.tangle.widths() {
            return Err(Error::Width("orientation transfer needs identical levels".into()));
        }
        let g = Geometry::new(&t);
        t.hints = g
            .components
            .iter()
            .map(|segs| {
                let s = *segs.iter().min().unwrap();
                let (level, pos) = g.locate(s);
                Hint { level, pos, up: self.up[s] }
            })
            .collect();
        LinkDiagram::new(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    fn closure(n: usize, w: &[i32]) -> LinkDiagram {
        LinkDiagram::new(BraidWord::new(n, w.to_vec()).unwrap().to_tangle().trace_closure().unwrap()).unwrap()
    }

    #[test]
    fn hopf_signs() {
        let h = closure(2, &[1, 1]);
        assert_eq!(h.crossing_signs(), (2, 0));
        assert_eq!(h.component_count(), 2);
        let r = h.reoriented(&[false, true]).unwrap();
        assert_eq!(r.crossing_signs(), (0, 2));
    }

    #[test]
    fn hopf_resolutions() {
        let h = closure(2, &[1, 1]);
        assert_eq!(h.circle_count(&[false, false]), 2);
        assert_eq!(h.circle_count(&[true, true]), 2);
        assert_eq!(h.circle_count(&[true, false]), 1);
    }

    #[test]
    fn unknot_closures() {
        let u = closure(2, &[1]);
        assert_eq!(u.component_count(), 1);
        assert_eq!(u.crossing_count(), 1);
        let o = closure(1, &[]);
        assert_eq!(o.circle_count(&[]), 1);
        assert_eq!(closure(2, &[1, -1]).crossing_signs(), (1, 1));
    }

    #[test]
    fn smoothing_keeps_orientation_of_oriented_resolution() {
        let h = closure(2, &[1, 1]);
        let s = h.smoothing(0, false).unwrap();
        assert_eq!(s.crossing_signs(), (1, 0));
        assert_eq!(s.component_count(), 1);
    }

    #[test]
    fn state_length_checked() {
        assert!(closure(2, &[1, 1]).resolve(&[true]).is_err());
    }
}
