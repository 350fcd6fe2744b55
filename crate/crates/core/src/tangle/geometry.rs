//! Strand segments of a sliced tangle and how they connect.
//!
//! A segment is the piece of strand crossing a level at one position.
//! Walking a strand moves from segment to segment; passing through a crossing
//! goes straight across, and passing through a cup or cap reverses the
//! vertical direction of travel.

use super::slice::{Slice, SlicedTangle};
use crate::error::{Error, Result};

/// Where a strand goes after leaving a segment through one of its ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Next {
    /// Continue into segment `seg`, now travelling up (`true`) or down.
    Seg { seg: usize, up: bool },
    /// The strand ends on the tangle boundary.
    Boundary,
}

/// Segment connectivity of a tangle.
#[derive(Clone, Debug)]
pub struct Geometry {
    base: Vec<usize>,
    widths: Vec<usize>,
    up_next: Vec<Next>,
    down_next: Vec<Next>,
    /// Component index of every segment.
    pub comp_of: Vec<usize>,
    /// Segments of each component in walking order; components are ordered
    /// by their lowest-leftmost segment.
    pub components: Vec<Vec<usize>>,
    /// Whether each component is a closed loop.
    pub closed: Vec<bool>,
}

impl Geometry {
    pub fn new(t: &SlicedTangle) -> Self {
        let widths = t.widths().to_vec();
        let mut base = Vec::with_capacity(widths.len() + 1);
        let mut acc = 0;
        for &w in &widths {
            base.push(acc);
            acc += w;
        }
        base.push(acc);
        let nseg = acc;
        let seg = |l: usize, x: usize| base[l] + x;
        let mut up_next = vec![Next::Boundary; nseg];
        let mut down_next = vec![Next::Boundary; nseg];
        let top = t.len();
        for (l, s) in t.slices().iter().enumerate() {
            let w = widths[l];
            let p = s.pos();
            // Upward exits from level l through slice l.
            for x in 0..w {
                up_next[seg(l, x)] = match *s {
                    Slice::Pos(_) | Slice::Neg(_) if x == p => Next::Seg { seg: seg(l + 1, p + 1), up: true },
                    Slice::Pos(_) | Slice::Neg(_) if x == p + 1 => Next::Seg { seg: seg(l + 1, p), up: true },
                    Slice::Cap(_) | Slice::Turn(_) if x == p => Next::Seg { seg: seg(l, p + 1), up: false },
                    Slice::Cap(_) | Slice::Turn(_) if x == p + 1 => Next::Seg { seg: seg(l, p), up: false },
                    Slice::Cup(_) if x >= p => Next::Seg { seg: seg(l + 1, x + 2), up: true },
                    Slice::Cap(_) if x > p + 1 => Next::Seg { seg: seg(l + 1, x - 2), up: true },
                    _ => Next::Seg { seg: seg(l + 1, x), up: true },
                };
            }
            // Downward exits from level l + 1 through slice l.
            for x in 0..widths[l + 1] {
                down_next[seg(l + 1, x)] = match *s {
                    Slice::Pos(_) | Slice::Neg(_) if x == p => Next::Seg { seg: seg(l, p + 1), up: false },
                    Slice::Pos(_) | Slice::Neg(_) if x == p + 1 => Next::Seg { seg: seg(l, p), up: false },
                    Slice::Cup(_) | Slice::Turn(_) if x == p => Next::Seg { seg: seg(l + 1, p + 1), up: true },
                    Slice::Cup(_) | Slice::Turn(_) if x == p + 1 => Next::Seg { seg: seg(l + 1, p), up: true },
                    Slice::Cup(_) if x > p + 1 => Next::Seg { seg: seg(l, x - 2), up: false },
                    Slice::Cap(_) if x >= p => Next::Seg { seg: seg(l, x + 2), up: false },
                    _ => Next::Seg { seg: seg(l, x), up: false },
                };
            }
        }
        let _ = top;
        let mut g = Geometry {
            base,
            widths,
            up_next,
            down_next,
            comp_of: vec![usize::MAX; nseg],
            components: Vec::new(),
            closed: Vec::new(),
        };
        g.find_components();
        g
    }

    pub fn seg(&self, level: usize, pos: usize) -> usize {
        self.base[level] + pos
    }

    /// `(level, pos)` of a segment.
    pub fn locate(&self, seg: usize) -> (usize, usize) {
        let l = self.base.partition_point(|&b| b <= seg) - 1;
        (l, seg - self.base[l])
    }

    pub fn segment_count(&self) -> usize {
        *self.base.last().unwrap()
    }

    pub fn level_count(&self) -> usize {
        self.widths.len()
    }

    pub fn width(&self, level: usize) -> usize {
        self.widths[level]
    }

    /// Leave `seg` travelling up (`up = true`) or down.
    pub fn step(&self, seg: usize, up: bool) -> Next {
        if up {
            self.up_next[seg]
        } else {
            self.down_next[seg]
        }
    }

    /// Walk from `seg` in direction `up` until the strand returns or hits the
    /// boundary; yields `(segment, travelling_up)` starting with the input.
    pub fn walk(&self, seg: usize, up: bool) -> Vec<(usize, bool)> {
        let mut out = vec![(seg, up)];
        let (mut s, mut u) = (seg, up);
        loop {
            match self.step(s, u) {
                Next::Boundary => break,
                Next::Seg { seg: s2, up: u2 } => {
                    if s2 == seg {
                        break;
                    }
                    out.push((s2, u2));
                    s = s2;
                    u = u2;
                }
            }
        }
        out
    }

    fn find_components(&mut self) {
        let n = self.segment_count();
        for s0 in 0..n {
            if self.comp_of[s0] != usize::MAX {
                continue;
            }
            let c = self.components.len();
            let fwd = self.walk(s0, true);
            let closed = matches!(self.step(fwd.last().unwrap().0, fwd.last().unwrap().1), Next::Seg { seg, .. } if seg == s0);
            let mut segs: Vec<usize> = fwd.iter().map(|x| x.0).collect();
            if !closed {
                let back = self.walk(s0, false);
                let mut before: Vec<usize> = back[1..].iter().map(|x| x.0).collect();
                before.reverse();
                before.extend(segs);
                segs = before;
            }
            for &s in &segs {
                self.comp_of[s] = c;
            }
            self.components.push(segs);
            self.closed.push(closed);
        }
    }

    /// Orient every segment. A component with a hinted segment gets the hinted
    /// direction; any other component has its lowest-leftmost segment pointing up.
    /// Returns the per-segment direction (`true` = up).
    pub fn orient(&self, hints: &[(usize, bool)]) -> Result<Vec<bool>> {
        let n = self.segment_count();
        let mut dir: Vec<Option<bool>> = vec![None; n];
        let mut chosen: Vec<Option<(usize, bool)>> = vec![None; self.components.len()];
        for &(s, up) in hints {
            if s >= n {
                return Err(Error::Orientation(format!("hint on missing segment {s}")));
            }
            let c = self.comp_of[s];
            if chosen[c] == None { chosen[c] = Some((s, up)) }
        }
        for (c, segs) in self.components.iter().enumerate() {
            let (s0, up0) = chosen[c].unwrap_or((segs.iter().copied().min().unwrap(), true));
            for (s, u) in self.walk(s0, up0) {
                dir[s] = Some(u);
            }
            if !self.closed[c] {
                for (s, u) in self.walk(s0, !up0).into_iter().skip(1) {
                    dir[s] = Some(!u);
                }
            }
        }
        let dir: Vec<bool> = dir.into_iter().map(|d| d.expect("every segment lies on a component")).collect();
        for &(s, up) in hints {
            if dir[s] != up {
                let (l, x) = self.locate(s);
                return Err(Error::Orientation(format!("conflicting orientation hints at level {l}, position {x}")));
            }
        }
        Ok(dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    #[test]
    fn hopf_has_two_closed_components() {
        let t = BraidWord::new(2, vec![1, 1]).unwrap().to_tangle().trace_closure().unwrap();
        let g = Geometry::new(&t);
        assert_eq!(g.components.len(), 2);
        assert!(g.closed.iter().all(|&c| c));
    }

    #[test]
    fn open_strands_reach_the_boundary() {
        let t = BraidWord::new(3, vec![1, 2]).unwrap().to_tangle();
        let g = Geometry::new(&t);
        assert_eq!(g.components.len(), 3);
        assert!(g.closed.iter().all(|&c| !c));
        let dir = g.orient(&[]).unwrap();
        assert!(dir.iter().all(|&d| d));
    }

    #[test]
    fn cap_reverses_direction() {
        let t = SlicedTangle::identity(2).cap_top(1).unwrap();
        let g = Geometry::new(&t);
        assert_eq!(g.components.len(), 1);
        let dir = g.orient(&[]).unwrap();
        assert_eq!(dir, vec![true, false]);
    }

    #[test]
    fn conflicting_hints_are_rejected() {
        let t = SlicedTangle::identity(2).cap_top(1).unwrap();
        let g = Geometry::new(&t);
        assert!(g.orient(&[(0, true), (1, true)]).is_err());
        assert_eq!(g.orient(&[(1, true)]).unwrap(), vec![false, true]);
    }
}
