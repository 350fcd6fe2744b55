//! Sliced (Morse) tangle diagrams.
//!
//! A tangle is a vertical stack of elementary slices read bottom to top.
//! Level `l` is the horizontal line between slice `l - 1` and slice `l`;
//! level 0 is the bottom boundary and level `len` the top boundary.
//! Positions on a level are numbered from 0 at the left.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One elementary slice acting at position `p` (the left of the two strands involved).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slice {
    /// Crossing whose strand from bottom `p` to top `p + 1` passes over.
    Pos(usize),
    /// Crossing whose strand from bottom `p + 1` to top `p` passes over.
    Neg(usize),
    /// Creates two new endpoints at `p` and `p + 1` joined by an arc.
    Cup(usize),
    /// Joins the endpoints at `p` and `p + 1`.
    Cap(usize),
    /// A crossing smoothed vertically: two parallel strands.
    Vert(usize),
    /// A crossing smoothed horizontally: a cap at `p` below a cup at `p`.
    Turn(usize),
}

impl Slice {
    pub fn pos(self) -> usize {
        match self {
            Slice::Pos(p)
            | Slice::Neg(p)
            | Slice::Cup(p)
            | Slice::Cap(p)
            | Slice::Vert(p)
            | Slice::Turn(p) => p,
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Slice::Pos(_) | Slice::Neg(_))
    }

    /// Width above the slice given the width below.
    pub fn width_above(self, below: usize) -> Option<usize> {
        let p = self.pos();
        match self {
            Slice::Cup(_) => (p <= below).then_some(below + 2),
            Slice::Cap(_) => (p + 2 <= below).then(|| below - 2),
            _ => (p + 2 <= below).then_some(below),
        }
    }

    /// The same slice with its position moved by `d`.
    pub fn shifted(self, d: usize) -> Slice {
        self.with_pos(self.pos() + d)
    }

    pub fn with_pos(self, p: usize) -> Slice {
        match self {
            Slice::Pos(_) => Slice::Pos(p),
            Slice::Neg(_) => Slice::Neg(p),
            Slice::Cup(_) => Slice::Cup(p),
            Slice::Cap(_) => Slice::Cap(p),
            Slice::Vert(_) => Slice::Vert(p),
            Slice::Turn(_) => Slice::Turn(p),
        }
    }

    /// The slice seen after rotating the plane by a half turn; `below` is the
    /// width below the original slice.
    pub fn rotated(self, below: usize) -> Slice {
        let p = self.pos();
        match self {
            Slice::Cup(_) => Slice::Cap(below - p),
            Slice::Cap(_) => Slice::Cup(below - 2 - p),
            other => other.with_pos(below - 2 - p),
        }
    }

    /// The slice seen in a mirror that swaps over and under strands.
    pub fn mirrored(self) -> Slice {
        match self {
            Slice::Pos(p) => Slice::Neg(p),
            Slice::Neg(p) => Slice::Pos(p),
            other => other,
        }
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Pos(p) => write!(f, "x+ {p}"),
            Slice::Neg(p) => write!(f, "x- {p}"),
            Slice::Cup(p) => write!(f, "cup {p}"),
            Slice::Cap(p) => write!(f, "cap {p}"),
            Slice::Vert(p) => write!(f, "id {p}"),
            Slice::Turn(p) => write!(f, "tb {p}"),
        }
    }
}

/// A twist-insertion site: `width` adjacent strands starting at `pos` on `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub level: usize,
    pub pos: usize,
    pub width: usize,
}

/// Orientation request: the strand segment at `(level, pos)` points up or down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hint {
    pub level: usize,
    pub pos: usize,
    pub up: bool,
}

/// A tangle as a stack of slices, with optional twist slots and orientation hints
/// anchored to levels so that every structural operation carries them along.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlicedTangle {
    bottom: usize,
    slices: Vec<Slice>,
    widths: Vec<usize>,
    pub slots: Vec<Slot>,
    pub hints: Vec<Hint>,
}

impl SlicedTangle {
    pub fn new(bottom: usize, slices: Vec<Slice>) -> Result<Self> {
        let mut widths = Vec::with_capacity(slices.len() + 1);
        widths.push(bottom);
        let mut w = bottom;
        for (k, s) in slices.iter().enumerate() {
            w = s.width_above(w).ok_or_else(|| {
                Error::Width(format!("slice {k} (`{s}`) does not fit on {w} strands"))
            })?;
            widths.push(w);
        }
        Ok(SlicedTangle { bottom, slices, widths, slots: Vec::new(), hints: Vec::new() })
    }

    /// The identity tangle on `n` strands.
    pub fn identity(n: usize) -> Self {
        SlicedTangle { bottom: n, slices: Vec::new(), widths: vec![n], slots: Vec::new(), hints: Vec::new() }
    }

    /// The identity on `n` strands carrying one twist slot across all of them.
    pub fn slot(n: usize) -> Self {
        let mut t = Self::identity(n);
        if n > 0 {
            t.slots.push(Slot { level: 0, pos: 0, width: n });
        }
        t
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        *self.widths.last().unwrap()
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Width of level `l` (0 = bottom boundary).
    pub fn width(&self, level: usize) -> usize {
        self.widths[level]
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn max_width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    pub fn is_closed(&self) -> bool {
        self.bottom == 0 && self.top() == 0
    }

    pub fn crossing_count(&self) -> usize {
        self.slices.iter().filter(|s| s.is_crossing()).count()
    }

    pub fn with_hints(mut self, hints: Vec<Hint>) -> Self {
        self.hints = hints;
        self
    }

    pub fn without_slots(mut self) -> Self {
        self.slots.clear();
        self
    }

    /// Stack `upper` on top of `self`.
    pub fn compose(&self, upper: &SlicedTangle) -> Result<Self> {
        if self.top() != upper.bottom {
            return Err(Error::Width(format!(
                "cannot stack a tangle with bottom {} on one with top {}",
                upper.bottom,
                self.top()
            )));
        }
        let off = self.len();
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&upper.slices);
        let mut t = SlicedTangle::new(self.bottom, slices)?;
        t.slots = self.slots.clone();
        t.slots.extend(upper.slots.iter().map(|s| Slot { level: s.level + off, ..*s }));
        t.hints = self.hints.clone();
        t.hints.extend(upper.hints.iter().map(|h| Hint { level: h.level + off, ..*h }));
        Ok(t)
    }

    /// Rotate the diagram by a half turn in the plane.
    pub fn rotated(&self) -> Self {
        let n = self.len();
        let slices: Vec<Slice> =
            (0..n).rev().map(|k| self.slices[k].rotated(self.widths[k])).collect();
        let mut t = SlicedTangle::new(self.top(), slices).expect("rotation preserves validity");
        t.slots = self
            .slots
            .iter()
            .map(|s| Slot { level: n - s.level, pos: self.widths[s.level] - s.pos - s.width, width: s.width })
            .collect();
        t.hints = self
            .hints
            .iter()
            .map(|h| Hint { level: n - h.level, pos: self.widths[h.level] - 1 - h.pos, up: !h.up })
            .collect();
        t
    }

    /// Mirror image: every crossing changes type.
    pub fn mirrored(&self) -> Self {
        let mut t = self.clone();
        for s in &mut t.slices {
            *s = s.mirrored();
        }
        t
    }

    /// Cap the top strands `i` and `i + 1` (1-based).
    pub fn cap_top(&self, i: usize) -> Result<Self> {
        let w = self.top();
        if i < 1 || i + 1 > w {
            return Err(Error::input(format!("cap index {i} outside 1..={}", w.saturating_sub(1))));
        }
        self.compose(&SlicedTangle::new(w, vec![Slice::Cap(i - 1)])?)
    }

    /// Cup the bottom strands `i` and `i + 1` (1-based).
    pub fn cup_bottom(&self, i: usize) -> Result<Self> {
        let w = self.bottom;
        if i < 1 || i + 1 > w {
            return Err(Error::input(format!("cup index {i} outside 1..={}", w.saturating_sub(1))));
        }
        SlicedTangle::new(w - 2, vec![Slice::Cup(i - 1)])?.compose(self)
    }

    /// Close a tangle with equal top and bottom by strands running down its right side.
    pub fn trace_closure(&self) -> Result<Self> {
        let b = self.bottom;
        if self.top() != b {
            return Err(Error::Width(format!("closure needs equal ends, got ({}, {b})", self.top())));
        }
        let cups = SlicedTangle::new(0, (0..b).map(Slice::Cup).collect())?;
        let caps = SlicedTangle::new(2 * b, (0..b).rev().map(Slice::Cap).collect())?;
        let mut mid = SlicedTangle::new(2 * b, self.slices.clone())?;
        mid.slots = self.slots.clone();
        mid.hints = self.hints.clone();
        cups.compose(&mid)?.compose(&caps)
    }

    /// Insert `insert` (a tangle on `width(level)` strands with equal ends) at `level`.
    /// Slots and hints on the same level stay below the insertion.
    pub fn insert_at(&self, level: usize, insert: &[Slice]) -> Result<Self> {
        let mut slices = self.slices[..level].to_vec();
        slices.extend_from_slice(insert);
        slices.extend_from_slice(&self.slices[level..]);
        let t = SlicedTangle::new(self.bottom, slices)?;
        if t.width(level + insert.len()) != self.width(level) {
            return Err(Error::Width("inserted piece changes the width".into()));
        }
        let shift = |l: usize| if l > level { l + insert.len() } else { l };
        let mut t = t;
        t.slots = self.slots.iter().map(|s| Slot { level: shift(s.level), ..*s }).collect();
        t.hints = self.hints.iter().map(|h| Hint { level: shift(h.level), ..*h }).collect();
        Ok(t)
    }

    /// Replace slice `k` by `repl`, which must have the same width change.
    pub fn replace_slice(&self, k: usize, repl: &[Slice]) -> Result<Self> {
        let mut slices = self.slices[..k].to_vec();
        slices.extend_from_slice(repl);
        slices.extend_from_slice(&self.slices[k + 1..]);
        let t = SlicedTangle::new(self.bottom, slices)?;
        if t.top() != self.top() {
            return Err(Error::Width("replacement changes the width".into()));
        }
        let grow = repl.len() as isize - 1;
        let shift = |l: usize| if l > k { (l as isize + grow) as usize } else { l };
        let mut t = t;
        t.slots = self.slots.iter().map(|s| Slot { level: shift(s.level), ..*s }).collect();
        t.hints = self.hints.iter().map(|h| Hint { level: shift(h.level), ..*h }).collect();
        Ok(t)
    }

    /// Canonical text form: header lines then one slice per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.bottom != 0 {
            out.push_str(&format!("bottom {}\n", self.bottom));
        }
        for h in &self.hints {
            out.push_str(&format!("orient {} {} {}\n", h.level, h.pos, if h.up { "up" } else { "down" }));
        }
        for s in &self.slots {
            out.push_str(&format!("slot {} {} {}\n", s.level, s.pos, s.width));
        }
        for s in &self.slices {
            out.push_str(&format!("{s}\n"));
        }
        out
    }
}

/// Pair two tangles with matching ends: `z2` is turned by a half turn and set
/// on top of `z1` (tops meet), and the bottoms are joined around the right side.
pub fn pair(z1: &SlicedTangle, z2: &SlicedTangle) -> Result<SlicedTangle> {
    if z1.top() != z2.top() || z1.bottom() != z2.bottom() {
        return Err(Error::Width(format!(
            "pairing needs equal ends, got ({}, {}) and ({}, {})",
            z1.top(),
            z1.bottom(),
            z2.top(),
            z2.bottom()
        )));
    }
    z1.compose(&z2.rotated())?.trace_closure()
}

/// Level offset of the second tangle of [`pair`] inside the closed diagram,
/// together with the map from its `(level, pos)` to diagram coordinates.
pub struct PairLayout {
    z1_len: usize,
    z2_len: usize,
    bottom: usize,
    z2_widths: Vec<usize>,
}

impl PairLayout {
    pub fn new(z1: &SlicedTangle, z2: &SlicedTangle) -> Self {
        PairLayout { z1_len: z1.len(), z2_len: z2.len(), bottom: z1.bottom(), z2_widths: z2.widths().to_vec() }
    }

    /// Diagram level of level `l` of the first tangle.
    pub fn z1_level(&self, l: usize) -> usize {
        self.bottom + l
    }

    /// Diagram `(level, pos)` of segment `(l, x)` of the second tangle, and whether
    /// its direction is reversed by the half turn.
    pub fn z2_segment(&self, l: usize, x: usize) -> (usize, usize) {
        let level = self.bottom + self.z1_len + (self.z2_len - l);
        (level, self.z2_widths[l] - 1 - x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_are_checked() {
        assert!(SlicedTangle::new(0, vec![Slice::Cup(0), Slice::Pos(0), Slice::Cap(0)]).is_ok());
        assert!(SlicedTangle::new(0, vec![Slice::Pos(0)]).is_err());
        assert!(SlicedTangle::new(2, vec![Slice::Cap(1)]).is_err());
        assert!(SlicedTangle::new(2, vec![Slice::Cup(3)]).is_err());
    }

    #[test]
    fn rotation_is_an_involution() {
        let t = SlicedTangle::new(
            2,
            vec![Slice::Cup(1), Slice::Pos(0), Slice::Neg(2), Slice::Cap(0), Slice::Cup(2)],
        )
        .unwrap();
        assert_eq!(t.rotated().rotated().slices(), t.slices());
        assert_eq!(t.rotated().bottom(), t.top());
    }

    #[test]
    fn cap_and_cup_notation() {
        let i2 = SlicedTangle::identity(2);
        let c = i2.cap_top(1).unwrap();
        assert_eq!((c.top(), c.bottom()), (0, 2));
        let circle = c.cup_bottom(1).unwrap();
        assert!(circle.is_closed());
        assert!(i2.cap_top(2).is_err());
    }

    #[test]
    fn closure_nests_return_strands() {
        let t = SlicedTangle::new(2, vec![Slice::Pos(0)]).unwrap();
        let c = t.trace_closure().unwrap();
        assert_eq!(c.slices(), &[Slice::Cup(0), Slice::Cup(1), Slice::Pos(0), Slice::Cap(1), Slice::Cap(0)]);
    }

    #[test]
    fn slots_follow_rotation() {
        let t = SlicedTangle::identity(1).compose(&SlicedTangle::new(1, vec![Slice::Cup(1)]).unwrap()).unwrap();
        let mut t = t;
        t.slots.push(Slot { level: 1, pos: 1, width: 2 });
        let r = t.rotated();
        assert_eq!(r.slots, vec![Slot { level: 0, pos: 0, width: 2 }]);
    }
}
