//! Reidemeister moves on sliced tangles and the turnback pull through full twists.

use serde::{Deserialize, Serialize};

use super::braid::full_twists;
use super::cable::Handedness;
use super::diagram::LinkDiagram;
use super::geometry::Geometry;
use super::slice::{pair, Hint, PairLayout, Slice, SlicedTangle};
use crate::error::{Error, Result};

/// A recorded move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    R1 { level: usize, pos: usize, positive_type: bool },
    R2 { level: usize, pos: usize },
    R3 { slice: usize },
}

/// Add a curl on strand `pos` just above `level`. `positive_type` picks the
/// crossing slice used.
pub fn r1(t: &SlicedTangle, level: usize, pos: usize, positive_type: bool) -> Result<SlicedTangle> {
    if level > t.len() || pos >= t.width(level) {
        return Err(Error::input(format!("no strand at ({level}, {pos})")));
    }
    let x = if positive_type { Slice::Pos(pos) } else { Slice::Neg(pos) };
    t.insert_at(level, &[Slice::Cup(pos + 1), x, Slice::Cap(pos + 1)])
}

/// Add a cancelling pair of crossings between strands `pos` and `pos + 1`.
pub fn r2(t: &SlicedTangle, level: usize, pos: usize) -> Result<SlicedTangle> {
    if level > t.len() || pos + 1 >= t.width(level) {
        return Err(Error::input(format!("no strand pair at ({level}, {pos})")));
    }
    t.insert_at(level, &[Slice::Pos(pos), Slice::Neg(pos)])
}

/// Replace the triple at slices `k..k + 3` of the form `a(p) b(p+1) c(p)`
/// (or with `p` and `p + 1` exchanged) by the other side of the third move.
/// The three crossings must be of a type that admits the move.
pub fn r3(t: &SlicedTangle, k: usize) -> Result<SlicedTangle> {
    let s = t.slices();
    if k + 3 > s.len() {
        return Err(Error::input("no crossing triple there"));
    }
    let (a, b, c) = (s[k], s[k + 1], s[k + 2]);
    if !(a.is_crossing() && b.is_crossing() && c.is_crossing()) {
        return Err(Error::input("third move needs three crossings"));
    }
    let (p, q) = (a.pos(), b.pos());
    if c.pos() != p || (q != p + 1 && q + 1 != p) {
        return Err(Error::input("crossings are not in a third-move pattern"));
    }
    // Braid relation a_p b_q c_p = c_q b_p a_q: holds when all three share a
    // type, or when the outer two differ (a conjugation).
    let same = |x: Slice, y: Slice| matches!((x, y), (Slice::Pos(_), Slice::Pos(_)) | (Slice::Neg(_), Slice::Neg(_)));
    if !((same(a, b) && same(b, c)) || !same(a, c)) {
        return Err(Error::input("crossing types do not allow the third move"));
    }
    let mut slices = s.to_vec();
    slices[k..k + 3].copy_from_slice(&[c.with_pos(q), b.with_pos(p), a.with_pos(q)]);
    let mut out = SlicedTangle::new(t.bottom(), slices)?;
    out.slots = t.slots.clone();
    out.hints = t.hints.clone();
    Ok(out)
}

/// Result of pulling a top turnback through full twists.
#[derive(Clone, Debug)]
pub struct TurnbackPull {
    /// `<(T_n^{±k})^{∩i}, Z>`.
    pub before: LinkDiagram,
    /// `<T_{n-2}^{±k}, Z_{∪ n-i}>` oriented to match `before` on `Z`.
    pub after: LinkDiagram,
    /// Moves tallied by type: first moves and second moves.
    pub r1: usize,
    pub r2: usize,
}

impl TurnbackPull {
    pub fn crossing_drop(&self) -> usize {
        self.before.crossing_count() - self.after.crossing_count()
    }
}

/// Build both sides of the turnback pull for a `(n, n-2)` tangle `z`
/// (bottom `n`, top `n - 2`). The twist region is slices `n..n + k n (n-1)`
/// of `before` and `n - 2..` of `after`.
pub fn pull_turnback(n: usize, k: usize, h: Handedness, i: usize, z: &SlicedTangle) -> Result<TurnbackPull> {
    if n < 2 {
        return Err(Error::input("turnback pull needs n >= 2"));
    }
    if z.bottom() != n || z.top() != n - 2 {
        return Err(Error::Width(format!(
            "Z must have {n} strands at the bottom and {} at the top, got ({}, {})",
            n - 2,
            z.bottom(),
            z.top()
        )));
    }
    let kk = k as i64 * h.sign();
    let capped = full_twists(n, kk).to_tangle().cap_top(i)?;
    let before = LinkDiagram::new(pair(&capped, &z.clone().with_hints(Vec::new()))?)?;
    let z2 = z.cup_bottom(n - i)?;
    let small = full_twists(n - 2, kk).to_tangle();
    let after_t = pair(&small, &z2)?;

    // Orientation transfer through the segments of Z, which appear in both.
    let la = PairLayout::new(&capped, z);
    let lb = PairLayout::new(&small, &z2);
    let ga = before.geometry();
    let gb = Geometry::new(&after_t);
    let mut hints: Vec<Hint> = Vec::new();
    let mut seen = vec![false; gb.components.len()];
    for l in 0..=z.len() {
        for x in 0..z.width(l) {
            let (la_l, la_x) = la.z2_segment(l, x);
            let (lb_l, lb_x) = lb.z2_segment(l + 1, x);
            let c = gb.comp_of[gb.seg(lb_l, lb_x)];
            if !seen[c] {
                seen[c] = true;
                hints.push(Hint { level: lb_l, pos: lb_x, up: before.is_up(ga.seg(la_l, la_x)) });
            }
        }
    }
    let after = LinkDiagram::new(after_t.with_hints(hints))?;
    Ok(TurnbackPull { before, after, r1: 2 * k, r2: (2 * n - 4) * k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::braid::BraidWord;

    #[test]
    fn moves_keep_components() {
        let t = BraidWord::new(3, vec![1, 2, 1]).unwrap().to_tangle().trace_closure().unwrap();
        let d = LinkDiagram::new(t.clone()).unwrap();
        let a = LinkDiagram::new(r1(&t, 4, 1, true).unwrap()).unwrap();
        assert_eq!(a.component_count(), d.component_count());
        assert_eq!(a.crossing_count(), 4);
        let b = LinkDiagram::new(r2(&t, 4, 1).unwrap()).unwrap();
        assert_eq!(b.crossing_signs().0 - d.crossing_signs().0, 1);
        let c = r3(&t, 3).unwrap();
        assert_eq!(c.slices()[3..6], [Slice::Pos(1), Slice::Pos(0), Slice::Pos(1)]);
        assert!(r3(&t, 0).is_err());
    }

    #[test]
    fn pull_drops_crossings() {
        // Z: three strands capped on the right, then one crossing.
        let z = SlicedTangle::new(3, vec![Slice::Pos(0), Slice::Cap(1)]).unwrap();
        let p = pull_turnback(3, 2, Handedness::Right, 1, &z).unwrap();
        assert_eq!(p.crossing_drop(), 2 * (4 * 3 - 6));
        assert_eq!(p.r1 + p.r2, 2 * 4);
        assert_eq!(p.before.component_count(), p.after.component_count());
    }
}
